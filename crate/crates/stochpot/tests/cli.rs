use std::fs;
use std::path::Path;
use std::process::Command;

use stochpot::cli::{report_path, run, verify, RunConfig, VERIFY_IDS};

fn run_in(dir: &Path, args: &[&str]) -> i32 {
    let mut v = vec!["stochpot".to_string(), "--out".into(), dir.display().to_string()];
    v.extend(args.iter().map(|s| s.to_string()));
    run(v)
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_stochpot"))
}

fn csv_column(text: &str, col: usize) -> Vec<f64> {
    text.lines().filter(|l| !l.starts_with('#')).skip(1).map(|l| l.split(',').nth(col).unwrap().parse().unwrap()).collect()
}

#[test]
fn verify_writes_reports_and_exit_codes() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(run_in(d.path(), &["--samples", "3000", "verify", "sampler-fidelity"]), 0);
    let text = fs::read_to_string(d.path().join("thm_sampler-fidelity.csv")).unwrap();
    assert!(text.starts_with("statistic,paper_value,oracle_value,mc_estimate,mc_stderr,n_samples,verdict,provenance\n"));
    assert!(text.contains("fourth_moment_printed_convention"));
    assert_eq!(run_in(d.path(), &["verify", "no-such-check"]), 2);
    assert_eq!(run_in(d.path(), &["--format", "json", "verify", "kolmogorov-kernels"]), 0);
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(d.path().join("thm_kolmogorov-kernels.json")).unwrap()).unwrap();
    assert_eq!(json["rows"].as_array().unwrap().len(), 4);
}

#[test]
fn bad_flags_and_config() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(run_in(d.path(), &["--lambda", "-1", "verify", "sadei"]), 2);
    assert_eq!(run_in(d.path(), &["--bogus"]), 2);
    let cfg = d.path().join("bad.conf");
    fs::write(&cfg, "kernel = gaussian\nnot a setting\n").unwrap();
    assert_eq!(run_in(d.path(), &["--config", cfg.to_str().unwrap(), "verify", "sadei"]), 2);
    assert!(RunConfig::parse("orders = 2,x").is_err());
    assert!(RunConfig::parse("colour = blue").is_err());
}

#[test]
fn config_round_trip() {
    let mut c = RunConfig::parse("seed = 9 # trailing comment\nsamples = 1234\npoints = 0.1,0.2;0.3,0.4,0.5\nformat = json\n").unwrap();
    assert_eq!(c.seed, 9);
    assert_eq!(c.points[0], [0.1, 0.2, 0.0]);
    c.lambda = 0.1 + 0.2;
    let again = RunConfig::parse(&c.to_config_string()).unwrap();
    assert_eq!(again, c);
}

#[test]
fn dumped_config_replays_byte_identical_reports() {
    let d = tempfile::tempdir().unwrap();
    let out = d.path().join("a");
    let dump = bin()
        .args(["--seed", "7", "--samples", "2000", "--lambda", "0.7", "--out"])
        .arg(&out)
        .args(["--dump-config", "verify", "line-integral"])
        .output()
        .unwrap();
    assert!(dump.status.success());
    let conf = d.path().join("run.conf");
    fs::write(&conf, &dump.stdout).unwrap();
    assert!(!out.exists(), "dump-config must not run anything");

    let first = bin().args(["--config"]).arg(&conf).args(["verify", "line-integral"]).output().unwrap();
    assert!(first.status.code().is_some());
    let a = fs::read(out.join("thm_line-integral.csv")).unwrap();
    fs::remove_dir_all(&out).unwrap();
    bin().args(["--config"]).arg(&conf).args(["verify", "line-integral"]).output().unwrap();
    assert_eq!(a, fs::read(out.join("thm_line-integral.csv")).unwrap());
}

#[test]
fn seed_changes_monte_carlo_rows_only() {
    let mut c = RunConfig { n_samples: Some(2000), ..Default::default() };
    let a = verify("riesz-moments", &c).unwrap();
    let b = verify("riesz-moments", &c).unwrap();
    assert_eq!(a, b);
    c.seed = 1;
    let e = verify("riesz-moments", &c).unwrap();
    assert_ne!(a.get("mean").mc_estimate, e.get("mean").mc_estimate);
    assert_eq!(a.get("mean").oracle_value, e.get("mean").oracle_value);
    assert!(a.find("familywise_z_threshold").unwrap().oracle_value.unwrap() >= 3.0);
    assert_eq!(report_path(&c, "sadei").file_name().unwrap(), "thm_sadei.csv");
    assert_eq!(VERIFY_IDS.len(), 14);
}

#[test]
fn solve_disc_ball_and_walks() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(run_in(d.path(), &["solve", "disc", "--g", "cos2", "--r", "0.5", "--theta", "0.3"]), 0);
    let text = fs::read_to_string(d.path().join("solve_disc.csv")).unwrap();
    assert!(text.starts_with("x,y,z,value,stderr,n_walkers,mean_steps,status\n"));
    let v = csv_column(&text, 3)[0];
    assert!((v - 0.25 * 0.6f64.cos()).abs() < 1e-12);

    assert_eq!(run_in(d.path(), &["solve", "ball", "--g", "zdir", "--x", "0,0,0.3", "--x", "0,0,2"]), 0);
    let text = fs::read_to_string(d.path().join("solve_ball.csv")).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert!(rows[0].ends_with(",ok"));
    assert!((rows[0].split(',').nth(3).unwrap().parse::<f64>().unwrap() - 0.3).abs() < 1e-10);
    assert!(rows[1].contains("error: out of domain"));

    assert_eq!(run_in(d.path(), &["--samples", "2000", "solve", "wos", "--domain", "disc", "--x", "0.5,0"]), 0);
    let text = fs::read_to_string(d.path().join("solve_wos.csv")).unwrap();
    let (v, se) = (csv_column(&text, 3)[0], csv_column(&text, 4)[0]);
    assert!((v - 0.5).abs() < 4.0 * se);

    assert_eq!(run_in(d.path(), &["solve", "disc", "--x", "3,0"]), 1);
    assert_eq!(run_in(d.path(), &["solve", "wos", "--domain", "torus"]), 2);
}

#[test]
fn sample_scales_with_lambda_and_rejects_white_noise() {
    let d1 = tempfile::tempdir().unwrap();
    let d2 = tempfile::tempdir().unwrap();
    assert_eq!(run_in(d1.path(), &["--seed", "5", "sample", "--domain", "circle"]), 0);
    assert_eq!(run_in(d2.path(), &["--seed", "5", "--lambda", "3", "sample", "--domain", "circle"]), 0);
    let a = csv_column(&fs::read_to_string(d1.path().join("sample.csv")).unwrap(), 2);
    let b = csv_column(&fs::read_to_string(d2.path().join("sample.csv")).unwrap(), 2);
    assert_eq!(a.len(), b.len());
    assert!(a.iter().zip(&b).all(|(x, y)| (3.0 * x - y).abs() <= 1e-12 * y.abs().max(1.0)));

    let out = bin().arg("--out").arg(d1.path()).args(["sample", "--kernel", "white"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Kolmogorov"));
    assert_eq!(run_in(d1.path(), &["--format", "json", "sample", "--domain", "sphere", "--kernel", "exponential"]), 0);
    let j: serde_json::Value = serde_json::from_str(&fs::read_to_string(d1.path().join("sample.json")).unwrap()).unwrap();
    assert_eq!(j["points"].as_array().unwrap().len(), j["values"].as_array().unwrap().len());
}
