//! Command-line front end: `verify`, `solve` and `sample`.
//!
//! Settings come from built-in defaults, then an optional `key = value` config
//! file, then flags. `--dump-config` prints the effective settings in the same
//! file format, so a dumped file replays the run.

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{build_spectral_grid, from_polar, to_polar, Domain, MeasureKind, Point};
use crate::grf::{admissibility_report, sample_field, sampler_fidelity, CovKernel};
use crate::harmonic::{
    ball_poisson_eval, classical_suite, disc_poisson_eval, BoundaryData, HarmonicFn, Part, DEFAULT_DISC_QUAD,
};
use crate::mc::{with_threads, worker_count};
use crate::potentials::RieszSpec;
use crate::report::Report;
use crate::stochastic::*;
use crate::wos::{wos_laplace, WalkConfig};

/// Identifiers accepted by `verify`, in the order `verify all` runs them.
pub const VERIFY_IDS: [&str; 14] = [
    "kolmogorov-kernels",
    "sampler-fidelity",
    "classical-estimates",
    "mvp-stochastic",
    "harnack-stochastic",
    "line-integral",
    "sadei",
    "cacciopolli-stochastic",
    "bochner-stochastic",
    "turbulence",
    "riesz-moments",
    "newton-density",
    "noisy-disc",
    "noisy-ball",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    fn ext(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SolveKind {
    Disc,
    Ball,
    Wos,
}

impl SolveKind {
    fn name(self) -> &'static str {
        match self {
            SolveKind::Disc => "disc",
            SolveKind::Ball => "ball",
            SolveKind::Wos => "wos",
        }
    }
}

/// Effective settings of one run. `None` fields fall back to per-operation defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// `verify`, `solve` or `sample`.
    pub command: String,
    /// Verification id or solver kind.
    pub target: String,
    /// `disc` or `ball`, for `solve wos` and `sample`.
    pub domain: String,
    /// `gaussian`, `exponential`, `power-law` or `white`.
    pub kernel: String,
    pub base: Option<String>,
    pub g: Option<String>,
    pub lambda: f64,
    pub alpha: f64,
    pub xi: f64,
    pub eta: f64,
    pub orders: Vec<u32>,
    pub n_samples: Option<usize>,
    pub seed: u64,
    pub resolution: Option<usize>,
    /// Evaluation points for `solve`.
    pub points: Vec<Point>,
    /// Output directory.
    pub out: PathBuf,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            command: "verify".into(),
            target: "all".into(),
            domain: "ball".into(),
            kernel: "gaussian".into(),
            base: None,
            g: None,
            lambda: 1.0,
            alpha: 1.0,
            xi: 0.5,
            eta: 0.5,
            orders: vec![2, 4],
            n_samples: None,
            seed: 0,
            resolution: None,
            points: Vec::new(),
            out: PathBuf::from("."),
            format: Format::Csv,
        }
    }
}

fn parse_point(s: &str) -> Result<Point> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| Error::Config(format!("bad point '{s}'"))))
        .collect::<Result<_>>()?;
    match v[..] {
        [x, y] => Ok([x, y, 0.0]),
        [x, y, z] => Ok([x, y, z]),
        _ => Err(Error::Config(format!("point '{s}' needs 2 or 3 coordinates"))),
    }
}

fn opt_str(v: &str) -> Option<String> {
    (v != "auto").then(|| v.to_string())
}

impl RunConfig {
    /// Apply one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let bad = || Error::Config(format!("bad value '{value}' for {key}"));
        let num = || value.parse::<f64>().map_err(|_| bad());
        let opt_usize = || -> Result<Option<usize>> {
            if value == "auto" {
                Ok(None)
            } else {
                value.parse().map(Some).map_err(|_| bad())
            }
        };
        match key {
            "command" => self.command = value.into(),
            "target" => self.target = value.into(),
            "domain" => self.domain = value.into(),
            "kernel" => self.kernel = value.into(),
            "base" => self.base = opt_str(value),
            "g" => self.g = opt_str(value),
            "lambda" => self.lambda = num()?,
            "alpha" => self.alpha = num()?,
            "xi" => self.xi = num()?,
            "eta" => self.eta = num()?,
            "orders" => {
                self.orders = value.split(',').map(|t| t.trim().parse().map_err(|_| bad())).collect::<Result<_>>()?
            }
            "samples" => self.n_samples = opt_usize()?,
            "seed" => self.seed = value.parse().map_err(|_| bad())?,
            "resolution" => self.resolution = opt_usize()?,
            "points" => {
                self.points =
                    value.split(';').filter(|t| !t.trim().is_empty()).map(parse_point).collect::<Result<_>>()?
            }
            "out" => self.out = PathBuf::from(value),
            "format" => self.format = Format::from_str(value, true).map_err(|_| bad())?,
            _ => return Err(Error::Config(format!("unknown key '{key}'"))),
        }
        Ok(())
    }

    /// Parse a config file body onto the defaults.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = RunConfig::default();
        cfg.apply(text)?;
        Ok(cfg)
    }

    pub fn apply(&mut self, text: &str) -> Result<()> {
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) =
                line.split_once('=').ok_or_else(|| Error::Config(format!("line {}: expected key = value", i + 1)))?;
            self.set(k.trim(), v.trim())?;
        }
        Ok(())
    }

    /// The settings as a config file body.
    pub fn to_config_string(&self) -> String {
        let o = |v: &Option<String>| v.clone().unwrap_or_else(|| "auto".into());
        let ou = |v: Option<usize>| v.map_or_else(|| "auto".into(), |n| n.to_string());
        let orders: Vec<String> = self.orders.iter().map(u32::to_string).collect();
        let points: Vec<String> =
            self.points.iter().map(|p| format!("{:?},{:?},{:?}", p[0], p[1], p[2])).collect();
        format!(
            "command = {}\ntarget = {}\ndomain = {}\nkernel = {}\nbase = {}\ng = {}\nlambda = {:?}\nalpha = {:?}\nxi = {:?}\neta = {:?}\norders = {}\nsamples = {}\nseed = {}\nresolution = {}\npoints = {}\nout = {}\nformat = {}\n",
            self.command,
            self.target,
            self.domain,
            self.kernel,
            o(&self.base),
            o(&self.g),
            self.lambda,
            self.alpha,
            self.xi,
            self.eta,
            orders.join(","),
            ou(self.n_samples),
            self.seed,
            ou(self.resolution),
            points.join(";"),
            self.out.display(),
            self.format.ext(),
        )
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return Err(Error::Config(format!("lambda must be >= 0, got {}", self.lambda)));
        }
        for (name, v) in [("alpha", self.alpha), ("xi", self.xi), ("eta", self.eta)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("{name} must be > 0, got {v}")));
            }
        }
        if self.orders.is_empty() || self.orders.contains(&0) {
            return Err(Error::Config("orders must be a non-empty list of positive integers".into()));
        }
        if self.n_samples.is_some_and(|n| n < 2) {
            return Err(Error::Config("samples must be at least 2".into()));
        }
        if self.resolution.is_some_and(|n| n < 2) {
            return Err(Error::Config("resolution must be at least 2".into()));
        }
        Ok(())
    }

    pub fn kernel(&self) -> Result<CovKernel> {
        match self.kernel.as_str() {
            "gaussian" => Ok(CovKernel::GaussianCorr { alpha: self.alpha, xi: self.xi }),
            "exponential" => Ok(CovKernel::Exponential { alpha: self.alpha, xi: self.xi }),
            "power-law" => Ok(CovKernel::PowerLaw { xi: self.xi, p: 1.0 }),
            "white" => Ok(CovKernel::WhiteNoise),
            k => Err(Error::Config(format!("unknown kernel '{k}'"))),
        }
    }

    fn samples(&self, default: usize) -> usize {
        self.n_samples.unwrap_or(default)
    }

    fn order(&self, default: usize) -> usize {
        self.resolution.unwrap_or(default)
    }

    fn base_or(&self, default: &str) -> Result<HarmonicFn> {
        parse_base(self.base.as_deref().unwrap_or(default))
    }

    fn g_or(&self, default: &str) -> Result<BoundaryData> {
        self.g.as_deref().unwrap_or(default).parse()
    }

    /// Orders with 1 prepended.
    fn orders_with_mean(&self) -> Vec<u32> {
        let mut v = vec![1];
        v.extend(self.orders.iter().filter(|&&q| q != 1));
        v
    }
}

/// Base-function presets: `poly2`, `poly3`, `im2`, `linear`, `flow`, `radial`, `const:C`.
pub fn parse_base(s: &str) -> Result<HarmonicFn> {
    Ok(match s {
        "poly2" => HarmonicFn::poly(2, Part::Real),
        "poly3" => HarmonicFn::poly(3, Part::Real),
        "im2" => HarmonicFn::poly(2, Part::Imag),
        "linear" => HarmonicFn::linear([0.3, 0.0, 0.0], 1.0),
        "flow" => HarmonicFn::FlowPastSphere { u: 1.0, r: 1.0 },
        "radial" => HarmonicFn::Radial3D { c1: 1.0, c2: 0.0, center: [0.0; 3] },
        _ => match s.strip_prefix("const:") {
            Some(c) => HarmonicFn::constant(c.parse().map_err(|_| Error::Config(format!("bad constant '{c}'")))?),
            None => return Err(Error::Config(format!("unknown base preset '{s}'"))),
        },
    })
}

// distinct stream per operation under one run seed (FNV-1a of the id)
fn op_seed(seed: u64, id: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in id.bytes() {
        h = (h ^ b as u64).wrapping_mul(0x0100_0000_01b3);
    }
    seed ^ h
}

/// Run one verification and return its report, with Monte Carlo rows judged at the
/// report's family-wise threshold.
pub fn verify(id: &str, cfg: &RunConfig) -> Result<Report> {
    let mut r = build_report(id, cfg)?;
    r.id = id.to_string();
    r.apply_familywise(crate::report::FAMILY_ALPHA);
    Ok(r)
}

/// The raw report for `id`, every Monte Carlo row judged at `Z_TOL`.
pub fn build_report(id: &str, cfg: &RunConfig) -> Result<Report> {
    let seed = op_seed(cfg.seed, id);
    let lam = cfg.lambda;
    match id {
        "kolmogorov-kernels" => Ok(admissibility_report()),
        "sampler-fidelity" => {
            let pts = [[0.0; 3], [0.3, 0.0, 0.0], [0.0, 0.5, 0.2]];
            sampler_fidelity(&cfg.kernel()?, &pts, cfg.samples(100_000), seed)
        }
        "classical-estimates" => classical_suite(20, seed),
        "mvp-stochastic" => {
            let field = PerturbedField::new(cfg.base_or("poly2")?, lam, cfg.kernel()?)?;
            let p = MvpParams { order: cfg.order(3), n_samples: cfg.samples(100_000), seed, ..Default::default() };
            let mut r = perturbed_mvp(&field, &p)?;
            let ball = Domain::ball(3, 1.0);
            let inner = build_spectral_grid(&ball, MeasureKind::Volume, 3)?;
            let bdry = build_spectral_grid(&ball, MeasureKind::Surface, 12)?;
            r.extend(averaged_max_principle(&field, &inner, &bdry, &cfg.orders_with_mean(), cfg.samples(20_000), seed ^ 1)?);
            Ok(r)
        }
        "harnack-stochastic" => {
            let field = PerturbedField::new(cfg.base_or("linear")?, lam, cfg.kernel()?)?;
            stochastic_harnack(&field, &[0.4, 0.2, 0.0], 1.0, 3, &cfg.orders_with_mean(), cfg.samples(100_000), seed)
        }
        "line-integral" => {
            let field = PerturbedField::new(cfg.base_or("poly2")?, lam, cfg.kernel()?)?;
            stochastic_line_integral(&field, &LineIntegralParams { n_samples: cfg.samples(20_000), seed, ..Default::default() })
        }
        "sadei" => {
            let field = PerturbedField::new(cfg.base_or("poly2")?, lam, cfg.kernel()?)?;
            sadei(&field, &SadeiParams { order: cfg.order(3), n_samples: cfg.samples(10_000), seed, ..Default::default() })
        }
        "cacciopolli-stochastic" => {
            let field = PerturbedField::new(cfg.base_or("linear")?, lam, cfg.kernel()?)?;
            let seeds: Vec<u64> = (0..10).map(|k| seed.wrapping_add(k)).collect();
            stochastic_cacciopolli(&field, [0.0; 3], 1.0, 3, cfg.order(3), &seeds, cfg.samples(10_000))
        }
        "bochner-stochastic" => {
            let field = PerturbedField::new(cfg.base_or("poly2")?, lam, cfg.kernel()?)?;
            stochastic_bochner(&field, &[0.3, 0.2, 0.1], 3, cfg.samples(100_000), seed)
        }
        "turbulence" => {
            let field = PerturbedField::new(cfg.base_or("flow")?, lam, cfg.kernel()?)?;
            let p = TurbulenceParams { order: cfg.order(3), n_samples: cfg.samples(100_000), seed, ..Default::default() };
            turbulent_flow_stats(&field, &p)
        }
        "riesz-moments" => {
            let grid = build_spectral_grid(&Domain::ball(3, 1.0), MeasureKind::Volume, cfg.order(4))?;
            let spec = RieszSpec::newtonian(1.0, grid)?;
            let p = RieszMomentParams { orders: cfg.orders.clone(), n_samples: cfg.samples(100_000), seed, ..Default::default() };
            stochastic_riesz_moments(&spec, lam, &cfg.kernel()?, &p)
        }
        "newton-density" => {
            let p = NewtonParams {
                lambda: lam,
                kernel: cfg.kernel()?,
                order: cfg.order(4),
                n_samples: cfg.samples(100_000),
                seed,
                ..Default::default()
            };
            noisy_density_newton(&p, &[[0.0, 0.0, 2.0], [0.0, 0.0, 4.0]], &cfg.orders)
        }
        "noisy-disc" => {
            let p = DiscNoiseParams {
                alpha: cfg.alpha,
                eta: cfg.eta,
                orders: cfg.orders.clone(),
                n_samples: cfg.samples(100_000),
                seed,
                ..Default::default()
            };
            noisy_boundary_disc(&cfg.g_or("cos2")?, lam, &p)
        }
        "noisy-ball" => {
            let p = BallNoiseParams {
                kernel: cfg.kernel()?,
                order: cfg.order(6),
                orders: cfg.orders.clone(),
                n_samples: cfg.samples(20_000),
                seed,
                ..Default::default()
            };
            noisy_boundary_ball(&cfg.g_or("zdir")?, lam, &p)
        }
        _ => Err(Error::Config(format!("unknown verification id '{id}'"))),
    }
}

/// Where `verify` writes the report for `id`.
pub fn report_path(cfg: &RunConfig, id: &str) -> PathBuf {
    cfg.out.join(format!("thm_{id}.{}", cfg.format.ext()))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    Ok(BufWriter::new(File::create(path)?))
}

fn write_report(cfg: &RunConfig, r: &Report) -> Result<PathBuf> {
    let path = report_path(cfg, &r.id);
    let mut w = create(&path)?;
    match cfg.format {
        Format::Csv => r.write_csv(&mut w)?,
        Format::Json => r.write_json(&mut w)?,
    }
    w.flush()?;
    Ok(path)
}

fn cmd_verify(cfg: &RunConfig) -> i32 {
    let ids: Vec<&str> = if cfg.target == "all" {
        VERIFY_IDS.to_vec()
    } else if VERIFY_IDS.contains(&cfg.target.as_str()) {
        vec![cfg.target.as_str()]
    } else {
        eprintln!("error: unknown verification id '{}'; known ids: all, {}", cfg.target, VERIFY_IDS.join(", "));
        return 2;
    };
    let mut code = 0;
    for id in ids {
        let result = verify(id, cfg).and_then(|r| {
            let path = write_report(cfg, &r)?;
            Ok((r, path))
        });
        match result {
            Ok((r, path)) => {
                let notes = r.rows.iter().filter(|x| matches!(x.verdict, crate::report::Verdict::Note { .. })).count();
                let fails = r.failures();
                println!(
                    "{id}: {} ({} rows, {notes} notes) -> {}",
                    if fails.is_empty() { "PASS" } else { "FAIL" },
                    r.rows.len(),
                    path.display()
                );
                for f in fails {
                    eprintln!("  FAIL {} oracle={:?} value={:?} se={:?}", f.statistic, f.oracle_value, f.mc_estimate, f.mc_stderr);
                    code = 1;
                }
            }
            Err(e) => {
                eprintln!("{id}: error: {e}");
                code = 1;
            }
        }
    }
    code
}

#[derive(Debug, Clone, Serialize)]
struct SolveRow {
    point: Point,
    value: Option<f64>,
    stderr: Option<f64>,
    n_walkers: Option<usize>,
    mean_steps: Option<f64>,
    error: Option<String>,
}

fn solve_rows(kind: SolveKind, cfg: &RunConfig) -> Result<Vec<SolveRow>> {
    let row = |point: Point, r: Result<(f64, Option<f64>, Option<usize>, Option<f64>)>| match r {
        Ok((v, se, nw, ms)) => SolveRow { point, value: Some(v), stderr: se, n_walkers: nw, mean_steps: ms, error: None },
        Err(e) => SolveRow { point, value: None, stderr: None, n_walkers: None, mean_steps: None, error: Some(e.to_string()) },
    };
    let pts = |default: Point| if cfg.points.is_empty() { vec![default] } else { cfg.points.clone() };
    Ok(match kind {
        SolveKind::Disc => {
            let g = cfg.g_or("cos1")?;
            pts([0.5, 0.0, 0.0])
                .into_iter()
                .map(|p| {
                    let [r, t] = to_polar(&p);
                    row(p, disc_poisson_eval(&g, 1.0, r, t, DEFAULT_DISC_QUAD).map(|v| (v, None, None, None)))
                })
                .collect()
        }
        SolveKind::Ball => {
            let g = cfg.g_or("zdir")?;
            let surf = build_spectral_grid(&Domain::ball(3, 1.0), MeasureKind::Surface, cfg.order(32))?;
            pts([0.0, 0.0, 0.5])
                .into_iter()
                .map(|p| row(p, ball_poisson_eval(&g, &p, 1.0, &[0.0; 3], &surf).map(|v| (v, None, None, None))))
                .collect()
        }
        SolveKind::Wos => {
            let (domain, default_g, default_x) = match cfg.domain.as_str() {
                "disc" => (Domain::unit_disc(), "cos1", [0.5, 0.0, 0.0]),
                "ball" => (Domain::ball(3, 1.0), "zdir", [0.0, 0.0, 0.5]),
                d => return Err(Error::Config(format!("walk-on-spheres domain must be disc or ball, got '{d}'"))),
            };
            let g = cfg.g_or(default_g)?;
            let wc = WalkConfig { n_walkers: cfg.samples(10_000), seed: op_seed(cfg.seed, "wos"), ..Default::default() };
            pts(default_x)
                .into_iter()
                .map(|p| {
                    let r = wos_laplace(&domain, &g, &p, &wc)
                        .map(|w| (w.estimate.mean, Some(w.estimate.stderr), Some(w.n_walkers), Some(w.mean_steps)));
                    row(p, r)
                })
                .collect()
        }
    })
}

fn write_solve(rows: &[SolveRow], cfg: &RunConfig, path: &Path) -> Result<()> {
    let mut w = create(path)?;
    match cfg.format {
        Format::Json => serde_json::to_writer_pretty(&mut w, rows).map_err(|e| Error::Io(e.to_string()))?,
        Format::Csv => {
            let f = |v: Option<f64>| v.map(|x| format!("{x:.15e}")).unwrap_or_default();
            writeln!(w, "x,y,z,value,stderr,n_walkers,mean_steps,status")?;
            for r in rows {
                let status = r.error.as_ref().map_or_else(|| "ok".to_string(), |e| format!("error: {}", e.replace(',', ";")));
                writeln!(
                    w,
                    "{:?},{:?},{:?},{},{},{},{},{}",
                    r.point[0],
                    r.point[1],
                    r.point[2],
                    f(r.value),
                    f(r.stderr),
                    r.n_walkers.map(|n| n.to_string()).unwrap_or_default(),
                    f(r.mean_steps),
                    status
                )?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

fn cmd_solve(cfg: &RunConfig) -> Result<i32> {
    let kind = SolveKind::from_str(&cfg.target, true).map_err(|_| Error::Config(format!("unknown solver '{}'", cfg.target)))?;
    let rows = solve_rows(kind, cfg)?;
    let path = cfg.out.join(format!("solve_{}.{}", kind.name(), cfg.format.ext()));
    write_solve(&rows, cfg, &path)?;
    for r in &rows {
        match (&r.value, &r.error) {
            (Some(v), _) => match r.stderr {
                Some(se) => println!("{:?} -> {v} +- {se}", r.point),
                None => println!("{:?} -> {v}", r.point),
            },
            (None, Some(e)) => eprintln!("{:?} -> error: {e}", r.point),
            _ => {}
        }
    }
    println!("wrote {}", path.display());
    Ok(if rows.iter().all(|r| r.error.is_some()) { 1 } else { 0 })
}

fn cmd_sample(cfg: &RunConfig) -> Result<i32> {
    let kernel = cfg.kernel()?;
    let order = cfg.order(16);
    let (domain, kind) = match cfg.domain.as_str() {
        "disc-boundary" | "circle" => (Domain::unit_disc(), MeasureKind::Curve),
        "disc" => (Domain::unit_disc(), MeasureKind::Volume),
        "ball" => (Domain::ball(3, 1.0), MeasureKind::Volume),
        "sphere" => (Domain::ball(3, 1.0), MeasureKind::Surface),
        d => return Err(Error::Config(format!("sample domain must be disc-boundary, disc, ball or sphere, got '{d}'"))),
    };
    let grid = build_spectral_grid(&domain, kind, order)?;
    let mut s = sample_field(&kernel, &grid, cfg.seed)?;
    for v in &mut s.values {
        *v *= cfg.lambda;
    }
    let path = cfg.out.join(format!("sample.{}", cfg.format.ext()));
    let mut w = create(&path)?;
    match cfg.format {
        Format::Csv => s.write_csv(&mut w, domain.dim())?,
        Format::Json => {
            let body = serde_json::json!({
                "seed": s.seed,
                "kernel": s.kernel.to_string(),
                "lambda": cfg.lambda,
                "points": s.points,
                "values": s.values,
            });
            serde_json::to_writer_pretty(&mut w, &body).map_err(|e| Error::Io(e.to_string()))?;
        }
    }
    w.flush()?;
    println!("wrote {} ({} nodes)", path.display(), s.len());
    Ok(0)
}

#[derive(Parser, Debug)]
#[command(name = "stochpot", version, about = "Stochastic potential theory: verification suites, Dirichlet solvers and field samples")]
struct Cli {
    /// key = value config file; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Monte Carlo samples (walkers for `solve wos`), overriding every default.
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Grid order, overriding per-operation defaults.
    #[arg(long, global = true)]
    resolution: Option<usize>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[arg(long, global = true)]
    lambda: Option<f64>,
    #[arg(long, global = true)]
    alpha: Option<f64>,
    #[arg(long, global = true)]
    xi: Option<f64>,
    #[arg(long, global = true)]
    eta: Option<f64>,
    /// Print the effective config and exit.
    #[arg(long, global = true)]
    dump_config: bool,
    #[command(subcommand)]
    cmd: Option<Cmd>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Run a verification suite (or `all`) and write thm_<id> reports.
    Verify { id: String },
    /// Evaluate a Dirichlet solution at points.
    Solve {
        #[arg(value_enum)]
        kind: SolveKind,
        /// Boundary preset, e.g. cos1, sin3, zdir, const:3, step.
        #[arg(long)]
        g: Option<String>,
        /// `disc` or `ball` for walk-on-spheres.
        #[arg(long)]
        domain: Option<String>,
        /// Polar radii, paired with --theta.
        #[arg(long, allow_negative_numbers = true)]
        r: Vec<f64>,
        #[arg(long, allow_negative_numbers = true)]
        theta: Vec<f64>,
        /// Cartesian point `x,y[,z]`; repeatable.
        #[arg(long, allow_hyphen_values = true)]
        x: Vec<String>,
    },
    /// Dump one field realization on a grid.
    Sample {
        /// disc-boundary, disc, ball or sphere.
        #[arg(long)]
        domain: Option<String>,
        /// gaussian, exponential, power-law or white.
        #[arg(long)]
        kernel: Option<String>,
    },
}

fn build_config(cli: Cli) -> Result<(RunConfig, bool)> {
    let mut cfg = RunConfig::default();
    if let Some(p) = &cli.config {
        let text = fs::read_to_string(p).map_err(|e| Error::Config(format!("{}: {e}", p.display())))?;
        cfg.apply(&text)?;
    }
    if let Some(v) = cli.seed {
        cfg.seed = v;
    }
    if let Some(v) = cli.samples {
        cfg.n_samples = Some(v);
    }
    if let Some(v) = cli.resolution {
        cfg.resolution = Some(v);
    }
    if let Some(v) = cli.out {
        cfg.out = v;
    }
    if let Some(v) = cli.format {
        cfg.format = v;
    }
    for (v, slot) in [(cli.lambda, &mut cfg.lambda), (cli.alpha, &mut cfg.alpha), (cli.xi, &mut cfg.xi), (cli.eta, &mut cfg.eta)] {
        if let Some(v) = v {
            *slot = v;
        }
    }
    match cli.cmd {
        Some(Cmd::Verify { id }) => {
            cfg.command = "verify".into();
            cfg.target = id;
        }
        Some(Cmd::Solve { kind, g, domain, r, theta, x }) => {
            cfg.command = "solve".into();
            cfg.target = kind.name().into();
            if g.is_some() {
                cfg.g = g;
            }
            if let Some(d) = domain {
                cfg.domain = d;
            }
            if r.len() != theta.len() {
                return Err(Error::Config("--r and --theta must be given the same number of times".into()));
            }
            let mut pts: Vec<Point> = r.iter().zip(&theta).map(|(r, t)| from_polar(*r, *t)).collect();
            for s in &x {
                pts.push(parse_point(s)?);
            }
            if !pts.is_empty() {
                cfg.points = pts;
            }
        }
        Some(Cmd::Sample { domain, kernel }) => {
            cfg.command = "sample".into();
            cfg.target = "field".into();
            if let Some(d) = domain {
                cfg.domain = d;
            }
            if let Some(k) = kernel {
                cfg.kernel = k;
            }
        }
        None => {}
    }
    cfg.validate()?;
    Ok((cfg, cli.dump_config))
}

/// Execute the program on `args` (including the program name) and return the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let (cfg, dump) = match build_config(cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    if dump {
        print!("{}", cfg.to_config_string());
        return 0;
    }
    with_threads(worker_count(), || match cfg.command.as_str() {
        "verify" => cmd_verify(&cfg),
        "solve" => report_code(cmd_solve(&cfg)),
        "sample" => report_code(cmd_sample(&cfg)),
        c => {
            eprintln!("error: unknown command '{c}'");
            2
        }
    })
}

fn report_code(r: Result<i32>) -> i32 {
    match r {
        Ok(c) => c,
        Err(e @ Error::Config(_)) => {
            eprintln!("error: {e}");
            2
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
