use stochpot::geometry::{Domain, Point};
use stochpot::harmonic::BoundaryData;
use stochpot::mc::with_threads;
use stochpot::wos::{first_passage_stats, wos_laplace, wos_poisson, write_wos_csv, WalkConfig};
use stochpot::Error;

fn cfg(seed: u64) -> WalkConfig {
    WalkConfig { n_walkers: 4000, seed, ..Default::default() }
}

#[test]
fn shifted_ball_and_disc_extensions() {
    let c = [1.0, -2.0, 0.5];
    let ball = Domain::Ball { n: 3, radius: 2.0, center: c };
    let g = BoundaryData::Cos(2);
    let x = [1.4, -1.5, 0.9];
    let rel = [(x[0] - c[0]) / 2.0, (x[1] - c[1]) / 2.0, (x[2] - c[2]) / 2.0];
    let r = wos_laplace(&ball, &g, &x, &cfg(1)).unwrap();
    assert!(r.estimate.within(g.exact_extension(&rel).unwrap(), 4.0), "{:?}", r.estimate);

    let disc = Domain::Disc { radius: 0.5, center: [0.2, 0.0, 0.0] };
    let s = BoundaryData::Sin(1);
    let r = wos_laplace(&disc, &s, &[0.3, 0.2, 0.0], &cfg(2)).unwrap();
    assert!(r.estimate.within(0.4, 4.0), "{:?}", r.estimate);
}

#[test]
fn step_data_at_center() {
    let r = wos_laplace(&Domain::unit_disc(), &BoundaryData::Step { lo: 0.0, hi: 1.0 }, &[0.0; 3], &cfg(3)).unwrap();
    assert!(r.estimate.within(0.5, 4.0));
}

#[test]
fn poisson_with_varying_source() {
    // psi = x^3 - 3 x y^2 + x^2 has lap psi = 2 in the plane
    let psi = |p: &Point| p[0].powi(3) - 3.0 * p[0] * p[1] * p[1] + p[0] * p[0];
    let g = BoundaryData::Custom(std::sync::Arc::new(move |u: &Point| psi(u)));
    let x = [0.3, -0.4, 0.0];
    let r = wos_poisson(&Domain::unit_disc(), &|_: &Point| 2.0, &g, &x, &cfg(4)).unwrap();
    assert!(r.estimate.within(psi(&x), 4.0), "{:?} vs {}", r.estimate, psi(&x));
}

#[test]
fn results_depend_only_on_seed() {
    let g = BoundaryData::ZDir;
    let x = [0.1, 0.2, 0.3];
    let a = with_threads(1, || wos_laplace(&Domain::ball(3, 1.0), &g, &x, &cfg(5)).unwrap());
    let b = with_threads(3, || wos_laplace(&Domain::ball(3, 1.0), &g, &x, &cfg(5)).unwrap());
    let c = wos_laplace(&Domain::ball(3, 1.0), &g, &x, &cfg(6)).unwrap();
    assert_eq!(a, b);
    assert_ne!(a.estimate.mean, c.estimate.mean);
}

#[test]
fn passage_statistics() {
    let s = first_passage_stats(&Domain::ball(3, 1.0), &[0.0; 3], &cfg(7)).unwrap();
    assert_eq!(s.histogram.iter().sum::<usize>(), 4000);
    // the first jump from the center lands on the sphere
    assert_eq!(s.histogram[1], 4000);
    let t = first_passage_stats(&Domain::ball(3, 1.0), &[0.5, 0.0, 0.0], &cfg(7)).unwrap();
    assert!(t.mean_steps > 1.0 && t.converged_fraction == 1.0);
    // steps grow like log(1/epsilon)
    let coarse = WalkConfig { epsilon_shell: Some(1e-2), ..cfg(8) };
    let fine = WalkConfig { epsilon_shell: Some(1e-5), ..cfg(8) };
    let a = first_passage_stats(&Domain::ball(3, 1.0), &[0.5, 0.0, 0.0], &coarse).unwrap().mean_steps;
    let b = first_passage_stats(&Domain::ball(3, 1.0), &[0.5, 0.0, 0.0], &fine).unwrap().mean_steps;
    assert!(b > a + 3.0, "{a} {b}");
}

#[test]
fn truncation_is_reported() {
    let c = WalkConfig { max_steps: 2, epsilon_shell: Some(1e-6), ..cfg(9) };
    let r = wos_laplace(&Domain::ball(3, 1.0), &BoundaryData::ZDir, &[0.5, 0.0, 0.0], &c).unwrap();
    assert!(r.truncated > 0);
    assert!(r.warning.as_deref().unwrap().starts_with("nonconvergence"));
}

#[test]
fn invalid_requests() {
    let g = BoundaryData::ZDir;
    let shell = Domain::Shell { n: 3, r_inner: 0.5, r_outer: 1.0, center: [0.0; 3] };
    assert!(matches!(wos_laplace(&shell, &g, &[0.7, 0.0, 0.0], &cfg(0)), Err(Error::UnsupportedGeometry(_))));
    assert!(matches!(wos_laplace(&Domain::ball(3, 1.0), &g, &[2.0, 0.0, 0.0], &cfg(0)), Err(Error::OutOfDomain(_))));
    let few = WalkConfig { n_walkers: 10, ..cfg(0) };
    assert!(matches!(wos_laplace(&Domain::ball(3, 1.0), &g, &[0.0; 3], &few), Err(Error::InvalidArgument(_))));
    let neg = WalkConfig { epsilon_shell: Some(-1.0), ..cfg(0) };
    assert!(wos_laplace(&Domain::ball(3, 1.0), &g, &[0.0; 3], &neg).is_err());
}

#[test]
fn csv_rows() {
    let x = [0.0, 0.0, 0.5];
    let r = wos_laplace(&Domain::ball(3, 1.0), &BoundaryData::ZDir, &x, &cfg(10)).unwrap();
    let mut buf = Vec::new();
    write_wos_csv(&[(x, r)], 3, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "x,y,z,estimate,stderr,n_walkers,mean_steps");
    assert!(lines.next().unwrap().starts_with("0,0,0.5,"));
}
