//! Walk-on-spheres for Dirichlet problems on balls and discs.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{UnitCircle, UnitSphere};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{dist, Domain, Point};
use crate::harmonic::BoundaryData;
use crate::mc::{estimate, sample_rng, Estimate};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WalkConfig {
    /// Absolute absorption distance; `None` means `1e-3 R`.
    pub epsilon_shell: Option<f64>,
    pub max_steps: usize,
    pub n_walkers: usize,
    pub seed: u64,
}

impl Default for WalkConfig {
    fn default() -> Self {
        WalkConfig { epsilon_shell: None, max_steps: 10_000, n_walkers: 10_000, seed: 0 }
    }
}

impl WalkConfig {
    fn shell(&self, radius: f64) -> f64 {
        self.epsilon_shell.unwrap_or(1e-3 * radius)
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct WalkResult {
    pub estimate: Estimate,
    pub mean_steps: f64,
    pub n_walkers: usize,
    /// Walkers stopped by `max_steps`.
    pub truncated: usize,
    pub warning: Option<String>,
}

struct Ball {
    n: usize,
    radius: f64,
    center: Point,
}

fn ball_of(domain: &Domain) -> Result<Ball> {
    domain.validate()?;
    match *domain {
        Domain::Ball { n: n @ (2 | 3), radius, center } => Ok(Ball { n, radius, center }),
        Domain::Disc { radius, center } => Ok(Ball { n: 2, radius, center }),
        _ => Err(Error::UnsupportedGeometry(format!("walk-on-spheres on {domain}"))),
    }
}

fn check_start(b: &Ball, x: &Point, cfg: &WalkConfig) -> Result<()> {
    if cfg.n_walkers < 100 {
        return Err(Error::InvalidArgument(format!("need at least 100 walkers, got {}", cfg.n_walkers)));
    }
    let eps = cfg.shell(b.radius);
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument("absorption shell must be positive".into()));
    }
    let d = b.radius - dist(x, &b.center);
    if d <= eps {
        return Err(Error::OutOfDomain(format!("start point is within {eps:e} of the boundary or outside")));
    }
    Ok(())
}

// One walk; returns (exit direction, accumulated source term, steps, truncated).
fn walk(b: &Ball, x: &Point, eps: f64, max_steps: usize, rng: &mut ChaCha8Rng, f: Option<&dyn Fn(&Point) -> f64>) -> (Point, f64, usize, bool) {
    let mut p = *x;
    let mut acc = 0.0;
    let mut steps = 0;
    loop {
        let r = dist(&p, &b.center);
        let d = b.radius - r;
        if d < eps || steps >= max_steps {
            let s = if r > 0.0 { 1.0 / r } else { 0.0 };
            let u = [(p[0] - b.center[0]) * s, (p[1] - b.center[1]) * s, (p[2] - b.center[2]) * s];
            return (u, acc, steps, d >= eps);
        }
        if let Some(f) = f {
            acc -= f(&p) * d * d / (2.0 * b.n as f64);
        }
        let u: [f64; 3] = if b.n == 3 {
            rng.sample(UnitSphere)
        } else {
            let [a, c]: [f64; 2] = rng.sample(UnitCircle);
            [a, c, 0.0]
        };
        for i in 0..3 {
            p[i] += d * u[i];
        }
        steps += 1;
    }
}

fn run(domain: &Domain, f: Option<&(dyn Fn(&Point) -> f64 + Sync)>, g: &BoundaryData, x: &Point, cfg: &WalkConfig) -> Result<WalkResult> {
    let b = ball_of(domain)?;
    check_start(&b, x, cfg)?;
    let eps = cfg.shell(b.radius);
    let est = estimate(cfg.n_walkers, cfg.seed, 3, |rng, out| {
        let (u, acc, steps, trunc) = walk(&b, x, eps, cfg.max_steps, rng, f.map(|f| f as &dyn Fn(&Point) -> f64));
        out[0] = g.eval_direction(&u) + acc;
        out[1] = steps as f64;
        out[2] = if trunc { 1.0 } else { 0.0 };
    });
    let truncated = (est[2].mean * cfg.n_walkers as f64).round() as usize;
    let warning = (truncated * 100 > cfg.n_walkers)
        .then(|| format!("nonconvergence: {truncated} of {} walkers hit max_steps", cfg.n_walkers));
    Ok(WalkResult { estimate: est[0], mean_steps: est[1].mean, n_walkers: cfg.n_walkers, truncated, warning })
}

/// `psi(x) = E[g(exit)]` for `lap psi = 0`.
pub fn wos_laplace(domain: &Domain, g: &BoundaryData, x: &Point, cfg: &WalkConfig) -> Result<WalkResult> {
    run(domain, None, g, x, cfg)
}

/// `lap psi = f`, `psi = g` on the boundary; the source is weighted by `-d^2/(2n)` at each sphere center.
pub fn wos_poisson(
    domain: &Domain,
    f: &(dyn Fn(&Point) -> f64 + Sync),
    g: &BoundaryData,
    x: &Point,
    cfg: &WalkConfig,
) -> Result<WalkResult> {
    run(domain, Some(f), g, x, cfg)
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct PassageStats {
    pub mean_steps: f64,
    pub stderr_steps: f64,
    /// `histogram[k]` walkers absorbed after exactly `k` steps.
    pub histogram: Vec<usize>,
    pub converged_fraction: f64,
}

pub fn first_passage_stats(domain: &Domain, x: &Point, cfg: &WalkConfig) -> Result<PassageStats> {
    let b = ball_of(domain)?;
    check_start(&b, x, cfg)?;
    let eps = cfg.shell(b.radius);
    let steps: Vec<(usize, bool)> = (0..cfg.n_walkers)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(cfg.seed, i as u64);
            let (_, _, s, t) = walk(&b, x, eps, cfg.max_steps, &mut rng, None);
            (s, t)
        })
        .collect();
    let n = steps.len() as f64;
    let mean = steps.iter().map(|s| s.0 as f64).sum::<f64>() / n;
    let var = steps.iter().map(|s| (s.0 as f64 - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let top = steps.iter().map(|s| s.0).max().unwrap_or(0);
    let mut histogram = vec![0; top + 1];
    for s in &steps {
        histogram[s.0] += 1;
    }
    let converged = steps.iter().filter(|s| !s.1).count() as f64 / n;
    Ok(PassageStats { mean_steps: mean, stderr_steps: (var / n).sqrt(), histogram, converged_fraction: converged })
}

/// CSV rows `(coords..., estimate, stderr, n_walkers, mean_steps)`.
pub fn write_wos_csv<W: std::io::Write>(rows: &[(Point, WalkResult)], dim: usize, mut w: W) -> std::io::Result<()> {
    let cols = ["x", "y", "z"];
    writeln!(w, "{},estimate,stderr,n_walkers,mean_steps", cols[..dim].join(","))?;
    for (p, r) in rows {
        let c: Vec<String> = p[..dim].iter().map(|c| format!("{c}")).collect();
        writeln!(w, "{},{:.17e},{:.17e},{},{:.6}", c.join(","), r.estimate.mean, r.estimate.stderr, r.n_walkers, r.mean_steps)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_data_is_exact() {
        let cfg = WalkConfig { n_walkers: 200, ..Default::default() };
        let r = wos_laplace(&Domain::unit_disc(), &BoundaryData::Constant(2.5), &[0.3, 0.1, 0.0], &cfg).unwrap();
        assert_eq!(r.estimate.mean, 2.5);
        assert_eq!(r.estimate.stderr, 0.0);
    }

    #[test]
    fn rejects_boundary_start() {
        let cfg = WalkConfig::default();
        assert!(wos_laplace(&Domain::unit_disc(), &BoundaryData::Cos(1), &[1.0, 0.0, 0.0], &cfg).is_err());
    }
}
