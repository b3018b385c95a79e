//! Riesz and Newtonian potentials by quadrature, with closed forms on the ball.
//!
//! Convention: `psi(x) = int g(y) / |x - y|` is non-negative for `g >= 0`, and `lap psi = -4 pi g`.

use std::f64::consts::PI;
use std::io::Write;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{dist, norm, DomainGrid, Point};

/// Subsamples per axis inside a cell that is too close to the evaluation point.
pub const SINGULAR_SUBSAMPLES: usize = 8;

type Density = Arc<dyn Fn(&Point) -> f64 + Send + Sync>;

#[derive(Clone)]
pub struct RieszSpec {
    pub n: usize,
    /// Riesz order, `0 < a < n`.
    pub a: f64,
    pub g: Density,
    pub grid: DomainGrid,
    pub gamma: f64,
}

impl std::fmt::Debug for RieszSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RieszSpec")
            .field("n", &self.n)
            .field("a", &self.a)
            .field("gamma", &self.gamma)
            .field("grid", &self.grid.descriptor())
            .finish()
    }
}

impl RieszSpec {
    pub fn new(a: f64, g: impl Fn(&Point) -> f64 + Send + Sync + 'static, grid: DomainGrid) -> Result<Self> {
        let n = grid.dim();
        let s = RieszSpec { n, a, g: Arc::new(g), grid, gamma: 1.0 };
        s.validate()?;
        Ok(s)
    }

    /// Newtonian case `n = 3, a = 2` with constant density.
    pub fn newtonian(rho: f64, grid: DomainGrid) -> Result<Self> {
        Self::new(2.0, move |_| rho, grid)
    }

    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn exponent(&self) -> f64 {
        self.n as f64 - self.a
    }

    fn validate(&self) -> Result<()> {
        if !(self.a > 0.0 && self.a < self.n as f64) {
            return Err(Error::InvalidOrder { a: self.a, n: self.n });
        }
        Ok(())
    }

    /// Quadrature nodes and weights of `int w(y) h(y) / |x-y|^{n-a}` with the singular-cell rule applied.
    pub fn kernel_weights(&self, x: &Point) -> Vec<(Point, f64)> {
        let e = self.exponent();
        let n = self.n;
        let mut out = Vec::with_capacity(self.grid.len());
        let near = self.grid.cell_h.map(|h| (h, 0.5 * h * (n as f64).sqrt()));
        for (y, w) in self.grid.points.iter().zip(&self.grid.weights) {
            let d = dist(x, y);
            match near {
                Some((h, r)) if d <= r => {
                    let s = SINGULAR_SUBSAMPLES;
                    let m = s.pow(n as u32);
                    let ws = w / m as f64;
                    for k in 0..m {
                        let mut q = *y;
                        let mut idx = k;
                        for c in q.iter_mut().take(n) {
                            let i = idx % s;
                            idx /= s;
                            *c += ((i as f64 + 0.5) / s as f64 - 0.5) * h;
                        }
                        let dq = dist(x, &q);
                        if dq > 0.0 {
                            out.push((q, ws / dq.powf(e)));
                        }
                    }
                }
                _ if d == 0.0 => {}
                _ => out.push((*y, w / d.powf(e))),
            }
        }
        out
    }
}

/// `gamma * int g(y) / |x-y|^{n-a} dmu(y)`.
pub fn riesz_potential(spec: &RieszSpec, x: &Point) -> Result<f64> {
    spec.validate()?;
    let s: f64 = spec.kernel_weights(x).iter().map(|(y, w)| w * (spec.g)(y)).sum();
    Ok(spec.gamma * s)
}

/// `int_D |F_a g|^p dmu` over the potential's own grid.
pub fn capacity(spec: &RieszSpec, p: f64) -> Result<f64> {
    spec.validate()?;
    let vals: Vec<f64> = spec
        .grid
        .points
        .par_iter()
        .zip(&spec.grid.weights)
        .map(|(x, w)| w * riesz_potential(spec, x).unwrap_or(0.0).abs().powf(p))
        .collect();
    Ok(vals.iter().sum())
}

/// `int_{B_R} d^3y / |x - y|` at `|x| = a`.
pub fn ball_integral_closed(radius: f64, a: f64) -> Result<f64> {
    if !(radius > 0.0) || a < 0.0 {
        return Err(Error::InvalidArgument(format!("need R > 0 and a >= 0, got R={radius}, a={a}")));
    }
    Ok(if a <= radius { 2.0 * PI * (radius * radius - a * a / 3.0) } else { 4.0 * PI * radius.powi(3) / (3.0 * a) })
}

/// `(C / 4 pi) rho int_{B_R} d^3y / |x - y|`.
pub fn ball_newton_closed(radius: f64, a: f64, c: f64, rho: f64) -> Result<f64> {
    Ok(c / (4.0 * PI) * rho * ball_integral_closed(radius, a)?)
}

/// Gradient of `int_{B_R} d^3y/|x-y|` at an exterior point.
pub fn ball_newton_gradient_closed(radius: f64, a: &Point) -> Result<Point> {
    let r = norm(a);
    if r <= radius {
        return Err(Error::OutOfDomain(format!("|a| = {r} must exceed R = {radius}")));
    }
    let k = -4.0 * PI * radius.powi(3) / (3.0 * r.powi(3));
    Ok([k * a[0], k * a[1], k * a[2]])
}

/// `q = n p / (n - a p)`.
pub fn riesz_lq_exponent(n: usize, p: f64, a: f64) -> Result<f64> {
    let ap = a * p;
    if ap >= n as f64 {
        return Err(Error::EmbeddingViolation(ap));
    }
    Ok(n as f64 * p / (n as f64 - ap))
}

/// Rows `(coords..., psi)` for the given evaluation points.
pub fn write_potential_csv<W: Write>(spec: &RieszSpec, points: &[Point], mut w: W) -> Result<()> {
    writeln!(w, "# riesz n={} a={} gamma={} {}", spec.n, spec.a, spec.gamma, spec.grid.descriptor())?;
    let cols = ["x", "y", "z"];
    writeln!(w, "{},psi", cols[..spec.n].join(","))?;
    for p in points {
        let v = riesz_potential(spec, p)?;
        let c: Vec<String> = p[..spec.n].iter().map(|c| format!("{c:.17e}")).collect();
        writeln!(w, "{},{v:.17e}", c.join(","))?;
    }
    Ok(())
}
