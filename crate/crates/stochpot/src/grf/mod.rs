//! Gaussian random scalar fields: kernels, admissibility, sampling and
//! stochastic integrals.

mod checks;
mod deriv;
mod sampler;

use std::fmt;
use std::io::Write;

use rayon::prelude::*;

pub use deriv::{
    derivative_cov, joint_covariance, separable_derivative_covariance, DerivCovSpec, MultiIndex, NoiseConstants,
    Selector,
};
pub use checks::{admissibility_report, reference_kernels, sampler_fidelity};
pub use sampler::{sample_field, GaussianSampler, Mvn, SAMPLE_CAP};

use crate::error::{Error, Result};
use crate::geometry::{dist, to_cylindrical, to_polar, to_spherical, DomainGrid, Point};

/// One-dimensional factor `f(u - u')` of a separable kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Factor {
    Unit,
    /// `exp(-(u-u')^2 / s^2)`
    Gauss(f64),
    /// `exp(-|u-u'| / s)`
    Exp(f64),
}

impl Factor {
    pub fn eval(&self, d: f64) -> f64 {
        match *self {
            Factor::Unit => 1.0,
            Factor::Gauss(s) => (-(d * d) / (s * s)).exp(),
            Factor::Exp(s) => (-d.abs() / s).exp(),
        }
    }

    fn scale(&self) -> Option<f64> {
        match *self {
            Factor::Unit => None,
            Factor::Gauss(s) | Factor::Exp(s) => Some(s),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Frame {
    /// `(r, theta, phi)`
    Spherical,
    /// `(r, phi, z)`
    Cylindrical,
    /// `(r, theta)`
    Polar,
}

impl Frame {
    pub fn coords(&self, p: &Point) -> [f64; 3] {
        match self {
            Frame::Spherical => to_spherical(p),
            Frame::Cylindrical => to_cylindrical(p),
            Frame::Polar => {
                let [r, t] = to_polar(p);
                [r, t, 0.0]
            }
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Frame::Polar => 2,
            _ => 3,
        }
    }
}

/// `lambda * K(r,r') * H(.,.) * Q(.,.)` in a curvilinear frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeparableKernel {
    pub frame: Frame,
    pub lambda: f64,
    pub factors: [Factor; 3],
}

impl SeparableKernel {
    pub fn eval(&self, x: &Point, y: &Point) -> f64 {
        let a = self.frame.coords(x);
        let b = self.frame.coords(y);
        let mut k = self.lambda;
        for m in 0..self.frame.dim() {
            k *= self.factors[m].eval(a[m] - b[m]);
        }
        k
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CovKernel {
    Exponential { alpha: f64, xi: f64 },
    GaussianCorr { alpha: f64, xi: f64 },
    PowerLaw { xi: f64, p: f64 },
    WhiteNoise,
    Separable(SeparableKernel),
}

impl CovKernel {
    /// Value at coincident points.
    pub fn variance(&self) -> Result<f64> {
        match *self {
            CovKernel::Exponential { alpha, .. } | CovKernel::GaussianCorr { alpha, .. } => Ok(alpha),
            CovKernel::Separable(s) => Ok(s.lambda),
            CovKernel::PowerLaw { .. } => Err(Error::SingularKernel),
            CovKernel::WhiteNoise => Err(Error::NonPointwiseKernel),
        }
    }

    pub fn correlation_length(&self) -> Option<f64> {
        match *self {
            CovKernel::Exponential { xi, .. } | CovKernel::GaussianCorr { xi, .. } | CovKernel::PowerLaw { xi, .. } => {
                Some(xi)
            }
            CovKernel::Separable(s) => s.factors.iter().filter_map(Factor::scale).reduce(f64::max),
            CovKernel::WhiteNoise => None,
        }
    }

    /// Same kernel with variance multiplied by `s`.
    pub fn scaled(&self, s: f64) -> Self {
        match *self {
            CovKernel::Exponential { alpha, xi } => CovKernel::Exponential { alpha: alpha * s, xi },
            CovKernel::GaussianCorr { alpha, xi } => CovKernel::GaussianCorr { alpha: alpha * s, xi },
            CovKernel::Separable(k) => CovKernel::Separable(SeparableKernel { lambda: k.lambda * s, ..k }),
            other => other,
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidArgument(m.to_string()));
        match *self {
            CovKernel::Exponential { alpha, xi } | CovKernel::GaussianCorr { alpha, xi } => {
                if !(alpha > 0.0 && xi > 0.0) {
                    return bad("kernel needs alpha > 0 and xi > 0");
                }
            }
            CovKernel::PowerLaw { xi, p } => {
                if !(xi > 0.0 && p >= 1.0) {
                    return bad("power law needs xi > 0 and p >= 1");
                }
            }
            CovKernel::Separable(s) => {
                if !(s.lambda > 0.0) {
                    return bad("separable amplitude must be positive");
                }
                if s.factors.iter().filter_map(Factor::scale).any(|v| !(v > 0.0)) {
                    return bad("separable factor scales must be positive");
                }
            }
            CovKernel::WhiteNoise => {}
        }
        Ok(())
    }
}

impl fmt::Display for CovKernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CovKernel::Exponential { alpha, xi } => write!(f, "exponential(alpha={alpha};xi={xi})"),
            CovKernel::GaussianCorr { alpha, xi } => write!(f, "gaussian(alpha={alpha};xi={xi})"),
            CovKernel::PowerLaw { xi, p } => write!(f, "power_law(xi={xi};p={p})"),
            CovKernel::WhiteNoise => write!(f, "white_noise"),
            CovKernel::Separable(s) => write!(f, "separable(frame={:?};lambda={};factors={:?})", s.frame, s.lambda, s.factors),
        }
    }
}

pub fn kernel_eval(kernel: &CovKernel, x: &Point, y: &Point) -> Result<f64> {
    kernel.validate()?;
    let d = dist(x, y);
    match *kernel {
        CovKernel::Exponential { alpha, xi } => Ok(alpha * (-d / xi).exp()),
        CovKernel::GaussianCorr { alpha, xi } => Ok(alpha * (-(d * d) / (xi * xi)).exp()),
        CovKernel::PowerLaw { xi, p } => {
            if d == 0.0 {
                Err(Error::SingularKernel)
            } else {
                Ok((xi / d).powf(p))
            }
        }
        CovKernel::WhiteNoise => Err(Error::NonPointwiseKernel),
        CovKernel::Separable(s) => Ok(s.eval(x, y)),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Admissibility {
    pub admissible: bool,
    pub reason: String,
}

/// Kolmogorov continuity verdict.
pub fn kc_admissible(kernel: &CovKernel) -> Admissibility {
    let no = |why: &str| Admissibility {
        admissible: false,
        reason: format!("Kolmogorov continuity condition is not satisfied: {why}"),
    };
    let yes = |why: &str| Admissibility { admissible: true, reason: why.to_string() };
    if let Err(e) = kernel.validate() {
        return no(&e.to_string());
    }
    match kernel {
        CovKernel::Exponential { .. } => yes("bounded regulated kernel, Lipschitz at coincidence"),
        CovKernel::GaussianCorr { .. } => yes("bounded regulated kernel, smooth at coincidence"),
        CovKernel::PowerLaw { .. } => no("power-law covariance diverges at coincident points"),
        CovKernel::WhiteNoise => no("white noise has a delta covariance with no pointwise variance"),
        CovKernel::Separable(_) => yes("product of bounded continuous factors equal to 1 at coincidence"),
    }
}

pub fn ensure_admissible(kernel: &CovKernel) -> Result<()> {
    let a = kc_admissible(kernel);
    if a.admissible {
        Ok(())
    } else {
        Err(Error::Inadmissible(a.reason))
    }
}

/// `m(alpha, Q) = (alpha^{Q/2} + (-1)^Q alpha^{Q/2}) / 2`.
pub fn printed_moment(alpha: f64, q: u32) -> Result<f64> {
    if alpha < 0.0 {
        return Err(Error::InvalidArgument(format!("variance must be non-negative, got {alpha}")));
    }
    let a = alpha.powf(q as f64 / 2.0);
    Ok(0.5 * (a + if q % 2 == 0 { a } else { -a }))
}

/// `E[X^Q]` for `X ~ N(0, alpha)`.
pub fn gaussian_moment(alpha: f64, q: u32) -> f64 {
    if q % 2 == 1 {
        return 0.0;
    }
    let dfact: f64 = (1..q).step_by(2).map(|k| k as f64).product();
    dfact * alpha.powi(q as i32 / 2)
}

/// One realization of a field on a fixed node set.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSample {
    pub points: Vec<Point>,
    pub values: Vec<f64>,
    pub seed: u64,
    pub kernel: CovKernel,
}

impl FieldSample {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn write_csv<W: Write>(&self, mut w: W, dim: usize) -> std::io::Result<()> {
        writeln!(w, "# seed={} kernel={}", self.seed, self.kernel)?;
        let cols = ["x", "y", "z"];
        writeln!(w, "{},value", cols[..dim].join(","))?;
        for (p, v) in self.points.iter().zip(&self.values) {
            let c: Vec<String> = p[..dim].iter().map(|c| format!("{c:.17e}")).collect();
            writeln!(w, "{},{v:.17e}", c.join(","))?;
        }
        Ok(())
    }
}

fn check_pairing(points: &[Point], grid: &DomainGrid) -> Result<()> {
    if points.len() != grid.points.len() || points != grid.points.as_slice() {
        return Err(Error::InvalidPairing(format!(
            "sample has {} nodes, grid has {} (or node positions differ)",
            points.len(),
            grid.points.len()
        )));
    }
    Ok(())
}

/// Riemann sum `sum_q F(x_q) w_q`.
pub fn stochastic_integral(sample: &FieldSample, grid: &DomainGrid) -> Result<f64> {
    check_pairing(&sample.points, grid)?;
    Ok(sample.values.iter().zip(&grid.weights).map(|(v, w)| v * w).sum())
}

/// Double quadrature `sum_ab w_a w_b k(x_a, x_b)`.
pub fn integral_covariance_closed(kernel: &CovKernel, a: &DomainGrid, b: &DomainGrid) -> Result<f64> {
    ensure_admissible(kernel)?;
    weighted_double_sum(kernel, &a.points, &a.weights, &b.points, &b.weights)
}

/// `sum_ij wa_i wb_j k(xa_i, xb_j)` for arbitrary node sets.
pub fn weighted_double_sum(kernel: &CovKernel, xa: &[Point], wa: &[f64], xb: &[Point], wb: &[f64]) -> Result<f64> {
    kernel_eval(kernel, &xa[0], &xb[0])?;
    let rows: Vec<f64> = xa
        .par_iter()
        .zip(wa)
        .map(|(x, w)| w * xb.iter().zip(wb).map(|(y, v)| v * kernel_eval(kernel, x, y).unwrap_or(0.0)).sum::<f64>())
        .collect();
    Ok(rows.iter().sum())
}

/// Pointwise `sum_i c_i F_i`.
pub fn superpose(fields: &[FieldSample], coeffs: &[f64]) -> Result<FieldSample> {
    if fields.is_empty() || fields.len() != coeffs.len() {
        return Err(Error::InvalidPairing(format!("{} fields vs {} coefficients", fields.len(), coeffs.len())));
    }
    let base = &fields[0];
    if fields.iter().any(|f| f.points != base.points) {
        return Err(Error::InvalidPairing("fields live on different grids".into()));
    }
    let mut values = vec![0.0; base.len()];
    for (f, c) in fields.iter().zip(coeffs) {
        for (v, x) in values.iter_mut().zip(&f.values) {
            *v += c * x;
        }
    }
    Ok(FieldSample { points: base.points.clone(), values, seed: base.seed, kernel: base.kernel })
}

/// Coincident variance of a superposition of independent fields.
pub fn predicted_variance(coeffs: &[f64], variances: &[f64]) -> Result<f64> {
    if coeffs.len() != variances.len() {
        return Err(Error::InvalidPairing(format!("{} coefficients vs {} variances", coeffs.len(), variances.len())));
    }
    Ok(coeffs.iter().zip(variances).map(|(c, a)| c * c * a).sum())
}

/// `Z = A + iB` with independent parts: `(E[Z Z], E[Z Z*])`.
pub fn complex_pair_covariances(alpha_a: f64, beta_b: f64) -> (f64, f64) {
    (alpha_a - beta_b, alpha_a + beta_b)
}
