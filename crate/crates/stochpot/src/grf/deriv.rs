//! Mean-square derivative covariances.

use nalgebra::DMatrix;

use super::{CovKernel, Factor, Frame, SeparableKernel};
use crate::error::{Error, Result};
use crate::geometry::Point;

/// Derivative orders per Cartesian axis.
pub type MultiIndex = [u8; 3];

// physicists' Hermite polynomial
fn hermite(k: u32, t: f64) -> f64 {
    let (mut h0, mut h1) = (1.0, 2.0 * t);
    if k == 0 {
        return h0;
    }
    for j in 1..k {
        let h2 = 2.0 * t * h1 - 2.0 * j as f64 * h0;
        h0 = h1;
        h1 = h2;
    }
    h1
}

// k-th derivative of exp(-t^2/xi^2)
fn gauss_deriv(k: u32, t: f64, xi: f64) -> f64 {
    (-1.0 / xi).powi(k as i32) * hermite(k, t / xi) * (-(t * t) / (xi * xi)).exp()
}

/// `cov(d^a F(x), d^b F(y))` for Cartesian multi-indices.
pub fn derivative_cov(kernel: &CovKernel, x: &Point, a: MultiIndex, y: &Point, b: MultiIndex) -> Result<f64> {
    let order: u32 = a.iter().chain(&b).map(|&v| v as u32).sum();
    match *kernel {
        CovKernel::GaussianCorr { alpha, xi } => {
            let nb: u32 = b.iter().map(|&v| v as u32).sum();
            let mut v = if nb % 2 == 0 { alpha } else { -alpha };
            for m in 0..3 {
                v *= gauss_deriv((a[m] + b[m]) as u32, x[m] - y[m], xi);
            }
            Ok(v)
        }
        _ if order == 0 => super::kernel_eval(kernel, x, y),
        CovKernel::Exponential { .. } => Err(Error::NotDifferentiable(
            "exponential kernel has a cusp at coincidence; supply derivative constants".into(),
        )),
        CovKernel::Separable(_) => Err(Error::NotDifferentiable(
            "separable kernels take frame derivatives via separable_derivative_covariance".into(),
        )),
        CovKernel::PowerLaw { .. } => Err(Error::SingularKernel),
        CovKernel::WhiteNoise => Err(Error::NonPointwiseKernel),
    }
}

/// Covariance matrix of the jointly Gaussian vector `(d^{a_k} F(x_k))_k`.
pub fn joint_covariance(kernel: &CovKernel, items: &[(Point, MultiIndex)]) -> Result<DMatrix<f64>> {
    let n = items.len();
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let v = derivative_cov(kernel, &items[i].0, items[i].1, &items[j].0, items[j].1)?;
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    Ok(m)
}

/// Single-point derivative constants of a stationary field in `n` dimensions.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct NoiseConstants {
    pub alpha: f64,
    /// `E[d_i F d_j F] = delta_ij beta`
    pub beta: f64,
    /// `E[d_i lap F d_j lap F] = delta_ij big_theta`
    pub big_theta: f64,
    /// `sum_ij E[(d_i d_j F)^2] = n big_xi`
    pub big_xi: f64,
    pub lambda: f64,
    pub n: usize,
}

impl NoiseConstants {
    pub fn new(alpha: f64, beta: f64, big_theta: f64, big_xi: f64, lambda: f64, n: usize) -> Result<Self> {
        if [alpha, beta, big_theta, big_xi, lambda].iter().any(|v| !(*v >= 0.0)) {
            return Err(Error::InvalidArgument("noise constants must be non-negative".into()));
        }
        Ok(NoiseConstants { alpha, beta, big_theta, big_xi, lambda, n })
    }

    /// Constants implied by a Gaussian-correlated kernel.
    pub fn gaussian(alpha: f64, xi: f64, n: usize, lambda: f64) -> Self {
        let k = CovKernel::GaussianCorr { alpha, xi };
        let o = [0.0; 3];
        let e = |i: usize, p: u8| {
            let mut m = [0u8; 3];
            m[i] += p;
            m
        };
        let beta = derivative_cov(&k, &o, e(0, 1), &o, e(0, 1)).unwrap();
        let mut hess = 0.0;
        for i in 0..n {
            for j in 0..n {
                let mut m = e(i, 1);
                m[j] += 1;
                hess += derivative_cov(&k, &o, m, &o, m).unwrap();
            }
        }
        let mut theta = 0.0;
        for kk in 0..n {
            for l in 0..n {
                let mut a = e(0, 1);
                a[kk] += 2;
                let mut b = e(0, 1);
                b[l] += 2;
                theta += derivative_cov(&k, &o, a, &o, b).unwrap();
            }
        }
        NoiseConstants { alpha, beta, big_theta: theta, big_xi: hess / n as f64, lambda, n }
    }

    /// Derivative constants are only available analytically for Gaussian kernels.
    pub fn from_kernel(kernel: &CovKernel, n: usize, lambda: f64) -> Result<Self> {
        match *kernel {
            CovKernel::GaussianCorr { alpha, xi } => Ok(Self::gaussian(alpha, xi, n, lambda)),
            _ => Err(Error::MissingConstant("derivative constants for a non-Gaussian kernel")),
        }
    }

    /// `E|grad F|^2 = n beta`.
    pub fn gradient_variance(&self) -> f64 {
        self.n as f64 * self.beta
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Selector {
    Identity,
    /// Physical first derivative along frame coordinate `k` (metric factor included).
    D(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DerivCovSpec {
    pub frame: Frame,
    pub left: Selector,
    pub right: Selector,
}

impl DerivCovSpec {
    pub fn new(frame: Frame, left: Selector, right: Selector) -> Self {
        DerivCovSpec { frame, left, right }
    }

    /// The coincident value asserted for every component when the factors are normalized.
    pub fn printed_coincident_value(kernel: &SeparableKernel) -> f64 {
        kernel.lambda
    }
}

fn factor_d1(f: &Factor, d: f64) -> Result<f64> {
    match *f {
        Factor::Unit => Ok(0.0),
        Factor::Gauss(s) => Ok(-2.0 * d / (s * s) * f.eval(d)),
        Factor::Exp(s) => {
            if d == 0.0 {
                Err(Error::NotDifferentiable("exponential factor at coincident argument".into()))
            } else {
                Ok(-d.signum() / s * f.eval(d))
            }
        }
    }
}

fn factor_d2(f: &Factor, d: f64) -> Result<f64> {
    match *f {
        Factor::Unit => Ok(0.0),
        Factor::Gauss(s) => Ok((4.0 * d * d / s.powi(4) - 2.0 / (s * s)) * f.eval(d)),
        Factor::Exp(s) => {
            if d == 0.0 {
                Err(Error::NotDifferentiable("exponential factor at coincident argument".into()))
            } else {
                Ok(f.eval(d) / (s * s))
            }
        }
    }
}

fn metric(frame: Frame, k: usize, c: &[f64; 3]) -> Result<f64> {
    let r = c[0];
    let angular = matches!((frame, k), (Frame::Spherical, 1 | 2) | (Frame::Cylindrical, 1) | (Frame::Polar, 1));
    if angular && r == 0.0 {
        return Err(Error::ChartSingularity("angular derivative at r = 0".into()));
    }
    Ok(match (frame, k) {
        (_, 0) | (Frame::Cylindrical, 2) => 1.0,
        (Frame::Spherical, 1) | (Frame::Cylindrical, 1) | (Frame::Polar, 1) => 1.0 / r,
        (Frame::Spherical, 2) => {
            let s = c[1].sin();
            if s.abs() < 1e-14 {
                return Err(Error::ChartSingularity("azimuthal derivative on the polar axis".into()));
            }
            1.0 / (r * s)
        }
        _ => return Err(Error::InvalidArgument(format!("frame {frame:?} has no coordinate {k}"))),
    })
}

/// Covariance of frame derivatives of a separable field, with metric factors.
pub fn separable_derivative_covariance(
    kernel: &SeparableKernel,
    spec: &DerivCovSpec,
    x: &Point,
    y: &Point,
) -> Result<f64> {
    if spec.frame != kernel.frame {
        return Err(Error::InvalidArgument("derivative frame differs from kernel frame".into()));
    }
    let a = kernel.frame.coords(x);
    let b = kernel.frame.coords(y);
    let sel = |s: Selector| match s {
        Selector::Identity => None,
        Selector::D(k) => Some(k),
    };
    let (l, r) = (sel(spec.left), sel(spec.right));
    let mut v = kernel.lambda;
    if let Some(k) = l {
        v *= metric(kernel.frame, k, &a)?;
    }
    if let Some(k) = r {
        v *= metric(kernel.frame, k, &b)?;
    }
    for m in 0..kernel.frame.dim() {
        let f = &kernel.factors[m];
        let d = a[m] - b[m];
        v *= match (l == Some(m), r == Some(m)) {
            (false, false) => f.eval(d),
            (true, false) => factor_d1(f, d)?,
            (false, true) => -factor_d1(f, d)?,
            (true, true) => -factor_d2(f, d)?,
        };
    }
    Ok(v)
}
