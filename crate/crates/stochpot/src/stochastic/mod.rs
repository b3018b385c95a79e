//! Randomly perturbed harmonic functions and potentials: closed-form moments paired
//! with Monte Carlo estimates over Gaussian field samples.
//!
//! Every operation returns a [`Report`]; rows asserting against an oracle carry
//! PASS/FAIL, published values that the oracle contradicts are NOTE rows.

mod boundary;
mod energy;
mod mvp;
mod potential;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::grf::{ensure_admissible, gaussian_moment, kernel_eval, printed_moment, CovKernel, Mvn};
use crate::harmonic::HarmonicFn;
use crate::mc::{estimate, Estimate};
use crate::report::{Report, Z_TOL};

pub use boundary::{
    noisy_boundary_ball, noisy_boundary_disc, printed_ball_noise_factor, printed_disc_arctan_term, BallNoiseParams,
    CircleDistance, DiscNoiseParams,
};
pub use energy::{
    cacciopolli_condition, stochastic_bochner, stochastic_cacciopolli, stochastic_line_integral, sadei,
    turbulent_flow_stats, CacciopolliCondition, CylinderParams, LineIntegralParams, SadeiParams, TurbulenceParams,
};
pub use mvp::{averaged_max_principle, harnack_sums, perturbed_mvp, stochastic_harnack, HarnackSums, MvpParams};
pub use potential::{
    force_moments, laplacian_moments, noisy_density_newton, stochastic_riesz_moments, NewtonParams, RieszMomentParams,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MomentConvention {
    /// `m(alpha, Q) = (alpha^{Q/2} + (-1)^Q alpha^{Q/2}) / 2`
    Printed,
    /// `(Q-1)!! alpha^{Q/2}` for even `Q`
    Gaussian,
}

fn moment(alpha: f64, q: u32, conv: MomentConvention) -> f64 {
    match conv {
        MomentConvention::Printed => printed_moment(alpha, q).unwrap_or(f64::NAN),
        MomentConvention::Gaussian => gaussian_moment(alpha, q),
    }
}

fn binom(p: u32, q: u32) -> f64 {
    (0..q).fold(1.0, |acc, i| acc * (p - i) as f64 / (i + 1) as f64)
}

/// `sum_Q C(P,Q) base^{P-Q} lambda^Q m(alpha, Q)`.
pub fn binomial_moment(base: f64, lambda: f64, alpha: f64, p: u32, conv: MomentConvention) -> f64 {
    (0..=p).map(|q| binom(p, q) * base.powi((p - q) as i32) * lambda.powi(q as i32) * moment(alpha, q, conv)).sum()
}

/// One moment order under both conventions, with the Monte Carlo value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentReport {
    pub order: u32,
    pub closed_form_printed: f64,
    pub closed_form_gaussian: f64,
    pub mc: Estimate,
}

impl MomentReport {
    /// Moments of `base + lambda * N(0, alpha)`.
    pub fn new(order: u32, base: f64, lambda: f64, alpha: f64, mc: Estimate) -> Self {
        MomentReport {
            order,
            closed_form_printed: binomial_moment(base, lambda, alpha, order, MomentConvention::Printed),
            closed_form_gaussian: binomial_moment(base, lambda, alpha, order, MomentConvention::Gaussian),
            mc,
        }
    }

    pub fn supports(&self, conv: MomentConvention) -> bool {
        let v = match conv {
            MomentConvention::Printed => self.closed_form_printed,
            MomentConvention::Gaussian => self.closed_form_gaussian,
        };
        self.mc.within(v, Z_TOL)
    }

    /// Asserts the Gaussian value; the published convention becomes a NOTE.
    pub fn push_rows(&self, report: &mut Report, stat: &str) {
        let name = format!("{stat}_moment{}", self.order);
        report.mc(&name, Some(self.closed_form_printed), self.closed_form_gaussian, self.mc);
        report.note_mc(&format!("{name}_printed_convention"), self.closed_form_printed, self.mc);
    }
}

/// `psi_bar = psi + lambda * F` for a harmonic `psi` and a noise kernel.
#[derive(Debug, Clone)]
pub struct PerturbedField {
    pub base: HarmonicFn,
    pub lambda: f64,
    pub kernel: CovKernel,
}

impl PerturbedField {
    pub fn new(base: HarmonicFn, lambda: f64, kernel: CovKernel) -> Result<Self> {
        if !(lambda >= 0.0) {
            return Err(Error::InvalidArgument(format!("noise amplitude must be non-negative, got {lambda}")));
        }
        ensure_admissible(&kernel)?;
        Ok(PerturbedField { base, lambda, kernel })
    }

    pub fn alpha(&self) -> Result<f64> {
        self.kernel.variance()
    }
}

/// Covariance matrix of `kernel` over `points`.
pub(crate) fn covariance(kernel: &CovKernel, points: &[Point]) -> Result<DMatrix<f64>> {
    let n = points.len();
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let k = kernel_eval(kernel, &points[i], &points[j])?;
            m[(i, j)] = k;
            m[(j, i)] = k;
        }
    }
    Ok(m)
}

/// `c^T M d`.
pub(crate) fn quad_form(m: &DMatrix<f64>, c: &[f64], d: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..c.len() {
        if c[i] == 0.0 {
            continue;
        }
        let mut r = 0.0;
        for j in 0..d.len() {
            r += m[(i, j)] * d[j];
        }
        s += c[i] * r;
    }
    s
}

pub(crate) fn dotv(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Monte Carlo over draws of `mvn`; `f(draw, out)` fills `k` statistics.
pub(crate) fn mc_draws<F>(mvn: &Mvn, n_samples: usize, seed: u64, k: usize, f: F) -> Vec<Estimate>
where
    F: Fn(&[f64], &mut [f64]) + Sync,
{
    let d = mvn.dim();
    estimate(n_samples, seed, k, |rng, out| {
        let mut z = vec![0.0; d];
        let mut v = vec![0.0; d];
        mvn.draw_into(rng, &mut z, &mut v);
        f(&v, out);
    })
}

/// Same as [`mc_draws`] with `m` independent draws per sample.
pub(crate) fn mc_multi<F>(mvn: &Mvn, m: usize, n_samples: usize, seed: u64, k: usize, f: F) -> Vec<Estimate>
where
    F: Fn(&[Vec<f64>], &mut [f64]) + Sync,
{
    let d = mvn.dim();
    estimate(n_samples, seed, k, |rng, out| {
        let mut z = vec![0.0; d];
        let draws: Vec<Vec<f64>> = (0..m)
            .map(|_| {
                let mut v = vec![0.0; d];
                mvn.draw_into(rng, &mut z, &mut v);
                v
            })
            .collect();
        f(&draws, out);
    })
}

fn check_samples(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 samples, got {n}")));
    }
    Ok(())
}
