use serde::Serialize;

use super::{binomial_moment, check_samples, covariance, mc_draws, quad_form, MomentConvention, MomentReport, PerturbedField};
use crate::error::{Error, Result};
use crate::geometry::{build_spectral_grid, norm, Domain, DomainGrid, MeasureKind, Point, ORIGIN};
use crate::grf::{kernel_eval, Mvn};
use crate::harmonic::{harnack_bounds, harnack_printed_factors};
use crate::report::Report;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MvpParams {
    pub center: Point,
    /// Second ball for the two-point covariance.
    pub partner: Point,
    /// Third ball, many correlation lengths away.
    pub far: Point,
    pub radius: f64,
    /// Spectral order of each ball grid.
    pub order: usize,
    pub n_samples: usize,
    pub seed: u64,
}

impl Default for MvpParams {
    fn default() -> Self {
        MvpParams {
            center: ORIGIN,
            partner: [0.6, 0.0, 0.0],
            far: [6.0, 0.0, 0.0],
            radius: 0.5,
            order: 3,
            n_samples: 100_000,
            seed: 0,
        }
    }
}

/// Ball averages of the perturbed field: mean, volatility, two-point covariance and higher moments.
pub fn perturbed_mvp(field: &PerturbedField, p: &MvpParams) -> Result<Report> {
    check_samples(p.n_samples)?;
    let alpha = field.alpha()?;
    let lam = field.lambda;
    let balls = [p.center, p.partner, p.far];
    let grids = balls
        .iter()
        .map(|c| build_spectral_grid(&Domain::Ball { n: 3, radius: p.radius, center: *c }, MeasureKind::Volume, p.order))
        .collect::<Result<Vec<DomainGrid>>>()?;
    let vol = grids[0].exact_measure;
    let points: Vec<Point> = grids.iter().flat_map(|g| g.points.iter().copied()).collect();
    let m = points.len();
    let mut coef = vec![vec![0.0; m]; 3];
    let mut det = [0.0; 3];
    let mut off = 0;
    for (b, g) in grids.iter().enumerate() {
        for (k, (y, w)) in g.points.iter().zip(&g.weights).enumerate() {
            coef[b][off + k] = w / vol;
            det[b] += w / vol * field.base.eval(y)?;
        }
        off += g.len();
    }
    let cov = covariance(&field.kernel, &points)?;
    let s = |a: usize, b: usize| lam * lam * quad_form(&cov, &coef[a], &coef[b]);
    let (s00, s01, s02) = (s(0, 0), s(0, 1), s(0, 2));
    let mvn = Mvn::from_covariance(cov)?;

    let est = mc_draws(&mvn, p.n_samples, p.seed, 8, |v, out| {
        let nz: Vec<f64> = coef.iter().map(|c| lam * super::dotv(c, v)).collect();
        let a = [det[0] + nz[0], det[1] + nz[1], det[2] + nz[2]];
        out[0] = a[0];
        out[1] = nz[0] * nz[0];
        out[2] = a[0] * a[0];
        out[3] = a[0] * a[1];
        out[4] = a[0] * a[2];
        out[5] = nz[0].powi(3);
        out[6] = nz[0].powi(4);
        out[7] = nz[0] * nz[2];
    });

    let psi = field.base.eval(&p.center)?;
    let mut r = Report::new("mvp-stochastic");
    r.exact("ball_average_deterministic", None, psi, det[0], 1e-9);
    r.mc("mean", Some(psi), psi, est[0]);
    r.mc("volatility_zero_base", Some(lam * lam * alpha), s00, est[1]);
    r.note("volatility_zero_base_eq_lambda2_alpha", lam * lam * alpha, s00, 1e-2);
    r.note("volatility_zero_base_eq_alpha_lambda_vol2", alpha * lam * vol * vol, s00, 1e-2);
    r.mc("volatility", Some(psi * psi + lam * lam * alpha), det[0] * det[0] + s00, est[2]);
    r.mc("covariance_partner", None, det[0] * det[1] + s01, est[3]);
    r.mc("covariance_far", None, det[0] * det[2] + s02, est[4]);
    r.mc("covariance_far_vs_product", None, det[0] * det[2], est[4]);
    r.mc("noise_covariance_far", None, 0.0, est[7]);
    r.mc("third_moment_noise", None, 0.0, est[5]);
    MomentReport::new(4, 0.0, 1.0, s00, est[6]).push_rows(&mut r, "noise");
    Ok(r)
}

/// Interior versus boundary maxima of `E[psi_bar^P]` on paired grids.
pub fn averaged_max_principle(
    field: &PerturbedField,
    interior: &DomainGrid,
    boundary: &DomainGrid,
    orders: &[u32],
    n_samples: usize,
    seed: u64,
) -> Result<Report> {
    check_samples(n_samples)?;
    let alpha = field.alpha()?;
    let lam = field.lambda;
    let points: Vec<Point> = interior.points.iter().chain(&boundary.points).copied().collect();
    let ni = interior.len();
    let base = points.iter().map(|p| field.base.eval(p)).collect::<Result<Vec<f64>>>()?;
    let mvn = Mvn::from_covariance(covariance(&field.kernel, &points)?)?;
    let m = points.len();
    let k = m * orders.len();
    let est = mc_draws(&mvn, n_samples, seed, k, |v, out| {
        for (j, &pw) in orders.iter().enumerate() {
            for i in 0..m {
                out[j * m + i] = (base[i] + lam * v[i]).powi(pw as i32);
            }
        }
    });

    let mut r = Report::new("max-principle-stochastic");
    let spread = base.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - base.iter().cloned().fold(f64::INFINITY, f64::min);
    let constant = spread <= 1e-12 * (1.0 + base[0].abs());
    r.info("constant_base", if constant { 1.0 } else { 0.0 }, None);
    let argmax = |v: &[f64]| {
        v.iter().enumerate().fold((0, f64::NEG_INFINITY), |acc, (i, x)| if *x > acc.1 { (i, *x) } else { acc })
    };
    for (j, &pw) in orders.iter().enumerate() {
        let mc = &est[j * m..(j + 1) * m];
        let cf: Vec<f64> = base.iter().map(|b| binomial_moment(*b, lam, alpha, pw, MomentConvention::Gaussian)).collect();
        let dt: Vec<f64> = base.iter().map(|b| b.powi(pw as i32)).collect();
        let means: Vec<f64> = mc.iter().map(|e| e.mean).collect();
        let (_, imax) = argmax(&means[..ni]);
        let (bi, bmax) = argmax(&means[ni..]);
        let (_, cf_i) = argmax(&cf[..ni]);
        let (_, cf_b) = argmax(&cf[ni..]);
        let (_, dt_i) = argmax(&dt[..ni]);
        let (_, dt_b) = argmax(&dt[ni..]);
        if constant {
            r.check(&format!("moment{pw}_constant_field"), (cf_i - cf_b).abs(), (cf_i - cf_b).abs() <= 1e-12 * (1.0 + cf_b.abs()));
        } else {
            r.check(&format!("moment{pw}_interior_max_below_boundary_max"), imax - bmax, imax < bmax);
            r.check(&format!("moment{pw}_closed_form_reduces_to_deterministic"), cf_i - cf_b, (cf_i < cf_b) == (dt_i < dt_b));
        }
        r.mc(&format!("moment{pw}_at_boundary_argmax"), None, cf[ni + bi], mc[ni + bi]);
        let zmax = mc.iter().zip(&cf).map(|(e, c)| e.z_score(*c)).fold(0.0, f64::max);
        r.info(&format!("moment{pw}_max_z_over_nodes"), zmax, None);
    }
    Ok(r)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HarnackSums {
    pub lower: f64,
    pub middle: f64,
    pub upper: f64,
    pub x_factor: f64,
    pub y_factor: f64,
}

impl HarnackSums {
    pub fn ordered(&self) -> bool {
        self.lower <= self.middle && self.middle <= self.upper
    }
}

/// The three binomial sums with `X psi(0)`, `psi(x)` and `Y psi(0)` as bases.
#[allow(clippy::too_many_arguments)]
pub fn harnack_sums(
    psi0: f64,
    psi_x: f64,
    radius: f64,
    d: f64,
    n: usize,
    lambda: f64,
    alpha: f64,
    p: u32,
    conv: MomentConvention,
) -> Result<HarnackSums> {
    let (x, y) = harnack_bounds(1.0, radius, d, n)?;
    Ok(HarnackSums {
        lower: binomial_moment(x * psi0, lambda * x, alpha, p, conv),
        middle: binomial_moment(psi_x, lambda, alpha, p, conv),
        upper: binomial_moment(y * psi0, lambda * y, alpha, p, conv),
        x_factor: x,
        y_factor: y,
    })
}

/// Harnack sums for a non-negative harmonic base on `B_R(0)` with a Monte Carlo check.
pub fn stochastic_harnack(
    field: &PerturbedField,
    x: &Point,
    radius: f64,
    n: usize,
    orders: &[u32],
    n_samples: usize,
    seed: u64,
) -> Result<Report> {
    check_samples(n_samples)?;
    let d = norm(x);
    if d >= radius {
        return Err(Error::OutOfDomain(format!("|x| = {d} must be below R = {radius}")));
    }
    let alpha = field.alpha()?;
    let lam = field.lambda;
    let psi0 = field.base.eval(&ORIGIN)?;
    let psi_x = field.base.eval(x)?;
    if psi0 < 0.0 || psi_x < 0.0 {
        return Err(Error::InvalidArgument("Harnack needs a non-negative base".into()));
    }
    let (xf, yf) = harnack_bounds(1.0, radius, d, n)?;
    let c = kernel_eval(&field.kernel, &ORIGIN, x)?;
    let mut cov = nalgebra::DMatrix::from_element(2, 2, c);
    cov[(0, 0)] = alpha;
    cov[(1, 1)] = alpha;
    let mvn = Mvn::from_covariance(cov)?;
    let k = 3 * orders.len();
    let est = mc_draws(&mvn, n_samples, seed, k, |v, out| {
        let a = psi0 + lam * v[0];
        let b = psi_x + lam * v[1];
        for (j, &pw) in orders.iter().enumerate() {
            let e = pw as i32;
            out[3 * j] = (xf * a).powi(e);
            out[3 * j + 1] = b.powi(e);
            out[3 * j + 2] = (yf * a).powi(e);
        }
    });

    let mut r = Report::new("harnack-stochastic");
    let (px, py) = harnack_printed_factors(radius, d, n);
    r.note("x_factor_printed", px, xf, 1e-12);
    r.note("y_factor_printed", py, yf, 1e-12);
    r.check("deterministic_harnack", psi_x, xf * psi0 <= psi_x && psi_x <= yf * psi0);
    for (j, &pw) in orders.iter().enumerate() {
        let g = harnack_sums(psi0, psi_x, radius, d, n, lam, alpha, pw, MomentConvention::Gaussian)?;
        let pp = harnack_sums(psi0, psi_x, radius, d, n, lam, alpha, pw, MomentConvention::Printed)?;
        r.mc(&format!("lower_P{pw}"), Some(pp.lower), g.lower, est[3 * j]);
        r.mc(&format!("middle_P{pw}"), Some(pp.middle), g.middle, est[3 * j + 1]);
        r.mc(&format!("upper_P{pw}"), Some(pp.upper), g.upper, est[3 * j + 2]);
        r.check(&format!("closed_form_ordered_P{pw}"), g.middle, g.ordered());
        let (lo, mid, hi) = (est[3 * j].mean, est[3 * j + 1].mean, est[3 * j + 2].mean);
        r.check(&format!("mc_ordered_P{pw}"), mid, lo <= mid && mid <= hi);
    }
    Ok(r)
}
