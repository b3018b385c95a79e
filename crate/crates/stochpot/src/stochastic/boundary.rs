use std::f64::consts::PI;

use nalgebra::DMatrix;

use super::{check_samples, covariance, dotv, mc_draws, quad_form, MomentReport};
use crate::error::{Error, Result};
use crate::geometry::{build_polar_graded_sphere, dist};
use crate::grf::{ensure_admissible, CovKernel, Mvn};
use crate::harmonic::{disc_poisson_eval, disc_poisson_kernel, BoundaryData};
use crate::report::Report;

/// `((R^2 - a^2) / 4 pi R) (2 pi / a) log(|R - a| / |R + a|)`, with its `a -> 0` limit `-(R^2/4piR)(4pi/R)`.
pub fn printed_ball_noise_factor(radius: f64, a: f64) -> f64 {
    let pre = (radius * radius - a * a) / (4.0 * PI * radius);
    if a == 0.0 {
        return pre * (-4.0 * PI / radius);
    }
    pre * 2.0 * PI / a * ((radius - a).abs() / (radius + a)).ln()
}

#[derive(Debug, Clone, PartialEq)]
pub struct BallNoiseParams {
    pub radius: f64,
    /// Noise kernel on the sphere, evaluated with chordal distance.
    pub kernel: CovKernel,
    /// Heights `a` of the evaluation points `(0, 0, a)`.
    pub heights: Vec<f64>,
    /// Gauss-Legendre order per polar panel of the pole-graded surface grid.
    pub order: usize,
    /// Azimuthal nodes on the equator.
    pub nphi: usize,
    /// Truncation of the pivoted Cholesky factor of the surface covariance.
    pub rank_tol: f64,
    pub orders: Vec<u32>,
    pub n_samples: usize,
    pub seed: u64,
}

impl Default for BallNoiseParams {
    fn default() -> Self {
        BallNoiseParams {
            radius: 1.0,
            kernel: CovKernel::GaussianCorr { alpha: 1.0, xi: 0.5 },
            heights: vec![0.5, 0.8, 0.95],
            order: 6,
            nphi: 24,
            rank_tol: 1e-12,
            orders: vec![2, 4],
            n_samples: 20_000,
            seed: 0,
        }
    }
}

/// Ball Poisson solution with boundary data `g + lambda F` on the sphere.
pub fn noisy_boundary_ball(g: &BoundaryData, lambda: f64, p: &BallNoiseParams) -> Result<Report> {
    check_samples(p.n_samples)?;
    ensure_admissible(&p.kernel)?;
    let rr = p.radius;
    for &a in &p.heights {
        if !(0.0..rr).contains(&a) {
            return Err(Error::OutOfDomain(format!("height a = {a} not in [0, {rr})")));
        }
    }
    let alpha = p.kernel.variance()?;
    let amax = p.heights.iter().cloned().fold(0.0, f64::max);
    let surf = build_polar_graded_sphere(rr, [0.0; 3], 0.5 * (1.0 - amax / rr).max(1e-3), p.order, p.nphi)?;
    let center = [0.0; 3];
    let gv: Vec<f64> = surf.points.iter().map(|y| g.eval_point(y, &center, rr)).collect();
    let coef: Vec<Vec<f64>> = p
        .heights
        .iter()
        .map(|&a| {
            let x = [0.0, 0.0, a];
            let pre = (rr * rr - a * a) / (4.0 * PI * rr);
            surf.points.iter().zip(&surf.weights).map(|(y, w)| pre * w / dist(&x, y).powi(3)).collect()
        })
        .collect();
    let det: Vec<f64> = coef.iter().map(|c| dotv(c, &gv)).collect();
    let cov = covariance(&p.kernel, &surf.points)?;
    let s: Vec<f64> = coef.iter().map(|c| lambda * lambda * quad_form(&cov, c, c)).collect();
    let mvn = Mvn::from_covariance_low_rank(cov, p.rank_tol)?;
    let nh = p.heights.len();
    let orders = p.orders.clone();
    let est = mc_draws(&mvn, p.n_samples, p.seed, 3 * nh + orders.len(), |v, out| {
        for (j, c) in coef.iter().enumerate() {
            let nz = lambda * dotv(c, v);
            out[3 * j] = det[j] + nz;
            out[3 * j + 1] = nz * nz;
            out[3 * j + 2] = nz.powi(3);
            if j == 0 {
                for (m, &q) in orders.iter().enumerate() {
                    out[3 * nh + m] = (det[0] + nz).powi(q as i32);
                }
            }
        }
    });

    let mut r = Report::new("noisy-ball");
    for (j, &a) in p.heights.iter().enumerate() {
        let tag = format!("a{:.3}", a / rr);
        let rel = [0.0, 0.0, a / rr];
        if let Some(exact) = g.exact_extension(&rel) {
            r.exact(&format!("{tag}_quadrature_vs_exact"), None, exact, det[j], 1e-6);
        }
        r.mc(&format!("{tag}_mean"), None, det[j], est[3 * j]);
        let pf = printed_ball_noise_factor(rr, a);
        r.mc(&format!("{tag}_noise_variance"), Some(lambda * lambda * alpha * pf * pf), s[j], est[3 * j + 1]);
        r.note(&format!("{tag}_noise_variance_log_form"), lambda * lambda * alpha * pf * pf, s[j], 1e-2);
        r.mc(&format!("{tag}_third_moment"), None, 0.0, est[3 * j + 2]);
    }
    if nh > 1 {
        let mc: Vec<f64> = (0..nh).map(|j| est[3 * j + 1].mean).collect();
        let mc_dec = mc.windows(2).all(|w| w[1] < w[0]);
        let or_dec = s.windows(2).all(|w| w[1] < w[0]);
        let or_inc = s.windows(2).all(|w| w[1] > w[0]);
        let mc_inc = mc.windows(2).all(|w| w[1] > w[0]);
        r.check("noise_variance_trend_matches_oracle", mc[nh - 1] - mc[0], (mc_dec && or_dec) || (mc_inc && or_inc));
        r.push_note_flag("noise_variance_decreases_toward_boundary", mc_dec);
        r.info("log_factor_near_boundary", printed_ball_noise_factor(rr, 0.999 * rr), None);
    }
    for (m, &q) in p.orders.iter().enumerate() {
        MomentReport::new(q, det[0], 1.0, s[0], est[3 * nh + m]).push_rows(&mut r, "solution");
    }
    Ok(r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CircleDistance {
    /// `min(|b - b'|, 2 pi - |b - b'|)`
    Angular,
    /// `2 R sin(|b - b'| / 2)`
    Chordal,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscNoiseParams {
    pub radius: f64,
    pub alpha: f64,
    pub eta: f64,
    pub distance: CircleDistance,
    pub n_boundary: usize,
    /// Evaluation points `(r, theta)`; the first carries moments and the two-point covariance with the second.
    pub points: Vec<(f64, f64)>,
    pub fd_step: f64,
    pub orders: Vec<u32>,
    pub n_samples: usize,
    pub seed: u64,
}

impl Default for DiscNoiseParams {
    fn default() -> Self {
        DiscNoiseParams {
            radius: 1.0,
            alpha: 1.0,
            eta: 0.5,
            distance: CircleDistance::Angular,
            n_boundary: 256,
            points: vec![(0.5, 0.3), (0.3, 2.0), (0.0, 0.0), (0.7, -1.2), (0.8, 4.0)],
            fd_step: 1e-3,
            orders: vec![2, 4],
            n_samples: 100_000,
            seed: 0,
        }
    }
}

/// The difference of arctangents in the printed moment formula for the disc.
pub fn printed_disc_arctan_term(radius: f64, r: f64, theta: f64) -> f64 {
    let c = (radius + r).abs() / (radius - r).abs();
    ((c * (-0.5 * theta).tan()).atan() - (c * (PI - 0.5 * theta).tan()).atan()) / (2.0 * PI)
}

fn circle_covariance(p: &DiscNoiseParams) -> DMatrix<f64> {
    let n = p.n_boundary;
    let h = 2.0 * PI / n as f64;
    DMatrix::from_fn(n, n, |i, j| {
        let d = (i as f64 - j as f64).abs() * h;
        let d = match p.distance {
            CircleDistance::Angular => d.min(2.0 * PI - d),
            CircleDistance::Chordal => 2.0 * p.radius * (0.5 * d).sin(),
        };
        p.alpha * (-d / p.eta).exp()
    })
}

/// Disc Poisson integral with boundary data `g + lambda F(beta)`.
pub fn noisy_boundary_disc(g: &BoundaryData, lambda: f64, p: &DiscNoiseParams) -> Result<Report> {
    check_samples(p.n_samples)?;
    ensure_admissible(&CovKernel::Exponential { alpha: p.alpha, xi: p.eta })?;
    let rr = p.radius;
    if p.points.len() < 2 {
        return Err(Error::InvalidArgument("need at least two evaluation points".into()));
    }
    for &(r, _) in &p.points {
        if !(0.0..rr).contains(&r) {
            return Err(Error::OutOfDomain(format!("r = {r} not in [0, {rr})")));
        }
    }
    let n = p.n_boundary;
    let h = 2.0 * PI / n as f64;
    let beta: Vec<f64> = (0..n).map(|k| k as f64 * h).collect();
    let gv: Vec<f64> = beta.iter().map(|b| g.eval_angle(*b)).collect();
    let coef_at = |x: f64, y: f64| -> Vec<f64> {
        let r = x.hypot(y);
        let t = y.atan2(x);
        beta.iter().map(|b| h / (2.0 * PI) * disc_poisson_kernel(rr, r, t, *b)).collect()
    };
    let fd = p.fd_step;
    let mut coef = Vec::new();
    let mut lap = Vec::new();
    for &(r, t) in &p.points {
        let (x, y) = (r * t.cos(), r * t.sin());
        let c0 = coef_at(x, y);
        let nb = [coef_at(x + fd, y), coef_at(x - fd, y), coef_at(x, y + fd), coef_at(x, y - fd)];
        let l: Vec<f64> = (0..n).map(|k| (nb.iter().map(|c| c[k]).sum::<f64>() - 4.0 * c0[k]) / (fd * fd)).collect();
        coef.push(c0);
        lap.push(l);
    }
    let det: Vec<f64> = coef.iter().map(|c| dotv(c, &gv)).collect();
    let lap_det: Vec<f64> = lap.iter().map(|c| dotv(c, &gv)).collect();
    let cov = circle_covariance(p);
    let s: Vec<f64> = coef.iter().map(|c| lambda * lambda * quad_form(&cov, c, c)).collect();
    let s01 = lambda * lambda * quad_form(&cov, &coef[0], &coef[1]);
    let mvn = Mvn::from_covariance(cov)?;
    let np = p.points.len();
    let orders = p.orders.clone();
    let k = 4 * np + 1 + orders.len();
    let est = mc_draws(&mvn, p.n_samples, p.seed, k, |v, out| {
        let mut val0 = 0.0;
        let mut val1 = 0.0;
        for j in 0..np {
            let nz = lambda * dotv(&coef[j], v);
            out[4 * j] = det[j] + nz;
            out[4 * j + 1] = nz * nz;
            out[4 * j + 2] = nz.powi(3);
            out[4 * j + 3] = lap_det[j] + lambda * dotv(&lap[j], v);
            if j == 0 {
                val0 = det[0] + nz;
            }
            if j == 1 {
                val1 = det[1] + nz;
            }
        }
        out[4 * np] = val0 * val1;
        for (m, &q) in orders.iter().enumerate() {
            out[4 * np + 1 + m] = val0.powi(q as i32);
        }
    });

    let mut r = Report::new("noisy-disc");
    for (j, &(rad, th)) in p.points.iter().enumerate() {
        let tag = format!("r{rad:.2}_t{th:.2}");
        let poisson = disc_poisson_eval(g, rr, rad, th, n)?;
        r.exact(&format!("{tag}_trapezoid_vs_poisson"), None, poisson, det[j], 1e-9);
        r.mc(&format!("{tag}_mean"), None, poisson, est[4 * j]);
        let t = printed_disc_arctan_term(rr, rad, th);
        r.mc(&format!("{tag}_noise_variance"), Some(t * t), s[j], est[4 * j + 1]);
        r.note(&format!("{tag}_volatility_arctan_form"), t * t, det[j] * det[j] + s[j], 1e-2);
        r.mc(&format!("{tag}_third_moment"), None, 0.0, est[4 * j + 2]);
        let lm = est[4 * j + 3].mean;
        r.check(&format!("{tag}_laplacian_mean_fd"), lm, lm.abs() <= 1e-3);
        if rad == 0.0 {
            r.note("center_volatility_limit_zero", 0.0, det[j] * det[j] + s[j], 1e-9);
            let flat = lambda * lambda * quad_form(&circle_covariance(p), &vec![h / (2.0 * PI); n], &vec![h / (2.0 * PI); n]);
            r.exact("center_noise_variance_flat_kernel", None, flat, s[j], 1e-10);
        }
    }
    r.mc("covariance_two_point", None, det[0] * det[1] + s01, est[4 * np]);
    for (m, &q) in p.orders.iter().enumerate() {
        MomentReport::new(q, det[0], 1.0, s[0], est[4 * np + 1 + m]).push_rows(&mut r, "solution");
    }
    Ok(r)
}
