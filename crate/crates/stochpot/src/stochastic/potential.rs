use std::f64::consts::PI;

use super::{binomial_moment, check_samples, covariance, dotv, mc_draws, quad_form, MomentConvention, MomentReport};
use crate::error::{Error, Result};
use crate::geometry::{build_spectral_grid, dist, norm, Domain, DomainGrid, MeasureKind, Point};
use crate::grf::{ensure_admissible, CovKernel, Mvn};
use crate::potentials::{ball_integral_closed, ball_newton_closed, ball_newton_gradient_closed, RieszSpec};
use crate::report::Report;

#[derive(Debug, Clone, PartialEq)]
pub struct RieszMomentParams {
    pub x: Point,
    pub partner: Point,
    pub orders: Vec<u32>,
    pub n_samples: usize,
    pub seed: u64,
}

impl Default for RieszMomentParams {
    fn default() -> Self {
        RieszMomentParams { x: [0.0, 0.0, 2.0], partner: [0.0, 1.5, 1.5], orders: vec![2, 4], n_samples: 100_000, seed: 0 }
    }
}

// gamma w_k / |x - y_k|^{n-a}, refusing points inside the singular-cell radius
fn riesz_coefficients(spec: &RieszSpec, x: &Point) -> Result<Vec<f64>> {
    let near = spec.grid.cell_h.map_or(0.0, |h| 0.5 * h * (spec.n as f64).sqrt());
    let e = spec.exponent();
    spec.grid
        .points
        .iter()
        .zip(&spec.grid.weights)
        .map(|(y, w)| {
            let d = dist(x, y);
            if d <= near || d == 0.0 {
                Err(Error::OutOfDomain(format!("{x:?} lies within the singular handling radius of a density node")))
            } else {
                Ok(spec.gamma * w / d.powf(e))
            }
        })
        .collect()
}

/// Riesz potential of `g + lambda F` at two points: mean, covariance and moments.
pub fn stochastic_riesz_moments(spec: &RieszSpec, lambda: f64, kernel: &CovKernel, p: &RieszMomentParams) -> Result<Report> {
    check_samples(p.n_samples)?;
    ensure_admissible(kernel)?;
    let alpha = kernel.variance()?;
    let cx = riesz_coefficients(spec, &p.x)?;
    let cp = riesz_coefficients(spec, &p.partner)?;
    let g: Vec<f64> = spec.grid.points.iter().map(|y| (spec.g)(y)).collect();
    let (dx, dp) = (dotv(&cx, &g), dotv(&cp, &g));
    let cov = covariance(kernel, &spec.grid.points)?;
    let (sxx, sxp) = (lambda * lambda * quad_form(&cov, &cx, &cx), lambda * lambda * quad_form(&cov, &cx, &cp));
    let mvn = Mvn::from_covariance(cov)?;
    let orders = p.orders.clone();
    let est = mc_draws(&mvn, p.n_samples, p.seed, 4 + orders.len(), |v, out| {
        let nx = lambda * dotv(&cx, v);
        let np = lambda * dotv(&cp, v);
        out[0] = dx + nx;
        out[1] = (dx + nx) * (dx + nx);
        out[2] = (dx + nx) * (dp + np);
        out[3] = nx.powi(3);
        for (j, &q) in orders.iter().enumerate() {
            out[4 + j] = (dx + nx).powi(q as i32);
        }
    });

    // effective noise scale if the perturbation were perfectly correlated over the support
    let unit_int: f64 = cx.iter().sum();
    let mut r = Report::new("riesz-moments");
    r.mc("mean", Some(dx), dx, est[0]);
    r.mc("volatility", Some(binomial_moment(dx, lambda * unit_int, alpha, 2, MomentConvention::Printed)), dx * dx + sxx, est[1]);
    r.note("volatility_perfect_correlation", binomial_moment(dx, lambda * unit_int, alpha, 2, MomentConvention::Printed), dx * dx + sxx, 1e-2);
    r.mc("covariance_partner", None, dx * dp + sxp, est[2]);
    r.mc("third_central_moment", None, 0.0, est[3]);
    for (j, &q) in p.orders.iter().enumerate() {
        MomentReport::new(q, dx, 1.0, sxx, est[4 + j]).push_rows(&mut r, "potential");
    }
    Ok(r)
}

/// Uniform ball `B_R(0)` with density `rho`, coupling `C`, and spectral order of the density grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonParams {
    pub radius: f64,
    pub rho: f64,
    pub c: f64,
    pub lambda: f64,
    pub kernel: CovKernel,
    pub order: usize,
    pub n_samples: usize,
    pub seed: u64,
}

impl Default for NewtonParams {
    fn default() -> Self {
        NewtonParams {
            radius: 1.0,
            rho: 1.0,
            c: 1.0,
            lambda: 1.0,
            kernel: CovKernel::GaussianCorr { alpha: 1.0, xi: 0.5 },
            order: 4,
            n_samples: 100_000,
            seed: 0,
        }
    }
}

impl NewtonParams {
    fn grid(&self) -> Result<DomainGrid> {
        build_spectral_grid(&Domain::ball(3, self.radius), MeasureKind::Volume, self.order)
    }

    fn exterior(&self, x: &Point) -> Result<f64> {
        let a = norm(x);
        if a <= self.radius {
            return Err(Error::OutOfDomain(format!("|x| = {a} must exceed R = {}", self.radius)));
        }
        Ok(a)
    }
}

/// Newtonian potential of the perturbed density `rho + lambda F` at exterior points.
///
/// `points[0]` carries the moments; the noise-variance ratio between `points[0]` and `points[1]` is tested.
pub fn noisy_density_newton(p: &NewtonParams, points: &[Point; 2], orders: &[u32]) -> Result<Report> {
    check_samples(p.n_samples)?;
    ensure_admissible(&p.kernel)?;
    let alpha = p.kernel.variance()?;
    let a = [p.exterior(&points[0])?, p.exterior(&points[1])?];
    let grid = p.grid()?;
    let k = p.c / (4.0 * PI);
    let coef: Vec<Vec<f64>> =
        points.iter().map(|x| grid.points.iter().zip(&grid.weights).map(|(y, w)| k * w / dist(x, y)).collect()).collect();
    let det: Vec<f64> = coef.iter().map(|c| p.rho * c.iter().sum::<f64>()).collect();
    let cov = covariance(&p.kernel, &grid.points)?;
    let lam = p.lambda;
    let s0 = lam * lam * quad_form(&cov, &coef[0], &coef[0]);
    let s1 = lam * lam * quad_form(&cov, &coef[1], &coef[1]);
    let ratio = s0 / s1;
    let mvn = Mvn::from_covariance(cov)?;
    let est = mc_draws(&mvn, p.n_samples, p.seed, 5 + orders.len(), |v, out| {
        let n0 = lam * dotv(&coef[0], v);
        let n1 = lam * dotv(&coef[1], v);
        out[0] = det[0] + n0;
        out[1] = det[1] + n1;
        out[2] = n0 * n0;
        out[3] = n0 * n0 - ratio * n1 * n1;
        out[4] = n0.powi(3);
        for (j, &q) in orders.iter().enumerate() {
            out[5 + j] = (det[0] + n0).powi(q as i32);
        }
    });

    let closed0 = ball_newton_closed(p.radius, a[0], p.c, p.rho)?;
    let closed1 = ball_newton_closed(p.radius, a[1], p.c, p.rho)?;
    let mut r = Report::new("newton-density");
    r.exact("static_quadrature", Some(closed0), closed0, det[0], 1e-3);
    r.mc("mean", Some(closed0), det[0], est[0]);
    r.mc("mean_partner", Some(closed1), det[1], est[1]);
    r.mc("noise_variance", None, s0, est[2]);
    r.mc("noise_variance_ratio_test", None, 0.0, est[3]);
    r.info("noise_variance_ratio", ratio, None);
    // decay of the moments as printed: R^3/|x|^3
    r.note("noise_variance_ratio_printed_decay", (a[1] / a[0]).powi(3), ratio, 1e-2);
    let i0 = ball_integral_closed(p.radius, a[0])? * k;
    let i1 = ball_integral_closed(p.radius, a[1])? * k;
    r.info("noise_variance_ratio_perfect_correlation", (i0 / i1).powi(2), None);
    r.mc("third_central_moment", None, 0.0, est[4]);
    for (j, &q) in orders.iter().enumerate() {
        let mr = MomentReport::new(q, det[0], 1.0, s0, est[5 + j]);
        mr.push_rows(&mut r, "potential");
        let printed = binomial_moment(closed0, lam * i0, alpha, q, MomentConvention::Printed);
        r.note(&format!("potential_moment{q}_printed_scale"), printed, mr.closed_form_gaussian, 1e-2);
    }
    r.extend(force_moments(p, (1.0, 1.0), &points[0], &points[1])?);
    r.extend(laplacian_moments(p, &[0.0, 0.0, 0.3 * p.radius], &points[0], &[1, 2])?);
    Ok(r)
}

/// `F = -m (C / 4 pi) grad int rho_bar(y) / |x - y|` on masses `m` at `x` and `m'` at `x'`.
pub fn force_moments(p: &NewtonParams, masses: (f64, f64), x: &Point, xp: &Point) -> Result<Report> {
    check_samples(p.n_samples)?;
    p.exterior(x)?;
    p.exterior(xp)?;
    let grid = p.grid()?;
    let k = p.c / (4.0 * PI);
    let lam = p.lambda;
    // z component of the force per unit density at each node
    let fz = |m: f64, x: &Point| -> Vec<f64> {
        grid.points.iter().zip(&grid.weights).map(|(y, w)| m * k * w * (x[2] - y[2]) / dist(x, y).powi(3)).collect()
    };
    let (c0, c1) = (fz(masses.0, x), fz(masses.1, xp));
    let mean0 = p.rho * c0.iter().sum::<f64>();
    let mean1 = p.rho * c1.iter().sum::<f64>();
    let g0 = ball_newton_gradient_closed(p.radius, x)?;
    let g1 = ball_newton_gradient_closed(p.radius, xp)?;
    let want0 = -masses.0 * k * p.rho * g0[2];
    let want1 = -masses.1 * k * p.rho * g1[2];
    let cov = covariance(&p.kernel, &grid.points)?;
    let s00 = lam * lam * quad_form(&cov, &c0, &c0);
    let s01 = lam * lam * quad_form(&cov, &c0, &c1);
    let mvn = Mvn::from_covariance(cov)?;
    let est = mc_draws(&mvn, p.n_samples, p.seed.wrapping_add(1), 3, |v, out| {
        let f0 = mean0 + lam * dotv(&c0, v);
        let f1 = mean1 + lam * dotv(&c1, v);
        out[0] = f0;
        out[1] = (f0 - mean0).powi(2);
        out[2] = (f0 - mean0) * (f1 - mean1);
    });

    let mut r = Report::new("force");
    let bare = norm(&g0);
    let closed_bare = 4.0 * PI * p.radius.powi(3) / (3.0 * norm(x).powi(2));
    r.exact("bare_gradient_magnitude", Some(closed_bare), closed_bare, bare, 1e-14);
    // central differences of the closed potential along the radial direction
    let a = norm(x);
    let h = 1e-4 * a;
    let fd = (ball_integral_closed(p.radius, a + h)? - ball_integral_closed(p.radius, a - h)?) / (2.0 * h);
    r.exact("bare_gradient_vs_central_difference", None, bare, fd.abs(), 1e-6);
    r.exact("force_mean_quadrature", None, want0, mean0, 1e-2);
    r.mc("force_mean_z", Some(masses.0 * bare * x[2].signum()), mean0, est[0]);
    r.note("force_magnitude_printed", masses.0 * p.c * p.rho * bare, want0.abs(), 1e-6);
    r.mc("force_variance_zz", None, s00, est[1]);
    r.mc("force_covariance_zz_partner", None, s01, est[2]);
    r.info("force_mean_partner_z", want1, None);
    Ok(r)
}

/// Laplacian of the perturbed potential: `-C rho_bar` inside the ball, zero outside.
pub fn laplacian_moments(p: &NewtonParams, interior: &Point, exterior: &Point, orders: &[u32]) -> Result<Report> {
    check_samples(p.n_samples)?;
    if norm(interior) >= p.radius {
        return Err(Error::OutOfDomain("interior point must lie inside the ball".into()));
    }
    p.exterior(exterior)?;
    let alpha = p.kernel.variance()?;
    let grid = p.grid()?;
    let mut pts = grid.points.clone();
    pts.push(*interior);
    let ni = pts.len() - 1;
    let mvn = Mvn::from_covariance(covariance(&p.kernel, &pts)?)?;
    let k = p.c / (4.0 * PI);
    let lam = p.lambda;
    let h = 1e-3;
    let pot = |v: &[f64], x: &Point| -> f64 {
        grid.points.iter().zip(&grid.weights).enumerate().map(|(i, (y, w))| k * w * (p.rho + lam * v[i]) / dist(x, y)).sum()
    };
    let est = mc_draws(&mvn, p.n_samples / 10, p.seed.wrapping_add(2), 1 + orders.len(), |v, out| {
        let c0 = pot(v, exterior);
        let mut lap = -6.0 * c0;
        for i in 0..3 {
            for s in [-1.0, 1.0] {
                let mut q = *exterior;
                q[i] += s * h;
                lap += pot(v, &q);
            }
        }
        out[0] = lap / (h * h);
        let li = -p.c * (p.rho + lam * v[ni]);
        for (j, &q) in orders.iter().enumerate() {
            out[1 + j] = li.powi(q as i32);
        }
    });
    let mut r = Report::new("laplacian");
    r.check("laplacian_mean_exterior", est[0].mean, est[0].mean.abs() <= 1e-5);
    for (j, &q) in orders.iter().enumerate() {
        let want = binomial_moment(-p.c * p.rho, p.c * lam, alpha, q, MomentConvention::Gaussian);
        r.mc(&format!("laplacian_interior_moment{q}"), None, want, est[1 + j]);
        if q == 1 {
            r.note("laplacian_interior_mean_printed_zero", 0.0, want, 1e-9);
        }
    }
    Ok(r)
}
