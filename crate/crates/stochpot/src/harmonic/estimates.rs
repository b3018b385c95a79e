use super::{grad_fd, laplacian_fd, BoundaryData, HarmonicFn};
use crate::error::{Error, Result};
use crate::geometry::{build_spectral_grid, dot, Domain, DomainGrid, MeasureKind, Point};

fn grad_sq(f: &HarmonicFn, x: &Point, n: usize) -> Result<f64> {
    let g = f.grad(x)?;
    Ok(g[..n].iter().map(|v| v * v).sum())
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct MvpResidual {
    pub center_value: f64,
    pub volume_mean: f64,
    pub surface_mean: f64,
    /// Largest `|f|` on the surface grid, used to make residuals relative.
    pub scale: f64,
}

impl MvpResidual {
    pub fn volume(&self) -> f64 {
        (self.volume_mean - self.center_value).abs()
    }

    pub fn surface(&self) -> f64 {
        (self.surface_mean - self.center_value).abs()
    }

    pub fn relative(&self) -> f64 {
        self.volume().max(self.surface()) / self.scale.max(f64::MIN_POSITIVE)
    }
}

/// Ball and sphere averages against the center value.
pub fn mvp_residual(f: &HarmonicFn, volume: &DomainGrid, surface: &DomainGrid) -> Result<MvpResidual> {
    if volume.measure_kind != MeasureKind::Volume || surface.measure_kind == MeasureKind::Volume {
        return Err(Error::InvalidPairing("mvp needs a volume grid and a boundary grid".into()));
    }
    let c = volume.domain.center();
    let center_value = f.eval(&c)?;
    let volume_mean = volume.try_integrate(|p| f.eval(p))? / volume.exact_measure;
    let surface_mean = surface.try_integrate(|p| f.eval(p))? / surface.exact_measure;
    let mut scale = center_value.abs();
    for p in &surface.points {
        scale = scale.max(f.eval(p)?.abs());
    }
    Ok(MvpResidual { center_value, volume_mean, surface_mean, scale })
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct MaxPrinciple {
    pub interior_max: f64,
    pub interior_min: f64,
    pub boundary_max: f64,
    pub boundary_min: f64,
    pub constant: bool,
    pub holds: bool,
    /// `max |f|^p` interior below boundary for p = 2, 3.
    pub power_holds: [bool; 2],
}

pub fn max_principle_check(f: &HarmonicFn, interior: &DomainGrid, boundary: &DomainGrid) -> Result<MaxPrinciple> {
    let vals = |g: &DomainGrid| g.points.iter().map(|p| f.eval(p)).collect::<Result<Vec<f64>>>();
    let vi = vals(interior)?;
    let vb = vals(boundary)?;
    let mx = |v: &[f64]| v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mn = |v: &[f64]| v.iter().cloned().fold(f64::INFINITY, f64::min);
    let (imax, imin, bmax, bmin) = (mx(&vi), mn(&vi), mx(&vb), mn(&vb));
    let spread = bmax.max(imax) - bmin.min(imin);
    let constant = spread <= 1e-12 * (1.0 + bmax.abs());
    let holds = if constant { true } else { imax < bmax && imin > bmin };
    let mut power_holds = [true; 2];
    for (k, p) in [2, 3].into_iter().enumerate() {
        let pi = vi.iter().map(|v| v.abs().powi(p)).fold(0.0, f64::max);
        let pb = vb.iter().map(|v| v.abs().powi(p)).fold(0.0, f64::max);
        power_holds[k] = if constant { true } else { pi <= pb };
    }
    Ok(MaxPrinciple { interior_max: imax, interior_min: imin, boundary_max: bmax, boundary_min: bmin, constant, holds, power_holds })
}

/// Stability and ordering of two disc Dirichlet solutions on sampled interior points.
///
/// Returns `(max interior |psi_f - psi_g|, max boundary |f - g|, ordering respected)`.
pub fn comparison_check(
    f: &BoundaryData,
    g: &BoundaryData,
    radius: f64,
    interior: &[(f64, f64)],
    n_boundary: usize,
) -> Result<(f64, f64, bool)> {
    let h = 2.0 * std::f64::consts::PI / n_boundary as f64;
    let diffs: Vec<f64> = (0..n_boundary).map(|k| f.eval_angle(k as f64 * h) - g.eval_angle(k as f64 * h)).collect();
    let bmax = diffs.iter().map(|d| d.abs()).fold(0.0, f64::max);
    let f_above = diffs.iter().all(|d| *d >= 0.0);
    let mut imax: f64 = 0.0;
    let mut ordered = true;
    for &(r, t) in interior {
        let a = super::disc_poisson_eval(f, radius, r, t, super::DEFAULT_DISC_QUAD)?;
        let b = super::disc_poisson_eval(g, radius, r, t, super::DEFAULT_DISC_QUAD)?;
        imax = imax.max((a - b).abs());
        if f_above && a < b - 1e-12 {
            ordered = false;
        }
    }
    Ok((imax, bmax, ordered))
}

/// `1/2 int |grad f|^2`.
pub fn dirichlet_energy(f: &HarmonicFn, grid: &DomainGrid) -> Result<f64> {
    let n = grid.dim();
    Ok(0.5 * grid.try_integrate(|p| grad_sq(f, p, n))?)
}

/// Energies of `f` and a competitor `phi` that shares its boundary values.
pub fn energy_comparison(
    f: &HarmonicFn,
    phi: &HarmonicFn,
    volume: &DomainGrid,
    boundary: &DomainGrid,
    tol: f64,
) -> Result<(f64, f64)> {
    for p in &boundary.points {
        let d = (f.eval(p)? - phi.eval(p)?).abs();
        if d > tol {
            return Err(Error::InvalidComparison(format!("boundary values differ by {d:e} at {p:?}")));
        }
    }
    Ok((dirichlet_energy(f, volume)?, dirichlet_energy(phi, volume)?))
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct CacciopolliSides {
    pub lhs: f64,
    pub rhs: f64,
}

impl CacciopolliSides {
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs * (1.0 + 1e-12) + 1e-300
    }
}

/// `int_{B_R} |grad f|^2` against `(4/R^2) int_{B_2R \ B_R} |f|^2`.
pub fn cacciopolli_check(f: &HarmonicFn, center: Point, radius: f64, n: usize, order: usize) -> Result<CacciopolliSides> {
    let inner = build_spectral_grid(&Domain::Ball { n, radius, center }, MeasureKind::Volume, order)?;
    let shell = build_spectral_grid(
        &Domain::Shell { n, r_inner: radius, r_outer: 2.0 * radius, center },
        MeasureKind::Volume,
        order,
    )?;
    let lhs = inner.try_integrate(|p| grad_sq(f, p, n))?;
    let rhs = 4.0 / (radius * radius) * shell.try_integrate(|p| Ok(f.eval(p)?.powi(2)))?;
    Ok(CacciopolliSides { lhs, rhs })
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct BochnerTerms {
    pub half_lap_grad_sq: f64,
    pub grad_lap_dot_grad: f64,
    pub hess_norm_sq: f64,
}

impl BochnerTerms {
    pub fn residual(&self) -> f64 {
        (self.half_lap_grad_sq - self.grad_lap_dot_grad - self.hess_norm_sq).abs()
    }

    /// `|1/2 lap |grad f|^2 - |Hess f|^2|`, the identity for harmonic f.
    pub fn harmonic_residual(&self) -> f64 {
        (self.half_lap_grad_sq - self.hess_norm_sq).abs()
    }
}

/// Terms of the flat Bochner formula, first two by nested central differences.
pub fn bochner_residual(f: &HarmonicFn, x: &Point, n: usize, h: f64) -> Result<BochnerTerms> {
    if !(h > 1e-7 && h < 1.0) {
        return Err(Error::IllConditionedStep(h));
    }
    let half_lap_grad_sq = 0.5 * laplacian_fd(|p| grad_sq(f, p, n), x, n, h)?;
    let gl = grad_fd(|p| f.laplacian(p, n), x, n, h)?;
    let g = f.grad(x)?;
    let hs = f.hessian(x)?;
    let mut hess_norm_sq = 0.0;
    for row in hs.iter().take(n) {
        for v in row.iter().take(n) {
            hess_norm_sq += v * v;
        }
    }
    Ok(BochnerTerms { half_lap_grad_sq, grad_lap_dot_grad: dot(&gl, &g), hess_norm_sq })
}

fn sphere_probe(center: Point, radius: f64, n: usize, order: usize) -> Result<Vec<Point>> {
    let dom = if n == 2 { Domain::Disc { radius, center } } else { Domain::Ball { n, radius, center } };
    let mut pts = build_spectral_grid(&dom, MeasureKind::Surface, order)?.points;
    for i in 0..n {
        for s in [-1.0, 1.0] {
            let mut p = center;
            p[i] += s * radius;
            pts.push(p);
        }
    }
    Ok(pts)
}

/// `R sup_{B_R} |grad f| / sup_{B_2R} |f|`, sups taken on the bounding spheres.
pub fn gradient_estimate_ratio(f: &HarmonicFn, center: Point, radius: f64, n: usize, order: usize) -> Result<f64> {
    let mut g: f64 = 0.0;
    for p in sphere_probe(center, radius, n, order)? {
        g = g.max(grad_sq(f, &p, n)?.sqrt());
    }
    let mut s: f64 = 0.0;
    for p in sphere_probe(center, 2.0 * radius, n, order)? {
        s = s.max(f.eval(&p)?.abs());
    }
    if s == 0.0 {
        return Ok(0.0);
    }
    Ok(g * radius / s)
}

/// `(X psi(y), Y psi(y))` with `X = R^{n-2}(R-d)/(R+d)^{n-1}`, `Y = R^{n-2}(R+d)/(R-d)^{n-1}`.
pub fn harnack_bounds(psi_y: f64, radius: f64, d: f64, n: usize) -> Result<(f64, f64)> {
    if !(radius > 0.0) || psi_y < 0.0 || d < 0.0 {
        return Err(Error::InvalidArgument("Harnack needs R > 0, d >= 0, psi >= 0".into()));
    }
    if d >= radius {
        return Err(Error::OutOfDomain(format!("d = {d} must be below R = {radius}")));
    }
    let k = n as i32;
    let x = radius.powi(k - 2) * (radius - d) / (radius + d).powi(k - 1);
    let y = radius.powi(k - 2) * (radius + d) / (radius - d).powi(k - 1);
    Ok((x * psi_y, y * psi_y))
}

/// The factors as printed with `R^{n-1}`; they coincide with the classical ones only at `R = 1`.
pub fn harnack_printed_factors(radius: f64, d: f64, n: usize) -> (f64, f64) {
    let k = n as i32;
    (
        radius.powi(k - 1) * (radius - d) / (radius + d).powi(k - 1),
        radius.powi(k - 1) * (radius + d) / (radius - d).powi(k - 1),
    )
}

/// `int_{B_2R} f^2 / int_{B_R} f^2`.
pub fn doubling_ratio(f: &HarmonicFn, center: Point, radius: f64, n: usize, order: usize) -> Result<f64> {
    let mk = |r: f64| build_spectral_grid(&Domain::Ball { n, radius: r, center }, MeasureKind::Volume, order);
    let big = mk(2.0 * radius)?.try_integrate(|p| Ok(f.eval(p)?.powi(2)))?;
    let small = mk(radius)?.try_integrate(|p| Ok(f.eval(p)?.powi(2)))?;
    Ok(big / small)
}

/// Relative error between the difference Laplacian of `e^{eta f}` and `eta^2 |grad f|^2 e^{eta f}`.
pub fn exp_field_residual(f: &HarmonicFn, eta: f64, x: &Point, n: usize, h: f64) -> Result<f64> {
    let lap = laplacian_fd(|p| Ok((eta * f.eval(p)?).exp()), x, n, h)?;
    let exact = eta * eta * grad_sq(f, x, n)? * (eta * f.eval(x)?).exp();
    Ok((lap - exact).abs() / exact.abs().max(1e-300))
}
