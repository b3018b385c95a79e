//! Domains, quadrature grids and curvilinear frames.
//!
//! Points are always stored as Cartesian `[x, y, z]`; planar points carry `z = 0`.

use std::f64::consts::PI;
use std::fmt;
use std::io::Write;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

pub type Point = [f64; 3];

pub const ORIGIN: Point = [0.0; 3];

#[inline]
pub fn sub(a: &Point, b: &Point) -> Point {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[inline]
pub fn add(a: &Point, b: &Point) -> Point {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

#[inline]
pub fn scale(a: &Point, s: f64) -> Point {
    [a[0] * s, a[1] * s, a[2] * s]
}

#[inline]
pub fn dot(a: &Point, b: &Point) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub fn norm(a: &Point) -> f64 {
    dot(a, a).sqrt()
}

#[inline]
pub fn dist(a: &Point, b: &Point) -> f64 {
    norm(&sub(a, b))
}

/// Volume of the n-ball, `pi^(n/2) R^n / Gamma(n/2 + 1)`.
pub fn ball_volume(n: usize, r: f64) -> Result<f64> {
    if n == 0 || !(r > 0.0) {
        return Err(Error::InvalidArgument(format!("ball_volume needs n >= 1 and R > 0, got n={n}, R={r}")));
    }
    Ok(PI.powf(n as f64 / 2.0) * r.powi(n as i32) / gamma_half_int(n + 2))
}

/// Area of the sphere bounding the n-ball of radius `r`.
pub fn sphere_area(n: usize, r: f64) -> Result<f64> {
    Ok(n as f64 * ball_volume(n, r)? / r)
}

// Gamma(k/2) for integer k >= 1.
fn gamma_half_int(k: usize) -> f64 {
    let (mut g, mut x) = if k % 2 == 0 { (1.0, 1.0) } else { (PI.sqrt(), 0.5) };
    while x + 0.5 < k as f64 / 2.0 {
        g *= x;
        x += 1.0;
    }
    g
}

/// `|B_2R \ B_R| / |B_R| = 2^n - 1`.
pub fn shell_volume_ratio(n: usize, r: f64) -> Result<f64> {
    if n == 0 || !(r > 0.0) {
        return Err(Error::InvalidArgument(format!("shell ratio needs n >= 1 and R > 0, got n={n}, R={r}")));
    }
    Ok(2f64.powi(n as i32) - 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    Ball { n: usize, radius: f64, center: Point },
    Disc { radius: f64, center: Point },
    Shell { n: usize, r_inner: f64, r_outer: f64, center: Point },
    /// Axis along z, `0 <= z <= length`.
    Cylinder { radius: f64, length: f64 },
}

impl Domain {
    pub fn ball(n: usize, radius: f64) -> Self {
        Domain::Ball { n, radius, center: ORIGIN }
    }

    pub fn unit_disc() -> Self {
        Domain::Disc { radius: 1.0, center: ORIGIN }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidArgument(m));
        match *self {
            Domain::Ball { n, radius, .. } => {
                if !(radius > 0.0) {
                    return bad(format!("radius must be positive, got {radius}"));
                }
                if n == 0 {
                    return bad("dimension must be positive".into());
                }
            }
            Domain::Disc { radius, .. } => {
                if !(radius > 0.0) {
                    return bad(format!("radius must be positive, got {radius}"));
                }
            }
            Domain::Shell { n, r_inner, r_outer, .. } => {
                if !(r_inner > 0.0 && r_inner < r_outer) {
                    return bad(format!("shell needs 0 < R_inner < R_outer, got {r_inner}, {r_outer}"));
                }
                if n == 0 {
                    return bad("dimension must be positive".into());
                }
            }
            Domain::Cylinder { radius, length } => {
                if !(radius > 0.0 && length > 0.0) {
                    return bad(format!("cylinder needs R, L > 0, got {radius}, {length}"));
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        match *self {
            Domain::Ball { n, .. } | Domain::Shell { n, .. } => n,
            Domain::Disc { .. } => 2,
            Domain::Cylinder { .. } => 3,
        }
    }

    pub fn center(&self) -> Point {
        match *self {
            Domain::Ball { center, .. } | Domain::Disc { center, .. } | Domain::Shell { center, .. } => center,
            Domain::Cylinder { length, .. } => [0.0, 0.0, length / 2.0],
        }
    }

    /// Outer radius for round domains.
    pub fn radius(&self) -> f64 {
        match *self {
            Domain::Ball { radius, .. } | Domain::Disc { radius, .. } | Domain::Cylinder { radius, .. } => radius,
            Domain::Shell { r_outer, .. } => r_outer,
        }
    }

    pub fn contains(&self, p: &Point) -> bool {
        match *self {
            Domain::Ball { radius, center, .. } | Domain::Disc { radius, center } => dist(p, &center) < radius,
            Domain::Shell { r_inner, r_outer, center, .. } => {
                let d = dist(p, &center);
                d > r_inner && d < r_outer
            }
            Domain::Cylinder { radius, length } => p[0].hypot(p[1]) < radius && p[2] > 0.0 && p[2] < length,
        }
    }

    pub fn exact_measure(&self, kind: MeasureKind) -> Result<f64> {
        self.validate()?;
        let unsupported = || Err(Error::UnsupportedGeometry(format!("{kind:?} measure of {self}")));
        match (*self, kind) {
            (Domain::Ball { n, radius, .. }, MeasureKind::Volume) => ball_volume(n, radius),
            (Domain::Ball { n, radius, .. }, MeasureKind::Surface) => sphere_area(n, radius),
            (Domain::Ball { n: 2, radius, .. }, MeasureKind::Curve) => Ok(2.0 * PI * radius),
            (Domain::Disc { radius, .. }, MeasureKind::Volume) => Ok(PI * radius * radius),
            (Domain::Disc { radius, .. }, MeasureKind::Surface | MeasureKind::Curve) => Ok(2.0 * PI * radius),
            (Domain::Shell { n, r_inner, r_outer, .. }, MeasureKind::Volume) => {
                Ok(ball_volume(n, r_outer)? - ball_volume(n, r_inner)?)
            }
            (Domain::Cylinder { radius, length }, MeasureKind::Volume) => Ok(PI * radius * radius * length),
            (Domain::Cylinder { radius, length }, MeasureKind::Surface) => Ok(2.0 * PI * radius * length),
            _ => unsupported(),
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = |p: &Point| format!("{}:{}:{}", p[0], p[1], p[2]);
        match self {
            Domain::Ball { n, radius, center } => write!(f, "ball(n={n};R={radius};c={})", c(center)),
            Domain::Disc { radius, center } => write!(f, "disc(R={radius};c={})", c(center)),
            Domain::Shell { n, r_inner, r_outer, center } => {
                write!(f, "shell(n={n};R_inner={r_inner};R_outer={r_outer};c={})", c(center))
            }
            Domain::Cylinder { radius, length } => write!(f, "cylinder(R={radius};L={length})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureKind {
    Volume,
    Surface,
    Curve,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// Tensor-product midpoint cells clipped to the domain.
    Midpoint,
    /// Gauss-Legendre radial/polar nodes with periodic trapezoid in angle.
    Spectral,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DomainGrid {
    pub domain: Domain,
    pub measure_kind: MeasureKind,
    pub scheme: Scheme,
    pub resolution: usize,
    pub points: Vec<Point>,
    pub weights: Vec<f64>,
    /// Edge length of the tensor cells for midpoint volume grids.
    pub cell_h: Option<f64>,
    pub exact_measure: f64,
}

impl DomainGrid {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Relative deviation of the weight sum from the exact measure.
    pub fn measure_error(&self) -> f64 {
        (self.total_weight() - self.exact_measure).abs() / self.exact_measure
    }

    pub fn integrate(&self, mut f: impl FnMut(&Point) -> f64) -> f64 {
        self.points.iter().zip(&self.weights).map(|(p, w)| w * f(p)).sum()
    }

    pub fn try_integrate(&self, mut f: impl FnMut(&Point) -> Result<f64>) -> Result<f64> {
        let mut s = 0.0;
        for (p, w) in self.points.iter().zip(&self.weights) {
            s += w * f(p)?;
        }
        Ok(s)
    }

    pub fn average(&self, f: impl FnMut(&Point) -> f64) -> f64 {
        self.integrate(f) / self.total_weight()
    }

    pub fn descriptor(&self) -> String {
        format!(
            "domain={} measure={:?} scheme={:?} resolution={} nodes={} measure_error={:.3e}",
            self.domain,
            self.measure_kind,
            self.scheme,
            self.resolution,
            self.len(),
            self.measure_error()
        )
        .to_lowercase()
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "# {}", self.descriptor())?;
        let n = self.dim();
        let cols = ["x", "y", "z"];
        writeln!(w, "{},weight", cols[..n].join(","))?;
        for (p, wt) in self.points.iter().zip(&self.weights) {
            let coords: Vec<String> = p[..n].iter().map(|v| format!("{v:.17e}")).collect();
            writeln!(w, "{},{wt:.17e}", coords.join(","))?;
        }
        Ok(())
    }
}

const SUBSAMPLES: usize = 8;

/// Cells across the bounding box diameter for `build_grid` when nothing else is asked for.
pub const DEFAULT_RESOLUTION: usize = 24;

pub fn build_grid(domain: &Domain, kind: MeasureKind, resolution: usize) -> Result<DomainGrid> {
    domain.validate()?;
    if resolution < 8 {
        return Err(Error::InvalidArgument(format!("resolution must be >= 8, got {resolution}")));
    }
    let exact = domain.exact_measure(kind)?;
    let (points, weights, cell_h) = match (domain, kind) {
        (_, MeasureKind::Volume) if matches!(domain.dim(), 2 | 3) => {
            let (p, w, h) = clipped_volume(domain, resolution);
            (p, w, Some(h))
        }
        (Domain::Ball { n: 3, radius, center }, MeasureKind::Surface) => {
            let (p, w) = latlong_sphere(*radius, center, resolution);
            (p, w, None)
        }
        (Domain::Disc { radius, center } | Domain::Ball { n: 2, radius, center }, MeasureKind::Surface | MeasureKind::Curve) => {
            let (p, w) = circle_nodes(*radius, center, 4 * resolution);
            (p, w, None)
        }
        (Domain::Cylinder { radius, length }, MeasureKind::Surface) => {
            let nphi = 4 * resolution;
            let nz = ((resolution as f64) * length / radius).ceil().max(1.0) as usize;
            let dz = length / nz as f64;
            let dphi = 2.0 * PI / nphi as f64;
            let mut p = Vec::with_capacity(nphi * nz);
            let mut w = Vec::with_capacity(nphi * nz);
            for k in 0..nz {
                let z = (k as f64 + 0.5) * dz;
                for j in 0..nphi {
                    let phi = j as f64 * dphi;
                    p.push([radius * phi.cos(), radius * phi.sin(), z]);
                    w.push(radius * dphi * dz);
                }
            }
            (p, w, None)
        }
        _ => return Err(Error::UnsupportedGeometry(format!("{kind:?} grid on {domain}"))),
    };
    Ok(DomainGrid {
        domain: domain.clone(),
        measure_kind: kind,
        scheme: Scheme::Midpoint,
        resolution,
        points,
        weights,
        cell_h,
        exact_measure: exact,
    })
}

fn circle_nodes(radius: f64, center: &Point, n: usize) -> (Vec<Point>, Vec<f64>) {
    let d = 2.0 * PI / n as f64;
    let p = (0..n)
        .map(|k| {
            let b = k as f64 * d;
            [center[0] + radius * b.cos(), center[1] + radius * b.sin(), center[2]]
        })
        .collect();
    (p, vec![radius * d; n])
}

// Bands in theta with exact band areas, uniform in phi.
fn latlong_sphere(radius: f64, center: &Point, res: usize) -> (Vec<Point>, Vec<f64>) {
    let nt = res;
    let np = 2 * res;
    let dt = PI / nt as f64;
    let dp = 2.0 * PI / np as f64;
    let mut p = Vec::with_capacity(nt * np);
    let mut w = Vec::with_capacity(nt * np);
    for i in 0..nt {
        let (t0, t1) = (i as f64 * dt, (i + 1) as f64 * dt);
        let t = 0.5 * (t0 + t1);
        let band = radius * radius * (t0.cos() - t1.cos()) * dp;
        for j in 0..np {
            let f = (j as f64 + 0.5) * dp;
            p.push([
                center[0] + radius * t.sin() * f.cos(),
                center[1] + radius * t.sin() * f.sin(),
                center[2] + radius * t.cos(),
            ]);
            w.push(band);
        }
    }
    (p, w)
}

// Inside intervals along y for a transverse position (x[, z]).
fn y_intervals(domain: &Domain, x: f64, z: f64) -> [(f64, f64); 2] {
    const NONE: (f64, f64) = (0.0, 0.0);
    let chord = |r: f64, rho2: f64, cy: f64| {
        let s = r * r - rho2;
        if s > 0.0 {
            let h = s.sqrt();
            (cy - h, cy + h)
        } else {
            NONE
        }
    };
    match *domain {
        Domain::Ball { n, radius, center } => {
            let rho2 = (x - center[0]).powi(2) + if n == 3 { (z - center[2]).powi(2) } else { 0.0 };
            [chord(radius, rho2, center[1]), NONE]
        }
        Domain::Disc { radius, center } => [chord(radius, (x - center[0]).powi(2), center[1]), NONE],
        Domain::Shell { n, r_inner, r_outer, center } => {
            let rho2 = (x - center[0]).powi(2) + if n == 3 { (z - center[2]).powi(2) } else { 0.0 };
            let (a0, a1) = chord(r_outer, rho2, center[1]);
            let (b0, b1) = chord(r_inner, rho2, center[1]);
            if b1 > b0 {
                [(a0, b0), (b1, a1)]
            } else {
                [(a0, a1), NONE]
            }
        }
        Domain::Cylinder { radius, length } => {
            if z > 0.0 && z < length {
                [chord(radius, x * x, 0.0), NONE]
            } else {
                [NONE, NONE]
            }
        }
    }
}

// Radial distance range [min, max] from the domain axis/center over an axis-aligned box.
fn box_radial_range(domain: &Domain, lo: &Point, hi: &Point) -> (f64, f64) {
    let (c, axes): (Point, &[usize]) = match *domain {
        Domain::Ball { n, center, .. } | Domain::Shell { n, center, .. } => (center, if n == 3 { &[0, 1, 2] } else { &[0, 1] }),
        Domain::Disc { center, .. } => (center, &[0, 1]),
        Domain::Cylinder { .. } => (ORIGIN, &[0, 1]),
    };
    let (mut dmin, mut dmax) = (0.0, 0.0);
    for &a in axes {
        let near = c[a].clamp(lo[a], hi[a]) - c[a];
        let far = (lo[a] - c[a]).abs().max((hi[a] - c[a]).abs());
        dmin += near * near;
        dmax += far * far;
    }
    (dmin.sqrt(), dmax.sqrt())
}

fn clipped_volume(domain: &Domain, res: usize) -> (Vec<Point>, Vec<f64>, f64) {
    let n = domain.dim();
    let r = domain.radius();
    let c = domain.center();
    let h = 2.0 * r / res as f64;
    let (lo, counts) = match *domain {
        Domain::Cylinder { length, .. } => {
            let nz = (length / h).ceil() as usize;
            ([-r, -r, 0.0], [res, res, nz])
        }
        _ => ([c[0] - r, c[1] - r, c[2] - r], [res, res, if n == 3 { res } else { 1 }]),
    };
    let hz = match *domain {
        Domain::Cylinder { length, .. } => length / counts[2] as f64,
        _ => h,
    };
    let cell_vol = if n == 3 { h * h * hz } else { h * h };
    let (inner_r, outer_r) = match *domain {
        Domain::Shell { r_inner, r_outer, .. } => (r_inner, r_outer),
        _ => (0.0, r),
    };

    let mut points = Vec::new();
    let mut weights = Vec::new();
    for k in 0..counts[2] {
        for j in 0..counts[1] {
            for i in 0..counts[0] {
                let b0 = [lo[0] + i as f64 * h, lo[1] + j as f64 * h, if n == 3 { lo[2] + k as f64 * hz } else { 0.0 }];
                let b1 = [b0[0] + h, b0[1] + h, if n == 3 { b0[2] + hz } else { 0.0 }];
                let (dmin, dmax) = box_radial_range(domain, &b0, &b1);
                if dmin >= outer_r || dmax <= inner_r {
                    continue;
                }
                let mid = [0.5 * (b0[0] + b1[0]), 0.5 * (b0[1] + b1[1]), 0.5 * (b0[2] + b1[2])];
                if dmax <= outer_r && dmin >= inner_r {
                    points.push(mid);
                    weights.push(cell_vol);
                    continue;
                }
                // partial cell: exact overlap along y, midpoint subsamples across
                let sz = if n == 3 { SUBSAMPLES } else { 1 };
                let (mut len, mut mx, mut my, mut mz) = (0.0, 0.0, 0.0, 0.0);
                for a in 0..SUBSAMPLES {
                    let x = b0[0] + (a as f64 + 0.5) * h / SUBSAMPLES as f64;
                    for b in 0..sz {
                        let z = if n == 3 { b0[2] + (b as f64 + 0.5) * hz / sz as f64 } else { 0.0 };
                        for (y0, y1) in y_intervals(domain, x, z) {
                            let s0 = y0.max(b0[1]);
                            let s1 = y1.min(b1[1]);
                            if s1 > s0 {
                                let l = s1 - s0;
                                len += l;
                                mx += x * l;
                                my += 0.5 * (s0 + s1) * l;
                                mz += z * l;
                            }
                        }
                    }
                }
                if len > 0.0 {
                    let frac = len / (h * (SUBSAMPLES * sz) as f64);
                    points.push([mx / len, my / len, mz / len]);
                    weights.push(frac * cell_vol);
                }
            }
        }
    }
    (points, weights, h)
}

/// Gauss-Legendre nodes and weights on [-1, 1] (Golub-Welsch).
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(order >= 1);
    let mut j = DMatrix::<f64>::zeros(order, order);
    for k in 1..order {
        let kf = k as f64;
        let b = kf / (4.0 * kf * kf - 1.0).sqrt();
        j[(k, k - 1)] = b;
        j[(k - 1, k)] = b;
    }
    let eig = SymmetricEigen::new(j);
    let mut pairs: Vec<(f64, f64)> = (0..order)
        .map(|i| (eig.eigenvalues[i], 2.0 * eig.eigenvectors[(0, i)].powi(2)))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.into_iter().unzip()
}

/// High-order product grids for smooth integrands (mean values, energies).
pub fn build_spectral_grid(domain: &Domain, kind: MeasureKind, order: usize) -> Result<DomainGrid> {
    domain.validate()?;
    if order < 2 {
        return Err(Error::InvalidArgument(format!("spectral order must be >= 2, got {order}")));
    }
    let exact = domain.exact_measure(kind)?;
    let (gx, gw) = gauss_legendre(order);
    let nphi = 2 * order;
    let dphi = 2.0 * PI / nphi as f64;
    let mut points = Vec::new();
    let mut weights = Vec::new();

    let radial = |r0: f64, r1: f64| -> Vec<(f64, f64)> {
        gx.iter().zip(&gw).map(|(x, w)| (r0 + 0.5 * (r1 - r0) * (x + 1.0), 0.5 * (r1 - r0) * w)).collect()
    };

    match (domain, kind) {
        (Domain::Ball { n: 3, .. } | Domain::Shell { n: 3, .. }, MeasureKind::Volume) => {
            let c = domain.center();
            let (r0, r1) = match *domain {
                Domain::Shell { r_inner, r_outer, .. } => (r_inner, r_outer),
                _ => (0.0, domain.radius()),
            };
            for (r, wr) in radial(r0, r1) {
                for (mu, wm) in gx.iter().zip(&gw) {
                    let s = (1.0 - mu * mu).sqrt();
                    for k in 0..nphi {
                        let f = (k as f64 + 0.5) * dphi;
                        points.push([c[0] + r * s * f.cos(), c[1] + r * s * f.sin(), c[2] + r * mu]);
                        weights.push(wr * r * r * wm * dphi);
                    }
                }
            }
        }
        (Domain::Ball { n: 3, radius, center }, MeasureKind::Surface) => {
            for (mu, wm) in gx.iter().zip(&gw) {
                let s = (1.0 - mu * mu).sqrt();
                for k in 0..nphi {
                    let f = (k as f64 + 0.5) * dphi;
                    points.push([center[0] + radius * s * f.cos(), center[1] + radius * s * f.sin(), center[2] + radius * mu]);
                    weights.push(radius * radius * wm * dphi);
                }
            }
        }
        (Domain::Disc { .. } | Domain::Ball { n: 2, .. } | Domain::Shell { n: 2, .. }, MeasureKind::Volume) => {
            let c = domain.center();
            let (r0, r1) = match *domain {
                Domain::Shell { r_inner, r_outer, .. } => (r_inner, r_outer),
                _ => (0.0, domain.radius()),
            };
            for (r, wr) in radial(r0, r1) {
                for k in 0..nphi {
                    let f = (k as f64 + 0.5) * dphi;
                    points.push([c[0] + r * f.cos(), c[1] + r * f.sin(), c[2]]);
                    weights.push(wr * r * dphi);
                }
            }
        }
        (Domain::Disc { radius, center } | Domain::Ball { n: 2, radius, center }, MeasureKind::Surface | MeasureKind::Curve) => {
            let (p, w) = circle_nodes(*radius, center, nphi);
            points = p;
            weights = w;
        }
        (Domain::Cylinder { radius, length }, MeasureKind::Volume) => {
            for (r, wr) in radial(0.0, *radius) {
                for (z, wz) in radial(0.0, *length) {
                    for k in 0..nphi {
                        let f = (k as f64 + 0.5) * dphi;
                        points.push([r * f.cos(), r * f.sin(), z]);
                        weights.push(wr * r * wz * dphi);
                    }
                }
            }
        }
        _ => return Err(Error::UnsupportedGeometry(format!("spectral {kind:?} grid on {domain}"))),
    }
    Ok(DomainGrid {
        domain: domain.clone(),
        measure_kind: kind,
        scheme: Scheme::Spectral,
        resolution: order,
        points,
        weights,
        cell_h: None,
        exact_measure: exact,
    })
}

/// Sphere grid with Gauss-Legendre polar panels refined geometrically toward the north pole of
/// `center`, down to a first panel of width `theta0`. Resolves kernels peaked at the pole such as
/// the Poisson kernel of an axial point near the surface. Rings carry `max(8, nphi sin theta)` azimuthal nodes.
pub fn build_polar_graded_sphere(radius: f64, center: Point, theta0: f64, order: usize, nphi: usize) -> Result<DomainGrid> {
    let domain = Domain::Ball { n: 3, radius, center };
    domain.validate()?;
    if order < 2 || nphi < 8 {
        return Err(Error::InvalidArgument(format!("need order >= 2 and nphi >= 8, got {order}, {nphi}")));
    }
    if !(theta0 > 0.0 && theta0 < PI) {
        return Err(Error::InvalidArgument(format!("first panel width must lie in (0, pi), got {theta0}")));
    }
    let mut edges = vec![0.0];
    let mut t = theta0;
    while t < 0.5 * PI {
        edges.push(t);
        t *= 2.0;
    }
    edges.push(0.5 * PI);
    edges.push(PI);
    let (gx, gw) = gauss_legendre(order);
    let mut points = Vec::new();
    let mut weights = Vec::new();
    for e in edges.windows(2) {
        let h = 0.5 * (e[1] - e[0]);
        for (x, w) in gx.iter().zip(&gw) {
            let th = e[0] + h * (x + 1.0);
            let (st, ct) = th.sin_cos();
            let m = ((nphi as f64 * st).ceil() as usize).max(8);
            let dphi = 2.0 * PI / m as f64;
            for k in 0..m {
                let f = (k as f64 + 0.5) * dphi;
                points.push([center[0] + radius * st * f.cos(), center[1] + radius * st * f.sin(), center[2] + radius * ct]);
                weights.push(radius * radius * st * h * w * dphi);
            }
        }
    }
    Ok(DomainGrid {
        exact_measure: domain.exact_measure(MeasureKind::Surface)?,
        domain,
        measure_kind: MeasureKind::Surface,
        scheme: Scheme::Spectral,
        resolution: order,
        points,
        weights,
        cell_h: None,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub points: Vec<Point>,
    pub closed: bool,
}

impl Curve {
    pub fn new(points: Vec<Point>, closed: bool) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidCurve("a curve needs at least two samples".into()));
        }
        if closed && points.first() != points.last() {
            return Err(Error::InvalidCurve("closed curve must end where it starts".into()));
        }
        Ok(Curve { points, closed })
    }

    /// Circle in the xy-plane traversed counter-clockwise with `n` segments.
    pub fn circle(center: Point, radius: f64, n: usize) -> Self {
        let mut points: Vec<Point> = (0..n)
            .map(|k| {
                let t = 2.0 * PI * k as f64 / n as f64;
                [center[0] + radius * t.cos(), center[1] + radius * t.sin(), center[2]]
            })
            .collect();
        points.push(points[0]);
        Curve { points, closed: true }
    }

    pub fn segment(a: Point, b: Point, n: usize) -> Self {
        let points = (0..=n).map(|k| add(&a, &scale(&sub(&b, &a), k as f64 / n as f64))).collect();
        Curve { points, closed: false }
    }

    pub fn start(&self) -> Point {
        self.points[0]
    }

    pub fn end(&self) -> Point {
        *self.points.last().unwrap()
    }

    /// `(midpoint, displacement)` per segment.
    pub fn segments(&self) -> Vec<(Point, Point)> {
        self.points
            .windows(2)
            .map(|w| (scale(&add(&w[0], &w[1]), 0.5), sub(&w[1], &w[0])))
            .collect()
    }

    pub fn length(&self) -> f64 {
        self.segments().iter().map(|(_, d)| norm(d)).sum()
    }
}

/// `(r, theta, phi)` with theta the polar angle from +z.
pub fn to_spherical(p: &Point) -> Point {
    let r = norm(p);
    let theta = if r > 0.0 { (p[2] / r).clamp(-1.0, 1.0).acos() } else { 0.0 };
    [r, theta, p[1].atan2(p[0])]
}

pub fn from_spherical(s: &Point) -> Point {
    let [r, t, f] = *s;
    [r * t.sin() * f.cos(), r * t.sin() * f.sin(), r * t.cos()]
}

/// `(r, phi, z)` about the z axis.
pub fn to_cylindrical(p: &Point) -> Point {
    [p[0].hypot(p[1]), p[1].atan2(p[0]), p[2]]
}

pub fn from_cylindrical(c: &Point) -> Point {
    [c[0] * c[1].cos(), c[0] * c[1].sin(), c[2]]
}

/// `(r, theta)` in the xy-plane.
pub fn to_polar(p: &Point) -> [f64; 2] {
    [p[0].hypot(p[1]), p[1].atan2(p[0])]
}

pub fn from_polar(r: f64, theta: f64) -> Point {
    [r * theta.cos(), r * theta.sin(), 0.0]
}
