use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{dist, norm, sphere_area, sub, DomainGrid, MeasureKind, Point};

pub const DEFAULT_DISC_QUAD: usize = 512;

type DirFn = Arc<dyn Fn(&Point) -> f64 + Send + Sync>;

/// Dirichlet data as a function of the outward unit direction.
#[derive(Clone)]
pub enum BoundaryData {
    Constant(f64),
    /// `Re (u_x + i u_y)^m`, i.e. `cos(m theta)` on the circle.
    Cos(u32),
    /// `Im (u_x + i u_y)^m`
    Sin(u32),
    /// `u_z`
    ZDir,
    /// `hi` where `u_y >= 0`, else `lo`.
    Step { lo: f64, hi: f64 },
    Scaled(f64, Box<BoundaryData>),
    Sum(Vec<BoundaryData>),
    Custom(DirFn),
}

impl fmt::Debug for BoundaryData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for BoundaryData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundaryData::Constant(c) => write!(f, "const:{c}"),
            BoundaryData::Cos(m) => write!(f, "cos{m}"),
            BoundaryData::Sin(m) => write!(f, "sin{m}"),
            BoundaryData::ZDir => write!(f, "zdir"),
            BoundaryData::Step { lo, hi } => write!(f, "step:{lo}:{hi}"),
            BoundaryData::Scaled(c, g) => write!(f, "{c}*({g})"),
            BoundaryData::Sum(t) => {
                let parts: Vec<String> = t.iter().map(|g| g.to_string()).collect();
                write!(f, "{}", parts.join("+"))
            }
            BoundaryData::Custom(_) => write!(f, "custom"),
        }
    }
}

impl std::str::FromStr for BoundaryData {
    type Err = Error;

    /// Presets: `const:C`, `cosM`, `cos:M`, `sinM`, `sin:M`, `zdir`, `step`, `step:LO:HI`, joined by `+`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.contains('+') {
            return Ok(BoundaryData::Sum(s.split('+').map(str::parse).collect::<Result<_>>()?));
        }
        let bad = || Error::Config(format!("unknown boundary preset '{s}'"));
        let num = |t: &str| t.trim().parse::<f64>().map_err(|_| bad());
        let order = |t: &str| t.trim_start_matches(':').parse::<u32>().map_err(|_| bad());
        if let Some(c) = s.strip_prefix("const:") {
            Ok(BoundaryData::Constant(num(c)?))
        } else if s == "zdir" {
            Ok(BoundaryData::ZDir)
        } else if s == "step" {
            Ok(BoundaryData::Step { lo: 0.0, hi: 1.0 })
        } else if let Some(r) = s.strip_prefix("step:") {
            let (a, b) = r.split_once(':').ok_or_else(bad)?;
            Ok(BoundaryData::Step { lo: num(a)?, hi: num(b)? })
        } else if let Some(m) = s.strip_prefix("cos") {
            Ok(BoundaryData::Cos(order(m)?))
        } else if let Some(m) = s.strip_prefix("sin") {
            Ok(BoundaryData::Sin(order(m)?))
        } else {
            Err(bad())
        }
    }
}

impl BoundaryData {
    pub fn eval_direction(&self, u: &Point) -> f64 {
        match self {
            BoundaryData::Constant(c) => *c,
            BoundaryData::Cos(m) => Complex64::new(u[0], u[1]).powu(*m).re,
            BoundaryData::Sin(m) => Complex64::new(u[0], u[1]).powu(*m).im,
            BoundaryData::ZDir => u[2],
            BoundaryData::Step { lo, hi } => {
                if u[1] >= 0.0 {
                    *hi
                } else {
                    *lo
                }
            }
            BoundaryData::Scaled(c, g) => c * g.eval_direction(u),
            BoundaryData::Sum(t) => t.iter().map(|g| g.eval_direction(u)).sum(),
            BoundaryData::Custom(f) => f(u),
        }
    }

    pub fn eval_angle(&self, theta: f64) -> f64 {
        self.eval_direction(&[theta.cos(), theta.sin(), 0.0])
    }

    /// Value at a boundary point of the sphere `|y - center| = radius`.
    pub fn eval_point(&self, y: &Point, center: &Point, radius: f64) -> f64 {
        let d = sub(y, center);
        let r = norm(&d);
        let s = if r > 0.0 { 1.0 / r } else { 1.0 / radius };
        self.eval_direction(&[d[0] * s, d[1] * s, d[2] * s])
    }

    /// Exact harmonic extension at `rel = (x - center)/R` where one is known in closed form.
    ///
    /// Valid on both the disc and the 3-ball because `Re/Im (x + iy)^m` and `z` are harmonic in any dimension.
    pub fn exact_extension(&self, rel: &Point) -> Option<f64> {
        match self {
            BoundaryData::Constant(c) => Some(*c),
            BoundaryData::Cos(m) => Some(Complex64::new(rel[0], rel[1]).powu(*m).re),
            BoundaryData::Sin(m) => Some(Complex64::new(rel[0], rel[1]).powu(*m).im),
            BoundaryData::ZDir => Some(rel[2]),
            BoundaryData::Scaled(c, g) => g.exact_extension(rel).map(|v| c * v),
            BoundaryData::Sum(t) => t.iter().map(|g| g.exact_extension(rel)).sum(),
            BoundaryData::Step { .. } | BoundaryData::Custom(_) => None,
        }
    }

    pub fn sup_abs_bound(&self) -> Option<f64> {
        match self {
            BoundaryData::Constant(c) => Some(c.abs()),
            BoundaryData::Cos(_) | BoundaryData::Sin(_) | BoundaryData::ZDir => Some(1.0),
            BoundaryData::Step { lo, hi } => Some(lo.abs().max(hi.abs())),
            BoundaryData::Scaled(c, g) => g.sup_abs_bound().map(|v| c.abs() * v),
            BoundaryData::Sum(t) => t.iter().map(|g| g.sup_abs_bound()).sum(),
            BoundaryData::Custom(_) => None,
        }
    }
}

/// `A_0..A_M`, `B_0..B_M` (with `B_0 = 0`) of the boundary series.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierCoeffs {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

pub fn disc_fourier_solve(g: &BoundaryData, modes: usize) -> Result<FourierCoeffs> {
    if modes < 1 {
        return Err(Error::InvalidArgument("need at least one Fourier mode".into()));
    }
    let nq = (8 * modes).max(1024);
    let h = 2.0 * PI / nq as f64;
    let vals: Vec<f64> = (0..nq).map(|k| g.eval_angle(k as f64 * h)).collect();
    let mut a = vec![0.0; modes + 1];
    let mut b = vec![0.0; modes + 1];
    for m in 0..=modes {
        let (mut sa, mut sb) = (0.0, 0.0);
        for (k, v) in vals.iter().enumerate() {
            let t = (m * k % nq) as f64 * h;
            sa += v * t.cos();
            sb += v * t.sin();
        }
        a[m] = sa * h / PI;
        b[m] = if m == 0 { 0.0 } else { sb * h / PI };
    }
    Ok(FourierCoeffs { a, b })
}

fn check_disc(radius: f64, r: f64) -> Result<()> {
    if !(radius > 0.0) {
        return Err(Error::InvalidArgument(format!("radius must be positive, got {radius}")));
    }
    if !(0.0..radius).contains(&r) {
        return Err(Error::OutOfDomain(format!("r = {r} not in [0, {radius})")));
    }
    Ok(())
}

pub fn disc_fourier_eval(c: &FourierCoeffs, radius: f64, r: f64, theta: f64) -> Result<f64> {
    check_disc(radius, r)?;
    let q = r / radius;
    let mut s = 0.5 * c.a[0];
    let mut qm = 1.0;
    for m in 1..c.a.len() {
        qm *= q;
        if qm == 0.0 {
            break;
        }
        let t = m as f64 * theta;
        s += qm * (c.a[m] * t.cos() + c.b[m] * t.sin());
    }
    Ok(s)
}

pub fn disc_poisson_kernel(radius: f64, r: f64, theta: f64, beta: f64) -> f64 {
    (radius * radius - r * r) / (radius * radius - 2.0 * r * radius * (theta - beta).cos() + r * r)
}

/// Poisson integral by the periodic trapezoid rule; switches to the series above `r = 0.95 R`.
pub fn disc_poisson_eval(g: &BoundaryData, radius: f64, r: f64, theta: f64, quad: usize) -> Result<f64> {
    check_disc(radius, r)?;
    if r > 0.95 * radius {
        // (r/R)^M below 1e-16
        let m = ((-16.0 * 10f64.ln()) / (r / radius).ln()).ceil().clamp(64.0, 100_000.0) as usize;
        return disc_fourier_eval(&disc_fourier_solve(g, m)?, radius, r, theta);
    }
    let n = quad.max(8);
    let h = 2.0 * PI / n as f64;
    let s: f64 = (0..n)
        .map(|k| {
            let b = k as f64 * h;
            disc_poisson_kernel(radius, r, theta, b) * g.eval_angle(b)
        })
        .sum();
    Ok(s * h / (2.0 * PI))
}

/// Dirichlet Green function of the 3-ball `B_R(p)`, with `lap G = delta`.
pub fn ball_green(x: &Point, y: &Point, radius: f64, p: &Point) -> Result<f64> {
    let dx = sub(x, p);
    let a = norm(&dx);
    if a >= radius || dist(y, p) > radius {
        return Err(Error::OutOfDomain("Green function needs x inside and y in the closed ball".into()));
    }
    if x == y {
        return Err(Error::SingularPair);
    }
    let free = -1.0 / (4.0 * PI * dist(x, y));
    if a == 0.0 {
        return Ok(free + 1.0 / (4.0 * PI * radius));
    }
    let s = radius * radius / (a * a);
    let image = [s * dx[0], s * dx[1], s * dx[2]];
    let dy = sub(y, p);
    Ok(free + radius / (4.0 * PI * a * dist(&image, &dy)))
}

/// Poisson formula on `B_R(p)` in `n` dimensions using a surface grid of that sphere.
pub fn ball_poisson_eval(g: &BoundaryData, x: &Point, radius: f64, p: &Point, surface: &DomainGrid) -> Result<f64> {
    if surface.measure_kind != MeasureKind::Surface {
        return Err(Error::InvalidPairing("ball Poisson formula needs a surface grid".into()));
    }
    let n = surface.dim();
    let a = dist(x, p);
    if a >= radius {
        return Err(Error::OutOfDomain(format!("|x - p| = {a} is not below R = {radius}")));
    }
    let omega = sphere_area(n, 1.0)?;
    let s = surface.integrate(|y| g.eval_point(y, p, radius) / dist(x, y).powi(n as i32));
    Ok((radius * radius - a * a) / (omega * radius) * s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_parse() {
        let g: BoundaryData = "cos2".parse().unwrap();
        assert!((g.eval_angle(0.3) - (0.6f64).cos()).abs() < 1e-14);
        let g: BoundaryData = "const:3+sin:1".parse().unwrap();
        assert!((g.eval_angle(0.5) - 3.0 - 0.5f64.sin()).abs() < 1e-14);
        assert!("bogus".parse::<BoundaryData>().is_err());
    }

    #[test]
    fn green_symmetric_and_vanishing() {
        let p = [0.0; 3];
        let x = [0.2, 0.1, -0.3];
        let y = [-0.4, 0.3, 0.1];
        let a = ball_green(&x, &y, 1.0, &p).unwrap();
        let b = ball_green(&y, &x, 1.0, &p).unwrap();
        assert!((a - b).abs() < 1e-14);
        let s = [0.6, 0.0, 0.8];
        assert!(ball_green(&x, &s, 1.0, &p).unwrap().abs() < 1e-14);
        assert_eq!(ball_green(&x, &x, 1.0, &p), Err(Error::SingularPair));
    }

    #[test]
    fn fourier_cos() {
        let c = disc_fourier_solve(&BoundaryData::Cos(1), 8).unwrap();
        assert!((c.a[1] - 1.0).abs() < 1e-14);
        assert!(c.a[0].abs() < 1e-14 && c.b[1].abs() < 1e-14);
        assert!((disc_fourier_eval(&c, 1.0, 0.5, 0.0).unwrap() - 0.5).abs() < 1e-14);
    }
}
