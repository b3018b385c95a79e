//! Deterministic harmonic functions, Dirichlet solvers and classical estimates.

mod dirichlet;
mod estimates;
mod suite;

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

pub use dirichlet::{
    ball_green, ball_poisson_eval, disc_fourier_eval, disc_fourier_solve, disc_poisson_eval, disc_poisson_kernel,
    BoundaryData, FourierCoeffs, DEFAULT_DISC_QUAD,
};
pub use suite::{classical_suite, random_harmonic_poly};
pub use estimates::{
    bochner_residual, cacciopolli_check, comparison_check, dirichlet_energy, doubling_ratio, energy_comparison,
    exp_field_residual, gradient_estimate_ratio, harnack_bounds, harnack_printed_factors, max_principle_check,
    mvp_residual, BochnerTerms, CacciopolliSides, MaxPrinciple, MvpResidual,
};

use crate::error::{Error, Result};
use crate::geometry::{dot, norm, sub, Point};

pub type Hessian = [[f64; 3]; 3];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Part {
    Real,
    Imag,
}

/// Coordinate plane carrying the complex variable `u + iv`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Plane {
    XY,
    YZ,
    ZX,
}

impl Plane {
    fn axes(&self) -> (usize, usize) {
        match self {
            Plane::XY => (0, 1),
            Plane::YZ => (1, 2),
            Plane::ZX => (2, 0),
        }
    }
}

type ScalarFn = Arc<dyn Fn(&Point) -> f64 + Send + Sync>;
type VectorFn = Arc<dyn Fn(&Point) -> Point + Send + Sync>;

#[derive(Clone)]
pub enum HarmonicFn {
    /// `Re` or `Im` of `(u + iv)^degree`.
    ComplexPoly { degree: u32, part: Part, plane: Plane },
    /// `-c1/|x - center| + c2`
    Radial3D { c1: f64, c2: f64, center: Point },
    /// `c1 ln r + c2` in the xy-plane.
    RadialLog2D { c1: f64, c2: f64 },
    /// Potential of uniform flow `u` along z past a sphere of radius `r`.
    FlowPastSphere { u: f64, r: f64 },
    /// `c0 + a . x`
    Linear { a: Point, c0: f64 },
    Sum(Vec<(f64, HarmonicFn)>),
    /// Arbitrary function; derivatives by central differences with step `h` unless `grad` is given.
    Custom { f: ScalarFn, grad: Option<VectorFn>, h: f64 },
}

impl fmt::Debug for HarmonicFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HarmonicFn::ComplexPoly { degree, part, plane } => write!(f, "ComplexPoly({degree},{part:?},{plane:?})"),
            HarmonicFn::Radial3D { c1, c2, center } => write!(f, "Radial3D({c1},{c2},{center:?})"),
            HarmonicFn::RadialLog2D { c1, c2 } => write!(f, "RadialLog2D({c1},{c2})"),
            HarmonicFn::FlowPastSphere { u, r } => write!(f, "FlowPastSphere({u},{r})"),
            HarmonicFn::Linear { a, c0 } => write!(f, "Linear({a:?},{c0})"),
            HarmonicFn::Sum(t) => f.debug_list().entries(t).finish(),
            HarmonicFn::Custom { h, grad, .. } => write!(f, "Custom(h={h}, analytic_grad={})", grad.is_some()),
        }
    }
}

impl HarmonicFn {
    pub fn poly(degree: u32, part: Part) -> Self {
        HarmonicFn::ComplexPoly { degree, part, plane: Plane::XY }
    }

    pub fn linear(a: Point, c0: f64) -> Self {
        HarmonicFn::Linear { a, c0 }
    }

    pub fn constant(c: f64) -> Self {
        HarmonicFn::Linear { a: [0.0; 3], c0: c }
    }

    pub fn custom(f: impl Fn(&Point) -> f64 + Send + Sync + 'static, h: f64) -> Self {
        HarmonicFn::Custom { f: Arc::new(f), grad: None, h }
    }

    pub fn is_constant(&self) -> bool {
        match self {
            HarmonicFn::Linear { a, .. } => a.iter().all(|v| *v == 0.0),
            HarmonicFn::ComplexPoly { degree, .. } => *degree == 0,
            HarmonicFn::Radial3D { c1, .. } | HarmonicFn::RadialLog2D { c1, .. } => *c1 == 0.0,
            HarmonicFn::FlowPastSphere { u, .. } => *u == 0.0,
            HarmonicFn::Sum(t) => t.iter().all(|(c, f)| *c == 0.0 || f.is_constant()),
            HarmonicFn::Custom { .. } => false,
        }
    }

    pub fn eval(&self, x: &Point) -> Result<f64> {
        match self {
            HarmonicFn::ComplexPoly { degree, part, plane } => {
                let (iu, iv) = plane.axes();
                Ok(pick(Complex64::new(x[iu], x[iv]).powu(*degree), *part))
            }
            HarmonicFn::Radial3D { c1, c2, center } => {
                let r = norm(&sub(x, center));
                if r == 0.0 {
                    return Err(Error::SingularPoint("radial potential at its center".into()));
                }
                Ok(-c1 / r + c2)
            }
            HarmonicFn::RadialLog2D { c1, c2 } => {
                let r = x[0].hypot(x[1]);
                if r == 0.0 {
                    return Err(Error::SingularPoint("logarithmic potential at the origin".into()));
                }
                Ok(c1 * r.ln() + c2)
            }
            HarmonicFn::FlowPastSphere { u, r } => {
                let d = norm(x);
                if d == 0.0 {
                    return Err(Error::SingularPoint("dipole at the sphere center".into()));
                }
                Ok(u * x[2] * (1.0 + r.powi(3) / (2.0 * d.powi(3))))
            }
            HarmonicFn::Linear { a, c0 } => Ok(c0 + dot(a, x)),
            HarmonicFn::Sum(t) => t.iter().map(|(c, f)| Ok(c * f.eval(x)?)).sum(),
            HarmonicFn::Custom { f, .. } => Ok(f(x)),
        }
    }

    pub fn grad(&self, x: &Point) -> Result<Point> {
        match self {
            HarmonicFn::ComplexPoly { degree, part, plane } => {
                let mut g = [0.0; 3];
                if *degree == 0 {
                    return Ok(g);
                }
                let (iu, iv) = plane.axes();
                let d = *degree as f64 * Complex64::new(x[iu], x[iv]).powu(degree - 1);
                // Cauchy-Riemann
                match part {
                    Part::Real => {
                        g[iu] = d.re;
                        g[iv] = -d.im;
                    }
                    Part::Imag => {
                        g[iu] = d.im;
                        g[iv] = d.re;
                    }
                }
                Ok(g)
            }
            HarmonicFn::Radial3D { c1, center, .. } => {
                let d = sub(x, center);
                let r = norm(&d);
                if r == 0.0 {
                    return Err(Error::SingularPoint("radial potential at its center".into()));
                }
                let s = c1 / r.powi(3);
                Ok([s * d[0], s * d[1], s * d[2]])
            }
            HarmonicFn::RadialLog2D { c1, .. } => {
                let r2 = x[0] * x[0] + x[1] * x[1];
                if r2 == 0.0 {
                    return Err(Error::SingularPoint("logarithmic potential at the origin".into()));
                }
                Ok([c1 * x[0] / r2, c1 * x[1] / r2, 0.0])
            }
            HarmonicFn::FlowPastSphere { u, r } => {
                let d = norm(x);
                if d == 0.0 {
                    return Err(Error::SingularPoint("dipole at the sphere center".into()));
                }
                let k = u * r.powi(3) / 2.0;
                let d3 = d.powi(3);
                let d5 = d.powi(5);
                let mut g = [0.0; 3];
                for (i, gi) in g.iter_mut().enumerate() {
                    *gi = -3.0 * k * x[2] * x[i] / d5;
                }
                g[2] += u + k / d3;
                Ok(g)
            }
            HarmonicFn::Linear { a, .. } => Ok(*a),
            HarmonicFn::Sum(t) => {
                let mut g = [0.0; 3];
                for (c, f) in t {
                    let gf = f.grad(x)?;
                    for i in 0..3 {
                        g[i] += c * gf[i];
                    }
                }
                Ok(g)
            }
            HarmonicFn::Custom { f, grad, h } => match grad {
                Some(g) => Ok(g(x)),
                None => {
                    let mut g = [0.0; 3];
                    for (i, gi) in g.iter_mut().enumerate() {
                        let (mut a, mut b) = (*x, *x);
                        a[i] += h;
                        b[i] -= h;
                        *gi = (f(&a) - f(&b)) / (2.0 * h);
                    }
                    Ok(g)
                }
            },
        }
    }

    pub fn hessian(&self, x: &Point) -> Result<Hessian> {
        let mut h = [[0.0; 3]; 3];
        match self {
            HarmonicFn::ComplexPoly { degree, part, plane } => {
                if *degree < 2 {
                    return Ok(h);
                }
                let (iu, iv) = plane.axes();
                let d2 = (*degree as f64) * (*degree as f64 - 1.0) * Complex64::new(x[iu], x[iv]).powu(degree - 2);
                let (uu, uv) = match part {
                    Part::Real => (d2.re, -d2.im),
                    Part::Imag => (d2.im, d2.re),
                };
                h[iu][iu] = uu;
                h[iv][iv] = -uu;
                h[iu][iv] = uv;
                h[iv][iu] = uv;
            }
            HarmonicFn::Radial3D { c1, center, .. } => {
                let d = sub(x, center);
                let r = norm(&d);
                if r == 0.0 {
                    return Err(Error::SingularPoint("radial potential at its center".into()));
                }
                for i in 0..3 {
                    for j in 0..3 {
                        let delta = if i == j { 1.0 } else { 0.0 };
                        h[i][j] = c1 * (delta / r.powi(3) - 3.0 * d[i] * d[j] / r.powi(5));
                    }
                }
            }
            HarmonicFn::RadialLog2D { c1, .. } => {
                let r2 = x[0] * x[0] + x[1] * x[1];
                if r2 == 0.0 {
                    return Err(Error::SingularPoint("logarithmic potential at the origin".into()));
                }
                for i in 0..2 {
                    for j in 0..2 {
                        let delta = if i == j { 1.0 } else { 0.0 };
                        h[i][j] = c1 * (delta / r2 - 2.0 * x[i] * x[j] / (r2 * r2));
                    }
                }
            }
            HarmonicFn::FlowPastSphere { u, r } => {
                let d = norm(x);
                if d == 0.0 {
                    return Err(Error::SingularPoint("dipole at the sphere center".into()));
                }
                let k = u * r.powi(3) / 2.0;
                let (d5, d7) = (d.powi(5), d.powi(7));
                let z = x[2];
                for i in 0..3 {
                    for j in 0..3 {
                        let dij = if i == j { 1.0 } else { 0.0 };
                        let diz = if i == 2 { 1.0 } else { 0.0 };
                        let djz = if j == 2 { 1.0 } else { 0.0 };
                        h[i][j] = k
                            * (-3.0 * diz * x[j] / d5 - 3.0 * djz * x[i] / d5 - 3.0 * z * dij / d5
                                + 15.0 * z * x[i] * x[j] / d7);
                    }
                }
            }
            HarmonicFn::Linear { .. } => {}
            HarmonicFn::Sum(t) => {
                for (c, f) in t {
                    let hf = f.hessian(x)?;
                    for i in 0..3 {
                        for j in 0..3 {
                            h[i][j] += c * hf[i][j];
                        }
                    }
                }
            }
            HarmonicFn::Custom { f, h: step, .. } => {
                let s = *step;
                for i in 0..3 {
                    for j in 0..3 {
                        let e = |p: &mut Point, k: usize, v: f64| p[k] += v;
                        let mut pp = *x;
                        e(&mut pp, i, s);
                        e(&mut pp, j, s);
                        let mut pm = *x;
                        e(&mut pm, i, s);
                        e(&mut pm, j, -s);
                        let mut mp = *x;
                        e(&mut mp, i, -s);
                        e(&mut mp, j, s);
                        let mut mm = *x;
                        e(&mut mm, i, -s);
                        e(&mut mm, j, -s);
                        h[i][j] = (f(&pp) - f(&pm) - f(&mp) + f(&mm)) / (4.0 * s * s);
                    }
                }
            }
        }
        Ok(h)
    }

    /// Trace of the Hessian over the first `n` axes.
    pub fn laplacian(&self, x: &Point, n: usize) -> Result<f64> {
        let h = self.hessian(x)?;
        Ok((0..n).map(|i| h[i][i]).sum())
    }
}

fn pick(z: Complex64, part: Part) -> f64 {
    match part {
        Part::Real => z.re,
        Part::Imag => z.im,
    }
}

/// Central-difference Laplacian over the first `n` axes.
pub fn laplacian_fd(f: impl Fn(&Point) -> Result<f64>, x: &Point, n: usize, h: f64) -> Result<f64> {
    if !(h > 1e-12) {
        return Err(Error::IllConditionedStep(h));
    }
    let c = f(x)?;
    let mut s = 0.0;
    for i in 0..n {
        let (mut a, mut b) = (*x, *x);
        a[i] += h;
        b[i] -= h;
        s += f(&a)? - 2.0 * c + f(&b)?;
    }
    Ok(s / (h * h))
}

/// Central-difference gradient over the first `n` axes.
pub fn grad_fd(f: impl Fn(&Point) -> Result<f64>, x: &Point, n: usize, h: f64) -> Result<Point> {
    if !(h > 1e-12) {
        return Err(Error::IllConditionedStep(h));
    }
    let mut g = [0.0; 3];
    for (i, gi) in g.iter_mut().enumerate().take(n) {
        let (mut a, mut b) = (*x, *x);
        a[i] += h;
        b[i] -= h;
        *gi = (f(&a)? - f(&b)?) / (2.0 * h);
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poly_value() {
        let f = HarmonicFn::poly(2, Part::Real);
        assert_eq!(f.eval(&[1.0, 2.0, 0.0]).unwrap(), -3.0);
    }

    #[test]
    fn analytic_derivatives_match_fd() {
        let fams = [
            HarmonicFn::ComplexPoly { degree: 4, part: Part::Imag, plane: Plane::ZX },
            HarmonicFn::Radial3D { c1: 1.3, c2: 0.2, center: [0.1, -2.0, 0.3] },
            HarmonicFn::FlowPastSphere { u: 1.0, r: 1.0 },
            HarmonicFn::RadialLog2D { c1: 0.7, c2: 0.0 },
        ];
        let x = [0.7, 0.4, 1.1];
        for f in &fams {
            let e = |p: &Point| f.eval(p);
            let g = f.grad(&x).unwrap();
            let gf = grad_fd(e, &x, 3, 1e-5).unwrap();
            for i in 0..3 {
                assert!((g[i] - gf[i]).abs() < 1e-6, "{f:?} grad {i}");
            }
            let h = f.hessian(&x).unwrap();
            for i in 0..3 {
                let gi = |p: &Point| Ok(f.grad(p)?[i]);
                let hf = grad_fd(gi, &x, 3, 1e-5).unwrap();
                for j in 0..3 {
                    assert!((h[i][j] - hf[j]).abs() < 1e-6, "{f:?} hess {i}{j}");
                }
            }
        }
    }

    #[test]
    fn singular_points() {
        let f = HarmonicFn::Radial3D { c1: 1.0, c2: 0.0, center: [0.0; 3] };
        assert!(matches!(f.eval(&[0.0; 3]), Err(Error::SingularPoint(_))));
    }
}
