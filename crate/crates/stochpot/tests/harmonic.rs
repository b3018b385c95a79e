use std::f64::consts::PI;

use stochpot::geometry::{build_spectral_grid, norm, Domain, MeasureKind, Point};
use stochpot::harmonic::{
    ball_green, ball_poisson_eval, bochner_residual, cacciopolli_check, comparison_check, disc_fourier_eval,
    disc_fourier_solve, disc_poisson_eval, dirichlet_energy, doubling_ratio, energy_comparison, exp_field_residual,
    gradient_estimate_ratio, grad_fd, harnack_bounds, max_principle_check, mvp_residual, BoundaryData, HarmonicFn, Part,
    Plane,
};
use stochpot::Error;

fn presets() -> Vec<(HarmonicFn, usize, Point)> {
    vec![
        (HarmonicFn::poly(3, Part::Real), 3, [0.3, -0.2, 0.5]),
        (HarmonicFn::ComplexPoly { degree: 4, part: Part::Imag, plane: Plane::YZ }, 3, [0.1, 0.4, -0.3]),
        (HarmonicFn::Radial3D { c1: 2.0, c2: 1.0, center: [1.0, 0.0, 0.0] }, 3, [0.2, 0.3, 0.1]),
        (HarmonicFn::FlowPastSphere { u: 1.5, r: 1.0 }, 3, [0.4, 1.1, 0.9]),
        (HarmonicFn::RadialLog2D { c1: 1.0, c2: 0.0 }, 2, [0.7, -0.4, 0.0]),
        (HarmonicFn::linear([0.3, -1.0, 2.0], 0.5), 3, [0.0; 3]),
        (HarmonicFn::Sum(vec![(2.0, HarmonicFn::poly(2, Part::Imag)), (-1.0, HarmonicFn::linear([1.0, 0.0, 0.0], 0.0))]), 3, [0.2, 0.2, 0.2]),
    ]
}

#[test]
fn presets_are_harmonic_with_consistent_gradients() {
    for (f, n, x) in presets() {
        assert!(f.laplacian(&x, n).unwrap().abs() < 1e-9, "{f:?}");
        let g = f.grad(&x).unwrap();
        let fd = grad_fd(|p| f.eval(p), &x, n, 1e-5).unwrap();
        for i in 0..n {
            assert!((g[i] - fd[i]).abs() < 1e-7, "{f:?} axis {i}");
        }
    }
}

#[test]
fn singular_points_are_reported() {
    let f = HarmonicFn::Radial3D { c1: 1.0, c2: 0.0, center: [0.0; 3] };
    assert!(matches!(f.eval(&[0.0; 3]), Err(Error::SingularPoint(_))));
    assert!(f.grad(&[0.0; 3]).is_err());
}

#[test]
fn ball_poisson_reproduces_extensions() {
    let surf = build_spectral_grid(&Domain::ball(3, 1.0), MeasureKind::Surface, 24).unwrap();
    for g in [BoundaryData::Cos(2), BoundaryData::ZDir, BoundaryData::Sum(vec![BoundaryData::Sin(1), BoundaryData::Constant(2.0)])] {
        let x = [0.2, -0.3, 0.4];
        let v = ball_poisson_eval(&g, &x, 1.0, &[0.0; 3], &surf).unwrap();
        assert!((v - g.exact_extension(&x).unwrap()).abs() < 1e-8, "{g}");
    }
    assert!(matches!(ball_poisson_eval(&BoundaryData::ZDir, &[0.0, 0.0, 1.5], 1.0, &[0.0; 3], &surf), Err(Error::OutOfDomain(_))));
    let vol = build_spectral_grid(&Domain::ball(3, 1.0), MeasureKind::Volume, 4).unwrap();
    assert!(matches!(ball_poisson_eval(&BoundaryData::ZDir, &[0.0; 3], 1.0, &[0.0; 3], &vol), Err(Error::InvalidPairing(_))));
}

#[test]
fn green_function_symmetry_and_boundary() {
    let (x, y) = ([0.1, 0.2, -0.3], [-0.4, 0.1, 0.2]);
    let a = ball_green(&x, &y, 1.0, &[0.0; 3]).unwrap();
    let b = ball_green(&y, &x, 1.0, &[0.0; 3]).unwrap();
    assert!((a - b).abs() < 1e-14 && a < 0.0);
    let on = [0.6, 0.0, 0.8];
    assert!(ball_green(&x, &on, 1.0, &[0.0; 3]).unwrap().abs() < 1e-14);
    assert_eq!(ball_green(&x, &x, 1.0, &[0.0; 3]), Err(Error::SingularPair));
}

#[test]
fn disc_solutions() {
    let step = BoundaryData::Step { lo: 0.0, hi: 1.0 };
    assert!((disc_poisson_eval(&step, 1.0, 0.0, 0.0, 4096).unwrap() - 0.5).abs() < 1e-3);
    // near the rim the solver switches to the series; both must see cos 3 theta as r^3 cos 3 theta
    let g = BoundaryData::Cos(3);
    let r = 0.97;
    let v = disc_poisson_eval(&g, 1.0, r, 0.4, 512).unwrap();
    assert!((v - r * r * r * (1.2f64).cos()).abs() < 1e-12);
    let c = disc_fourier_solve(&g, 8).unwrap();
    assert!((disc_fourier_eval(&c, 2.0, 1.0, 0.4).unwrap() - 0.125 * (1.2f64).cos()).abs() < 1e-12);
    assert!(disc_poisson_eval(&g, 1.0, 1.2, 0.0, 512).is_err());
    assert!(disc_fourier_solve(&g, 0).is_err());
}

#[test]
fn comparison_and_stability() {
    let f: BoundaryData = "cos1+const:2".parse().unwrap();
    let g: BoundaryData = "sin2+const:0.5".parse().unwrap();
    let pts: Vec<(f64, f64)> = (0..10).map(|k| (0.08 * k as f64, 0.7 * k as f64)).collect();
    let (imax, bmax, ordered) = comparison_check(&f, &g, 1.0, &pts, 512).unwrap();
    assert!(ordered && imax <= bmax + 1e-12);
    assert!("bogus".parse::<BoundaryData>().is_err());
    assert!("step:1:2".parse::<BoundaryData>().is_ok());
}

#[test]
fn mean_value_and_maximum_principle() {
    let f = HarmonicFn::FlowPastSphere { u: 1.0, r: 1.0 };
    let c = [0.0, 0.0, 3.0];
    let vol = build_spectral_grid(&Domain::Ball { n: 3, radius: 1.0, center: c }, MeasureKind::Volume, 8).unwrap();
    let surf = build_spectral_grid(&Domain::Ball { n: 3, radius: 1.0, center: c }, MeasureKind::Surface, 16).unwrap();
    assert!(mvp_residual(&f, &vol, &surf).unwrap().relative() < 1e-6);
    assert!(matches!(mvp_residual(&f, &surf, &vol), Err(Error::InvalidPairing(_))));
    let m = max_principle_check(&f, &vol, &surf).unwrap();
    assert!(m.holds && !m.constant && m.power_holds.iter().all(|b| *b));
    let k = max_principle_check(&HarmonicFn::constant(2.0), &vol, &surf).unwrap();
    assert!(k.constant && k.holds);
}

#[test]
fn harnack_contains_positive_function() {
    let f = HarmonicFn::linear([0.3, 0.0, 0.0], 1.0);
    let d = 0.6;
    let (lo, hi) = harnack_bounds(1.0, 1.0, d, 3).unwrap();
    for k in 0..24 {
        let t = 2.0 * PI * k as f64 / 24.0;
        let v = f.eval(&[d * t.cos(), 0.0, d * t.sin()]).unwrap();
        assert!(lo <= v && v <= hi);
    }
    assert!(harnack_bounds(1.0, 1.0, 1.0, 3).is_err());
    assert!(harnack_bounds(-1.0, 1.0, 0.5, 3).is_err());
}

#[test]
fn energies() {
    let b = Domain::ball(3, 1.0);
    let vol = build_spectral_grid(&b, MeasureKind::Volume, 6).unwrap();
    let surf = build_spectral_grid(&b, MeasureKind::Surface, 8).unwrap();
    let psi = HarmonicFn::linear([1.0, 0.0, 0.0], 0.0);
    // 1/2 int |e_x|^2 = 2 pi / 3
    assert!((dirichlet_energy(&psi, &vol).unwrap() - 2.0 * PI / 3.0).abs() < 1e-12);
    let bump = HarmonicFn::custom(|p: &Point| p[0] + 0.5 * (1.0 - norm(p).powi(2)) * p[1], 1e-5);
    let (e_psi, e_phi) = energy_comparison(&psi, &bump, &vol, &surf, 1e-12).unwrap();
    assert!(e_psi < e_phi);
    let off = HarmonicFn::linear([1.0, 0.0, 0.0], 0.1);
    assert!(matches!(energy_comparison(&psi, &off, &vol, &surf, 1e-12), Err(Error::InvalidComparison(_))));
}

#[test]
fn interior_estimates() {
    let f = HarmonicFn::poly(3, Part::Real);
    let s = cacciopolli_check(&f, [0.1, 0.0, 0.0], 0.5, 3, 6).unwrap();
    assert!(s.holds() && s.lhs > 0.0);
    let t = bochner_residual(&HarmonicFn::poly(4, Part::Imag), &[0.3, 0.2, 0.1], 3, 2e-4).unwrap();
    assert!(t.residual() < 1e-4 && t.harmonic_residual() < 1e-4);
    assert_eq!(bochner_residual(&f, &[0.0; 3], 3, 1e-9), Err(Error::IllConditionedStep(1e-9)));
    assert!((doubling_ratio(&HarmonicFn::constant(1.0), [0.0; 3], 0.5, 3, 4).unwrap() - 8.0).abs() < 1e-12);
    let g = gradient_estimate_ratio(&HarmonicFn::linear([1.0, 0.0, 0.0], 0.0), [0.0; 3], 1.0, 3, 8).unwrap();
    // R sup|grad| / sup_{B_2R}|f| = 1 / 2
    assert!((g - 0.5).abs() < 1e-12);
    // second-order differences: halving the step quarters the residual
    let coarse = exp_field_residual(&f, 0.5, &[0.2, 0.1, 0.3], 3, 2e-3).unwrap();
    let fine = exp_field_residual(&f, 0.5, &[0.2, 0.1, 0.3], 3, 1e-3).unwrap();
    assert!(fine < 1e-4 && (3.5..4.5).contains(&(coarse / fine)), "{coarse} {fine}");
}
