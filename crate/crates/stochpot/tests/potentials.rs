use std::f64::consts::PI;

use stochpot::geometry::{build_grid, build_spectral_grid, Domain, MeasureKind, DEFAULT_RESOLUTION};
use stochpot::potentials::{
    ball_integral_closed, ball_newton_closed, capacity, riesz_lq_exponent, riesz_potential, write_potential_csv, RieszSpec,
};
use stochpot::Error;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn ball_integral_profile() {
    let grid = build_grid(&Domain::ball(3, 1.0), MeasureKind::Volume, DEFAULT_RESOLUTION).unwrap();
    let spec = RieszSpec::newtonian(1.0, grid).unwrap();
    for a in [0.0, 0.3, 0.7, 0.95, 1.5, 3.0] {
        let q = riesz_potential(&spec, &[0.0, a, 0.0]).unwrap();
        assert!(rel(q, ball_integral_closed(1.0, a).unwrap()) < 5e-3, "a={a}");
    }
}

#[test]
fn dipole_density_far_field() {
    // int_B y_z / |x - y| dy = 4 pi R^5 / (15 |x|^2) on the z axis outside the ball
    let grid = build_spectral_grid(&Domain::ball(3, 1.0), MeasureKind::Volume, 10).unwrap();
    let spec = RieszSpec::new(2.0, |y| y[2], grid).unwrap();
    for z in [1.5, 2.0, 4.0] {
        let q = riesz_potential(&spec, &[0.0, 0.0, z]).unwrap();
        assert!(rel(q, 4.0 * PI / (15.0 * z * z)) < 1e-4, "z={z}");
    }
}

#[test]
fn planar_riesz_at_center() {
    // n = 2, a = 1: int_disc dy / |y| = 2 pi R
    let grid = build_spectral_grid(&Domain::Disc { radius: 2.0, center: [0.0; 3] }, MeasureKind::Volume, 8).unwrap();
    let spec = RieszSpec::new(1.0, |_| 1.0, grid).unwrap().with_gamma(0.5);
    assert!(rel(riesz_potential(&spec, &[0.0; 3]).unwrap(), 0.5 * 4.0 * PI) < 1e-12);
}

#[test]
fn capacity_of_uniform_ball() {
    // int_B 2 pi (1 - |x|^2 / 3) dx
    let grid = build_grid(&Domain::ball(3, 1.0), MeasureKind::Volume, 16).unwrap();
    let spec = RieszSpec::newtonian(1.0, grid).unwrap();
    assert!(rel(capacity(&spec, 1.0).unwrap(), 32.0 * PI * PI / 15.0) < 1e-2);
}

#[test]
fn invalid_orders_and_exponents() {
    let grid = build_spectral_grid(&Domain::ball(3, 1.0), MeasureKind::Volume, 3).unwrap();
    assert!(matches!(RieszSpec::new(3.0, |_| 1.0, grid.clone()), Err(Error::InvalidOrder { .. })));
    assert!(matches!(RieszSpec::new(0.0, |_| 1.0, grid), Err(Error::InvalidOrder { .. })));
    assert_eq!(riesz_lq_exponent(2, 1.0, 1.0).unwrap(), 2.0);
    assert!(riesz_lq_exponent(2, 2.0, 1.0).is_err());
    assert!(ball_integral_closed(-1.0, 0.5).is_err());
    assert!((ball_newton_closed(2.0, 4.0, 4.0 * PI, 3.0).unwrap() - 3.0 * 4.0 * PI * 8.0 / 12.0).abs() < 1e-12);
}

#[test]
fn potential_csv() {
    let grid = build_spectral_grid(&Domain::ball(3, 1.0), MeasureKind::Volume, 3).unwrap();
    let spec = RieszSpec::newtonian(1.0, grid).unwrap();
    let mut buf = Vec::new();
    write_potential_csv(&spec, &[[0.0, 0.0, 2.0], [0.0, 0.0, 3.0]], &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("# riesz n=3 a=2"));
    assert_eq!(lines[1], "x,y,z,psi");
    assert_eq!(lines.len(), 4);
}
