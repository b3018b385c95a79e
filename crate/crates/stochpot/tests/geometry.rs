use std::f64::consts::PI;

use stochpot::geometry::{
    build_grid, build_polar_graded_sphere, build_spectral_grid, from_cylindrical, from_polar, from_spherical, norm,
    shell_volume_ratio, to_cylindrical, to_polar, to_spherical, Curve, Domain, MeasureKind, DEFAULT_RESOLUTION,
};
use stochpot::Error;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}

#[test]
fn spectral_ball_moments() {
    let b = Domain::ball(3, 1.0);
    let vol = build_spectral_grid(&b, MeasureKind::Volume, 6).unwrap();
    let surf = build_spectral_grid(&b, MeasureKind::Surface, 8).unwrap();
    assert!(close(vol.total_weight(), 4.0 * PI / 3.0, 1e-12));
    assert!(close(vol.integrate(|p| norm(p).powi(2)), 4.0 * PI / 5.0, 1e-12));
    assert!(close(surf.integrate(|p| p[2] * p[2]), 4.0 * PI / 3.0, 1e-12));
    assert!(close(surf.integrate(|p| p[0] * p[1] * p[2]), 0.0, 1e-12));
}

#[test]
fn spectral_disc_and_circle() {
    let d = Domain::unit_disc();
    let vol = build_spectral_grid(&d, MeasureKind::Volume, 6).unwrap();
    assert!(close(vol.integrate(|p| p[0] * p[0]), PI / 4.0, 1e-12));
    let c = build_spectral_grid(&d, MeasureKind::Curve, 8).unwrap();
    assert!(close(c.total_weight(), 2.0 * PI, 1e-12));
}

#[test]
fn midpoint_grids_converge() {
    let b = Domain::ball(3, 1.0);
    let coarse = build_grid(&b, MeasureKind::Volume, 12).unwrap().measure_error();
    let fine = build_grid(&b, MeasureKind::Volume, DEFAULT_RESOLUTION).unwrap().measure_error();
    assert!(fine < 1e-2, "{fine}");
    assert!(fine <= coarse + 1e-12);
    let shell = Domain::Shell { n: 3, r_inner: 0.5, r_outer: 1.0, center: [0.0; 3] };
    assert!(build_grid(&shell, MeasureKind::Volume, DEFAULT_RESOLUTION).unwrap().measure_error() < 2e-2);
}

#[test]
fn grid_nodes_lie_in_domain() {
    let d = Domain::Disc { radius: 2.0, center: [1.0, -1.0, 0.0] };
    let g = build_grid(&d, MeasureKind::Volume, 16).unwrap();
    assert!(g.points.iter().all(|p| norm(&[p[0] - 1.0, p[1] + 1.0, 0.0]) <= 2.0 + 1e-12));
    assert!(g.weights.iter().all(|w| *w > 0.0));
}

#[test]
fn graded_sphere_integrates_polynomials() {
    let g = build_polar_graded_sphere(2.0, [0.0, 0.0, 1.0], 0.01, 6, 24).unwrap();
    assert!(close(g.total_weight(), 16.0 * PI, 1e-10), "{}", g.total_weight() / (16.0 * PI) - 1.0);
    // int (z - 1)^2 over the sphere of radius 2 about (0,0,1)
    let m2 = g.integrate(|p| (p[2] - 1.0).powi(2));
    assert!(close(m2, 4.0 * PI * 16.0 / 3.0, 1e-7), "{}", m2 / (4.0 * PI * 16.0 / 3.0) - 1.0);
    assert!(g.points.iter().all(|p| (norm(&[p[0], p[1], p[2] - 1.0]) - 2.0).abs() < 1e-12));
}

#[test]
fn graded_sphere_resolves_peaked_integrand() {
    // Poisson kernel of an axial point at 0.99 integrates to one
    let a = 0.99f64;
    let g = build_polar_graded_sphere(1.0, [0.0; 3], 0.5 * (1.0 - a), 8, 32).unwrap();
    let k = g.integrate(|y| (1.0 - a * a) / (4.0 * PI * ((y[0]).powi(2) + (y[1]).powi(2) + (y[2] - a).powi(2)).powf(1.5)));
    assert!((k - 1.0).abs() < 1e-6, "{k}");
}

#[test]
fn measures_and_errors() {
    assert!(close(Domain::ball(4, 1.0).exact_measure(MeasureKind::Volume).unwrap(), PI * PI / 2.0, 1e-14));
    assert!(close(Domain::Cylinder { radius: 1.0, length: 2.0 }.exact_measure(MeasureKind::Surface).unwrap(), 4.0 * PI, 1e-14));
    assert_eq!(shell_volume_ratio(3, 1.0).unwrap(), 7.0);
    let shell = Domain::Shell { n: 3, r_inner: 0.5, r_outer: 1.0, center: [0.0; 3] };
    assert!(matches!(shell.exact_measure(MeasureKind::Surface), Err(Error::UnsupportedGeometry(_))));
    assert!(matches!(Domain::ball(3, -1.0).validate(), Err(Error::InvalidArgument(_))));
    assert!(build_grid(&Domain::ball(3, 1.0), MeasureKind::Volume, 4).is_err());
    assert!(build_spectral_grid(&Domain::ball(3, 1.0), MeasureKind::Volume, 1).is_err());
}

#[test]
fn curves() {
    let c = Curve::circle([0.0; 3], 2.0, 2000);
    assert!(close(c.length(), 4.0 * PI, 1e-5));
    assert_eq!(c.start(), c.end());
    let s = Curve::segment([0.0; 3], [3.0, 4.0, 0.0], 10);
    assert!(close(s.length(), 5.0, 1e-14));
    assert_eq!(s.segments().len(), 10);
    assert!(matches!(Curve::new(vec![[0.0; 3]], false), Err(Error::InvalidCurve(_))));
    assert!(Curve::new(vec![[0.0; 3], [1.0, 0.0, 0.0]], true).is_err());
}

#[test]
fn coordinate_round_trips() {
    let p = [0.3, -1.2, 0.7];
    let q = from_spherical(&to_spherical(&p));
    let r = from_cylindrical(&to_cylindrical(&p));
    for i in 0..3 {
        assert!((p[i] - q[i]).abs() < 1e-14 && (p[i] - r[i]).abs() < 1e-14);
    }
    let [rr, t] = to_polar(&p);
    let s = from_polar(rr, t);
    assert!((s[0] - p[0]).abs() < 1e-14 && (s[1] - p[1]).abs() < 1e-14);
}

#[test]
fn grid_csv_header() {
    let g = build_spectral_grid(&Domain::unit_disc(), MeasureKind::Curve, 4).unwrap();
    let mut buf = Vec::new();
    g.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# domain=disc"));
    assert_eq!(lines.next().unwrap(), "x,y,weight");
    assert_eq!(lines.count(), g.len());
}
