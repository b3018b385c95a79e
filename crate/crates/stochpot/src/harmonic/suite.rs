use std::sync::Arc;

use rand::Rng;

use super::{
    bochner_residual, cacciopolli_check, comparison_check, harnack_bounds, max_principle_check, mvp_residual,
    BoundaryData, HarmonicFn, Part, Plane,
};
use crate::error::Result;
use crate::geometry::{add, build_spectral_grid, scale, Domain, MeasureKind, Point};
use crate::mc::sample_rng;
use crate::report::Report;

/// Random harmonic polynomial of degree at most 4: a constant plus up to three
/// complex-polynomial terms in random coordinate planes.
pub fn random_harmonic_poly(seed: u64, index: u64) -> HarmonicFn {
    let mut rng = sample_rng(seed, index);
    let mut terms = vec![(1.0, HarmonicFn::constant(rng.random_range(-1.0..1.0)))];
    for _ in 0..rng.random_range(1..=3) {
        let degree = rng.random_range(1..=4);
        let part = if rng.random::<bool>() { Part::Real } else { Part::Imag };
        let plane = [Plane::XY, Plane::YZ, Plane::ZX][rng.random_range(0..3)];
        terms.push((rng.random_range(-1.0..1.0), HarmonicFn::ComplexPoly { degree, part, plane }));
    }
    HarmonicFn::Sum(terms)
}

fn unit_vector<R: Rng>(rng: &mut R) -> Point {
    let v: Point = rand_distr::Distribution::sample(&rand_distr::UnitSphere, rng);
    v
}

/// Mean value property, maximum principle, comparison, Harnack, Caccioppoli and Bochner
/// checks over `n_functions` random harmonic polynomials in three dimensions.
pub fn classical_suite(n_functions: usize, seed: u64) -> Result<Report> {
    let mut r = Report::new("classical-estimates");
    let mut worst_mvp: f64 = 0.0;
    let mut worst_bochner: f64 = 0.0;
    for k in 0..n_functions {
        let f = random_harmonic_poly(seed, 2 * k as u64);
        let mut rng = sample_rng(seed, 2 * k as u64 + 1);
        let center: Point = [0, 1, 2].map(|_| rng.random_range(-0.5..0.5));
        let radius = rng.random_range(0.5..1.0);
        let ball = Domain::Ball { n: 3, radius, center };
        let tag = format!("f{k:02}");

        let vol = build_spectral_grid(&ball, MeasureKind::Volume, 6)?;
        let surf = build_spectral_grid(&ball, MeasureKind::Surface, 8)?;
        let m = mvp_residual(&f, &vol, &surf)?;
        worst_mvp = worst_mvp.max(m.relative());
        r.check(&format!("{tag}_mvp_relative_residual"), m.relative(), m.relative() < 1e-6);

        let coarse = build_spectral_grid(&ball, MeasureKind::Volume, 4)?;
        let fine = build_spectral_grid(&ball, MeasureKind::Surface, 16)?;
        let mp = max_principle_check(&f, &coarse, &fine)?;
        r.check(&format!("{tag}_max_principle"), mp.boundary_max - mp.interior_max, mp.holds);

        // non-negative shift for Harnack, using the boundary minimum
        let shift = 0.1 - mp.boundary_min;
        let d = rng.random_range(0.0..0.9) * radius;
        let x = add(&center, &scale(&unit_vector(&mut rng), d));
        let (lo, hi) = harnack_bounds(f.eval(&center)? + shift, radius, d, 3)?;
        let v = f.eval(&x)? + shift;
        r.check(&format!("{tag}_harnack_containment"), v, lo <= v && v <= hi);

        let cs = cacciopolli_check(&f, center, radius, 3, 6)?;
        r.check(&format!("{tag}_cacciopolli"), cs.rhs - cs.lhs, cs.holds());

        let bt = bochner_residual(&f, &x, 3, 2e-4)?;
        worst_bochner = worst_bochner.max(bt.residual());
        r.check(&format!("{tag}_bochner_residual"), bt.residual(), bt.residual() <= 1e-4);

        // comparison on the unit disc: trace of f against a pointwise smaller datum
        let ff = f.clone();
        let upper = BoundaryData::Custom(Arc::new(move |u: &Point| ff.eval(u).unwrap_or(f64::NAN)));
        let gap = rng.random_range(0.1..1.0);
        let lower = BoundaryData::Sum(vec![
            upper.clone(),
            BoundaryData::Scaled(-gap, Box::new(BoundaryData::Sum(vec![BoundaryData::Constant(1.0), BoundaryData::Scaled(0.5, Box::new(BoundaryData::Cos(1)))]))),
        ]);
        let probes: Vec<(f64, f64)> = (0..5).map(|_| (rng.random_range(0.0..0.9), rng.random_range(0.0..std::f64::consts::TAU))).collect();
        let (imax, bmax, ordered) = comparison_check(&upper, &lower, 1.0, &probes, 256)?;
        r.check(&format!("{tag}_comparison_stability"), bmax - imax, ordered && imax <= bmax * (1.0 + 1e-9));
    }
    r.info("worst_mvp_relative_residual", worst_mvp, None);
    r.info("worst_bochner_residual", worst_bochner, None);
    Ok(r)
}
