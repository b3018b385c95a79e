use std::f64::consts::PI;

use stochpot::geometry::{build_spectral_grid, Domain, MeasureKind};
use stochpot::harmonic::{BoundaryData, HarmonicFn, Part};
use stochpot::potentials::RieszSpec;
use stochpot::report::{Report, Verdict};
use stochpot::stochastic::*;
use stochpot::{CovKernel, Error};

const K: CovKernel = CovKernel::GaussianCorr { alpha: 1.0, xi: 0.5 };
const N: usize = 4000;

fn field(base: HarmonicFn) -> PerturbedField {
    PerturbedField::new(base, 1.0, K).unwrap()
}

fn assert_sound(mut r: Report) {
    r.apply_familywise(0.001);
    let bad: Vec<_> = r.failures().into_iter().map(|x| x.statistic.clone()).collect();
    assert!(bad.is_empty(), "{}: {bad:?}", r.id);
}

#[test]
fn moment_conventions_differ_from_fourth_order() {
    let (b, l, a) = (0.7, 1.3, 0.4);
    let second = b * b + l * l * a;
    assert!((binomial_moment(b, l, a, 2, MomentConvention::Printed) - second).abs() < 1e-14);
    assert!((binomial_moment(b, l, a, 2, MomentConvention::Gaussian) - second).abs() < 1e-14);
    let common = b.powi(4) + 6.0 * b * b * l * l * a;
    let p4 = binomial_moment(b, l, a, 4, MomentConvention::Printed);
    let g4 = binomial_moment(b, l, a, 4, MomentConvention::Gaussian);
    assert!((p4 - (common + l.powi(4) * a * a)).abs() < 1e-13);
    assert!((g4 - (common + 3.0 * l.powi(4) * a * a)).abs() < 1e-13);
}

#[test]
fn harnack_sums_are_ordered() {
    for p in [1, 2, 3, 4] {
        for conv in [MomentConvention::Printed, MomentConvention::Gaussian] {
            let s = harnack_sums(1.0, 1.1, 1.0, 0.4, 3, 0.5, 1.0, p, conv).unwrap();
            assert!(s.ordered(), "p={p} {conv:?} {s:?}");
            assert!(s.x_factor < 1.0 && s.y_factor > 1.0);
        }
    }
}

#[test]
fn cacciopolli_threshold_radius() {
    let c = cacciopolli_condition(1.0, 2.0, 3.0, 3).unwrap();
    let at = cacciopolli_condition(c.r_star, 2.0, 3.0, 3).unwrap();
    assert!((at.value - at.shell_ratio).abs() < 1e-12);
    assert!(!cacciopolli_condition(1.01 * c.r_star, 2.0, 3.0, 3).unwrap().holds);
    assert!(cacciopolli_condition(1.0, 0.0, 1.0, 3).is_err());
}

#[test]
fn printed_closed_forms() {
    let near0 = printed_ball_noise_factor(1.0, 1e-6);
    assert!((near0 - printed_ball_noise_factor(1.0, 0.0)).abs() < 1e-5);
    assert!(printed_ball_noise_factor(1.0, 0.999).abs() < printed_ball_noise_factor(1.0, 0.5).abs());
    assert!(printed_disc_arctan_term(1.0, 0.5, 0.3).is_finite());
}

#[test]
fn field_validation() {
    assert!(matches!(PerturbedField::new(HarmonicFn::constant(1.0), -1.0, K), Err(Error::InvalidArgument(_))));
    assert!(matches!(PerturbedField::new(HarmonicFn::constant(1.0), 1.0, CovKernel::WhiteNoise), Err(Error::Inadmissible(_))));
    let f = field(HarmonicFn::constant(1.0));
    assert!(perturbed_mvp(&f, &MvpParams { n_samples: 0, ..Default::default() }).is_err());
    assert!(sadei(&f, &SadeiParams { n_samples: 0, ..Default::default() }).is_err());
    let np = NewtonParams { n_samples: N, ..Default::default() };
    assert!(matches!(noisy_density_newton(&np, &[[0.0, 0.0, 0.5], [0.0, 0.0, 3.0]], &[2]), Err(Error::OutOfDomain(_))));
}

#[test]
fn disc_noise_scales_with_lambda_squared() {
    let p = DiscNoiseParams { n_samples: N, seed: 3, ..Default::default() };
    let g = BoundaryData::Cos(2);
    let a = noisy_boundary_disc(&g, 1.0, &p).unwrap();
    let b = noisy_boundary_disc(&g, 2.0, &p).unwrap();
    let name = "r0.50_t0.30_noise_variance";
    let (ra, rb) = (a.get(name), b.get(name));
    assert!((rb.oracle_value.unwrap() / ra.oracle_value.unwrap() - 4.0).abs() < 1e-12);
    assert!((rb.mc_estimate.unwrap() / ra.mc_estimate.unwrap() - 4.0).abs() < 1e-12);
}

#[test]
fn mvp_and_harnack() {
    let f = field(HarmonicFn::poly(2, Part::Real));
    assert_sound(perturbed_mvp(&f, &MvpParams { n_samples: N, seed: 1, ..Default::default() }).unwrap());
    let ball = Domain::ball(3, 1.0);
    let inner = build_spectral_grid(&ball, MeasureKind::Volume, 3).unwrap();
    let bdry = build_spectral_grid(&ball, MeasureKind::Surface, 12).unwrap();
    assert_sound(averaged_max_principle(&f, &inner, &bdry, &[1, 2], N, 2).unwrap());
    let lin = field(HarmonicFn::linear([0.3, 0.0, 0.0], 1.0));
    assert_sound(stochastic_harnack(&lin, &[0.4, 0.2, 0.0], 1.0, 3, &[1, 2, 4], N, 3).unwrap());
}

#[test]
fn energy_family() {
    let f = field(HarmonicFn::poly(2, Part::Real));
    assert_sound(stochastic_line_integral(&f, &LineIntegralParams { n_samples: N, seed: 4, ..Default::default() }).unwrap());
    assert_sound(sadei(&f, &SadeiParams { n_samples: N, seed: 5, ..Default::default() }).unwrap());
    assert_sound(stochastic_bochner(&f, &[0.3, 0.2, 0.1], 3, N, 6).unwrap());
    let lin = field(HarmonicFn::linear([0.3, 0.0, 0.0], 1.0));
    assert_sound(stochastic_cacciopolli(&lin, [0.0; 3], 1.0, 3, 3, &[7, 8, 9], N).unwrap());
    let flow = field(HarmonicFn::FlowPastSphere { u: 1.0, r: 1.0 });
    assert_sound(turbulent_flow_stats(&flow, &TurbulenceParams { n_samples: N, seed: 10, ..Default::default() }).unwrap());
}

#[test]
fn potential_family() {
    let grid = build_spectral_grid(&Domain::ball(3, 1.0), MeasureKind::Volume, 4).unwrap();
    let spec = RieszSpec::newtonian(1.0, grid).unwrap();
    let p = RieszMomentParams { n_samples: N, seed: 11, ..Default::default() };
    assert_sound(stochastic_riesz_moments(&spec, 1.0, &K, &p).unwrap());
    let np = NewtonParams { n_samples: N, seed: 12, ..Default::default() };
    let r = noisy_density_newton(&np, &[[0.0, 0.0, 2.0], [0.0, 0.0, 4.0]], &[2]).unwrap();
    assert!((r.get("bare_gradient_magnitude").mc_estimate.unwrap() - PI / 3.0).abs() < 1e-14);
    assert_sound(r);
}

#[test]
fn boundary_family() {
    let p = DiscNoiseParams { n_samples: N, seed: 13, ..Default::default() };
    let r = noisy_boundary_disc(&BoundaryData::Cos(2), 1.0, &p).unwrap();
    assert!(matches!(r.get("center_volatility_limit_zero").verdict, Verdict::Note { .. }));
    assert_sound(r);
    let chordal = DiscNoiseParams { distance: CircleDistance::Chordal, ..p };
    assert_sound(noisy_boundary_disc(&BoundaryData::Sin(1), 0.5, &chordal).unwrap());
    let b = BallNoiseParams { n_samples: N, seed: 14, ..Default::default() };
    let r = noisy_boundary_ball(&BoundaryData::ZDir, 1.0, &b).unwrap();
    assert!(r.get("noise_variance_trend_matches_oracle").passed());
    assert_sound(r);
}
