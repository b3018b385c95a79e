use std::f64::consts::PI;

use nalgebra::DMatrix;
use proptest::prelude::*;

use stochpot::cli::{Format, RunConfig};
use stochpot::geometry::{build_spectral_grid, Domain, MeasureKind, Point};
use stochpot::grf::kernel_eval;
use stochpot::harmonic::{disc_fourier_eval, disc_fourier_solve, disc_poisson_eval, mvp_residual, BoundaryData, HarmonicFn, Part};
use stochpot::potentials::{ball_integral_closed, riesz_lq_exponent};
use stochpot::stochastic::{binomial_moment, harnack_sums, MomentConvention};
use stochpot::CovKernel;

fn point() -> impl Strategy<Value = Point> {
    prop::array::uniform3(-2.0..2.0f64)
}

fn kernel() -> impl Strategy<Value = CovKernel> {
    (0.1..3.0f64, 0.2..2.0f64, any::<bool>()).prop_map(|(alpha, xi, g)| {
        if g {
            CovKernel::GaussianCorr { alpha, xi }
        } else {
            CovKernel::Exponential { alpha, xi }
        }
    })
}

fn boundary() -> impl Strategy<Value = BoundaryData> {
    (1..6u32, 1..6u32, -2.0..2.0f64).prop_map(|(j, k, c)| {
        BoundaryData::Sum(vec![BoundaryData::Cos(j), BoundaryData::Sin(k), BoundaryData::Constant(c)])
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn kernels_are_symmetric_and_bounded(k in kernel(), x in point(), y in point()) {
        let a = kernel_eval(&k, &x, &y).unwrap();
        prop_assert_eq!(a, kernel_eval(&k, &y, &x).unwrap());
        prop_assert!(a > 0.0 && a <= k.variance().unwrap());
    }

    #[test]
    fn gram_matrices_are_positive_semidefinite(k in kernel(), pts in prop::collection::vec(point(), 2..12)) {
        let n = pts.len();
        let g = DMatrix::from_fn(n, n, |i, j| kernel_eval(&k, &pts[i], &pts[j]).unwrap());
        let min = g.symmetric_eigenvalues().min();
        prop_assert!(min > -1e-9 * n as f64, "{min}");
    }

    #[test]
    fn second_moments_agree_across_conventions(b in -3.0..3.0f64, l in 0.0..2.0f64, a in 0.0..2.0f64) {
        let p = binomial_moment(b, l, a, 2, MomentConvention::Printed);
        let g = binomial_moment(b, l, a, 2, MomentConvention::Gaussian);
        prop_assert!((p - g).abs() <= 1e-12 * p.abs().max(1.0));
        prop_assert_eq!(binomial_moment(b, l, a, 1, MomentConvention::Gaussian), b);
    }

    #[test]
    fn harnack_sums_stay_ordered(
        psi0 in 0.5..3.0f64,
        rel in 0.0..1.0f64,
        d in 0.0..0.9f64,
        lambda in 0.0..1.5f64,
        p in 1..5u32,
    ) {
        // psi(x) anywhere inside the deterministic Harnack window
        let lo = (1.0 - d) / (1.0 + d).powi(2) * psi0;
        let hi = (1.0 + d) / (1.0 - d).powi(2) * psi0;
        let psi_x = lo + rel * (hi - lo);
        let s = harnack_sums(psi0, psi_x, 1.0, d, 3, lambda, 1.0, p, MomentConvention::Gaussian).unwrap();
        prop_assert!(s.ordered(), "{s:?}");
    }

    #[test]
    fn harmonic_polys_satisfy_mean_value(deg in 0..5u32, imag in any::<bool>(), c in prop::array::uniform3(-1.0..1.0f64)) {
        let f = HarmonicFn::poly(deg, if imag { Part::Imag } else { Part::Real });
        let ball = Domain::Ball { n: 3, radius: 0.7, center: c };
        let vol = build_spectral_grid(&ball, MeasureKind::Volume, 6).unwrap();
        let surf = build_spectral_grid(&ball, MeasureKind::Surface, 8).unwrap();
        let r = mvp_residual(&f, &vol, &surf).unwrap();
        prop_assert!(r.relative() < 1e-9 || f.eval(&c).unwrap().abs() < 1e-12, "{r:?}");
    }

    #[test]
    fn disc_poisson_matches_fourier(g in boundary(), r in 0.0..0.9f64, t in 0.0..(2.0 * PI)) {
        let quad = disc_poisson_eval(&g, 1.0, r, t, 1024).unwrap();
        let series = disc_fourier_eval(&disc_fourier_solve(&g, 16).unwrap(), 1.0, r, t).unwrap();
        prop_assert!((quad - series).abs() < 1e-9, "{quad} {series}");
    }

    #[test]
    fn ball_integral_is_continuous_and_decreasing(radius in 0.2..4.0f64, s in 0.0..3.0f64) {
        let at = ball_integral_closed(radius, radius).unwrap();
        prop_assert!((ball_integral_closed(radius, radius * (1.0 + 1e-12)).unwrap() - at).abs() < 1e-9 * at);
        let a = s * radius;
        prop_assert!(ball_integral_closed(radius, a + 0.01).unwrap() < ball_integral_closed(radius, a).unwrap());
    }

    #[test]
    fn lq_exponent_exceeds_p(n in 2..4usize, p in 1.0..4.0f64, frac in 0.01..0.99f64) {
        let a = frac * n as f64 / p;
        let q = riesz_lq_exponent(n, p, a).unwrap();
        prop_assert!(q > p);
        prop_assert!((1.0 / q - (1.0 / p - a / n as f64)).abs() < 1e-12);
        prop_assert!(riesz_lq_exponent(n, p, 1.000001 * n as f64 / p).is_err());
    }

    #[test]
    fn config_text_round_trips(
        seed in any::<u64>(),
        lambda in 0.01..10.0f64,
        xi in 0.01..5.0f64,
        samples in prop::option::of(1usize..1_000_000),
        pts in prop::collection::vec(prop::array::uniform3(-1.0..1.0f64), 0..4),
        json in any::<bool>(),
    ) {
        let c = RunConfig {
            seed,
            lambda,
            xi,
            n_samples: samples,
            points: pts,
            format: if json { Format::Json } else { Format::Csv },
            ..Default::default()
        };
        prop_assert_eq!(RunConfig::parse(&c.to_config_string()).unwrap(), c);
    }
}
