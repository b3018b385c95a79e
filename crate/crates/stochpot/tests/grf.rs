use nalgebra::DMatrix;
use stochpot::geometry::{build_spectral_grid, Domain, MeasureKind, Point};
use stochpot::grf::{
    complex_pair_covariances, derivative_cov, ensure_admissible, gaussian_moment, integral_covariance_closed,
    joint_covariance, kc_admissible, kernel_eval, printed_moment, predicted_variance, sample_field, stochastic_integral,
    superpose, GaussianSampler, Mvn, NoiseConstants,
};
use stochpot::mc::{estimate, sample_rng};
use stochpot::{CovKernel, Error};

const GAUSS: CovKernel = CovKernel::GaussianCorr { alpha: 1.5, xi: 0.7 };

fn shift(p: &Point, i: usize, h: f64) -> Point {
    let mut q = *p;
    q[i] += h;
    q
}

#[test]
fn derivative_covariances_match_kernel_differences() {
    let (x, y) = ([0.1, -0.2, 0.3], [0.4, 0.1, -0.1]);
    let h = 1e-4;
    let k = |a: &Point, b: &Point| kernel_eval(&GAUSS, a, b).unwrap();
    for i in 0..3 {
        let mut e = [0u8; 3];
        e[i] = 1;
        let fd = (k(&shift(&x, i, h), &y) - k(&shift(&x, i, -h), &y)) / (2.0 * h);
        assert!((derivative_cov(&GAUSS, &x, e, &y, [0; 3]).unwrap() - fd).abs() < 1e-7);
        for j in 0..3 {
            let mut f = [0u8; 3];
            f[j] = 1;
            let mixed = (k(&shift(&x, i, h), &shift(&y, j, h)) - k(&shift(&x, i, h), &shift(&y, j, -h))
                - k(&shift(&x, i, -h), &shift(&y, j, h))
                + k(&shift(&x, i, -h), &shift(&y, j, -h)))
                / (4.0 * h * h);
            assert!((derivative_cov(&GAUSS, &x, e, &y, f).unwrap() - mixed).abs() < 1e-5, "{i}{j}");
        }
    }
}

#[test]
fn gaussian_noise_constants() {
    let (alpha, xi) = (1.5, 0.7);
    let c = NoiseConstants::gaussian(alpha, xi, 3, 1.0);
    assert!((c.beta - 2.0 * alpha / (xi * xi)).abs() < 1e-12);
    // 12 per diagonal fourth derivative, 4 per mixed pair
    assert!((c.big_xi - 20.0 * alpha / xi.powi(4)).abs() < 1e-9);
    assert!((c.gradient_variance() - 3.0 * c.beta).abs() < 1e-15);
    assert!(matches!(
        NoiseConstants::from_kernel(&CovKernel::Exponential { alpha: 1.0, xi: 1.0 }, 3, 1.0),
        Err(Error::MissingConstant(_))
    ));
    assert!(NoiseConstants::new(1.0, -1.0, 0.0, 0.0, 1.0, 3).is_err());
}

#[test]
fn joint_covariance_is_symmetric_psd() {
    let items = [([0.0; 3], [0, 0, 0]), ([0.0; 3], [1, 0, 0]), ([0.2, 0.0, 0.0], [0, 1, 0]), ([0.1, 0.1, 0.0], [2, 0, 0])];
    let m = joint_covariance(&GAUSS, &items).unwrap();
    assert_eq!(m, m.transpose());
    assert!(m.symmetric_eigenvalues().iter().all(|v| *v > -1e-10));
}

#[test]
fn admissibility_and_errors() {
    assert!(kc_admissible(&GAUSS).admissible);
    let white = kc_admissible(&CovKernel::WhiteNoise);
    assert!(!white.admissible && !white.reason.is_empty());
    assert!(matches!(ensure_admissible(&CovKernel::PowerLaw { xi: 0.5, p: 1.0 }), Err(Error::Inadmissible(_))));
    assert_eq!(CovKernel::PowerLaw { xi: 0.5, p: 1.0 }.variance(), Err(Error::SingularKernel));
    assert_eq!(CovKernel::WhiteNoise.variance(), Err(Error::NonPointwiseKernel));
    assert!(kernel_eval(&CovKernel::GaussianCorr { alpha: -1.0, xi: 1.0 }, &[0.0; 3], &[0.0; 3]).is_err());
    assert!(matches!(derivative_cov(&CovKernel::Exponential { alpha: 1.0, xi: 1.0 }, &[0.0; 3], [1, 0, 0], &[0.0; 3], [0; 3]), Err(Error::NotDifferentiable(_))));
}

#[test]
fn moment_conventions() {
    assert_eq!(printed_moment(2.0, 2).unwrap(), gaussian_moment(2.0, 2));
    assert_eq!(printed_moment(2.0, 4).unwrap(), 4.0);
    assert_eq!(gaussian_moment(2.0, 4), 12.0);
    assert_eq!(gaussian_moment(2.0, 6), 120.0);
    assert_eq!(printed_moment(2.0, 3).unwrap(), 0.0);
    assert!(printed_moment(-1.0, 2).is_err());
    assert_eq!(complex_pair_covariances(2.0, 0.5), (1.5, 2.5));
}

#[test]
fn fields_are_reproducible_by_seed() {
    let grid = build_spectral_grid(&Domain::unit_disc(), MeasureKind::Volume, 4).unwrap();
    let a = sample_field(&GAUSS, &grid, 3).unwrap();
    let b = sample_field(&GAUSS, &grid, 3).unwrap();
    let c = sample_field(&GAUSS, &grid, 4).unwrap();
    assert_eq!(a, b);
    assert_ne!(a.values, c.values);
    assert!(sample_field(&CovKernel::WhiteNoise, &grid, 0).is_err());
    let mut buf = Vec::new();
    a.write_csv(&mut buf, 2).unwrap();
    assert_eq!(String::from_utf8(buf).unwrap().lines().count(), a.len() + 2);
}

#[test]
fn integral_variance_matches_double_quadrature() {
    let grid = build_spectral_grid(&Domain::ball(3, 1.0), MeasureKind::Volume, 3).unwrap();
    let want = integral_covariance_closed(&GAUSS, &grid, &grid).unwrap();
    let s = GaussianSampler::new(&GAUSS, &grid.points).unwrap();
    let est = estimate(20_000, 5, 1, |rng, out| {
        let mut z = vec![0.0; s.len()];
        let mut v = vec![0.0; s.len()];
        s.draw_into(rng, &mut z, &mut v);
        out[0] = v.iter().zip(&grid.weights).map(|(a, w)| a * w).sum::<f64>().powi(2);
    });
    assert!(est[0].within(want, 4.0), "{:?} vs {want}", est[0]);
    let f = s.sample(1);
    let direct: f64 = f.values.iter().zip(&grid.weights).map(|(a, w)| a * w).sum();
    assert_eq!(stochastic_integral(&f, &grid).unwrap(), direct);
}

#[test]
fn superposition() {
    let grid = build_spectral_grid(&Domain::unit_disc(), MeasureKind::Curve, 4).unwrap();
    let f = sample_field(&GAUSS, &grid, 1).unwrap();
    let g = sample_field(&GAUSS, &grid, 2).unwrap();
    let s = superpose(&[f.clone(), g.clone()], &[2.0, -1.0]).unwrap();
    for i in 0..s.len() {
        assert!((s.values[i] - (2.0 * f.values[i] - g.values[i])).abs() < 1e-15);
    }
    assert_eq!(predicted_variance(&[2.0, -1.0], &[1.5, 1.5]).unwrap(), 7.5);
    assert!(matches!(superpose(&[f], &[1.0, 2.0]), Err(Error::InvalidPairing(_))));
    let other = build_spectral_grid(&Domain::ball(3, 1.0), MeasureKind::Surface, 2).unwrap();
    assert!(matches!(stochastic_integral(&g, &other), Err(Error::InvalidPairing(_))));
}

#[test]
fn low_rank_sampler_covariance() {
    let pts: Vec<Point> = (0..40).map(|i| [i as f64 / 40.0, 0.0, 0.0]).collect();
    let cov = DMatrix::from_fn(40, 40, |i, j| kernel_eval(&GAUSS, &pts[i], &pts[j]).unwrap());
    let m = Mvn::from_covariance_low_rank(cov.clone(), 1e-12).unwrap();
    assert!(m.rank() < 40 && m.dim() == 40);
    let mut rng = sample_rng(9, 0);
    let n = 20_000;
    let (mut s0, mut s01) = (0.0, 0.0);
    for _ in 0..n {
        let v = m.draw(&mut rng);
        s0 += v[0] * v[0];
        s01 += v[0] * v[39];
    }
    // each product has variance at most 2 alpha^2
    let se = (2.0 * 1.5f64.powi(2) / n as f64).sqrt();
    assert!((s0 / n as f64 - cov[(0, 0)]).abs() < 4.0 * se);
    assert!((s01 / n as f64 - cov[(0, 39)]).abs() < 4.0 * se);
    assert!(Mvn::from_covariance_low_rank(cov, 2.0).is_err());
}
