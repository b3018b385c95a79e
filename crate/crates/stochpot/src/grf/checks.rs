use super::{gaussian_moment, kc_admissible, kernel_eval, printed_moment, CovKernel, GaussianSampler};
use crate::error::Result;
use crate::geometry::Point;
use crate::mc::estimate;
use crate::report::Report;

/// The four reference kernels and their expected Kolmogorov verdicts.
pub fn reference_kernels() -> [(&'static str, CovKernel, bool); 4] {
    [
        ("exponential", CovKernel::Exponential { alpha: 1.0, xi: 0.5 }, true),
        ("gaussian", CovKernel::GaussianCorr { alpha: 1.0, xi: 0.5 }, true),
        ("power_law", CovKernel::PowerLaw { xi: 0.5, p: 1.0 }, false),
        ("white_noise", CovKernel::WhiteNoise, false),
    ]
}

/// One verdict row per reference kernel; 1 means admissible.
pub fn admissibility_report() -> Report {
    let mut r = Report::new("kolmogorov-kernels");
    for (name, k, want) in reference_kernels() {
        let got = kc_admissible(&k).admissible;
        let b = |v: bool| if v { 1.0 } else { 0.0 };
        r.exact(&format!("{name}_admissible"), Some(b(want)), b(want), b(got), 0.0);
    }
    r
}

/// Empirical covariance on three points and the fourth moment at the first.
pub fn sampler_fidelity(kernel: &CovKernel, points: &[Point; 3], n_samples: usize, seed: u64) -> Result<Report> {
    let s = GaussianSampler::new(kernel, points)?;
    let alpha = kernel.variance()?;
    let pairs = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)];
    let est = estimate(n_samples, seed, pairs.len() + 1, |rng, out| {
        let mut z = [0.0; 3];
        let mut v = [0.0; 3];
        s.draw_into(rng, &mut z, &mut v);
        for (k, (i, j)) in pairs.iter().enumerate() {
            out[k] = v[*i] * v[*j];
        }
        out[pairs.len()] = v[0].powi(4);
    });
    let mut r = Report::new("sampler-fidelity");
    for (k, (i, j)) in pairs.iter().enumerate() {
        r.mc(&format!("covariance_{i}{j}"), None, kernel_eval(kernel, &points[*i], &points[*j])?, est[k]);
    }
    let m4 = est[pairs.len()];
    r.mc("fourth_moment", Some(printed_moment(alpha, 4)?), gaussian_moment(alpha, 4), m4);
    r.note_mc("fourth_moment_printed_convention", printed_moment(alpha, 4)?, m4);
    Ok(r)
}
