//! Mean value property, maximum principle and Harnack bounds for a harmonic
//! function perturbed by a Gaussian field.

use stochpot::geometry::{build_spectral_grid, Domain, MeasureKind};
use stochpot::harmonic::HarmonicFn;
use stochpot::stochastic::{averaged_max_principle, perturbed_mvp, stochastic_harnack, MvpParams, PerturbedField};
use stochpot::CovKernel;

fn main() -> stochpot::Result<()> {
    let kernel = CovKernel::GaussianCorr { alpha: 1.0, xi: 0.5 };
    let f = PerturbedField::new(HarmonicFn::linear([0.3, 0.2, 0.0], 1.0), 0.5, kernel)?;
    println!("{}", perturbed_mvp(&f, &MvpParams { n_samples: 20_000, seed: 1, ..Default::default() })?.judged().render());

    let ball = Domain::ball(3, 1.0);
    let inner = build_spectral_grid(&ball, MeasureKind::Volume, 3)?;
    let bdry = build_spectral_grid(&ball, MeasureKind::Surface, 12)?;
    println!("{}", averaged_max_principle(&f, &inner, &bdry, &[1, 2], 20_000, 2)?.judged().render());
    println!("{}", stochastic_harnack(&f, &[0.4, 0.2, 0.0], 1.0, 3, &[1, 2, 4], 20_000, 3)?.judged().render());
    Ok(())
}
