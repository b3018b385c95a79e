//! Dirichlet energy of a perturbed field, line integrals of its gradient and
//! the Bochner identity in expectation.

use stochpot::harmonic::{HarmonicFn, Part};
use stochpot::stochastic::{sadei, stochastic_bochner, stochastic_line_integral, LineIntegralParams, PerturbedField, SadeiParams};
use stochpot::CovKernel;

fn main() -> stochpot::Result<()> {
    let kernel = CovKernel::GaussianCorr { alpha: 1.0, xi: 0.5 };
    let f = PerturbedField::new(HarmonicFn::poly(2, Part::Real), 1.0, kernel)?;
    println!("{}", sadei(&f, &SadeiParams { n_samples: 20_000, seed: 1, ..Default::default() })?.judged().render());
    println!("{}", stochastic_line_integral(&f, &LineIntegralParams { n_samples: 20_000, seed: 2, ..Default::default() })?.judged().render());
    println!("{}", stochastic_bochner(&f, &[0.3, 0.2, 0.1], 3, 20_000, 3)?.judged().render());
    Ok(())
}
