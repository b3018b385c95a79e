//! Newtonian potential of a ball whose density is perturbed by a Gaussian
//! field, and moments of Riesz potentials of a random density.

use stochpot::geometry::{build_spectral_grid, Domain, MeasureKind};
use stochpot::potentials::RieszSpec;
use stochpot::stochastic::{noisy_density_newton, stochastic_riesz_moments, NewtonParams, RieszMomentParams};
use stochpot::CovKernel;

fn main() -> stochpot::Result<()> {
    let np = NewtonParams { n_samples: 20_000, seed: 1, ..Default::default() };
    println!("{}", noisy_density_newton(&np, &[[0.0, 0.0, 2.0], [0.0, 0.0, 4.0]], &[2, 4])?.judged().render());
    let grid = build_spectral_grid(&Domain::ball(3, 1.0), MeasureKind::Volume, 4)?;
    let spec = RieszSpec::newtonian(1.0, grid)?;
    let kernel = CovKernel::GaussianCorr { alpha: 1.0, xi: 0.5 };
    let rp = RieszMomentParams { n_samples: 20_000, seed: 2, ..Default::default() };
    println!("{}", stochastic_riesz_moments(&spec, 1.0, &kernel, &rp)?.judged().render());
    Ok(())
}
