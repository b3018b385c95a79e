//! Potential flow past a sphere with a random velocity potential.

use stochpot::harmonic::HarmonicFn;
use stochpot::stochastic::{turbulent_flow_stats, PerturbedField, TurbulenceParams};
use stochpot::CovKernel;

fn main() -> stochpot::Result<()> {
    let kernel = CovKernel::GaussianCorr { alpha: 1.0, xi: 0.5 };
    let flow = PerturbedField::new(HarmonicFn::FlowPastSphere { u: 1.0, r: 1.0 }, 0.3, kernel)?;
    let p = TurbulenceParams { n_samples: 20_000, seed: 6, ..Default::default() };
    println!("{}", turbulent_flow_stats(&flow, &p)?.judged().render());
    Ok(())
}
