//! Deterministic checks of the classical estimates on random harmonic
//! polynomials, then the stochastic Cacciopolli inequality.

use stochpot::harmonic::{classical_suite, HarmonicFn};
use stochpot::stochastic::{cacciopolli_condition, stochastic_cacciopolli, PerturbedField};
use stochpot::CovKernel;

fn main() -> stochpot::Result<()> {
    let suite = classical_suite(10, 0)?;
    println!("{}", suite.render());
    println!("all classical checks pass: {}", suite.passed());

    for r in [0.5, 1.0, 3.0, 6.0] {
        let c = cacciopolli_condition(r, 1.0, 2.0, 3)?;
        println!("R={r}: condition {} (r* = {:.3})", c.holds, c.r_star);
    }
    let kernel = CovKernel::GaussianCorr { alpha: 1.0, xi: 0.5 };
    let f = PerturbedField::new(HarmonicFn::linear([0.3, 0.0, 0.0], 1.0), 1.0, kernel)?;
    println!("{}", stochastic_cacciopolli(&f, [0.0; 3], 1.0, 3, 3, &[7, 8, 9], 20_000)?.judged().render());
    Ok(())
}
