//! Draw a Gaussian field on a circle and print it as CSV.

use stochpot::geometry::{build_grid, Domain, MeasureKind};
use stochpot::grf::sample_field;
use stochpot::CovKernel;

fn main() -> stochpot::Result<()> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0);
    let kernel = CovKernel::GaussianCorr { alpha: 1.0, xi: 0.5 };
    let grid = build_grid(&Domain::unit_disc(), MeasureKind::Surface, 64)?;
    let field = sample_field(&kernel, &grid, seed)?;
    field.write_csv(std::io::stdout().lock(), 2)?;
    Ok(())
}
