//! Dirichlet problems whose boundary data carry Gaussian noise, on the disc
//! and on the ball.

use stochpot::harmonic::BoundaryData;
use stochpot::stochastic::{noisy_boundary_ball, noisy_boundary_disc, BallNoiseParams, DiscNoiseParams};

fn main() -> stochpot::Result<()> {
    let lambda = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1.0);
    let disc = DiscNoiseParams { n_samples: 20_000, ..Default::default() };
    println!("{}", noisy_boundary_disc(&BoundaryData::Cos(2), lambda, &disc)?.judged().render());
    let ball = BallNoiseParams { n_samples: 20_000, ..Default::default() };
    println!("{}", noisy_boundary_ball(&BoundaryData::ZDir, lambda, &ball)?.judged().render());
    Ok(())
}
