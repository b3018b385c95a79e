//! Newtonian potential of a uniform ball: quadrature against the closed form,
//! inside and outside the ball.

use stochpot::geometry::{build_grid, Domain, MeasureKind, DEFAULT_RESOLUTION};
use stochpot::potentials::{ball_integral_closed, capacity, riesz_potential, RieszSpec};

fn main() -> stochpot::Result<()> {
    let grid = build_grid(&Domain::ball(3, 1.0), MeasureKind::Volume, DEFAULT_RESOLUTION)?;
    let spec = RieszSpec::newtonian(1.0, grid)?;
    println!("{:>6} {:>14} {:>14} {:>10}", "a", "quadrature", "closed", "rel err");
    for a in [0.0, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 4.0] {
        let q = riesz_potential(&spec, &[0.0, 0.0, a])?;
        let c = ball_integral_closed(1.0, a)?;
        println!("{a:>6.2} {q:>14.8} {c:>14.8} {:>10.2e}", (q - c).abs() / c);
    }
    println!("self energy: {:.6}", capacity(&spec, 1.0)?);
    Ok(())
}
