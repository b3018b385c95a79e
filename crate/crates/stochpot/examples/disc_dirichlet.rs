//! Dirichlet problem on the unit disc: Poisson integral against the Fourier
//! series for a few boundary data strings.

use stochpot::harmonic::{disc_fourier_eval, disc_fourier_solve, disc_poisson_eval, BoundaryData};

fn main() -> stochpot::Result<()> {
    let data = std::env::args().nth(1).unwrap_or_else(|| "cos2+sin1+const:0.5".into());
    let g: BoundaryData = data.parse()?;
    let coeffs = disc_fourier_solve(&g, 32)?;
    println!("g = {g}");
    for r in [0.0, 0.3, 0.6, 0.9, 0.99] {
        for theta in [0.0, 1.0, 2.5] {
            let p = disc_poisson_eval(&g, 1.0, r, theta, 2048)?;
            let f = disc_fourier_eval(&coeffs, 1.0, r, theta)?;
            println!("r={r:.2} theta={theta:.1}  poisson={p:+.10}  fourier={f:+.10}");
        }
    }
    Ok(())
}
