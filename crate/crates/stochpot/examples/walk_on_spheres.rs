//! Walk-on-spheres estimates for Laplace and Poisson problems, plus how the
//! number of steps grows as the absorption shell shrinks.

use stochpot::geometry::{Domain, Point};
use stochpot::harmonic::BoundaryData;
use stochpot::wos::{first_passage_stats, wos_laplace, wos_poisson, WalkConfig};

fn main() -> stochpot::Result<()> {
    let cfg = WalkConfig { n_walkers: 20_000, seed: 1, ..Default::default() };
    let ball = Domain::ball(3, 1.0);
    let g = BoundaryData::Cos(2);
    for x in [[0.0, 0.0, 0.0], [0.3, 0.2, 0.1], [0.0, 0.7, 0.5]] {
        let r = wos_laplace(&ball, &g, &x, &cfg)?;
        let exact = g.exact_extension(&x).expect("cos2 has a closed-form extension");
        println!("laplace {x:?}: {:.5} +- {:.5} (exact {exact:.5}, {:.1} steps)", r.estimate.mean, r.estimate.stderr, r.mean_steps);
    }

    // lap psi = -4 on the disc with psi = 1 - r^2
    let psi = |p: &Point| 1.0 - p[0] * p[0] - p[1] * p[1];
    let zero = BoundaryData::Constant(0.0);
    let x = [0.4, 0.2, 0.0];
    let r = wos_poisson(&Domain::unit_disc(), &|_: &Point| -4.0, &zero, &x, &cfg)?;
    println!("poisson {x:?}: {:.5} +- {:.5} (exact {:.5})", r.estimate.mean, r.estimate.stderr, psi(&x));

    for eps in [1e-2, 1e-3, 1e-4, 1e-5] {
        let c = WalkConfig { epsilon_shell: Some(eps), ..cfg };
        let s = first_passage_stats(&ball, &[0.5, 0.0, 0.0], &c)?;
        println!("shell {eps:.0e}: mean steps {:.2}", s.mean_steps);
    }
    Ok(())
}
