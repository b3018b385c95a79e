//! Which covariance kernels admit continuous sample paths, and how well the
//! sampler reproduces the covariance it was given.

use stochpot::grf::{admissibility_report, kc_admissible, reference_kernels, sampler_fidelity};
use stochpot::CovKernel;

fn main() -> stochpot::Result<()> {
    for (name, k, _) in reference_kernels() {
        let a = kc_admissible(&k);
        println!("{name:<12} {:<5} {}", a.admissible, a.reason);
    }
    println!("{}", admissibility_report().render());
    let k = CovKernel::Exponential { alpha: 2.0, xi: 0.7 };
    let pts = [[0.0, 0.0, 0.0], [0.3, 0.1, 0.0], [-0.2, 0.5, 0.4]];
    println!("{}", sampler_fidelity(&k, &pts, 50_000, 3)?.judged().render());
    Ok(())
}
