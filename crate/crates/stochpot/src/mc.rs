//! Reproducible Monte Carlo plumbing.
//!
//! Every sample `i` draws from its own ChaCha stream keyed by `(seed, i)`, and
//! samples are grouped into fixed batches that are summed in index order. The
//! result is therefore bit-identical for any rayon pool size.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub const DEFAULT_BATCHES: usize = 100;
pub const THREADS_ENV: &str = "STOCHPOT_THREADS";

/// Independent stream for sample `index` under `seed`.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Worker cap from `STOCHPOT_THREADS`, else the machine's parallelism.
pub fn worker_count() -> usize {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
}

/// Run `f` inside a dedicated pool of `threads` workers.
pub fn with_threads<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> R {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .expect("thread pool")
        .install(f)
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
    pub n: usize,
}

impl Estimate {
    pub fn exact(v: f64, n: usize) -> Self {
        Estimate { mean: v, stderr: 0.0, n }
    }

    /// Number of standard errors separating the estimate from `target`.
    pub fn z_score(&self, target: f64) -> f64 {
        let d = (self.mean - target).abs();
        if self.stderr > 0.0 {
            d / self.stderr
        } else if d <= 1e-12 * (1.0 + target.abs()) {
            0.0
        } else {
            f64::INFINITY
        }
    }

    pub fn within(&self, target: f64, k: f64) -> bool {
        self.z_score(target) <= k
    }
}

/// Batch-means estimator for `k` statistics over `n` samples.
///
/// `f(rng, out)` fills `out` (length `k`) for one sample; `out` is zeroed first.
pub fn estimate<F>(n: usize, seed: u64, k: usize, f: F) -> Vec<Estimate>
where
    F: Fn(&mut ChaCha8Rng, &mut [f64]) + Sync,
{
    estimate_batched(n, seed, k, DEFAULT_BATCHES, f)
}

pub fn estimate_batched<F>(n: usize, seed: u64, k: usize, batches: usize, f: F) -> Vec<Estimate>
where
    F: Fn(&mut ChaCha8Rng, &mut [f64]) + Sync,
{
    assert!(n > 0, "at least one sample");
    let b = batches.clamp(1, n);
    let sums: Vec<Vec<f64>> = (0..b)
        .into_par_iter()
        .map(|j| {
            let (lo, hi) = (j * n / b, (j + 1) * n / b);
            let mut acc = vec![0.0; k];
            let mut out = vec![0.0; k];
            for i in lo..hi {
                out.iter_mut().for_each(|v| *v = 0.0);
                let mut rng = sample_rng(seed, i as u64);
                f(&mut rng, &mut out);
                for (a, o) in acc.iter_mut().zip(&out) {
                    *a += o;
                }
            }
            acc
        })
        .collect();

    (0..k)
        .map(|s| {
            let total: f64 = sums.iter().map(|v| v[s]).sum();
            let mean = total / n as f64;
            let stderr = if b > 1 {
                // batch means weighted by batch size
                let mut ss = 0.0;
                for (j, v) in sums.iter().enumerate() {
                    let m = ((j + 1) * n / b - j * n / b) as f64;
                    let bm = v[s] / m;
                    ss += m * (bm - mean) * (bm - mean);
                }
                let var_unit = ss / (b as f64 - 1.0);
                (var_unit / n as f64).sqrt()
            } else {
                0.0
            };
            Estimate { mean, stderr, n }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn streams_differ_and_repeat() {
        let a: u64 = sample_rng(1, 0).random();
        let b: u64 = sample_rng(1, 1).random();
        let c: u64 = sample_rng(1, 0).random();
        assert_ne!(a, b);
        assert_eq!(a, c);
    }

    #[test]
    fn uniform_mean() {
        let e = estimate(20_000, 3, 1, |rng, out| out[0] = rng.random::<f64>());
        assert!(e[0].within(0.5, 4.0), "{:?}", e[0]);
        // 1/sqrt(12 n)
        let expect = (1.0 / 12.0f64 / 20_000.0).sqrt();
        assert!((e[0].stderr / expect - 1.0).abs() < 0.3);
    }

    #[test]
    fn pool_size_does_not_change_bits() {
        let run = || estimate(5_000, 9, 2, |rng, out| {
            let u: f64 = rng.random();
            out[0] = u;
            out[1] = u * u;
        });
        let a = with_threads(1, run);
        let b = with_threads(3, run);
        assert_eq!(a, b);
    }
}
