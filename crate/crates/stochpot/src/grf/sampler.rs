use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{ensure_admissible, kernel_eval, CovKernel, FieldSample};
use crate::error::{Error, Result};
use crate::geometry::{DomainGrid, Point};
use crate::mc::sample_rng;

/// Largest node set accepted for dense factorization.
pub const SAMPLE_CAP: usize = 4000;

const JITTER_START: f64 = 1e-10;
const JITTER_MAX: f64 = 1e-6;

#[derive(Debug, Clone)]
enum Factor {
    // rows of L, row i has i+1 entries
    Packed(Vec<f64>),
    // row-major n x rank
    LowRank { rank: usize, b: Vec<f64> },
}

/// Zero-mean multivariate normal drawn as `L z`.
#[derive(Debug, Clone)]
pub struct Mvn {
    n: usize,
    factor: Factor,
    pub jitter: f64,
}

impl Mvn {
    /// Factor `cov + jitter * I`, with jitter relative to the largest diagonal entry.
    pub fn from_covariance(cov: DMatrix<f64>) -> Result<Self> {
        let n = cov.nrows();
        if n == 0 || n != cov.ncols() {
            return Err(Error::InvalidArgument("covariance must be square and non-empty".into()));
        }
        if n > SAMPLE_CAP {
            return Err(Error::ResourceLimit { n, cap: SAMPLE_CAP });
        }
        let scale = cov.diagonal().iter().cloned().fold(0.0, f64::max);
        let mut jitter = JITTER_START;
        loop {
            let mut m = cov.clone();
            for i in 0..n {
                m[(i, i)] += jitter * scale;
            }
            if let Some(ch) = m.cholesky() {
                let l = ch.l();
                let mut packed = Vec::with_capacity(n * (n + 1) / 2);
                for i in 0..n {
                    for j in 0..=i {
                        packed.push(l[(i, j)]);
                    }
                }
                return Ok(Mvn { n, factor: Factor::Packed(packed), jitter: jitter * scale });
            }
            if jitter >= JITTER_MAX {
                return Err(Error::FactorizationFailure { jitter: jitter * scale });
            }
            jitter *= 10.0;
        }
    }

    /// Pivoted Cholesky truncated once the largest residual variance drops below `rel_tol` times
    /// the largest variance. Cheap to draw from when the kernel is smooth on a dense node set.
    pub fn from_covariance_low_rank(cov: DMatrix<f64>, rel_tol: f64) -> Result<Self> {
        let n = cov.nrows();
        if n == 0 || n != cov.ncols() {
            return Err(Error::InvalidArgument("covariance must be square and non-empty".into()));
        }
        if !(rel_tol > 0.0 && rel_tol < 1.0) {
            return Err(Error::InvalidArgument(format!("rel_tol must lie in (0, 1), got {rel_tol}")));
        }
        let mut d: Vec<f64> = cov.diagonal().iter().copied().collect();
        let scale = d.iter().cloned().fold(0.0, f64::max);
        if d.iter().any(|v| *v < 0.0) || scale <= 0.0 {
            return Err(Error::FactorizationFailure { jitter: 0.0 });
        }
        // columns of the factor
        let mut cols: Vec<Vec<f64>> = Vec::new();
        while cols.len() < n {
            let (p, dmax) = d.iter().enumerate().fold((0, f64::NEG_INFINITY), |a, (i, v)| if *v > a.1 { (i, *v) } else { a });
            if dmax <= rel_tol * scale {
                break;
            }
            let piv = dmax.sqrt();
            let col: Vec<f64> = (0..n)
                .map(|i| {
                    let c = cov[(i, p)] - cols.iter().map(|l| l[i] * l[p]).sum::<f64>();
                    c / piv
                })
                .collect();
            for (di, li) in d.iter_mut().zip(&col) {
                *di -= li * li;
            }
            d[p] = 0.0;
            cols.push(col);
        }
        let rank = cols.len();
        let mut b = vec![0.0; n * rank];
        for (k, c) in cols.iter().enumerate() {
            for i in 0..n {
                b[i * rank + k] = c[i];
            }
        }
        Ok(Mvn { n, factor: Factor::LowRank { rank, b }, jitter: 0.0 })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Number of standard normals consumed per draw.
    pub fn rank(&self) -> usize {
        match &self.factor {
            Factor::Packed(_) => self.n,
            Factor::LowRank { rank, .. } => *rank,
        }
    }

    /// Fill `out` with one draw; `z` is scratch of at least `rank()` entries.
    pub fn draw_into<R: Rng + ?Sized>(&self, rng: &mut R, z: &mut [f64], out: &mut [f64]) {
        let z = &mut z[..self.rank()];
        for v in z.iter_mut() {
            *v = rng.sample(StandardNormal);
        }
        match &self.factor {
            Factor::Packed(packed) => {
                let mut k = 0;
                for i in 0..self.n {
                    let row = &packed[k..k + i + 1];
                    out[i] = row.iter().zip(&z[..=i]).map(|(a, b)| a * b).sum();
                    k += i + 1;
                }
            }
            Factor::LowRank { rank, b } => {
                for i in 0..self.n {
                    out[i] = b[i * rank..(i + 1) * rank].iter().zip(z.iter()).map(|(a, b)| a * b).sum();
                }
            }
        }
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let mut z = vec![0.0; self.n];
        let mut out = vec![0.0; self.n];
        self.draw_into(rng, &mut z, &mut out);
        out
    }
}

/// Field sampler bound to a kernel and a node set.
#[derive(Debug, Clone)]
pub struct GaussianSampler {
    pub kernel: CovKernel,
    pub points: Vec<Point>,
    pub mvn: Mvn,
}

impl GaussianSampler {
    pub fn new(kernel: &CovKernel, points: &[Point]) -> Result<Self> {
        ensure_admissible(kernel)?;
        let n = points.len();
        if n > SAMPLE_CAP {
            return Err(Error::ResourceLimit { n, cap: SAMPLE_CAP });
        }
        let mut cov = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..=i {
                let k = kernel_eval(kernel, &points[i], &points[j])?;
                cov[(i, j)] = k;
                cov[(j, i)] = k;
            }
        }
        let mvn = Mvn::from_covariance(cov)?;
        Ok(GaussianSampler { kernel: *kernel, points: points.to_vec(), mvn })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn draw_into<R: Rng + ?Sized>(&self, rng: &mut R, z: &mut [f64], out: &mut [f64]) {
        self.mvn.draw_into(rng, z, out)
    }

    pub fn sample(&self, seed: u64) -> FieldSample {
        let mut rng = sample_rng(seed, 0);
        FieldSample { points: self.points.clone(), values: self.mvn.draw(&mut rng), seed, kernel: self.kernel }
    }
}

/// Deterministic draw of `kernel` on the nodes of `grid`.
pub fn sample_field(kernel: &CovKernel, grid: &DomainGrid, seed: u64) -> Result<FieldSample> {
    Ok(GaussianSampler::new(kernel, &grid.points)?.sample(seed))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jitter_rescues_rank_deficient() {
        // duplicated node: singular but PSD
        let k = CovKernel::GaussianCorr { alpha: 1.0, xi: 1.0 };
        let s = GaussianSampler::new(&k, &[[0.0; 3], [0.0; 3], [1.0, 0.0, 0.0]]).unwrap();
        assert!(s.mvn.jitter > 0.0);
    }

    #[test]
    fn rejects_indefinite() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]);
        assert!(matches!(Mvn::from_covariance(m), Err(Error::FactorizationFailure { .. })));
    }

    #[test]
    fn cap_enforced() {
        let pts = vec![[0.0; 3]; SAMPLE_CAP + 1];
        let k = CovKernel::Exponential { alpha: 1.0, xi: 1.0 };
        assert!(matches!(GaussianSampler::new(&k, &pts), Err(Error::ResourceLimit { .. })));
    }

    #[test]
    fn low_rank_reconstructs_smooth_covariance() {
        let k = CovKernel::GaussianCorr { alpha: 2.0, xi: 0.8 };
        let pts: Vec<Point> = (0..60).map(|i| [i as f64 / 60.0, 0.1 * (0.3 * i as f64).sin(), 0.0]).collect();
        let cov = DMatrix::from_fn(60, 60, |i, j| kernel_eval(&k, &pts[i], &pts[j]).unwrap());
        let tol = 1e-10;
        let m = Mvn::from_covariance_low_rank(cov.clone(), tol).unwrap();
        assert!(m.rank() < 60);
        let Factor::LowRank { rank, b } = &m.factor else { panic!("expected a low-rank factor") };
        for i in 0..60 {
            for j in 0..60 {
                let r: f64 = (0..*rank).map(|q| b[i * rank + q] * b[j * rank + q]).sum();
                // residual is PSD with diagonal below tol * max variance
                assert!((r - cov[(i, j)]).abs() <= tol * 2.0 * 1.0001, "({i},{j}) {r} vs {}", cov[(i, j)]);
            }
        }
    }
}
