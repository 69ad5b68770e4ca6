//! Deterministic reductions and summary statistics for Monte Carlo output.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Work items per parallel task; fixed so results never depend on the pool size.
const CHUNK: usize = 256;

/// `(0..n).map(f)` evaluated in parallel on `workers` threads (the global
/// pool when `None`), returned in index order.
pub fn par_map_indexed<T: Send>(n: usize, workers: Option<usize>, f: impl Fn(usize) -> T + Sync) -> Result<Vec<T>> {
    let job = || {
        let chunks: Vec<Vec<T>> = (0..n.div_ceil(CHUNK)).into_par_iter().map(|c| (c * CHUNK..((c + 1) * CHUNK).min(n)).map(&f).collect()).collect();
        chunks.into_iter().flatten().collect()
    };
    match workers {
        None => Ok(job()),
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(w.max(1)).build().map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
            Ok(pool.install(job))
        }
    }
}

/// Pairwise (tree) summation; the reduction order depends only on the length.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    const LEAF: usize = 64;
    if xs.len() <= LEAF {
        xs.iter().sum()
    } else {
        let mid = xs.len() / 2;
        pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
    }
}

/// Summary of a sample: mean, standard error and a quantile table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleStats {
    pub mean: f64,
    pub std_error: f64,
    pub n: usize,
    /// `(level, value)` pairs, levels ascending.
    pub quantiles: Vec<(f64, f64)>,
}

pub const QUANTILE_LEVELS: [f64; 7] = [0.01, 0.05, 0.25, 0.5, 0.75, 0.95, 0.99];

impl SampleStats {
    pub fn from_samples(samples: &[f64]) -> Self {
        let n = samples.len();
        if n == 0 {
            return Self { mean: f64::NAN, std_error: f64::NAN, n, quantiles: Vec::new() };
        }
        let mean = pairwise_sum(samples) / n as f64;
        let sq: Vec<f64> = samples.iter().map(|x| (x - mean) * (x - mean)).collect();
        let var = if n > 1 { pairwise_sum(&sq) / (n - 1) as f64 } else { 0.0 };
        let mut sorted = samples.to_vec();
        sorted.sort_by(f64::total_cmp);
        let quantiles = QUANTILE_LEVELS.iter().map(|&q| (q, quantile_sorted(&sorted, q))).collect();
        Self { mean, std_error: (var / n as f64).sqrt(), n, quantiles }
    }

    pub fn sample_std(&self) -> f64 {
        self.std_error * (self.n as f64).sqrt()
    }
}

/// Linear-interpolated quantile of sorted data.
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let pos = q.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let w = pos - lo as f64;
    sorted[lo] * (1.0 - w) + sorted[hi] * w
}

/// A proportion with a Wilson score interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Proportion {
    pub estimate: f64,
    pub lower: f64,
    pub upper: f64,
    pub hits: usize,
    pub n: usize,
}

impl Proportion {
    /// Wilson interval at `z` standard deviations (1.96 for 95%).
    pub fn wilson(hits: usize, n: usize, z: f64) -> Self {
        if n == 0 {
            return Self { estimate: f64::NAN, lower: 0.0, upper: 1.0, hits, n };
        }
        let nf = n as f64;
        let p = hits as f64 / nf;
        let z2 = z * z;
        let denom = 1.0 + z2 / nf;
        let centre = (p + z2 / (2.0 * nf)) / denom;
        let half = z * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt() / denom;
        Self { estimate: p, lower: (centre - half).max(0.0), upper: (centre + half).min(1.0), hits, n }
    }

    /// Binomial standard error `sqrt(p(1-p)/n)`.
    pub fn std_error(&self) -> f64 {
        (self.estimate * (1.0 - self.estimate) / self.n as f64).sqrt()
    }
}
