//! Characteristic function of the random model, density inversion, Gaussian
//! asymptotics and the constant `K0`.
//!
//! Fourier convention: `Φ̂(x, y) = E exp(2πi Σ_j (x_j U_j + y_j V_j))` where
//! `(U_j, V_j) = (log|L_j|, arg L_j)`, so that `H(u, v) = ∫ Φ̂ e^{-2πi(x·u + y·v)}`.

use std::f64::consts::{PI, TAU};

use gauss_quad::GaussHermite;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::erf::erf;
use statrs::function::gamma::gamma;

use crate::lfunc::LFunctionSpec;
use crate::numerics::quad::periodic_mean;
use crate::primes::PrimeTable;
use crate::stats::{pairwise_sum, par_map_indexed};
use crate::{Error, Result};

/// Default prime cutoff of the characteristic-function product.
pub const DEFAULT_PRIME_CUTOFF: u64 = 10_000;
const PHI_MIN_NODES: usize = 64;
const PHI_MAX_NODES: usize = 1 << 16;
const PHI_TOL: f64 = 1e-12;
/// Gauss–Hermite order of the `K0` quadrature.
pub const K0_HERMITE_ORDER: usize = 80;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FourierPoint {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl FourierPoint {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.len() != y.len() || x.iter().chain(&y).any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("Fourier point needs finite x and y of equal length".into()));
        }
        Ok(Self { x, y })
    }

    pub fn origin(j: usize) -> Self {
        Self { x: vec![0.0; j], y: vec![0.0; j] }
    }

    pub fn neg(&self) -> Self {
        Self { x: self.x.iter().map(|v| -v).collect(), y: self.y.iter().map(|v| -v).collect() }
    }

    fn is_origin(&self) -> bool {
        self.x.iter().chain(&self.y).all(|&v| v == 0.0)
    }
}

/// `Σ_{k ≤ K} β(p^k) u^k` truncated once `|u|^K < 1e-18`.
fn local_log(alpha: Complex64, u: Complex64) -> Complex64 {
    let w = alpha * u;
    let r = u.norm();
    let mut sum = Complex64::new(0.0, 0.0);
    let mut pw = Complex64::new(1.0, 0.0);
    let mut rk = 1.0;
    for k in 1..=400 {
        pw *= w;
        rk *= r;
        sum += pw / k as f64;
        if rk < 1e-18 {
            break;
        }
    }
    sum
}

/// Local factor `φ_{p,σ}(x, y)`.
pub fn phi_p(specs: &[LFunctionSpec], sigma: f64, p: u64, point: &FourierPoint) -> Result<Complex64> {
    check_point(specs, sigma, point)?;
    Ok(phi_p_unchecked(specs, sigma, p, point))
}

fn check_point(specs: &[LFunctionSpec], sigma: f64, point: &FourierPoint) -> Result<()> {
    if !(sigma > 0.5) {
        return Err(Error::InvalidArgument(format!("sigma must exceed 1/2, got {sigma}")));
    }
    if point.x.len() != specs.len() || point.y.len() != specs.len() {
        return Err(Error::InvalidArgument("Fourier point dimension must equal the number of specs".into()));
    }
    Ok(())
}

fn phi_p_unchecked(specs: &[LFunctionSpec], sigma: f64, p: u64, point: &FourierPoint) -> Complex64 {
    if point.is_origin() {
        return Complex64::new(1.0, 0.0);
    }
    let r = (p as f64).powf(-sigma);
    let alphas: Vec<Complex64> = specs.iter().map(|s| s.alpha(p)).collect();
    let f = |theta: f64| {
        let u = Complex64::from_polar(r, theta);
        let mut phase = 0.0;
        for (j, &a) in alphas.iter().enumerate() {
            let g = local_log(a, u);
            phase += point.x[j] * g.re + point.y[j] * g.im;
        }
        Complex64::from_polar(1.0, TAU * phase)
    };
    periodic_mean(f, PHI_MIN_NODES, PHI_TOL, PHI_MAX_NODES).0
}

/// `Π_{p ≤ cutoff} φ_{p,σ}(x, y)`.
pub fn char_fn(specs: &[LFunctionSpec], sigma: f64, point: &FourierPoint, prime_cutoff: u64) -> Result<Complex64> {
    check_point(specs, sigma, point)?;
    let table = PrimeTable::shared(prime_cutoff);
    let mut prod = Complex64::new(1.0, 0.0);
    for &p in table.up_to(prime_cutoff as f64)? {
        prod *= phi_p_unchecked(specs, sigma, p, point);
        if prod.norm() < 1e-300 {
            return Ok(Complex64::new(0.0, 0.0));
        }
    }
    Ok(prod)
}

/// Output grid of [`invert_density`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityGridSpec {
    /// Each coordinate covers `[-half_width, half_width]` (arg coordinates included).
    pub half_width: f64,
    /// Output points per axis.
    pub points: usize,
    /// Return averages over grid cells instead of point values.
    pub cell_average: bool,
    /// Frequency half-extent; `None` chooses it from the decay of the characteristic function.
    pub freq_extent: Option<f64>,
}

impl Default for DensityGridSpec {
    fn default() -> Self {
        Self { half_width: 6.0, points: 61, cell_average: false, freq_extent: None }
    }
}

/// Tabulated density over `(u_1, v_1, …, u_J, v_J)`, row-major with the last axis fastest.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DensityGrid {
    /// Shared axis used for every coordinate.
    pub axis: Vec<f64>,
    pub dims: usize,
    pub values: Vec<f64>,
    pub sigma: f64,
    pub prime_cutoff: u64,
    pub freq_extent: f64,
    pub freq_step: f64,
    /// Largest `|Im|` of the inverted transform.
    pub max_imag_residue: f64,
    /// Largest `|char_fn|` found on the boundary of the frequency box.
    pub boundary_modulus: f64,
}

impl DensityGrid {
    pub fn spacing(&self) -> f64 {
        self.axis[1] - self.axis[0]
    }

    pub fn mass(&self) -> f64 {
        pairwise_sum(&self.values) * self.spacing().powi(self.dims as i32)
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Value at the multi-index `idx` (one entry per coordinate).
    pub fn at(&self, idx: &[usize]) -> f64 {
        let n = self.axis.len();
        self.values[idx.iter().fold(0, |acc, &i| acc * n + i)]
    }
}

fn boundary_modulus(specs: &[LFunctionSpec], sigma: f64, extent: f64, cutoff: u64) -> Result<f64> {
    let j = specs.len();
    let mut worst: f64 = 0.0;
    for d in 0..2 * j {
        for &sign in &[1.0, -1.0] {
            let mut pt = FourierPoint::origin(j);
            if d < j {
                pt.x[d] = sign * extent;
            } else {
                pt.y[d - j] = sign * extent;
            }
            worst = worst.max(char_fn(specs, sigma, &pt, cutoff)?.norm());
        }
    }
    let diag = FourierPoint { x: vec![extent; j], y: vec![extent; j] };
    worst = worst.max(char_fn(specs, sigma, &diag, cutoff)?.norm());
    Ok(worst)
}

/// Density of `(log|L_j|, arg L_j)_j` by discrete inverse Fourier transform of [`char_fn`].
pub fn invert_density(specs: &[LFunctionSpec], sigma: f64, grid: &DensityGridSpec, prime_cutoff: u64) -> Result<DensityGrid> {
    let j = specs.len();
    if j == 0 || j > 2 {
        return Err(Error::InvalidArgument(format!("density inversion supports J = 1 or 2, got {j}")));
    }
    if !(sigma > 0.5) || grid.points < 2 || !(grid.half_width > 0.0) {
        return Err(Error::InvalidArgument("invalid density grid request".into()));
    }
    let dims = 2 * j;
    let extent = match grid.freq_extent {
        Some(e) => e,
        None => {
            let mut e = 0.5;
            while boundary_modulus(specs, sigma, e, prime_cutoff)? > 1e-10 && e < 64.0 {
                e *= 1.5;
            }
            e
        }
    };
    let bmod = boundary_modulus(specs, sigma, extent, prime_cutoff)?;
    if bmod > 1e-6 {
        return Err(Error::InsufficientDecay(bmod));
    }
    // Frequency step sets the period 1/dx of the aliased density.
    let period = 2.0 * grid.half_width + 2.0;
    let dx = 1.0 / period;
    let m = (extent / dx).ceil() as i64;
    let freqs: Vec<f64> = (-m..=m).map(|k| k as f64 * dx).collect();
    let nf = freqs.len();
    let total = nf.pow(dims as u32);

    let phi = par_map_indexed(total, None, |flat| {
        let mut idx = flat;
        let mut coords = vec![0.0; dims];
        for c in (0..dims).rev() {
            coords[c] = freqs[idx % nf];
            idx /= nf;
        }
        // coordinate order: (x_1, y_1, x_2, y_2)
        let pt = FourierPoint { x: (0..j).map(|i| coords[2 * i]).collect(), y: (0..j).map(|i| coords[2 * i + 1]).collect() };
        if pt.x.iter().chain(&pt.y).any(|v| v.abs() > extent + 1e-12) {
            return Complex64::new(0.0, 0.0);
        }
        let mut v = phi_product(specs, sigma, &pt, prime_cutoff);
        if grid.cell_average {
            let h = 2.0 * grid.half_width / (grid.points - 1) as f64;
            for &c in &coords {
                let a = PI * c * h;
                if a != 0.0 {
                    v *= a.sin() / a;
                }
            }
        }
        v
    })?;

    let axis: Vec<f64> = (0..grid.points).map(|i| -grid.half_width + 2.0 * grid.half_width * i as f64 / (grid.points - 1) as f64).collect();
    let np = axis.len();
    // kernel[k][i] = e^{-2πi f_k u_i}
    let kernel: Vec<Complex64> = freqs.iter().flat_map(|&f| axis.iter().map(move |&u| Complex64::from_polar(1.0, -TAU * f * u))).collect();
    // Separable transform, one axis at a time (last axis first).
    let mut data = phi;
    let mut shape = vec![nf; dims];
    for axis_idx in (0..dims).rev() {
        let outer: usize = shape[..axis_idx].iter().product();
        let inner: usize = shape[axis_idx + 1..].iter().product();
        let len = shape[axis_idx];
        let mut next = vec![Complex64::new(0.0, 0.0); outer * np * inner];
        next.par_chunks_mut(np * inner).enumerate().for_each(|(o, out)| {
            for k in 0..len {
                let base = (o * len + k) * inner;
                let row = &kernel[k * np..(k + 1) * np];
                for (i, &kv) in row.iter().enumerate() {
                    for r in 0..inner {
                        out[i * inner + r] += data[base + r] * kv;
                    }
                }
            }
        });
        data = next;
        shape[axis_idx] = np;
    }
    let scale = dx.powi(dims as i32);
    let max_imag_residue = data.iter().map(|v| (v.im * scale).abs()).fold(0.0, f64::max);
    let values = data.iter().map(|v| v.re * scale).collect();
    Ok(DensityGrid { axis, dims, values, sigma, prime_cutoff, freq_extent: extent, freq_step: dx, max_imag_residue, boundary_modulus: bmod })
}

fn phi_product(specs: &[LFunctionSpec], sigma: f64, pt: &FourierPoint, cutoff: u64) -> Complex64 {
    let table = PrimeTable::shared(cutoff);
    let mut prod = Complex64::new(1.0, 0.0);
    for &p in table.up_to(cutoff as f64).expect("shared table covers the cutoff") {
        prod *= phi_p_unchecked(specs, sigma, p, pt);
        if prod.norm() < 1e-300 {
            return Complex64::new(0.0, 0.0);
        }
    }
    prod
}

/// Leading-order Gaussian approximation of the density and characteristic function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianModel {
    pub xi: Vec<f64>,
    pub log_g: f64,
}

pub fn gaussian_model(j: usize, xi: &[f64], g: f64) -> Result<GaussianModel> {
    if xi.len() != j || xi.iter().any(|&v| !(v > 0.0)) {
        return Err(Error::InvalidArgument("xi must have J positive entries".into()));
    }
    if !(g >= 4.0) {
        return Err(Error::InvalidArgument(format!("G must be at least 4, got {g}")));
    }
    Ok(GaussianModel { xi: xi.to_vec(), log_g: g.ln() })
}

impl GaussianModel {
    /// `(log G)^{-J} (π^J Π ξ_j)^{-1} exp(-Σ (u_j² + v_j²)/(ξ_j log G))`.
    pub fn density(&self, u: &[f64], v: &[f64]) -> f64 {
        let j = self.xi.len() as i32;
        let prod_xi: f64 = self.xi.iter().product();
        let q: f64 = self.xi.iter().enumerate().map(|(i, &x)| (u[i] * u[i] + v[i] * v[i]) / (x * self.log_g)).sum();
        (-q).exp() / (self.log_g.powi(j) * PI.powi(j) * prod_xi)
    }

    /// `exp(-π² log G Σ ξ_j (x_j² + y_j²))`.
    pub fn char_fn(&self, point: &FourierPoint) -> f64 {
        let q: f64 = self.xi.iter().enumerate().map(|(i, &x)| x * (point.x[i].powi(2) + point.y[i].powi(2))).sum();
        (-PI * PI * self.log_g * q).exp()
    }
}

/// `d_l = Π_j ξ_j^{(l_j+1)/2} Γ((l_j+1)/2)` if every `l_j` is even, else 0.
pub fn gaussian_moment(l: &[u32], xi: &[f64]) -> Result<f64> {
    if l.len() != xi.len() {
        return Err(Error::InvalidArgument("l and xi must have equal length".into()));
    }
    if l.iter().any(|&v| v % 2 == 1) {
        return Ok(0.0);
    }
    Ok(l.iter()
        .zip(xi)
        .map(|(&lj, &x)| {
            let a = (lj as f64 + 1.0) / 2.0;
            x.powf(a) * gamma(a)
        })
        .product())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum K0Method {
    Quadrature,
    MonteCarlo,
}

/// Work limits for [`compute_k0`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct K0Budget {
    /// Monte Carlo sample count.
    pub samples: usize,
    /// Fail when the error estimate exceeds this.
    pub target_abs_error: f64,
    pub seed: u64,
    pub workers: Option<usize>,
}

impl Default for K0Budget {
    fn default() -> Self {
        Self { samples: 1_000_000, target_abs_error: 1e-3, seed: 0, workers: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct K0Result {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub method: K0Method,
    pub j: usize,
    pub xi: Vec<f64>,
    /// Contribution of each region `R_n` to `K0`, with its error estimate.
    pub per_region: Vec<(f64, f64)>,
}

/// `√(ξ_1 + ξ_2) / (8 π^{3/2})`.
pub fn k0_two_member_closed_form(xi1: f64, xi2: f64) -> f64 {
    (xi1 + xi2).sqrt() / (8.0 * PI.powf(1.5))
}

fn check_xi(xi: &[f64]) -> Result<()> {
    if xi.is_empty() || xi.iter().any(|&v| !(v > 0.0 && v.is_finite())) {
        return Err(Error::InvalidArgument("xi must be a nonempty list of positive numbers".into()));
    }
    Ok(())
}

/// `∫_{-∞}^a v^k e^{-v²/ξ} dv` for `k = 0..=kmax`.
fn lower_moments(a: f64, xi: f64, kmax: usize) -> Vec<f64> {
    let mut out = vec![0.0; kmax + 1];
    let e = (-a * a / xi).exp();
    out[0] = (PI * xi).sqrt() / 2.0 * (1.0 + erf(a / xi.sqrt()));
    if kmax >= 1 {
        out[1] = -xi / 2.0 * e;
    }
    for k in 2..=kmax {
        out[k] = -xi / 2.0 * a.powi(k as i32 - 1) * e + xi * (k - 1) as f64 / 2.0 * out[k - 2];
    }
    out
}

/// `∫_{R_n} e^{-Σ u_j²/ξ_j} u_n u^k du` by one-dimensional Gauss–Hermite quadrature of order `order`.
fn region_integral(n: usize, k: &[u32], xi: &[f64], rule: &GaussHermite) -> f64 {
    let sx = xi[n].sqrt();
    let kmax = k.iter().copied().max().unwrap_or(0) as usize;
    // u = √ξ_n x turns e^{-u²/ξ_n} du into √ξ_n e^{-x²} dx.
    sx * rule.integrate(|x| {
        let u = sx * x;
        let mut val = u.powi(1 + k[n] as i32);
        for j in 0..xi.len() {
            if j != n {
                val *= lower_moments(u, xi[j], kmax)[k[j] as usize];
            }
        }
        val
    })
}

fn region_integrals(k: &[u32], xi: &[f64]) -> Result<Vec<(f64, f64)>> {
    let hi = GaussHermite::new(K0_HERMITE_ORDER).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let lo = GaussHermite::new(K0_HERMITE_ORDER - 20).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    Ok((0..xi.len())
        .map(|n| {
            let a = region_integral(n, k, xi, &hi);
            let b = region_integral(n, k, xi, &lo);
            (a, (a - b).abs() + 1e-15 * a.abs().max(1.0))
        })
        .collect())
}

pub fn compute_k0(xi: &[f64], method: K0Method, budget: &K0Budget) -> Result<K0Result> {
    check_xi(xi)?;
    let j = xi.len();
    let norm = 4.0 * PI.powf(j as f64 / 2.0 + 1.0) * xi.iter().map(|v| v.sqrt()).product::<f64>();
    let per_region: Vec<(f64, f64)> = match method {
        K0Method::Quadrature => region_integrals(&vec![0; j], xi)?.into_iter().map(|(v, e)| (v / norm, e / norm)).collect(),
        K0Method::MonteCarlo => k0_monte_carlo(xi, budget)?,
    };
    let value: f64 = per_region.iter().map(|r| r.0).sum();
    let abs_error_estimate = match method {
        K0Method::Quadrature => per_region.iter().map(|r| r.1).sum(),
        K0Method::MonteCarlo => per_region.last().map(|r| r.1).unwrap_or(0.0),
    };
    let (per_region, abs_error_estimate) = match method {
        K0Method::MonteCarlo => {
            // The final entry carries the error of the total; drop it from the region list.
            let mut regions = per_region;
            let total = regions.pop().expect("total entry");
            return finish_k0(regions, total.0, total.1, method, xi, budget);
        }
        K0Method::Quadrature => (per_region, abs_error_estimate),
    };
    finish_k0(per_region, value, abs_error_estimate, method, xi, budget)
}

fn finish_k0(per_region: Vec<(f64, f64)>, value: f64, err: f64, method: K0Method, xi: &[f64], budget: &K0Budget) -> Result<K0Result> {
    if err > budget.target_abs_error {
        return Err(Error::BudgetExhausted { reached: err, target: budget.target_abs_error });
    }
    Ok(K0Result { value, abs_error_estimate: err.max(f64::MIN_POSITIVE), method, j: xi.len(), xi: xi.to_vec(), per_region })
}

/// `K0 = E[max_j U_j] / (4π)` with independent `U_j ~ N(0, ξ_j/2)`.
///
/// Returns per-region contributions followed by the total, each with its standard error.
fn k0_monte_carlo(xi: &[f64], budget: &K0Budget) -> Result<Vec<(f64, f64)>> {
    const BATCH: usize = 4096;
    let j = xi.len();
    let n = budget.samples.max(2);
    let batches = n.div_ceil(BATCH);
    let dists: Vec<Normal<f64>> =
        xi.iter().map(|&x| Normal::new(0.0, (x / 2.0).sqrt()).map_err(|e| Error::InvalidArgument(e.to_string()))).collect::<Result<_>>()?;
    // Per batch: sums and sums of squares of the region contributions and of the max.
    let partial = par_map_indexed(batches, budget.workers, |b| {
        let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
        rng.set_stream(b as u64);
        let mut s = vec![0.0; 2 * (j + 1)];
        let count = BATCH.min(n - b * BATCH);
        let mut u = vec![0.0; j];
        for _ in 0..count {
            for (i, d) in dists.iter().enumerate() {
                u[i] = d.sample(&mut rng);
            }
            let mut arg = 0;
            for i in 1..j {
                if u[i] > u[arg] {
                    arg = i;
                }
            }
            let m = u[arg];
            s[arg] += m;
            s[j + 1 + arg] += m * m;
            s[j] += m;
            s[2 * j + 1] += m * m;
        }
        s
    })?;
    let scale = 1.0 / (4.0 * PI);
    let nf = n as f64;
    Ok((0..=j)
        .map(|i| {
            let sum = pairwise_sum(&partial.iter().map(|s| s[i]).collect::<Vec<_>>());
            let sq = pairwise_sum(&partial.iter().map(|s| s[j + 1 + i]).collect::<Vec<_>>());
            let mean = sum / nf;
            let var = (sq / nf - mean * mean).max(0.0) * nf / (nf - 1.0);
            (mean * scale, (var / nf).sqrt() * scale)
        })
        .collect())
}

/// `D1(k, l) = d_l Σ_n ∫_{R_n} e^{-Σ u_j²/ξ_j} u_n u^k du`.
pub fn d1_constant(k: &[u32], l: &[u32], xi: &[f64]) -> Result<f64> {
    check_xi(xi)?;
    if k.len() != xi.len() || l.len() != xi.len() {
        return Err(Error::InvalidArgument("k, l and xi must have equal length".into()));
    }
    let dl = gaussian_moment(l, xi)?;
    if dl == 0.0 {
        return Ok(0.0);
    }
    let total: f64 = region_integrals(k, xi)?.iter().map(|r| r.0).sum();
    Ok(dl * total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_at_origin_is_one() {
        let z = [LFunctionSpec::zeta()];
        assert_eq!(phi_p(&z, 0.7, 2, &FourierPoint::origin(1)).unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(char_fn(&z, 0.7, &FourierPoint::origin(1), 100).unwrap(), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn phi_second_order_expansion() {
        // For small x, φ ≈ 1 - π² x² Σ_k 4^{-k}/k² at p = 2, σ = 1.
        let z = [LFunctionSpec::zeta()];
        let x = 1e-3;
        let pt = FourierPoint::new(vec![x], vec![0.0]).unwrap();
        let v = phi_p(&z, 1.0, 2, &pt).unwrap();
        let s: f64 = (1..60).map(|k| 4f64.powi(-k) / (k * k) as f64).sum();
        let expected = 1.0 - PI * PI * x * x * s;
        assert!((v.re - expected).abs() < 1e-9, "{} vs {}", v.re, expected);
        assert!(v.im.abs() < 1e-6);
    }

    #[test]
    fn lower_moment_recursion_matches_limits() {
        let m = lower_moments(50.0, 2.0, 4);
        assert!((m[0] - (2.0 * PI).sqrt()).abs() < 1e-12);
        assert!(m[1].abs() < 1e-12);
        assert!((m[2] - gaussian_moment(&[2], &[2.0]).unwrap()).abs() < 1e-10);
        assert!((m[4] - gaussian_moment(&[4], &[2.0]).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn k0_closed_form_two_members() {
        let r = compute_k0(&[1.0, 1.0], K0Method::Quadrature, &K0Budget::default()).unwrap();
        assert!((r.value - 0.031_746_8).abs() < 1e-7);
        assert!((r.value - k0_two_member_closed_form(1.0, 1.0)).abs() < 1e-12);
    }

    #[test]
    fn k0_single_member_vanishes() {
        let r = compute_k0(&[1.0], K0Method::Quadrature, &K0Budget::default()).unwrap();
        assert!(r.value.abs() < 1e-15);
    }

    #[test]
    fn gaussian_model_origin() {
        let g = gaussian_model(1, &[1.0], 1000.0).unwrap();
        let v = g.density(&[0.0], &[0.0]);
        assert!((v - 1.0 / (PI * 1000f64.ln())).abs() < 1e-15);
    }
}
