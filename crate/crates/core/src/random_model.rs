//! Random Euler products and Monte Carlo estimators.
//!
//! Phases `X(p)` are read from a ChaCha8 stream: the stream number is the
//! sample index and the word position is twice the index of `p` among the
//! primes, so any phase can be regenerated without storing tables.

use std::f64::consts::TAU;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::lfunc::{LFunctionSpec, LinearCombination};
use crate::numerics::special::exp_integral_e1;
use crate::primes::PrimeTable;
use crate::stats::{par_map_indexed, Proportion, SampleStats};
use crate::{Error, Result};

/// Explicit prime range of the tail covariance; beyond it the prime number
/// theorem `Σ_{p>x} p^{-s} ≈ E1((s-1) log x)` is used.
pub const TAIL_EXPLICIT_LIMIT: u64 = 1_000_000;
/// Share of rejected samples that aborts an estimate.
pub const MAX_REJECTED_FRACTION: f64 = 1e-3;
const TAIL_STREAM_KEY: u64 = 0x7a11_5eed_0bad_cafe;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PhaseMode {
    /// Uniform on the unit circle.
    Uniform,
    /// Every phase equal to one (diagnostic).
    Ones,
    /// Uniform random signs `±1` (diagnostic).
    Signs,
}

/// A seeded assignment `p ↦ X(p)` for one sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseAssignment {
    pub seed: u64,
    pub stream: u64,
    pub mode: PhaseMode,
    /// Negate every angle (antithetic partner).
    pub negate: bool,
}

fn unit_interval(x: u64) -> f64 {
    (x >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

impl PhaseAssignment {
    pub fn new(seed: u64) -> Self {
        Self { seed, stream: 0, mode: PhaseMode::Uniform, negate: false }
    }

    pub fn ones() -> Self {
        Self { seed: 0, stream: 0, mode: PhaseMode::Ones, negate: false }
    }

    pub fn signs(seed: u64) -> Self {
        Self { seed, stream: 0, mode: PhaseMode::Signs, negate: false }
    }

    /// Phases of sample `index` of a Monte Carlo run.
    pub fn for_sample(seed: u64, index: u64, antithetic: bool) -> Self {
        let (stream, negate) = if antithetic { (index / 2, index % 2 == 1) } else { (index, false) };
        Self { seed, stream, mode: PhaseMode::Uniform, negate }
    }

    fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }

    fn phase_of_word(&self, w: u64) -> Complex64 {
        match self.mode {
            PhaseMode::Ones => Complex64::new(1.0, 0.0),
            PhaseMode::Signs => Complex64::new(if w >> 63 == 0 { 1.0 } else { -1.0 }, 0.0),
            PhaseMode::Uniform => {
                let theta = TAU * unit_interval(w);
                Complex64::from_polar(1.0, if self.negate { -theta } else { theta })
            }
        }
    }

    /// Angle in `[0, 2π)` of the `i`-th prime (zero-based), before negation.
    pub fn angle_of_index(&self, i: usize) -> f64 {
        let mut rng = self.rng();
        rng.set_word_pos(2 * i as u128);
        TAU * unit_interval(rng.next_u64())
    }

    /// `X(p_i)` for the first `count` primes.
    pub fn phases(&self, count: usize) -> Vec<Complex64> {
        let mut rng = self.rng();
        (0..count).map(|_| self.phase_of_word(rng.next_u64())).collect()
    }

    /// `X(p)`; the table must contain `p`.
    pub fn phase(&self, p: u64, table: &PrimeTable) -> Result<Complex64> {
        let i = table.primes().binary_search(&p).map_err(|_| Error::InvalidArgument(format!("{p} is not a prime of the table")))?;
        let mut rng = self.rng();
        rng.set_word_pos(2 * i as u128);
        Ok(self.phase_of_word(rng.next_u64()))
    }

    /// Multiplicative extension `X(n) = Π X(p)^{a_p}`.
    pub fn phase_of(&self, n: u64, table: &PrimeTable) -> Result<Complex64> {
        let mut out = Complex64::new(1.0, 0.0);
        for (p, e) in crate::primes::factorize(n) {
            out *= self.phase(p, table)?.powu(e);
        }
        Ok(out)
    }
}

/// How the infinite random Euler product is cut off.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Truncation {
    /// `Σ_{p^n ≤ Y}`: the truncated random Dirichlet polynomial.
    PrimePowers,
    /// Complete local factors `-log(1 - α X p^{-σ})` for `p ≤ Y`.
    FullFactors,
    /// Complete local factors for `p ≤ Y` plus a circular complex Gaussian
    /// with the exact covariance of `Σ_{p > Y} α(p) X(p) p^{-σ}`.
    GaussianTail,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MCConfig {
    pub n_samples: usize,
    /// Truncation point `Y`.
    pub y: f64,
    pub seed: u64,
    pub antithetic: bool,
    pub truncation: Truncation,
    /// Worker threads (`None`: the global pool). Results do not depend on it.
    pub workers: Option<usize>,
}

impl MCConfig {
    pub fn new(n_samples: usize, y: f64, seed: u64) -> Self {
        Self { n_samples, y, seed, antithetic: false, truncation: Truncation::PrimePowers, workers: None }
    }

    /// `min(10^6, exp(4/(2σ - 1)))`.
    pub fn default_y(sigma: f64) -> f64 {
        (4.0 / (2.0 * sigma - 1.0)).exp().min(1e6)
    }

    pub fn with_truncation(mut self, truncation: Truncation) -> Self {
        self.truncation = truncation;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_samples == 0 {
            return Err(Error::InvalidArgument("n_samples must be at least 1".into()));
        }
        if !(self.y >= 2.0) {
            return Err(Error::InvalidArgument(format!("Y must be at least 2, got {}", self.y)));
        }
        Ok(())
    }
}

/// `-log(1 - w)` truncated after `kmax` terms (or once terms drop below 1e-17).
fn log_factor(w: Complex64, kmax: u32) -> Complex64 {
    let mut sum = w;
    let mut pw = w;
    let small = w.norm_sqr() < 1e-34;
    if small {
        return sum;
    }
    for k in 2..=kmax {
        pw *= w;
        let term = pw / k as f64;
        sum += term;
        if term.norm_sqr() < 1e-34 {
            break;
        }
    }
    sum
}

fn max_power(p: u64, y: f64) -> u32 {
    let mut k = 0;
    let mut pk = 1.0;
    while pk * p as f64 <= y {
        pk *= p as f64;
        k += 1;
    }
    k
}

/// `Σ_{p^n ≤ Y} β(p^n) X(p)^n p^{-nσ}`.
pub fn random_log_l(spec: &LFunctionSpec, sigma: f64, phases: &PhaseAssignment, y: f64, table: &PrimeTable) -> Result<Complex64> {
    if y < 2.0 {
        return Err(Error::InvalidArgument(format!("Y must be at least 2, got {y}")));
    }
    let primes = table.up_to(y)?;
    let xs = phases.phases(primes.len());
    let mut sum = Complex64::new(0.0, 0.0);
    for (&p, &x) in primes.iter().zip(&xs) {
        let w = spec.alpha(p) * x * (p as f64).powf(-sigma);
        sum += log_factor(w, max_power(p, y));
    }
    Ok(sum)
}

/// `Σ_j b_j exp(random_log_l(L_j))`; `None` when a member overflows.
pub fn random_f(comb: &LinearCombination, sigma: f64, phases: &PhaseAssignment, y: f64, table: &PrimeTable) -> Result<Option<Complex64>> {
    let mut out = Complex64::new(0.0, 0.0);
    for (m, &b) in comb.members().iter().zip(comb.weights()) {
        let l = random_log_l(m, sigma, phases, y, table)?;
        if l.re > 700.0 {
            return Ok(None);
        }
        out += l.exp() * b;
    }
    Ok(Some(out))
}

/// Joint sampler of `log L_j(σ_a, X)` for all members `j` and abscissas `σ_a`.
pub struct RandomModel {
    members: usize,
    sigmas: Vec<f64>,
    weights: Vec<f64>,
    primes: Vec<u64>,
    /// `α_j(p_i)` at `i * members + j`.
    alpha: Vec<Complex64>,
    /// `p_i^{-σ_a}` at `i * sigmas + a`.
    amp: Vec<f64>,
    kmax: Vec<u32>,
    tail: Option<DMatrix<Complex64>>,
    cfg: MCConfig,
}

impl RandomModel {
    pub fn new(comb: &LinearCombination, sigmas: &[f64], cfg: &MCConfig) -> Result<Self> {
        cfg.validate()?;
        if sigmas.is_empty() || sigmas.iter().any(|&s| !(s > 0.5)) {
            return Err(Error::InvalidArgument("every sigma must exceed 1/2".into()));
        }
        let table = PrimeTable::shared((cfg.y as u64).max(TAIL_EXPLICIT_LIMIT));
        let primes = table.up_to(cfg.y)?.to_vec();
        let members = comb.len();
        let mut alpha = Vec::with_capacity(primes.len() * members);
        let mut amp = Vec::with_capacity(primes.len() * sigmas.len());
        let mut kmax = Vec::with_capacity(primes.len());
        for &p in &primes {
            alpha.extend(comb.members().iter().map(|m| m.alpha(p)));
            amp.extend(sigmas.iter().map(|&s| (p as f64).powf(-s)));
            kmax.push(match cfg.truncation {
                Truncation::PrimePowers => max_power(p, cfg.y),
                _ => 200,
            });
        }
        let tail = match cfg.truncation {
            Truncation::GaussianTail => Some(tail_factor(comb, sigmas, cfg.y, &table)?),
            _ => None,
        };
        Ok(Self { members, sigmas: sigmas.to_vec(), weights: comb.weights().to_vec(), primes, alpha, amp, kmax, tail, cfg: *cfg })
    }

    pub fn sigmas(&self) -> &[f64] {
        &self.sigmas
    }

    pub fn config(&self) -> &MCConfig {
        &self.cfg
    }

    /// `log L_j(σ_a, X)` of sample `index`, laid out as `j * sigmas + a`.
    pub fn draw(&self, index: u64) -> Vec<Complex64> {
        let ns = self.sigmas.len();
        let phases = PhaseAssignment::for_sample(self.cfg.seed, index, self.cfg.antithetic);
        let xs = phases.phases(self.primes.len());
        let mut out = vec![Complex64::new(0.0, 0.0); self.members * ns];
        for (i, &x) in xs.iter().enumerate() {
            let amps = &self.amp[i * ns..(i + 1) * ns];
            for j in 0..self.members {
                let z = self.alpha[i * self.members + j] * x;
                for (a, &r) in amps.iter().enumerate() {
                    out[j * ns + a] += log_factor(z * r, self.kmax[i]);
                }
            }
        }
        if let Some(factor) = &self.tail {
            let (stream, negate) = if self.cfg.antithetic { (index / 2, index % 2 == 1) } else { (index, false) };
            let mut rng = ChaCha8Rng::seed_from_u64(self.cfg.seed ^ TAIL_STREAM_KEY);
            rng.set_stream(stream);
            let n = out.len();
            let sign = if negate { -1.0 } else { 1.0 };
            let w: Vec<Complex64> = (0..n)
                .map(|_| {
                    let re: f64 = StandardNormal.sample(&mut rng);
                    let im: f64 = StandardNormal.sample(&mut rng);
                    Complex64::new(re, im) * (sign * std::f64::consts::FRAC_1_SQRT_2)
                })
                .collect();
            for (r, o) in out.iter_mut().enumerate() {
                for (c, wc) in w.iter().enumerate() {
                    *o += factor[(r, c)] * wc;
                }
            }
        }
        out
    }

    /// `F(σ_a, X) = Σ_j b_j exp(log L_j)`; `None` on overflow.
    pub fn combine(&self, logs: &[Complex64], a: usize) -> Option<Complex64> {
        let ns = self.sigmas.len();
        let mut f = Complex64::new(0.0, 0.0);
        for (j, &b) in self.weights.iter().enumerate() {
            let l = logs[j * ns + a];
            if l.re > 700.0 {
                return None;
            }
            f += l.exp() * b;
        }
        Some(f)
    }

    /// `f(draw(i))` for every sample, in index order.
    pub fn map<T: Send>(&self, f: impl Fn(&[Complex64]) -> T + Sync) -> Result<Vec<T>> {
        par_map_indexed(self.cfg.n_samples, self.cfg.workers, |i| f(&self.draw(i as u64)))
    }
}

/// `Σ_{p > y} c(p) p^{-s}` for the periodic product coefficient `c = α_j conj α_k`.
fn tail_prime_sum(c: &dyn Fn(u64) -> Complex64, mean: Complex64, s: f64, y: f64, table: &PrimeTable) -> Result<Complex64> {
    let lim = TAIL_EXPLICIT_LIMIT as f64;
    let mut sum = Complex64::new(0.0, 0.0);
    let start = if y < lim {
        for &p in table.between(y, lim)? {
            sum += c(p) * (-(s) * (p as f64).ln()).exp();
        }
        lim
    } else {
        y
    };
    sum += mean * exp_integral_e1((s - 1.0) * start.ln());
    Ok(sum)
}

/// Factor `A` with `A A^H` equal to the covariance of the Gaussian tail.
fn tail_factor(comb: &LinearCombination, sigmas: &[f64], y: f64, table: &PrimeTable) -> Result<DMatrix<Complex64>> {
    let ns = sigmas.len();
    let members = comb.members();
    let n = members.len() * ns;
    let q = comb.modulus();
    let units: Vec<u64> = (1..=q).filter(|&a| crate::primes::gcd(a, q) == 1).collect();
    let mut cov = DMatrix::<Complex64>::zeros(n, n);
    for j in 0..members.len() {
        for k in j..members.len() {
            let c = |p: u64| members[j].alpha(p) * members[k].alpha(p).conj();
            // average of c over reduced residues: 1 for a principal product, 0 otherwise
            let mean = units.iter().map(|&a| c(a)).sum::<Complex64>() / units.len() as f64;
            for a in 0..ns {
                for b in 0..ns {
                    let s = sigmas[a] + sigmas[b];
                    let v = tail_prime_sum(&c, mean, s, y, table)?;
                    cov[(j * ns + a, k * ns + b)] = v;
                    cov[(k * ns + b, j * ns + a)] = v.conj();
                }
            }
        }
    }
    let eig = nalgebra::SymmetricEigen::new(cov);
    let mut factor = eig.eigenvectors;
    for (c, &lam) in eig.eigenvalues.iter().enumerate() {
        let r = lam.max(0.0).sqrt();
        for row in 0..n {
            factor[(row, c)] *= r;
        }
    }
    Ok(factor)
}

/// A Monte Carlo estimate with its rejection record.
#[derive(Debug, Clone, Serialize)]
pub struct McEstimate {
    pub stats: SampleStats,
    pub rejected: usize,
    pub n_samples: usize,
    pub y: f64,
    pub truncation: Truncation,
    pub seed: u64,
}

fn finish(values: Vec<Option<f64>>, cfg: &MCConfig) -> Result<McEstimate> {
    let total = values.len();
    let kept: Vec<f64> = values.into_iter().flatten().collect();
    let rejected = total - kept.len();
    if rejected as f64 > MAX_REJECTED_FRACTION * total as f64 {
        return Err(Error::TooManyRejections { rejected, total });
    }
    Ok(McEstimate { stats: SampleStats::from_samples(&kept), rejected, n_samples: total, y: cfg.y, truncation: cfg.truncation, seed: cfg.seed })
}

fn log_abs(f: Option<Complex64>) -> Option<f64> {
    f.filter(|v| v.norm() >= 1e-300).map(|v| v.norm().ln())
}

/// Monte Carlo estimate of `E log|F(σ, X)|`.
pub fn mc_expect_log_f(comb: &LinearCombination, sigma: f64, cfg: &MCConfig) -> Result<McEstimate> {
    let model = RandomModel::new(comb, &[sigma], cfg)?;
    let values = model.map(|logs| log_abs(model.combine(logs, 0)))?;
    finish(values, cfg)
}

/// Per-sample `log|F(σ, X)| - log|F(σ', X)|` with shared phases.
pub fn coupled_difference(comb: &LinearCombination, sigma: f64, sigma_other: f64, cfg: &MCConfig) -> Result<McEstimate> {
    let model = RandomModel::new(comb, &[sigma, sigma_other], cfg)?;
    let values = model.map(|logs| Some(log_abs(model.combine(logs, 0))? - log_abs(model.combine(logs, 1))?))?;
    finish(values, cfg)
}

/// Increments `M(σ) - M(σ_i)` at `σ = 1/2 + 1/G`, `σ_i = σ + (-1)^i/(G log G)`.
#[derive(Debug, Clone, Serialize)]
pub struct CoupledIncrement {
    pub g: f64,
    pub sigma: f64,
    pub sigma_i: [f64; 2],
    pub estimates: [McEstimate; 2],
}

pub fn increment_abscissas(g: f64) -> (f64, [f64; 2]) {
    let sigma = 0.5 + 1.0 / g;
    let d = 1.0 / (g * g.ln());
    (sigma, [sigma - d, sigma + d])
}

pub fn coupled_increment(comb: &LinearCombination, g: f64, cfg: &MCConfig) -> Result<CoupledIncrement> {
    if !(g >= 4.0) {
        return Err(Error::InvalidArgument(format!("G must be at least 4, got {g}")));
    }
    let (sigma, sigma_i) = increment_abscissas(g);
    let model = RandomModel::new(comb, &[sigma, sigma_i[0], sigma_i[1]], cfg)?;
    let pairs = model.map(|logs| {
        let base = log_abs(model.combine(logs, 0));
        let d = |a| Some(base? - log_abs(model.combine(logs, a))?);
        (d(1), d(2))
    })?;
    let (first, second): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
    Ok(CoupledIncrement { g, sigma, sigma_i, estimates: [finish(first, cfg)?, finish(second, cfg)?] })
}

/// `E |log|F(σ, X)||^{2k}`.
pub fn moment_log_f(comb: &LinearCombination, sigma: f64, k: u32, cfg: &MCConfig) -> Result<McEstimate> {
    if k > 5 {
        return Err(Error::InvalidArgument(format!("moments beyond k = 5 are not supported, got {k}")));
    }
    let model = RandomModel::new(comb, &[sigma], cfg)?;
    let values = model.map(|logs| log_abs(model.combine(logs, 0)).map(|l| l.abs().powi(2 * k as i32)))?;
    finish(values, cfg)
}

/// `P(|log L(σ, X)| > τ)` with a 95% Wilson interval.
pub fn tail_prob(spec: &LFunctionSpec, sigma: f64, tau: f64, cfg: &MCConfig) -> Result<Proportion> {
    Ok(tail_probs(spec, sigma, &[tau], cfg)?.remove(0))
}

/// [`tail_prob`] for several thresholds from one set of samples.
pub fn tail_probs(spec: &LFunctionSpec, sigma: f64, taus: &[f64], cfg: &MCConfig) -> Result<Vec<Proportion>> {
    if taus.iter().any(|&t| t < 0.0) {
        return Err(Error::InvalidArgument("tau must be nonnegative".into()));
    }
    let comb = LinearCombination::single(spec.clone());
    let model = RandomModel::new(&comb, &[sigma], cfg)?;
    let norms = model.map(|logs| logs[0].norm())?;
    Ok(taus
        .iter()
        .map(|&tau| {
            let hits = if tau == 0.0 { norms.len() } else { norms.iter().filter(|&&v| v > tau).count() };
            Proportion::wilson(hits, norms.len(), 1.96)
        })
        .collect())
}

/// `P(L(σ, X) ∈ [-M, M]^{2J} and R < |F(σ, X)| < R + ε)` with a 95% Wilson interval.
pub fn concentration_prob(comb: &LinearCombination, sigma: f64, m: f64, r: f64, eps: f64, cfg: &MCConfig) -> Result<Proportion> {
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument("epsilon must be positive".into()));
    }
    let model = RandomModel::new(comb, &[sigma], cfg)?;
    let hits = model.map(|logs| {
        let in_box = logs.iter().all(|l| l.re.abs() <= m && l.im.abs() <= m);
        in_box && model.combine(logs, 0).map(|f| f.norm() > r && f.norm() < r + eps).unwrap_or(false)
    })?;
    let k = hits.iter().filter(|&&h| h).count();
    Ok(Proportion::wilson(k, hits.len(), 1.96))
}

/// Samples of the vector `(log|L_1|, arg L_1, …, log|L_J|, arg L_J)` at `σ`.
pub fn sample_vectors(comb: &LinearCombination, sigma: f64, cfg: &MCConfig) -> Result<Vec<Vec<f64>>> {
    let model = RandomModel::new(comb, &[sigma], cfg)?;
    model.map(|logs| logs.iter().flat_map(|l| [l.re, l.im]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phases_are_unimodular_and_reproducible() {
        let a = PhaseAssignment::new(7);
        let xs = a.phases(100);
        assert!(xs.iter().all(|x| (x.norm() - 1.0).abs() < 1e-15));
        assert_eq!(xs, PhaseAssignment::new(7).phases(100));
        assert_ne!(xs, PhaseAssignment::new(8).phases(100));
        let table = PrimeTable::new(1000);
        assert_eq!(a.phase(541, &table).unwrap(), xs[99]);
        assert!((a.angle_of_index(5) - xs[5].arg().rem_euclid(TAU)).abs() < 1e-12);
        let x6 = a.phase_of(12, &table).unwrap();
        assert!((x6 - xs[0] * xs[0] * xs[1]).norm() < 1e-15);
    }

    #[test]
    fn antithetic_partner_is_conjugate() {
        let a = PhaseAssignment::for_sample(3, 10, true).phases(20);
        let b = PhaseAssignment::for_sample(3, 11, true).phases(20);
        for (x, y) in a.iter().zip(&b) {
            assert!((x.conj() - y).norm() < 1e-15);
        }
    }

    #[test]
    fn ones_reproduce_dirichlet_poly() {
        let table = PrimeTable::new(1000);
        let chi = LFunctionSpec::conrey(5, 2).unwrap();
        let a = random_log_l(&chi, 0.7, &PhaseAssignment::ones(), 500.0, &table).unwrap();
        let b = chi.dirichlet_poly(Complex64::new(0.7, 0.0), 500.0, &table).unwrap();
        assert!((a - b).norm() < 1e-12);
    }

    #[test]
    fn max_power_counts() {
        assert_eq!(max_power(2, 8.0), 3);
        assert_eq!(max_power(2, 7.9), 2);
        assert_eq!(max_power(7, 6.0), 0);
    }

    #[test]
    fn identical_abscissas_give_zero_difference() {
        let f = LinearCombination::conjugate_pair(5, 2).unwrap();
        let cfg = MCConfig::new(500, 1000.0, 1);
        let est = coupled_difference(&f, 0.6, 0.6, &cfg).unwrap();
        assert_eq!(est.stats.mean, 0.0);
        assert_eq!(est.stats.std_error, 0.0);
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let f = LinearCombination::conjugate_pair(5, 2).unwrap();
        let mut cfg = MCConfig::new(700, 500.0, 9).with_truncation(Truncation::GaussianTail);
        cfg.workers = Some(1);
        let a = mc_expect_log_f(&f, 0.6, &cfg).unwrap();
        cfg.workers = Some(3);
        let b = mc_expect_log_f(&f, 0.6, &cfg).unwrap();
        assert_eq!(a.stats, b.stats);
    }
}
