//! L-function specifications, evaluation and Selberg prime sums.
//!
//! The family is degree one: the Riemann zeta function and Dirichlet
//! L-functions. A [`LinearCombination`] `F = Σ b_j L_j` is evaluated as one
//! periodic Dirichlet series whose period is the lcm of the member moduli.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::character::DirichletCharacter;
use crate::hurwitz::PeriodicSeries;
use crate::primes::{for_each_prime_power, gcd, PrimeTable};
use crate::{Error, Result};

/// Abscissa from which `log L` is the principal logarithm: for `σ ≥ 1.1`,
/// `|log L(s)| ≤ log ζ(1.1) < π`.
pub const ARG_ANCHOR: f64 = 1.1;
/// `|L|` below this on the horizontal ray is treated as a zero on the path.
pub const ZERO_FLOOR: f64 = 1e-10;
/// Search range for the leading Dirichlet coefficient of a combination.
pub const N0_SEARCH_LIMIT: u64 = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum LKind {
    Zeta,
    Dirichlet(DirichletCharacter),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LFunctionSpec {
    kind: LKind,
    degree: u32,
    theta: f64,
    xi: f64,
    label: String,
}

impl LFunctionSpec {
    pub fn zeta() -> Self {
        Self { kind: LKind::Zeta, degree: 1, theta: 0.0, xi: 1.0, label: "zeta".into() }
    }

    pub fn dirichlet(chi: DirichletCharacter) -> Self {
        let label = chi.label();
        Self { kind: LKind::Dirichlet(chi), degree: 1, theta: 0.0, xi: 1.0, label }
    }

    /// Dirichlet L-function of the Conrey character `χ_q(m, ·)`.
    pub fn conrey(q: u64, m: u64) -> Result<Self> {
        Ok(Self::dirichlet(DirichletCharacter::conrey(q, m)?))
    }

    /// Overrides the orthonormality constant (synthetic experiments only).
    pub fn with_xi(mut self, xi: f64) -> Result<Self> {
        if !(xi > 0.0 && xi.is_finite()) {
            return Err(Error::InvalidArgument(format!("xi must be positive, got {xi}")));
        }
        self.xi = xi;
        Ok(self)
    }

    pub fn kind(&self) -> &LKind {
        &self.kind
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Period of the Dirichlet coefficients.
    pub fn modulus(&self) -> u64 {
        match &self.kind {
            LKind::Zeta => 1,
            LKind::Dirichlet(chi) => chi.modulus(),
        }
    }

    /// Whether `L` has a pole at `s = 1`.
    pub fn has_pole(&self) -> bool {
        match &self.kind {
            LKind::Zeta => true,
            LKind::Dirichlet(chi) => chi.is_principal(),
        }
    }

    /// The complex-conjugate function `s ↦ conj(L(conj s))`.
    pub fn conj(&self) -> Self {
        match &self.kind {
            LKind::Zeta => self.clone(),
            LKind::Dirichlet(chi) => {
                let mut out = Self::dirichlet(chi.conj());
                out.xi = self.xi;
                out
            }
        }
    }

    /// Local root `α(p)` of the Euler factor `(1 - α(p) p^{-s})^{-1}`.
    pub fn alpha(&self, p: u64) -> Complex64 {
        match &self.kind {
            LKind::Zeta => Complex64::new(1.0, 0.0),
            LKind::Dirichlet(chi) => chi.value(p),
        }
    }

    /// `β(p^k) = α(p)^k / k`.
    pub fn euler_log_coeff(&self, p: u64, k: u32) -> Complex64 {
        let ak = match &self.kind {
            LKind::Zeta => Complex64::new(1.0, 0.0),
            LKind::Dirichlet(chi) => chi.power(p, k as u64),
        };
        ak / k as f64
    }

    /// Dirichlet coefficient `a(n)` (completely multiplicative in degree one).
    pub fn dirichlet_coeff(&self, n: u64) -> Complex64 {
        match &self.kind {
            LKind::Zeta => Complex64::new(1.0, 0.0),
            LKind::Dirichlet(chi) => chi.value(n),
        }
    }

    pub fn series(&self) -> PeriodicSeries {
        let q = self.modulus();
        PeriodicSeries::new(q, (0..q).map(|a| self.dirichlet_coeff(if a == 0 { q } else { a })).collect())
    }

    pub fn eval_l(&self, s: Complex64, precision: f64) -> Result<Complex64> {
        self.series().eval(s, precision)
    }

    /// `log L(s)` with the argument continued along the horizontal ray from `+∞`.
    pub fn eval_log_l(&self, s: Complex64, precision: f64) -> Result<Complex64> {
        log_along_ray(&self.series(), s, precision)
    }

    /// `Σ_{p^n ≤ Y} β(p^n) p^{-ns}`.
    pub fn dirichlet_poly(&self, s: Complex64, y: f64, table: &PrimeTable) -> Result<Complex64> {
        if y < 2.0 {
            return Err(Error::InvalidArgument(format!("Y must be at least 2, got {y}")));
        }
        let mut sum = Complex64::new(0.0, 0.0);
        for_each_prime_power(table, y, |p, k, pk| {
            sum += self.euler_log_coeff(p, k) * (-s * pk.ln()).exp();
        })?;
        Ok(sum)
    }
}

/// `log` of an Euler product given by `series`, continuing the argument from
/// the principal branch at `σ = 1.1` leftwards along `Im s = const`.
pub fn log_along_ray(series: &PeriodicSeries, s: Complex64, precision: f64) -> Result<Complex64> {
    let t = s.im;
    let at = |sigma: f64| series.eval(Complex64::new(sigma, t), precision);
    if s.re >= ARG_ANCHOR {
        return Ok(at(s.re)?.ln());
    }
    let mut sigma = ARG_ANCHOR;
    let mut val = at(sigma)?;
    let mut arg = val.arg();
    let mut h = 0.1;
    while sigma > s.re {
        let next = (sigma - h).max(s.re);
        let v = at(next)?;
        let here = Complex64::new(next, t);
        if v.norm() < ZERO_FLOOR {
            return Err(Error::ZeroOnPath(here));
        }
        let ratio = v / val;
        let change = (ratio - 1.0).norm();
        if change > 0.5 {
            h *= 0.5;
            if h < 1e-9 {
                return Err(Error::ZeroOnPath(here));
            }
            continue;
        }
        arg += ratio.arg();
        val = v;
        sigma = next;
        if change < 0.1 {
            h = (h * 1.5).min(0.2);
        }
    }
    Ok(Complex64::new(val.norm().ln(), arg))
}

/// `Σ_{p ≤ x} β_j(p) conj(β_k(p)) / p`.
pub fn selberg_sum(a: &LFunctionSpec, b: &LFunctionSpec, x: f64, table: &PrimeTable) -> Result<Complex64> {
    if x < 2.0 {
        return Err(Error::InvalidArgument(format!("x must be at least 2, got {x}")));
    }
    let mut sum = Complex64::new(0.0, 0.0);
    for &p in table.up_to(x)? {
        sum += a.alpha(p) * b.alpha(p).conj() / p as f64;
    }
    Ok(sum)
}

/// `Σ_{p ≤ cutoff} β_j(p) conj(β_k(p)) p^{-2σ}`.
pub fn prime_sum_2sigma(a: &LFunctionSpec, b: &LFunctionSpec, sigma: f64, cutoff: f64, table: &PrimeTable) -> Result<Complex64> {
    if !(sigma > 0.5 && sigma <= 1.0) {
        return Err(Error::InvalidArgument(format!("sigma must lie in (1/2, 1], got {sigma}")));
    }
    let mut sum = Complex64::new(0.0, 0.0);
    for &p in table.up_to(cutoff)? {
        sum += a.alpha(p) * b.alpha(p).conj() * (p as f64).powf(-2.0 * sigma);
    }
    Ok(sum)
}

/// Least-squares fit of `Re prime_sum_2sigma` against `log(1/(σ - 1/2))`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SecondMomentFit {
    pub slope: f64,
    pub constant: f64,
    /// `δ_jk ξ_j`, the slope the model predicts.
    pub model_slope: f64,
    pub max_residual: f64,
}

impl SecondMomentFit {
    /// Model value `δ_jk ξ_j log(1/(σ - 1/2)) + c` with the fitted constant.
    pub fn model(&self, sigma: f64) -> f64 {
        self.model_slope * (1.0 / (sigma - 0.5)).ln() + self.constant
    }
}

pub fn fit_second_moment(a: &LFunctionSpec, b: &LFunctionSpec, sigmas: &[f64], cutoff: f64, table: &PrimeTable) -> Result<SecondMomentFit> {
    if sigmas.len() < 2 {
        return Err(Error::InvalidArgument("need at least two abscissas".into()));
    }
    let xs: Vec<f64> = sigmas.iter().map(|&s| (1.0 / (s - 0.5)).ln()).collect();
    let ys = sigmas.iter().map(|&s| Ok(prime_sum_2sigma(a, b, s, cutoff, table)?.re)).collect::<Result<Vec<f64>>>()?;
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    let model_slope = if a == b { a.xi() } else { 0.0 };
    let constant = my - model_slope * mx;
    let max_residual = xs.iter().zip(&ys).map(|(x, y)| (y - model_slope * x - constant).abs()).fold(0.0, f64::max);
    Ok(SecondMomentFit { slope, constant, model_slope, max_residual })
}

/// `F = Σ b_j L_j` with `Σ b_j² = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearCombination {
    members: Vec<LFunctionSpec>,
    weights: Vec<f64>,
    scale: f64,
    n0: u64,
}

impl LinearCombination {
    /// Normalises the weights to unit Euclidean norm; the original norm is kept as [`Self::scale`].
    pub fn new(members: Vec<LFunctionSpec>, weights: Vec<f64>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::InvalidArgument("a combination needs at least one member".into()));
        }
        if members.len() != weights.len() {
            return Err(Error::InvalidArgument(format!("{} members but {} weights", members.len(), weights.len())));
        }
        if let Some(w) = weights.iter().find(|w| **w == 0.0 || !w.is_finite()) {
            return Err(Error::InvalidArgument(format!("weights must be finite and nonzero, got {w}")));
        }
        let scale = weights.iter().map(|w| w * w).sum::<f64>().sqrt();
        let weights: Vec<f64> = weights.iter().map(|w| w / scale).collect();
        let mut out = Self { members, weights, scale, n0: 0 };
        out.n0 = (1..=N0_SEARCH_LIMIT).find(|&n| out.dirichlet_coeff(n).norm() > 1e-12).ok_or(Error::NoLeadingCoefficient(N0_SEARCH_LIMIT))?;
        Ok(out)
    }

    pub fn single(spec: LFunctionSpec) -> Self {
        Self::new(vec![spec], vec![1.0]).expect("a single member is always valid")
    }

    /// Equal-weight combination of `χ` and `conj χ` for the Conrey character `χ_q(m, ·)`.
    pub fn conjugate_pair(q: u64, m: u64) -> Result<Self> {
        let spec = LFunctionSpec::conrey(q, m)?;
        let conj = spec.conj();
        Self::new(vec![spec, conj], vec![1.0, 1.0])
    }

    pub fn members(&self) -> &[LFunctionSpec] {
        &self.members
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Euclidean norm of the weights as supplied.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Least `n` with nonzero Dirichlet coefficient of `F`.
    pub fn n0(&self) -> u64 {
        self.n0
    }

    pub fn leading_coeff(&self) -> Complex64 {
        self.dirichlet_coeff(self.n0)
    }

    pub fn xi(&self) -> Vec<f64> {
        self.members.iter().map(|m| m.xi()).collect()
    }

    pub fn dirichlet_coeff(&self, n: u64) -> Complex64 {
        self.members.iter().zip(&self.weights).map(|(m, &b)| m.dirichlet_coeff(n) * b).sum()
    }

    /// Period of the Dirichlet coefficients of `F`.
    pub fn modulus(&self) -> u64 {
        self.members.iter().fold(1, |l, m| {
            let q = m.modulus();
            l / gcd(l, q) * q
        })
    }

    pub fn series(&self) -> PeriodicSeries {
        let q = self.modulus();
        PeriodicSeries::new(q, (0..q).map(|a| self.dirichlet_coeff(if a == 0 { q } else { a })).collect())
    }

    /// `s ↦ conj(F(conj s))`, built from the conjugate members.
    pub fn conj(&self) -> Self {
        let mut out = self.clone();
        out.members = self.members.iter().map(|m| m.conj()).collect();
        out
    }

    pub fn eval_f(&self, s: Complex64, precision: f64) -> Result<Complex64> {
        self.series().eval(s, precision)
    }

    /// `(log L_1(s), …, log L_J(s))`.
    pub fn member_logs(&self, s: Complex64, precision: f64) -> Result<Vec<Complex64>> {
        self.members.iter().map(|m| m.eval_log_l(s, precision)).collect()
    }
}
