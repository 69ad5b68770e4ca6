//! Euler–Maclaurin evaluation of periodic Dirichlet series.
//!
//! Every function evaluated in this crate has the form
//! `Σ_{m≥1} c(m) m^{-s}` with `c` periodic modulo `q`: the Riemann zeta
//! function (`q = 1`), Dirichlet L-functions, and real linear combinations of
//! them (period = lcm of the moduli). Splitting by residue class gives
//! `q^{-s} Σ_a c(a) ζ(s, a/q)`; each Hurwitz zeta is summed directly up to
//! `N` periods and the tail is closed with the Euler–Maclaurin formula.

use num_complex::Complex64;

use crate::numerics::special::BERNOULLI_EVEN;
use crate::{Error, Result};

/// Number of Bernoulli corrections (`B_2 … B_20`).
const EM_ORDER: usize = 10;
/// Hard cap on the number of directly summed terms.
pub const TERM_CAP: usize = 1_000_000;

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// `Σ_{m≥1} c(m) m^{-s}` with `c(m) = coeffs[m mod q]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicSeries {
    modulus: u64,
    coeffs: Vec<Complex64>,
    residue: Complex64,
}

/// Evaluation result with the Euler–Maclaurin remainder estimate.
#[derive(Debug, Clone, Copy)]
pub struct SeriesValue {
    pub value: Complex64,
    pub error_estimate: f64,
    pub periods: usize,
}

impl PeriodicSeries {
    pub fn new(modulus: u64, coeffs: Vec<Complex64>) -> Self {
        assert_eq!(coeffs.len() as u64, modulus, "one coefficient per residue");
        let residue = coeffs.iter().sum::<Complex64>() / modulus as f64;
        Self { modulus, coeffs, residue }
    }

    pub fn zeta() -> Self {
        Self::new(1, vec![Complex64::new(1.0, 0.0)])
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of `m^{-s}`.
    pub fn coeff(&self, m: u64) -> Complex64 {
        self.coeffs[(m % self.modulus) as usize]
    }

    /// Residue at the simple pole `s = 1` (zero when there is no pole).
    pub fn pole_residue(&self) -> Complex64 {
        self.residue
    }

    pub fn has_pole(&self) -> bool {
        self.residue.norm() > 1e-14
    }

    /// Periods summed directly by default at height `t`.
    pub fn default_periods(t: f64) -> usize {
        20usize.max(t.abs().ceil() as usize)
    }

    /// Evaluates the series at `s` with absolute error at most `precision`.
    pub fn eval(&self, s: Complex64, precision: f64) -> Result<Complex64> {
        Ok(self.eval_detailed(s, precision)?.value)
    }

    pub fn eval_detailed(&self, s: Complex64, precision: f64) -> Result<SeriesValue> {
        if s.re <= 0.0 {
            return Err(Error::InvalidArgument(format!("Re(s) must be positive, got {s}")));
        }
        if self.has_pole() && (s - 1.0).norm() < 1e-15 {
            return Err(Error::Pole(s));
        }
        let q = self.modulus as usize;
        let mut periods = Self::default_periods(s.im);
        loop {
            let (value, err) = self.em_sum(s, periods);
            if err <= precision {
                return Ok(SeriesValue { value, error_estimate: err, periods });
            }
            if periods * q * 2 > TERM_CAP {
                return Err(Error::PrecisionUnreachable { s, precision, cap: TERM_CAP });
            }
            periods *= 2;
        }
    }

    /// Direct sum over `periods` periods plus the Euler–Maclaurin tail.
    fn em_sum(&self, s: Complex64, periods: usize) -> (Complex64, f64) {
        let q = self.modulus;
        let mut head = Complex64::new(0.0, 0.0);
        for n in 0..periods as u64 {
            for a in 1..=q {
                let c = self.coeffs[(a % q) as usize];
                if c.re == 0.0 && c.im == 0.0 {
                    continue;
                }
                let m = (q * n + a) as f64;
                head += c * (-s * m.ln()).exp();
            }
        }
        let (tail, err) = self.em_tail(s, periods);
        (head + tail, err)
    }

    /// Euler–Maclaurin tail `Σ_{n ≥ N} Σ_a c(a) (qn + a)^{-s}` and its error estimate.
    fn em_tail(&self, s: Complex64, periods: usize) -> (Complex64, f64) {
        let q = self.modulus;
        let qf = q as f64;
        let s_minus_1 = s - 1.0;
        let mut tail = Complex64::new(0.0, 0.0);
        let mut singular_regular = Complex64::new(0.0, 0.0);
        let mut err = 0.0;
        for a in 1..=q {
            let c = self.coeffs[(a % q) as usize];
            if c.norm() == 0.0 {
                continue;
            }
            let x = (q * periods as u64 + a) as f64;
            let lnx = x.ln();
            let x_pow = (-s * lnx).exp(); // x^{-s}
                                          // (x^{1-s} - 1)/(s - 1), stable near s = 1
            let z = -s_minus_1 * lnx;
            let phi = if z.norm() < 1e-5 { Complex64::new(1.0, 0.0) + z * 0.5 + z * z / 6.0 } else { (z.exp() - 1.0) / z };
            singular_regular += c * (-lnx) * phi;
            let mut sum = x_pow * 0.5;
            // k-th correction: B_2k/(2k)! q^{2k-1} s(s+1)…(s+2k-2) x^{-s-2k+1}
            let mut poch = s;
            let mut scale = qf / x; // q^{2k-1} x^{-(2k-1)}
            let mut last = 0.0;
            for k in 1..=EM_ORDER + 1 {
                let term = x_pow * poch * (BERNOULLI_EVEN[k - 1] / factorial(2 * k) * scale);
                if k <= EM_ORDER {
                    sum += term;
                } else {
                    last = term.norm();
                }
                poch *= (s + (2 * k - 1) as f64) * (s + (2 * k) as f64);
                scale *= (qf / x) * (qf / x);
            }
            tail += c * sum;
            err += c.norm() * last;
        }
        tail += singular_regular / qf;
        if self.has_pole() {
            tail += self.residue / s_minus_1;
        }
        (tail, err)
    }

    /// Values at `σ + i(t0 + k·dt)` for `k = 0..count`, sharing the
    /// direct sum across the grid through phasor recurrences.
    pub fn eval_grid(&self, sigma: f64, t0: f64, dt: f64, count: usize, precision: f64) -> Result<Vec<Complex64>> {
        const BLOCK: usize = 4096;
        const RESYNC: usize = 256;
        let mut out = Vec::with_capacity(count);
        let q = self.modulus;
        let mut start = 0;
        while start < count {
            let len = BLOCK.min(count - start);
            let tb = t0 + start as f64 * dt;
            let t_hi = tb.abs().max((tb + (len - 1) as f64 * dt).abs());
            // Choose the period count from the worst point of the block.
            let probe = Complex64::new(sigma, if tb.abs() > (tb + (len - 1) as f64 * dt).abs() { tb } else { tb + (len - 1) as f64 * dt });
            let periods = self.eval_detailed(probe, precision)?.periods.max(Self::default_periods(t_hi));
            let mut acc = vec![Complex64::new(0.0, 0.0); len];
            for n in 0..periods as u64 {
                for a in 1..=q {
                    let c = self.coeffs[(a % q) as usize];
                    if c.norm() == 0.0 {
                        continue;
                    }
                    let m = (q * n + a) as f64;
                    let lnm = m.ln();
                    let amp = c * (-sigma * lnm).exp();
                    let step = Complex64::from_polar(1.0, -dt * lnm);
                    let mut k = 0;
                    while k < len {
                        let t = tb + k as f64 * dt;
                        let mut z = amp * Complex64::from_polar(1.0, -t * lnm);
                        let end = (k + RESYNC).min(len);
                        for slot in &mut acc[k..end] {
                            *slot += z;
                            z *= step;
                        }
                        k = end;
                    }
                }
            }
            for (k, slot) in acc.into_iter().enumerate() {
                let s = Complex64::new(sigma, tb + k as f64 * dt);
                if self.has_pole() && (s - 1.0).norm() < 1e-15 {
                    return Err(Error::Pole(s));
                }
                let (tail, _) = self.em_tail(s, periods);
                out.push(slot + tail);
            }
            start += len;
        }
        Ok(out)
    }
}

/// Hurwitz zeta `ζ(s, a) = Σ_{n≥0} (n + a)^{-s}` for `0 < a ≤ 1`.
pub fn hurwitz_zeta(s: Complex64, a: f64, precision: f64) -> Result<Complex64> {
    if !(a > 0.0 && a <= 1.0) {
        return Err(Error::InvalidArgument(format!("Hurwitz parameter a = {a} outside (0, 1]")));
    }
    if s.re <= 0.0 {
        return Err(Error::InvalidArgument(format!("Re(s) must be positive, got {s}")));
    }
    if (s - 1.0).norm() < 1e-15 {
        return Err(Error::Pole(s));
    }
    let mut n_terms = PeriodicSeries::default_periods(s.im);
    loop {
        let mut head = Complex64::new(0.0, 0.0);
        for n in 0..n_terms {
            head += (-s * (n as f64 + a).ln()).exp();
        }
        let w = n_terms as f64 + a;
        let lnw = w.ln();
        let w_pow = (-s * lnw).exp();
        let mut tail = w_pow * w / (s - 1.0) + w_pow * 0.5;
        let mut poch = s;
        let mut scale = 1.0 / w;
        let mut last = 0.0;
        for k in 1..=EM_ORDER + 1 {
            let term = w_pow * poch * (BERNOULLI_EVEN[k - 1] / factorial(2 * k) * scale);
            if k <= EM_ORDER {
                tail += term;
            } else {
                last = term.norm();
            }
            poch *= (s + (2 * k - 1) as f64) * (s + (2 * k) as f64);
            scale /= w * w;
        }
        if last <= precision {
            return Ok(head + tail);
        }
        if n_terms * 2 > TERM_CAP {
            return Err(Error::PrecisionUnreachable { s, precision, cap: TERM_CAP });
        }
        n_terms *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zeta_at_two_and_four() {
        let z = PeriodicSeries::zeta();
        assert!((z.eval(c(2.0, 0.0), 1e-14).unwrap() - PI * PI / 6.0).norm() < 1e-13);
        assert!((z.eval(c(4.0, 0.0), 1e-14).unwrap() - PI.powi(4) / 90.0).norm() < 1e-13);
    }

    #[test]
    fn zeta_half_is_known() {
        // ζ(1/2) = -1.4603545088095868
        let z = PeriodicSeries::zeta();
        assert!((z.eval(c(0.5, 0.0), 1e-14).unwrap().re + 1.460_354_508_809_586_8).abs() < 1e-12);
    }

    #[test]
    fn pole_is_reported() {
        let z = PeriodicSeries::zeta();
        assert!(matches!(z.eval(c(1.0, 0.0), 1e-10), Err(Error::Pole(_))));
        // Laurent expansion: ζ(1 + h) ≈ 1/h + γ
        let h = 2f64.powi(-23);
        let v = z.eval(c(1.0 + h, 0.0), 1e-12).unwrap();
        assert!((v.re - 1.0 / h - crate::numerics::special::EULER_GAMMA).abs() < 1e-6);
    }

    #[test]
    fn nonprincipal_at_one_is_finite() {
        // L(1, χ_4) = π/4
        let chi4 = PeriodicSeries::new(4, vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]);
        let v = chi4.eval(c(1.0, 0.0), 1e-13).unwrap();
        assert!((v - PI / 4.0).norm() < 1e-12);
    }

    #[test]
    fn hurwitz_decomposition_matches_series() {
        // L(s, χ_4) = 4^{-s}(ζ(s, 1/4) - ζ(s, 3/4))
        let chi4 = PeriodicSeries::new(4, vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]);
        for s in [c(2.0, 0.0), c(0.7, 13.0), c(0.55, 41.5)] {
            let h = (hurwitz_zeta(s, 0.25, 1e-14).unwrap() - hurwitz_zeta(s, 0.75, 1e-14).unwrap()) * (-s * 4f64.ln()).exp();
            let direct = chi4.eval(s, 1e-14).unwrap();
            assert!((h - direct).norm() < 1e-11, "{s}: {h} vs {direct}");
        }
        // ζ(s, 1) = ζ(s)
        let s = c(0.8, 25.0);
        let a = hurwitz_zeta(s, 1.0, 1e-14).unwrap();
        let b = PeriodicSeries::zeta().eval(s, 1e-14).unwrap();
        assert!((a - b).norm() < 1e-11);
    }

    #[test]
    fn grid_matches_pointwise() {
        let chi4 = PeriodicSeries::new(4, vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]);
        let vals = chi4.eval_grid(0.6, 100.0, 0.37, 600, 1e-12).unwrap();
        for k in [0usize, 1, 255, 256, 257, 599] {
            let s = c(0.6, 100.0 + k as f64 * 0.37);
            let v = chi4.eval(s, 1e-12).unwrap();
            assert!((vals[k] - v).norm() < 1e-9, "k = {k}");
        }
    }

    #[test]
    fn precision_cap() {
        let z = PeriodicSeries::zeta();
        assert!(matches!(z.eval(c(0.01, 0.0), 1e-300), Err(Error::PrecisionUnreachable { .. })));
    }
}
