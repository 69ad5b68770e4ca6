//! Quadrature: adaptive Gauss–Kronrod, tanh-sinh and periodic trapezoid rules.
//!
//! Integrands are fallible (`FnMut(f64) -> Result<T>`) because most of them
//! evaluate L-functions, which can fail near poles or zeros.

use std::collections::BinaryHeap;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::{Error, Result};

pub trait QuadValue: Copy + Default + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn magnitude(&self) -> f64;
}

impl QuadValue for f64 {
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadResult<T> {
    pub value: T,
    pub error: f64,
    pub evaluations: usize,
}

// Gauss–Kronrod 7/15 abscissae and weights.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

/// One G7/K15 panel on `[a, b]`: returns `(kronrod, |kronrod - gauss|)`.
pub fn gk15<T: QuadValue>(f: &mut impl FnMut(f64) -> Result<T>, a: f64, b: f64) -> Result<(T, f64)> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c)?;
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let f1 = f(c - dx)?;
        let f2 = f(c + dx)?;
        let s = f1 + f2;
        kron = kron + s * WGK[j];
        if j % 2 == 1 {
            gauss = gauss + s * WG[j / 2];
        }
    }
    let kron = kron * h;
    let gauss = gauss * h;
    Ok((kron, (kron - gauss).magnitude()))
}

struct Panel<T> {
    a: f64,
    b: f64,
    value: T,
    error: f64,
}

impl<T> PartialEq for Panel<T> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<T> Eq for Panel<T> {}
impl<T> PartialOrd for Panel<T> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl<T> Ord for Panel<T> {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Globally adaptive Gauss–Kronrod integration over the given breakpoints.
///
/// Stops when the summed error estimate is below `max(abs_tol, rel_tol·|I|)`.
pub fn integrate_gk<T: QuadValue>(
    mut f: impl FnMut(f64) -> Result<T>,
    breakpoints: &[f64],
    abs_tol: f64,
    rel_tol: f64,
    max_panels: usize,
) -> Result<QuadResult<T>> {
    let mut heap = BinaryHeap::new();
    let mut evaluations = 0;
    for w in breakpoints.windows(2) {
        if w[1] > w[0] {
            let (value, error) = gk15(&mut f, w[0], w[1])?;
            evaluations += 15;
            heap.push(Panel { a: w[0], b: w[1], value, error });
        }
    }
    loop {
        let (total, err) = heap.iter().fold((T::default(), 0.0), |(s, e), p| (s + p.value, e + p.error));
        if err <= abs_tol.max(rel_tol * total.magnitude()) {
            return Ok(QuadResult { value: total, error: err, evaluations });
        }
        if heap.len() >= max_panels {
            let (a, b) = (breakpoints[0], *breakpoints.last().unwrap());
            return Err(Error::QuadratureNonconvergence { a, b, err });
        }
        let worst = heap.pop().expect("nonempty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Panel can no longer be split in floating point; accept it.
            let rest = heap.into_iter().fold((T::default(), 0.0), |(s, e), p| (s + p.value, e + p.error));
            return Ok(QuadResult { value: rest.0 + worst.value, error: rest.1 + worst.error, evaluations });
        }
        for (a, b) in [(worst.a, mid), (mid, worst.b)] {
            let (value, error) = gk15(&mut f, a, b)?;
            evaluations += 15;
            heap.push(Panel { a, b, value, error });
        }
    }
}

/// Tanh-sinh (double exponential) quadrature on `[a, b]`; tolerant of
/// integrable endpoint singularities such as `log|x - a|`.
pub fn integrate_tanh_sinh<T: QuadValue>(mut f: impl FnMut(f64) -> Result<T>, a: f64, b: f64, abs_tol: f64, max_level: u32) -> Result<QuadResult<T>> {
    use std::f64::consts::FRAC_PI_2;
    let c = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let t_max = 3.2;
    let mut evaluations = 0;

    // Node at parameter t: returns weighted contribution (without step factor).
    let node = |t: f64, f: &mut dyn FnMut(f64) -> Result<T>| -> Result<T> {
        let sh = FRAC_PI_2 * t.sinh();
        let ch = FRAC_PI_2 * t.cosh();
        let w = ch / sh.cosh().powi(2);
        // Distance to the endpoints, computed without cancellation.
        let d = half / (sh.exp() * sh.cosh());
        let x_right = b - d;
        let x_left = a + d;
        let mut s = T::default();
        if t == 0.0 {
            return Ok(f(c)? * w);
        }
        if x_right > a && x_right < b {
            s = s + f(x_right)? * w;
        }
        if x_left > a && x_left < b {
            s = s + f(x_left)? * w;
        }
        Ok(s)
    };

    let mut h = 1.0;
    let mut sum = node(0.0, &mut f)?;
    evaluations += 1;
    let mut k = 1.0;
    while k * h <= t_max {
        sum = sum + node(k * h, &mut f)?;
        evaluations += 2;
        k += 1.0;
    }
    let mut estimate = sum * (h * half);
    for _level in 1..=max_level {
        h *= 0.5;
        let mut k = 1.0;
        while k * h <= t_max {
            sum = sum + node(k * h, &mut f)?;
            evaluations += 2;
            k += 2.0;
        }
        let next = sum * (h * half);
        let error = (next - estimate).magnitude();
        estimate = next;
        if error <= abs_tol && _level >= 3 {
            return Ok(QuadResult { value: estimate, error, evaluations });
        }
    }
    Err(Error::QuadratureNonconvergence { a, b, err: f64::NAN })
}

/// Trapezoid rule on `[0, 2π)` for a periodic integrand, doubling the node
/// count from `min_nodes` until successive means agree to `tol`.
///
/// Returns the mean `(1/2π) ∫ f` and the node count used.
pub fn periodic_mean(mut f: impl FnMut(f64) -> Complex64, min_nodes: usize, tol: f64, max_nodes: usize) -> (Complex64, usize) {
    let mut n = min_nodes.max(1);
    let mut sum: Complex64 = (0..n).map(|k| f(std::f64::consts::TAU * k as f64 / n as f64)).sum();
    let mut mean = sum / n as f64;
    while 2 * n <= max_nodes {
        let step = std::f64::consts::TAU / (2 * n) as f64;
        let odd: Complex64 = (0..n).map(|k| f(step * (2 * k + 1) as f64)).sum();
        sum += odd;
        n *= 2;
        let next = sum / n as f64;
        let converged = (next - mean).norm() < tol;
        mean = next;
        if converged {
            break;
        }
    }
    (mean, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gk_polynomial_and_oscillatory() {
        let r = integrate_gk(|x| Ok(x * x), &[0.0, 3.0], 1e-14, 0.0, 100).unwrap();
        assert!((r.value - 9.0).abs() < 1e-13);
        let r = integrate_gk(|x: f64| Ok((40.0 * x).sin()), &[0.0, 1.0], 1e-12, 0.0, 1000).unwrap();
        assert!((r.value - (1.0 - 40f64.cos()) / 40.0).abs() < 1e-11);
    }

    #[test]
    fn gk_complex() {
        let r = integrate_gk(|x: f64| Ok(Complex64::new(0.0, x).exp()), &[0.0, 1.0], 1e-13, 0.0, 100).unwrap();
        let want = (Complex64::new(0.0, 1.0).exp() - 1.0) / Complex64::new(0.0, 1.0);
        assert!((r.value - want).norm() < 1e-12);
    }

    #[test]
    fn tanh_sinh_log_singularity() {
        // ∫_0^1 log x dx = -1
        let r = integrate_tanh_sinh(|x: f64| Ok(x.ln()), 0.0, 1.0, 1e-12, 12).unwrap();
        assert!((r.value + 1.0).abs() < 1e-10, "{}", r.value);
        // ∫_0^1 log|x - 1| dx = -1 too (singular at right end)
        let r = integrate_tanh_sinh(|x: f64| Ok((1.0 - x).ln()), 0.0, 1.0, 1e-12, 12).unwrap();
        assert!((r.value + 1.0).abs() < 1e-10);
    }

    #[test]
    fn periodic_trapezoid_bessel() {
        // (1/2π)∫ exp(i z cos θ) dθ = J0(z); J0(1) = 0.7651976865579666
        let (m, _) = periodic_mean(|t| Complex64::new(0.0, t.cos()).exp(), 16, 1e-14, 1 << 12);
        assert!((m.re - 0.765_197_686_557_966_6).abs() < 1e-14);
        assert!(m.im.abs() < 1e-14);
    }

    #[test]
    fn fallible_integrand_propagates() {
        let r = integrate_gk(|x| if x > 0.5 { Err(Error::InvalidArgument("x".into())) } else { Ok(x) }, &[0.0, 1.0], 1e-10, 0.0, 10);
        assert!(r.is_err());
    }
}
