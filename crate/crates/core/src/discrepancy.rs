//! Empirical distribution of `(log|L_j|, arg L_j)` over `t ∈ [T, 2T]`, box
//! discrepancy against the random model, and the Beurling–Selberg functions.

use std::f64::consts::PI;

use gauss_quad::GaussLegendre;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::hurwitz::PeriodicSeries;
use crate::lfunc::{log_along_ray, LinearCombination, ARG_ANCHOR, ZERO_FLOOR};
use crate::numerics::special::trigamma;
use crate::random_model::{sample_vectors, MCConfig};
use crate::stats::par_map_indexed;
use crate::{Error, Result};

const GRID_PRECISION: f64 = 1e-8;
/// Spacing of the vertical lines used to continue the argument on a t-grid.
const LINE_SPACING: f64 = 0.05;
/// Upper bound on the number of boxes enumerated by [`box_discrepancy`].
pub const MAX_BOXES: usize = 50_000_000;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EmpiricalDistribution {
    /// One `2J`-vector `(log|L_1|, arg L_1, …)` per accepted grid point.
    pub samples: Vec<Vec<f64>>,
    pub sigma: f64,
    pub t: f64,
    pub grid_step: f64,
    pub skipped: usize,
    /// Points that needed the pointwise fallback or a perturbed ordinate.
    pub flags: Vec<String>,
}

/// `log L(σ + i t_k)` on `t_k = t0 + k·dt`, continuing the argument across
/// vertical lines between `ARG_ANCHOR` and `σ`. `None` marks points that lie
/// on a zero's ray even after a perturbation.
fn log_on_grid(series: &PeriodicSeries, sigma: f64, t0: f64, dt: f64, count: usize, flags: &mut Vec<String>) -> Result<Vec<Option<Complex64>>> {
    if sigma >= ARG_ANCHOR {
        let v = series.eval_grid(sigma, t0, dt, count, GRID_PRECISION)?;
        return Ok(v.into_iter().map(|z| Some(z.ln())).collect());
    }
    let n_lines = ((ARG_ANCHOR - sigma) / LINE_SPACING).ceil() as usize;
    let lines: Vec<Vec<Complex64>> = (0..=n_lines)
        .map(|k| {
            let s = ARG_ANCHOR - (ARG_ANCHOR - sigma) * k as f64 / n_lines as f64;
            series.eval_grid(s, t0, dt, count, GRID_PRECISION)
        })
        .collect::<Result<_>>()?;
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let mut arg = lines[0][i].arg();
        let mut ok = true;
        for pair in lines.windows(2) {
            let v = pair[1][i];
            let ratio = v / pair[0][i];
            if v.norm() < ZERO_FLOOR || (ratio - 1.0).norm() > 0.5 {
                ok = false;
                break;
            }
            arg += ratio.arg();
        }
        if ok {
            out.push(Some(Complex64::new(lines[n_lines][i].norm().ln(), arg)));
            continue;
        }
        let t = t0 + i as f64 * dt;
        let value = match log_along_ray(series, Complex64::new(sigma, t), GRID_PRECISION) {
            Ok(v) => Some(v),
            Err(Error::ZeroOnPath(_)) => match log_along_ray(series, Complex64::new(sigma, t + 1e-9), GRID_PRECISION) {
                Ok(v) => {
                    flags.push(format!("t = {t}: perturbed by 1e-9"));
                    Some(v)
                }
                Err(Error::ZeroOnPath(_)) => {
                    flags.push(format!("t = {t}: skipped, zero on ray"));
                    None
                }
                Err(e) => return Err(e),
            },
            Err(e) => return Err(e),
        };
        out.push(value);
    }
    Ok(out)
}

/// Samples the member log-vector at `σ + it` for `t = T + k·grid_step`, `k < ⌊T/grid_step⌋`.
pub fn sample_l_vector(comb: &LinearCombination, sigma: f64, t: f64, grid_step: f64) -> Result<EmpiricalDistribution> {
    if !(sigma > 0.5) || !(t > 0.0) || !(grid_step > 0.0 && grid_step <= 0.1) {
        return Err(Error::InvalidArgument("need sigma > 1/2, T > 0 and 0 < grid_step <= 0.1".into()));
    }
    let count = (t / grid_step).floor() as usize;
    let mut flags = Vec::new();
    let per_member: Vec<Vec<Option<Complex64>>> =
        comb.members().iter().map(|m| log_on_grid(&m.series(), sigma, t, grid_step, count, &mut flags)).collect::<Result<_>>()?;
    let mut samples = Vec::with_capacity(count);
    let mut skipped = 0;
    for i in 0..count {
        let row: Option<Vec<f64>> = per_member.iter().map(|m| m[i].map(|z| [z.re, z.im])).collect::<Option<Vec<_>>>().map(|v| v.concat());
        match row {
            Some(r) if r.iter().all(|x| x.is_finite()) => samples.push(r),
            _ => skipped += 1,
        }
    }
    Ok(EmpiricalDistribution { samples, sigma, t, grid_step, skipped, flags })
}

/// Axis-parallel boxes whose faces lie on per-axis breakpoints (or at infinity).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RectFamily {
    breakpoints: Vec<Vec<f64>>,
}

impl RectFamily {
    pub fn new(breakpoints: Vec<Vec<f64>>) -> Result<Self> {
        if breakpoints.is_empty() {
            return Err(Error::InvalidArgument("a box family needs at least one axis".into()));
        }
        for axis in &breakpoints {
            if axis.iter().any(|v| !v.is_finite()) || axis.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidArgument("breakpoints must be finite and strictly increasing".into()));
            }
        }
        Ok(Self { breakpoints })
    }

    /// `points` equally spaced breakpoints on `[-half_width, half_width]` for each of `dims` axes.
    pub fn uniform(dims: usize, half_width: f64, points: usize) -> Result<Self> {
        if points < 2 || !(half_width > 0.0) {
            return Err(Error::InvalidArgument("uniform box family needs >= 2 points and positive width".into()));
        }
        let axis: Vec<f64> = (0..points).map(|i| -half_width + 2.0 * half_width * i as f64 / (points - 1) as f64).collect();
        Self::new(vec![axis; dims])
    }

    pub fn dims(&self) -> usize {
        self.breakpoints.len()
    }

    pub fn breakpoints(&self) -> &[Vec<f64>] {
        &self.breakpoints
    }

    /// Number of boxes in the family, counting half-infinite ones.
    pub fn box_count(&self) -> usize {
        self.breakpoints.iter().map(|a| (a.len() + 2) * (a.len() + 1) / 2).product()
    }

    fn cell_of(&self, axis: usize, x: f64) -> usize {
        self.breakpoints[axis].partition_point(|&b| b <= x)
    }

    fn boundary(&self, axis: usize, i: usize) -> f64 {
        let b = &self.breakpoints[axis];
        if i == 0 {
            f64::NEG_INFINITY
        } else if i > b.len() {
            f64::INFINITY
        } else {
            b[i - 1]
        }
    }
}

/// A box `Π [lo_d, hi_d)` with its measure under both distributions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxDiscrepancy {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub measure_a: f64,
    pub measure_b: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscrepancyReport {
    pub value: f64,
    pub argmax: BoxDiscrepancy,
    pub boxes: usize,
    pub n_a: usize,
    pub n_b: usize,
}

/// Cumulative cell counts: entry `(i_1, …, i_d)` is the number of samples in
/// cells with index `< i_d` on every axis. Integer counts keep box measures exact.
fn prefix_counts(samples: &[Vec<f64>], family: &RectFamily) -> Vec<u64> {
    let dims = family.dims();
    let shape: Vec<usize> = family.breakpoints.iter().map(|a| a.len() + 2).collect();
    let total: usize = shape.iter().product();
    let mut grid = vec![0u64; total];
    for s in samples {
        let mut idx = 0;
        for d in 0..dims {
            idx = idx * shape[d] + family.cell_of(d, s[d]) + 1;
        }
        grid[idx] += 1;
    }
    let mut stride = 1;
    for d in (0..dims).rev() {
        for flat in 0..total {
            if (flat / stride) % shape[d] != 0 {
                grid[flat] += grid[flat - stride];
            }
        }
        stride *= shape[d];
    }
    grid
}

/// Sup over `family` of `|μ_a(box) - μ_b(box)|` for two empirical measures.
pub fn box_discrepancy(a: &[Vec<f64>], b: &[Vec<f64>], family: &RectFamily) -> Result<DiscrepancyReport> {
    let dims = family.dims();
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidArgument("both sample sets must be nonempty".into()));
    }
    if a.iter().chain(b).any(|s| s.len() != dims) {
        return Err(Error::InvalidArgument(format!("samples must have dimension {dims}")));
    }
    let boxes = family.box_count();
    if boxes > MAX_BOXES {
        return Err(Error::InvalidArgument(format!("box family too large ({boxes} boxes)")));
    }
    let pa = prefix_counts(a, family);
    let pb = prefix_counts(b, family);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let shape: Vec<usize> = family.breakpoints.iter().map(|a| a.len() + 2).collect();
    let strides: Vec<usize> = (0..dims).map(|d| shape[d + 1..].iter().product()).collect();
    let pairs: Vec<Vec<(usize, usize)>> = shape.iter().map(|&n| (0..n).flat_map(|i| (i + 1..n).map(move |k| (i, k))).collect()).collect();
    let measure = |p: &[u64], n: f64, sel: &[(usize, usize)]| -> f64 {
        let mut m: i64 = 0;
        for corner in 0..(1usize << dims) {
            let mut idx = 0;
            let mut sign = 1;
            for d in 0..dims {
                let (lo, hi) = sel[d];
                if corner >> d & 1 == 1 {
                    idx += lo * strides[d];
                    sign = -sign;
                } else {
                    idx += hi * strides[d];
                }
            }
            m += sign * p[idx] as i64;
        }
        m as f64 / n
    };
    // Split over the first axis' intervals; the max is taken in a fixed order.
    let first = &pairs[0];
    let partial = par_map_indexed(first.len(), None, |i| {
        let mut best = (-1.0, Vec::new());
        let mut sel = vec![(0, 0); dims];
        sel[0] = first[i];
        let mut counters = vec![0usize; dims];
        loop {
            for d in 1..dims {
                sel[d] = pairs[d][counters[d]];
            }
            let diff = (measure(&pa, na, &sel) - measure(&pb, nb, &sel)).abs();
            if diff > best.0 {
                best = (diff, sel.clone());
            }
            let mut d = dims - 1;
            loop {
                if d == 0 {
                    return best;
                }
                counters[d] += 1;
                if counters[d] < pairs[d].len() {
                    break;
                }
                counters[d] = 0;
                d -= 1;
            }
        }
    })?;
    let (value, sel) = partial.into_iter().fold((-1.0, Vec::new()), |acc, x| if x.0 > acc.0 { x } else { acc });
    let argmax = BoxDiscrepancy {
        lo: (0..dims).map(|d| family.boundary(d, sel[d].0)).collect(),
        hi: (0..dims).map(|d| family.boundary(d, sel[d].1)).collect(),
        measure_a: measure(&pa, na, &sel),
        measure_b: measure(&pb, nb, &sel),
    };
    Ok(DiscrepancyReport { value, argmax, boxes, n_a: a.len(), n_b: b.len() })
}

/// Discrepancy between the empirical distribution and a random-model reference drawn with `mc`.
pub fn sup_box_discrepancy(emp: &EmpiricalDistribution, comb: &LinearCombination, family: &RectFamily, mc: &MCConfig) -> Result<DiscrepancyReport> {
    let reference = sample_vectors(comb, emp.sigma, mc)?;
    box_discrepancy(&emp.samples, &reference, family)
}

/// Default half-width `3 √(ξ_max log G)` of the box `(-𝓛, 𝓛)^{2J}`.
pub fn default_box_half_width(xi_max: f64, g: f64) -> f64 {
    3.0 * (xi_max * g.ln()).sqrt()
}

/// Fraction of samples lying in `(-big_l, big_l)^{2J}` with `log|Σ b_j L_j| > τ`.
pub fn tail_distribution_psi(samples: &[Vec<f64>], weights: &[f64], tau: f64, big_l: f64) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::InvalidArgument("no samples".into()));
    }
    if samples.iter().any(|s| s.len() != 2 * weights.len()) {
        return Err(Error::InvalidArgument("samples must have dimension 2J".into()));
    }
    let hits = samples
        .iter()
        .filter(|s| {
            if s.iter().any(|x| x.abs() >= big_l) {
                return false;
            }
            let f: Complex64 = weights.iter().enumerate().map(|(j, &b)| b * Complex64::new(s[2 * j], s[2 * j + 1]).exp()).sum();
            f.norm().ln() > tau
        })
        .count();
    Ok(hits as f64 / samples.len() as f64)
}

/// `sin(πz)/(πz)`.
fn sinc(z: f64) -> f64 {
    if z.abs() < 1e-8 {
        1.0 - (PI * z).powi(2) / 6.0
    } else {
        (PI * z).sin() / (PI * z)
    }
}

/// Beurling's function `H(z) = (sin πz/π)² (Σ_n sgn(n)/(z-n)² + 2/z)`.
pub fn bs_h(z: f64) -> f64 {
    if z < 0.0 {
        return -bs_h(-z);
    }
    // Summing the series with trigamma gives 1 - sinc²(z) (1 - 2z + 2z² ψ'(1+z)).
    let s = sinc(z);
    1.0 - s * s * (1.0 - 2.0 * z + 2.0 * z * z * trigamma(1.0 + z))
}

/// `H` from its defining series with `|n| ≤ 10⁴` plus an integral tail correction.
pub fn bs_h_series(z: f64) -> f64 {
    const N: i64 = 10_000;
    if z == z.round() {
        return z.signum() * (z != 0.0) as i32 as f64;
    }
    let mut sum = 0.0;
    for n in 1..=N {
        let n = n as f64;
        sum += 1.0 / (z - n).powi(2) - 1.0 / (z + n).powi(2);
    }
    let m = N as f64 + 0.5;
    sum += 1.0 / (m - z) - 1.0 / (m + z);
    let s = (PI * z).sin() / PI;
    s * s * (sum + 2.0 / z)
}

/// Fejér kernel `K(z) = (sin πz / πz)²`.
pub fn bs_k(z: f64) -> f64 {
    let s = sinc(z);
    s * s
}

/// Majorant `B⁺ = H + K` of `sgn`.
pub fn bs_b_plus(z: f64) -> f64 {
    bs_h(z) + bs_k(z)
}

/// Minorant `B⁻ = H - K` of `sgn`.
pub fn bs_b_minus(z: f64) -> f64 {
    bs_h(z) - bs_k(z)
}

/// `K̂(ξ) = max(0, 1 - |ξ|)`.
pub fn bs_k_hat(xi: f64) -> f64 {
    (1.0 - xi.abs()).max(0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BSWindow {
    pub a: f64,
    pub b: f64,
    pub delta: f64,
}

impl BSWindow {
    pub fn new(a: f64, b: f64, delta: f64) -> Result<Self> {
        if !(a < b) || !(delta > 0.0) || !a.is_finite() || !b.is_finite() || !delta.is_finite() {
            return Err(Error::InvalidArgument(format!("invalid window [{a}, {b}] with delta {delta}")));
        }
        Ok(Self { a, b, delta })
    }

    /// `½(sgn(x - a) + sgn(b - x))`, the indicator with half weight at the endpoints.
    pub fn indicator(&self, x: f64) -> f64 {
        0.5 * (sign(x - self.a) + sign(self.b - x))
    }

    /// `K(Δ(x - a)) + K(Δ(b - x))`.
    pub fn error_bound(&self, x: f64) -> f64 {
        bs_k(self.delta * (x - self.a)) + bs_k(self.delta * (self.b - x))
    }
}

fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// `F_{I,Δ}(x) = ½(B⁻(Δ(x - a)) + B⁻(Δ(b - x)))`.
pub fn bs_f(w: &BSWindow, x: f64) -> f64 {
    0.5 * (bs_b_minus(w.delta * (x - w.a)) + bs_b_minus(w.delta * (w.b - x)))
}

/// `∫ f(z) e^{-2πi η z} dz` over `[lo, hi]` for each `η`, by composite Gauss–Legendre panels.
fn fourier_integrals(f: impl Fn(f64) -> f64 + Sync, lo: f64, hi: f64, etas: &[f64]) -> Result<Vec<Complex64>> {
    let rule = GaussLegendre::new(12).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let nodes = rule.as_node_weight_pairs();
    let max_eta = etas.iter().fold(1.0f64, |m, e| m.max(e.abs()));
    let panel = 0.25 / (max_eta + 1.0);
    let panels = ((hi - lo) / panel).ceil() as usize;
    let h = (hi - lo) / panels as f64;
    let chunk = 4096;
    let parts = par_map_indexed(panels.div_ceil(chunk), None, |c| {
        let mut acc = vec![Complex64::new(0.0, 0.0); etas.len()];
        for p in c * chunk..((c + 1) * chunk).min(panels) {
            let a = lo + p as f64 * h;
            for &(x, w) in nodes {
                let z = a + 0.5 * h * (x + 1.0);
                let fz = f(z) * w * 0.5 * h;
                for (slot, &eta) in acc.iter_mut().zip(etas) {
                    *slot += Complex64::from_polar(fz, -2.0 * PI * eta * z);
                }
            }
        }
        acc
    })?;
    Ok((0..etas.len()).map(|i| parts.iter().map(|v| v[i]).sum()).collect())
}

/// `2∫_Z^∞ cos(ωz)/z² dz` to leading order in `1/Z`.
fn cos_tail(omega: f64, z: f64) -> f64 {
    if omega == 0.0 {
        2.0 / z
    } else {
        -2.0 * (omega * z).sin() / (omega * z * z)
    }
}

/// `K̂(ξ)` by numerical quadrature of `∫ K(z) e^{-2πiξz} dz`.
pub fn bs_k_hat_numeric(xi: f64) -> Result<f64> {
    const Z: f64 = 4000.0;
    let v = fourier_integrals(bs_k, -Z, Z, &[xi])?[0].re;
    // sinc² cos(2πξz) = [cos(2πξz) - ½cos(2π(ξ+1)z) - ½cos(2π(ξ-1)z)] / (2π²z²) beyond Z.
    let w = 2.0 * PI;
    let tail = (cos_tail(w * xi, Z) - 0.5 * cos_tail(w * (xi + 1.0), Z) - 0.5 * cos_tail(w * (xi - 1.0), Z)) / (2.0 * PI * PI);
    Ok(v + tail)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BSFourierReport {
    pub window: BSWindow,
    /// Largest `|F̂(y)|` over sampled `|y| ∈ [Δ(1 + 1e-3), 2Δ]`.
    pub max_outside: f64,
    /// `max Δ |F̂(y) - 1̂_I(y)|` over sampled `|y| < Δ`.
    pub fitted_c: f64,
    /// `(ξ, K̂ numeric, K̂ exact)` at `ξ ∈ {0, 0.5, 1.5}`.
    pub k_hat: Vec<(f64, f64, f64)>,
    /// `(y, |F̂(y)|)` samples, inside and outside the band.
    pub samples: Vec<(f64, f64)>,
    pub passed: bool,
}

/// Numerical Fourier transform of `F_{I,Δ}`: vanishing outside `[-Δ, Δ]` and closeness to `1̂_I` inside.
pub fn bs_fourier_check(w: &BSWindow) -> Result<BSFourierReport> {
    const Z: f64 = 2000.0;
    const OUT: usize = 24;
    const IN: usize = 16;
    // In z = Δx: F̂(y) = (1/Δ) ∫ f(z) e^{-2πi (y/Δ) z} dz with f(z) = F(z/Δ).
    let etas: Vec<f64> = (0..OUT).map(|i| 1.001 + 0.999 * i as f64 / (OUT - 1) as f64).chain((0..IN).map(|i| 0.95 * i as f64 / (IN - 1) as f64)).collect();
    let f = |z: f64| bs_f(w, z / w.delta);
    let lo = w.delta * w.a - Z;
    let hi = w.delta * w.b + Z;
    let vals = fourier_integrals(f, lo, hi, &etas)?;
    let mut max_outside: f64 = 0.0;
    let mut fitted_c: f64 = 0.0;
    let mut samples = Vec::with_capacity(etas.len());
    for (i, (&eta, v)) in etas.iter().zip(&vals).enumerate() {
        let y = eta * w.delta;
        let fh = v / w.delta;
        samples.push((y, fh.norm()));
        if i < OUT {
            max_outside = max_outside.max(fh.norm());
        } else {
            let ind = if y == 0.0 {
                Complex64::new(w.b - w.a, 0.0)
            } else {
                (Complex64::from_polar(1.0, -2.0 * PI * w.a * y) - Complex64::from_polar(1.0, -2.0 * PI * w.b * y)) / Complex64::new(0.0, 2.0 * PI * y)
            };
            fitted_c = fitted_c.max(w.delta * (fh - ind).norm());
        }
    }
    let k_hat = [0.0, 0.5, 1.5].iter().map(|&x| Ok((x, bs_k_hat_numeric(x)?, bs_k_hat(x)))).collect::<Result<Vec<_>>>()?;
    let passed = max_outside < 1e-4 && k_hat.iter().all(|(_, n, e)| (n - e).abs() < 1e-4);
    Ok(BSFourierReport { window: *w, max_outside, fitted_c, k_hat, samples, passed })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn h_fast_path_matches_series() {
        for &z in &[0.1, 0.5, 1.3, 2.75, 7.01, 19.5, 49.9, -3.2] {
            let a = bs_h(z);
            let b = bs_h_series(z);
            assert!((a - b).abs() < 1e-10, "z = {z}: {a} vs {b}");
        }
        assert_eq!(bs_h(0.0), 0.0);
        assert!((bs_h(3.0) - 1.0).abs() < 1e-15);
        assert!((bs_h(-2.0) + 1.0).abs() < 1e-15);
    }

    #[test]
    fn kernel_values() {
        assert_eq!(bs_k(0.0), 1.0);
        assert!(bs_k(2.0) < 1e-30);
        assert!((bs_b_plus(0.7) - bs_b_minus(0.7) - 2.0 * bs_k(0.7)).abs() < 1e-15);
    }

    #[test]
    fn f_sandwich_at_sample_points() {
        let w = BSWindow::new(-0.3, 1.1, 3.0).unwrap();
        for i in 0..2000 {
            let x = -5.0 + 10.0 * i as f64 / 1999.0;
            let gap = w.indicator(x) - bs_f(&w, x);
            assert!(gap >= -1e-12 && gap <= w.error_bound(x) + 1e-12, "x = {x}");
        }
    }

    #[test]
    fn prefix_box_measures() {
        let fam = RectFamily::uniform(2, 1.0, 3).unwrap();
        assert_eq!(fam.box_count(), 100);
        let a = vec![vec![-0.5, -0.5], vec![0.5, 0.5]];
        let r = box_discrepancy(&a, &a, &fam).unwrap();
        assert_eq!(r.value, 0.0);
        let b = vec![vec![-0.5, -0.5], vec![-0.5, 0.5]];
        let r = box_discrepancy(&a, &b, &fam).unwrap();
        assert!((r.value - 0.5).abs() < 1e-15);
    }

    #[test]
    fn psi_is_monotone() {
        let s = vec![vec![0.1, 0.0], vec![1.0, 0.5], vec![-2.0, 1.0], vec![9.0, 0.0]];
        let p: Vec<f64> = [-10.0, 0.0, 0.5, 2.0].iter().map(|&t| tail_distribution_psi(&s, &[1.0], t, 5.0).unwrap()).collect();
        assert_eq!(p[0], 0.75);
        assert!(p.windows(2).all(|w| w[1] <= w[0]));
        assert_eq!(tail_distribution_psi(&s, &[1.0], 5.0, 5.0).unwrap(), 0.0);
    }
}
