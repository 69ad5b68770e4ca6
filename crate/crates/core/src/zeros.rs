//! Zero counting by the argument principle, zero refinement and Littlewood's
//! identity.
//!
//! The argument of `F` is tracked along each edge of a rectangle by principal
//! increments between adaptively chosen nodes; a segment is accepted when its
//! two halves together turn by less than `π/2` and agree with the whole.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::hurwitz::PeriodicSeries;
use crate::lfunc::LinearCombination;
use crate::numerics::quad::{integrate_gk, integrate_tanh_sinh};
use crate::{Error, Result};

/// Absolute precision of every function value used on a contour.
pub const EVAL_PRECISION: f64 = 1e-11;

/// A function holomorphic on the region of interest, apart from listed poles.
pub trait AnalyticFunction: Sync {
    fn eval(&self, s: Complex64) -> Result<Complex64>;

    /// Simple poles; the argument principle counts zeros minus poles.
    fn poles(&self) -> Vec<Complex64> {
        Vec::new()
    }
}

impl AnalyticFunction for PeriodicSeries {
    fn eval(&self, s: Complex64) -> Result<Complex64> {
        PeriodicSeries::eval(self, s, EVAL_PRECISION)
    }

    fn poles(&self) -> Vec<Complex64> {
        if self.has_pole() {
            vec![Complex64::new(1.0, 0.0)]
        } else {
            Vec::new()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rectangle {
    pub sigma_lo: f64,
    pub sigma_hi: f64,
    pub t_lo: f64,
    pub t_hi: f64,
}

impl Rectangle {
    pub fn new(sigma_lo: f64, sigma_hi: f64, t_lo: f64, t_hi: f64) -> Result<Self> {
        let finite = [sigma_lo, sigma_hi, t_lo, t_hi].iter().all(|x| x.is_finite());
        if !finite || sigma_lo >= sigma_hi || t_lo >= t_hi {
            return Err(Error::InvalidArgument(format!("invalid rectangle [{sigma_lo}, {sigma_hi}] x [{t_lo}, {t_hi}]")));
        }
        Ok(Self { sigma_lo, sigma_hi, t_lo, t_hi })
    }

    pub fn width(&self) -> f64 {
        self.sigma_hi - self.sigma_lo
    }

    pub fn height(&self) -> f64 {
        self.t_hi - self.t_lo
    }

    pub fn diameter(&self) -> f64 {
        self.width().hypot(self.height())
    }

    pub fn center(&self) -> Complex64 {
        Complex64::new(0.5 * (self.sigma_lo + self.sigma_hi), 0.5 * (self.t_lo + self.t_hi))
    }

    /// Strict interior membership.
    pub fn contains(&self, s: Complex64) -> bool {
        s.re > self.sigma_lo && s.re < self.sigma_hi && s.im > self.t_lo && s.im < self.t_hi
    }

    fn distance_to_boundary(&self, s: Complex64) -> f64 {
        let dx = if s.re < self.sigma_lo {
            self.sigma_lo - s.re
        } else if s.re > self.sigma_hi {
            s.re - self.sigma_hi
        } else {
            0.0
        };
        let dy = if s.im < self.t_lo {
            self.t_lo - s.im
        } else if s.im > self.t_hi {
            s.im - self.t_hi
        } else {
            0.0
        };
        if dx > 0.0 || dy > 0.0 {
            return dx.hypot(dy);
        }
        (s.re - self.sigma_lo).min(self.sigma_hi - s.re).min(s.im - self.t_lo).min(self.t_hi - s.im)
    }

    /// Counter-clockwise edges: bottom, right, top, left.
    pub fn edges(&self) -> [(Complex64, Complex64); 4] {
        let a = Complex64::new(self.sigma_lo, self.t_lo);
        let b = Complex64::new(self.sigma_hi, self.t_lo);
        let c = Complex64::new(self.sigma_hi, self.t_hi);
        let d = Complex64::new(self.sigma_lo, self.t_hi);
        [(a, b), (b, c), (c, d), (d, a)]
    }

    /// The four cells obtained by cutting at fractions `fx` of the width and `fy` of the height.
    fn quadrants(&self, fx: f64, fy: f64) -> [Rectangle; 4] {
        let sm = self.sigma_lo + fx * self.width();
        let tm = self.t_lo + fy * self.height();
        [
            Rectangle { sigma_lo: self.sigma_lo, sigma_hi: sm, t_lo: self.t_lo, t_hi: tm },
            Rectangle { sigma_lo: sm, sigma_hi: self.sigma_hi, t_lo: self.t_lo, t_hi: tm },
            Rectangle { sigma_lo: self.sigma_lo, sigma_hi: sm, t_lo: tm, t_hi: self.t_hi },
            Rectangle { sigma_lo: sm, sigma_hi: self.sigma_hi, t_lo: tm, t_hi: self.t_hi },
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeroCountConfig {
    /// Smallest `|F|` tolerated on the contour.
    pub boundary_floor: f64,
    pub max_subdivision_depth: u32,
    /// Abscissa right of which `F` has no zeros.
    pub sigma0: f64,
    /// Initial node spacing along each edge.
    pub initial_step: f64,
    /// Left limit for rectangles (`1/2 + 1e-3` unless a caller opts into the strip).
    pub min_sigma: f64,
    /// Cell diameter at which zero refinement stops.
    pub refine_tol: f64,
    /// How many `+1e-6` nudges [`winding_count`] attempts before giving up.
    pub nudge_attempts: u32,
}

impl Default for ZeroCountConfig {
    fn default() -> Self {
        Self { boundary_floor: 1e-10, max_subdivision_depth: 40, sigma0: 2.5, initial_step: 0.1, min_sigma: 0.5 + 1e-3, refine_tol: 1e-8, nudge_attempts: 3 }
    }
}

impl ZeroCountConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.boundary_floor > 0.0) {
            return Err(Error::InvalidArgument("boundary_floor must be positive".into()));
        }
        if !(self.sigma0 > 1.0) {
            return Err(Error::InvalidArgument("sigma0 must exceed 1".into()));
        }
        if !(self.initial_step > 0.0 && self.refine_tol > 0.0) {
            return Err(Error::InvalidArgument("step sizes must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroCountReport {
    /// The rectangle actually used (after any nudges).
    pub rect: Rectangle,
    /// Zeros inside, with multiplicity.
    pub count: u64,
    /// Total argument change divided by `2π`, before rounding.
    pub raw_winding: f64,
    /// Argument change divided by `2π` along bottom, right, top and left edges.
    pub windings_per_edge: Vec<f64>,
    pub poles_inside: u32,
    pub refined_zeros: Option<Vec<Complex64>>,
    pub flags: Vec<String>,
    pub evaluations: usize,
}

struct Tracked {
    arg: f64,
    evaluations: usize,
}

fn checked_eval(f: &dyn AnalyticFunction, z: Complex64, floor: f64) -> Result<Complex64> {
    let v = f.eval(z)?;
    if !(v.norm() >= floor) {
        return Err(Error::ZeroNearBoundary(z));
    }
    Ok(v)
}

fn refine_segment(
    f: &dyn AnalyticFunction,
    (za, fa): (Complex64, Complex64),
    (zb, fb): (Complex64, Complex64),
    depth: u32,
    floor: f64,
    max_depth: u32,
) -> Result<Tracked> {
    let zm = (za + zb) * 0.5;
    let fm = checked_eval(f, zm, floor)?;
    let d1 = (fm / fa).arg();
    let d2 = (fb / fm).arg();
    let whole = (fb / fa).arg();
    if d1.abs() + d2.abs() < 0.5 * PI && (whole - d1 - d2).abs() < 1e-9 {
        return Ok(Tracked { arg: d1 + d2, evaluations: 1 });
    }
    if depth >= max_depth {
        return Err(Error::MaxDepthExceeded(zm));
    }
    let left = refine_segment(f, (za, fa), (zm, fm), depth + 1, floor, max_depth)?;
    let right = refine_segment(f, (zm, fm), (zb, fb), depth + 1, floor, max_depth)?;
    Ok(Tracked { arg: left.arg + right.arg, evaluations: 1 + left.evaluations + right.evaluations })
}

/// Continuous change of `arg f` from `a` to `b` along the segment.
fn edge_increment(f: &dyn AnalyticFunction, a: Complex64, b: Complex64, step: f64, floor: f64, max_depth: u32) -> Result<Tracked> {
    let n = (((b - a).norm() / step).ceil() as usize).max(4);
    let nodes: Vec<Complex64> = (0..=n).map(|k| a + (b - a) * (k as f64 / n as f64)).collect();
    let values = nodes.par_iter().map(|&z| checked_eval(f, z, floor)).collect::<Result<Vec<_>>>()?;
    let pieces = (0..n)
        .into_par_iter()
        .map(|k| refine_segment(f, (nodes[k], values[k]), (nodes[k + 1], values[k + 1]), 0, floor, max_depth))
        .collect::<Result<Vec<_>>>()?;
    let mut arg = 0.0;
    let mut evaluations = n + 1;
    for p in pieces {
        arg += p.arg;
        evaluations += p.evaluations;
    }
    Ok(Tracked { arg, evaluations })
}

fn pole_check(f: &dyn AnalyticFunction, rect: &Rectangle) -> Result<u32> {
    let mut inside = 0;
    for p in f.poles() {
        if rect.distance_to_boundary(p) < 1e-9 {
            return Err(Error::Pole(p));
        }
        if rect.contains(p) {
            inside += 1;
        }
    }
    Ok(inside)
}

fn contour_winding(f: &dyn AnalyticFunction, rect: &Rectangle, step: f64, floor: f64, max_depth: u32) -> Result<(i64, f64, Vec<f64>, usize)> {
    let tracked = rect.edges().par_iter().map(|&(a, b)| edge_increment(f, a, b, step, floor, max_depth)).collect::<Result<Vec<_>>>()?;
    let per_edge: Vec<f64> = tracked.iter().map(|t| t.arg / TAU).collect();
    let raw: f64 = per_edge.iter().sum();
    let evaluations = tracked.iter().map(|t| t.evaluations).sum();
    let rounded = raw.round();
    if (raw - rounded).abs() > 1e-6 {
        return Err(Error::InvalidArgument(format!("non-integral winding {raw}")));
    }
    Ok((rounded as i64, raw, per_edge, evaluations))
}

/// Zeros of `f` inside `rect` by the argument principle, without nudging.
pub fn count_zeros(f: &dyn AnalyticFunction, rect: &Rectangle, cfg: &ZeroCountConfig) -> Result<ZeroCountReport> {
    cfg.validate()?;
    let poles_inside = pole_check(f, rect)?;
    let (winding, raw, per_edge, evaluations) = contour_winding(f, rect, cfg.initial_step, cfg.boundary_floor, cfg.max_subdivision_depth)?;
    let count = winding + poles_inside as i64;
    if count < 0 {
        return Err(Error::InvalidArgument(format!("negative zero count {count}")));
    }
    let mut flags = Vec::new();
    if poles_inside > 0 {
        flags.push(format!("{poles_inside} pole(s) inside added back to the winding"));
    }
    Ok(ZeroCountReport {
        rect: *rect,
        count: count as u64,
        raw_winding: raw,
        windings_per_edge: per_edge,
        poles_inside,
        refined_zeros: None,
        flags,
        evaluations,
    })
}

/// [`count_zeros`] with deterministic `+1e-6` nudges of the edge that came too close to a zero.
pub fn count_zeros_nudged(f: &dyn AnalyticFunction, rect: &Rectangle, cfg: &ZeroCountConfig) -> Result<ZeroCountReport> {
    let mut r = *rect;
    let mut flags = Vec::new();
    let mut attempt = 0;
    loop {
        match count_zeros(f, &r, cfg) {
            Ok(mut rep) => {
                flags.append(&mut rep.flags);
                rep.flags = flags;
                return Ok(rep);
            }
            Err(Error::ZeroNearBoundary(z)) | Err(Error::MaxDepthExceeded(z)) if attempt < cfg.nudge_attempts => {
                attempt += 1;
                let edge = nearest_edge(&r, z);
                match edge {
                    0 => r.t_lo += 1e-6,
                    1 => r.sigma_hi += 1e-6,
                    2 => r.t_hi += 1e-6,
                    _ => r.sigma_lo += 1e-6,
                }
                flags.push(format!("zero near contour at {z}; nudged edge {edge} by 1e-6"));
            }
            Err(e) => return Err(e),
        }
    }
}

fn nearest_edge(r: &Rectangle, z: Complex64) -> usize {
    let d = [(z.im - r.t_lo).abs(), (z.re - r.sigma_hi).abs(), (z.im - r.t_hi).abs(), (z.re - r.sigma_lo).abs()];
    (0..4).min_by(|&a, &b| d[a].total_cmp(&d[b])).unwrap_or(0)
}

/// Zero count of a combination in `rect`.
pub fn winding_count(comb: &LinearCombination, rect: &Rectangle, cfg: &ZeroCountConfig) -> Result<ZeroCountReport> {
    if rect.sigma_lo < cfg.min_sigma {
        return Err(Error::InvalidArgument(format!("rectangle starts at sigma = {} left of the allowed {}", rect.sigma_lo, cfg.min_sigma)));
    }
    count_zeros_nudged(&comb.series(), rect, cfg)
}

/// Locates the zeros counted in `report` by recursive quadrisection.
///
/// Returns one approximation per zero (a multiple zero is repeated) and
/// appends warnings to the report flags.
pub fn refine_zeros(f: &dyn AnalyticFunction, report: &mut ZeroCountReport, cfg: &ZeroCountConfig) -> Result<Vec<Complex64>> {
    let mut out = Vec::new();
    let winding = report.count as i64 - report.poles_inside as i64;
    if report.poles_inside > 0 {
        return Err(Error::InvalidArgument("zero refinement inside a rectangle containing a pole".into()));
    }
    refine_cell(f, report.rect, winding, cfg, &mut out, &mut report.flags)?;
    out.sort_by(|a, b| a.im.total_cmp(&b.im).then(a.re.total_cmp(&b.re)));
    // A multiple zero sitting on a cut line ends up in neighbouring cells.
    for w in out.windows(2) {
        if (w[0] - w[1]).norm() < 10.0 * cfg.refine_tol {
            report.flags.push(format!("multiplicity suspected: zeros {} and {} coincide", w[0], w[1]));
        }
    }
    report.refined_zeros = Some(out.clone());
    Ok(out)
}

/// Zeros of a combination in `rect`, counted and refined.
pub fn locate_zeros(comb: &LinearCombination, rect: &Rectangle, cfg: &ZeroCountConfig) -> Result<ZeroCountReport> {
    let series = comb.series();
    let mut report = winding_count(comb, rect, cfg)?;
    refine_zeros(&series, &mut report, cfg)?;
    Ok(report)
}

const SPLITS: [f64; 5] = [0.5, 0.5123, 0.4871, 0.5347, 0.4619];

fn refine_cell(
    f: &dyn AnalyticFunction,
    cell: Rectangle,
    winding: i64,
    cfg: &ZeroCountConfig,
    out: &mut Vec<Complex64>,
    flags: &mut Vec<String>,
) -> Result<()> {
    if winding <= 0 {
        return Ok(());
    }
    if cell.diameter() < cfg.refine_tol {
        if winding >= 2 {
            flags.push(format!("multiplicity {winding} suspected near {}", cell.center()));
        }
        for _ in 0..winding {
            out.push(cell.center());
        }
        return Ok(());
    }
    for &frac in &SPLITS {
        let quads = cell.quadrants(frac, frac);
        let step = cfg.initial_step.min(0.25 * cell.width().max(cell.height()));
        let counts: Result<Vec<i64>> = quads.iter().map(|q| contour_winding(f, q, step, f64::MIN_POSITIVE, cfg.max_subdivision_depth).map(|w| w.0)).collect();
        match counts {
            Ok(c) if c.iter().sum::<i64>() == winding && c.iter().all(|&w| w >= 0) => {
                for (q, w) in quads.into_iter().zip(c) {
                    refine_cell(f, q, w, cfg, out, flags)?;
                }
                return Ok(());
            }
            _ => continue,
        }
    }
    flags.push(format!("could not resolve {winding} zero(s) in cell of diameter {:.3e} near {}", cell.diameter(), cell.center()));
    for _ in 0..winding {
        out.push(cell.center());
    }
    Ok(())
}

/// Left side of Littlewood's identity: `∫_σ^{σ0} N_F(u, T) du` over the window `[T, 2T]`.
#[derive(Debug, Clone, Serialize)]
pub struct LittlewoodLhs {
    pub value: f64,
    /// `Σ_ρ (Re ρ - σ)` over the located zeros.
    pub breakpoint_sum: f64,
    pub zeros: Vec<Complex64>,
    /// `(u_lo, u_hi, N_F(midpoint))` for each piece between breakpoints.
    pub pieces: Vec<(f64, f64, u64)>,
    pub flags: Vec<String>,
}

pub fn littlewood_lhs(comb: &LinearCombination, sigma: f64, cfg: &ZeroCountConfig, t: f64, quad_tol: f64) -> Result<LittlewoodLhs> {
    if !(sigma > 0.5 && sigma < cfg.sigma0) {
        return Err(Error::InvalidArgument(format!("sigma must lie in (1/2, sigma0), got {sigma}")));
    }
    let rect = Rectangle::new(sigma, cfg.sigma0, t, 2.0 * t)?;
    let report = locate_zeros(comb, &rect, cfg)?;
    let zeros = report.refined_zeros.clone().unwrap_or_default();
    let mut flags = report.flags.clone();
    let breakpoint_sum: f64 = zeros.iter().map(|z| (z.re - sigma).max(0.0)).sum();

    let mut cuts: Vec<f64> = zeros.iter().map(|z| z.re).filter(|&x| x > sigma && x < cfg.sigma0).collect();
    cuts.push(sigma);
    cuts.push(cfg.sigma0);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|a, b| (*a - *b).abs() < quad_tol.max(1e-12));

    let series = comb.series();
    let mut value = 0.0;
    let mut pieces = Vec::new();
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let mid = 0.5 * (lo + hi);
        let sub = Rectangle::new(mid, cfg.sigma0, t, 2.0 * t)?;
        let rep = count_zeros_nudged(&series, &sub, cfg)?;
        flags.extend(rep.flags);
        value += (hi - lo) * rep.count as f64;
        pieces.push((lo, hi, rep.count));
    }
    Ok(LittlewoodLhs { value, breakpoint_sum, zeros, pieces, flags })
}

/// Right side of Littlewood's identity without the horizontal boundary terms.
#[derive(Debug, Clone, Serialize)]
pub struct LittlewoodRhs {
    pub value: f64,
    /// `(1/2π) ∫_T^{2T} log|F(σ + it)| dt`.
    pub log_integral_sigma: f64,
    /// `(1/2π) ∫_T^{2T} log|F(σ0 + it)| dt`.
    pub log_integral_sigma0: f64,
    /// `(T/2π)(σ - σ0) log n0`.
    pub n0_term: f64,
    /// Horizontal boundary terms `(1/2π)(∫ arg F̃(u + 2iT) du - ∫ arg F̃(u + iT) du)`
    /// with `F̃ = F n0^s / a(n0)`; adding them makes the identity exact.
    pub horizontal_arg_term: Option<f64>,
}

/// Near-zeros of `|F|` on the vertical line, by a grid scan and golden-section polish.
fn near_zeros_on_line(series: &PeriodicSeries, sigma: f64, t_lo: f64, t_hi: f64, threshold: f64) -> Result<Vec<f64>> {
    let h = 0.02;
    let n = ((t_hi - t_lo) / h).ceil() as usize;
    let vals = series.eval_grid(sigma, t_lo, (t_hi - t_lo) / n as f64, n + 1, EVAL_PRECISION)?;
    let ts: Vec<f64> = (0..=n).map(|k| t_lo + k as f64 * (t_hi - t_lo) / n as f64).collect();
    let mut out = Vec::new();
    for k in 1..n {
        let (a, b, c) = (vals[k - 1].norm(), vals[k].norm(), vals[k + 1].norm());
        if b <= a && b <= c && b < 100.0 * threshold.max(1e-3) {
            let m = |t: f64| series.eval(Complex64::new(sigma, t), EVAL_PRECISION).map(|v| v.norm());
            let (mut lo, mut hi) = (ts[k - 1], ts[k + 1]);
            let g = 0.5 * (5f64.sqrt() - 1.0);
            let mut x1 = hi - g * (hi - lo);
            let mut x2 = lo + g * (hi - lo);
            let mut f1 = m(x1)?;
            let mut f2 = m(x2)?;
            for _ in 0..60 {
                if f1 < f2 {
                    hi = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = hi - g * (hi - lo);
                    f1 = m(x1)?;
                } else {
                    lo = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = lo + g * (hi - lo);
                    f2 = m(x2)?;
                }
            }
            if f1.min(f2) < threshold {
                out.push(0.5 * (lo + hi));
            }
        }
    }
    Ok(out)
}

/// `∫_{t_lo}^{t_hi} log|F(σ + it)| dt`, splitting at near-zeros and using
/// tanh-sinh on the pieces that touch them.
pub fn log_modulus_integral(series: &PeriodicSeries, sigma: f64, t_lo: f64, t_hi: f64, quad_tol: f64) -> Result<f64> {
    let singular = near_zeros_on_line(series, sigma, t_lo, t_hi, 1e-3)?;
    let mut cuts: Vec<f64> = (0..=((t_hi - t_lo).ceil() as usize)).map(|k| (t_lo + k as f64).min(t_hi)).collect();
    cuts.extend(singular.iter().copied());
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    let near = |x: f64| singular.iter().any(|&s| (s - x).abs() < 1e-12);
    let f = |t: f64| series.eval(Complex64::new(sigma, t), EVAL_PRECISION).map(|v| v.norm().ln());
    let n_pieces = (cuts.len() - 1) as f64;
    let mut total = 0.0;
    for w in cuts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let tol = quad_tol / n_pieces;
        let piece = if near(a) || near(b) { integrate_tanh_sinh(f, a, b, tol, 12)?.value } else { integrate_gk(f, &[a, b], tol, 1e-12, 2000)?.value };
        total += piece;
    }
    Ok(total)
}

/// `∫_σ^{σ0} arg F̃(u + it) du` with the argument continued leftwards from `σ0`.
fn horizontal_arg_integral(series: &PeriodicSeries, n0: u64, a0: Complex64, sigma: f64, sigma0: f64, t: f64) -> Result<f64> {
    let norm = |u: f64| -> Result<Complex64> {
        let s = Complex64::new(u, t);
        Ok(series.eval(s, EVAL_PRECISION)? * (s * (n0 as f64).ln()).exp() / a0)
    };
    let h = 1e-3;
    let n = ((sigma0 - sigma) / h).ceil() as usize;
    let us: Vec<f64> = (0..=n).map(|k| sigma0 - (sigma0 - sigma) * k as f64 / n as f64).collect();
    let vals = us.par_iter().map(|&u| norm(u)).collect::<Result<Vec<_>>>()?;
    let mut args = Vec::with_capacity(n + 1);
    let mut arg = vals[0].arg();
    args.push(arg);
    for k in 1..=n {
        let mut prev = vals[k - 1];
        let steps = 16;
        let ratio = vals[k] / prev;
        if (ratio - 1.0).norm() < 0.5 {
            arg += ratio.arg();
        } else {
            for j in 1..=steps {
                let u = us[k - 1] + (us[k] - us[k - 1]) * j as f64 / steps as f64;
                let v = norm(u)?;
                arg += (v / prev).arg();
                prev = v;
            }
        }
        args.push(arg);
    }
    let step = (sigma0 - sigma) / n as f64;
    let inner: f64 = args[1..n].iter().sum();
    Ok(step * (inner + 0.5 * (args[0] + args[n])))
}

pub fn littlewood_rhs(comb: &LinearCombination, sigma: f64, cfg: &ZeroCountConfig, t: f64, quad_tol: f64, with_arg_terms: bool) -> Result<LittlewoodRhs> {
    if !(sigma > 0.5 && sigma <= cfg.sigma0) {
        return Err(Error::InvalidArgument(format!("sigma must lie in (1/2, sigma0], got {sigma}")));
    }
    let series = comb.series();
    let n0 = comb.n0();
    let log_integral_sigma = log_modulus_integral(&series, sigma, t, 2.0 * t, quad_tol)? / TAU;
    let log_integral_sigma0 = if sigma == cfg.sigma0 { log_integral_sigma } else { log_modulus_integral(&series, cfg.sigma0, t, 2.0 * t, quad_tol)? / TAU };
    let n0_term = t / TAU * (sigma - cfg.sigma0) * (n0 as f64).ln();
    let horizontal_arg_term = if with_arg_terms && sigma < cfg.sigma0 {
        let a0 = comb.leading_coeff();
        let top = horizontal_arg_integral(&series, n0, a0, sigma, cfg.sigma0, 2.0 * t)?;
        let bottom = horizontal_arg_integral(&series, n0, a0, sigma, cfg.sigma0, t)?;
        Some((top - bottom) / TAU)
    } else if with_arg_terms {
        Some(0.0)
    } else {
        None
    };
    Ok(LittlewoodRhs { value: log_integral_sigma - log_integral_sigma0 + n0_term, log_integral_sigma, log_integral_sigma0, n0_term, horizontal_arg_term })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NfPoint {
    pub g: f64,
    pub sigma: f64,
    pub count: u64,
}

/// `N_F(1/2 + 1/G, T)`: zeros in `[1/2 + 1/G, σ0] × [T, 2T]` for each `G`.
pub fn empirical_nf_curve(comb: &LinearCombination, g_values: &[f64], t: f64, cfg: &ZeroCountConfig) -> Result<Vec<NfPoint>> {
    let mut out = Vec::with_capacity(g_values.len());
    for &g in g_values {
        let sigma = 0.5 + 1.0 / g;
        if sigma <= 0.5 + 1e-3 {
            return Err(Error::InvalidArgument(format!("G = {g} puts sigma too close to 1/2")));
        }
        let count = if sigma >= cfg.sigma0 {
            0
        } else {
            let rect = Rectangle::new(sigma, cfg.sigma0, t, 2.0 * t)?;
            winding_count(comb, &rect, cfg)?.count
        };
        out.push(NfPoint { g, sigma, count });
    }
    Ok(out)
}

/// Smallest abscissa (on a 1e-3 grid) right of which `|a(n0)| n0^{-σ}` dominates
/// `Σ_{n ≠ n0} |a(n)| n^{-σ}`; a heuristic upper bound for the real parts of zeros.
pub fn dominance_abscissa(comb: &LinearCombination) -> Result<f64> {
    let n0 = comb.n0();
    let lead = comb.leading_coeff().norm();
    let total_weight: f64 = comb.weights().iter().map(|w| w.abs()).sum();
    let zeta = PeriodicSeries::zeta();
    let rest = |sigma: f64| -> Result<f64> {
        // tail bound Σ_{n > N} |a(n)| n^{-σ} ≤ Σ|b_j| (ζ(σ) - Σ_{n ≤ N} n^{-σ})
        let cut = 10 * n0 + 100;
        let head: f64 = (1..=cut).filter(|&n| n != n0).map(|n| comb.dirichlet_coeff(n).norm() * (n as f64).powf(-sigma)).sum();
        let partial: f64 = (1..=cut).map(|n| (n as f64).powf(-sigma)).sum();
        let z = zeta.eval(Complex64::new(sigma, 0.0), 1e-13)?.re;
        Ok(head + total_weight * (z - partial).max(0.0))
    };
    let dominates = |sigma: f64| -> Result<bool> { Ok(lead * (n0 as f64).powf(-sigma) > rest(sigma)?) };
    let mut hi = 2.0;
    while !dominates(hi)? {
        hi *= 2.0;
        if hi > 1e3 {
            return Err(Error::InvalidArgument("no dominance abscissa found".into()));
        }
    }
    let mut lo = 1.0 + 1e-9;
    if dominates(lo)? {
        return Ok(lo);
    }
    while hi - lo > 1e-3 {
        let mid = 0.5 * (lo + hi);
        if dominates(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Roots(Vec<Complex64>);

    impl AnalyticFunction for Roots {
        fn eval(&self, s: Complex64) -> Result<Complex64> {
            Ok(self.0.iter().map(|r| s - r).product())
        }
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn linear_zero_counted() {
        let f = Roots(vec![c(0.7, 10.0)]);
        let rect = Rectangle::new(0.6, 0.8, 9.0, 11.0).unwrap();
        let rep = count_zeros(&f, &rect, &ZeroCountConfig::default()).unwrap();
        assert_eq!(rep.count, 1);
        assert!((rep.raw_winding - 1.0).abs() < 1e-9);
    }

    #[test]
    fn two_roots_refined() {
        let f = Roots(vec![c(0.7, 5.0), c(0.8, 7.0)]);
        let rect = Rectangle::new(0.55, 1.3, 4.0, 8.0).unwrap();
        let cfg = ZeroCountConfig::default();
        let mut rep = count_zeros(&f, &rect, &cfg).unwrap();
        assert_eq!(rep.count, 2);
        let zs = refine_zeros(&f, &mut rep, &cfg).unwrap();
        assert!((zs[0] - c(0.7, 5.0)).norm() < 1e-7);
        assert!((zs[1] - c(0.8, 7.0)).norm() < 1e-7);
    }

    #[test]
    fn double_root_flagged() {
        let f = Roots(vec![c(0.7, 5.0), c(0.7, 5.0)]);
        let rect = Rectangle::new(0.6, 0.9, 4.3, 5.9).unwrap();
        let cfg = ZeroCountConfig::default();
        let mut rep = count_zeros(&f, &rect, &cfg).unwrap();
        assert_eq!(rep.count, 2);
        let zs = refine_zeros(&f, &mut rep, &cfg).unwrap();
        assert_eq!(zs.len(), 2);
        assert!(rep.flags.iter().any(|m| m.contains("multiplicity")), "{:?} {:?}", rep.flags, zs);
    }

    #[test]
    fn empty_rect_refines_to_nothing() {
        let f = Roots(vec![c(0.7, 50.0)]);
        let rect = Rectangle::new(0.6, 0.8, 9.0, 11.0).unwrap();
        let cfg = ZeroCountConfig::default();
        let mut rep = count_zeros(&f, &rect, &cfg).unwrap();
        assert_eq!(rep.count, 0);
        assert!(refine_zeros(&f, &mut rep, &cfg).unwrap().is_empty());
    }

    #[test]
    fn zero_on_contour_is_reported_and_nudged() {
        let f = Roots(vec![c(0.7, 10.0)]);
        let rect = Rectangle::new(0.6, 0.8, 10.0, 11.0).unwrap();
        let cfg = ZeroCountConfig::default();
        assert!(matches!(count_zeros(&f, &rect, &cfg), Err(Error::ZeroNearBoundary(_)) | Err(Error::MaxDepthExceeded(_))));
        let rep = count_zeros_nudged(&f, &rect, &cfg).unwrap();
        assert_eq!(rep.count, 0);
        assert!(!rep.flags.is_empty());
    }

    #[test]
    fn zeta_pole_accounted() {
        let z = PeriodicSeries::zeta();
        let rect = Rectangle::new(0.6, 1.5, -1.0, 1.0).unwrap();
        let rep = count_zeros(&z, &rect, &ZeroCountConfig::default()).unwrap();
        assert_eq!(rep.poles_inside, 1);
        assert_eq!(rep.count, 0);
    }

    #[test]
    fn rectangle_validation() {
        assert!(Rectangle::new(1.0, 0.5, 0.0, 1.0).is_err());
        assert!(Rectangle::new(0.5, 1.0, 2.0, 2.0).is_err());
    }
}
