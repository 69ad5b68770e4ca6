//! Experiment implementations. Each produces a typed data record (serialised
//! into the JSON artifact), an optional CSV table and a list of checks.

use std::f64::consts::TAU;
use std::time::Instant;

use lflab::cache::{CacheStatus, TableCache};
use lflab::character::DirichletCharacter;
use lflab::density::{self, DensityGridSpec, FourierPoint, K0Budget, K0Method};
use lflab::discrepancy::{self, BSWindow, RectFamily};
use lflab::lfunc::{selberg_sum, LFunctionSpec, LinearCombination};
use lflab::primes::PrimeTable;
use lflab::random_model::{self, MCConfig, McEstimate, Truncation};
use lflab::stats::Proportion;
use lflab::zeros::{self, NfPoint, Rectangle, ZeroCountConfig};
use lflab::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::artifacts::{num, CacheRecord, Check, Table, Timing};
use crate::config::*;
use crate::CliError;

/// Per-run state: seed, worker count, cache usage and timings.
pub struct Ctx {
    pub seed: u64,
    pub workers: Option<usize>,
    pub caches: Vec<CacheRecord>,
    pub timings: Vec<Timing>,
    cache: TableCache,
}

impl Ctx {
    pub fn new(seed: u64, workers: Option<usize>) -> Self {
        Self { seed, workers, caches: Vec::new(), timings: Vec::new(), cache: TableCache::from_env() }
    }

    pub fn cache_dir(&self) -> Option<String> {
        (!self.caches.is_empty()).then(|| self.cache.dir().display().to_string())
    }

    fn timed<T>(&mut self, operation: &str, f: impl FnOnce() -> Result<T, CliError>) -> Result<T, CliError> {
        let start = Instant::now();
        let out = f()?;
        self.timings.push(Timing { operation: operation.to_string(), seconds: start.elapsed().as_secs_f64() });
        Ok(out)
    }

    fn record(&mut self, kind: &str, params: String, status: Option<CacheStatus>) {
        let status = status.map(|s| format!("{s:?}").to_lowercase()).unwrap_or_else(|| "unavailable".into());
        self.caches.push(CacheRecord { kind: kind.into(), key: TableCache::key(kind, &params), status });
    }

    /// Cached prime table; cache failures fall back to an in-memory sieve.
    fn prime_table(&mut self, limit: u64) -> PrimeTable {
        match self.cache.prime_table(limit) {
            Ok((t, s)) => {
                self.record("primes", format!("limit={limit}"), Some(s));
                t
            }
            Err(e) => {
                eprintln!("lflab: warning: {e}; continuing without the cache");
                self.record("primes", format!("limit={limit}"), None);
                PrimeTable::new(limit)
            }
        }
    }

    fn characters(&mut self, q: u64) -> Vec<DirichletCharacter> {
        match self.cache.characters(q) {
            Ok((c, s)) => {
                self.record("characters", format!("q={q}"), Some(s));
                c
            }
            Err(e) => {
                eprintln!("lflab: warning: {e}; continuing without the cache");
                self.record("characters", format!("q={q}"), None);
                DirichletCharacter::all(q)
            }
        }
    }

    fn mc(&self, args: &McArgs, sigma: f64) -> MCConfig {
        args.config(sigma, self.seed, self.workers)
    }
}

/// Everything an experiment hands back to the artifact writer.
pub struct Output {
    pub data: Value,
    pub table: Option<Table>,
    pub checks: Vec<Check>,
}

fn output<T: Serialize>(data: &T, table: Option<Table>, checks: Vec<Check>) -> Result<Output, CliError> {
    let data = serde_json::to_value(data).map_err(|e| CliError::Io(e.to_string()))?;
    Ok(Output { data, table, checks })
}

pub fn compute(exp: &Experiment, ctx: &mut Ctx) -> Result<Output, CliError> {
    match exp {
        Experiment::CountZeros(a) => count_zeros(a, ctx),
        Experiment::NfCurve(a) => nf_curve(a, ctx),
        Experiment::McExpect(a) => mc_expect(a, ctx),
        Experiment::McIncrement(a) => mc_increment(a, ctx),
        Experiment::McTail(a) => mc_tail(a, ctx),
        Experiment::McConcentration(a) => mc_concentration(a, ctx),
        Experiment::K0(a) => k0(a, ctx),
        Experiment::Density(a) => density_grid(a, ctx),
        Experiment::Charfn(a) => charfn(a, ctx),
        Experiment::Discrepancy(a) => discrepancy_ladder(a, ctx),
        Experiment::BsCheck(a) => bs_check(a, ctx),
        Experiment::TailCdf(a) => tail_cdf(a, ctx),
        Experiment::SelbergCheck(a) => selberg_check(a, ctx),
        Experiment::LittlewoodCheck(a) => littlewood_check(a, ctx),
    }
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

// ---------------------------------------------------------------- count-zeros

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountZerosData {
    pub sigma_lo: f64,
    pub sigma_hi: f64,
    pub t_lo: f64,
    pub t_hi: f64,
    pub count: u64,
    pub raw_winding: f64,
    pub windings_per_edge: Vec<f64>,
    pub poles_inside: u32,
    pub zeros: Option<Vec<[f64; 2]>>,
    pub flags: Vec<String>,
    pub evaluations: usize,
}

impl CountZerosData {
    pub fn table(&self) -> Table {
        let mut t = Table::new(&["sigma_lo", "sigma_hi", "t_lo", "t_hi", "count", "flags"]);
        t.push(vec![num(self.sigma_lo), num(self.sigma_hi), num(self.t_lo), num(self.t_hi), self.count.to_string(), self.flags.join("; ")]);
        t
    }
}

fn count_zeros(a: &CountZerosArgs, ctx: &mut Ctx) -> Result<Output, CliError> {
    let comb = a.combination.build()?;
    let degenerate = a.sigma_lo == a.sigma_hi || a.t_lo == a.t_hi;
    let data = if degenerate {
        CountZerosData {
            sigma_lo: a.sigma_lo,
            sigma_hi: a.sigma_hi,
            t_lo: a.t_lo,
            t_hi: a.t_hi,
            count: 0,
            raw_winding: 0.0,
            windings_per_edge: Vec::new(),
            poles_inside: 0,
            zeros: None,
            flags: vec!["degenerate rectangle: empty interior".into()],
            evaluations: 0,
        }
    } else {
        let rect = Rectangle::new(a.sigma_lo, a.sigma_hi, a.t_lo, a.t_hi)?;
        let cfg = ZeroCountConfig { boundary_floor: a.boundary_floor, ..ZeroCountConfig::default() };
        let report =
            ctx.timed("count_zeros", || Ok(if a.refine { zeros::locate_zeros(&comb, &rect, &cfg)? } else { zeros::winding_count(&comb, &rect, &cfg)? }))?;
        CountZerosData {
            sigma_lo: report.rect.sigma_lo,
            sigma_hi: report.rect.sigma_hi,
            t_lo: report.rect.t_lo,
            t_hi: report.rect.t_hi,
            count: report.count,
            raw_winding: report.raw_winding,
            windings_per_edge: report.windings_per_edge.clone(),
            poles_inside: report.poles_inside,
            zeros: report.refined_zeros.as_ref().map(|z| z.iter().copied().map(pair).collect()),
            flags: report.flags.clone(),
            evaluations: report.evaluations,
        }
    };
    let dist = (data.raw_winding - data.count as f64 + data.poles_inside as f64).abs();
    let checks = vec![Check::new("integral winding", dist < 1e-6, format!("|winding - round(winding)| = {dist:.1e}"))];
    output(&data, Some(data.table()), checks)
}

// ---------------------------------------------------------------- nf-curve

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NfCurveData {
    pub t: f64,
    pub sigma0: f64,
    pub points: Vec<NfPoint>,
}

impl NfCurveData {
    pub fn table(&self) -> Table {
        let mut t = Table::new(&["G", "sigma", "count"]);
        for p in &self.points {
            t.push(vec![num(p.g), num(p.sigma), p.count.to_string()]);
        }
        t
    }
}

fn nf_curve(a: &NfCurveArgs, ctx: &mut Ctx) -> Result<Output, CliError> {
    let comb = a.combination.build()?;
    let cfg = ZeroCountConfig::default();
    let points = ctx.timed("empirical_nf_curve", || Ok(zeros::empirical_nf_curve(&comb, &a.g, a.t, &cfg)?))?;
    let data = NfCurveData { t: a.t, sigma0: cfg.sigma0, points };
    // Larger G moves the left edge towards 1/2, so counts cannot decrease.
    let mut sorted = data.points.clone();
    sorted.sort_by(|x, y| x.g.total_cmp(&y.g));
    let monotone = sorted.windows(2).all(|w| w[0].count <= w[1].count);
    let checks = vec![Check::new("monotone in G", monotone, "N_F(1/2 + 1/G, T) nondecreasing in G".into())];
    output(&data, Some(data.table()), checks)
}

// ---------------------------------------------------------------- Monte Carlo

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateData {
    pub mean: f64,
    pub std_error: f64,
    pub n_kept: usize,
    pub rejected: usize,
    pub quantiles: Vec<(f64, f64)>,
}

impl From<&McEstimate> for EstimateData {
    fn from(e: &McEstimate) -> Self {
        Self { mean: e.stats.mean, std_error: e.stats.std_error, n_kept: e.stats.n, rejected: e.rejected, quantiles: e.stats.quantiles.clone() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McSetup {
    pub samples: usize,
    pub y: f64,
    pub truncation: Truncation,
    pub antithetic: bool,
    pub seed: u64,
}

impl From<&MCConfig> for McSetup {
    fn from(c: &MCConfig) -> Self {
        Self { samples: c.n_samples, y: c.y, truncation: c.truncation, antithetic: c.antithetic, seed: c.seed }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McExpectData {
    pub sigma: f64,
    pub setup: McSetup,
    pub estimate: EstimateData,
}

impl McExpectData {
    pub fn table(&self) -> Table {
        let mut t = Table::new(&["sigma", "mean", "std_error", "n"]);
        t.push(vec![num(self.sigma), num(self.estimate.mean), num(self.estimate.std_error), self.estimate.n_kept.to_string()]);
        t
    }
}

fn mc_expect(a: &McExpectArgs, ctx: &mut Ctx) -> Result<Output, CliError> {
    let comb = a.combination.build()?;
    let cfg = ctx.mc(&a.mc, a.sigma);
    let est = ctx.timed("mc_expect_log_f", || Ok(random_model::mc_expect_log_f(&comb, a.sigma, &cfg)?))?;
    let data = McExpectData { sigma: a.sigma, setup: (&cfg).into(), estimate: (&est).into() };
    let finite = data.estimate.mean.is_finite() && data.estimate.std_error.is_finite();
    output(&data, None, vec![Check::new("finite estimate", finite, format!("{} ± {}", data.estimate.mean, data.estimate.std_error))])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McIncrementData {
    pub g: f64,
    pub sigma: f64,
    pub sigma_i: [f64; 2],
    pub setup: McSetup,
    pub k0: f64,
    /// `2π K0 / (log G)^{3/2}`.
    pub theory: f64,
    pub increments: [EstimateData; 2],
}

impl McIncrementData {
    pub fn table(&self) -> Table {
        let mut t = Table::new(&["series", "G", "sigma_i", "mean", "std_error", "theory"]);
        for (i, e) in self.increments.iter().enumerate() {
            t.push(vec![format!("i{}", i + 1), num(self.g), num(self.sigma_i[i]), num(e.mean), num(e.std_error), num(self.theory)]);
        }
        t
    }
}

fn mc_increment(a: &McIncrementArgs, ctx: &mut Ctx) -> Result<Output, CliError> {
    let comb = a.combination.build()?;
    let (sigma, _) = random_model::increment_abscissas(a.g);
    let cfg = ctx.mc(&a.mc, sigma);
    let inc = ctx.timed("coupled_increment", || Ok(random_model::coupled_increment(&comb, a.g, &cfg)?))?;
    let k0 = ctx.timed("compute_k0", || Ok(density::compute_k0(&comb.xi(), K0Method::Quadrature, &K0Budget::default())?.value))?;
    let data = McIncrementData {
        g: a.g,
        sigma: inc.sigma,
        sigma_i: inc.sigma_i,
        setup: (&cfg).into(),
        k0,
        theory: TAU * k0 / a.g.ln().powf(1.5),
        increments: [(&inc.estimates[0]).into(), (&inc.estimates[1]).into()],
    };
    let [i1, i2] = &data.increments;
    let detail = format!("i1 {:.5} ± {:.5}, i2 {:.5} ± {:.5}, theory {:.5}", i1.mean, i1.std_error, i2.mean, i2.std_error, data.theory);
    // A single L-function has M(σ) = 0 identically, so there is no sign to test.
    let checks = if comb.len() >= 2 {
        let signs = i1.mean + 1.96 * i1.std_error < 0.0 && i2.mean - 1.96 * i2.std_error > 0.0;
        vec![Check::new("increment signs", signs, detail)]
    } else {
        vec![Check::new("increment signs", true, format!("skipped for a single member; {detail}"))]
    };
    output(&data, None, checks)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProportionRow {
    pub param: f64,
    pub estimate: f64,
    pub lower: f64,
    pub upper: f64,
    pub hits: usize,
    pub n: usize,
}

impl ProportionRow {
    fn new(param: f64, p: &Proportion) -> Self {
        Self { param, estimate: p.estimate, lower: p.lower, upper: p.upper, hits: p.hits, n: p.n }
    }
}

fn proportion_table(param: &str, rows: &[ProportionRow]) -> Table {
    let mut t = Table::new(&[param, "probability", "lower", "upper"]);
    for r in rows {
        t.push(vec![num(r.param), num(r.estimate), num(r.lower), num(r.upper)]);
    }
    t
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McTailData {
    pub member: String,
    pub sigma: f64,
    pub setup: McSetup,
    pub rows: Vec<ProportionRow>,
}

impl McTailData {
    pub fn table(&self) -> Table {
        proportion_table("tau", &self.rows)
    }
}

fn mc_tail(a: &McTailArgs, ctx: &mut Ctx) -> Result<Output, CliError> {
    let spec = parse_member(&a.member)?;
    let cfg = ctx.mc(&a.mc, a.sigma);
    let probs = ctx.timed("tail_probs", || Ok(random_model::tail_probs(&spec, a.sigma, &a.taus, &cfg)?))?;
    let rows: Vec<ProportionRow> = a.taus.iter().zip(&probs).map(|(&t, p)| ProportionRow::new(t, p)).collect();
    let data = McTailData { member: spec.label().to_string(), sigma: a.sigma, setup: (&cfg).into(), rows };
    let mut sorted = data.rows.clone();
    sorted.sort_by(|x, y| x.param.total_cmp(&y.param));
    let monotone = sorted.windows(2).all(|w| w[0].estimate >= w[1].estimate);
    let checks = vec![Check::new("tail monotone", monotone, "P(|log L| > tau) nonincreasing in tau".into())];
    output(&data, Some(data.table()), checks)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McConcentrationData {
    pub sigma: f64,
    pub m: f64,
    pub r: f64,
    pub setup: McSetup,
    pub rows: Vec<ProportionRow>,
}

impl McConcentrationData {
    pub fn table(&self) -> Table {
        proportion_table("eps", &self.rows)
    }
}

fn mc_concentration(a: &McConcentrationArgs, ctx: &mut Ctx) -> Result<Output, CliError> {
    let comb = a.combination.build()?;
    let cfg = ctx.mc(&a.mc, a.sigma);
    let rows = ctx.timed("concentration_prob", || {
        a.eps
            .iter()
            .map(|&eps| Ok(ProportionRow::new(eps, &random_model::concentration_prob(&comb, a.sigma, a.m, a.r, eps, &cfg)?)))
            .collect::<Result<Vec<_>, CliError>>()
    })?;
    let data = McConcentrationData { sigma: a.sigma, m: a.m, r: a.r, setup: (&cfg).into(), rows };
    let mut sorted = data.rows.clone();
    sorted.sort_by(|x, y| x.param.total_cmp(&y.param));
    let monotone = sorted.windows(2).all(|w| w[0].estimate <= w[1].estimate);
    let checks = vec![Check::new("nested annuli", monotone, "probability nondecreasing in eps".into())];
    output(&data, Some(data.table()), checks)
}

// ---------------------------------------------------------------- k0

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct K0Data {
    pub j: usize,
    pub xi: Vec<f64>,
    pub method: K0Method,
    pub value: f64,
    pub abs_error_estimate: f64,
    pub closed_form: Option<f64>,
    pub per_region: Vec<(f64, f64)>,
}

impl K0Data {
    pub fn table(&self) -> Table {
        let mut t = Table::new(&["series", "J", "value", "abs_error"]);
        let method = match self.method {
            K0Method::Quadrature => "quadrature",
            K0Method::MonteCarlo => "monte-carlo",
        };
        t.push(vec![method.into(), self.j.to_string(), num(self.value), num(self.abs_error_estimate)]);
        if let Some(c) = self.closed_form {
            t.push(vec!["closed-form".into(), self.j.to_string(), num(c), "0".into()]);
        }
        t
    }
}

fn k0(a: &K0Args, ctx: &mut Ctx) -> Result<Output, CliError> {
    let xi = a.xi_vector()?;
    let method = match a.method {
        K0MethodArg::Quadrature => K0Method::Quadrature,
        K0MethodArg::MonteCarlo => K0Method::MonteCarlo,
    };
    let budget = K0Budget { samples: a.samples, target_abs_error: a.target_error, seed: ctx.seed, workers: ctx.workers };
    let res = ctx.timed("compute_k0", || Ok(density::compute_k0(&xi, method, &budget)?))?;
    let closed_form = (xi.len() == 2).then(|| density::k0_two_member_closed_form(xi[0], xi[1]));
    let data = K0Data { j: res.j, xi: res.xi, method, value: res.value, abs_error_estimate: res.abs_error_estimate, closed_form, per_region: res.per_region };
    let checks = match closed_form {
        Some(c) => {
            let tol = if method == K0Method::MonteCarlo { (3.0 * data.abs_error_estimate).max(1e-4) } else { 1e-4 };
            let diff = (data.value - c).abs();
            vec![Check::new("closed form", diff <= tol, format!("|K0 - closed form| = {diff:.2e} (tolerance {tol:.1e})"))]
        }
        None => vec![Check::new(
            "error budget",
            data.abs_error_estimate <= a.target_error,
            format!("error estimate {:.2e}, target {:.1e}", data.abs_error_estimate, a.target_error),
        )],
    };
    output(&data, Some(data.table()), checks)
}

// ---------------------------------------------------------------- density and characteristic function

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityData {
    pub sigma: f64,
    pub members: Vec<String>,
    pub dims: usize,
    pub points: usize,
    pub half_width: f64,
    pub spacing: f64,
    pub cell_average: bool,
    pub prime_cutoff: u64,
    pub mass: f64,
    pub min_value: f64,
    pub max_value: f64,
    pub freq_extent: f64,
    pub freq_step: f64,
    pub max_imag_residue: f64,
    pub boundary_modulus: f64,
}

pub fn density_header(dims: usize) -> Vec<String> {
    let mut h: Vec<String> = if dims == 2 { vec!["u".into(), "v".into()] } else { (1..=dims / 2).flat_map(|j| [format!("u{j}"), format!("v{j}")]).collect() };
    h.push("H".into());
    h
}

fn density_grid(a: &DensityArgs, ctx: &mut Ctx) -> Result<Output, CliError> {
    let comb = a.combination.build()?;
    let spec = DensityGridSpec { half_width: a.half_width, points: a.points, cell_average: a.cell_average, freq_extent: None };
    let grid = ctx.timed("invert_density", || Ok(density::invert_density(comb.members(), a.sigma, &spec, a.cutoff)?))?;
    let mut table = Table { header: density_header(grid.dims), rows: Vec::with_capacity(grid.values.len()) };
    let n = grid.axis.len();
    for (flat, &h) in grid.values.iter().enumerate() {
        let mut row = Vec::with_capacity(grid.dims + 1);
        let mut rem = flat;
        let mut idx = vec![0; grid.dims];
        for d in (0..grid.dims).rev() {
            idx[d] = rem % n;
            rem /= n;
        }
        row.extend(idx.iter().map(|&i| num(grid.axis[i])));
        row.push(num(h));
        table.rows.push(row);
    }
    let max_value = grid.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let data = DensityData {
        sigma: a.sigma,
        members: comb.members().iter().map(|s| s.label().to_string()).collect(),
        dims: grid.dims,
        points: n,
        half_width: a.half_width,
        spacing: grid.spacing(),
        cell_average: a.cell_average,
        prime_cutoff: grid.prime_cutoff,
        mass: grid.mass(),
        min_value: grid.min_value(),
        max_value,
        freq_extent: grid.freq_extent,
        freq_step: grid.freq_step,
        max_imag_residue: grid.max_imag_residue,
        boundary_modulus: grid.boundary_modulus,
    };
    let checks = vec![
        Check::new("unit mass", (data.mass - 1.0).abs() < 1e-2, format!("grid mass {:.6}", data.mass)),
        Check::new("nonnegative", data.min_value >= -1e-3 * data.max_value, format!("min {:.2e}, max {:.2e}", data.min_value, data.max_value)),
    ];
    output(&data, Some(table), checks)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharFnRow {
    pub scale: f64,
    pub re: f64,
    pub im: f64,
    pub abs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharFnData {
    pub sigma: f64,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub prime_cutoff: u64,
    pub rows: Vec<CharFnRow>,
}

impl CharFnData {
    pub fn table(&self) -> Table {
        let mut t = Table::new(&["scale", "re", "im", "abs"]);
        for r in &self.rows {
            t.push(vec![num(r.scale), num(r.re), num(r.im), num(r.abs)]);
        }
        t
    }
}

fn charfn(a: &CharFnArgs, ctx: &mut Ctx) -> Result<Output, CliError> {
    let comb = a.combination.build()?;
    let rows = ctx.timed("char_fn", || {
        a.scales
            .iter()
            .map(|&s| {
                let p = FourierPoint::new(a.x.iter().map(|v| s * v).collect(), a.y.iter().map(|v| s * v).collect())?;
                let v = density::char_fn(comb.members(), a.sigma, &p, a.cutoff)?;
                Ok(CharFnRow { scale: s, re: v.re, im: v.im, abs: v.norm() })
            })
            .collect::<Result<Vec<_>, CliError>>()
    })?;
    let data = CharFnData { sigma: a.sigma, x: a.x.clone(), y: a.y.clone(), prime_cutoff: a.cutoff, rows };
    let worst = data.rows.iter().map(|r| r.abs).fold(0.0, f64::max);
    let checks = vec![Check::new("bounded by one", worst <= 1.0 + 1e-12, format!("max |phi| = {worst:.12}"))];
    output(&data, Some(data.table()), checks)
}

// ---------------------------------------------------------------- discrepancy

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LadderRow {
    pub t: f64,
    pub sup_disc: f64,
    pub per_seed: Vec<f64>,
    pub n_empirical: usize,
    pub skipped: usize,
    pub argmax_lo: Vec<f64>,
    pub argmax_hi: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscrepancyData {
    pub sigma: f64,
    pub grid_step: f64,
    pub breakpoints: usize,
    pub half_width: f64,
    pub boxes: usize,
    pub setup: McSetup,
    pub reference_seeds: Vec<u64>,
    pub ladder: Vec<LadderRow>,
}

impl DiscrepancyData {
    pub fn table(&self) -> Table {
        let mut t = Table::new(&["T", "sup_disc"]);
        for r in &self.ladder {
            t.push(vec![num(r.t), num(r.sup_disc)]);
        }
        t
    }
}

fn discrepancy_ladder(a: &DiscrepancyArgs, ctx: &mut Ctx) -> Result<Output, CliError> {
    let comb = a.combination.build()?;
    let family = RectFamily::uniform(2 * comb.len(), a.half_width, a.breakpoints)?;
    let base = ctx.mc(&a.mc, a.sigma);
    let seeds: Vec<u64> = (0..a.seeds as u64).map(|k| ctx.seed.wrapping_add(k)).collect();
    let refs = ctx.timed("reference_samples", || {
        seeds.iter().map(|&s| Ok(random_model::sample_vectors(&comb, a.sigma, &MCConfig { seed: s, ..base })?)).collect::<Result<Vec<_>, CliError>>()
    })?;
    let mut ladder = Vec::new();
    for &t in &a.t {
        let emp = ctx.timed(&format!("sample_l_vector T={t}"), || Ok(discrepancy::sample_l_vector(&comb, a.sigma, t, a.grid_step)?))?;
        let reports = refs.iter().map(|r| discrepancy::box_discrepancy(&emp.samples, r, &family)).collect::<Result<Vec<_>, _>>()?;
        let per_seed: Vec<f64> = reports.iter().map(|r| r.value).collect();
        let best = reports.iter().max_by(|x, y| x.value.total_cmp(&y.value)).expect("at least one seed");
        ladder.push(LadderRow {
            t,
            sup_disc: per_seed.iter().sum::<f64>() / per_seed.len() as f64,
            n_empirical: emp.samples.len(),
            skipped: emp.skipped,
            argmax_lo: best.argmax.lo.clone(),
            argmax_hi: best.argmax.hi.clone(),
            per_seed,
        });
    }
    let data = DiscrepancyData {
        sigma: a.sigma,
        grid_step: a.grid_step,
        breakpoints: a.breakpoints,
        half_width: a.half_width,
        boxes: family.box_count(),
        setup: (&base).into(),
        reference_seeds: seeds,
        ladder,
    };
    let mut by_t = data.ladder.clone();
    by_t.sort_by(|x, y| x.t.total_cmp(&y.t));
    let decreasing = by_t.windows(2).all(|w| w[1].sup_disc < w[0].sup_disc);
    let detail = by_t.iter().map(|r| format!("T={}: {:.5}", r.t, r.sup_disc)).collect::<Vec<_>>().join(", ");
    output(&data, Some(data.table()), vec![Check::new("discrepancy decreases with T", decreasing, detail)])
}

// ---------------------------------------------------------------- Beurling–Selberg

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BsWindowData {
    pub delta: f64,
    /// Largest violation of `0 ≤ 1_I - F ≤ K(Δ(x-a)) + K(Δ(b-x))`.
    pub sandwich_violation: f64,
    pub max_outside: f64,
    pub fitted_c: f64,
    pub k_hat: Vec<(f64, f64, f64)>,
    pub fourier_samples: Vec<(f64, f64)>,
    /// `(x, F(x), 1_I(x))` on a coarse grid for plotting.
    pub curve: Vec<(f64, f64, f64)>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BsCheckData {
    pub a: f64,
    pub b: f64,
    pub points: usize,
    /// Largest violation of `B⁻ ≤ sgn ≤ B⁺` on `[-50, 50]`.
    pub sign_violation: f64,
    pub windows: Vec<BsWindowData>,
}

impl BsCheckData {
    pub fn table(&self) -> Table {
        let mut t = Table::new(&["delta", "series", "x", "value"]);
        for w in &self.windows {
            for &(x, f, ind) in &w.curve {
                t.push(vec![num(w.delta), "F".into(), num(x), num(f)]);
                t.push(vec![num(w.delta), "indicator".into(), num(x), num(ind)]);
            }
            for &(y, v) in &w.fourier_samples {
                t.push(vec![num(w.delta), "abs_F_hat".into(), num(y), num(v)]);
            }
        }
        t
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    let n = n.max(2);
    (0..n).map(move |i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
}

fn bs_check(a: &BsCheckArgs, ctx: &mut Ctx) -> Result<Output, CliError> {
    let sign_violation = linspace(-50.0, 50.0, a.points).fold(0.0f64, |m, x| {
        let s = if x > 0.0 {
            1.0
        } else if x < 0.0 {
            -1.0
        } else {
            0.0
        };
        m.max(discrepancy::bs_b_minus(x) - s).max(s - discrepancy::bs_b_plus(x))
    }) + 0.0;
    let span = a.b - a.a;
    let mut windows = Vec::new();
    for &delta in &a.delta {
        let w = BSWindow::new(a.a, a.b, delta)?;
        let sandwich_violation = linspace(a.a - 10.0 * span, a.b + 10.0 * span, a.points).fold(0.0f64, |m, x| {
            let gap = w.indicator(x) - discrepancy::bs_f(&w, x);
            m.max(-gap).max(gap - w.error_bound(x))
        }) + 0.0;
        let report = ctx.timed(&format!("bs_fourier_check delta={delta}"), || Ok(discrepancy::bs_fourier_check(&w)?))?;
        let curve = linspace(a.a - span, a.b + span, 401).map(|x| (x, discrepancy::bs_f(&w, x), w.indicator(x))).collect();
        windows.push(BsWindowData {
            delta,
            passed: report.passed && sandwich_violation <= 1e-12,
            sandwich_violation,
            max_outside: report.max_outside,
            fitted_c: report.fitted_c,
            k_hat: report.k_hat,
            fourier_samples: report.samples,
            curve,
        });
    }
    let data = BsCheckData { a: a.a, b: a.b, points: a.points, sign_violation, windows };
    let mut checks = vec![Check::new("sgn sandwich", sign_violation <= 1e-12, format!("max violation {sign_violation:.1e}"))];
    for w in &data.windows {
        let khat = w.k_hat.iter().map(|(_, n, e)| (n - e).abs()).fold(0.0, f64::max);
        checks.push(Check::new(
            &format!("window delta={}", w.delta),
            w.passed && w.max_outside < 1e-4 && khat < 1e-6,
            format!("sandwich violation {:.1e}, max |F-hat| outside {:.1e}, K-hat error {khat:.1e}", w.sandwich_violation, w.max_outside),
        ));
    }
    output(&data, Some(data.table()), checks)
}

// ---------------------------------------------------------------- tail distribution

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailRow {
    pub tau: f64,
    pub empirical: f64,
    pub random: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailCdfData {
    pub sigma: f64,
    pub t: f64,
    pub grid_step: f64,
    pub big_l: f64,
    pub n_empirical: usize,
    pub setup: McSetup,
    pub rows: Vec<TailRow>,
}

impl TailCdfData {
    pub fn table(&self) -> Table {
        let mut t = Table::new(&["series", "tau", "psi"]);
        for r in &self.rows {
            t.push(vec!["empirical".into(), num(r.tau), num(r.empirical)]);
            t.push(vec!["random".into(), num(r.tau), num(r.random)]);
        }
        t
    }
}

fn tail_cdf(a: &TailCdfArgs, ctx: &mut Ctx) -> Result<Output, CliError> {
    let comb = a.combination.build()?;
    let xi_max = comb.xi().into_iter().fold(0.0, f64::max);
    let big_l = a.big_l.unwrap_or_else(|| discrepancy::default_box_half_width(xi_max, 1.0 / (a.sigma - 0.5)));
    let cfg = ctx.mc(&a.mc, a.sigma);
    let emp = ctx.timed("sample_l_vector", || Ok(discrepancy::sample_l_vector(&comb, a.sigma, a.t, a.grid_step)?))?;
    let rnd = ctx.timed("sample_vectors", || Ok(random_model::sample_vectors(&comb, a.sigma, &cfg)?))?;
    let rows = a
        .taus
        .iter()
        .map(|&tau| {
            Ok(TailRow {
                tau,
                empirical: discrepancy::tail_distribution_psi(&emp.samples, comb.weights(), tau, big_l)?,
                random: discrepancy::tail_distribution_psi(&rnd, comb.weights(), tau, big_l)?,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let data = TailCdfData { sigma: a.sigma, t: a.t, grid_step: a.grid_step, big_l, n_empirical: emp.samples.len(), setup: (&cfg).into(), rows };
    let gap = data.rows.iter().map(|r| (r.empirical - r.random).abs()).fold(0.0, f64::max);
    let checks = vec![Check::new("tail agreement", gap < 0.1, format!("max |psi_emp - psi_random| = {gap:.4}"))];
    output(&data, Some(data.table()), checks)
}

// ---------------------------------------------------------------- Selberg orthonormality

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelbergRow {
    pub label: String,
    pub x: f64,
    pub sum: f64,
    /// `sum - ξ log log x`.
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelbergData {
    pub q_max: u64,
    pub x: Vec<f64>,
    pub specs: Vec<String>,
    pub diagonal: Vec<SelbergRow>,
    /// Widest spread of the diagonal deviations over `x`, over all specs.
    pub worst_band: f64,
    pub worst_off_diagonal: f64,
    pub worst_pair: (String, String),
}

impl SelbergData {
    pub fn table(&self) -> Table {
        let mut t = Table::new(&["series", "x", "sum", "deviation"]);
        for r in &self.diagonal {
            t.push(vec![r.label.clone(), num(r.x), num(r.sum), num(r.deviation)]);
        }
        t
    }
}

fn selberg_check(a: &SelbergCheckArgs, ctx: &mut Ctx) -> Result<Output, CliError> {
    let x_max = a.x.iter().cloned().fold(2.0, f64::max).ceil() as u64;
    let start = Instant::now();
    let primes = ctx.prime_table(x_max);
    let mut specs = vec![LFunctionSpec::zeta()];
    for q in 3..=a.q_max {
        let chars = ctx.characters(q);
        specs.extend(chars.into_iter().filter(|c| c.is_primitive()).map(LFunctionSpec::dirichlet));
    }
    ctx.timings.push(Timing { operation: "load_tables".into(), seconds: start.elapsed().as_secs_f64() });
    let (diagonal, worst_band, worst_off, worst_pair) = ctx.timed("selberg_sums", || {
        let mut diagonal = Vec::new();
        let mut worst_band: f64 = 0.0;
        let mut worst_off: f64 = 0.0;
        let mut worst_pair = (String::new(), String::new());
        for (i, s) in specs.iter().enumerate() {
            let mut devs = Vec::new();
            for &x in &a.x {
                let sum = selberg_sum(s, s, x, &primes)?.re;
                let deviation = sum - s.xi() * x.ln().ln();
                devs.push(deviation);
                diagonal.push(SelbergRow { label: s.label().to_string(), x, sum, deviation });
            }
            let band = devs.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - devs.iter().cloned().fold(f64::INFINITY, f64::min);
            worst_band = worst_band.max(band);
            for o in &specs[i + 1..] {
                for &x in &a.x {
                    let v = selberg_sum(s, o, x, &primes)?.norm();
                    if v > worst_off {
                        worst_off = v;
                        worst_pair = (s.label().to_string(), o.label().to_string());
                    }
                }
            }
        }
        Ok((diagonal, worst_band, worst_off, worst_pair))
    })?;
    let data = SelbergData {
        q_max: a.q_max,
        x: a.x.clone(),
        specs: specs.iter().map(|s| s.label().to_string()).collect(),
        diagonal,
        worst_band,
        worst_off_diagonal: worst_off,
        worst_pair,
    };
    let checks = vec![
        Check::new("diagonal band", worst_band < 1.0, format!("widest band {worst_band:.4} over {} specs", data.specs.len())),
        Check::new("off-diagonal bounded", worst_off < 3.0, format!("largest |sum| {worst_off:.4}")),
    ];
    output(&data, Some(data.table()), checks)
}

// ---------------------------------------------------------------- Littlewood

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LittlewoodData {
    pub sigma: f64,
    pub sigma0: f64,
    pub t: f64,
    pub lhs: f64,
    pub breakpoint_sum: f64,
    pub rhs: f64,
    pub log_integral_sigma: f64,
    pub log_integral_sigma0: f64,
    pub n0_term: f64,
    pub horizontal_arg_term: Option<f64>,
    pub zeros: Vec<[f64; 2]>,
    pub pieces: Vec<(f64, f64, u64)>,
    pub flags: Vec<String>,
}

impl LittlewoodData {
    pub fn table(&self) -> Table {
        let mut t = Table::new(&["quantity", "value"]);
        let mut push = |k: &str, v: f64| t.push(vec![k.into(), num(v)]);
        push("lhs", self.lhs);
        push("breakpoint_sum", self.breakpoint_sum);
        push("rhs", self.rhs);
        push("log_integral_sigma", self.log_integral_sigma);
        push("log_integral_sigma0", self.log_integral_sigma0);
        push("n0_term", self.n0_term);
        if let Some(v) = self.horizontal_arg_term {
            push("horizontal_arg_term", v);
        }
        t
    }
}

fn littlewood_check(a: &LittlewoodArgs, ctx: &mut Ctx) -> Result<Output, CliError> {
    let comb: LinearCombination = a.combination.build()?;
    let cfg = ZeroCountConfig { sigma0: a.sigma0, ..ZeroCountConfig::default() };
    let lhs = ctx.timed("littlewood_lhs", || Ok(zeros::littlewood_lhs(&comb, a.sigma, &cfg, a.t, a.quad_tol)?))?;
    let rhs = ctx.timed("littlewood_rhs", || Ok(zeros::littlewood_rhs(&comb, a.sigma, &cfg, a.t, a.quad_tol, a.arg_terms)?))?;
    let data = LittlewoodData {
        sigma: a.sigma,
        sigma0: a.sigma0,
        t: a.t,
        lhs: lhs.value,
        breakpoint_sum: lhs.breakpoint_sum,
        rhs: rhs.value,
        log_integral_sigma: rhs.log_integral_sigma,
        log_integral_sigma0: rhs.log_integral_sigma0,
        n0_term: rhs.n0_term,
        horizontal_arg_term: rhs.horizontal_arg_term,
        zeros: lhs.zeros.iter().copied().map(pair).collect(),
        pieces: lhs.pieces,
        flags: lhs.flags,
    };
    let diff = (data.lhs - data.rhs).abs();
    let bp = (data.lhs - data.breakpoint_sum).abs();
    let mut checks = vec![
        Check::new("identity", diff <= 0.5, format!("|lhs - rhs| = {diff:.4}")),
        Check::new("breakpoint sum", bp <= 1e-6, format!("|lhs - breakpoint sum| = {bp:.1e}")),
    ];
    if let Some(arg) = data.horizontal_arg_term {
        let exact = (data.lhs - data.rhs - arg).abs();
        checks.push(Check::new("identity with arg terms", exact <= 1e-2, format!("|lhs - rhs - arg terms| = {exact:.2e}")));
    }
    output(&data, Some(data.table()), checks)
}
