//! Experiment configuration shared by the subcommands and `run --config`.

use std::path::PathBuf;

use clap::{Args, Subcommand, ValueEnum};
use lflab::character::DirichletCharacter;
use lflab::lfunc::{LFunctionSpec, LinearCombination};
use lflab::random_model::{MCConfig, Truncation};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// A full experiment description, as read from a TOML file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<PathBuf>,
    #[serde(default)]
    pub check: bool,
    pub experiment: Experiment,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        let cfg: Self = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.experiment.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> Result<String, CliError> {
        toml::to_string(self).map_err(|e| CliError::Config(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Subcommand)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Experiment {
    /// Count zeros of a combination in a rectangle.
    CountZeros(CountZerosArgs),
    /// Zero counts N_F(1/2 + 1/G, T) for several G.
    NfCurve(NfCurveArgs),
    /// Monte Carlo estimate of E log|F(σ, X)|.
    McExpect(McExpectArgs),
    /// Coupled increments of E log|F(σ, X)| near σ = 1/2 + 1/G.
    McIncrement(McIncrementArgs),
    /// Tail probabilities P(|log L(σ, X)| > τ).
    McTail(McTailArgs),
    /// Concentration probabilities of |F(σ, X)| in thin annuli.
    McConcentration(McConcentrationArgs),
    /// The constant K0.
    K0(K0Args),
    /// Density of (log|L_j|, arg L_j) by Fourier inversion.
    Density(DensityArgs),
    /// Characteristic function along a ray through the origin.
    Charfn(CharFnArgs),
    /// Box discrepancy between t-averages and the random model.
    Discrepancy(DiscrepancyArgs),
    /// Beurling–Selberg inequalities and Fourier support.
    BsCheck(BsCheckArgs),
    /// Tail distribution of log|F| restricted to a box, empirical and random.
    TailCdf(TailCdfArgs),
    /// Selberg orthonormality sums for zeta and primitive characters.
    SelbergCheck(SelbergCheckArgs),
    /// Both sides of Littlewood's identity on [T, 2T].
    LittlewoodCheck(LittlewoodArgs),
}

impl Experiment {
    pub fn kind(&self) -> &'static str {
        match self {
            Self::CountZeros(_) => "count-zeros",
            Self::NfCurve(_) => "nf-curve",
            Self::McExpect(_) => "mc-expect",
            Self::McIncrement(_) => "mc-increment",
            Self::McTail(_) => "mc-tail",
            Self::McConcentration(_) => "mc-concentration",
            Self::K0(_) => "k0",
            Self::Density(_) => "density",
            Self::Charfn(_) => "charfn",
            Self::Discrepancy(_) => "discrepancy",
            Self::BsCheck(_) => "bs-check",
            Self::TailCdf(_) => "tail-cdf",
            Self::SelbergCheck(_) => "selberg-check",
            Self::LittlewoodCheck(_) => "littlewood-check",
        }
    }

    /// Checks everything that can be checked without computing.
    pub fn validate(&self) -> Result<(), CliError> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(CliError::Config(format!("{name} must be positive, got {v}")))
            }
        };
        let sigma_ok = |v: f64| {
            if v > 0.5 && v.is_finite() {
                Ok(())
            } else {
                Err(CliError::Config(format!("sigma must exceed 1/2, got {v}")))
            }
        };
        match self {
            Self::CountZeros(a) => {
                a.combination.build()?;
                if a.sigma_lo > a.sigma_hi || a.t_lo > a.t_hi {
                    return Err(CliError::Config("rectangle bounds are reversed".into()));
                }
                positive("boundary-floor", a.boundary_floor)
            }
            Self::NfCurve(a) => {
                a.combination.build()?;
                positive("t", a.t)?;
                a.g.iter().try_for_each(|&g| positive("g", g))
            }
            Self::McExpect(a) => {
                a.combination.build()?;
                sigma_ok(a.sigma)?;
                a.mc.validate()
            }
            Self::McIncrement(a) => {
                a.combination.build()?;
                if !(a.g >= 4.0) {
                    return Err(CliError::Config(format!("G must be at least 4, got {}", a.g)));
                }
                a.mc.validate()
            }
            Self::McTail(a) => {
                parse_member(&a.member)?;
                sigma_ok(a.sigma)?;
                a.mc.validate()
            }
            Self::McConcentration(a) => {
                a.combination.build()?;
                sigma_ok(a.sigma)?;
                a.eps.iter().try_for_each(|&e| positive("eps", e))?;
                a.mc.validate()
            }
            Self::K0(a) => {
                a.xi_vector()?;
                Ok(())
            }
            Self::Density(a) => {
                let c = a.combination.build()?;
                if c.len() > 2 {
                    return Err(CliError::Config("density supports at most two members".into()));
                }
                sigma_ok(a.sigma)?;
                positive("half-width", a.half_width)
            }
            Self::Charfn(a) => {
                let c = a.combination.build()?;
                if a.x.len() != c.len() || a.y.len() != c.len() {
                    return Err(CliError::Config("x and y need one entry per member".into()));
                }
                sigma_ok(a.sigma)
            }
            Self::Discrepancy(a) => {
                a.combination.build()?;
                sigma_ok(a.sigma)?;
                a.t.iter().try_for_each(|&t| positive("t", t))?;
                if a.seeds == 0 || a.breakpoints < 2 {
                    return Err(CliError::Config("need at least one seed and two breakpoints".into()));
                }
                a.mc.validate()
            }
            Self::BsCheck(a) => {
                if !(a.a < a.b) {
                    return Err(CliError::Config("need a < b".into()));
                }
                a.delta.iter().try_for_each(|&d| positive("delta", d))
            }
            Self::TailCdf(a) => {
                a.combination.build()?;
                sigma_ok(a.sigma)?;
                positive("t", a.t)?;
                a.mc.validate()
            }
            Self::SelbergCheck(a) => {
                if a.x.iter().any(|&x| !(2.0..=1e8).contains(&x)) {
                    return Err(CliError::Config("x values must lie in [2, 1e8]".into()));
                }
                Ok(())
            }
            Self::LittlewoodCheck(a) => {
                a.combination.build()?;
                sigma_ok(a.sigma)?;
                positive("t", a.t)
            }
        }
    }
}

/// Members and weights of `F = Σ b_j L_j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Args)]
#[serde(deny_unknown_fields, default)]
pub struct CombinationArgs {
    /// Members: `zeta` or a Conrey label `q.m` (for example `5.2`).
    #[arg(long, value_delimiter = ',', default_value = "zeta")]
    pub members: Vec<String>,
    /// Weights, renormalised to unit sum of squares (default: equal).
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
}

impl Default for CombinationArgs {
    fn default() -> Self {
        Self { members: vec!["zeta".into()], weights: None }
    }
}

impl CombinationArgs {
    pub fn build(&self) -> Result<LinearCombination, CliError> {
        if self.members.is_empty() {
            return Err(CliError::Config("at least one member is required".into()));
        }
        let specs = self.members.iter().map(|m| parse_member(m)).collect::<Result<Vec<_>, _>>()?;
        let weights = self.weights.clone().unwrap_or_else(|| vec![1.0; specs.len()]);
        if weights.len() != specs.len() {
            return Err(CliError::Config("one weight per member is required".into()));
        }
        LinearCombination::new(specs, weights).map_err(|e| CliError::Config(e.to_string()))
    }
}

/// `zeta` or a Conrey label `q.m`.
pub fn parse_member(text: &str) -> Result<LFunctionSpec, CliError> {
    let t = text.trim();
    if t.eq_ignore_ascii_case("zeta") {
        return Ok(LFunctionSpec::zeta());
    }
    let bad = || CliError::Config(format!("unrecognised member `{t}` (expected `zeta` or `q.m`)"));
    let (q, m) = t.split_once('.').ok_or_else(bad)?;
    let q: u64 = q.parse().map_err(|_| bad())?;
    let m: u64 = m.parse().map_err(|_| bad())?;
    if q == 0 || q > 10_000 {
        return Err(CliError::Config(format!("modulus {q} out of range")));
    }
    let chi = DirichletCharacter::conrey(q, m).map_err(|e| CliError::Config(e.to_string()))?;
    Ok(LFunctionSpec::dirichlet(chi))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum TruncationArg {
    PrimePowers,
    FullFactors,
    GaussianTail,
}

impl From<TruncationArg> for Truncation {
    fn from(t: TruncationArg) -> Self {
        match t {
            TruncationArg::PrimePowers => Truncation::PrimePowers,
            TruncationArg::FullFactors => Truncation::FullFactors,
            TruncationArg::GaussianTail => Truncation::GaussianTail,
        }
    }
}

/// Monte Carlo settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Args)]
#[serde(deny_unknown_fields, default)]
pub struct McArgs {
    /// Number of phase assignments.
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    /// Truncation point Y (default min(1e6, exp(4/(2σ-1)))).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y: Option<f64>,
    #[arg(long, value_enum, default_value = "gaussian-tail")]
    pub truncation: TruncationArg,
    /// Pair each sample with its conjugate-phase partner.
    #[arg(long)]
    pub antithetic: bool,
}

impl Default for McArgs {
    fn default() -> Self {
        Self { samples: 100_000, y: None, truncation: TruncationArg::GaussianTail, antithetic: false }
    }
}

impl McArgs {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.samples == 0 {
            return Err(CliError::Config("samples must be at least 1".into()));
        }
        if self.y.is_some_and(|y| !(2.0..=1e7).contains(&y)) {
            return Err(CliError::Config("Y must lie in [2, 1e7]".into()));
        }
        Ok(())
    }

    pub fn config(&self, sigma: f64, seed: u64, workers: Option<usize>) -> MCConfig {
        let mut cfg = MCConfig::new(self.samples, self.y.unwrap_or_else(|| MCConfig::default_y(sigma)), seed).with_truncation(self.truncation.into());
        cfg.antithetic = self.antithetic;
        cfg.workers = workers;
        cfg
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Args)]
#[serde(deny_unknown_fields, default)]
pub struct CountZerosArgs {
    #[command(flatten)]
    pub combination: CombinationArgs,
    #[arg(long, default_value_t = 0.51)]
    pub sigma_lo: f64,
    #[arg(long, default_value_t = 1.2)]
    pub sigma_hi: f64,
    #[arg(long, default_value_t = 0.0)]
    pub t_lo: f64,
    #[arg(long, default_value_t = 60.0)]
    pub t_hi: f64,
    /// Smallest |F| tolerated on the contour.
    #[arg(long, default_value_t = 1e-10)]
    pub boundary_floor: f64,
    /// Also locate the zeros.
    #[arg(long)]
    pub refine: bool,
}

impl Default for CountZerosArgs {
    fn default() -> Self {
        Self { combination: CombinationArgs::default(), sigma_lo: 0.51, sigma_hi: 1.2, t_lo: 0.0, t_hi: 60.0, boundary_floor: 1e-10, refine: false }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Args)]
#[serde(deny_unknown_fields, default)]
pub struct NfCurveArgs {
    #[command(flatten)]
    pub combination: CombinationArgs,
    #[arg(long, value_delimiter = ',', default_value = "4,8,16,32")]
    pub g: Vec<f64>,
    #[arg(long, default_value_t = 100.0)]
    pub t: f64,
}

impl Default for NfCurveArgs {
    fn default() -> Self {
        Self { combination: CombinationArgs::default(), g: vec![4.0, 8.0, 16.0, 32.0], t: 100.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Args)]
#[serde(deny_unknown_fields, default)]
pub struct McExpectArgs {
    #[command(flatten)]
    pub combination: CombinationArgs,
    #[arg(long, default_value_t = 0.6)]
    pub sigma: f64,
    #[command(flatten)]
    pub mc: McArgs,
}

impl Default for McExpectArgs {
    fn default() -> Self {
        Self { combination: CombinationArgs::default(), sigma: 0.6, mc: McArgs::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Args)]
#[serde(deny_unknown_fields, default)]
pub struct McIncrementArgs {
    /// Use at least two members (for example `--members 5.2,5.3`); with one, K0 = 0.
    #[command(flatten)]
    pub combination: CombinationArgs,
    #[arg(long, default_value_t = 1000.0)]
    pub g: f64,
    #[command(flatten)]
    pub mc: McArgs,
}

impl Default for McIncrementArgs {
    fn default() -> Self {
        Self { combination: CombinationArgs::default(), g: 1000.0, mc: McArgs::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Args)]
#[serde(deny_unknown_fields, default)]
pub struct McTailArgs {
    /// A single L-function: `zeta` or `q.m`.
    #[arg(long, default_value = "zeta")]
    pub member: String,
    #[arg(long, default_value_t = 0.6)]
    pub sigma: f64,
    #[arg(long, value_delimiter = ',', default_value = "0.5,1,1.5,2,2.5,3")]
    pub taus: Vec<f64>,
    #[command(flatten)]
    pub mc: McArgs,
}

impl Default for McTailArgs {
    fn default() -> Self {
        Self { member: "zeta".into(), sigma: 0.6, taus: vec![0.5, 1.0, 1.5, 2.0, 2.5, 3.0], mc: McArgs::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Args)]
#[serde(deny_unknown_fields, default)]
pub struct McConcentrationArgs {
    #[command(flatten)]
    pub combination: CombinationArgs,
    #[arg(long, default_value_t = 0.6)]
    pub sigma: f64,
    /// Box half-width M of the log-vector.
    #[arg(long, default_value_t = 8.0)]
    pub m: f64,
    /// Inner radius R of the annulus.
    #[arg(long, default_value_t = 1.0)]
    pub r: f64,
    #[arg(long, value_delimiter = ',', default_value = "0.1,0.05,0.025")]
    pub eps: Vec<f64>,
    #[command(flatten)]
    pub mc: McArgs,
}

impl Default for McConcentrationArgs {
    fn default() -> Self {
        Self { combination: CombinationArgs::default(), sigma: 0.6, m: 8.0, r: 1.0, eps: vec![0.1, 0.05, 0.025], mc: McArgs::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum K0MethodArg {
    Quadrature,
    MonteCarlo,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Args)]
#[serde(deny_unknown_fields, default)]
pub struct K0Args {
    /// Number of members J.
    #[arg(long = "J", default_value_t = 2)]
    #[serde(rename = "J")]
    pub j: usize,
    /// Orthonormality constants ξ_j (one value is repeated J times).
    #[arg(long, value_delimiter = ',', default_value = "1,1")]
    pub xi: Vec<f64>,
    #[arg(long, value_enum, default_value = "quadrature")]
    pub method: K0MethodArg,
    /// Monte Carlo sample count.
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: usize,
    /// Largest acceptable error estimate.
    #[arg(long, default_value_t = 1e-3)]
    pub target_error: f64,
}

impl Default for K0Args {
    fn default() -> Self {
        Self { j: 2, xi: vec![1.0, 1.0], method: K0MethodArg::Quadrature, samples: 1_000_000, target_error: 1e-3 }
    }
}

impl K0Args {
    pub fn xi_vector(&self) -> Result<Vec<f64>, CliError> {
        if self.j == 0 {
            return Err(CliError::Config("J must be at least 1".into()));
        }
        let xi = match self.xi.len() {
            1 => vec![self.xi[0]; self.j],
            n if n == self.j => self.xi.clone(),
            n => return Err(CliError::Config(format!("xi has {n} entries but J = {}", self.j))),
        };
        if xi.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
            return Err(CliError::Config("xi entries must be positive".into()));
        }
        if self.samples < 2 {
            return Err(CliError::Config("samples must be at least 2".into()));
        }
        Ok(xi)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Args)]
#[serde(deny_unknown_fields, default)]
pub struct DensityArgs {
    #[command(flatten)]
    pub combination: CombinationArgs,
    #[arg(long, default_value_t = 0.6)]
    pub sigma: f64,
    #[arg(long, default_value_t = 4.0)]
    pub half_width: f64,
    /// Grid points per axis.
    #[arg(long, default_value_t = 41)]
    pub points: usize,
    /// Largest prime in the characteristic-function product.
    #[arg(long, default_value_t = 10_000)]
    pub cutoff: u64,
    /// Report averages over grid cells.
    #[arg(long)]
    pub cell_average: bool,
}

impl Default for DensityArgs {
    fn default() -> Self {
        Self { combination: CombinationArgs::default(), sigma: 0.6, half_width: 4.0, points: 41, cutoff: 10_000, cell_average: false }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Args)]
#[serde(deny_unknown_fields, default)]
pub struct CharFnArgs {
    #[command(flatten)]
    pub combination: CombinationArgs,
    #[arg(long, default_value_t = 0.6)]
    pub sigma: f64,
    /// Direction, x part (one entry per member).
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub x: Vec<f64>,
    /// Direction, y part (one entry per member).
    #[arg(long, value_delimiter = ',', default_value = "0")]
    pub y: Vec<f64>,
    /// Multiples of the direction at which to evaluate.
    #[arg(long, value_delimiter = ',', default_value = "0,0.05,0.1,0.15,0.2,0.25,0.3")]
    pub scales: Vec<f64>,
    #[arg(long, default_value_t = 10_000)]
    pub cutoff: u64,
}

impl Default for CharFnArgs {
    fn default() -> Self {
        Self {
            combination: CombinationArgs::default(),
            sigma: 0.6,
            x: vec![1.0],
            y: vec![0.0],
            scales: vec![0.0, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3],
            cutoff: 10_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Args)]
#[serde(deny_unknown_fields, default)]
pub struct DiscrepancyArgs {
    #[command(flatten)]
    pub combination: CombinationArgs,
    #[arg(long, default_value_t = 0.6)]
    pub sigma: f64,
    /// Window starts T (each window is [T, 2T]).
    #[arg(long, value_delimiter = ',', default_value = "500,2000")]
    pub t: Vec<f64>,
    #[arg(long, default_value_t = 0.1)]
    pub grid_step: f64,
    /// Independent random-model references, averaged.
    #[arg(long, default_value_t = 1)]
    pub seeds: usize,
    /// Box family: breakpoints per axis on [-half_width, half_width].
    #[arg(long, default_value_t = 13)]
    pub breakpoints: usize,
    #[arg(long, default_value_t = 3.0)]
    pub half_width: f64,
    #[command(flatten)]
    pub mc: McArgs,
}

impl Default for DiscrepancyArgs {
    fn default() -> Self {
        Self {
            combination: CombinationArgs::default(),
            sigma: 0.6,
            t: vec![500.0, 2000.0],
            grid_step: 0.1,
            seeds: 1,
            breakpoints: 13,
            half_width: 3.0,
            mc: McArgs::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Args)]
#[serde(deny_unknown_fields, default)]
pub struct BsCheckArgs {
    #[arg(long, default_value_t = 0.0)]
    pub a: f64,
    #[arg(long, default_value_t = 1.0)]
    pub b: f64,
    #[arg(long, value_delimiter = ',', default_value = "1,4,16")]
    pub delta: Vec<f64>,
    /// Points used for the pointwise inequalities.
    #[arg(long, default_value_t = 100_000)]
    pub points: usize,
}

impl Default for BsCheckArgs {
    fn default() -> Self {
        Self { a: 0.0, b: 1.0, delta: vec![1.0, 4.0, 16.0], points: 100_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Args)]
#[serde(deny_unknown_fields, default)]
pub struct TailCdfArgs {
    #[command(flatten)]
    pub combination: CombinationArgs,
    #[arg(long, default_value_t = 0.6)]
    pub sigma: f64,
    #[arg(long, default_value_t = 1000.0)]
    pub t: f64,
    #[arg(long, default_value_t = 0.1)]
    pub grid_step: f64,
    #[arg(long, value_delimiter = ',', default_value = "-2,-1,0,0.5,1,1.5,2")]
    pub taus: Vec<f64>,
    /// Box half-width (default 3 sqrt(ξ_max log G) with G = 1/(σ - 1/2)).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub big_l: Option<f64>,
    #[command(flatten)]
    pub mc: McArgs,
}

impl Default for TailCdfArgs {
    fn default() -> Self {
        Self {
            combination: CombinationArgs::default(),
            sigma: 0.6,
            t: 1000.0,
            grid_step: 0.1,
            taus: vec![-2.0, -1.0, 0.0, 0.5, 1.0, 1.5, 2.0],
            big_l: None,
            mc: McArgs::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Args)]
#[serde(deny_unknown_fields, default)]
pub struct SelbergCheckArgs {
    /// Largest modulus of the primitive characters included.
    #[arg(long, default_value_t = 13)]
    pub q_max: u64,
    #[arg(long, value_delimiter = ',', default_value = "1e3,1e4,1e5,1e6,1e7")]
    pub x: Vec<f64>,
}

impl Default for SelbergCheckArgs {
    fn default() -> Self {
        Self { q_max: 13, x: vec![1e3, 1e4, 1e5, 1e6, 1e7] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Args)]
#[serde(deny_unknown_fields, default)]
pub struct LittlewoodArgs {
    #[command(flatten)]
    pub combination: CombinationArgs,
    #[arg(long, default_value_t = 0.55)]
    pub sigma: f64,
    #[arg(long, default_value_t = 30.0)]
    pub t: f64,
    #[arg(long, default_value_t = 2.5)]
    pub sigma0: f64,
    #[arg(long, default_value_t = 1e-8)]
    pub quad_tol: f64,
    /// Also compute the horizontal boundary terms.
    #[arg(long)]
    pub arg_terms: bool,
}

impl Default for LittlewoodArgs {
    fn default() -> Self {
        Self { combination: CombinationArgs::default(), sigma: 0.55, t: 30.0, sigma0: 2.5, quad_tol: 1e-8, arg_terms: false }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::Parser;

    #[derive(Parser)]
    struct Probe {
        #[command(subcommand)]
        exp: Experiment,
    }

    fn parsed(kind: &str) -> Experiment {
        Probe::try_parse_from(["probe", kind]).unwrap().exp
    }

    #[test]
    fn flag_defaults_match_file_defaults() {
        let defaults = [
            Experiment::CountZeros(Default::default()),
            Experiment::NfCurve(Default::default()),
            Experiment::McExpect(Default::default()),
            Experiment::McIncrement(Default::default()),
            Experiment::McTail(Default::default()),
            Experiment::McConcentration(Default::default()),
            Experiment::K0(Default::default()),
            Experiment::Density(Default::default()),
            Experiment::Charfn(Default::default()),
            Experiment::Discrepancy(Default::default()),
            Experiment::BsCheck(Default::default()),
            Experiment::TailCdf(Default::default()),
            Experiment::SelbergCheck(Default::default()),
            Experiment::LittlewoodCheck(Default::default()),
        ];
        for d in defaults {
            assert_eq!(parsed(d.kind()), d, "{}", d.kind());
            let from_file: ExperimentConfig = toml::from_str(&format!("[experiment]\nkind = \"{}\"\n", d.kind())).unwrap();
            assert_eq!(from_file.experiment, d, "{}", d.kind());
            d.validate().unwrap();
        }
    }

    #[test]
    fn members_parse() {
        assert_eq!(parse_member("zeta").unwrap(), LFunctionSpec::zeta());
        assert_eq!(parse_member("5.2").unwrap().modulus(), 5);
        for bad in ["", "5", "5.x", "6.3", "0.1", "zeta2"] {
            assert!(parse_member(bad).is_err(), "{bad}");
        }
    }
}
