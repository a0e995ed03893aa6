//! JSON experiment configuration. Every field except `kind` has a default, so `{"kind": "se-run"}`
//! is a complete config.

use std::path::{Path, PathBuf};

use lpamp::amp::{AmpConfig, LambdaPolicy};
use lpamp::instance::InstanceSpec;
use lpamp::se::{Policy, SeConfig};
use lpamp::{Nonzero, SignalPrior};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Explicit values, or `num` points from `start` to `stop` (log-spaced when `log` is set).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Grid {
    Values(Vec<f64>),
    Range {
        start: f64,
        stop: f64,
        num: usize,
        #[serde(default)]
        log: bool,
    },
}

impl Grid {
    pub fn linear(start: f64, stop: f64, num: usize) -> Self {
        Self::Range { start, stop, num, log: false }
    }

    pub fn log(start: f64, stop: f64, num: usize) -> Self {
        Self::Range { start, stop, num, log: true }
    }

    pub fn values(&self) -> Vec<f64> {
        match *self {
            Self::Values(ref v) => v.clone(),
            Self::Range { start, stop, num, log } => {
                if num == 1 {
                    return vec![start];
                }
                let (a, b) = if log { (start.ln(), stop.ln()) } else { (start, stop) };
                (0..num)
                    .map(|i| {
                        let x = a + (b - a) * i as f64 / (num - 1) as f64;
                        if log {
                            x.exp()
                        } else {
                            x
                        }
                    })
                    .collect()
            }
        }
    }

    fn validate(&self, name: &str) -> Result<(), CliError> {
        let bad = |msg: String| Err(CliError::Config(format!("{name}: {msg}")));
        match *self {
            Self::Values(ref v) if v.is_empty() => bad("grid is empty".into()),
            Self::Values(ref v) if v.iter().any(|x| !x.is_finite()) => {
                bad("non-finite grid value".into())
            }
            Self::Range { num: 0, .. } => bad("grid is empty".into()),
            Self::Range { start, stop, .. } if !(start.is_finite() && stop.is_finite()) => {
                bad("non-finite grid end point".into())
            }
            Self::Range { start, stop, log: true, .. } if !(start > 0.0 && stop > 0.0) => {
                bad("log grid needs positive end points".into())
            }
            _ => Ok(()),
        }
    }
}

/// Default instance: N = 5000, n = 1000, 40 nonzeros ±1.
fn reference_instance(sigma_w: f64) -> InstanceSpec {
    InstanceSpec {
        big_n: 5000,
        delta: 0.2,
        prior: SignalPrior::two_point(0.008, 1.0),
        sigma_w,
        seed: 0,
    }
}

fn reference_se() -> SeConfig {
    SeConfig::new(0.2, 0.0, SignalPrior::two_point(0.008, 1.0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ProxEvalParams {
    pub p: f64,
    pub lambda: f64,
    pub u: Grid,
    /// Bandwidth for the smoothed columns.
    pub h: f64,
}

impl Default for ProxEvalParams {
    fn default() -> Self {
        Self { p: 0.5, lambda: 1.0, u: Grid::linear(-5.0, 5.0, 201), h: 0.05 }
    }
}

/// Measurements read from CSV: `a` holds one matrix row per line, `y` and `x_true` one value
/// per line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputFiles {
    pub a: PathBuf,
    pub y: PathBuf,
    #[serde(default)]
    pub x_true: Option<PathBuf>,
    #[serde(default)]
    pub sigma_w: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AmpRunParams {
    pub instance: InstanceSpec,
    /// Replaces the generated instance when set.
    pub input: Option<InputFiles>,
    pub trial: u64,
    pub amp: AmpConfig,
}

impl Default for AmpRunParams {
    fn default() -> Self {
        Self {
            instance: reference_instance(0.1),
            input: None,
            trial: 0,
            amp: AmpConfig::new(LambdaPolicy::Sure { p_grid: vec![0.0, 0.5, 1.0] }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SeRunParams {
    pub se: SeConfig,
    pub policy: Policy,
    /// Defaults to E X²/δ + σ_w², the zero-initialization value.
    pub sigma0_sq: Option<f64>,
    pub t_max: usize,
    pub tol: f64,
}

impl Default for SeRunParams {
    fn default() -> Self {
        Self {
            se: reference_se(),
            policy: Policy::TauPower { tau: 0.2, p: 0.0 },
            sigma0_sq: None,
            t_max: 30,
            tol: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SeFixedPointsParams {
    pub se: SeConfig,
    pub policy: Policy,
    /// Noise levels to sweep; `se.sigma_w` is used when absent.
    pub sigma_w: Option<Grid>,
    /// Upper end of the scan; defaults to the smallest admissible value.
    pub sigma_sq_max: Option<f64>,
}

impl Default for SeFixedPointsParams {
    fn default() -> Self {
        Self {
            se: SeConfig::new(0.1, 0.01, SignalPrior::two_point(0.01, 1.0)),
            policy: Policy::Optimal { p: 0.5 },
            sigma_w: None,
            sigma_sq_max: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    /// ε̄*_p(δ) from the upper minimax value.
    Bar,
    /// ε̲*_p(δ) from the lower minimax value.
    Under,
    /// The best ε̄*_p(δ) over `p_grid`.
    Continuation,
}

impl CurveKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Bar => "bar",
            Self::Under => "under",
            Self::Continuation => "continuation",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PtCurveParams {
    pub p_grid: Vec<f64>,
    pub delta: Grid,
    pub curves: Vec<CurveKind>,
}

impl Default for PtCurveParams {
    fn default() -> Self {
        Self {
            p_grid: vec![0.0, 0.3, 0.6, 0.9, 1.0],
            delta: Grid::linear(0.05, 0.95, 20),
            curves: vec![CurveKind::Bar],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NoiseCurveParams {
    pub delta: f64,
    pub epsilon: f64,
    pub nonzero: Nonzero,
    pub p_grid: Vec<f64>,
    pub sigma_w: Grid,
    /// Adds rows for joint (λ, p) adaptation over `p_grid`.
    pub adaptive: bool,
}

impl Default for NoiseCurveParams {
    fn default() -> Self {
        Self {
            delta: 0.1,
            epsilon: 0.01,
            nonzero: Nonzero::SymmetricTwoPoint { mu: 1.0 },
            p_grid: vec![0.0, 0.5, 1.0],
            sigma_w: Grid::log(1e-3, 1.0, 10),
            adaptive: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SureCurveParams {
    pub instance: InstanceSpec,
    pub trial: u64,
    /// Policy for the iterations before `iteration`.
    pub amp: AmpConfig,
    pub iteration: usize,
    pub p_grid: Vec<f64>,
    /// λ grid; defaults to 40 log points over [10⁻³, 10]·σ̂^{2−p}.
    pub lambda: Option<Grid>,
}

impl Default for SureCurveParams {
    fn default() -> Self {
        Self {
            instance: reference_instance(0.1),
            trial: 0,
            amp: AmpConfig::new(LambdaPolicy::Sure { p_grid: vec![0.5] }),
            iteration: 3,
            p_grid: vec![0.0, 0.3, 0.5, 0.8],
            lambda: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct McCompareParams {
    pub instance: InstanceSpec,
    pub trials: usize,
    pub configs: Vec<AmpConfig>,
}

impl Default for McCompareParams {
    fn default() -> Self {
        let cfg =
            |p: f64, tau: f64| AmpConfig::fixed_iterations(LambdaPolicy::TauPower { tau, p }, 30);
        Self {
            instance: reference_instance(0.0),
            trials: 100,
            configs: vec![cfg(0.0, 0.2), cfg(0.3, 0.3), cfg(0.5, 0.5), cfg(0.8, 1.0)],
        }
    }
}

/// Serialized with a `kind` tag; parsing goes through [`ExperimentConfig::parse`].
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Experiment {
    ProxEval(ProxEvalParams),
    AmpRun(AmpRunParams),
    SeRun(SeRunParams),
    SeFixedPoints(SeFixedPointsParams),
    PtCurve(PtCurveParams),
    NoiseCurve(NoiseCurveParams),
    SureCurve(SureCurveParams),
    McCompare(McCompareParams),
}

impl Experiment {
    pub fn kind(&self) -> &'static str {
        match self {
            Self::ProxEval(_) => "prox-eval",
            Self::AmpRun(_) => "amp-run",
            Self::SeRun(_) => "se-run",
            Self::SeFixedPoints(_) => "se-fixed-points",
            Self::PtCurve(_) => "pt-curve",
            Self::NoiseCurve(_) => "noise-curve",
            Self::SureCurve(_) => "sure-curve",
            Self::McCompare(_) => "mc-compare",
        }
    }

    /// The experiment of the given kind with default parameters.
    pub fn default_for(kind: &str) -> Option<Self> {
        Some(match kind {
            "prox-eval" => Self::ProxEval(Default::default()),
            "amp-run" => Self::AmpRun(Default::default()),
            "se-run" => Self::SeRun(Default::default()),
            "se-fixed-points" => Self::SeFixedPoints(Default::default()),
            "pt-curve" => Self::PtCurve(Default::default()),
            "noise-curve" => Self::NoiseCurve(Default::default()),
            "sure-curve" => Self::SureCurve(Default::default()),
            "mc-compare" => Self::McCompare(Default::default()),
            _ => return None,
        })
    }
}

/// A full config file: the experiment plus run settings that flags may override.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    #[serde(flatten)]
    pub experiment: Experiment,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quad_order: Option<usize>,
}

/// Top-level fields shared by every kind.
#[derive(Deserialize)]
struct Header {
    kind: String,
    #[serde(default)]
    out: Option<PathBuf>,
    #[serde(default)]
    threads: Option<usize>,
    #[serde(default)]
    quad_order: Option<usize>,
}

fn from_text<T: serde::de::DeserializeOwned>(text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))
}

impl ExperimentConfig {
    pub fn new(experiment: Experiment) -> Self {
        Self { experiment, out: None, threads: None, quad_order: None }
    }

    /// Parses the header and then the kind's parameters directly from `text`, so errors
    /// report the line and column of the offending value.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let h: Header = from_text(text)?;
        let experiment = match h.kind.as_str() {
            "prox-eval" => Experiment::ProxEval(from_text(text)?),
            "amp-run" => Experiment::AmpRun(from_text(text)?),
            "se-run" => Experiment::SeRun(from_text(text)?),
            "se-fixed-points" => Experiment::SeFixedPoints(from_text(text)?),
            "pt-curve" => Experiment::PtCurve(from_text(text)?),
            "noise-curve" => Experiment::NoiseCurve(from_text(text)?),
            "sure-curve" => Experiment::SureCurve(from_text(text)?),
            "mc-compare" => Experiment::McCompare(from_text(text)?),
            other => return Err(CliError::Config(format!("unknown kind \"{other}\""))),
        };
        Ok(Self { experiment, out: h.out, threads: h.threads, quad_order: h.quad_order })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Config(m) => CliError::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Overrides the seed of every generated instance.
    pub fn set_seed(&mut self, seed: u64) {
        match &mut self.experiment {
            Experiment::AmpRun(p) => p.instance.seed = seed,
            Experiment::SureCurve(p) => p.instance.seed = seed,
            Experiment::McCompare(p) => p.instance.seed = seed,
            _ => {}
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let cfg = |m: String| Err(CliError::Config(m));
        if self.threads == Some(0) {
            return cfg("threads must be at least 1".into());
        }
        if let Some(q) = self.quad_order {
            if q < 8 {
                return cfg(format!("quad_order = {q} is below the minimum of 8"));
            }
        }
        let nonempty = |name: &str, v: &[f64]| {
            if v.is_empty() {
                cfg(format!("{name}: grid is empty"))
            } else {
                Ok(())
            }
        };
        match &self.experiment {
            Experiment::ProxEval(p) => p.u.validate("u")?,
            Experiment::AmpRun(p) => {
                if p.input.is_none() {
                    p.instance.validate()?;
                }
                p.amp.validate()?;
            }
            Experiment::SeRun(_) => {}
            Experiment::SeFixedPoints(p) => {
                if let Some(g) = &p.sigma_w {
                    g.validate("sigma_w")?;
                }
            }
            Experiment::PtCurve(p) => {
                nonempty("p_grid", &p.p_grid)?;
                p.delta.validate("delta")?;
                if p.curves.is_empty() {
                    return cfg("curves: list is empty".into());
                }
            }
            Experiment::NoiseCurve(p) => {
                nonempty("p_grid", &p.p_grid)?;
                p.sigma_w.validate("sigma_w")?;
            }
            Experiment::SureCurve(p) => {
                p.instance.validate()?;
                p.amp.validate()?;
                nonempty("p_grid", &p.p_grid)?;
                if p.iteration == 0 {
                    return cfg("iteration must be at least 1".into());
                }
                if let Some(g) = &p.lambda {
                    g.validate("lambda")?;
                }
            }
            Experiment::McCompare(p) => {
                p.instance.validate()?;
                if p.trials == 0 {
                    return cfg("trials (seeds) must be at least 1".into());
                }
                if p.configs.is_empty() {
                    return cfg("configs: list is empty".into());
                }
                for c in &p.configs {
                    c.validate()?;
                }
            }
        }
        Ok(())
    }
}
