//! Seeded Monte Carlo comparison of AMP against the state-evolution prediction.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::amp::{self, AmpConfig, AmpError, LambdaPolicy};
use crate::instance::{generate, InstanceError, InstanceSpec};
use crate::prior::SignalPrior;
use crate::se::{Policy, SeConfig, SeError, StateEvolution};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum McError {
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error(transparent)]
    Amp(#[from] AmpError),
    #[error(transparent)]
    Se(#[from] SeError),
    #[error("invalid Monte Carlo configuration: {0}")]
    Config(String),
}

/// Per-iteration comparison; the CI is mean ± 1.96·stderr over trials.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McRow {
    pub t: usize,
    pub se_mse: f64,
    pub mc_mean: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
}

impl McRow {
    /// Half-width of the 95% interval.
    pub fn half_width(&self) -> f64 {
        0.5 * (self.ci_hi - self.ci_lo)
    }

    pub fn covers_se(&self) -> bool {
        self.ci_lo <= self.se_mse && self.se_mse <= self.ci_hi
    }
}

/// State-evolution policy matching an AMP λ policy.
///
/// SURE tuning is paired with the oracle adaptation policy over the same exponents, which
/// is what SURE estimates; fixed schedules have no state-evolution counterpart.
pub fn se_policy(policy: &LambdaPolicy) -> Result<Policy, McError> {
    Ok(match policy {
        LambdaPolicy::Fixed { lambda, p } => Policy::Fixed { lambda: *lambda, p: *p },
        LambdaPolicy::TauScaled { tau, p } => Policy::TauScaled { tau: *tau, p: *p },
        LambdaPolicy::TauPower { tau, p } => Policy::TauPower { tau: *tau, p: *p },
        LambdaPolicy::Sure { p_grid } => Policy::Adaptive { p_grid: p_grid.clone() },
        LambdaPolicy::Schedule { .. } => {
            return Err(McError::Config(
                "lambda schedules have no state-evolution prediction".into(),
            ))
        }
    })
}

/// Predicted MSE E(η(X + σ_{t−1}Z; λ_t) − X)² for t = 1..=t_max, started at
/// σ₀² = E X²/δ + σ_w², the zero-initialization value.
pub fn se_prediction(cfg: &SeConfig, policy: &Policy, t_max: usize) -> Result<Vec<f64>, McError> {
    let se = StateEvolution::new(cfg.clone())?;
    let s0 = cfg.prior.second_moment() / cfg.delta + cfg.sigma_w * cfg.sigma_w;
    let traj = se.iterate(policy, s0, t_max, 0.0)?;
    Ok(traj.steps.iter().map(|s| s.risk).collect())
}

/// Runs every configuration for exactly `t_max` iterations on `trials` shared instances
/// (trial k uses stream k of `spec.seed`) and returns one curve per configuration.
///
/// The state-evolution prior uses the realized sparsity round(εN)/N.
pub fn mc_compare(
    spec: &InstanceSpec,
    trials: usize,
    configs: &[AmpConfig],
    quad_order: usize,
) -> Result<Vec<Vec<McRow>>, McError> {
    if trials == 0 {
        return Err(McError::Config("at least one trial is required".into()));
    }
    if configs.is_empty() {
        return Err(McError::Config("no AMP configurations given".into()));
    }
    spec.validate()?;
    for c in configs {
        c.validate()?;
    }
    let fixed: Vec<AmpConfig> =
        configs.iter().map(|c| AmpConfig { tol: 0.0, ..c.clone() }).collect();

    let eps = spec.nonzeros() as f64 / spec.big_n as f64;
    let prior = SignalPrior { epsilon: eps, nonzero: spec.prior.nonzero.clone() };
    let delta = spec.rows() as f64 / spec.big_n as f64;
    let se_cfg = SeConfig { delta, sigma_w: spec.sigma_w, prior, quad_order };
    let predictions = fixed
        .iter()
        .map(|c| se_prediction(&se_cfg, &se_policy(&c.policy)?, c.t_max))
        .collect::<Result<Vec<_>, _>>()?;

    // Indexed by trial, then configuration, then iteration; summed in trial order so the
    // result does not depend on scheduling.
    let per_trial: Vec<Vec<Vec<f64>>> = (0..trials as u64)
        .into_par_iter()
        .map(|trial| -> Result<Vec<Vec<f64>>, McError> {
            let inst = generate::<f64>(spec, trial)?.instance;
            fixed
                .iter()
                .map(|c| {
                    let run = amp::run(&inst, c)?;
                    Ok(run.records.iter().map(|r| r.mse.unwrap_or(f64::NAN)).collect())
                })
                .collect()
        })
        .collect::<Result<_, _>>()?;

    let k = trials as f64;
    let mut curves = Vec::with_capacity(fixed.len());
    for (ci, c) in fixed.iter().enumerate() {
        let mut rows = Vec::with_capacity(c.t_max);
        for t in 0..c.t_max {
            let mean = per_trial.iter().map(|tr| tr[ci][t]).sum::<f64>() / k;
            let var = if trials > 1 {
                per_trial.iter().map(|tr| (tr[ci][t] - mean).powi(2)).sum::<f64>() / (k - 1.0)
            } else {
                0.0
            };
            let half = 1.96 * (var / k).sqrt();
            rows.push(McRow {
                t: t + 1,
                se_mse: predictions[ci][t],
                mc_mean: mean,
                ci_lo: mean - half,
                ci_hi: mean + half,
            });
        }
        curves.push(rows);
    }
    Ok(curves)
}
