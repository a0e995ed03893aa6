//! One function per experiment kind. Column orders are part of the interface and listed on
//! each function.

use std::path::Path;

use lpamp::amp::{self, Instance};
use lpamp::instance::generate;
use lpamp::minimax::{Minimax, MinimaxError, Which};
use lpamp::montecarlo::mc_compare;
use lpamp::prox::{Prox, ProxParams};
use lpamp::quad::DEFAULT_ORDER;
use lpamp::se::{Policy, SeConfig, StateEvolution};
use lpamp::smooth::{SmoothProx, SmoothProxParams};
use lpamp::SignalPrior;

use crate::config::{
    AmpRunParams, CurveKind, Experiment, ExperimentConfig, InputFiles, McCompareParams,
    NoiseCurveParams, ProxEvalParams, PtCurveParams, SeFixedPointsParams, SeRunParams,
    SureCurveParams,
};
use crate::error::CliError;
use crate::output::{num, opt, Table};

pub fn run(cfg: &ExperimentConfig) -> Result<(), CliError> {
    let out = cfg.out.as_deref();
    let order = cfg.quad_order.unwrap_or(DEFAULT_ORDER);
    match &cfg.experiment {
        Experiment::ProxEval(p) => prox_eval(p, out),
        Experiment::AmpRun(p) => amp_run(p, out),
        Experiment::SeRun(p) => se_run(p, order, cfg.quad_order.is_some(), out),
        Experiment::SeFixedPoints(p) => se_fixed_points(p, order, cfg.quad_order.is_some(), out),
        Experiment::PtCurve(p) => pt_curve(p, order, out),
        Experiment::NoiseCurve(p) => noise_curve(p, order, out),
        Experiment::SureCurve(p) => sure_curve(p, out),
        Experiment::McCompare(p) => mc(p, order, out),
    }
}

fn se_config(base: &SeConfig, order: usize, override_order: bool) -> SeConfig {
    let mut c = base.clone();
    if override_order {
        c.quad_order = order;
    }
    c
}

/// Columns: u, eta, d1, d2, eta_tilde, d_eta_tilde.
fn prox_eval(p: &ProxEvalParams, out: Option<&Path>) -> Result<(), CliError> {
    let prox = Prox::new(&ProxParams::new(p.p, p.lambda)?)?;
    let smooth = SmoothProx::new(&SmoothProxParams::new(p.p, p.lambda, p.h)?)?;
    let mut t = Table::create(out, &["u", "eta", "d1", "d2", "eta_tilde", "d_eta_tilde"])?;
    for u in p.u.values() {
        let e = prox.eval(u)?;
        let (v, d) = smooth.value_and_deriv(u);
        t.row([num(u), num(e.value), opt(e.d1), opt(e.d2), num(v), num(d)])?;
    }
    t.finish()
}

fn read_column(path: &Path) -> Result<Vec<f64>, CliError> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(false)
        .from_path(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let mut v = Vec::new();
    for (line, rec) in r.records().enumerate() {
        for field in rec?.iter() {
            v.push(parse_value(field, path, line + 1)?);
        }
    }
    Ok(v)
}

fn parse_value(field: &str, path: &Path, line: usize) -> Result<f64, CliError> {
    field.trim().parse().map_err(|_| {
        CliError::Config(format!("{}: line {line}: \"{field}\" is not a number", path.display()))
    })
}

/// Reads A (one row per line), y, and optionally x_true.
fn read_instance(files: &InputFiles) -> Result<Instance<f64>, CliError> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(false)
        .from_path(&files.a)
        .map_err(|e| CliError::Io(format!("{}: {e}", files.a.display())))?;
    let (mut a, mut rows, mut cols) = (Vec::new(), 0, None);
    for (line, rec) in r.records().enumerate() {
        let rec = rec?;
        if *cols.get_or_insert(rec.len()) != rec.len() {
            return Err(CliError::Config(format!(
                "{}: line {}: expected {} columns, found {}",
                files.a.display(),
                line + 1,
                cols.unwrap_or(0),
                rec.len()
            )));
        }
        for field in rec.iter() {
            a.push(parse_value(field, &files.a, line + 1)?);
        }
        rows += 1;
    }
    let y = read_column(&files.y)?;
    let x_true = files.x_true.as_deref().map(read_column).transpose()?;
    Ok(Instance::new(a, rows, cols.unwrap_or(0), y, x_true, files.sigma_w)?)
}

/// Columns: t, sigma_hat, lambda, p, h, mse, sure, sigma_hat_next.
fn amp_run(p: &AmpRunParams, out: Option<&Path>) -> Result<(), CliError> {
    let inst = match &p.input {
        Some(files) => read_instance(files)?,
        None => {
            let g = generate::<f64>(&p.instance, p.trial)?;
            if let Some(w) = g.warning {
                eprintln!("warning: {w}");
            }
            g.instance
        }
    };
    let run = amp::run(&inst, &p.amp)?;
    let mut t = Table::create(
        out,
        &["t", "sigma_hat", "lambda", "p", "h", "mse", "sure", "sigma_hat_next"],
    )?;
    for r in &run.records {
        t.row([
            r.t.to_string(),
            num(r.sigma_hat),
            num(r.lambda),
            num(r.p),
            num(r.h),
            opt(r.mse),
            num(r.sure),
            num(r.sigma_hat_next),
        ])?;
    }
    t.finish()
}

/// Columns: t, sigma_sq, lambda, p, risk, next. Row t holds σ_t² and the step it drives.
fn se_run(p: &SeRunParams, order: usize, ov: bool, out: Option<&Path>) -> Result<(), CliError> {
    let cfg = se_config(&p.se, order, ov);
    let s0 =
        p.sigma0_sq.unwrap_or(cfg.prior.second_moment() / cfg.delta + cfg.sigma_w * cfg.sigma_w);
    let se = StateEvolution::new(cfg)?;
    let traj = se.iterate(&p.policy, s0, p.t_max, p.tol)?;
    let mut t = Table::create(out, &["t", "sigma_sq", "lambda", "p", "risk", "next"])?;
    for (i, s) in traj.steps.iter().enumerate() {
        t.row([i.to_string(), num(s.sigma_sq), num(s.lambda), num(s.p), num(s.risk), num(s.next)])?;
    }
    t.finish()
}

/// Columns: sigma_w, sigma_sq, excess, class.
fn se_fixed_points(
    p: &SeFixedPointsParams,
    order: usize,
    ov: bool,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let base = se_config(&p.se, order, ov);
    let levels = p.sigma_w.as_ref().map(|g| g.values()).unwrap_or_else(|| vec![base.sigma_w]);
    let mut t = Table::create(out, &["sigma_w", "sigma_sq", "excess", "class"])?;
    for sw in levels {
        let se = StateEvolution::new(SeConfig { sigma_w: sw, ..base.clone() })?;
        let max = p.sigma_sq_max.unwrap_or_else(|| se.min_sigma_sq_max());
        let report = se.fixed_points(&p.policy, max)?;
        for w in &report.warnings {
            eprintln!("warning (sigma_w = {sw}): {w}");
        }
        for f in &report.points {
            let class =
                serde_json::to_value(f.class).ok().and_then(|v| v.as_str().map(String::from));
            t.row([num(sw), num(f.sigma_sq), num(f.excess), class.unwrap_or_default()])?;
        }
    }
    t.finish()
}

/// Columns: curve, p, delta, epsilon, monotone.
fn pt_curve(p: &PtCurveParams, order: usize, out: Option<&Path>) -> Result<(), CliError> {
    let mm = Minimax::new(order)?.with_env_cache();
    let mut t = Table::create(out, &["curve", "p", "delta", "epsilon", "monotone"])?;
    let deltas = p.delta.values();
    for &curve in &p.curves {
        match curve {
            CurveKind::Continuation => {
                for &d in &deltas {
                    let (best_p, eps) = mm.continuation_pt(d, &p.p_grid)?;
                    t.row([curve.name().into(), num(best_p), num(d), num(eps), String::new()])?;
                }
            }
            CurveKind::Bar | CurveKind::Under => {
                let which = if curve == CurveKind::Bar { Which::Bar } else { Which::Under };
                for &pp in &p.p_grid {
                    for &d in &deltas {
                        let tr = mm.eps_star_p(d, pp, which)?;
                        if !tr.monotone {
                            eprintln!("warning: minimax values not monotone in eps at p = {pp}, delta = {d}");
                        }
                        t.row([
                            curve.name().into(),
                            num(pp),
                            num(d),
                            num(tr.epsilon),
                            tr.monotone.to_string(),
                        ])?;
                    }
                }
            }
        }
    }
    t.finish()
}

/// Columns: policy, sigma_w, lowest_ratio, highest_ratio, bound_ratio.
///
/// Ratios are σ²/σ_w² at the lowest and highest stable fixed points; `bound_ratio` is
/// 1/(1 − M̄_p(ε)/δ), `inf` when M̄_p(ε) ≥ δ, and empty for the adaptive rows.
fn noise_curve(p: &NoiseCurveParams, order: usize, out: Option<&Path>) -> Result<(), CliError> {
    let prior = SignalPrior::new(p.epsilon, p.nonzero.clone())
        .map_err(|e| CliError::Config(e.to_string()))?;
    let mm = Minimax::new(order)?.with_env_cache();
    let mut policies: Vec<(String, Policy, Option<f64>)> = Vec::new();
    for &pp in &p.p_grid {
        let bound = match mm.noise_sensitivity_bound(p.delta, p.epsilon, pp) {
            Ok(b) => b,
            Err(MinimaxError::BoundUndefined { .. }) => f64::INFINITY,
            Err(e) => return Err(e.into()),
        };
        policies.push((format!("p={pp}"), Policy::Optimal { p: pp }, Some(bound)));
    }
    if p.adaptive {
        policies.push(("adaptive".into(), Policy::Adaptive { p_grid: p.p_grid.clone() }, None));
    }
    let mut t =
        Table::create(out, &["policy", "sigma_w", "lowest_ratio", "highest_ratio", "bound_ratio"])?;
    for (name, policy, bound) in &policies {
        for sw in p.sigma_w.values() {
            let cfg = SeConfig { quad_order: order, ..SeConfig::new(p.delta, sw, prior.clone()) };
            let se = StateEvolution::new(cfg)?;
            let report = se.fixed_points(policy, se.min_sigma_sq_max())?;
            for w in &report.warnings {
                eprintln!("warning ({name}, sigma_w = {sw}): {w}");
            }
            let sw2 = sw * sw;
            let ratio = |e: Option<f64>| e.map(|e| 1.0 + e / sw2);
            t.row([
                name.clone(),
                num(sw),
                opt(ratio(report.lowest_stable_excess())),
                opt(ratio(report.highest_stable_excess())),
                opt(*bound),
            ])?;
        }
    }
    t.finish()
}

/// Columns: p, sigma_hat, lambda, sure, loss, selected. `loss` is the realized
/// (1/N)‖η̃(v) − x_o‖² and `selected` marks the SURE minimizer.
fn sure_curve(p: &SureCurveParams, out: Option<&Path>) -> Result<(), CliError> {
    let g = generate::<f64>(&p.instance, p.trial)?;
    if let Some(w) = g.warning {
        eprintln!("warning: {w}");
    }
    let inst = g.instance;
    let mut state = amp::init(&inst);
    for _ in 1..p.iteration {
        state = amp::step(&state, &inst, &p.amp)?.0;
    }
    let v = state.pseudo_data();
    let sigma = state.sigma_hat;
    let h = state.h_t;
    let x_true = inst.x_true.as_ref();
    let mut t = Table::create(out, &["p", "sigma_hat", "lambda", "sure", "loss", "selected"])?;
    for &pp in &p.p_grid {
        let grid = match &p.lambda {
            Some(g) => g.values(),
            None => amp::default_lambda_grid(sigma, pp),
        };
        let curve = amp::sure_curve(&v, sigma, pp, h, &grid)?;
        for &(lambda, sure) in &curve.points {
            let loss = x_true
                .map(|x| -> Result<f64, CliError> {
                    let sp = SmoothProx::new(&SmoothProxParams::new(pp, lambda, h)?)?;
                    let s: f64 =
                        v.iter().zip(x).map(|(&vi, &xi)| (sp.value(vi) - xi).powi(2)).sum();
                    Ok(s / x.len() as f64)
                })
                .transpose()?;
            t.row([
                num(pp),
                num(sigma),
                num(lambda),
                num(sure),
                opt(loss),
                (lambda == curve.lambda_hat).to_string(),
            ])?;
        }
    }
    t.finish()
}

/// Columns: config, t, se_mse, mc_mean, ci_lo, ci_hi.
fn mc(p: &McCompareParams, order: usize, out: Option<&Path>) -> Result<(), CliError> {
    let curves = mc_compare(&p.instance, p.trials, &p.configs, order)?;
    let mut t = Table::create(out, &["config", "t", "se_mse", "mc_mean", "ci_lo", "ci_hi"])?;
    for (i, rows) in curves.iter().enumerate() {
        for r in rows {
            t.row([
                i.to_string(),
                r.t.to_string(),
                num(r.se_mse),
                num(r.mc_mean),
                num(r.ci_lo),
                num(r.ci_hi),
            ])?;
        }
    }
    t.finish()
}
