//! The ℓp-AMP iteration with the smoothed proximal denoiser, Onsager correction, noise
//! estimation σ̂_t = ‖z^t‖/√n and SURE-based parameter tuning.
//!
//! One step maps (x^{t−1}, z^{t−1}) to
//!
//! ```text
//! v   = Aᵀz^{t−1} + x^{t−1}
//! x^t = η̃_{p,h}(v; λ_t)
//! z^t = y − A x^t + z^{t−1} · (1/δ)⟨η̃'_{p,h}(v; λ_t)⟩
//! ```
//!
//! with h_t = σ̂_{t−1}/N^{1/3}.

use std::fmt::Debug;

use num_traits::Float;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lit;
use crate::optim::{golden_min, log_grid};
use crate::prox::ProxError;
use crate::smooth::{SmoothProx, SmoothProxParams};

/// Scalar types AMP runs in.
pub trait Scalar: Float + Send + Sync + Debug + 'static {}
impl<T: Float + Send + Sync + Debug + 'static> Scalar for T {}

/// Number of log-spaced λ values per exponent in the default SURE grid.
pub const SURE_GRID_POINTS: usize = 40;
/// Default SURE grid spans [lo, hi]·σ̂^{2−p}.
pub const SURE_GRID_SPAN: (f64, f64) = (1e-3, 10.0);

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AmpError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("AMP diverged at iteration {t}: non-finite values")]
    Diverged { t: usize },
    #[error(transparent)]
    Prox(#[from] ProxError),
    #[error("SURE tuning needs nonempty p and lambda grids")]
    EmptyGrid,
    #[error("invalid AMP configuration: {0}")]
    Config(String),
}

/// Measurements y = A x_o + w with a dense row-major n×N matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance<F> {
    /// Row-major entries, `a[i * N + j] = A_ij`.
    pub a: Vec<F>,
    pub y: Vec<F>,
    pub x_true: Option<Vec<F>>,
    pub sigma_w: F,
    n: usize,
    big_n: usize,
}

impl<F: Scalar> Instance<F> {
    pub fn new(
        a: Vec<F>,
        n: usize,
        big_n: usize,
        y: Vec<F>,
        x_true: Option<Vec<F>>,
        sigma_w: F,
    ) -> Result<Self, AmpError> {
        if n == 0 || n > big_n {
            return Err(AmpError::Dimension(format!("need 0 < n <= N, got n = {n}, N = {big_n}")));
        }
        if a.len() != n * big_n {
            return Err(AmpError::Dimension(format!(
                "A has {} entries, expected {n} x {big_n}",
                a.len()
            )));
        }
        if y.len() != n {
            return Err(AmpError::Dimension(format!("y has length {}, expected {n}", y.len())));
        }
        if let Some(x) = &x_true {
            if x.len() != big_n {
                return Err(AmpError::Dimension(format!(
                    "x_true has length {}, expected {big_n}",
                    x.len()
                )));
            }
        }
        Ok(Self { a, y, x_true, sigma_w, n, big_n })
    }

    pub fn rows(&self) -> usize {
        self.n
    }

    pub fn cols(&self) -> usize {
        self.big_n
    }

    /// δ = n/N.
    pub fn delta(&self) -> F {
        lit::<F>(self.n as f64) / lit(self.big_n as f64)
    }

    fn row(&self, i: usize) -> &[F] {
        &self.a[i * self.big_n..(i + 1) * self.big_n]
    }

    /// A x.
    pub fn apply(&self, x: &[F]) -> Vec<F> {
        (0..self.n).map(|i| dot(self.row(i), x)).collect()
    }

    /// Aᵀ z.
    pub fn apply_t(&self, z: &[F]) -> Vec<F> {
        let mut out = vec![F::zero(); self.big_n];
        for (i, &zi) in z.iter().enumerate() {
            axpy(zi, self.row(i), &mut out);
        }
        out
    }

    /// (1/N)‖x − x_o‖², if the ground truth is known.
    pub fn mse(&self, x: &[F]) -> Option<F> {
        self.x_true.as_ref().map(|xt| {
            let s = x.iter().zip(xt).fold(F::zero(), |acc, (&a, &b)| acc + (a - b) * (a - b));
            s / lit(self.big_n as f64)
        })
    }
}

fn dot<F: Float>(a: &[F], b: &[F]) -> F {
    a.iter().zip(b).fold(F::zero(), |acc, (&x, &y)| acc + x * y)
}

fn axpy<F: Float>(alpha: F, x: &[F], y: &mut [F]) {
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi = *yi + alpha * xi;
    }
}

fn norm_sq<F: Float>(v: &[F]) -> F {
    v.iter().fold(F::zero(), |acc, &x| acc + x * x)
}

/// How λ_t and p_t are chosen at each iteration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LambdaPolicy {
    Fixed {
        lambda: f64,
        p: f64,
    },
    /// λ_t = `lambdas[t − 1]`, repeating the last entry once the schedule runs out.
    Schedule {
        lambdas: Vec<f64>,
        p: f64,
    },
    /// λ_t = τσ̂^{2−p}.
    TauScaled {
        tau: f64,
        p: f64,
    },
    /// λ_t = τσ̂^p.
    TauPower {
        tau: f64,
        p: f64,
    },
    /// (λ_t, p_t) minimizing SURE over `p_grid` and the default λ grid.
    Sure {
        p_grid: Vec<f64>,
    },
}

impl LambdaPolicy {
    fn validate(&self) -> Result<(), AmpError> {
        let ps: Vec<f64> = match self {
            Self::Fixed { p, .. }
            | Self::Schedule { p, .. }
            | Self::TauScaled { p, .. }
            | Self::TauPower { p, .. } => vec![*p],
            Self::Sure { p_grid } => p_grid.clone(),
        };
        if ps.is_empty() {
            return Err(AmpError::EmptyGrid);
        }
        if let Some(p) = ps.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(AmpError::Prox(ProxError::InvalidExponent(*p)));
        }
        if let Self::Schedule { lambdas, .. } = self {
            if lambdas.is_empty() {
                return Err(AmpError::Config("empty lambda schedule".into()));
            }
        }
        Ok(())
    }
}

fn default_t_max() -> usize {
    50
}

fn default_tol() -> f64 {
    1e-6
}

fn default_true() -> bool {
    true
}

fn default_h_scale() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmpConfig {
    pub policy: LambdaPolicy,
    #[serde(default = "default_t_max")]
    pub t_max: usize,
    /// Stop once |σ̂_t − σ̂_{t−1}| < tol·σ̂_t; `0` runs all `t_max` iterations.
    #[serde(default = "default_tol")]
    pub tol: f64,
    /// Disabling the Onsager term gives plain iterative thresholding.
    #[serde(default = "default_true")]
    pub onsager: bool,
    /// Bandwidth rule h_t = h_scale·σ̂_t/N^{1/3}.
    #[serde(default = "default_h_scale")]
    pub h_scale: f64,
}

impl AmpConfig {
    pub fn new(policy: LambdaPolicy) -> Self {
        Self {
            policy,
            t_max: default_t_max(),
            tol: default_tol(),
            onsager: true,
            h_scale: default_h_scale(),
        }
    }

    /// Exactly `t` iterations, no early stopping.
    pub fn fixed_iterations(policy: LambdaPolicy, t: usize) -> Self {
        Self { t_max: t, tol: 0.0, ..Self::new(policy) }
    }

    pub fn validate(&self) -> Result<(), AmpError> {
        self.policy.validate()?;
        if !(self.tol >= 0.0) {
            return Err(AmpError::Config(format!("tol = {} must be >= 0", self.tol)));
        }
        if !(self.h_scale > 0.0 && self.h_scale.is_finite()) {
            return Err(AmpError::Config(format!("h_scale = {} must be positive", self.h_scale)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AmpState<F> {
    pub x: Vec<F>,
    pub z: Vec<F>,
    /// Aᵀz, carried over from the fused update.
    atz: Vec<F>,
    pub t: usize,
    pub sigma_hat: F,
    pub lambda_t: F,
    pub p_t: F,
    /// Positive bandwidth; equals the smallest positive normal number while σ̂ = 0.
    pub h_t: F,
}

impl<F: Scalar> AmpState<F> {
    /// Aᵀz^t + x^t, the pseudo-data the next denoiser sees.
    pub fn pseudo_data(&self) -> Vec<F> {
        self.atz.iter().zip(&self.x).map(|(&a, &b)| a + b).collect()
    }
}

fn bandwidth<F: Scalar>(sigma_hat: F, big_n: usize, h_scale: f64) -> F {
    let h = lit::<F>(h_scale) * sigma_hat / lit::<F>(big_n as f64).cbrt();
    if h > F::zero() {
        h
    } else {
        F::min_positive_value()
    }
}

fn state_from<F: Scalar>(inst: &Instance<F>, x: Vec<F>, z: Vec<F>) -> AmpState<F> {
    let atz = inst.apply_t(&z);
    let sigma_hat = (norm_sq(&z) / lit(inst.rows() as f64)).sqrt();
    AmpState {
        x,
        z,
        atz,
        t: 0,
        sigma_hat,
        lambda_t: F::zero(),
        p_t: F::one(),
        h_t: bandwidth(sigma_hat, inst.cols(), 1.0),
    }
}

/// x⁰ = 0, z⁰ = y, σ̂₀ = ‖y‖/√n.
pub fn init<F: Scalar>(inst: &Instance<F>) -> AmpState<F> {
    state_from(inst, vec![F::zero(); inst.cols()], inst.y.clone())
}

/// Warm start at x⁰ = `x_init` with z⁰ = y − A x⁰.
pub fn init_warm<F: Scalar>(inst: &Instance<F>, x_init: &[F]) -> Result<AmpState<F>, AmpError> {
    if x_init.len() != inst.cols() {
        return Err(AmpError::Dimension(format!(
            "x_init has length {}, expected {}",
            x_init.len(),
            inst.cols()
        )));
    }
    let ax = inst.apply(x_init);
    let z = inst.y.iter().zip(&ax).map(|(&y, &a)| y - a).collect();
    Ok(state_from(inst, x_init.to_vec(), z))
}

/// SURE for denoising `v = x_o + σ̂Z` with η̃_{p,h}(·; λ):
/// (1/N)‖η̃(v) − v‖² − σ̂² + (2σ̂²/N)Σ η̃'(v_i).
pub fn sure_estimate<F: Scalar>(
    v: &[F],
    sigma_hat: F,
    p: F,
    h: F,
    lambda: F,
) -> Result<F, AmpError> {
    let sp = SmoothProx::new(&SmoothProxParams::new(p, lambda, h)?)?;
    Ok(sure_with(&sp, v, sigma_hat))
}

fn sure_with<F: Scalar>(sp: &SmoothProx<F>, v: &[F], sigma_hat: F) -> F {
    let (mut res, mut div) = (F::zero(), F::zero());
    for &vi in v {
        let (e, d) = sp.value_and_deriv(vi);
        res = res + (e - vi) * (e - vi);
        div = div + d;
    }
    let nn = lit::<F>(v.len() as f64);
    let s2 = sigma_hat * sigma_hat;
    res / nn - s2 + lit::<F>(2.0) * s2 * div / nn
}

/// SURE values over a λ grid at fixed (p, h, σ̂).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SureCurve<F> {
    pub p: F,
    pub h: F,
    pub sigma_hat: F,
    /// (λ, r̂), sorted by λ.
    pub points: Vec<(F, F)>,
    pub lambda_hat: F,
}

/// SURE curve over `lambdas`; the argmin prefers the larger λ on ties.
pub fn sure_curve<F: Scalar>(
    v: &[F],
    sigma_hat: F,
    p: F,
    h: F,
    lambdas: &[F],
) -> Result<SureCurve<F>, AmpError> {
    if lambdas.is_empty() {
        return Err(AmpError::EmptyGrid);
    }
    let mut grid = lambdas.to_vec();
    grid.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let points = grid
        .iter()
        .map(|&l| Ok((l, sure_estimate(v, sigma_hat, p, h, l)?)))
        .collect::<Result<Vec<_>, AmpError>>()?;
    let lambda_hat = points[argmin_last(points.iter().map(|q| q.1))].0;
    Ok(SureCurve { p, h, sigma_hat, points, lambda_hat })
}

/// Index of the minimum, taking the last one among ties.
fn argmin_last<F: Float>(vals: impl Iterator<Item = F>) -> usize {
    let mut best = (0, F::infinity());
    for (i, v) in vals.enumerate() {
        if v <= best.1 {
            best = (i, v);
        }
    }
    best.0
}

/// Default SURE λ grid for exponent p: 40 log points over [10⁻³, 10]·σ̂^{2−p}.
pub fn default_lambda_grid<F: Scalar>(sigma_hat: F, p: F) -> Vec<F> {
    let s = sigma_hat.to_f64().unwrap_or(0.0).powf(2.0 - p.to_f64().unwrap_or(1.0));
    let (lo, hi) = SURE_GRID_SPAN;
    log_grid(lo * s, hi * s, SURE_GRID_POINTS).into_iter().map(lit).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SureChoice<F> {
    pub lambda: F,
    pub p: F,
    pub sure: F,
}

/// (λ̂, p̂) minimizing SURE over `p_grid` × λ grid.
///
/// With `lambda_grid = None` each p uses [`default_lambda_grid`] followed by a golden-section
/// refinement in log λ between the neighbours of the grid minimum; an explicit grid is
/// searched as given. Ties go to the larger λ, then to the earlier p.
pub fn tune<F: Scalar>(
    v: &[F],
    sigma_hat: F,
    h: F,
    p_grid: &[F],
    lambda_grid: Option<&[F]>,
) -> Result<SureChoice<F>, AmpError> {
    if p_grid.is_empty() {
        return Err(AmpError::EmptyGrid);
    }
    let mut best: Option<SureChoice<F>> = None;
    for &p in p_grid {
        let default;
        let grid = match lambda_grid {
            Some(g) => g,
            None => {
                default = default_lambda_grid(sigma_hat, p);
                &default[..]
            }
        };
        let curve = sure_curve(v, sigma_hat, p, h, grid)?;
        let i = argmin_last(curve.points.iter().map(|q| q.1));
        let mut choice = SureChoice { lambda: curve.points[i].0, p, sure: curve.points[i].1 };
        let refine =
            lambda_grid.is_none() && curve.points.len() > 1 && curve.points[0].0 > F::zero();
        if refine {
            let left = curve.points[i.saturating_sub(1)].0.to_f64().unwrap_or(0.0);
            let right = curve.points[(i + 1).min(curve.points.len() - 1)].0.to_f64().unwrap_or(0.0);
            let mut failure = None;
            let (lx, lf) = golden_min(
                |x| match sure_estimate(v, sigma_hat, p, h, lit(x.exp())) {
                    Ok(r) => r.to_f64().unwrap_or(f64::INFINITY),
                    Err(e) => {
                        failure = Some(e);
                        f64::INFINITY
                    }
                },
                left.ln(),
                right.ln(),
                1e-6,
                1.0,
            );
            if let Some(e) = failure {
                return Err(e);
            }
            let lf = lit::<F>(lf);
            if lf < choice.sure {
                choice = SureChoice { lambda: lit(lx.exp()), p, sure: lf };
            }
        }
        if best.map_or(true, |b| choice.sure < b.sure) {
            best = Some(choice);
        }
    }
    best.ok_or(AmpError::EmptyGrid)
}

/// Parameters and diagnostics of one AMP iteration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AmpRecord<F> {
    /// Iteration index t ≥ 1.
    pub t: usize,
    /// σ̂_{t−1}, the noise level of the pseudo-data denoised at this iteration.
    pub sigma_hat: F,
    pub lambda: F,
    pub p: F,
    pub h: F,
    /// (1/N)‖x^t − x_o‖² when the ground truth is known.
    pub mse: Option<F>,
    /// SURE at the chosen (λ, p), an estimate of `mse`.
    pub sure: F,
    /// σ̂_t after the update.
    pub sigma_hat_next: F,
}

fn policy_params<F: Scalar>(
    policy: &LambdaPolicy,
    t: usize,
    sigma: F,
    v: &[F],
    h: F,
) -> Result<(F, F), AmpError> {
    let pow = |tau: f64, e: f64| lit::<F>(tau) * sigma.powf(lit(e));
    Ok(match policy {
        LambdaPolicy::Fixed { lambda, p } => (lit(*lambda), lit(*p)),
        LambdaPolicy::Schedule { lambdas, p } => {
            let l = lambdas[(t - 1).min(lambdas.len() - 1)];
            (lit(l), lit(*p))
        }
        LambdaPolicy::TauScaled { tau, p } => (pow(*tau, 2.0 - p), lit(*p)),
        LambdaPolicy::TauPower { tau, p } => (pow(*tau, *p), lit(*p)),
        LambdaPolicy::Sure { p_grid } => {
            let ps: Vec<F> = p_grid.iter().map(|&p| lit(p)).collect();
            let c = tune(v, sigma, h, &ps, None)?;
            (c.lambda, c.p)
        }
    })
}

/// One AMP update. When σ̂ = 0 the residual vanishes and the state is a fixed point; it is
/// returned unchanged apart from the iteration counter.
pub fn step<F: Scalar>(
    state: &AmpState<F>,
    inst: &Instance<F>,
    cfg: &AmpConfig,
) -> Result<(AmpState<F>, AmpRecord<F>), AmpError> {
    if state.x.len() != inst.cols() || state.z.len() != inst.rows() {
        return Err(AmpError::Dimension("state does not match the instance".into()));
    }
    let t = state.t + 1;
    let sigma = state.sigma_hat;
    if sigma == F::zero() {
        let mut next = state.clone();
        next.t = t;
        let record = AmpRecord {
            t,
            sigma_hat: sigma,
            lambda: state.lambda_t,
            p: state.p_t,
            h: state.h_t,
            mse: inst.mse(&state.x),
            sure: F::zero(),
            sigma_hat_next: sigma,
        };
        return Ok((next, record));
    }
    let (n, big_n) = (inst.rows(), inst.cols());
    let v = state.pseudo_data();
    let h = bandwidth(sigma, big_n, cfg.h_scale);
    let (lambda, p) = policy_params(&cfg.policy, t, sigma, &v, h)?;
    let sp = SmoothProx::new(&SmoothProxParams::new(p, lambda, h)?)?;

    let mut x = vec![F::zero(); big_n];
    let (mut div, mut res) = (F::zero(), F::zero());
    for ((xi, &vi), _) in x.iter_mut().zip(&v).zip(0..) {
        let (e, d) = sp.value_and_deriv(vi);
        *xi = e;
        div = div + d;
        res = res + (e - vi) * (e - vi);
    }
    let nn = lit::<F>(big_n as f64);
    let s2 = sigma * sigma;
    let sure = res / nn - s2 + lit::<F>(2.0) * s2 * div / nn;
    let onsager = if cfg.onsager { div / lit(n as f64) } else { F::zero() };

    // Single pass over A: row i gives (Ax)_i, hence z_i, which is then scattered into Aᵀz.
    let mut z = vec![F::zero(); n];
    let mut atz = vec![F::zero(); big_n];
    for i in 0..n {
        let row = inst.row(i);
        let zi = inst.y[i] - dot(row, &x) + onsager * state.z[i];
        z[i] = zi;
        axpy(zi, row, &mut atz);
    }
    let sigma_next = (norm_sq(&z) / lit(n as f64)).sqrt();
    if !sigma_next.is_finite() || !sure.is_finite() {
        return Err(AmpError::Diverged { t });
    }
    let record = AmpRecord {
        t,
        sigma_hat: sigma,
        lambda,
        p,
        h,
        mse: inst.mse(&x),
        sure,
        sigma_hat_next: sigma_next,
    };
    let next = AmpState {
        x,
        z,
        atz,
        t,
        sigma_hat: sigma_next,
        lambda_t: lambda,
        p_t: p,
        h_t: bandwidth(sigma_next, big_n, cfg.h_scale),
    };
    Ok((next, record))
}

#[derive(Debug, Clone, PartialEq)]
pub struct AmpRun<F> {
    pub records: Vec<AmpRecord<F>>,
    pub state: AmpState<F>,
    /// Whether the σ̂ tolerance stopped the run before `t_max`.
    pub converged: bool,
}

/// Iterates [`step`] from `state` for up to `cfg.t_max` iterations.
pub fn run_from<F: Scalar>(
    mut state: AmpState<F>,
    inst: &Instance<F>,
    cfg: &AmpConfig,
) -> Result<AmpRun<F>, AmpError> {
    cfg.validate()?;
    let mut records = Vec::with_capacity(cfg.t_max);
    let mut converged = false;
    let tol = lit::<F>(cfg.tol);
    for _ in 0..cfg.t_max {
        let (next, rec) = step(&state, inst, cfg)?;
        state = next;
        records.push(rec);
        if cfg.tol > 0.0 && (rec.sigma_hat_next - rec.sigma_hat).abs() < tol * rec.sigma_hat_next {
            converged = true;
            break;
        }
    }
    Ok(AmpRun { records, state, converged })
}

/// Runs AMP from the zero initialization.
pub fn run<F: Scalar>(inst: &Instance<F>, cfg: &AmpConfig) -> Result<AmpRun<F>, AmpError> {
    run_from(init(inst), inst, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn identity_instance(y: Vec<f64>) -> Instance<f64> {
        let n = y.len();
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            a[i * n + i] = 1.0;
        }
        Instance::new(a, n, n, y, None, 0.0).unwrap()
    }

    #[test]
    fn zero_measurements_give_zero_state() {
        let inst = identity_instance(vec![0.0; 4]);
        let s = init(&inst);
        assert_eq!(s.sigma_hat, 0.0);
        assert!(s.x.iter().all(|v| *v == 0.0));
        assert!(s.h_t > 0.0);
    }

    #[test]
    fn identity_matrix_is_one_shot_denoising() {
        let y = vec![3.0, -0.2, 0.5, -2.5];
        let inst = identity_instance(y.clone());
        let cfg = AmpConfig::new(LambdaPolicy::Fixed { lambda: 0.4, p: 0.5 });
        let s0 = init(&inst);
        let (s1, rec) = step(&s0, &inst, &cfg).unwrap();
        let sp = SmoothProx::new(&SmoothProxParams::new(0.5, 0.4, rec.h).unwrap()).unwrap();
        for (x, u) in s1.x.iter().zip(&y) {
            assert_eq!(*x, sp.value(*u));
        }
    }

    #[test]
    fn sure_limits() {
        let v = vec![0.3, -1.2, 2.0, 0.01];
        let s = 0.5;
        let id = sure_estimate(&v, s, 0.5, 0.01, 0.0).unwrap();
        assert!((id - s * s).abs() < 1e-15);
        let zero = sure_estimate(&v, s, 0.5, 0.01, f64::INFINITY).unwrap();
        let mean_sq = v.iter().map(|x| x * x).sum::<f64>() / 4.0;
        assert!((zero - (mean_sq - s * s)).abs() < 1e-15);
    }

    #[test]
    fn single_point_grids() {
        let v = vec![0.3, -1.2, 2.0, 0.01];
        let c = tune(&v, 0.5, 0.01, &[0.5], Some(&[0.7])).unwrap();
        assert_eq!((c.lambda, c.p), (0.7, 0.5));
        assert!(tune::<f64>(&v, 0.5, 0.01, &[], None).is_err());
    }

    #[test]
    fn dimension_checks() {
        assert!(Instance::new(vec![0.0; 6], 3, 2, vec![0.0; 3], None, 0.0).is_err());
        assert!(Instance::new(vec![0.0; 6], 2, 3, vec![0.0; 3], None, 0.0).is_err());
        let inst = identity_instance(vec![1.0, 2.0]);
        assert!(init_warm(&inst, &[0.0]).is_err());
    }
}
