//! Minimax denoising risks over the ε-sparse class and the curves derived from them.
//!
//! With unit noise, r(μ, τ) = (1 − ε)E η_p(Z; τ)² + ε E(η_p(μ + Z; τ) − μ)². Then
//! M̄_p(ε) = inf_τ sup_μ r and M̲_p(ε) = sup_μ inf_τ r. For p = 1 both reduce to the
//! closed-form M₁(ε).

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cache::Cache;
use crate::gauss;
use crate::optim::{argmin, bisect, golden_min, log_grid, minimize_scale};
use crate::prox::{c_p, Prox, ProxError, ProxParams};
use crate::quad::{QuadError, Quadrature, DEFAULT_ORDER};
use crate::se::{atom_risk, null_moment, TAU_GRID, TAU_TOL};

/// Log grid of signal amplitudes for the inner sup; μ = ∞ is added separately.
pub const MU_GRID: (f64, f64, usize) = (1e-2, 1e3, 50);
/// Tolerance of the bisections over ε for p < 1.
pub const EPS_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MinimaxError {
    #[error(transparent)]
    Prox(#[from] ProxError),
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error("epsilon = {0} is outside [0, 1]")]
    Epsilon(f64),
    #[error("delta = {0} is outside (0, 1]")]
    Delta(f64),
    #[error("bound undefined: M̄_p(ε) = {m} is not below δ = {delta}")]
    BoundUndefined { m: f64, delta: f64 },
    #[error("empty p grid")]
    EmptyGrid,
}

/// Saddle value with its optimizers; `mu_star = inf` when the supremum sits at μ → ∞.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinimaxResult {
    pub value: f64,
    pub tau_star: f64,
    pub mu_star: f64,
}

/// Both orders of optimization for the same (p, ε).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Saddle {
    pub upper: MinimaxResult,
    pub lower: MinimaxResult,
    /// M̄ − M̲.
    pub gap: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Which {
    /// ε̄*_p(δ) = inf{ε : M̄_p(ε) ≥ δ}.
    Bar,
    /// ε̲*_p(δ) = sup{ε : M̲_p(ε) ≤ δ}.
    Under,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Transition {
    pub epsilon: f64,
    /// (ε, M) pairs visited by the bisection.
    pub visited: Vec<(f64, f64)>,
    /// Whether the visited pairs were nondecreasing in ε.
    pub monotone: bool,
}

fn check_eps(eps: f64) -> Result<(), MinimaxError> {
    if (0.0..=1.0).contains(&eps) {
        Ok(())
    } else {
        Err(MinimaxError::Epsilon(eps))
    }
}

/// E η₁(Z; τ)² = 2(1 + τ²)Φ(−τ) − 2τφ(τ).
pub fn soft_null_moment(tau: f64) -> f64 {
    2.0 * (1.0 + tau * tau) * gauss::sf(tau) - 2.0 * tau * gauss::pdf(tau)
}

/// Minimizer and value of (1 − ε)E η₁(Z; τ)² + ε(1 + τ²).
pub fn m1_with_tau(eps: f64) -> Result<(f64, f64), MinimaxError> {
    check_eps(eps)?;
    if eps == 1.0 {
        return Ok((0.0, 1.0));
    }
    if eps == 0.0 {
        return Ok((f64::INFINITY, 0.0));
    }
    // Derivative of the strictly convex objective; negative at τ = 0.
    let slope = |t: f64| -4.0 * (1.0 - eps) * (gauss::pdf(t) - t * gauss::sf(t)) + 2.0 * eps * t;
    let mut hi = 1.0;
    while slope(hi) <= 0.0 {
        hi *= 2.0;
    }
    let tau = bisect(slope, 0.0, hi, 1e-15 * hi);
    let value = (1.0 - eps) * soft_null_moment(tau) + eps * (1.0 + tau * tau);
    Ok((tau, value))
}

/// M₁(ε).
pub fn m1(eps: f64) -> Result<f64, MinimaxError> {
    Ok(m1_with_tau(eps)?.1)
}

/// ε₁*(δ) = sup{ε : M₁(ε) < δ}, by bisection to 1e−8.
pub fn eps_star_1(delta: f64) -> Result<f64, MinimaxError> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(MinimaxError::Delta(delta));
    }
    if delta == 1.0 {
        return Ok(1.0);
    }
    Ok(bisect(|e| m1(e).expect("eps in [0, 1]") - delta, 0.0, 1.0, 1e-8))
}

#[derive(Debug, Clone)]
pub struct Minimax {
    quad: Quadrature,
    cache: Option<Cache>,
}

impl Default for Minimax {
    fn default() -> Self {
        Self::new(DEFAULT_ORDER).expect("default order is valid")
    }
}

impl Minimax {
    pub fn new(order: usize) -> Result<Self, MinimaxError> {
        Ok(Self { quad: Quadrature::new(order)?, cache: None })
    }

    /// Uses `$LPAMP_CACHE_DIR` when set.
    pub fn with_env_cache(mut self) -> Self {
        self.cache = Cache::from_env();
        self
    }

    pub fn with_cache(mut self, cache: Cache) -> Self {
        self.cache = Some(cache);
        self
    }

    fn prox(&self, tau: f64, p: f64) -> Result<Prox<f64>, MinimaxError> {
        Ok(Prox::new(&ProxParams::new(p, tau)?)?)
    }

    /// (1 − ε)E η_p(Z; τ)² + ε E(η_p(μ + Z; τ) − μ)², with μ = ∞ taken as the limit.
    pub fn inner_risk(&self, mu: f64, tau: f64, p: f64, eps: f64) -> Result<f64, MinimaxError> {
        check_eps(eps)?;
        let prox = self.prox(tau, p)?;
        let null = null_moment(&self.quad, &prox);
        let signal = if mu.is_infinite() {
            Self::atom_limit(tau, p)
        } else {
            atom_risk(&self.quad, &prox, mu)
        };
        Ok((1.0 - eps) * null + eps * signal)
    }

    /// lim_{μ→∞} E(η_p(μ + Z; τ) − μ)²: 1 + τ² for soft thresholding, 1 otherwise since the
    /// bias λp|u|^{p−1} of the large-input branch vanishes.
    fn atom_limit(tau: f64, p: f64) -> f64 {
        if p == 1.0 {
            1.0 + tau * tau
        } else {
            1.0
        }
    }

    /// sup over μ of E(η(μ + Z) − μ)² at fixed τ, with the maximizing μ.
    fn sup_atom(&self, prox: &Prox<f64>, tau: f64, p: f64) -> (f64, f64) {
        let (lo, hi, n) = MU_GRID;
        let grid = log_grid(lo, hi, n);
        let vals: Vec<f64> = grid.iter().map(|&m| atom_risk(&self.quad, prox, m)).collect();
        let neg: Vec<f64> = vals.iter().map(|v| -v).collect();
        let i = argmin(&neg);
        let (mut best_mu, mut best) = (grid[i], vals[i]);
        let left = if i == 0 { grid[0] } else { grid[i - 1] };
        let right = if i + 1 < n { grid[i + 1] } else { grid[i] };
        if right > left {
            let (lm, lv) = golden_min(
                |x| -atom_risk(&self.quad, prox, x.exp()),
                left.ln(),
                right.ln(),
                1e-6,
                1.0,
            );
            if -lv > best {
                best = -lv;
                best_mu = lm.exp();
            }
        }
        // Grid values within rounding of the limit count as attaining it at μ = ∞.
        let limit = Self::atom_limit(tau, p);
        if limit >= best * (1.0 - 1e-12) {
            (limit, f64::INFINITY)
        } else {
            (best, best_mu)
        }
    }

    fn cached<T>(
        &self,
        key: String,
        compute: impl FnOnce() -> Result<T, MinimaxError>,
    ) -> Result<T, MinimaxError>
    where
        T: Serialize + for<'de> Deserialize<'de>,
    {
        if let Some(hit) = self.cache.as_ref().and_then(|c| c.get::<T>(&key)) {
            return Ok(hit);
        }
        let value = compute()?;
        if let Some(c) = &self.cache {
            // A failed cache write only costs a recomputation later.
            let _ = c.put(&key, &value);
        }
        Ok(value)
    }

    /// M̄_p(ε) = inf_τ sup_μ r(μ, τ).
    pub fn m_bar(&self, p: f64, eps: f64) -> Result<MinimaxResult, MinimaxError> {
        check_eps(eps)?;
        ProxParams::new(p, 0.0)?;
        let key = format!("m_bar-p{p:?}-eps{eps:?}-q{}", self.quad.order());
        self.cached(key, || {
            let envelope = |tau: f64| -> f64 {
                if tau.is_infinite() {
                    return if eps == 0.0 { 0.0 } else { f64::INFINITY };
                }
                let prox = self.prox(tau, p).expect("validated exponent");
                let null = null_moment(&self.quad, &prox);
                let (sup, _) = self.sup_atom(&prox, tau, p);
                (1.0 - eps) * null + eps * sup
            };
            let (lo, hi, n) = TAU_GRID;
            let (tau, value) = minimize_scale(envelope, lo, hi, n, TAU_TOL);
            let mu_star =
                if tau.is_finite() { self.sup_atom(&self.prox(tau, p)?, tau, p).1 } else { 0.0 };
            Ok(MinimaxResult { value, tau_star: tau, mu_star })
        })
    }

    /// inf over τ of r(μ, τ) for one μ (μ = ∞ uses the large-μ limit).
    fn inf_tau(&self, mu: f64, p: f64, eps: f64) -> (f64, f64) {
        let (lo, hi, n) = TAU_GRID;
        minimize_scale(
            |tau| {
                if tau.is_infinite() {
                    return if mu.is_infinite() && eps > 0.0 {
                        if p == 1.0 {
                            f64::INFINITY
                        } else {
                            eps
                        }
                    } else if mu.is_infinite() {
                        0.0
                    } else {
                        eps * mu * mu
                    };
                }
                let prox = self.prox(tau, p).expect("validated exponent");
                let null = null_moment(&self.quad, &prox);
                let signal = if mu.is_infinite() {
                    Self::atom_limit(tau, p)
                } else {
                    atom_risk(&self.quad, &prox, mu)
                };
                (1.0 - eps) * null + eps * signal
            },
            lo,
            hi,
            n,
            TAU_TOL,
        )
    }

    /// M̲_p(ε) = sup_μ inf_τ r(μ, τ).
    pub fn m_under(&self, p: f64, eps: f64) -> Result<MinimaxResult, MinimaxError> {
        check_eps(eps)?;
        ProxParams::new(p, 0.0)?;
        let key = format!("m_under-p{p:?}-eps{eps:?}-q{}", self.quad.order());
        self.cached(key, || {
            let (lo, hi, n) = MU_GRID;
            let grid = log_grid(lo, hi, n);
            let vals: Vec<(f64, f64)> = grid.iter().map(|&m| self.inf_tau(m, p, eps)).collect();
            let neg: Vec<f64> = vals.iter().map(|v| -v.1).collect();
            let i = argmin(&neg);
            let mut best =
                MinimaxResult { value: vals[i].1, tau_star: vals[i].0, mu_star: grid[i] };
            let left = if i == 0 { grid[0] } else { grid[i - 1] };
            let right = if i + 1 < n { grid[i + 1] } else { grid[i] };
            if right > left {
                let (lm, lv) = golden_min(
                    |x| -self.inf_tau(x.exp(), p, eps).1,
                    left.ln(),
                    right.ln(),
                    1e-6,
                    1.0,
                );
                if -lv > best.value {
                    let mu = lm.exp();
                    best = MinimaxResult {
                        value: -lv,
                        tau_star: self.inf_tau(mu, p, eps).0,
                        mu_star: mu,
                    };
                }
            }
            let (t_inf, v_inf) = self.inf_tau(f64::INFINITY, p, eps);
            if v_inf >= best.value * (1.0 - 1e-12) {
                best = MinimaxResult { value: v_inf, tau_star: t_inf, mu_star: f64::INFINITY };
            }
            Ok(best)
        })
    }

    pub fn saddle(&self, p: f64, eps: f64) -> Result<Saddle, MinimaxError> {
        let upper = self.m_bar(p, eps)?;
        let lower = self.m_under(p, eps)?;
        Ok(Saddle { upper, lower, gap: upper.value - lower.value })
    }

    /// ε̄*_p(δ) or ε̲*_p(δ) by bisection over ε.
    pub fn eps_star_p(&self, delta: f64, p: f64, which: Which) -> Result<Transition, MinimaxError> {
        if !(delta > 0.0 && delta <= 1.0) {
            return Err(MinimaxError::Delta(delta));
        }
        let mut visited = Vec::new();
        let mut failure = None;
        let mut eval = |e: f64| -> f64 {
            let m = match which {
                Which::Bar => self.m_bar(p, e),
                Which::Under => self.m_under(p, e),
            };
            match m {
                Ok(r) => {
                    visited.push((e, r.value));
                    r.value
                }
                Err(err) => {
                    failure = Some(err);
                    f64::NAN
                }
            }
        };
        let epsilon = if delta == 1.0 {
            1.0
        } else {
            let tol = if p == 1.0 { 1e-8 } else { EPS_TOL };
            // Bar: first ε with M̄ ≥ δ. Under: last ε with M̲ ≤ δ. Both are the crossing point
            // of a nondecreasing curve, located by the sign of M − δ.
            bisect(|e| if eval(e) >= delta { 1.0 } else { -1.0 }, 0.0, 1.0, tol)
        };
        if let Some(err) = failure {
            return Err(err);
        }
        let mut sorted = visited.clone();
        sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
        let monotone = sorted.windows(2).all(|w| w[1].1 >= w[0].1 - 1e-10);
        Ok(Transition { epsilon, visited, monotone })
    }

    /// sup over the p grid of ε̄*_p(δ).
    pub fn continuation_pt(&self, delta: f64, p_grid: &[f64]) -> Result<(f64, f64), MinimaxError> {
        let mut best: Option<(f64, f64)> = None;
        for &p in p_grid {
            let e = self.eps_star_p(delta, p, Which::Bar)?.epsilon;
            if best.map_or(true, |b| e > b.1) {
                best = Some((p, e));
            }
        }
        best.ok_or(MinimaxError::EmptyGrid)
    }

    /// Γ_{α,p} = E η_p(Z; (α/c_p)^{2−p})², the null risk at input threshold α.
    pub fn gamma_alpha_p(&self, alpha: f64, p: f64) -> Result<f64, MinimaxError> {
        ProxParams::new(p, 0.0)?;
        let lambda =
            if alpha.is_infinite() { f64::INFINITY } else { (alpha / c_p(p)).powf(2.0 - p) };
        Ok(null_moment(&self.quad, &self.prox(lambda, p)?))
    }

    /// Upper bound 1/(1 − M̄_p(ε)/δ) on σ_h²/σ_w².
    pub fn noise_sensitivity_bound(
        &self,
        delta: f64,
        eps: f64,
        p: f64,
    ) -> Result<f64, MinimaxError> {
        if !(delta > 0.0 && delta <= 1.0) {
            return Err(MinimaxError::Delta(delta));
        }
        let m = self.m_bar(p, eps)?.value;
        if m >= delta {
            return Err(MinimaxError::BoundUndefined { m, delta });
        }
        Ok(1.0 / (1.0 - m / delta))
    }
}
