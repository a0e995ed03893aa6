//! State evolution for ℓp-AMP.
//!
//! Ψ(σ²) = σ_w² + risk(σ, λ(σ), p(σ))/δ with risk = E(η_p(X + σZ; λ) − X)². The engine
//! evaluates Ψ for fixed and oracle policies, iterates it, and locates and classifies its
//! fixed points.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::optim::{self, bisect, minimize_scale};
use crate::prior::{PriorError, SignalPrior};
use crate::prox::{c_p, Prox, ProxError, ProxParams};
use crate::quad::{QuadError, Quadrature, DEFAULT_ORDER};

/// Coarse τ grid used by [`StateEvolution::optimal_lambda`].
pub const TAU_GRID: (f64, f64, usize) = (1e-3, 1e3, 60);
/// Relative tolerance of the golden-section refinement in τ.
pub const TAU_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SeError {
    #[error(transparent)]
    Prox(#[from] ProxError),
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error(transparent)]
    Prior(#[from] PriorError),
    #[error("invalid configuration: {0}")]
    Config(String),
}

/// Undersampling ratio, noise level, prior and quadrature order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeConfig {
    pub delta: f64,
    pub sigma_w: f64,
    pub prior: SignalPrior,
    #[serde(default = "default_order")]
    pub quad_order: usize,
}

fn default_order() -> usize {
    DEFAULT_ORDER
}

impl SeConfig {
    pub fn new(delta: f64, sigma_w: f64, prior: SignalPrior) -> Self {
        Self { delta, sigma_w, prior, quad_order: DEFAULT_ORDER }
    }
}

/// Rule mapping the effective noise σ to the AMP parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Policy {
    /// Constant λ.
    Fixed { lambda: f64, p: f64 },
    /// λ = τσ^{2−p}, the scale-equivariant family.
    TauScaled { tau: f64, p: f64 },
    /// λ = τσ^p.
    TauPower { tau: f64, p: f64 },
    /// λ = (ασ/c_p)^{2−p}, i.e. threshold λ̃_p = ασ.
    FixedAlpha { alpha: f64, p: f64 },
    /// λ*(σ) minimizing the risk for a fixed p.
    Optimal { p: f64 },
    /// Joint minimization over λ and p ∈ `p_grid`.
    Adaptive { p_grid: Vec<f64> },
}

/// Oracle threshold at one noise level. `tau = inf` encodes "threshold everything".
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimalLambda {
    pub p: f64,
    pub tau: f64,
    pub lambda: f64,
    pub risk: f64,
}

/// One evaluation of Ψ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PsiEval {
    pub sigma_sq: f64,
    pub next: f64,
    pub lambda: f64,
    pub p: f64,
    pub risk: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    /// `steps[t]` holds σ_t², the policy used at σ_t, and the MSE E(η − X)² it produces.
    pub steps: Vec<PsiEval>,
    pub converged: bool,
}

impl Trajectory {
    pub fn last_sigma_sq(&self) -> f64 {
        self.steps.last().map(|s| s.next).unwrap_or(0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stability {
    Stable,
    Unstable,
    HalfStable,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FixedPoint {
    pub sigma_sq: f64,
    /// σ² − σ_w², located directly so that it keeps full relative precision.
    pub excess: f64,
    pub class: Stability,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedPointReport {
    pub points: Vec<FixedPoint>,
    pub lowest_stable: Option<f64>,
    pub highest_stable: Option<f64>,
    pub warnings: Vec<String>,
}

impl FixedPointReport {
    pub fn stable(&self) -> impl Iterator<Item = &FixedPoint> {
        self.points.iter().filter(|f| f.class == Stability::Stable)
    }

    fn lowest_stable_point(&self) -> Option<&FixedPoint> {
        self.stable().next()
    }

    /// Excess σ² − σ_w² at the lowest stable fixed point.
    pub fn lowest_stable_excess(&self) -> Option<f64> {
        self.lowest_stable_point().map(|f| f.excess)
    }

    /// Excess σ² − σ_w² at the highest stable fixed point.
    pub fn highest_stable_excess(&self) -> Option<f64> {
        self.stable().last().map(|f| f.excess)
    }
}

/// E η(Z; λ)² for the unit-noise map `prox`.
pub fn null_moment(quad: &Quadrature, prox: &Prox<f64>) -> f64 {
    quad.even_expectation(&[prox.threshold()], |z| {
        let v = prox.value(z);
        v * v
    })
}

/// E(η(m + Z; λ) − m)².
///
/// On the active branch the error is written as z − sign(u)·λp|η|^{p−1}, which stays accurate
/// when m is so large that m + z rounds away z.
pub fn atom_risk(quad: &Quadrature, prox: &Prox<f64>, m: f64) -> f64 {
    let t = prox.threshold();
    quad.expectation(&[-t - m, t - m], |z| {
        let u = m + z;
        let x = prox.value(u);
        let d = if x == 0.0 { -m } else { z - prox.shrinkage_at(x).copysign(u) };
        d * d
    })
}

#[derive(Debug, Clone)]
pub struct StateEvolution {
    cfg: SeConfig,
    quad: Quadrature,
    atoms: Option<Vec<(f64, f64)>>,
}

impl StateEvolution {
    pub fn new(cfg: SeConfig) -> Result<Self, SeError> {
        cfg.prior.validate()?;
        if !(cfg.delta > 0.0 && cfg.delta <= 1.0) {
            return Err(SeError::Config(format!("delta = {} must lie in (0, 1]", cfg.delta)));
        }
        if !(cfg.sigma_w >= 0.0 && cfg.sigma_w.is_finite()) {
            return Err(SeError::Config(format!("sigma_w = {} must be >= 0", cfg.sigma_w)));
        }
        let quad = Quadrature::new(cfg.quad_order)?;
        let atoms = cfg.prior.folded_atoms();
        Ok(Self { cfg, quad, atoms })
    }

    pub fn config(&self) -> &SeConfig {
        &self.cfg
    }

    pub fn quadrature(&self) -> &Quadrature {
        &self.quad
    }

    fn eps(&self) -> f64 {
        self.cfg.prior.epsilon
    }

    /// E over the nonzero part of `f(|U|)`.
    fn over_nonzero(&self, f: impl Fn(f64) -> f64) -> f64 {
        match &self.atoms {
            Some(atoms) => atoms.iter().map(|&(v, w)| w * f(v)).sum(),
            None => self.quad.hermite_expectation(|u| f(u.abs())),
        }
    }

    /// Unit-noise risk E(η(X/σ + Z; τ) − X/σ)², which equals risk(σ, τσ^{2−p}, p)/σ².
    pub fn scaled_risk(&self, sigma: f64, tau: f64, p: f64) -> Result<f64, SeError> {
        if tau.is_infinite() {
            return Ok(self.cfg.prior.second_moment() / (sigma * sigma));
        }
        let prox = Prox::new(&ProxParams::new(p, tau)?)?;
        let eps = self.eps();
        let null = if eps < 1.0 { null_moment(&self.quad, &prox) } else { 0.0 };
        let signal = if eps > 0.0 {
            self.over_nonzero(|u| atom_risk(&self.quad, &prox, u / sigma))
        } else {
            0.0
        };
        Ok((1.0 - eps) * null + eps * signal)
    }

    /// E(η_p(X + σZ; λ) − X)².
    pub fn risk(&self, sigma: f64, lambda: f64, p: f64) -> Result<f64, SeError> {
        ProxParams::new(p, lambda)?;
        if !(sigma >= 0.0) {
            return Err(SeError::Config(format!("sigma = {sigma} must be >= 0")));
        }
        if lambda.is_infinite() {
            return Ok(self.cfg.prior.second_moment());
        }
        if sigma == 0.0 {
            let prox = Prox::new(&ProxParams::new(p, lambda)?)?;
            let err = |u: f64| {
                let d = prox.value(u) - u;
                d * d
            };
            let signal = match &self.atoms {
                Some(atoms) => atoms.iter().map(|&(v, w)| w * err(v)).sum(),
                None => {
                    let t = prox.threshold();
                    self.quad.expectation(&[-t, t], err)
                }
            };
            return Ok(self.eps() * signal);
        }
        let tau = lambda / sigma.powf(2.0 - p);
        Ok(sigma * sigma * self.scaled_risk(sigma, tau, p)?)
    }

    /// λ*(σ) for fixed p: coarse log grid in τ = λ/σ^{2−p}, then golden-section.
    pub fn optimal_lambda(&self, sigma: f64, p: f64) -> Result<OptimalLambda, SeError> {
        ProxParams::new(p, 0.0)?;
        if sigma == 0.0 {
            return Ok(OptimalLambda { p, tau: 0.0, lambda: 0.0, risk: 0.0 });
        }
        let mut err = None;
        let (lo, hi, n) = TAU_GRID;
        let (tau, r) = minimize_scale(
            |t| match self.scaled_risk(sigma, t, p) {
                Ok(v) => v,
                Err(e) => {
                    err = Some(e);
                    f64::INFINITY
                }
            },
            lo,
            hi,
            n,
            TAU_TOL,
        );
        if let Some(e) = err {
            return Err(e);
        }
        let lambda = if tau.is_infinite() { f64::INFINITY } else { tau * sigma.powf(2.0 - p) };
        Ok(OptimalLambda { p, tau, lambda, risk: sigma * sigma * r })
    }

    /// Joint oracle (λ*, p*) over a grid of exponents.
    pub fn optimal_adaptation(&self, sigma: f64, p_grid: &[f64]) -> Result<OptimalLambda, SeError> {
        let mut best: Option<OptimalLambda> = None;
        for &p in p_grid {
            let cand = self.optimal_lambda(sigma, p)?;
            if best.map_or(true, |b| cand.risk < b.risk) {
                best = Some(cand);
            }
        }
        best.ok_or_else(|| SeError::Config("empty p grid".into()))
    }

    /// Policy parameters and risk at noise level σ.
    pub fn policy_risk(&self, sigma: f64, policy: &Policy) -> Result<(f64, f64, f64), SeError> {
        let scaled = |tau: f64, p: f64| -> Result<(f64, f64, f64), SeError> {
            let lambda = tau * sigma.powf(2.0 - p);
            let r = if sigma == 0.0 {
                self.risk(0.0, lambda, p)?
            } else {
                sigma * sigma * self.scaled_risk(sigma, tau, p)?
            };
            Ok((lambda, p, r))
        };
        match policy {
            Policy::Fixed { lambda, p } => Ok((*lambda, *p, self.risk(sigma, *lambda, *p)?)),
            Policy::TauScaled { tau, p } => scaled(*tau, *p),
            Policy::TauPower { tau, p } => {
                let lambda = tau * sigma.powf(*p);
                Ok((lambda, *p, self.risk(sigma, lambda, *p)?))
            }
            Policy::FixedAlpha { alpha, p } => scaled((alpha / c_p(*p)).powf(2.0 - p), *p),
            Policy::Optimal { p } => {
                let o = self.optimal_lambda(sigma, *p)?;
                Ok((o.lambda, o.p, o.risk))
            }
            Policy::Adaptive { p_grid } => {
                let o = self.optimal_adaptation(sigma, p_grid)?;
                Ok((o.lambda, o.p, o.risk))
            }
        }
    }

    /// Ψ(σ²) with the policy parameters it used.
    pub fn psi(&self, sigma_sq: f64, policy: &Policy) -> Result<PsiEval, SeError> {
        let (lambda, p, risk) = self.policy_risk(sigma_sq.max(0.0).sqrt(), policy)?;
        let next = self.cfg.sigma_w.powi(2) + risk / self.cfg.delta;
        Ok(PsiEval { sigma_sq, next, lambda, p, risk })
    }

    /// σ²_{t+1} = Ψ(σ²_t) until |σ²_{t+1} − σ²_t| < tol·max(σ²_t, tol) or `t_max` steps.
    pub fn iterate(
        &self,
        policy: &Policy,
        sigma0_sq: f64,
        t_max: usize,
        tol: f64,
    ) -> Result<Trajectory, SeError> {
        let mut steps = Vec::with_capacity(t_max);
        let mut s = sigma0_sq;
        let mut converged = false;
        for _ in 0..t_max {
            let ev = self.psi(s, policy)?;
            steps.push(ev);
            let done = (ev.next - s).abs() < tol * s.max(tol);
            s = ev.next;
            if done {
                converged = true;
                break;
            }
        }
        Ok(Trajectory { steps, converged })
    }

    /// Φ(e) = Ψ(σ_w² + e) − σ_w² − e.
    fn excess_gap(&self, e: f64, policy: &Policy) -> Result<f64, SeError> {
        let sw2 = self.cfg.sigma_w.powi(2);
        let (_, _, r) = self.policy_risk((sw2 + e).sqrt(), policy)?;
        Ok(r / self.cfg.delta - e)
    }

    /// Scale used for the σ² = 0 stability probe and the bottom of the scan grid.
    fn natural_scale(&self) -> f64 {
        self.cfg.prior.second_moment() / self.cfg.delta + self.cfg.sigma_w.powi(2) + 1.0
    }

    /// Smallest admissible `sigma_sq_max` for [`fixed_points`](Self::fixed_points).
    pub fn min_sigma_sq_max(&self) -> f64 {
        (self.cfg.prior.second_moment() + 1.0) / self.cfg.delta + self.cfg.sigma_w.powi(2)
    }

    /// All fixed points of Ψ on (0, `sigma_sq_max`], plus σ² = 0 when it is one.
    pub fn fixed_points(
        &self,
        policy: &Policy,
        sigma_sq_max: f64,
    ) -> Result<FixedPointReport, SeError> {
        if !(sigma_sq_max >= self.min_sigma_sq_max() * (1.0 - 1e-12)) {
            return Err(SeError::Config(format!(
                "sigma_sq_max = {sigma_sq_max} is below (E X² + 1)/δ + σ_w² = {}",
                self.min_sigma_sq_max()
            )));
        }
        let sw2 = self.cfg.sigma_w.powi(2);
        let e_max = sigma_sq_max - sw2;
        let mut e_lo = 1e-12 * self.natural_scale();
        if sw2 > 0.0 {
            let floor = self.excess_gap(0.0, policy)?;
            if floor > 0.0 {
                e_lo = e_lo.min(0.5 * floor);
            }
        }
        let mut warnings = Vec::new();
        let mut points = Vec::new();
        for attempt in 0..3 {
            let m = 1000 * 4usize.pow(attempt);
            let (scan, coarse) = self.scan(policy, e_lo, e_max, m)?;
            points = scan.0;
            warnings = scan.1;
            if !coarse {
                break;
            }
            warnings.push(format!(
                "scan with {} points could not separate neighbouring roots{}",
                2 * m,
                if attempt < 2 { "; refining" } else { "" }
            ));
        }

        if sw2 == 0.0 {
            let at_zero = self.psi(0.0, policy)?;
            if at_zero.next == 0.0 {
                let s0 = 1e-8 * self.natural_scale();
                let ratio = self.psi(s0, policy)?.next / s0;
                let class =
                    if ratio < 1.0 - 1e-6 { Stability::Stable } else { Stability::Unstable };
                points.insert(0, FixedPoint { sigma_sq: 0.0, excess: 0.0, class });
            }
        }
        let lowest_stable =
            points.iter().find(|f| f.class == Stability::Stable).map(|f| f.sigma_sq);
        let highest_stable =
            points.iter().rev().find(|f| f.class == Stability::Stable).map(|f| f.sigma_sq);
        if lowest_stable.is_none() {
            warnings.push("no stable fixed point found".into());
        }
        Ok(FixedPointReport { points, lowest_stable, highest_stable, warnings })
    }

    #[allow(clippy::type_complexity)]
    fn scan(
        &self,
        policy: &Policy,
        e_lo: f64,
        e_max: f64,
        m: usize,
    ) -> Result<((Vec<FixedPoint>, Vec<String>), bool), SeError> {
        let sw2 = self.cfg.sigma_w.powi(2);
        let mut grid = optim::log_grid(e_lo, e_max, m);
        grid.extend(optim::lin_grid(e_max / m as f64, e_max, m));
        grid.sort_by(|a, b| a.total_cmp(b));
        grid.dedup_by(|a, b| (*a - *b).abs() <= 1e-14 * b.abs());
        let vals: Vec<f64> =
            grid.par_iter().map(|&e| self.excess_gap(e, policy)).collect::<Result<_, _>>()?;

        let mut points = Vec::new();
        let mut warnings = Vec::new();
        let mut coarse = false;
        let mut last_root_cell: Option<usize> = None;
        for i in 0..grid.len() - 1 {
            let (a, b) = (vals[i], vals[i + 1]);
            let class = if a > 0.0 && b < 0.0 {
                Stability::Stable
            } else if a < 0.0 && b > 0.0 {
                Stability::Unstable
            } else {
                continue;
            };
            if last_root_cell.is_some_and(|c| c + 1 == i) {
                coarse = true;
            }
            last_root_cell = Some(i);
            let (lo, hi) = (grid[i], grid[i + 1]);
            let tol = 1e-10 * lo.max(1e-300);
            let mut failure = None;
            let e = bisect(
                |x| match self.excess_gap(x, policy) {
                    Ok(v) => v,
                    Err(err) => {
                        failure = Some(err);
                        0.0
                    }
                },
                lo,
                hi,
                tol,
            );
            if let Some(err) = failure {
                return Err(err);
            }
            points.push(FixedPoint { sigma_sq: sw2 + e, excess: e, class });
        }
        // Exact zeros and tangencies do not produce a strict sign change.
        for i in 1..grid.len() - 1 {
            let (l, c, r) = (vals[i - 1], vals[i], vals[i + 1]);
            let scale = sw2 + grid[i];
            let touches = c.abs() < 1e-9 * scale && c.abs() <= l.abs() && c.abs() <= r.abs();
            if !touches {
                continue;
            }
            let class = if c == 0.0 && l > 0.0 && r < 0.0 {
                Stability::Stable
            } else if c == 0.0 && l < 0.0 && r > 0.0 {
                Stability::Unstable
            } else if l.signum() == r.signum() && l != 0.0 {
                warnings
                    .push(format!("half-stable fixed point near sigma^2 = {:e}", sw2 + grid[i]));
                Stability::HalfStable
            } else {
                continue;
            };
            if points.iter().any(|f| (f.excess - grid[i]).abs() <= 1e-9 * grid[i]) {
                continue;
            }
            points.push(FixedPoint { sigma_sq: sw2 + grid[i], excess: grid[i], class });
        }
        points.sort_by(|a, b| a.excess.total_cmp(&b.excess));
        Ok(((points, warnings), coarse))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauss;

    fn engine(delta: f64, sigma_w: f64, eps: f64) -> StateEvolution {
        StateEvolution::new(SeConfig::new(delta, sigma_w, SignalPrior::two_point(eps, 1.0)))
            .unwrap()
    }

    fn soft_null(tau: f64) -> f64 {
        2.0 * (1.0 + tau * tau) * gauss::sf(tau) - 2.0 * tau * gauss::pdf(tau)
    }

    #[test]
    fn risk_limits() {
        let se = engine(0.2, 0.0, 0.1);
        assert!((se.risk(0.7, 0.0, 0.5).unwrap() - 0.49).abs() < 1e-13);
        assert!((se.risk(0.7, f64::INFINITY, 0.5).unwrap() - 0.1).abs() < 1e-15);
        // Noiseless risk is the squared shrinkage bias on the nonzeros.
        let prox = Prox::new(&ProxParams::new(0.5, 1e-3).unwrap()).unwrap();
        let bias = prox.value(1.0) - 1.0;
        assert!((se.risk(0.0, 1e-3, 0.5).unwrap() - 0.1 * bias * bias).abs() < 1e-20);
    }

    #[test]
    fn soft_threshold_null_moment_matches_closed_form() {
        let q = Quadrature::default();
        for tau in [0.0, 0.3, 1.0, 2.5, 6.0] {
            let prox = Prox::new(&ProxParams::new(1.0, tau).unwrap()).unwrap();
            let got = null_moment(&q, &prox);
            assert!((got - soft_null(tau)).abs() < 1e-13, "tau={tau}");
        }
    }

    #[test]
    fn zero_prior_threshold_is_infinite() {
        let se = engine(0.3, 0.1, 0.0);
        let o = se.optimal_lambda(0.5, 0.5).unwrap();
        assert!(o.lambda.is_infinite());
        assert_eq!(o.risk, 0.0);
    }

    #[test]
    fn rejects_bad_config() {
        let prior = SignalPrior::two_point(0.1, 1.0);
        assert!(StateEvolution::new(SeConfig::new(0.0, 0.0, prior.clone())).is_err());
        let mut cfg = SeConfig::new(0.5, 0.0, prior);
        cfg.quad_order = 4;
        assert!(StateEvolution::new(cfg).is_err());
    }

    #[test]
    fn fixed_point_scan_requires_large_enough_range() {
        let se = engine(0.2, 0.1, 0.05);
        assert!(se.fixed_points(&Policy::Optimal { p: 1.0 }, 0.1).is_err());
    }
}
