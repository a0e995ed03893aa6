//! Scalar ℓp proximal maps
//!
//! η_p(u; λ) = argmin_x ½(u − x)² + λ|x|^p, for 0 ≤ p ≤ 1.
//!
//! p = 1 is soft thresholding, p = 0 hard thresholding. For 0 < p < 1 the map is zero below
//! the threshold λ̃_p = c_p λ^{1/(2−p)} and otherwise equals the larger root of
//! x + λp x^{p−1} = |u|, which jumps from 0 to η⁺ = [2(1−p)λ]^{1/(2−p)} at the threshold.

use num_traits::Float;
use thiserror::Error;

use crate::lit;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum ProxError {
    #[error("penalty exponent p = {0} is outside [0, 1]")]
    InvalidExponent(f64),
    #[error("regularization weight lambda = {0} must be nonnegative")]
    InvalidLambda(f64),
    #[error("smoothing bandwidth h = {0} must be positive")]
    InvalidBandwidth(f64),
    #[error("zeta_star is only defined for 0 < p < 1 and lambda > 0 (got p = {0})")]
    ZetaUndefined(f64),
    #[error("derivative undefined at u = {0}: input inactive or exactly at the jump")]
    DerivativeUndefined(f64),
    #[error("root finder failed to converge for |u| = {0}")]
    NoConvergence(f64),
}

/// Penalty exponent and regularization weight.
///
/// `lambda = +inf` is admitted and maps every input to zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProxParams<F> {
    pub p: F,
    pub lambda: F,
}

impl<F: Float> ProxParams<F> {
    pub fn new(p: F, lambda: F) -> Result<Self, ProxError> {
        if !(p >= F::zero() && p <= F::one()) {
            return Err(ProxError::InvalidExponent(p.to_f64().unwrap_or(f64::NAN)));
        }
        if !(lambda >= F::zero()) {
            return Err(ProxError::InvalidLambda(lambda.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(Self { p, lambda })
    }
}

/// Result of evaluating η_p at one input.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProxEval<F> {
    pub value: F,
    pub active: bool,
    /// ∂η/∂u; `None` when inactive or exactly at the jump.
    pub d1: Option<F>,
    /// ∂η/∂λ; same convention as `d1`.
    pub d2: Option<F>,
}

/// Threshold constant c_p with λ̃_p = c_p λ^{1/(2−p)}.
pub fn c_p<F: Float>(p: F) -> F {
    if p >= F::one() {
        return F::one();
    }
    let two = lit::<F>(2.0);
    let b = two * (F::one() - p);
    b.powf(F::one() / (two - p)) + p * b.powf((p - F::one()) / (two - p))
}

/// Input threshold λ̃_p below which η_p vanishes.
pub fn threshold<F: Float>(params: &ProxParams<F>) -> F {
    let two = lit::<F>(2.0);
    c_p(params.p) * params.lambda.powf(F::one() / (two - params.p))
}

/// Smallest nonzero output magnitude η⁺ = [2(1−p)]^{1/(2−p)} λ^{1/(2−p)}.
pub fn jump_height<F: Float>(params: &ProxParams<F>) -> F {
    let two = lit::<F>(2.0);
    let e = F::one() / (two - params.p);
    (two * (F::one() - params.p)).powf(e) * params.lambda.powf(e)
}

/// Minimizer of g(ζ) = ζ + λpζ^{p−1} over ζ > 0, i.e. (λp(1−p))^{1/(2−p)}.
pub fn zeta_star<F: Float>(params: &ProxParams<F>) -> Result<F, ProxError> {
    let p = params.p;
    if !(p > F::zero() && p < F::one()) || !(params.lambda > F::zero()) {
        return Err(ProxError::ZetaUndefined(p.to_f64().unwrap_or(f64::NAN)));
    }
    let two = lit::<F>(2.0);
    Ok((params.lambda * p * (F::one() - p)).powf(F::one() / (two - p)))
}

/// Evaluates η_p(u; λ) with its first derivatives.
pub fn eta_p<F: Float>(u: F, params: &ProxParams<F>) -> Result<ProxEval<F>, ProxError> {
    Prox::new(params)?.eval(u)
}

/// ∂₁η_p(u; λ).
pub fn d1_eta_p<F: Float>(u: F, params: &ProxParams<F>) -> Result<F, ProxError> {
    Prox::new(params)?.d1(u)
}

/// ∂₂η_p(u; λ).
pub fn d2_eta_p<F: Float>(u: F, params: &ProxParams<F>) -> Result<F, ProxError> {
    Prox::new(params)?.d2(u)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Identity,
    Zero,
    Hard,
    Soft,
    Nonconvex,
}

/// η_p with its threshold constants precomputed, for repeated evaluation.
#[derive(Debug, Clone, Copy)]
pub struct Prox<F> {
    p: F,
    lambda: F,
    thr: F,
    jump: F,
    kind: Kind,
}

impl<F: Float> Prox<F> {
    pub fn new(params: &ProxParams<F>) -> Result<Self, ProxError> {
        let params = ProxParams::new(params.p, params.lambda)?;
        let (p, lambda) = (params.p, params.lambda);
        let kind = if lambda == F::zero() {
            Kind::Identity
        } else if lambda.is_infinite() {
            Kind::Zero
        } else if p == F::zero() {
            Kind::Hard
        } else if p == F::one() {
            Kind::Soft
        } else {
            Kind::Nonconvex
        };
        let (thr, jump) = match kind {
            Kind::Identity => (F::zero(), F::zero()),
            Kind::Zero => (F::infinity(), F::zero()),
            _ => (threshold(&params), jump_height(&params)),
        };
        Ok(Self { p, lambda, thr, jump, kind })
    }

    pub fn p(&self) -> F {
        self.p
    }

    pub fn lambda(&self) -> F {
        self.lambda
    }

    /// λ̃_p.
    pub fn threshold(&self) -> F {
        self.thr
    }

    /// η⁺, the output magnitude right above the threshold (0 for p = 1).
    pub fn jump(&self) -> F {
        self.jump
    }

    /// η_p(u; λ).
    ///
    /// # Panics
    ///
    /// If the bracketed Newton iteration fails to converge, which cannot happen for finite
    /// inputs since the residual is strictly increasing on the bracket.
    #[inline]
    pub fn value(&self, u: F) -> F {
        self.try_value(u).expect("bracketed Newton iteration must converge")
    }

    pub fn try_value(&self, u: F) -> Result<F, ProxError> {
        let a = u.abs();
        let mag = match self.kind {
            Kind::Identity => return Ok(u),
            Kind::Zero => F::zero(),
            Kind::Hard => {
                if a >= self.thr {
                    a
                } else {
                    F::zero()
                }
            }
            Kind::Soft => (a - self.lambda).max(F::zero()),
            Kind::Nonconvex => {
                if a < self.thr {
                    F::zero()
                } else if a == self.thr {
                    self.jump
                } else {
                    self.solve(a)?
                }
            }
        };
        Ok(mag.copysign(u))
    }

    /// Larger root of x + λp x^{p−1} = a for a > λ̃_p.
    ///
    /// The residual is convex and increasing on [η⁺, a], so Newton started to the right of the
    /// root decreases monotonically; bisection takes over if an iterate leaves the bracket.
    fn solve(&self, a: F) -> Result<F, ProxError> {
        let one = F::one();
        let lp = self.lambda * self.p;
        let pm1 = self.p - one;
        let tol = lit::<F>(4.0) * F::epsilon() * a;
        let (mut lo, mut hi) = (self.jump, a);
        let mut x = a - lp * a.powf(pm1);
        if !(x > lo && x < hi) {
            x = lit::<F>(0.5) * (lo + hi);
        }
        for _ in 0..200 {
            let xp = x.powf(pm1);
            let r = x + lp * xp - a;
            if r.abs() <= tol {
                return Ok(x);
            }
            if r > F::zero() {
                hi = x;
            } else {
                lo = x;
            }
            let slope = one + lp * pm1 * xp / x;
            let mut next = x - r / slope;
            if !(slope > F::zero()) || !(next > lo && next < hi) {
                next = lit::<F>(0.5) * (lo + hi);
            }
            if (next - x).abs() <= lit::<F>(4.0) * F::epsilon() * x {
                return Ok(next);
            }
            x = next;
        }
        Err(ProxError::NoConvergence(a.to_f64().unwrap_or(f64::NAN)))
    }

    /// Slope ∂₁η on the active branch, expressed through the output magnitude `x`.
    #[inline]
    pub fn slope_at(&self, x: F) -> F {
        match self.kind {
            Kind::Nonconvex => {
                let one = F::one();
                one / (one
                    + self.lambda * self.p * (self.p - one) * x.abs().powf(self.p - lit(2.0)))
            }
            Kind::Zero => F::zero(),
            _ => F::one(),
        }
    }

    /// |u| − |η_p(u)| on the active branch, expressed through the output magnitude `x`:
    /// λp|x|^{p−1} (λ for soft thresholding, 0 for hard thresholding and the identity).
    ///
    /// Lets callers form η_p(m + z) − m as z − sign(u)·shrinkage without the cancellation
    /// of subtracting two large numbers.
    #[inline]
    pub fn shrinkage_at(&self, x: F) -> F {
        match self.kind {
            Kind::Nonconvex => self.lambda * self.p * x.abs().powf(self.p - F::one()),
            Kind::Soft => self.lambda,
            Kind::Zero => x.abs(),
            Kind::Hard | Kind::Identity => F::zero(),
        }
    }

    fn strictly_active(&self, u: F) -> bool {
        match self.kind {
            Kind::Identity => true,
            Kind::Zero => false,
            _ => u.abs() > self.thr,
        }
    }

    pub fn eval(&self, u: F) -> Result<ProxEval<F>, ProxError> {
        let value = self.try_value(u)?;
        let (d1, d2) = if self.strictly_active(u) && value != F::zero() {
            let d1 = self.slope_at(value);
            (Some(d1), Some(self.d2_from(value, d1, u)))
        } else if self.kind == Kind::Identity {
            (Some(F::one()), None)
        } else {
            (None, None)
        };
        Ok(ProxEval { value, active: value != F::zero(), d1, d2 })
    }

    fn d2_from(&self, value: F, d1: F, u: F) -> F {
        match self.kind {
            Kind::Hard => F::zero(),
            Kind::Soft => -u.signum(),
            _ => -self.p * value.abs().powf(self.p - F::one()) * d1 * u.signum(),
        }
    }

    pub fn d1(&self, u: F) -> Result<F, ProxError> {
        self.eval(u)?.d1.ok_or(ProxError::DerivativeUndefined(u.to_f64().unwrap_or(f64::NAN)))
    }

    pub fn d2(&self, u: F) -> Result<F, ProxError> {
        self.eval(u)?.d2.ok_or(ProxError::DerivativeUndefined(u.to_f64().unwrap_or(f64::NAN)))
    }

    /// ∂₁²η_p on the active branch: −λp(p−1)(p−2)η^{p−3}(∂₁η)³, zero for p ∈ {0, 1}.
    pub fn d11(&self, u: F) -> Result<F, ProxError> {
        let d1 = self.d1(u)?;
        if self.kind != Kind::Nonconvex {
            return Ok(F::zero());
        }
        let x = self.value(u).abs();
        let (one, two, three) = (F::one(), lit::<F>(2.0), lit::<F>(3.0));
        let c = self.lambda * self.p * (self.p - one) * (self.p - two);
        Ok(-c * x.powf(self.p - three) * d1 * d1 * d1 * u.signum())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp(p: f64, lambda: f64) -> ProxParams<f64> {
        ProxParams::new(p, lambda).unwrap()
    }

    #[test]
    fn threshold_constant_known_values() {
        assert!((c_p(0.0f64) - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(c_p(1.0f64), 1.0);
        assert!((c_p(0.5f64) - 1.5).abs() < 1e-15);
    }

    #[test]
    fn zeta_star_examples() {
        let z = zeta_star(&pp(0.5, 1.0)).unwrap();
        assert!((z - 0.25f64.powf(2.0 / 3.0)).abs() < 1e-15);
        let z16 = zeta_star(&pp(0.5, 16.0)).unwrap();
        assert!((z16 - 16f64.powf(2.0 / 3.0) * z).abs() < 1e-13);
        assert!(zeta_star(&pp(0.0, 1.0)).is_err());
        assert!(zeta_star(&pp(1.0, 1.0)).is_err());
    }

    #[test]
    fn closed_forms() {
        assert_eq!(eta_p(2.0, &pp(1.0, 0.5)).unwrap().value, 1.5);
        assert_eq!(eta_p(1.0, &pp(0.0, 1.0)).unwrap().value, 0.0);
        assert_eq!(eta_p(-3.0, &pp(0.4, 0.0)).unwrap().value, -3.0);
        assert_eq!(eta_p(-3.0, &pp(0.4, f64::INFINITY)).unwrap().value, 0.0);
    }

    #[test]
    fn tie_resolves_to_nonzero_branch() {
        let e = eta_p(1.5, &pp(0.5, 1.0)).unwrap();
        assert!(e.active);
        assert!((e.value - 1.0).abs() < 1e-15);
        assert!(e.d1.is_none());
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(ProxParams::new(1.5, 1.0).is_err());
        assert!(ProxParams::new(0.5, -1.0).is_err());
        assert!(ProxParams::new(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn derivative_errors_when_inactive() {
        assert!(d1_eta_p(0.3, &pp(0.5, 1.0)).is_err());
        assert!(d2_eta_p(1.0, &pp(1.0, 1.0)).is_err());
        assert_eq!(d2_eta_p(-5.0, &pp(1.0, 1.0)).unwrap(), 1.0);
    }
}
