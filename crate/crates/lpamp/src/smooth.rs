//! Smoothed proximal map η̃_{p,h} = S_p + D̃_{p,h}.
//!
//! S_p removes the jump of η_p, leaving a continuous function, and D̃_{p,h} is the step
//! η⁺·sign(u)·1{|u| > λ̃_p} convolved with a N(0, h²) kernel. The result is smooth in u, so
//! its divergence is well defined for the Onsager term and for SURE.

use num_traits::Float;

use crate::gauss;
use crate::lit;
use crate::prox::{Prox, ProxError, ProxParams};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothProxParams<F> {
    pub base: ProxParams<F>,
    /// Gaussian kernel bandwidth, h > 0.
    pub h: F,
}

impl<F: Float> SmoothProxParams<F> {
    pub fn new(p: F, lambda: F, h: F) -> Result<Self, ProxError> {
        let base = ProxParams::new(p, lambda)?;
        if !(h > F::zero()) {
            return Err(ProxError::InvalidBandwidth(h.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(Self { base, h })
    }
}

/// S_p(u; λ).
pub fn s_part<F: Float>(u: F, base: &ProxParams<F>) -> Result<F, ProxError> {
    let prox = Prox::new(base)?;
    Ok(continuous_part(&prox, u))
}

/// D̃_{p,h}(u; λ).
pub fn d_tilde<F: Float>(u: F, params: &SmoothProxParams<F>) -> Result<F, ProxError> {
    Ok(SmoothProx::new(params)?.d_tilde(u))
}

/// η̃_{p,h}(u; λ).
pub fn eta_tilde<F: Float>(u: F, params: &SmoothProxParams<F>) -> Result<F, ProxError> {
    Ok(SmoothProx::new(params)?.value(u))
}

/// ∂η̃_{p,h}/∂u.
pub fn d1_eta_tilde<F: Float>(u: F, params: &SmoothProxParams<F>) -> Result<F, ProxError> {
    Ok(SmoothProx::new(params)?.deriv(u))
}

fn continuous_part<F: Float>(prox: &Prox<F>, u: F) -> F {
    if u.abs() > prox.threshold() {
        prox.value(u) - prox.jump().copysign(u)
    } else {
        F::zero()
    }
}

/// η̃_{p,h} with the proximal constants precomputed.
#[derive(Debug, Clone, Copy)]
pub struct SmoothProx<F> {
    prox: Prox<F>,
    h: F,
    /// η⁺ as f64 (the mollifier terms are evaluated in double precision).
    jump: f64,
    thr: f64,
    h64: f64,
}

impl<F: Float> SmoothProx<F> {
    pub fn new(params: &SmoothProxParams<F>) -> Result<Self, ProxError> {
        let prox = Prox::new(&params.base)?;
        let h = params.h;
        if !(h > F::zero()) {
            return Err(ProxError::InvalidBandwidth(h.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(Self {
            prox,
            h,
            jump: prox.jump().to_f64().unwrap_or(0.0),
            thr: prox.threshold().to_f64().unwrap_or(f64::INFINITY),
            h64: h.to_f64().unwrap_or(f64::NAN),
        })
    }

    pub fn prox(&self) -> &Prox<F> {
        &self.prox
    }

    pub fn h(&self) -> F {
        self.h
    }

    pub fn s_part(&self, u: F) -> F {
        continuous_part(&self.prox, u)
    }

    /// Interior one-sided derivative of S_p (the kink at ±λ̃_p takes the active-side value).
    pub fn s_deriv(&self, u: F) -> F {
        let thr = self.prox.threshold();
        if u.abs() > thr {
            self.prox.slope_at(self.prox.value(u))
        } else if u.abs() == thr {
            self.prox.slope_at(self.prox.jump())
        } else {
            F::zero()
        }
    }

    pub fn d_tilde(&self, u: F) -> F {
        if self.jump == 0.0 || !self.thr.is_finite() {
            return F::zero();
        }
        let a = u.abs().to_f64().unwrap_or(f64::NAN);
        let d = self.jump * gauss::interval((-a - self.thr) / self.h64, (a - self.thr) / self.h64);
        lit::<F>(d).copysign(u)
    }

    fn d_tilde_deriv(&self, u: F) -> F {
        if self.jump == 0.0 || !self.thr.is_finite() {
            return F::zero();
        }
        let a = u.to_f64().unwrap_or(f64::NAN);
        let k = gauss::pdf((a - self.thr) / self.h64) + gauss::pdf((a + self.thr) / self.h64);
        lit(self.jump / self.h64 * k)
    }

    pub fn value(&self, u: F) -> F {
        self.s_part(u) + self.d_tilde(u)
    }

    pub fn deriv(&self, u: F) -> F {
        self.s_deriv(u) + self.d_tilde_deriv(u)
    }

    /// (η̃(u), η̃'(u)) sharing one proximal solve.
    pub fn value_and_deriv(&self, u: F) -> (F, F) {
        let thr = self.prox.threshold();
        let (s, ds) = if u.abs() > thr {
            let v = self.prox.value(u);
            (v - self.prox.jump().copysign(u), self.prox.slope_at(v))
        } else if u.abs() == thr {
            (F::zero(), self.prox.slope_at(self.prox.jump()))
        } else {
            (F::zero(), F::zero())
        };
        (s + self.d_tilde(u), ds + self.d_tilde_deriv(u))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s_part_examples() {
        let base = ProxParams::new(0.5, 1.0).unwrap();
        assert_eq!(s_part(1.5f64, &base).unwrap(), 0.0);
        let soft = ProxParams::new(1.0, 2.0).unwrap();
        assert!((s_part(5.0f64, &soft).unwrap() - 3.0).abs() < 1e-15);
    }

    #[test]
    fn d_tilde_at_threshold_is_half_jump() {
        let sp = SmoothProxParams::new(0.5f64, 1.0, 0.1).unwrap();
        assert!((d_tilde(1.5, &sp).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(d_tilde(0.0, &sp).unwrap(), 0.0);
    }

    #[test]
    fn hard_threshold_derivative_inside_is_tiny() {
        let sp = SmoothProxParams::new(0.0f64, 0.5, 0.1).unwrap();
        let want = 10.0 * 2.0 * gauss::pdf(10.0);
        let got = d1_eta_tilde(0.0, &sp).unwrap();
        assert!(((got - want) / want).abs() < 1e-12);
        assert!((got - 1.5e-21).abs() < 0.1e-21);
    }

    #[test]
    fn rejects_nonpositive_bandwidth() {
        assert!(SmoothProxParams::new(0.5f64, 1.0, 0.0).is_err());
    }
}
