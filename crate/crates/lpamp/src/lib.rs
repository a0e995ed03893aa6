//! ℓp-regularized approximate message passing (ℓp-AMP) for compressed sensing,
//! together with a deterministic state-evolution analyzer.
//!
//! The crate is organised bottom-up:
//!
//! - [`prox`]: exact ℓp proximal maps η_p(u; λ) for 0 ≤ p ≤ 1 and their derivatives.
//! - [`smooth`]: the Gaussian-mollified proximal map used inside AMP.
//! - [`quad`]: kink-aware Gaussian quadrature.
//! - [`se`]: state evolution Ψ(σ²), optimal policies, fixed points.
//! - [`minimax`]: minimax risks, phase-transition curves, noise-sensitivity bounds.
//! - [`amp`]: the AMP iteration itself with SURE tuning.
//! - [`instance`] and [`montecarlo`]: synthetic problem generation and seeded trial harnesses.
//!
//! The scalar maps and the AMP iteration are generic over [`num_traits::Float`];
//! the quadrature-based analysis works in `f64`.

pub mod amp;
pub mod cache;
pub mod gauss;
pub mod instance;
pub mod minimax;
pub mod montecarlo;
pub mod optim;
pub mod prior;
pub mod prox;
pub mod quad;
pub mod se;
pub mod smooth;

pub use prior::{Nonzero, SignalPrior};

/// Proximal parameters in double precision.
pub type ProxParams64 = prox::ProxParams<f64>;
/// Proximal parameters in single precision.
pub type ProxParams32 = prox::ProxParams<f32>;
/// Smoothed proximal parameters in double precision.
pub type SmoothProxParams64 = smooth::SmoothProxParams<f64>;
/// Smoothed proximal parameters in single precision.
pub type SmoothProxParams32 = smooth::SmoothProxParams<f32>;
/// Measurement instance in double precision.
pub type Instance64 = amp::Instance<f64>;
/// Measurement instance in single precision.
pub type Instance32 = amp::Instance<f32>;
/// AMP run history in double precision.
pub type AmpRun64 = amp::AmpRun<f64>;
/// AMP state in double precision.
pub type AmpState64 = amp::AmpState<f64>;

/// Converts an `f64` literal into the working scalar type.
#[inline]
pub(crate) fn lit<F: num_traits::Float>(x: f64) -> F {
    F::from(x).expect("f64 literal representable in the scalar type")
}
