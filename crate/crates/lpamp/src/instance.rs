//! Synthetic compressed-sensing instances with reproducible seeding.
//!
//! Every (seed, trial) pair owns its own ChaCha8 stream, so trials can run in any order or in
//! parallel and still produce bitwise-identical instances.

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::amp::{AmpError, Instance, Scalar};
use crate::lit;
use crate::prior::{PriorError, SignalPrior};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InstanceError {
    #[error(transparent)]
    Prior(#[from] PriorError),
    #[error(transparent)]
    Amp(#[from] AmpError),
    #[error("invalid instance spec: {0}")]
    Spec(String),
}

/// Problem size, prior, noise level and seed of a generated instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceSpec {
    /// Signal length N.
    #[serde(rename = "N")]
    pub big_n: usize,
    /// n/N; the number of measurements is ⌊δN⌋.
    pub delta: f64,
    pub prior: SignalPrior,
    pub sigma_w: f64,
    #[serde(default)]
    pub seed: u64,
}

impl InstanceSpec {
    pub fn rows(&self) -> usize {
        (self.delta * self.big_n as f64 + 1e-9).floor() as usize
    }

    /// round(εN).
    pub fn nonzeros(&self) -> usize {
        (self.prior.epsilon * self.big_n as f64).round() as usize
    }

    pub fn validate(&self) -> Result<(), InstanceError> {
        self.prior.validate()?;
        if self.big_n == 0 {
            return Err(InstanceError::Spec("N must be positive".into()));
        }
        if !(self.delta > 0.0 && self.delta <= 1.0) {
            return Err(InstanceError::Spec(format!("delta = {} must lie in (0, 1]", self.delta)));
        }
        if self.rows() == 0 {
            return Err(InstanceError::Spec(format!(
                "floor(delta * N) = 0 for delta = {}, N = {}",
                self.delta, self.big_n
            )));
        }
        if !(self.sigma_w >= 0.0 && self.sigma_w.is_finite()) {
            return Err(InstanceError::Spec(format!("sigma_w = {} must be >= 0", self.sigma_w)));
        }
        Ok(())
    }
}

/// Random stream for trial `trial` of base seed `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

#[derive(Debug, Clone)]
pub struct Generated<F> {
    pub instance: Instance<F>,
    /// Set when ε > 0 but round(εN) = 0.
    pub warning: Option<String>,
}

/// Draws A with iid N(0, 1/n) entries (row-major), an exactly round(εN)-sparse x_o with
/// uniformly placed support, noise w ~ N(0, σ_w²), and y = A x_o + w.
///
/// Values are drawn in `f64` in a fixed order (A, support, nonzeros, w) and then converted,
/// so `f32` and `f64` instances from one stream agree up to rounding.
pub fn generate<F: Scalar>(spec: &InstanceSpec, trial: u64) -> Result<Generated<F>, InstanceError> {
    spec.validate()?;
    let mut rng = trial_rng(spec.seed, trial);
    let (n, big_n) = (spec.rows(), spec.big_n);
    let scale = 1.0 / (n as f64).sqrt();
    let a: Vec<F> = (0..n * big_n)
        .map(|_| {
            let g: f64 = StandardNormal.sample(&mut rng);
            lit(g * scale)
        })
        .collect();

    let k = spec.nonzeros();
    let warning = (spec.prior.epsilon > 0.0 && k == 0).then(|| {
        format!("round(eps * N) = 0 for eps = {}, N = {big_n}; signal is zero", spec.prior.epsilon)
    });
    let mut x = vec![F::zero(); big_n];
    for i in index::sample(&mut rng, big_n, k) {
        x[i] = lit(spec.prior.sample_nonzero(&mut rng));
    }

    let mut y = vec![F::zero(); n];
    for (i, yi) in y.iter_mut().enumerate() {
        let row = &a[i * big_n..(i + 1) * big_n];
        *yi = row.iter().zip(&x).fold(F::zero(), |acc, (&aij, &xj)| acc + aij * xj);
    }
    if spec.sigma_w > 0.0 {
        for yi in y.iter_mut() {
            let w: f64 = StandardNormal.sample(&mut rng);
            *yi = *yi + lit(spec.sigma_w * w);
        }
    }
    let instance = Instance::new(a, n, big_n, y, Some(x), lit(spec.sigma_w))?;
    Ok(Generated { instance, warning })
}
