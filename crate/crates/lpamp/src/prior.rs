//! Sparse signal priors (1 − ε)Δ₀ + εG.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PriorError {
    #[error("epsilon = {0} is outside [0, 1]")]
    Epsilon(f64),
    #[error("nonzero part is invalid: {0}")]
    Nonzero(String),
}

/// Distribution G of the nonzero entries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Nonzero {
    /// Every nonzero equals `mu`.
    PointMass { mu: f64 },
    /// ±mu with probability ½ each.
    SymmetricTwoPoint { mu: f64 },
    /// N(0, 1).
    StandardGaussian,
    /// Finite list of (value, weight) pairs; weights must sum to one.
    Atoms { atoms: Vec<(f64, f64)> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignalPrior {
    pub epsilon: f64,
    pub nonzero: Nonzero,
}

impl SignalPrior {
    pub fn new(epsilon: f64, nonzero: Nonzero) -> Result<Self, PriorError> {
        let prior = Self { epsilon, nonzero };
        prior.validate()?;
        Ok(prior)
    }

    /// ε-sparse ±1 signal.
    pub fn two_point(epsilon: f64, mu: f64) -> Self {
        Self::new(epsilon, Nonzero::SymmetricTwoPoint { mu }).expect("valid two-point prior")
    }

    pub fn validate(&self) -> Result<(), PriorError> {
        if !(0.0..=1.0).contains(&self.epsilon) {
            return Err(PriorError::Epsilon(self.epsilon));
        }
        let bad = |m: &str| Err(PriorError::Nonzero(m.to_string()));
        match &self.nonzero {
            Nonzero::PointMass { mu } | Nonzero::SymmetricTwoPoint { mu } => {
                if !mu.is_finite() || *mu == 0.0 {
                    return bad("mu must be finite and nonzero");
                }
            }
            Nonzero::StandardGaussian => {}
            Nonzero::Atoms { atoms } => {
                if atoms.is_empty() {
                    return bad("atom list is empty");
                }
                if atoms.iter().any(|&(v, w)| !v.is_finite() || v == 0.0 || !(w >= 0.0)) {
                    return bad("atoms need finite nonzero values and nonnegative weights");
                }
                let total: f64 = atoms.iter().map(|a| a.1).sum();
                if (total - 1.0).abs() > 1e-9 {
                    return bad(&format!("weights sum to {total}, not 1"));
                }
            }
        }
        Ok(())
    }

    /// E U² for U ~ G.
    pub fn nonzero_second_moment(&self) -> f64 {
        match &self.nonzero {
            Nonzero::PointMass { mu } | Nonzero::SymmetricTwoPoint { mu } => mu * mu,
            Nonzero::StandardGaussian => 1.0,
            Nonzero::Atoms { atoms } => atoms.iter().map(|&(v, w)| w * v * v).sum(),
        }
    }

    /// E X² = ε E U².
    pub fn second_moment(&self) -> f64 {
        self.epsilon * self.nonzero_second_moment()
    }

    /// Atoms of |U| with weights, or `None` for the Gaussian nonzero part.
    ///
    /// The squared error of an odd denoiser is the same at x and −x, so the risk only
    /// depends on the law of |U|.
    pub fn folded_atoms(&self) -> Option<Vec<(f64, f64)>> {
        match &self.nonzero {
            Nonzero::PointMass { mu } | Nonzero::SymmetricTwoPoint { mu } => {
                Some(vec![(mu.abs(), 1.0)])
            }
            Nonzero::StandardGaussian => None,
            Nonzero::Atoms { atoms } => {
                let mut folded: Vec<(f64, f64)> = Vec::new();
                for &(v, w) in atoms {
                    match folded.iter_mut().find(|(a, _)| *a == v.abs()) {
                        Some(slot) => slot.1 += w,
                        None => folded.push((v.abs(), w)),
                    }
                }
                Some(folded)
            }
        }
    }

    /// Draws one value from G.
    pub fn sample_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match &self.nonzero {
            Nonzero::PointMass { mu } => *mu,
            Nonzero::SymmetricTwoPoint { mu } => {
                if rng.random::<bool>() {
                    *mu
                } else {
                    -*mu
                }
            }
            Nonzero::StandardGaussian => StandardNormal.sample(rng),
            Nonzero::Atoms { atoms } => {
                let mut u: f64 = rng.random();
                for &(v, w) in atoms {
                    if u < w {
                        return v;
                    }
                    u -= w;
                }
                atoms.last().map(|a| a.0).unwrap_or(0.0)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let p = SignalPrior::new(0.1, Nonzero::Atoms { atoms: vec![(1.0, 0.25), (-2.0, 0.75)] })
            .unwrap();
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(serde_json::from_str::<SignalPrior>(&s).unwrap(), p);
    }

    #[test]
    fn moments_and_folding() {
        let p =
            SignalPrior::new(0.5, Nonzero::Atoms { atoms: vec![(1.0, 0.5), (-1.0, 0.5)] }).unwrap();
        assert_eq!(p.second_moment(), 0.5);
        assert_eq!(p.folded_atoms().unwrap(), vec![(1.0, 1.0)]);
    }

    #[test]
    fn validation() {
        assert!(SignalPrior::new(1.2, Nonzero::StandardGaussian).is_err());
        assert!(SignalPrior::new(0.1, Nonzero::PointMass { mu: 0.0 }).is_err());
        assert!(SignalPrior::new(0.1, Nonzero::Atoms { atoms: vec![(1.0, 0.3)] }).is_err());
    }
}
