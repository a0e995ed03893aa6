//! Gaussian expectations of piecewise-smooth integrands.
//!
//! E g(Z) for Z ~ N(0, 1) is split at the caller's breakpoints (the discontinuities of g)
//! and at zero. Each piece is reflected onto the half line and integrated against φ with a
//! Gauss–Legendre rule; unbounded pieces are cut where φ has decayed by e^{−40} relative to
//! the left end of the piece, so tail pieces keep their relative accuracy however far out
//! they start. Smooth integrands can use the Gauss–Hermite rule directly.

use std::num::NonZeroUsize;

use gauss_quad::hermite::GaussHermite;
use gauss_quad::legendre::GaussLegendre;
use thiserror::Error;

use crate::gauss;

/// Smallest accepted rule order.
pub const MIN_ORDER: usize = 8;
/// Default rule order.
pub const DEFAULT_ORDER: usize = 61;

/// Decay, in units of log φ, after which a half-line piece is truncated.
const TAIL_LOG_DECAY: f64 = 40.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum QuadError {
    #[error("quadrature order {0} is below the minimum of 8")]
    OrderTooLow(usize),
}

#[derive(Debug, Clone)]
pub struct Quadrature {
    order: usize,
    /// Gauss–Legendre nodes and weights on [−1, 1].
    legendre: Vec<(f64, f64)>,
    /// Gauss–Hermite nodes and weights for the N(0, 1) weight (weights sum to 1).
    hermite: Vec<(f64, f64)>,
}

impl Default for Quadrature {
    fn default() -> Self {
        Self::new(DEFAULT_ORDER).expect("default order is valid")
    }
}

impl Quadrature {
    pub fn new(order: usize) -> Result<Self, QuadError> {
        if order < MIN_ORDER {
            return Err(QuadError::OrderTooLow(order));
        }
        let n = NonZeroUsize::new(order).expect("order checked above");
        let legendre = GaussLegendre::new(n).as_node_weight_pairs().to_vec();
        let sqrt_pi = std::f64::consts::PI.sqrt();
        let hermite = GaussHermite::new(n)
            .as_node_weight_pairs()
            .iter()
            .map(|&(x, w)| (std::f64::consts::SQRT_2 * x, w / sqrt_pi))
            .collect();
        Ok(Self { order, legendre, hermite })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// E g(Z) for smooth g, by Gauss–Hermite.
    pub fn hermite_expectation(&self, mut g: impl FnMut(f64) -> f64) -> f64 {
        self.hermite.iter().map(|&(z, w)| w * g(z)).sum()
    }

    /// E g(Z) where g is smooth between consecutive `breaks` (any order, duplicates allowed).
    pub fn expectation(&self, breaks: &[f64], mut g: impl FnMut(f64) -> f64) -> f64 {
        let mut cuts: Vec<f64> = breaks.iter().copied().filter(|b| b.is_finite()).collect();
        cuts.push(0.0);
        cuts.sort_by(|a, b| a.total_cmp(b));
        cuts.dedup();

        let mut total = 0.0;
        let mut lo = f64::NEG_INFINITY;
        for &c in cuts.iter().chain(std::iter::once(&f64::INFINITY)) {
            if c > lo {
                total += if c <= 0.0 {
                    self.half_line(-c, -lo, |s| g(-s))
                } else {
                    self.half_line(lo, c, &mut g)
                };
            }
            lo = c;
        }
        total
    }

    /// E g(Z) for even g, smooth between the nonnegative `breaks`.
    pub fn even_expectation(&self, breaks: &[f64], mut g: impl FnMut(f64) -> f64) -> f64 {
        let mut cuts: Vec<f64> =
            breaks.iter().copied().filter(|b| b.is_finite() && *b > 0.0).collect();
        cuts.sort_by(|a, b| a.total_cmp(b));
        cuts.dedup();
        let mut total = 0.0;
        let mut lo = 0.0;
        for &c in cuts.iter().chain(std::iter::once(&f64::INFINITY)) {
            total += self.half_line(lo, c, &mut g);
            lo = c;
        }
        2.0 * total
    }

    /// ∫_lo^hi g(s) φ(s) ds for 0 ≤ lo < hi ≤ ∞.
    fn half_line(&self, lo: f64, hi: f64, mut g: impl FnMut(f64) -> f64) -> f64 {
        let hi = hi.min((lo * lo + 2.0 * TAIL_LOG_DECAY).sqrt());
        if hi <= lo {
            return 0.0;
        }
        let (mid, half) = (0.5 * (hi + lo), 0.5 * (hi - lo));
        let sum: f64 = self
            .legendre
            .iter()
            .map(|&(x, w)| {
                let s = mid + half * x;
                w * g(s) * gauss::pdf(s)
            })
            .sum();
        half * sum
    }
}
