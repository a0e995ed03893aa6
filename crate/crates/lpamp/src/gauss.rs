//! Standard normal density and distribution function in double precision.

use libm::erfc;
use std::f64::consts::{FRAC_1_SQRT_2, PI};

/// φ(x).
#[inline]
pub fn pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

/// Φ(x), accurate in both tails.
#[inline]
pub fn cdf(x: f64) -> f64 {
    0.5 * erfc(-x * FRAC_1_SQRT_2)
}

/// 1 − Φ(x) without cancellation.
#[inline]
pub fn sf(x: f64) -> f64 {
    0.5 * erfc(x * FRAC_1_SQRT_2)
}

/// P(a < Z < b) computed from whichever tail keeps full relative precision.
pub fn interval(a: f64, b: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    if a >= 0.0 {
        sf(a) - sf(b)
    } else if b <= 0.0 {
        cdf(b) - cdf(a)
    } else {
        1.0 - cdf(a) - sf(b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_and_normalised() {
        assert!((cdf(0.0) - 0.5).abs() < 1e-16);
        assert!((cdf(1.3) + cdf(-1.3) - 1.0).abs() < 1e-15);
        assert!((sf(10.0) - 7.619853024160527e-24).abs() < 1e-36);
        assert!((interval(-1.0, 1.0) - 0.6826894921370859).abs() < 1e-15);
    }
}
