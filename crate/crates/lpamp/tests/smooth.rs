use lpamp::prox::{Prox, ProxParams};
use lpamp::smooth::{eta_tilde, SmoothProx, SmoothProxParams};
use proptest::prelude::*;

fn smooth(p: f64, lambda: f64, h: f64) -> SmoothProx<f64> {
    SmoothProx::new(&SmoothProxParams::new(p, lambda, h).unwrap()).unwrap()
}

#[test]
fn rejects_nonpositive_bandwidth() {
    assert!(SmoothProxParams::new(0.5, 1.0, 0.0).is_err());
    assert!(SmoothProxParams::new(0.5, 1.0, -1.0).is_err());
}

#[test]
fn soft_threshold_is_untouched() {
    // Without a jump the mollified part vanishes.
    let sp = smooth(1.0, 0.7, 0.05);
    let pr = Prox::new(&ProxParams::new(1.0, 0.7).unwrap()).unwrap();
    for k in -40..=40 {
        let u = k as f64 * 0.05;
        assert_eq!(sp.value(u), pr.value(u));
    }
}

#[test]
fn midpoint_of_the_jump() {
    // At the threshold the Gaussian mollifier has covered half of the jump (up to the
    // exponentially small mirror term).
    let sp = smooth(0.5, 1.0, 1e-3);
    let thr = sp.prox().threshold();
    let mid = sp.d_tilde(thr);
    assert!((mid - 0.5 * sp.prox().jump()).abs() < 1e-12, "{mid}");
    assert_eq!(
        eta_tilde(thr, &SmoothProxParams::new(0.5, 1.0, 1e-3).unwrap()).unwrap(),
        sp.value(thr)
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn odd(p in 0.0f64..=1.0, lambda in 0.1f64..5.0, h in 1e-4f64..0.5, u in -10.0f64..10.0) {
        let sp = smooth(p, lambda, h);
        prop_assert_eq!(sp.value(-u), -sp.value(u));
    }

    #[test]
    fn converges_away_from_the_jump(p in 0.0f64..1.0, lambda in 0.1f64..5.0, frac in 0.0f64..3.0) {
        let pr = Prox::new(&ProxParams::new(p, lambda).unwrap()).unwrap();
        let u = frac * pr.threshold();
        let gap = (u - pr.threshold()).abs();
        prop_assume!(gap > 1e-2 * pr.threshold());
        // With h ≤ gap/10 the mollifier error is below jump·Φ(−10).
        let sp = smooth(p, lambda, gap / 10.0);
        prop_assert!((sp.value(u) - pr.value(u)).abs() <= 1e-15 * pr.jump().max(1.0) + 1e-12 * u);
    }

    #[test]
    fn derivative_matches_finite_difference(p in 0.0f64..=1.0, lambda in 0.1f64..5.0, h in 1e-2f64..0.5, frac in 0.0f64..3.0) {
        let sp = smooth(p, lambda, h);
        let thr = sp.prox().threshold();
        let u = frac * thr;
        let step = 1e-6 * h;
        // Stay off the kink of the continuous part at ±threshold.
        prop_assume!((u - thr).abs() > 10.0 * step && (u + thr).abs() > 10.0 * step);
        let fd = (sp.value(u + step) - sp.value(u - step)) / (2.0 * step);
        let d = sp.deriv(u);
        prop_assert!((fd - d).abs() <= 1e-5 * d.abs().max(1.0), "{d} vs {fd}");
        let (v, d2) = sp.value_and_deriv(u);
        prop_assert_eq!(v, sp.value(u));
        prop_assert_eq!(d2, d);
    }

    #[test]
    fn nondecreasing(p in 0.0f64..=1.0, lambda in 0.1f64..5.0, h in 1e-3f64..0.5, a in -10.0f64..10.0, d in 0.0f64..1.0) {
        let sp = smooth(p, lambda, h);
        prop_assert!(sp.value(a + d) >= sp.value(a) - 1e-15);
    }
}
