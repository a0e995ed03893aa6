use lpamp::cache::Cache;
use lpamp::minimax::{self, Minimax, Which};

/// E η₁(Z; τ)² by composite Simpson's rule on [τ, 12], doubled for symmetry.
fn soft_null_simpson(tau: f64) -> f64 {
    let n = 20_000;
    let (a, b) = (tau, 12.0);
    let h = (b - a) / n as f64;
    let g = |z: f64| (z - tau).powi(2) * (-0.5 * z * z).exp() / (2.0 * std::f64::consts::PI).sqrt();
    let mut s = g(a) + g(b);
    for k in 1..n {
        s += g(a + k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
    }
    2.0 * s * h / 3.0
}

#[test]
fn soft_null_moment_closed_form() {
    for tau in [0.0, 0.5, 1.0, 2.0, 3.5] {
        let a = minimax::soft_null_moment(tau);
        let b = soft_null_simpson(tau);
        assert!((a - b).abs() < 1e-10, "tau={tau}: {a} vs {b}");
    }
    assert!((minimax::soft_null_moment(0.0) - 1.0).abs() < 1e-15);
}

#[test]
fn m1_reference_and_transition() {
    // Frozen from an independent golden-section minimization.
    assert!((minimax::m1(0.1).unwrap() - 0.32879350545363006).abs() < 1e-10);
    for delta in [0.1, 0.25, 0.5, 0.75] {
        let eps = minimax::eps_star_1(delta).unwrap();
        assert!(eps > 0.0 && eps < delta);
        assert!((minimax::m1(eps).unwrap() - delta).abs() < 1e-7, "delta={delta}");
    }
}

#[test]
fn upper_value_is_increasing_in_sparsity() {
    let mm = Minimax::default();
    for p in [0.0, 0.5, 1.0] {
        let vals: Vec<f64> =
            [0.02, 0.1, 0.3, 0.6].iter().map(|&e| mm.m_bar(p, e).unwrap().value).collect();
        assert!(vals.windows(2).all(|w| w[0] < w[1]), "p={p}: {vals:?}");
        assert!(vals.iter().all(|&v| v > 0.0 && v < 1.0 + 1e-9));
    }
}

#[test]
fn worst_case_atom_is_infinite_for_soft_thresholding() {
    let r = Minimax::default().m_bar(1.0, 0.1).unwrap();
    assert!(r.mu_star.is_infinite());
    assert!((r.value - minimax::m1(0.1).unwrap()).abs() < 1e-9);
}

#[test]
fn transition_matches_the_bound() {
    let mm = Minimax::default();
    let delta = 0.3;
    let tr = mm.eps_star_p(delta, 0.5, Which::Bar).unwrap();
    let at = mm.m_bar(0.5, tr.epsilon).unwrap().value;
    assert!((at - delta).abs() < 1e-3, "M_bar at eps* = {at}");
    let l1 = mm.eps_star_p(delta, 1.0, Which::Bar).unwrap();
    assert!((l1.epsilon - minimax::eps_star_1(delta).unwrap()).abs() < 1e-5);
}

#[test]
fn gamma_for_hard_thresholding() {
    // E η₀(Z)² with threshold α: 2(αφ(α) + Φ(−α)).
    let alpha: f64 = 3.0;
    let phi = (-0.5 * alpha * alpha).exp() / (2.0 * std::f64::consts::PI).sqrt();
    let tail = 0.5 * libm::erfc(alpha / std::f64::consts::SQRT_2);
    let want = 2.0 * (alpha * phi + tail);
    let got = Minimax::default().gamma_alpha_p(alpha, 0.0).unwrap();
    assert!((got - want).abs() < 1e-12, "{got} vs {want}");
}

#[test]
fn cache_reuses_results() {
    let dir = tempfile::tempdir().unwrap();
    let mm = Minimax::default().with_cache(Cache::new(dir.path()).unwrap());
    let first = mm.m_bar(0.5, 0.05).unwrap();
    assert!(std::fs::read_dir(dir.path()).unwrap().count() > 0);
    let again = mm.m_bar(0.5, 0.05).unwrap();
    assert_eq!(first, again);
    assert!(mm.m_bar(0.5, 1.5).is_err());
}
