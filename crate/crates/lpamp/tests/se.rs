use lpamp::instance::trial_rng;
use lpamp::prox::{Prox, ProxParams};
use lpamp::se::{Policy, SeConfig, StateEvolution};
use lpamp::{Nonzero, SignalPrior};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

fn engine(delta: f64, sigma_w: f64, prior: SignalPrior) -> StateEvolution {
    StateEvolution::new(SeConfig::new(delta, sigma_w, prior)).unwrap()
}

/// Mean and standard error of (η(X + σZ) − X)² over `n` draws.
fn sampled_risk(
    prior: &SignalPrior,
    sigma: f64,
    lambda: f64,
    p: f64,
    n: usize,
    seed: u64,
) -> (f64, f64) {
    let prox = Prox::new(&ProxParams::new(p, lambda).unwrap()).unwrap();
    let mut rng = trial_rng(seed, 0);
    let (mut s, mut s2) = (0.0, 0.0);
    for _ in 0..n {
        let x =
            if rng.random::<f64>() < prior.epsilon { prior.sample_nonzero(&mut rng) } else { 0.0 };
        let z: f64 = StandardNormal.sample(&mut rng);
        let e = (prox.value(x + sigma * z) - x).powi(2);
        s += e;
        s2 += e * e;
    }
    let mean = s / n as f64;
    let var = (s2 / n as f64 - mean * mean) * n as f64 / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

#[test]
fn risk_matches_sampling() {
    let cases = [
        (SignalPrior::two_point(0.1, 1.0), 0.3, 0.2, 0.0),
        (SignalPrior::two_point(0.1, 1.0), 0.3, 0.05, 0.5),
        (SignalPrior::new(0.2, Nonzero::StandardGaussian).unwrap(), 0.5, 0.3, 0.3),
        (SignalPrior::new(0.05, Nonzero::PointMass { mu: 2.0 }).unwrap(), 1.0, 1.0, 1.0),
        (
            SignalPrior::new(0.3, Nonzero::Atoms { atoms: vec![(0.5, 0.5), (-2.0, 0.5)] }).unwrap(),
            0.4,
            0.4,
            0.8,
        ),
    ];
    for (i, (prior, sigma, lambda, p)) in cases.into_iter().enumerate() {
        let se = engine(0.5, 0.0, prior.clone());
        let exact = se.risk(sigma, lambda, p).unwrap();
        let (mean, stderr) = sampled_risk(&prior, sigma, lambda, p, 1_000_000, 40 + i as u64);
        assert!(
            (exact - mean).abs() < 4.0 * stderr,
            "case {i}: quadrature {exact}, sampled {mean} ± {stderr}"
        );
    }
}

#[test]
fn scaled_risk_identity() {
    let se = engine(0.3, 0.0, SignalPrior::two_point(0.05, 1.0));
    for &(sigma, tau, p) in &[(0.2, 1.3, 0.5), (0.7, 0.4, 0.0), (0.05, 2.0, 1.0)] {
        let lambda = tau * f64::powf(sigma, 2.0 - p);
        let a = se.scaled_risk(sigma, tau, p).unwrap() * sigma * sigma;
        let b = se.risk(sigma, lambda, p).unwrap();
        assert!((a - b).abs() <= 1e-12 * b, "{a} vs {b}");
    }
}

#[test]
fn optimal_lambda_beats_a_grid() {
    let se = engine(0.3, 0.0, SignalPrior::two_point(0.05, 1.0));
    for p in [0.0, 0.5, 1.0] {
        let sigma = 0.3;
        let best = se.optimal_lambda(sigma, p).unwrap();
        for k in 0..60 {
            let tau = 10f64.powf(-2.0 + 4.0 * k as f64 / 59.0);
            let r = se.risk(sigma, tau * f64::powf(sigma, 2.0 - p), p).unwrap();
            assert!(best.risk <= r * (1.0 + 1e-9), "p={p} tau={tau}: {} > {r}", best.risk);
        }
    }
}

#[test]
fn iteration_settles_on_a_reported_fixed_point() {
    let se = engine(0.25, 0.1, SignalPrior::two_point(0.05, 1.0));
    let policy = Policy::TauScaled { tau: 1.5, p: 1.0 };
    let report = se.fixed_points(&policy, se.min_sigma_sq_max()).unwrap();
    let high = report.highest_stable.unwrap();
    let start = se.min_sigma_sq_max();
    let traj = se.iterate(&policy, start, 10_000, 1e-13).unwrap();
    assert!(traj.converged);
    assert!((traj.last_sigma_sq() / high - 1.0).abs() < 1e-8, "{} vs {high}", traj.last_sigma_sq());
    let psi = se.psi(high, &policy).unwrap();
    assert!((psi.next / high - 1.0).abs() < 1e-9);
}

#[test]
fn noiseless_zero_is_fixed() {
    let se = engine(0.25, 0.0, SignalPrior::two_point(0.05, 1.0));
    for policy in [Policy::Optimal { p: 0.5 }, Policy::TauPower { tau: 1.0, p: 0.3 }] {
        assert_eq!(se.psi(0.0, &policy).unwrap().next, 0.0);
    }
}

#[test]
fn config_round_trip() {
    let cfg = SeConfig::new(0.2, 0.01, SignalPrior::two_point(0.02, 1.0));
    let text = serde_json::to_string(&cfg).unwrap();
    let back: SeConfig = serde_json::from_str(&text).unwrap();
    assert_eq!(cfg, back);
    let policy = Policy::Adaptive { p_grid: vec![0.0, 0.5, 1.0] };
    let back: Policy = serde_json::from_str(&serde_json::to_string(&policy).unwrap()).unwrap();
    assert_eq!(policy, back);
}
