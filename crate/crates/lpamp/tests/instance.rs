use lpamp::instance::{generate, InstanceSpec};
use lpamp::{Nonzero, SignalPrior};

fn spec() -> InstanceSpec {
    InstanceSpec {
        big_n: 2000,
        delta: 0.3,
        prior: SignalPrior::new(0.05, Nonzero::StandardGaussian).unwrap(),
        sigma_w: 0.2,
        seed: 99,
    }
}

#[test]
fn matrix_and_noise_statistics() {
    let s = spec();
    let inst = generate::<f64>(&s, 0).unwrap().instance;
    let (n, big_n) = (inst.rows(), inst.cols());
    assert_eq!((n, big_n), (600, 2000));
    // Entries are N(0, 1/n): columns have unit expected squared norm.
    let total: f64 = inst.a.iter().map(|v| v * v).sum();
    let mean_col = total / big_n as f64;
    assert!((mean_col - 1.0).abs() < 0.01, "{mean_col}");
    let x = inst.x_true.as_ref().unwrap();
    assert_eq!(x.iter().filter(|v| **v != 0.0).count(), 100);
    let ax = inst.apply(x);
    let w: Vec<f64> = inst.y.iter().zip(&ax).map(|(y, a)| y - a).collect();
    let sd = (w.iter().map(|v| v * v).sum::<f64>() / n as f64).sqrt();
    assert!((sd / 0.2 - 1.0).abs() < 0.1, "{sd}");
}

#[test]
fn spec_round_trip_uses_capital_n() {
    let s = spec();
    let text = serde_json::to_string(&s).unwrap();
    assert!(text.contains("\"N\":2000"), "{text}");
    let back: InstanceSpec = serde_json::from_str(&text).unwrap();
    assert_eq!(s, back);
    let no_seed: InstanceSpec = serde_json::from_str(
        r#"{"N": 10, "delta": 0.5, "sigma_w": 0.0, "prior": {"epsilon": 0.1, "nonzero": {"kind": "point_mass", "mu": 2.0}}}"#,
    )
    .unwrap();
    assert_eq!(no_seed.seed, 0);
}

#[test]
fn precisions_share_one_stream() {
    let s = spec();
    let a = generate::<f64>(&s, 3).unwrap().instance;
    let b = generate::<f32>(&s, 3).unwrap().instance;
    for (x, y) in a.y.iter().zip(&b.y) {
        assert!((x - *y as f64).abs() < 1e-4 * x.abs().max(1.0));
    }
}

#[test]
fn rejects_bad_specs() {
    let mut s = spec();
    s.delta = 1.5;
    assert!(generate::<f64>(&s, 0).is_err());
    let mut s = spec();
    s.big_n = 2;
    assert!(generate::<f64>(&s, 0).is_err());
    let mut s = spec();
    s.sigma_w = -1.0;
    assert!(generate::<f64>(&s, 0).is_err());
}
