use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn lpamp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lpamp")).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

const AMP: &str = r#"{
  "kind": "amp-run",
  "instance": {"N": 400, "delta": 0.4, "sigma_w": 0.05,
               "prior": {"epsilon": 0.05, "nonzero": {"kind": "symmetric_two_point", "mu": 1.0}}},
  "amp": {"policy": {"kind": "sure", "p_grid": [0.0, 0.5, 1.0]}, "t_max": 8, "tol": 0}
}"#;

#[test]
fn same_seed_gives_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "amp.json", AMP);
    let a = lpamp(&["amp", "run", "--config", &cfg, "--seed", "5"]);
    let b = lpamp(&["amp", "run", "--config", &cfg, "--seed", "5"]);
    let c = lpamp(&["amp", "run", "--config", &cfg, "--seed", "6"]);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.starts_with("t,sigma_hat,lambda,p,h,mse,sure,sigma_hat_next\n"));
    assert_eq!(text.lines().count(), 9);
}

#[test]
fn out_flag_writes_the_same_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "amp.json", AMP);
    let out = dir.path().join("run.csv");
    let r = lpamp(&["amp", "run", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert!(r.status.success());
    assert!(r.stdout.is_empty());
    let stdout = lpamp(&["amp", "run", "--config", &cfg]).stdout;
    assert_eq!(fs::read(&out).unwrap(), stdout);
}

#[test]
fn printed_config_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    for (sub, kind) in [
        (&["prox", "eval"][..], "prox-eval"),
        (&["amp", "run"], "amp-run"),
        (&["se", "run"], "se-run"),
        (&["se", "fixed-points"], "se-fixed-points"),
        (&["pt", "curve"], "pt-curve"),
        (&["noise", "curve"], "noise-curve"),
        (&["sure", "curve"], "sure-curve"),
        (&["mc", "compare"], "mc-compare"),
    ] {
        let mut args = sub.to_vec();
        args.extend(["--print-config", "--threads", "2", "--quad-order", "33"]);
        let first = lpamp(&args);
        assert!(first.status.success(), "{kind}");
        let text = String::from_utf8(first.stdout).unwrap();
        assert!(text.contains(&format!("\"kind\": \"{kind}\"")), "{text}");
        let path = write(dir.path(), &format!("{kind}.json"), &text);
        let mut again = sub.to_vec();
        again.extend(["--print-config", "--config", &path]);
        let second = lpamp(&again);
        assert_eq!(String::from_utf8(second.stdout).unwrap(), text, "{kind}");
    }
}

#[test]
fn prox_eval_columns() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "prox.json",
        r#"{"kind": "prox-eval", "p": 0.5, "lambda": 1.0, "u": [0.0, 1.0, 2.0]}"#,
    );
    let r = lpamp(&["prox", "eval", "--config", &cfg]);
    let text = String::from_utf8(r.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "u,eta,d1,d2,eta_tilde,d_eta_tilde");
    assert_eq!(lines.len(), 4);
    // Below the threshold 1.5 the output is exactly zero with no derivative.
    assert!(lines[2].starts_with("1,0,,,"), "{}", lines[2]);
    let eta: f64 = lines[3].split(',').nth(1).unwrap().parse().unwrap();
    assert!((eta - 1.6054).abs() < 1e-3, "{eta}");
}

#[test]
fn amp_run_reads_matrix_files() {
    let dir = tempfile::tempdir().unwrap();
    // A = I₂, so n = N = 2 and AMP reduces to denoising y.
    let a = write(dir.path(), "a.csv", "1,0\n0,1\n");
    let y = write(dir.path(), "y.csv", "3\n0.1\n");
    let cfg = format!(
        r#"{{"kind": "amp-run", "input": {{"a": "{a}", "y": "{y}", "sigma_w": 0.0}},
            "amp": {{"policy": {{"kind": "fixed", "lambda": 1.0, "p": 1.0}}, "t_max": 2, "tol": 0}}}}"#
    );
    let path = write(dir.path(), "amp.json", &cfg);
    let r = lpamp(&["amp", "run", "--config", &path]);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    let text = String::from_utf8(r.stdout).unwrap();
    assert_eq!(text.lines().count(), 3);
    // Without ground truth the mse column is empty.
    assert!(text.lines().nth(1).unwrap().split(',').nth(5).unwrap().is_empty());

    let bad = write(dir.path(), "bad.csv", "1,0\n0\n");
    let cfg = cfg.replace(&a, &bad);
    let path = write(dir.path(), "bad.json", &cfg);
    let r = lpamp(&["amp", "run", "--config", &path]);
    assert_eq!(r.status.code(), Some(2));
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", "{\n  \"kind\": \"se-run\",\n  \"t_max\": \"many\"\n}");
    let r = lpamp(&["se", "run", "--config", &bad]);
    assert_eq!(r.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&r.stderr).contains("line 3"));

    let prox = write(dir.path(), "prox.json", r#"{"kind": "prox-eval"}"#);
    let r = lpamp(&["se", "run", "--config", &prox]);
    assert_eq!(r.status.code(), Some(2), "kind mismatch");

    let r = lpamp(&["prox", "eval", "--quad-order", "3"]);
    assert_eq!(r.status.code(), Some(2));

    let neg = write(dir.path(), "neg.json", r#"{"kind": "prox-eval", "p": 1.5}"#);
    assert_eq!(lpamp(&["prox", "eval", "--config", &neg]).status.code(), Some(2));

    assert_eq!(lpamp(&["prox", "eval", "--bogus"]).status.code(), Some(2));
}

#[test]
fn io_errors_exit_4() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.json");
    let r = lpamp(&["prox", "eval", "--config", missing.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(4));

    let out = dir.path().join("no_such_dir").join("out.csv");
    let r = lpamp(&["prox", "eval", "--out", out.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(4));
}

#[test]
fn divergence_exits_3() {
    // Without the Onsager term and with no shrinkage, the iteration amplifies the residual
    // by (1 − 1/δ) each step and overflows.
    let cfg = r#"{
      "kind": "amp-run",
      "instance": {"N": 200, "delta": 0.2, "sigma_w": 1.0,
                   "prior": {"epsilon": 0.1, "nonzero": {"kind": "point_mass", "mu": 1.0}}},
      "amp": {"policy": {"kind": "fixed", "lambda": 0.0, "p": 1.0}, "t_max": 2000, "tol": 0,
              "onsager": false}
    }"#;
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "div.json", cfg);
    let r = lpamp(&["amp", "run", "--config", &path]);
    assert_eq!(r.status.code(), Some(3), "{}", String::from_utf8_lossy(&r.stderr));
}
