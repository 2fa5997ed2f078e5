use std::process::{Command, Output};

fn valab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_valab")).args(args).env_remove("VALAB_SEED").output().unwrap()
}

fn rows(text: &str) -> Vec<Vec<f64>> {
    text.lines().skip(1).map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect()
}

#[test]
fn berg_table() {
    let out = valab(&["berg", "--j", "3", "--grid", "101"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next().unwrap(), "t,g,g',g'',ode_residual");
    let r = rows(&text);
    assert_eq!(r.len(), 101);
    assert!(r.iter().all(|row| row[4].abs() <= 1e-8));

    let r = rows(&String::from_utf8(valab(&["berg", "--j", "2", "--grid", "3"]).stdout).unwrap());
    assert_eq!(r[1][0], 0.0);
    assert!((r[1][1] - 0.25).abs() < 1e-15);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(valab(&["berg", "--j", "1"]).status.code(), Some(2));
    assert_eq!(valab(&["kernel", "--n", "3", "--i", "2"]).status.code(), Some(2));
    assert_eq!(valab(&["verify", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(valab(&["berg"]).status.code(), Some(2));
    assert_eq!(valab(&["berg", "--j", "3", "--grid", "1"]).status.code(), Some(2));
}

#[test]
fn kernel_table_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("k41.csv");
    let b = dir.path().join("k42.csv");
    assert!(valab(&["kernel", "--n", "4", "--i", "1", "--out", a.to_str().unwrap()]).status.success());
    assert!(valab(&["kernel", "--n", "4", "--i", "2", "--out", b.to_str().unwrap()]).status.success());
    assert_eq!(std::fs::read_to_string(&a).unwrap(), std::fs::read_to_string(&b).unwrap());

    let c = dir.path().join("k31.csv");
    assert!(valab(&["kernel", "--n", "3", "--i", "1", "--out", c.to_str().unwrap()]).status.success());
    let side: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("k31.csv.json")).unwrap()).unwrap();
    assert_eq!(side["positivity"]["pass"], true);
    let m = side["limits"]["minus_one"].as_f64().unwrap();
    assert!((m - 1.0 / (4.0 * std::f64::consts::PI)).abs() < 1e-12);
    assert!((side["limits"]["plus_one_scaled"].as_f64().unwrap() - 0.25).abs() < 1e-12);
    assert!(side["route_discrepancy"]["spectral"].as_f64().unwrap() <= 1e-5);
    assert!(side["route_discrepancy"]["closed_form"].as_f64().unwrap() <= 1e-5);
}

#[test]
fn verify_exit_codes_and_determinism() {
    let ok = valab(&["verify", "--suite", "berg-ode"]);
    assert_eq!(ok.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(report["suite"], "berg-ode");
    assert!(report["cases"].as_array().unwrap().iter().all(|c| c["pass"] == true));

    let strict = valab(&["verify", "--suite", "mean-section", "--tol", "0"]);
    assert_eq!(strict.status.code(), Some(1));

    let args = ["verify", "--suite", "projection-body", "--nmc", "2000", "--seed", "42"];
    let first = valab(&args);
    let second = valab(&args);
    assert_eq!(first.stdout, second.stdout);
    let other = Command::new(env!("CARGO_BIN_EXE_valab"))
        .args(["verify", "--suite", "projection-body", "--nmc", "2000"])
        .env("VALAB_SEED", "42")
        .output()
        .unwrap();
    assert_eq!(first.stdout, other.stdout);
    let v: serde_json::Value = serde_json::from_slice(&first.stdout).unwrap();
    assert_eq!(v["seed"], 42);
    let text = String::from_utf8(first.stdout).unwrap();
    let pos: Vec<usize> = ["\"suite\"", "\"cases\"", "\"seed\"", "\"n_mc\""].iter().map(|k| text.find(k).unwrap()).collect();
    assert!(pos.windows(2).all(|w| w[0] < w[1]), "{pos:?}");
}

#[test]
fn verify_llks_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("r.json");
    let args = ["verify", "--suite", "llks", "--n", "3", "--seed", "42", "--nmc", "4000", "--out", p.to_str().unwrap()];
    let code = valab(&args).status.code();
    let first = std::fs::read(&p).unwrap();
    assert_eq!(valab(&args).status.code(), code);
    assert_eq!(std::fs::read(&p).unwrap(), first);
}

#[test]
fn verify_csv_format() {
    let out = valab(&["verify", "--suite", "lifting", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next().unwrap(), "name,lhs,rhs,sigma,abs_err,rel_err,pass");
    assert_eq!(text.lines().count(), 21);
}
