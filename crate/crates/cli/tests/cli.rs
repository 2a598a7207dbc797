use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn bosonic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bosonic"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}):\n{}\nstderr:\n{}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn g(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        (x + 1.0) * (x + 1.0).log2() - x * x.log2()
    }
}

const LOSS_078: &str = r#"{"type": "pure_loss", "eta": 0.78}"#;

#[test]
fn capacity_of_pure_loss() {
    let out = bosonic(&["capacity", "--spec", LOSS_078, "--ns", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let c = v["constrained"].as_f64().unwrap();
    assert!((c - (g(0.78) - g(0.22))).abs() < 1e-12);
    assert!((c - 0.9297).abs() < 1e-4);
    assert!((v["unconstrained"].as_f64().unwrap() - (0.78f64 / 0.22).log2()).abs() < 1e-12);
    assert_eq!(v["formula"], "closed_form");
    assert_eq!(v["degradable"], true);
}

#[test]
fn capacity_regimes() {
    let v = json(&bosonic(&[
        "capacity",
        "--spec",
        r#"{"type":"pure_loss","eta":0.5}"#,
        "--ns",
        "3",
    ]));
    assert_eq!(v["constrained"].as_f64(), Some(0.0));

    let out = bosonic(&[
        "capacity",
        "--spec",
        r#"{"type":"pure_loss","eta":0.3}"#,
        "--ns",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["degradable"], false);
    assert_eq!(v["constrained"].as_f64(), Some(0.0));
    assert_eq!(v["regime"], "antidegradable");

    let v = json(&bosonic(&[
        "capacity",
        "--spec",
        r#"{"type":"amplifier","kappa":2}"#,
        "--ns",
        "1",
    ]));
    assert!((v["constrained"].as_f64().unwrap() - (g(3.0) - g(2.0))).abs() < 1e-12);
    assert_eq!(v["unconstrained"].as_f64(), Some(1.0));
}

#[test]
fn spec_from_file() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    write!(file, "{LOSS_078}").unwrap();
    let path = file.path().to_str().unwrap();
    let out = bosonic(&["capacity", "--spec", path, "--ns", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let inline = bosonic(&["capacity", "--spec", LOSS_078, "--ns", "1"]);
    assert_eq!(out.stdout, inline.stdout);
}

#[test]
fn parse_error_exits_2_with_position() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    write!(file, "{{\n  \"type\": \"pure_loss\",\n  \"eta\": 0.7,,\n}}").unwrap();
    let out = bosonic(&[
        "capacity",
        "--spec",
        file.path().to_str().unwrap(),
        "--ns",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 3") && err.contains("column"), "{err}");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(bosonic(&["capacity", "--ns", "1"]).status.code(), Some(2));
    assert_eq!(bosonic(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        bosonic(&["sweep", "--spec", LOSS_078, "--ns-range", "1:2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        bosonic(&["capacity", "--spec", "/nonexistent/spec.json", "--ns", "1"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn domain_errors_exit_3() {
    let out = bosonic(&[
        "capacity",
        "--spec",
        r#"{"type":"pure_loss","eta":1.5}"#,
        "--ns",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let out = bosonic(&["capacity", "--spec", LOSS_078, "--ns=-1"]);
    assert_eq!(out.status.code(), Some(3));
    let out = bosonic(&[
        "capacity",
        "--spec",
        r#"{"type":"amplifier","kappa":0.5}"#,
        "--ns",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

fn parse_csv(text: &str) -> Vec<Vec<f64>> {
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n_s,constrained,unconstrained"));
    lines
        .map(|l| l.split(',').map(|x| x.parse::<f64>().unwrap()).collect())
        .collect()
}

#[test]
fn loss_sweep_csv() {
    let out = bosonic(&[
        "sweep",
        "--spec",
        LOSS_078,
        "--ns-range",
        "0.01:10:100",
        "--log",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let rows = parse_csv(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(rows.len(), 100);
    assert_eq!(rows[0][0], 0.01);
    assert_eq!(rows[99][0], 10.0);
    for w in rows.windows(2) {
        assert!(w[1][0] > w[0][0]);
        assert!(w[1][1] >= w[0][1]);
    }
    assert!(rows.iter().all(|r| r[1] < r[2]));
}

#[test]
fn two_point_sweep() {
    let out = bosonic(&["sweep", "--spec", LOSS_078, "--ns-range", "0:1:2"]);
    let rows = parse_csv(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0][1], 0.0);

    let out = bosonic(&[
        "sweep",
        "--spec",
        LOSS_078,
        "--ns-range",
        "0:1:3",
        "--format",
        "json",
    ]);
    let v = json(&out);
    assert_eq!(v["rows"].as_array().unwrap().len(), 3);
}

#[test]
fn allocate_reports_certificate() {
    let problem = r#"{"channels": [{"type": "pure_loss", "eta": 0.9},
                                   {"type": "pure_loss", "eta": 0.9}], "budget": 2}"#;
    let v = json(&bosonic(&["allocate", "--spec", problem]));
    let photons: Vec<f64> = v["photons"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect();
    assert!((photons[0] - 1.0).abs() < 1e-6 && (photons[1] - 1.0).abs() < 1e-6);
    assert!(v["kkt"]["active_residual"].as_f64().unwrap() <= 1e-6);
    assert!(v["multiplier"].as_f64().unwrap() > 0.0);

    let problem = r#"{"channels": [{"type": "pure_loss", "eta": 0.9},
                                   {"type": "pure_loss", "eta": 0.6}], "budget": 2}"#;
    let v = json(&bosonic(&[
        "allocate",
        "--spec",
        problem,
        "--grid-points",
        "400",
    ]));
    assert!(v["grid_oracle"]["difference"].as_f64().unwrap().abs() <= 1e-3);
}

#[test]
fn empty_allocation_exits_3() {
    let out = bosonic(&["allocate", "--spec", r#"{"channels": [], "budget": 1}"#]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn convert_entanglement_to_quantum() {
    let params =
        r#"{"n": 1, "m": 1024, "energy": 10, "epsilon": 0.01, "task": "entanglement_avg"}"#;
    let v = json(&bosonic(&[
        "convert",
        "--spec",
        params,
        "--conversion",
        "et_to_qc",
        "--delta",
        "0.25",
    ]));
    assert_eq!(v["output"]["m"], 256);
    assert_eq!(v["output"]["energy"].as_f64(), Some(20.0));
    assert!((v["output"]["epsilon"].as_f64().unwrap() - 0.40078).abs() < 1e-5);
    assert_eq!(v["output"]["task"], "quantum_uniform");
    assert_eq!(v["chain"][0]["provenance"], "entanglement_to_quantum");

    let v = json(&bosonic(&[
        "convert",
        "--spec",
        params,
        "--conversion",
        "et_to_pc",
        "--delta",
        "0.25",
    ]));
    assert_eq!(v["chain"].as_array().unwrap().len(), 2);
    assert_eq!(v["output"]["m"], 128);
    assert_eq!(v["output"]["n"], 1);
}

#[test]
fn convert_errors_and_ledger() {
    let params = r#"{"n": 1, "m": 100, "energy": 5, "epsilon": 0.001, "task": "secretkey_avg"}"#;
    let out = bosonic(&[
        "convert",
        "--spec",
        params,
        "--conversion",
        "sk_to_pc",
        "--delta",
        "0.35",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let out = bosonic(&["convert", "--spec", params, "--conversion", "sk_to_pc"]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&bosonic(&["convert", "--conversion", "ledger"]));
    assert_eq!(v["symbols"].as_array().unwrap().len(), 4);
    assert_eq!(v["relations"].as_array().unwrap().len(), 5);
}

#[test]
fn verify_oracle_passes() {
    let out = bosonic(&["verify", "--suite", "oracle"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["passed"], true);
    assert_eq!(v["checks"].as_array().unwrap().len(), 7);
}

#[test]
fn verify_suites() {
    for suite in ["thermal", "concavity", "fvdg", "appendix"] {
        let out = bosonic(&["verify", "--suite", suite]);
        assert_eq!(out.status.code(), Some(0), "{suite}");
        assert_eq!(json(&out)["passed"], true);
    }
    assert_eq!(
        bosonic(&["verify", "--suite", "nope"]).status.code(),
        Some(2)
    );
}

#[test]
fn verify_failure_exits_1_and_lists_points() {
    // An impossible tolerance on the oracle suite makes every check fail.
    let out = bosonic(&["verify", "--suite", "oracle", "--tol", "0"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["passed"], false);
    assert!(v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .any(|c| c["passed"] == false));

    let out = bosonic(&["verify", "--suite", "thermal", "--tol", "1e-15"]);
    assert!(matches!(out.status.code(), Some(0) | Some(1)));
    let v = json(&out);
    for check in v["checks"].as_array().unwrap() {
        assert!(check["detail"]["violations"].is_array());
    }
}

#[test]
fn output_is_deterministic_and_round_trips() {
    let args = ["capacity", "--spec", LOSS_078, "--ns", "0.37"];
    let a = bosonic(&args);
    let b = bosonic(&args);
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    let expected = g(0.78 * 0.37) - g(0.22 * 0.37);
    assert!((v["constrained"].as_f64().unwrap() - expected).abs() < 1e-14);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(
        text.contains("e-1"),
        "floats use 17 significant digits: {text}"
    );

    let f1 = bosonic(&["verify", "--suite", "fvdg"]);
    let f2 = bosonic(&["verify", "--suite", "fvdg"]);
    assert_eq!(f1.stdout, f2.stdout);
}

#[test]
fn parallel_channel_capacity() {
    let spec = r#"{"type": "parallel", "children": [
        {"type": "pure_loss", "eta": 0.9, "omega": 1},
        {"type": "amplifier", "kappa": 1.5, "omega": 2}
    ]}"#;
    let v = json(&bosonic(&["capacity", "--spec", spec, "--ns", "3"]));
    assert_eq!(v["formula"], "kkt_allocation");
    let alloc = v["allocation"].as_array().unwrap();
    let spent = alloc[0].as_f64().unwrap() + 2.0 * alloc[1].as_f64().unwrap();
    assert!((spent - 3.0).abs() < 1e-6);
    assert_eq!(
        bosonic(&["sweep", "--spec", spec, "--ns-range", "0:1:2"])
            .status
            .code(),
        Some(3)
    );
}
