use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

const CHAPPLE: &str = r#"{"C": {"coords": [[1,0],[0,0],[0,0],[1,0],[0,0],[-9,0]]},
 "D": {"coords": [[1,0],[0,0],[-1.7320508075688772,0],[1,0],[0,0],[2,0]]}}"#;
const DIAGONAL: &str = r#"{"C": {"coords": [[1,0],[0,0],[0,0],[1,0],[0,0],[1,0]]},
 "D": {"coords": [[1,0],[0,0],[0,0],[2,0],[0,0],[3,0]]}}"#;

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("poncelet-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn poncelet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_poncelet"))
        .args(args)
        .env_remove("PONCELET_TOL")
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn check_chapple_is_satisfied() {
    let p = scratch("chapple.json", CHAPPLE);
    let out = poncelet(&["check", "--strict", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["satisfied"], true);
    assert_eq!(v["n"], 3);
    let g = v["gamma"].as_array().unwrap();
    assert!(g[0].as_f64().unwrap().hypot(g[1].as_f64().unwrap()) < 1e-9);
    assert_eq!(v["transversality"]["transverse"], true);
}

#[test]
fn strict_check_fails_on_diagonal_pair() {
    let p = scratch("diagonal.json", DIAGONAL);
    let lax = poncelet(&["check", p.to_str().unwrap()]);
    assert_eq!(lax.status.code(), Some(0));
    assert_eq!(json(&lax)["gamma"][0].as_f64().unwrap(), 23.0);
    let strict = poncelet(&["check", "--strict", p.to_str().unwrap()]);
    assert_eq!(strict.status.code(), Some(1));
}

#[test]
fn missing_field_exits_2() {
    let p = scratch(
        "missing.json",
        r#"{"C": {"coords": [[1,0],[0,0],[0,0],[1,0],[0,0],[1,0]]}}"#,
    );
    let out = poncelet(&["check", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("`D`"));
    let out = poncelet(&["check", "/nonexistent/pair.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn fiber_over_100() {
    let out = poncelet(&["fiber", "--z", "100,0"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["total"], 24);
    assert_eq!(v["orbits"], 4);
    let roots = v["roots"].as_array().unwrap();
    assert_eq!(roots.len(), 24);
    for r in roots {
        assert_eq!(r["mult"], 1);
        assert!(r["res7"].as_f64().unwrap() < 1e-8);
        assert!(r["res8"].as_f64().unwrap() < 1e-8);
    }
}

#[test]
fn fiber_writes_file() {
    let path = scratch("fiber.json", "");
    let out = poncelet(&["fiber", "--z", "100,0", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["total"], 24);
}

#[test]
fn critical_j_values_are_input_errors() {
    assert_eq!(poncelet(&["fiber", "--z", "1728,0"]).status.code(), Some(2));
    assert_eq!(poncelet(&["fiber", "--z", "0,0"]).status.code(), Some(2));
    assert_eq!(
        poncelet(&["atlas", "--grid", "rect:0,100,2,0,0,1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        poncelet(&["atlas", "--grid", "square:1"]).status.code(),
        Some(2)
    );
}

#[test]
fn atlas_csv_has_one_row_per_root() {
    let out = poncelet(&["atlas", "--grid", "circle:900,0,850,5", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    let header = reader.headers().unwrap().clone();
    assert_eq!(&header[10], "res7");
    let rows: Vec<_> = reader.records().collect::<Result<_, _>>().unwrap();
    assert_eq!(rows.len(), 5 * 24);
    assert!(rows.iter().all(|r| r.iter().all(|f| !f.is_empty())));
}

#[test]
fn jinv_routes() {
    let v = json(&poncelet(&["jinv", "--lambda", "1", "2", "3"]));
    assert_eq!(v["critical_class"], "j1728");
    let p = scratch("chapple-j.json", CHAPPLE);
    let v = json(&poncelet(&["jinv", p.to_str().unwrap()]));
    assert_eq!(v["critical_class"], "regular");
    assert_eq!(
        poncelet(&["jinv", "--lambda", "1", "1", "3"]).status.code(),
        Some(2)
    );
    assert_eq!(poncelet(&["jinv"]).status.code(), Some(2));
}

#[test]
fn tolerance_precedence() {
    let p = scratch("chapple-tol.json", CHAPPLE);
    let threshold = |env: Option<&str>, flag: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_poncelet"));
        cmd.args(["check", p.to_str().unwrap()])
            .env_remove("PONCELET_TOL");
        if let Some(e) = env {
            cmd.env("PONCELET_TOL", e);
        }
        if let Some(f) = flag {
            cmd.args(["--rel-eps", f]);
        }
        let out = cmd.output().unwrap();
        json(&out)["threshold"].as_f64().unwrap()
    };
    let base = threshold(None, None);
    let env = threshold(Some("1e-6"), None);
    let flag = threshold(Some("1e-6"), Some("1e-10"));
    assert!((env / base - 100.0).abs() < 1e-9);
    assert!((flag / base - 0.01).abs() < 1e-9);
    let bad = Command::new(env!("CARGO_BIN_EXE_poncelet"))
        .args(["check", p.to_str().unwrap()])
        .env("PONCELET_TOL", "0")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn traces_close_for_chapple() {
    let p = scratch("chapple-trace.json", CHAPPLE);
    let v = json(&poncelet(&["trace", p.to_str().unwrap(), "--count", "3"]));
    let traces = v.as_array().unwrap();
    assert_eq!(traces.len(), 3);
    for t in traces {
        assert_eq!(t["closed"], true);
        assert_eq!(t["states"].as_array().unwrap().len(), 4);
        for s in t["states"].as_array().unwrap() {
            for r in s["residuals"].as_array().unwrap() {
                assert!(r.as_f64().unwrap() < 1e-9);
            }
        }
    }
}

#[test]
fn sample_and_normalize() {
    let p = scratch("chapple-sample.json", CHAPPLE);
    let v = json(&poncelet(&[
        "sample",
        "--d",
        p.to_str().unwrap(),
        "--count",
        "2",
    ]));
    for s in v.as_array().unwrap() {
        assert!(s["quadric_residual"].as_f64().unwrap() < 1e-9);
        let pair = scratch(
            "sampled.json",
            &serde_json::json!({"C": s["C"], "D": s["D"]}).to_string(),
        );
        let check = json(&poncelet(&["check", pair.to_str().unwrap()]));
        assert_eq!(check["satisfied"], true);
    }
    let v = json(&poncelet(&["normalize", p.to_str().unwrap()]));
    assert!(v["normal_form"]["residual"].as_f64().unwrap() < 1e-10);
    assert_eq!(v["moduli"]["special"], false);
}

#[test]
fn gradcheck_and_selftest_pass() {
    let out = poncelet(&["gradcheck", "--count", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["pass"], true);
    let out = poncelet(&["selftest"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out)
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["pass"] == true));
}

#[test]
fn csv_only_where_tabular() {
    let p = scratch("chapple-csv.json", CHAPPLE);
    assert_eq!(
        poncelet(&["check", p.to_str().unwrap(), "--format", "csv"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn help_succeeds() {
    let out = poncelet(&["atlas", "--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("circle:CRE,CIM,R,N"));
}
