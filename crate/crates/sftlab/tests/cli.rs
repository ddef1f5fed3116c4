use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn sftlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sftlab")).args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("sftlab-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON report")
}

#[test]
fn exit_codes() {
    let ok = sftlab(&["fix", "--spec", "golden-mean", "--n-max", "5"]);
    assert_eq!(ok.status.code(), Some(0));
    let partial = sftlab(&["entropy", "--spec", "golden-mean", "--n-max", "40", "--budget", "300"]);
    assert_eq!(partial.status.code(), Some(2));
    assert_eq!(json(&partial)["status"], "budget_partial");
    let bad = sftlab(&["fix", "--spec", "no-such-shift"]);
    assert_eq!(bad.status.code(), Some(1));
    let unused = sftlab(&["fix", "--spec", "full:2", "--kappa", "3"]);
    assert_eq!(unused.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&unused.stderr).contains("kappa"));
}

#[test]
fn deterministic_modulo_timestamp() {
    let run = || {
        let mut v = json(&sftlab(&["glider", "--spec", "full:3", "--samples", "4", "--seed", "11"]));
        assert!(v["timestamp"].is_u64());
        v.as_object_mut().unwrap().remove("timestamp");
        v
    };
    assert_eq!(run(), run());
    let a = sftlab(&["localq", "--spec", "full:2", "--n-max", "4", "--no-timestamp"]);
    let b = sftlab(&["localq", "--spec", "full:2", "--n-max", "4", "--no-timestamp"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn every_row_has_provenance() {
    for args in [
        vec!["entropy", "--spec", "full:2:2", "--n-max", "2"],
        vec!["extensions", "--spec", "golden-mean"],
        vec!["beeps", "--spec", "golden-mean"],
        vec!["localq", "--spec", "golden-mean", "--n-max", "3"],
        vec!["classify", "--alphabets", "4,6"],
    ] {
        let v = json(&sftlab(&args));
        let cols = v["columns"].as_array().unwrap();
        let p = cols.iter().position(|c| c == "provenance").unwrap_or_else(|| panic!("{args:?}"));
        for row in v["rows"].as_array().unwrap() {
            assert!(row[p].as_str().is_some_and(|s| !s.is_empty()), "{args:?}");
        }
    }
}

#[test]
fn localq_report_keys() {
    let v = json(&sftlab(&["localq", "--spec", "full:2", "--base-k", "3", "--S", "1", "--n-max", "3", "--R", "1", "--kappa", "2"]));
    let cols: Vec<&str> = v["columns"].as_array().unwrap().iter().map(|c| c.as_str().unwrap()).collect();
    for key in ["n", "index", "num_boundary_patterns", "logE_bits", "loglogK", "a_n", "error_bound"] {
        assert!(cols.contains(&key), "{key}");
    }
}

#[test]
fn classify_and_sqroot() {
    let v = json(&sftlab(&["classify", "--alphabets", "2,8"]));
    assert_eq!(v["rows"][0][2], true);
    assert_eq!((v["rows"][0][3].as_u64(), v["rows"][0][4].as_u64()), (Some(3), Some(1)));
    let v = json(&sftlab(&["sqroot", "--n-max", "3"]));
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows[0][0], "full:2");
    assert!(rows.iter().all(|r| r[2] == true));
}

#[test]
fn glider_trace_csv() {
    let dir = scratch("glider");
    let cfg = dir.join("x.json");
    std::fs::write(&cfg, r#"{"support": [[-3], [0], [4]], "values": ["1", "2", "2"]}"#).unwrap();
    let out = dir.join("trace.csv");
    let o = sftlab(&["glider", "--spec", "full:3", "--config", cfg.to_str().unwrap(), "--format", "csv", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().next(), Some("step,support,escaped_left,escaped_right"));
    assert!(text.lines().skip(1).all(|l| l.split(',').nth(1) == Some("3")));
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn spec_file_and_verify() {
    let spec = concat!(env!("CARGO_MANIFEST_DIR"), "/../../specs/golden_mean.json");
    let o = sftlab(&["verify", "--spec", spec]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(json(&o)["summary"]["passed"], true);
}

#[test]
fn batch_runs_every_plan() {
    let dir = scratch("batch");
    let plans = dir.join("plans.json");
    std::fs::write(
        &plans,
        r#"[
            {"experiment": "fix_count", "spec": "golden-mean", "params": {"n_max": 4}},
            {"experiment": "classify", "params": {"alphabets": [2, 3]}},
            {"experiment": "entropy", "spec": "golden-mean", "budget": 1, "params": {"n_max": 12}}
        ]"#,
    )
    .unwrap();
    let o = sftlab(&["batch", plans.to_str().unwrap(), "--no-timestamp"]);
    assert_eq!(o.status.code(), Some(2));
    let v = json(&o);
    assert_eq!(v.as_array().unwrap().len(), 3);
    assert_eq!(v[1]["rows"][0][2], false);
    std::fs::write(&plans, r#"[{"experiment": "fix_count", "spec": "full:2", "params": {"kappa": 2}}]"#).unwrap();
    let o = sftlab(&["batch", plans.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("plan #0"));
    std::fs::remove_dir_all(dir).ok();
}
