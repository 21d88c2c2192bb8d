use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn corpus() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples")
}

fn strata(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_strata")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut all = vec!["--format", "json"];
    all.extend_from_slice(args);
    let out = strata(&all);
    let code = out.status.code().unwrap();
    let v = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (v, code)
}

fn example(name: &str) -> String {
    corpus().join(name).to_string_lossy().into_owned()
}

fn manifest() -> serde_json::Map<String, Value> {
    let text = std::fs::read_to_string(corpus().join("manifest.json")).unwrap();
    serde_json::from_str::<Value>(&text).unwrap().as_object().unwrap().clone()
}

fn no_floats(v: &Value) -> bool {
    match v {
        Value::Number(n) => !n.is_f64(),
        Value::Array(xs) => xs.iter().all(no_floats),
        Value::Object(m) => m.values().all(no_floats),
        _ => true,
    }
}

#[test]
fn witt_of_suspended_torus_is_false() {
    let (v, code) = json(&["witt", &example("susp_t2.ssd")]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["witt"], Value::Bool(false));
}

#[test]
fn signature_of_cp2_is_one() {
    let (v, code) = json(&["signature", &example("cp2.ssd")]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["signature"], 1);
}

#[test]
fn orient_check_passes() {
    let (v, code) = json(&["orient-check"]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["all_passed"], Value::Bool(true));
    assert!(!v["payload"]["suites"].as_array().unwrap().is_empty());
}

#[test]
fn manifest_verdicts() {
    for (file, want) in manifest() {
        let path = example(&file);
        let (w, code) = json(&["witt", &path]);
        assert_eq!(code, 0, "{file}");
        assert_eq!(w["payload"]["witt"], want["witt"], "{file}");
        let (s, code) = json(&["signature", &path]);
        match &want["signature"] {
            Value::Null => assert_ne!(code, 0, "{file}"),
            x => {
                assert_eq!(code, 0, "{file}");
                assert_eq!(&s["payload"]["signature"], x, "{file}");
            }
        }
        let (r, code) = json(&["resolve", &path]);
        assert_eq!(code, 0, "{file}");
        let res = &r["payload"]["resolution"];
        assert_eq!(res["total_dim"], want["dim"], "{file}");
        assert_eq!(res["faces"].as_array().unwrap().len() as u64, want["faces"].as_u64().unwrap(), "{file}");
        assert_eq!(res["corners"].as_array().unwrap().len() as u64, want["corners"].as_u64().unwrap(), "{file}");
        assert_eq!(r["payload"]["check"]["ok"], Value::Bool(true), "{file}");
    }
}

#[test]
fn manifest_ranks() {
    for (file, want) in manifest() {
        if want["homology"].is_null() {
            continue;
        }
        let path = example(&file);
        let (h, code) = json(&["homology", &path]);
        assert_eq!(code, 0, "{file}");
        assert_eq!(h["payload"]["ranks"], want["homology"], "{file}");
        let (i, code) = json(&["ih", &path]);
        assert_eq!(code, 0, "{file}");
        assert_eq!(i["payload"]["ranks"], want["ih"], "{file}");
    }
}

#[test]
fn oracle_flag_cross_checks() {
    for f in ["susp_t2.ssd", "susp_s2.ssd", "two_disks.ssd", "cone_t2.ssd"] {
        let (v, code) = json(&["ih", "--oracle", &example(f)]);
        assert_eq!(code, 0, "{f}");
        assert_eq!(v["payload"]["oracle_ranks"], v["payload"]["ranks"]);
        let (v, code) = json(&["witt", "--oracle", &example(f)]);
        assert_eq!(code, 0, "{f}");
        assert_eq!(v["payload"]["oracle_witt"], v["payload"]["witt"]);
    }
}

#[test]
fn upper_middle_perversity() {
    let (v, code) = json(&["ih", "--perversity", "upper-middle", &example("susp_t2.ssd")]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["ranks"], serde_json::json!([1, 0, 2, 1]));
    let (v, _) = json(&["ih", "--perversity", "0,1", &example("susp_t2.ssd")]);
    assert_eq!(v["payload"]["perversity"], serde_json::json!([0, 1]));
    let (_, code) = json(&["ih", "--perversity", "0,2", &example("susp_t2.ssd")]);
    assert_eq!(code, 1);
}

#[test]
fn subdivision_keeps_ranks() {
    let (v, code) = json(&["ih", "--subdivide", "1", &example("susp_t2.ssd")]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["ranks"], serde_json::json!([1, 2, 0, 1]));
    assert_eq!(v["payload"]["subdivisions"], 1);
}

#[test]
fn echoed_input_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    for (file, _) in manifest() {
        let (v, _) = json(&["witt", &example(&file)]);
        let copy = dir.path().join(&file);
        std::fs::write(&copy, serde_json::to_string(&v["input"]).unwrap()).unwrap();
        let (again, _) = json(&["witt", copy.to_str().unwrap()]);
        assert_eq!(v["digest"], again["digest"], "{file}");
        assert_eq!(v["input"], again["input"], "{file}");
    }
}

#[test]
fn reports_carry_no_floats() {
    for (file, _) in manifest() {
        for cmd in ["witt", "resolve"] {
            let (v, _) = json(&[cmd, &example(&file)]);
            assert!(no_floats(&v), "{cmd} {file}");
        }
    }
    assert!(no_floats(&json(&["orient-check"]).0));
}

#[test]
fn grid_resolution() {
    let (v, code) = json(&["resolve", &example("susp_s2.ssd"), "--base", &example("cone_t2.ssd")]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["check"]["ok"], Value::Bool(true));
    assert_eq!(v["payload"]["grid"]["schedule"].as_array().unwrap().len(), 2);
}

#[test]
fn validation_failures_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.ssd");
    std::fs::write(&bad, "{\"space\":\n {\"atom\": {\"name\": \"x\", \"vertices\": 2, \"facets\": [[0, 7]]}}}").unwrap();
    let out = strata(&["homology", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    let out = strata(&["witt", dir.path().join("missing.ssd").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let out = strata(&["signature", &example("susp_t2.ssd")]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn facet_cap_is_enforced() {
    let out = Command::new(env!("CARGO_BIN_EXE_strata"))
        .env("STRATA_MAX_FACETS", "20")
        .args(["homology", &example("s2xs2.ssd")])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("limit"));
}

#[test]
fn text_output() {
    let out = strata(&["signature", &example("cp2.ssd")]);
    assert_eq!(String::from_utf8_lossy(&out.stdout), "signature of CP2: 1\n");
}
