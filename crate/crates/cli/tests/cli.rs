use std::process::Command;

use serde_json::Value;

fn mubkit(args: &[&str], dir: &std::path::Path) -> (i32, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_mubkit"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs");
    (out.status.code().unwrap_or(-1), out.stdout)
}

fn json(bytes: &[u8]) -> Value {
    serde_json::from_slice(bytes).expect("valid JSON report")
}

fn claim<'a>(report: &'a Value, id: &str) -> &'a Value {
    report["claims"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["id"] == id)
        .unwrap_or_else(|| panic!("claim {id} missing"))
}

#[test]
fn counts_dim3() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out) = mubkit(&["verify", "counts", "--dim", "3"], dir.path());
    assert_eq!(code, 0);
    let r = json(&out);
    assert_eq!(claim(&r, "translates")["measured"], 24);
    assert_eq!(claim(&r, "non_translates")["measured"], 48);
    assert_eq!(claim(&r, "subgroups")["measured"], 24);
    assert_eq!(claim(&r, "order_n_elements")["measured"], 72);
    for c in r["claims"].as_array().unwrap() {
        assert_eq!(c["pass"], true, "{c}");
        assert!(!c["anchor"].as_str().unwrap().is_empty());
        assert!(c["max_deviation"].as_f64().unwrap() >= 0.0);
    }
}

#[test]
fn build_alltop_dim3_emits_four_bases() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out) = mubkit(&["build", "alltop", "--dim", "3", "--x", "1"], dir.path());
    assert_eq!(code, 0);
    let r = json(&out);
    let bases = r["bases"].as_array().unwrap();
    assert_eq!(bases.len(), 4);
    // fiducial (1, sigma, sigma^2)/sqrt(3) opens the second basis
    let f = &bases[1]["vectors"][0];
    let s = 1.0 / 3f64.sqrt();
    for a in 0..3 {
        let ang = std::f64::consts::TAU * a as f64 / 9.0;
        assert!((f[a][0].as_f64().unwrap() - s * ang.cos()).abs() < 1e-9);
        assert!((f[a][1].as_f64().unwrap() - s * ang.sin()).abs() < 1e-9);
    }
}

#[test]
fn distances_dim3_reports_three_clusters() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out) = mubkit(&["verify", "distances", "--dim", "3"], dir.path());
    assert_eq!(code, 0);
    let r = json(&out);
    let values: Vec<f64> = r["clusters"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["value"].as_f64().unwrap())
        .collect();
    assert_eq!(values.len(), 3);
    assert!((values[0] - 2.0 / 3.0).abs() < 1e-9);
    assert!((values[2] - 1.0).abs() < 1e-9);
    let sign = &claim(&r, "non_overlapping.sign")["measured"];
    assert!((sign["value"].as_f64().unwrap() - values[1]).abs() < 1e-9);
}

#[test]
fn reports_are_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["verify", "distances", "--dim", "5"][..],
        &["build", "standard", "--dim", "5"][..],
        &["verify", "sic", "--grid", "20", "--format", "csv"][..],
    ] {
        let a = mubkit(args, dir.path());
        let b = mubkit(args, dir.path());
        assert_eq!(a, b, "{args:?}");
    }
}

#[test]
fn csv_and_out_flag() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("counts.csv");
    let (code, stdout) = mubkit(
        &[
            "verify",
            "counts",
            "--dim",
            "5",
            "--format",
            "csv",
            "--out",
            path.to_str().unwrap(),
        ],
        dir.path(),
    );
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let text = std::fs::read_to_string(path).unwrap();
    assert!(text.starts_with("section,id,anchor,expected,measured,max_deviation,pass"));
    assert!(text.contains("claim,translates,"));
}

#[test]
fn caps_and_bad_input_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(mubkit(&["verify", "counts", "--dim", "11"], dir.path()).0, 2);
    assert_eq!(
        mubkit(&["verify", "counts", "--dim", "11", "--clifford-cap", "5"], dir.path()).0,
        2
    );
    assert_eq!(mubkit(&["verify", "mub", "--dim", "6"], dir.path()).0, 2);
    assert_eq!(mubkit(&["build", "alltop", "--dim", "5", "--x", "0"], dir.path()).0, 2);
    assert_eq!(
        mubkit(&["verify", "mub", "--dim", "3", "--tol", "0.5"], dir.path()).0,
        2
    );
    assert_eq!(mubkit(&["verify", "nonsense"], dir.path()).0, 2);
}

#[test]
fn failing_claim_exits_one() {
    // rounding residuals of order 1e-15 cannot meet a 1e-17 tolerance
    let dir = tempfile::tempdir().unwrap();
    let (code, out) = mubkit(&["verify", "mub", "--dim", "13", "--tol", "1e-17"], dir.path());
    assert_eq!(code, 1);
    assert!(json(&out)["claims"]
        .as_array()
        .unwrap()
        .iter()
        .any(|c| c["pass"] == false));
}

#[test]
fn timing_is_opt_in() {
    let dir = tempfile::tempdir().unwrap();
    let (_, plain) = mubkit(&["verify", "counts", "--dim", "3"], dir.path());
    assert!(json(&plain).get("runtime_seconds").is_none());
    let (_, timed) = mubkit(&["verify", "counts", "--dim", "3", "--timing"], dir.path());
    assert!(json(&timed)["runtime_seconds"].as_f64().unwrap() >= 0.0);
}

#[test]
fn search_runs_and_resumes() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "search",
        "dim8-fiducial",
        "--roots",
        "16",
        "--budget",
        "500",
        "--checkpoint",
        "cp.json",
    ];
    let (code, out) = mubkit(&args, dir.path());
    assert_eq!(code, 0);
    assert_eq!(json(&out)["notes"]["next"], 500);
    let (_, out) = mubkit(&args, dir.path());
    assert_eq!(json(&out)["notes"]["next"], 1000);
    let cp: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("cp.json")).unwrap()).unwrap();
    assert_eq!(cp["next"], 1000);
    let (code, _) = mubkit(
        &["search", "dim8-fiducial", "--roots", "8", "--checkpoint", "cp.json"],
        dir.path(),
    );
    assert_eq!(code, 2);
}
