use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcapelli"))
        .args(args)
        .env_remove("QCAPELLI_RULE_CAP")
        .env_remove("QCAPELLI_MAX_DEGREE")
        .env_remove("QCAPELLI_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn verify_th_passes() {
    let o = run(&["verify", "--rmatrix", "dj", "--N", "2", "--identity", "th", "--k", "2", "--q", "3/5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).starts_with("PASS th dj(2) k=2 q=3/5"));
}

#[test]
fn wrong_shift_exits_one() {
    let o = run(&["verify", "--identity", "shift-scan", "--alpha", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("residual"));
}

#[test]
fn json_records_carry_the_contract_fields() {
    let o = run(&["verify", "--identity", "th,mre", "--q-samples", "2,1/3", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let lines: Vec<serde_json::Value> = stdout(&o)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 2);
    for v in &lines {
        for field in ["identity", "params", "rmatrix", "q_points", "outcome", "residual_sample", "timings_ms", "backend"] {
            assert!(v.get(field).is_some(), "missing {field}");
        }
        assert_eq!(v["q_points"], serde_json::json!(["2", "1/3"]));
        assert_eq!(v["outcome"], "pass");
    }
    assert_eq!(lines[1]["identity"], "mre");
}

#[test]
fn output_is_deterministic() {
    let args = ["verify", "--identity", "cap1,shift-scan", "--alpha", "0", "--format", "json"];
    let strip = |o: Output| {
        stdout(&o)
            .lines()
            .map(|l| {
                let mut v: serde_json::Value = serde_json::from_str(l).unwrap();
                v["timings_ms"] = serde_json::Value::Null;
                v
            })
            .collect::<Vec<_>>()
    };
    let a = strip(run(&args));
    let b = strip(run(&[&args[..], &["--threads", "1"]].concat()));
    assert_eq!(a, b);
}

#[test]
fn configuration_errors_exit_two() {
    for args in [
        vec!["suite", "nope"],
        vec!["verify", "--k", "0"],
        vec!["verify", "--identity", "bogus"],
        vec!["verify", "--q", "1/0"],
        vec!["verify", "--N", "0"],
        vec!["verify", "--rmatrix", "flip", "--q", "2"],
        vec!["verify", "--identity", "exchange-general", "--p", "2", "--k", "2"],
        vec!["verify", "--threads", "0"],
        vec!["verify", "--frobnicate"],
    ] {
        assert_eq!(run(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn degree_cap_exits_three() {
    let o = run(&["verify", "--identity", "th", "--k", "3", "--max-degree", "2"]);
    assert_eq!(o.status.code(), Some(3));
    let o = Command::new(env!("CARGO_BIN_EXE_qcapelli"))
        .args(["verify", "--identity", "th", "--k", "3"])
        .env("QCAPELLI_MAX_DEGREE", "2")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn validate_names_the_failing_check() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.rmx");
    // twice the flip is braided but its eigenvalues are not q and -1/q
    std::fs::write(
        &bad,
        r#"{"N": 2, "q": "3/5", "entries": [
            {"i": 1, "j": 1, "k": 1, "l": 1, "value": "2"},
            {"i": 1, "j": 2, "k": 2, "l": 1, "value": "2"},
            {"i": 2, "j": 1, "k": 1, "l": 2, "value": "2"},
            {"i": 2, "j": 2, "k": 2, "l": 2, "value": "2"}]}"#,
    )
    .unwrap();
    let arg = format!("file:{}", bad.display());
    let o = run(&["validate", "--rmatrix", &arg]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("hecke"), "{}", stdout(&o));
    let missing = format!("file:{}", dir.path().join("none.rmx").display());
    assert_eq!(run(&["validate", "--rmatrix", &missing]).status.code(), Some(2));
}

#[test]
fn file_round_trip_through_the_cli() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("dj2.rmx");
    let sym = qcapelli::rcatalog::dj::<qcapelli::RatFunc>(2, qcapelli::QConfig::Symbolic).unwrap();
    let file = qcapelli::rcatalog::RMatrixFile::from_matrix(&sym.r, &qcapelli::QConfig::parse("2/7").unwrap());
    std::fs::write(&path, file.to_json()).unwrap();
    let arg = format!("file:{}", path.display());
    let o = run(&["validate", "--rmatrix", &arg]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("rank 2"));
    let o = run(&["verify", "--rmatrix", &arg, "--identity", "th,cap1", "--k", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("q=2/7"));
}

#[test]
fn flip_and_rigor() {
    let o = run(&["verify", "--rmatrix", "flip", "--identity", "th,th-s,cap1,classical", "--k", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = run(&["verify", "--rigor", "--identity", "th", "--k", "2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["backend"], "fixed-multipoint");
    assert!(v["q_points"].as_array().unwrap().len() >= 2);
    assert_eq!(run(&["verify", "--rigor", "--rmatrix", "flip"]).status.code(), Some(2));
}

#[test]
fn smoke_suite_passes() {
    let o = run(&["suite", "smoke"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("cases behaved as expected"));
}
