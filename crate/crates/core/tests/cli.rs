use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_finite-w"))
}

#[test]
fn construct_dumps_pyramid() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pyramid.json");
    let out = bin()
        .args([
            "construct",
            "--n",
            "3",
            "--l",
            "2",
            "--epsilon",
            "-",
            "--dump-pyramid",
        ])
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let dump: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(dump["boxes"].as_array().unwrap().len(), 6);
    assert_eq!(dump["epsilon"], -1);
}

#[test]
fn construct_rejects_invalid_config() {
    let out = bin()
        .args(["construct", "--n", "1", "--l", "2", "--epsilon", "+"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn generators_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("gens.json");
    let out = bin()
        .args([
            "generators",
            "--n",
            "2",
            "--l",
            "2",
            "--epsilon",
            "+",
            "--max-r",
            "3",
            "--out",
        ])
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let records: Vec<finite_w::omega::GeneratorRecord> =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(records.len(), 12);
    let w = finite_w::WAlgebra::new(records[0].config).unwrap();
    for rec in &records {
        let x = w.uea().from_json(&rec.element).unwrap();
        assert_eq!(x, w.w_generator(rec.i, rec.j, rec.r).unwrap());
    }
}

#[test]
fn verify_passes_and_writes_ndjson() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.ndjson");
    let out = bin()
        .args([
            "verify",
            "--suite",
            "all",
            "--n",
            "2",
            "--l",
            "3",
            "--epsilon",
            "-",
            "--report",
        ])
        .arg(&path)
        .env("FINITE_W_JOBS", "2")
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<serde_json::Value> = text
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    let summary = &lines.last().unwrap()["summary"];
    assert_eq!(summary["failed"], 0);
    assert_eq!(summary["rows"].as_u64().unwrap() as usize, lines.len() - 1);
    for row in &lines[..lines.len() - 1] {
        assert_eq!(row["status"], "pass");
        assert!(row["seconds"].is_number());
    }
}

#[test]
fn verify_mutation_fails_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.ndjson");
    let out = bin()
        .args([
            "verify",
            "--suite",
            "invariance",
            "--n",
            "1",
            "--l",
            "3",
            "--epsilon",
            "+",
        ])
        .args(["--mutation", "omega-phi", "--report"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let text = std::fs::read_to_string(&path).unwrap();
    let failed: Vec<serde_json::Value> = text
        .lines()
        .map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap())
        .filter(|v| v["status"] == "fail")
        .collect();
    assert!(!failed.is_empty());
    assert!(failed.iter().all(|v| v.get("witness").is_some()));
}

#[test]
fn verify_io_error_is_distinct() {
    let out = bin()
        .args([
            "verify",
            "--suite",
            "kernel",
            "--n",
            "1",
            "--l",
            "2",
            "--epsilon",
            "-",
        ])
        .args(["--report", "/nonexistent-dir/report.ndjson"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_rejects_unknown_suite() {
    let out = bin()
        .args(["verify", "--suite", "nope", "--report", "x"])
        .output()
        .unwrap();
    assert!(!out.status.success());
}
