//! Command-line surface: document round trips, exit codes, CSV schema
//! stability, and the worked examples of each subcommand.

use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_curvetan"))
}

fn tmpdir(tag: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("curvetan-cli-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}

#[test]
fn gen_analyze_round_trip_is_byte_stable() {
    let dir = tmpdir("round");
    let doc = dir.join("grid.json");
    let out = bin()
        .args(["gen", "grid", "--n", "20", "--out", doc.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success());

    let r1 = dir.join("r1.json");
    let r2 = dir.join("r2.json");
    for r in [&r1, &r2] {
        let out = bin()
            .args([
                "analyze",
                doc.to_str().unwrap(),
                "--kind",
                "orthogonality",
                "--report",
                r.to_str().unwrap(),
            ])
            .output()
            .unwrap();
        assert!(out.status.success());
    }
    let a = std::fs::read(&r1).unwrap();
    let b = std::fs::read(&r2).unwrap();
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    assert!(text.contains("\"sigma_mult\": 100"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn gen_unit_circles_and_char2_documents() {
    let out = bin().args(["gen", "unit-circles", "--p", "5"]).output().unwrap();
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["curves"].as_array().unwrap().len(), 25);
    assert_eq!(doc["field"]["char"], 5);

    let out = bin()
        .args(["gen", "char2-parabolas", "--q", "16", "--n", "10"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["curves"].as_array().unwrap().len(), 10);
    assert_eq!(doc["field"]["char2ext"], 4);
}

#[test]
fn csv_schema_is_stable() {
    let dir = tmpdir("csv");
    let doc = dir.join("grid.json");
    let csv = dir.join("rows.csv");
    assert!(bin()
        .args(["gen", "grid", "--n", "8", "--out", doc.to_str().unwrap()])
        .status()
        .unwrap()
        .success());
    assert!(bin()
        .args([
            "analyze",
            doc.to_str().unwrap(),
            "--kind",
            "orthogonality",
            "--report",
            dir.join("r.json").to_str().unwrap(),
            "--csv",
            csv.to_str().unwrap(),
        ])
        .status()
        .unwrap()
        .success());
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "arrangement_id,field,D,n,kind,sigma_mult,incidences,bad_points,unresolved"
    );
    let row = lines.next().unwrap();
    assert!(row.starts_with("grid-n8-s0,rational,1,8,orthogonality,16,16,"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn sweep_prints_exponent() {
    let out = bin()
        .args([
            "sweep",
            "--family",
            "grid",
            "--values",
            "8,16,32",
            "--kind",
            "orthogonality",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("fitted exponent: 2.000000"), "{text}");
}

#[test]
fn sweep_from_experiment_doc() {
    let dir = tmpdir("exp");
    let doc = dir.join("exp.json");
    std::fs::write(
        &doc,
        r#"{
            "schema": "curvetan/experiment/1",
            "family": "unit-circles",
            "sweep": [5, 7],
            "kind": "tangency"
        }"#,
    )
    .unwrap();
    let out = bin().args(["sweep", "--doc", doc.to_str().unwrap()]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("value=5 n=25 sigma=100"), "{text}");
    assert!(text.contains("value=7 n=49 sigma=392"), "{text}");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn lift_subcommand_emits_pair() {
    let out = bin()
        .args(["lift", "--curve", "x^2 + y^2 - 1", "--kind", "orthogonal"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("surface_1: x^2 + y^2 - 1"));
    assert!(text.contains("surface_2: 2*x*z + 2*y"));

    let out = bin()
        .args(["lift", "--curve", "x^2 + y^2 - 1", "--kind", "1"])
        .output()
        .unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("surface_2: y*z - x"));
    assert!(text.contains("bad points (2): (-1, 0) (1, 0)"));
}

#[test]
fn fit_vanishing_subcommand() {
    let dir = tmpdir("fit");
    let doc = dir.join("c.json");
    std::fs::write(
        &doc,
        r#"{
            "schema": "curvetan/arrangement/1",
            "id": "two-circles",
            "field": {"char": 101},
            "d_max": 2,
            "seed": 0,
            "curves": [
                {"poly": "x^2 + y^2 - 1"},
                {"poly": "x^2 + y^2 - 4*y + 3"}
            ]
        }"#,
    )
    .unwrap();
    let out = bin()
        .args([
            "fit-vanishing",
            doc.to_str().unwrap(),
            "--m-per-curve",
            "40",
            "--dmax",
            "8",
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let summary: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(summary["degree"].as_u64().unwrap() <= 8);
    assert_eq!(summary["held_out_zero"], summary["held_out_total"]);
}

#[test]
fn exit_codes() {
    // validation failure: 2
    let out = bin().args(["gen", "unit-circles", "--p", "2"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    // unknown family: 2
    let out = bin().args(["gen", "bogus", "--n", "4"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    // scan bound: 3
    let out = bin().args(["gen", "unit-circles", "--p", "503"]).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    // grid that does not fit its field: 2
    let dir = tmpdir("codes");
    let doc = dir.join("bad.json");
    std::fs::write(
        &doc,
        r#"{
            "schema": "curvetan/arrangement/1",
            "id": "dup",
            "field": "rational",
            "d_max": 2,
            "seed": 0,
            "curves": [
                {"poly": "x^2 + y^2 - 1"},
                {"poly": "2*x^2 + 2*y^2 - 2"}
            ]
        }"#,
    )
    .unwrap();
    let out = bin().args(["analyze", doc.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(2), "duplicate curves must be rejected");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn analyze_s_tangency_kind() {
    let dir = tmpdir("stang");
    let doc = dir.join("contact.json");
    std::fs::write(
        &doc,
        r#"{
            "schema": "curvetan/arrangement/1",
            "id": "contact-pair",
            "field": "rational",
            "d_max": 3,
            "seed": 0,
            "curves": [
                {"poly": "y - x^2"},
                {"poly": "y - x^2 - x^3"}
            ]
        }"#,
    )
    .unwrap();
    // order-3 contact: present at s = 3, absent at s = 4
    let out = bin()
        .args(["analyze", doc.to_str().unwrap(), "--kind", "s-tangency", "--s", "3"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let rep: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(rep["sigma_mult"], 2);
    assert_eq!(rep["kind"], "s-tangency-3");
    let out = bin()
        .args(["analyze", doc.to_str().unwrap(), "--kind", "s-tangency", "--s", "4"])
        .output()
        .unwrap();
    let rep: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(rep["sigma_mult"], 0);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn jets_rejects_off_curve_points() {
    let out = bin()
        .args(["jets", "--curve", "x^2 + y^2 - 1", "--at", "5,5"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    // char-2 parabola jets degenerate: reported as validation failure
    let out = bin()
        .args(["jets", "--curve", "y - x^2 - 1", "--field", "2^2", "--at", "0,1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("degenerate") || err.contains("constant"), "{err}");
}

#[test]
fn empty_document_yields_zero_report() {
    let dir = tmpdir("empty");
    let doc = dir.join("empty.json");
    std::fs::write(
        &doc,
        r#"{"schema": "curvetan/arrangement/1", "id": "empty", "field": "rational",
            "d_max": 0, "seed": 0, "curves": []}"#,
    )
    .unwrap();
    let out = bin().args(["analyze", doc.to_str().unwrap()]).output().unwrap();
    assert!(out.status.success());
    let rep: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(rep["sigma_mult"], 0);
    assert_eq!(rep["n_curves"], 0);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn thread_count_does_not_change_output() {
    let dir = tmpdir("threads");
    let doc = dir.join("uc.json");
    assert!(bin()
        .args(["gen", "unit-circles", "--p", "11", "--out", doc.to_str().unwrap()])
        .status()
        .unwrap()
        .success());
    let r1 = dir.join("t1.json");
    let r4 = dir.join("t4.json");
    for (r, t) in [(&r1, "1"), (&r4, "4")] {
        assert!(bin()
            .args([
                "analyze",
                doc.to_str().unwrap(),
                "--kind",
                "tangency",
                "--threads",
                t,
                "--report",
                r.to_str().unwrap(),
            ])
            .status()
            .unwrap()
            .success());
    }
    assert_eq!(std::fs::read(&r1).unwrap(), std::fs::read(&r4).unwrap());
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn gen_list_names_every_family() {
    let out = bin().args(["gen", "list"]).output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    for name in [
        "unit-circles",
        "char2-parabolas",
        "grid",
        "coaxial-pencils",
        "incidence-tangency",
    ] {
        assert!(text.contains(name), "missing {name} in: {text}");
    }
}
