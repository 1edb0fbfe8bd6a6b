use std::f64::consts::PI;
use std::path::Path;
use std::process::{Command, Output};

use serde::de::DeserializeOwned;
use serde::Serialize;
use string_geodesics::flow::EventKind;
use string_geodesics_cli::commands::{AtlasData, ClassifyData, PrecessionData, ResiduesData, TraceData};
use string_geodesics_cli::output::Document;
use tempfile::TempDir;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_string-geodesics"));
    c.env_remove("STRING_GEODESICS_TOL");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

/// Runs with `--out` into a temp dir and returns exit code and file text.
fn run_to_file(args: &[&str]) -> (i32, String) {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("out");
    let mut all: Vec<&str> = args.to_vec();
    let p = path.to_str().unwrap().to_string();
    all.extend(["--out", &p]);
    let o = run(&all);
    let text = std::fs::read_to_string(&path).unwrap_or_default();
    (o.status.code().unwrap_or(-1), text)
}

/// Parses a document and checks that writing it again gives the same value
/// and the same bytes.
fn round_trip<T: Serialize + DeserializeOwned + PartialEq + std::fmt::Debug>(text: &str) -> Document<T> {
    let doc: Document<T> = serde_json::from_str(text).expect("document parses");
    let again = doc.to_json().unwrap();
    if let Some((a, b)) = again.lines().zip(text.lines()).find(|(a, b)| a != b) {
        panic!("re-serialized `{a}` differs from written `{b}`");
    }
    assert_eq!(again, text);
    let doc2: Document<T> = serde_json::from_str(&again).unwrap();
    assert_eq!(doc, doc2);
    doc
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

const CASE2: &[&str] =
    &["trace", "--H", "1", "--U", "1", "--H2", "1", "--chart", "ef_adv", "--start", "0,0.8", "--span", "-50,50"];

#[test]
fn trace_case2_event_order() {
    let (code, text) = run_to_file(CASE2);
    assert_eq!(code, 0);
    let doc: Document<TraceData> = round_trip(&text);
    let kinds: Vec<EventKind> =
        doc.data.events.iter().map(|e| e.kind).filter(|k| *k != EventKind::ChartSwitch).collect();
    use EventKind::*;
    let cycle = [ScriMinus, Horizon, Singularity, Horizon, ScriPlus, TurningPoint];
    let at = cycle.iter().position(|k| *k == kinds[0]).unwrap();
    for (i, k) in kinds.iter().enumerate() {
        assert_eq!(*k, cycle[(at + i) % cycle.len()], "{kinds:?}");
    }
    assert!(kinds.len() > 12);
    assert!(doc.data.summary.max_h_err < 1e-6);
    assert!(doc.data.samples.windows(2).all(|w| w[1].s > w[0].s));
}

#[test]
fn trace_summary_goes_to_stdout_with_out() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("t.json");
    let mut args = CASE2.to_vec();
    args.extend(["--out", p.to_str().unwrap()]);
    let o = run(&args);
    let out = String::from_utf8_lossy(&o.stdout);
    assert!(out.contains("max |H - H0|"), "{out}");
    assert!(out.contains("singularity"), "{out}");
}

#[test]
fn trace_radial_has_no_angular_motion() {
    let (code, text) =
        run_to_file(&["trace", "--H2", "0", "--U", "0.1", "--start", "0,0.2", "--span", "0,20"]);
    assert_eq!(code, 0);
    let doc: Document<TraceData> = round_trip(&text);
    assert_eq!(doc.data.summary.angular_motion, 0.0);
    assert!(doc.data.samples.iter().all(|s| s.theta == doc.data.sphere.theta0));
}

#[test]
fn trace_csv_columns() {
    let (code, text) = run_to_file(&[CASE2, &["--format", "csv"]].concat());
    assert_eq!(code, 0);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("s,chart,c1,c2,m1,m2,H_err"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert!(rows.len() > 100);
    for r in &rows {
        assert_eq!(r.len(), 7);
        assert!(r[6].parse::<f64>().unwrap().abs() < 1e-6);
    }
}

#[test]
fn malformed_flags_exit_2_naming_the_flag() {
    for (args, flag) in [
        (vec!["trace", "--H2", "1", "--U", "1", "--start", "0,0.8", "--span", "0,1", "--tol", "abc"], "--tol"),
        (vec!["trace", "--H2", "1", "--U", "1", "--start", "0,0.8", "--span", "0,1", "--tol", "1e-3"], "--tol"),
        (vec!["trace", "--H2", "1", "--U", "1", "--start", "0,0.8,1", "--span", "0,1"], "--start"),
        (vec!["trace", "--H2", "1", "--U", "1", "--start", "0,0.8", "--span", "1"], "--span"),
        (vec!["trace", "--H2", "1", "--U", "1", "--start", "0,0.8", "--span", "0,1", "--chart", "nope"], "--chart"),
        (vec!["trace", "--H", "2", "--H2", "1", "--U", "1", "--start", "0,0.8", "--span", "0,1"], "--H"),
        // no real momentum gives H = 1 in the exterior at this U
        (vec!["trace", "--H2", "1", "--U", "0.1", "--start", "0,0.1667", "--span", "0,1"], "--start"),
        (vec!["classify", "--H", "0", "--U", "1"], "--H"),
        (vec!["residues", "--H", "1", "--U", "0.5", "--epsilon", "2"], "--epsilon"),
        (vec!["atlas-check", "--n", "0"], "--n"),
        (vec!["classify", "--H", "1", "--U", "1", "--format", "csv"], "--format"),
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
        assert!(stderr(&o).contains(flag), "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn tolerance_from_environment() {
    let args = ["trace", "--H2", "1", "--U", "1", "--start", "0,0.8", "--span", "0,5"];
    let o = bin().args(args).env("STRING_GEODESICS_TOL", "1e-3").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    let o = bin().args(args).env("STRING_GEODESICS_TOL", "1e-9").output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    let doc: Document<TraceData> = serde_json::from_slice(&o.stdout).unwrap();
    match doc.meta.config {
        string_geodesics_cli::args::Command::Trace(a) => assert_eq!(a.geodesic.tol, 1e-9),
        c => panic!("{c:?}"),
    }
}

#[test]
fn classify_cases() {
    for (h, u, case, n) in [("1", "0.1", "case1_pos", Some(4)), ("1", "1", "case2_neg", Some(2)), ("1", "0", "degenerate", None)]
    {
        let (code, text) = run_to_file(&["classify", "--H", h, "--U", u]);
        assert_eq!(code, 0);
        let doc: Document<ClassifyData> = round_trip(&text);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["data"]["case"], case);
        assert_eq!(doc.data.segments.map(|t| t.segments.len()), n);
    }
}

#[test]
fn residues_report() {
    let (code, text) = run_to_file(&["residues", "--H", "2", "--U", "0.5", "--epsilon", "1"]);
    assert_eq!(code, 0);
    let doc: Document<ResiduesData> = round_trip(&text);
    let d = doc.data;
    assert!((d.residues.single_pole.residue + 2.0).abs() < 1e-12);
    assert!(d.period_error <= 1e-8);
    assert!((d.single_pole_loop.period.im.abs() - 4.0 * PI).abs() <= 1e-8);
    assert!(d.single_pole_loop.exp_half_roundtrip < 1e-8);
    for (h, u) in [("1", "0.1"), ("1", "1"), ("3", "-0.7"), ("0.5", "0.01")] {
        for eps in ["1", "-1"] {
            let (code, text) = run_to_file(&["residues", "--H", h, "--U", u, "--epsilon", eps]);
            assert_eq!(code, 0, "{h} {u} {eps}");
            let doc: Document<ResiduesData> = round_trip(&text);
            assert!(doc.data.period_error <= 1e-8);
        }
    }
    let o = run(&["residues", "--H", "1", "--U", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

fn precession(args: &[&str]) -> PrecessionData {
    let (code, text) = run_to_file(args);
    assert_eq!(code, 0);
    round_trip::<PrecessionData>(&text).data
}

#[test]
fn precession_case1_constant() {
    let d = precession(&[
        "precession", "--H", "1", "--U", "0.1", "--start", "0,-0.3", "--span", "0,40", "--tol", "1e-12",
    ]);
    assert!(d.passes.len() >= 4);
    let adv: Vec<f64> = d.passes.iter().filter_map(|p| p.delta_theta).collect();
    for a in &adv {
        assert!((a - adv[0]).abs() < 1e-6);
        assert!((a - d.predicted_delta_theta.unwrap()).abs() < 1e-6);
    }
}

#[test]
fn precession_tuned_closes_after_three() {
    let d = precession(&["precession", "--H", "1", "--tune", "1/3", "--start", "0,-0.332", "--span", "0,30", "--tol", "1e-12"]);
    let r = d.rational.expect("flagged");
    assert_eq!((r.p, r.q, r.closes_after), (4, 3, 3));
}

#[test]
fn precession_radial_and_empty() {
    // a string geodesic that makes passes while the sphere point stays put
    let (_, text) = run_to_file(&["trace", "--H2", "1", "--U", "0.1", "--start", "0,-0.3", "--span", "0,1"]);
    let start = round_trip::<TraceData>(&text).data.start;
    let comps: Vec<String> = start.to_array().iter().map(|v| v.to_string()).collect();
    let comps = comps.join(",");
    let d = precession(&["precession", "--H2", "0", "--start", &comps, "--span", "0,40", "--tol", "1e-12"]);
    assert!(d.passes.len() >= 4);
    assert!(d.passes.iter().all(|p| p.delta_theta.is_none_or(|a| a == 0.0)));
    let d = precession(&["precession", "--H2", "0", "--U", "0.1", "--start", "0,0.2", "--span", "0,10"]);
    assert!(d.passes.is_empty());
}

#[test]
fn atlas_check_exit_codes() {
    let (code, text) = run_to_file(&["atlas-check", "--n", "1000"]);
    assert_eq!(code, 0);
    assert!(round_trip::<AtlasData>(&text).data.passed);
    let (code, text) = run_to_file(&["atlas-check", "--n", "50", "--inject-fault"]);
    assert_eq!(code, 1);
    assert!(!round_trip::<AtlasData>(&text).data.passed);
}

#[test]
fn identical_config_gives_identical_bytes() {
    for args in [
        CASE2.to_vec(),
        [CASE2, &["--format", "csv"]].concat(),
        vec!["atlas-check", "--n", "300", "--seed", "7"],
        vec!["residues", "--H", "1", "--U", "0.3"],
    ] {
        let a = run_to_file(&args);
        let b = run_to_file(&args);
        assert_eq!(a.0, 0);
        assert_eq!(a.1, b.1, "{args:?}");
    }
    let a = run_to_file(&["atlas-check", "--n", "300", "--seed", "7"]).1;
    let b = run_to_file(&["atlas-check", "--n", "300", "--seed", "8"]).1;
    assert_ne!(a, b);
}

#[test]
fn stdout_document_without_out() {
    let o = run(&["classify", "--H", "1", "--U", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    round_trip::<ClassifyData>(&text);
    assert!(!Path::new("out").exists());
}
