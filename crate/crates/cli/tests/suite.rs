use std::collections::BTreeMap;
use std::process::Command;

use qkz_cli::fixtures::{Appendix, SOURCES};
use qkz_cli::report::{ReportFile, Status};
use qkz_cli::suite;

fn sources_with(file: &str, from: &str, to: &str) -> BTreeMap<String, String> {
    let mut src: BTreeMap<String, String> =
        SOURCES.iter().map(|&(n, s)| (n.to_string(), s.to_string())).collect();
    let text = src.get_mut(file).unwrap();
    assert!(text.contains(from), "{from} not in {file}");
    *text = text.replacen(from, to, 1);
    src
}

fn failing(app: &Appendix) -> Vec<String> {
    suite::run(app)
        .into_iter()
        .filter(|r| r.status == Status::Fail)
        .map(|r| r.check)
        .collect()
}

#[test]
fn embedded_fixtures_pass() {
    assert!(failing(&Appendix::load().unwrap()).is_empty());
}

#[test]
fn corrupted_deformed_relation_fails_one_check() {
    let src = sources_with("deformed_relations.tex", "+ e_2 B + e_4", "+ e_3 B + e_4");
    let app = Appendix::from_sources(&src).unwrap();
    assert_eq!(failing(&app), ["deformed-equations"]);
}

#[test]
fn corrupted_multidegree_is_caught() {
    let src = sources_with("multidegrees.tex", "(2\\hbar+z_2-z_3)(2\\hbar+z_3-z_4)", "(2\\hbar+z_2-z_3)(3\\hbar+z_3-z_4)");
    let app = Appendix::from_sources(&src).unwrap();
    let f = failing(&app);
    assert!(f.contains(&"rmatrix-solve".to_string()), "{f:?}");
}

fn qkz(args: &[&str]) -> (bool, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_qkz")).args(args).output().unwrap();
    (out.status.success(), String::from_utf8(out.stdout).unwrap())
}

#[test]
fn appendix_json_is_reproducible() {
    let (ok, a) = qkz(&["appendix", "--format", "json"]);
    let (_, b) = qkz(&["appendix", "--format", "json"]);
    assert!(ok);
    assert_eq!(a, b);
    let file: ReportFile = serde_json::from_str(&a).unwrap();
    assert_eq!(file.schema, 1);
    assert_eq!(file.reports.len(), 8);
    assert!(file.reports.iter().all(|r| r.passed() && r.wall_ms.is_none()));
}

#[test]
fn psi_round_trip_and_corruption() {
    let dir = std::env::temp_dir().join(format!("qkz-psi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("psi.json");
    let p = path.to_str().unwrap();
    let (ok, _) = qkz(&["psi", "build", "--k", "2", "--lambda", "2,2", "--format", "json", "--out", p]);
    assert!(ok);
    let (ok, text) = qkz(&["psi", "verify", "--in", p]);
    assert!(ok, "{text}");
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 5);

    let mut file: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let first = file["entries"][0].as_str().unwrap().to_string();
    file["entries"][0] = format!("{first} + z1*hb").into();
    std::fs::write(&path, file.to_string()).unwrap();
    let (ok, text) = qkz(&["psi", "verify", "--check", "exchange", "--in", p]);
    assert!(!ok);
    assert!(text.starts_with("FAIL exchange"), "{text}");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn slice_emit_small_cases() {
    let (ok, text) = qkz(&["slice", "emit", "--m", "3,1", "--ell", "3,1", "--format", "json"]);
    assert!(ok);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let coord = v["coordinates"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["block"] == serde_json::json!([1, 2]))
        .unwrap();
    assert_eq!(coord["weight"], "z1 - z2 + 2*hb");
}
