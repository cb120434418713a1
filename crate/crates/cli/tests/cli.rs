use std::path::PathBuf;
use std::process::{Command, Output};

use silting_core::harness::HarnessReport;
use silting_core::report::{
    parse_report, BaseChangeReport, CheckReport, ExhibitListReport, OracleCommandReport,
};
use silting_core::silting::Verdict;

const ZMOD6_ZERO_TO_R: &str = r#"{"ring": {"kind": "Zmod", "n": 6},
 "complex": {"components": [{"m": 0, "n": 1, "matrix": []}, {"m": 0, "n": 1, "matrix": []}]},
 "hom": {"kind": "diagonal", "copies": 2}}"#;

fn write_input(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("silting-cli-tests-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn silting(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_silting"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn check_reports_silting() {
    let p = write_input("check.json", ZMOD6_ZERO_TO_R);
    let o = silting(&["check", "--input", p.to_str().unwrap(), "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let r: CheckReport = parse_report(&stdout(&o)).unwrap();
    assert_eq!(r.decision.verdict, Verdict::Silting);
}

#[test]
fn text_output_names_the_verdict() {
    let p = write_input("text.json", ZMOD6_ZERO_TO_R);
    let o = silting(&["check", "--input", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("verdict: silting"));
}

#[test]
fn malformed_json_exits_2_with_position() {
    let p = write_input("bad.json", "{\n \"ring\": {\"kind\": \"Zmod\", \"n\": 6},\n oops }");
    let o = silting(&["check", "--input", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn bad_field_exits_2_with_path() {
    let p = write_input(
        "field.json",
        r#"{"ring": {"kind": "Z"}, "complex": {"components": [{"m": 2, "n": 1, "matrix": [[1]]}]}}"#,
    );
    let o = silting(&["spectrum", "--input", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8(o.stderr).unwrap().contains("complex.components[0].matrix[0]"));
}

#[test]
fn missing_input_and_bad_flags_exit_2() {
    assert_eq!(silting(&["check"]).status.code(), Some(2));
    assert_eq!(silting(&["proptest", "--iters", "0"]).status.code(), Some(2));
    assert_eq!(silting(&["check", "--seed", "zz"]).status.code(), Some(2));
}

#[test]
fn proptest_on_zmod6_diagonal_passes() {
    let p = write_input("prop.json", ZMOD6_ZERO_TO_R);
    let o = silting(&["proptest", "--input", p.to_str().unwrap(), "--seed", "7", "--iters", "100", "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let r: HarnessReport = parse_report(&stdout(&o)).unwrap();
    assert_eq!(r.seed, 7);
    assert!(r.properties.iter().all(|p| p.violations == 0));
}

#[test]
fn output_is_deterministic() {
    let p = write_input("det.json", ZMOD6_ZERO_TO_R);
    let path = p.to_str().unwrap();
    for args in [
        vec!["proptest", "--input", path, "--seed", "0x2a", "--iters", "60"],
        vec!["oracle", "--input", path, "--json"],
    ] {
        let a = silting(&args);
        let b = silting(&args);
        assert_eq!(a.stdout, b.stdout);
        assert_eq!(a.status.code(), b.status.code());
    }
}

fn round_trips<T>(text: &str)
where
    T: serde::Serialize + for<'de> serde::Deserialize<'de>,
{
    let value: T = parse_report(text).unwrap();
    let mut again = serde_json::to_string_pretty(&value).unwrap();
    again.push('\n');
    assert_eq!(again, text);
}

#[test]
fn json_reports_round_trip() {
    let p = write_input("rt.json", ZMOD6_ZERO_TO_R);
    let path = p.to_str().unwrap();
    round_trips::<CheckReport>(&stdout(&silting(&["check", "--input", path, "--json"])));
    round_trips::<BaseChangeReport>(&stdout(&silting(&["basechange", "--input", path, "--json"])));
    round_trips::<OracleCommandReport>(&stdout(&silting(&["oracle", "--input", path, "--json"])));
    round_trips::<ExhibitListReport>(&stdout(&silting(&["exhibit", "--json"])));
    round_trips::<HarnessReport>(&stdout(&silting(&["proptest", "--input", path, "--iters", "20", "--json"])));
}

#[test]
fn exhibits_validate() {
    let o = silting(&["exhibit", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let r: ExhibitListReport = parse_report(&stdout(&o)).unwrap();
    assert!(r.exhibits.len() >= 2);
    assert!(r.exhibits.iter().all(|e| e.report.validated));
}

#[test]
fn basechange_over_integers() {
    let p = write_input(
        "z.json",
        r#"{"ring": {"kind": "Z"},
            "complex": {"components": [{"m": 1, "n": 2, "matrix": [[2], [3]]}]},
            "hom": {"kind": "quotient", "target": {"kind": "Zmod", "n": 4}}}"#,
    );
    let o = silting(&["basechange", "--input", p.to_str().unwrap(), "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let r: BaseChangeReport = parse_report(&stdout(&o)).unwrap();
    assert_eq!(r.source_verdict, Verdict::Silting);
    assert_eq!(r.push_report.verdict, Verdict::Silting);
    assert!(!r.classification.flat);
}
