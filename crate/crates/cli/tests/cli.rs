use std::io::Write as _;
use std::process::Command;

use gepnerkit::{Outcome, ProofTrace};
use gepnerkit_cli::{dispatch, report, report_exit_code, Format, EXIT_FAIL, EXIT_INPUT, EXIT_OK};
use proptest::prelude::*;
use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("gepnerkit").chain(args.iter().copied());
    let code = dispatch(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn temp_json(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn charge_of_jardim_class() {
    let (code, out, _) = run(&["charge", "--ch", r#"[ "4","-2","-1","-1/3" ]"#]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["ch"], serde_json::json!(["4", "-2", "-1", "-1/3"]));
    let exact = v["zg_dagger"]["exact"].as_array().unwrap();
    assert_eq!(exact.len(), 8);
    let lo = v["zg_dagger"]["box"]["re_lo"].as_str().unwrap();
    assert_eq!(lo.split('.').nth(1).unwrap().len(), 20);
}

#[test]
fn charge_variants() {
    let (code, out, _) = run(&["charge", "--ch", r#"["1","-1/2","1/8","-1/48"]"#, "--t", "1"]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["zb_th"]["re"], "0");
    assert_eq!(v["zb_th"]["im"], "-5/6");
    let (code, out, _) = run(&["charge", "--R", "1", "--r", "0", "--dh", "0"]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["zg_prime"]["display"], "1 - ζ^4");
    assert_eq!(run(&["charge"]).0, EXIT_INPUT);
    assert_eq!(run(&["charge", "--ch", "[1,2,3]"]).0, EXIT_INPUT);
    assert_eq!(run(&["charge", "--ch", "[1,0,0,0]", "--t", "-1"]).0, EXIT_INPUT);
    assert_eq!(run(&["charge", "--R", "1", "--r", "0", "--dh", "0", "--n", "1/3"]).0, EXIT_INPUT);
}

#[test]
fn chern_vector_from_file() {
    let f = temp_json(r#"{"ch": ["4", "-2", "-1", "-1/3"]}"#);
    let (code, out, _) = run(&["bg-check", "--ch", f.path().to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["classical"]["discriminant_h"], "60");
    assert_eq!(v["strong"]["ratio"], "15/4");
    let (code, _, err) = run(&["bg-check", "--ch", "/nonexistent/class.json"]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("cannot read"));
}

#[test]
fn bg_check_failures() {
    let (code, out, _) = run(&["bg-check", "--ch", r#"["2","-1","1/10","0"]"#]);
    assert_eq!(code, EXIT_FAIL);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["strong"]["verdict"], "FAIL");
    assert_eq!(run(&["bg-check", "--ch", r#"["1","0","1/10","0"]"#]).0, EXIT_FAIL);
    assert_eq!(run(&["bg-check", "--ch", r#"["0","0","0","1/5"]"#]).0, EXIT_INPUT);
    assert_eq!(run(&["bg-check", "--ch", r#"["1","1/3","0","0"]"#]).0, EXIT_INPUT);
}

#[test]
fn rank_two_markdown_ends_excluded() {
    let (code, out, _) = run(&["rank2-certificate", "--c2h", "2", "--format", "md"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.trim_end().ends_with("EXCLUDED"));
    let (code, out, _) = run(&["rank2-certificate", "--c2h", "4", "--format", "md"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.trim_end().ends_with("CONSISTENT"));
    assert_eq!(run(&["rank2-certificate", "--c2h", "1"]).0, EXIT_INPUT);
}

#[test]
fn trace_json_round_trips() {
    let (_, out, _) = run(&["rank2-certificate", "--c2h", "2"]);
    let traces: Vec<ProofTrace> = serde_json::from_str(&out).unwrap();
    assert_eq!(traces.len(), 1);
    assert_eq!(traces[0].outcome, Outcome::Excluded);
    assert!(traces[0].replay().unwrap());
    assert_eq!(report(&traces, Format::Json), out.trim_end());
}

#[test]
fn clifford_commands() {
    assert_eq!(run(&["clifford-check", "--R", "2", "--r", "1", "--dh", "3"]).0, EXIT_OK);
    assert_eq!(run(&["clifford-check", "--R", "2", "--r", "1", "--dh", "2"]).0, EXIT_FAIL);
    assert_eq!(run(&["clifford-check", "--R", "3", "--r", "1", "--dh", "2"]).0, EXIT_INPUT);
    let (code, out, _) = run(&["clifford-certificate", "--dh", "2", "--format", "md"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.trim_end().ends_with("EXCLUDED"));
    assert_eq!(run(&["clifford-certificate", "--dh", "0"]).0, EXIT_INPUT);
}

#[test]
fn periods_command() {
    let (code, out, _) = run(&["periods", "--j", "0", "--psi", "0.1,0", "--terms", "120", "--precision-bits", "128"]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert!(v["value"]["re"].as_str().unwrap().starts_with("1.9495836885055102"));
    assert!(v["error_bound"].as_str().unwrap().contains('e'));
    let (code, out, _) = run(&["periods", "--j", "2", "--psi", "0,0"]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["value"]["re"], "0");
    assert_eq!(run(&["periods", "--j", "0", "--psi", "1/5,0"]).0, EXIT_INPUT);
    assert_eq!(run(&["periods", "--j", "7", "--psi", "0,0"]).0, EXIT_INPUT);
    assert_eq!(run(&["periods", "--j", "0", "--psi", "0.1"]).0, EXIT_INPUT);
    assert_eq!(run(&["periods", "--j", "0", "--psi", "0,0", "--terms", "3"]).0, EXIT_INPUT);
    assert_eq!(run(&["periods", "--j", "0", "--psi", "0,0", "--precision-bits", "8"]).0, EXIT_INPUT);
}

#[test]
fn identity_checks() {
    assert_eq!(run(&["monodromy-check"]).0, EXIT_OK);
    assert_eq!(run(&["aspinwall-check"]).0, EXIT_OK);
    assert_eq!(run(&["aspinwall-check", "--m", "-10,0,10"]).0, EXIT_OK);
}

#[test]
fn verify_all_table() {
    let (code, out, _) = run(&["verify-all", "--format", "md"]);
    assert_eq!(code, EXIT_OK);
    for needle in ["eigen-check", "M^5 = I", "aspinwall", "gepner-limit", "| rank-2 c2H=2 | EXCLUDED | EXCLUDED | PASS |", "| clifford dh=2 | EXCLUDED | EXCLUDED | PASS |"] {
        assert!(out.contains(needle), "missing {needle}");
    }
    let (code, out, _) = run(&["verify-all"]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["overall"], "PASS");
}

#[test]
fn hn_and_heart_inputs() {
    let pieces = temp_json(
        r#"[{"ch":["1","0","0","0"],"slope":"7/10","label":"O"},{"ch":["0","0","0","1/5"],"slope":"1"}]"#,
    );
    let (code, out, _) = run(&["hn", "--input", pieces.path().to_str().unwrap(), "--strict"]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["order"], serde_json::json!([1, 0]));
    let odd = temp_json(r#"[{"ch":["3","-3/2","0","0"],"slope":"0"}]"#);
    assert_eq!(run(&["hn", "--input", odd.path().to_str().unwrap()]).0, EXIT_INPUT);

    let heart = temp_json(
        r#"[{"ch":["2","-1","-1/10","0"],"shift":1,"tag":"mu-stable"},{"ch":["0","0","0","1/5"],"shift":0,"tag":"torsion-dim-le-1"}]"#,
    );
    let (code, out, _) = run(&["heart-check", "--input", heart.path().to_str().unwrap()]);
    assert_eq!(code, EXIT_OK, "{out}");
    let bad = temp_json(r#"[{"ch":["2","-1","1/10","0"],"shift":1,"tag":"mu-stable"}]"#);
    assert_eq!(run(&["heart-check", "--input", bad.path().to_str().unwrap()]).0, EXIT_FAIL);
    let unknown = temp_json(r#"[{"ch":["1","0","0","0"],"shift":0,"tag":"unknown"}]"#);
    assert_eq!(run(&["heart-check", "--input", unknown.path().to_str().unwrap()]).0, EXIT_INPUT);
}

#[test]
fn reports() {
    assert_eq!(report(&[], Format::Json), "");
    assert_eq!(report(&[], Format::Md), "");
    assert_eq!(report_exit_code(&[]), EXIT_OK);
    let pass = gepnerkit::bginequality::rank2_certificate(3).unwrap();
    let md = report(std::slice::from_ref(&pass), Format::Md);
    let rows: Vec<&str> = md.lines().filter(|l| l.contains("| PASS |")).collect();
    assert_eq!(rows.len(), 1 + pass.steps.len());
    let fail = gepnerkit::tilt::lemma_property_check(&[gepnerkit::tilt::LabeledClass::new(
        gepnerkit::bginequality::rank2_class(2),
        1,
        gepnerkit::tilt::StabilityTag::MuStable,
    )
    .unwrap()])
    .unwrap();
    assert_eq!(report_exit_code(&[pass.clone(), fail.clone()]), EXIT_FAIL);
    assert!(report(&[pass, fail], Format::Md).contains("| FAIL | INCONCLUSIVE |"));
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["verify-all"][..],
        &["rank2-certificate", "--c2h", "2"],
        &["charge", "--ch", "[4,-2,-1,\"-1/3\"]"],
        &["periods", "--j", "1", "--psi", "1/20,1/30", "--terms", "60"],
    ] {
        assert_eq!(run(args).1, run(args).1);
    }
}

#[test]
fn usage_errors() {
    let (code, _, err) = run(&["frobnicate"]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("Usage"));
    assert_eq!(run(&[]).0, EXIT_INPUT);
    assert_eq!(run(&["--help"]).0, EXIT_OK);
}

#[test]
fn binary_honours_precision_env() {
    let bin = env!("CARGO_BIN_EXE_gepnerkit");
    let out = Command::new(bin).arg("monodromy-check").env("GEPNERKIT_PRECISION", "16").output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_INPUT));
    let out = Command::new(bin)
        .args(["periods", "--j", "0", "--psi", "0.1,0", "--terms", "40"])
        .env("GEPNERKIT_PRECISION", "64")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_OK));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["precision_bits"], 64);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn malformed_chern_input_exits_2(junk in "[a-z#;:!]{1,12}") {
        let arg = format!("[{junk}]");
        prop_assert_eq!(run(&["charge", "--ch", &arg]).0, EXIT_INPUT);
    }

    #[test]
    fn out_of_range_arguments_exit_2(j in 4i64..1000, c2h in -1000i64..2, dh in -1000i64..=0) {
        prop_assert_eq!(run(&["periods", "--j", &j.to_string(), "--psi", "0,0"]).0, EXIT_INPUT);
        prop_assert_eq!(run(&["rank2-certificate", "--c2h", &c2h.to_string()]).0, EXIT_INPUT);
        prop_assert_eq!(run(&["clifford-certificate", "--dh", &dh.to_string()]).0, EXIT_INPUT);
    }

    #[test]
    fn wrong_arity_exits_2(n in 0usize..10) {
        prop_assume!(n != 4);
        let arr = format!("[{}]", vec!["1"; n].join(","));
        prop_assert_eq!(run(&["bg-check", "--ch", &arr]).0, EXIT_INPUT);
    }
}
