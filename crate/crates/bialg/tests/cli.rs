use std::path::PathBuf;
use std::process::Command;

use bialg::ledger::ConventionLedger;
use serde_json::Value;
use sha2::{Digest, Sha256};

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn bialg(args: &str) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_bialg"))
        .current_dir(fixtures())
        .args(args.split_whitespace())
        .output()
        .expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn report(args: &str) -> (i32, Value) {
    let (code, out, _) = bialg(&format!("{args} --json"));
    (code, serde_json::from_str(&out).unwrap_or_else(|e| panic!("{args}: {e}\n{out}")))
}

fn check<'a>(r: &'a Value, name: &str) -> &'a Value {
    r["checks"].as_array().unwrap().iter().find(|c| c["name"] == name).unwrap_or_else(|| panic!("no check {name}"))
}

#[test]
fn readme_examples() {
    let (code, r) = report("check-lie sl2.json");
    assert_eq!((code, r["status"].as_str()), (0, Some("pass")));
    let (code, r) = report("cybe sl2.json --r standard_r.json");
    assert_eq!(code, 0);
    assert_eq!(check(&r, "cybe")["status"], "pass");
    let (code, r) = report("induce sl2.json --sub e,h --casimir killing.json");
    assert_eq!(code, 0);
    assert_eq!(r["output"]["h"]["basis"], serde_json::json!(["e", "h"]));
    for c in ["cocycle", "jacobi", "compatibility"] {
        assert_eq!(check(&r, c)["detail"]["residual"]["entries"], serde_json::json!([]));
    }
}

#[test]
fn every_command_runs() {
    let cases = [
        ("check-lie sl3.json", 0),
        ("check-lie sl2_mutated.json", 1),
        ("check-qlb sl2.json --delta sl2_zero_delta.json --phi sl2_casimir_phi.json", 0),
        ("check-qlb sl2.json --delta sl2_noncocycle_delta.json --phi sl2_zero_phi.json", 1),
        ("twist sl2.json --delta sl2_zero_delta.json --phi sl2_casimir_phi.json --lambda sl2_lambda.json", 0),
        ("casimir-phi sl2.json --casimir killing.json", 0),
        ("casimir-phi sl3.json --casimir sl3_casimir.json", 0),
        ("verify-morphism sl2.json --sub e,h --casimir killing.json", 0),
        ("cybe sl2.json --r killing.json", 1),
        ("dynamical sl2.json --sub h --r dyn_r_inverse.json --vars x", 0),
        ("dynamical sl2.json --r dyn_r_inverse_square.json", 1),
        ("dynamical sl2.json --r dyn_r_constant.json", 0),
        ("double sl2.json --delta sl2_standard_delta.json", 0),
        ("double sl2.json --delta sl2_noncocycle_delta.json", 1),
        ("triple-check sl2_double.json --g e,f,h --gstar e*,f*,h* --pairing sl2_double_pairing.json", 0),
        ("triple-check sl2_double_triple.json", 0),
        ("std-triple --algebra sl3", 0),
        ("invariants sl2.json --module sym2", 0),
        ("mc-residual sl2.json --shift 1 --delta sl2_standard_delta.json --phi sl2_zero_phi.json", 0),
        ("mc-residual sl2.json --shift 2 --casimir killing.json", 0),
    ];
    for (args, want) in cases {
        let (code, r) = report(args);
        assert_eq!(code, want, "{args}: {r}");
        let status = if want == 0 { "pass" } else { "fail" };
        assert_eq!(r["status"], status, "{args}");
    }
}

#[test]
fn input_errors_exit_2() {
    for args in [
        "check-lie sl2.json --bogus",
        "frobnicate sl2.json",
        "check-lie standard_r.json",
        "check-lie no_such_file.json",
        "cybe sl2.json --r sl2_casimir_phi.json",
        "induce sl2.json --sub e,f --casimir killing.json",
        "std-triple --algebra sl4",
        "mc-residual sl2.json --shift 3",
        "mc-residual sl2.json --shift 2 --delta sl2_standard_delta.json",
        "dynamical sl2.json --sub h --vars y --r dyn_r_inverse.json",
    ] {
        let (code, _, err) = bialg(args);
        assert_eq!(code, 2, "{args}");
        assert!(!err.is_empty(), "{args}: no diagnostic");
    }
}

fn strip_timing(s: &str) -> Value {
    let mut v: Value = serde_json::from_str(s).unwrap();
    v.as_object_mut().unwrap().remove("timing_ms");
    v
}

#[test]
fn reports_are_deterministic() {
    for args in ["twist sl2.json --delta sl2_zero_delta.json --phi sl2_casimir_phi.json --lambda sl2_lambda.json --json", "std-triple --algebra sl2 --json"] {
        let (_, a, _) = bialg(args);
        let (_, b, _) = bialg(args);
        assert_eq!(strip_timing(&a), strip_timing(&b));
        let drop = |s: &str| s.lines().filter(|l| !l.contains("timing_ms")).collect::<Vec<_>>().join("\n");
        assert_eq!(drop(&a), drop(&b));
    }
}

#[test]
fn reports_carry_ledger_and_hashes() {
    let (_, r) = report("cybe sl2.json --r standard_r.json");
    assert_eq!(r["ledger"], serde_json::to_value(ConventionLedger::current()).unwrap());
    assert_eq!(r["ledger"]["cybe_lambda_factor"], -4);
    let inputs = r["inputs"].as_array().unwrap();
    assert_eq!(inputs.len(), 2);
    for i in inputs {
        let bytes = std::fs::read(fixtures().join(i["path"].as_str().unwrap())).unwrap();
        let hex: String = Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect();
        assert_eq!(i["sha256"].as_str().unwrap(), hex);
    }
}

#[test]
fn text_output_has_the_same_checks() {
    let (code, text, _) = bialg("verify-morphism sl2.json --sub e,h --casimir killing.json");
    assert_eq!(code, 0);
    let (_, r) = report("verify-morphism sl2.json --sub e,h --casimir killing.json");
    for c in r["checks"].as_array().unwrap() {
        assert!(text.contains(&format!("[PASS] {}", c["name"].as_str().unwrap())));
    }
    assert!(text.contains("casimir-invariance-5"));
    assert!(text.contains("cybe_lambda_factor: -4"));
}
