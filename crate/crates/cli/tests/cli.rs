use std::io::Write;
use std::process::{Command, Output, Stdio};
use std::time::Instant;

use serde_json::{json, Value};

use essmod::algebra::{AlgebraShape, RightIdeal};
use essmod::field::{FieldModuleSpec, SubspaceField};
use essmod::module::Submodule;
use essmod_cli::commands::{cmd_check, cmd_witness, WitnessOptions};
use essmod_cli::error::{CliError, EXIT_FAIL, EXIT_INPUT, EXIT_PASS};
use essmod_cli::gen::{generate, DefectMode, GenOptions};
use essmod_cli::instance::{Instance, Kind, RightIdealPayload};
use essmod_cli::suite::{cmd_suite, SuiteConfig};

fn essmod(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_essmod"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    let mut pipe = child.stdin.take().expect("stdin");
    pipe.write_all(stdin.unwrap_or("").as_bytes()).expect("write stdin");
    drop(pipe);
    child.wait_with_output().expect("binary exits")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).unwrap()
}

#[test]
fn gen_right_ideal_is_valid_and_byte_identical() {
    let a = essmod(&["gen", "--kind", "right_ideal", "--blocks", "2,3", "--seed", "7"], None);
    let b = essmod(&["gen", "--kind", "right_ideal", "--blocks", "2,3", "--seed", "7"], None);
    assert_eq!(a.status.code(), Some(EXIT_PASS));
    assert_eq!(a.stdout, b.stdout);
    let inst = Instance::from_json(std::str::from_utf8(&a.stdout).unwrap()).unwrap();
    assert_eq!(inst.schema, "essmod/1");
    inst.parse_payload().unwrap();
}

#[test]
fn gen_then_check_through_pipes() {
    for kind in ["right_ideal", "module_submodule", "field"] {
        let g = essmod(&["gen", "--kind", kind, "--seed", "3"], None);
        let c = essmod(&["check"], Some(std::str::from_utf8(&g.stdout).unwrap()));
        assert_eq!(c.status.code(), Some(EXIT_PASS), "{kind}: {}", String::from_utf8_lossy(&c.stderr));
        let r = json_of(&c);
        assert_eq!(r["schema"], "essmod/1");
        assert_eq!(r["matches_expected"], true);
    }
}

#[test]
fn files_via_in_and_out() {
    let dir = std::env::temp_dir().join(format!("essmod-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let inst = dir.join("inst.json");
    let rep = dir.join("report.json");
    let g = essmod(&["gen", "--kind", "field", "--d", "2", "--defect", "interval", "--seed", "1", "--out", inst.to_str().unwrap()], None);
    assert_eq!(g.status.code(), Some(EXIT_PASS));
    let w = essmod(&["witness", "--in", inst.to_str().unwrap(), "--out", rep.to_str().unwrap(), "--json-pretty"], None);
    assert_eq!(w.status.code(), Some(EXIT_PASS), "{}", String::from_utf8_lossy(&w.stderr));
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&rep).unwrap()).unwrap();
    assert_eq!(r["details"]["inductive_witness"]["steps"].as_array().unwrap().len(), 8);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn input_errors_exit_two() {
    let out = essmod(&["check"], Some("{not json"));
    assert_eq!(out.status.code(), Some(EXIT_INPUT));
    let wrong = json!({ "schema": "essmod/0", "kind": "field", "payload": {} }).to_string();
    assert_eq!(essmod(&["check"], Some(&wrong)).status.code(), Some(EXIT_INPUT));
    assert_eq!(essmod(&["gen", "--kind", "field", "--d", "5"], None).status.code(), Some(EXIT_INPUT));
    assert_eq!(essmod(&["gen", "--kind", "right_ideal", "--blocks", "7"], None).status.code(), Some(EXIT_INPUT));
    assert_eq!(essmod(&["check", "--in", "/nonexistent/instance.json"], None).status.code(), Some(EXIT_INPUT));
}

#[test]
fn mismatched_expectation_exits_one() {
    let mut inst = generate(Kind::Field, &GenOptions { defect: DefectMode::Interval, ..Default::default() }, 5).unwrap();
    inst.expected.as_mut().unwrap().essential = true;
    let out = essmod(&["check"], Some(&serde_json::to_string(&inst).unwrap()));
    assert_eq!(out.status.code(), Some(EXIT_FAIL));
    assert_eq!(json_of(&out)["matches_expected"], false);
}

#[test]
fn inductive_request_outside_defect_is_rejected() {
    let inst = generate(Kind::Field, &GenOptions { defect: DefectMode::Points, ..Default::default() }, 2).unwrap();
    let spec: FieldModuleSpec = serde_json::from_value(inst.payload).unwrap();
    let (lo, hi) = (essmod::field::rational::q(0, 1), essmod::field::rational::q(1, 1));
    let err = essmod::field::inductive_witness_section(&spec, (&lo, &hi), None, 8).unwrap_err();
    assert!(matches!(err, essmod::Error::PreconditionFailed(_)));
    assert!(matches!(CliError::from(err), CliError::Core(_)));
}

#[test]
fn full_module_and_zero_ideal() {
    let shape = AlgebraShape::new(vec![2, 1]).unwrap();
    let full = Instance::new(Kind::ModuleSubmodule, None, to_value(&Submodule::whole(&shape, 2)), None);
    assert_eq!(cmd_check(&full).unwrap().decision, Some(true));
    let field = Instance::new(Kind::Field, None, to_value(&FieldModuleSpec::standard(SubspaceField::full(2))), None);
    assert_eq!(cmd_check(&field).unwrap().decision, Some(true));
    let zero = RightIdealPayload { ideal: RightIdeal::zero(&shape), generators: vec![] };
    let zero = Instance::new(Kind::RightIdeal, None, to_value(&zero), None);
    assert_eq!(cmd_check(&zero).unwrap().decision, Some(false));
}

#[test]
fn planted_interval_lies_in_reported_defect() {
    let inst = generate(Kind::Field, &GenOptions { d: Some(2), defect: DefectMode::Interval, ..Default::default() }, 1).unwrap();
    let r = cmd_check(&inst).unwrap();
    assert_eq!(r.decision, Some(false));
    let y: essmod::field::SymbolicSubset = serde_json::from_value(r.details["defect"]["y"].clone()).unwrap();
    let planted = inst.expected.unwrap().defect.unwrap();
    assert!(planted.subset_of(&y) && y.subset_of(&planted));
    assert!(!y.interior().is_empty());
}

#[test]
fn ideal_witness_recheck() {
    let inst = generate(Kind::RightIdeal, &GenOptions { blocks: Some(vec![3, 2]), ..Default::default() }, 9).unwrap();
    let r = cmd_witness(&inst, &WitnessOptions::default()).unwrap();
    assert!(r.passed);
    let k = &r.details["closed_subideals"][0];
    assert_eq!(k["verified"], true);
    assert_eq!(k["inside_ideal"], true);
}

#[test]
fn suite_single_trial_is_fast() {
    let start = Instant::now();
    let out = essmod(&["suite", "--trials", "1", "--seed", "42"], None);
    assert!(start.elapsed().as_secs_f64() < 1.0);
    assert_eq!(out.status.code(), Some(EXIT_PASS));
}

#[test]
fn suite_seed_42_passes_all_properties() {
    let out = essmod(&["suite", "--trials", "100", "--seed", "42"], None);
    let r = json_of(&out);
    let failing: Vec<&Value> = r["properties"].as_array().unwrap().iter().filter(|p| p["failed"] != 0).collect();
    assert!(failing.is_empty(), "{failing:?}");
    assert_eq!(out.status.code(), Some(EXIT_PASS));
}

#[test]
fn suite_digest_ignores_timing_and_tracks_seed() {
    let a = cmd_suite(&SuiteConfig::new(1, 2));
    let b = cmd_suite(&SuiteConfig::new(1, 2));
    let c = cmd_suite(&SuiteConfig::new(2, 2));
    assert_eq!(a.digest, b.digest);
    assert_ne!(a.digest, c.digest);
    let names: Vec<&str> = a.properties.iter().map(|p| p.name.as_str()).collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
}

#[test]
fn injected_theta_fault_fails_exactly_that_property() {
    let cfg = SuiteConfig { theta_fault: true, ..SuiteConfig::new(42, 8) };
    let r = cmd_suite(&cfg);
    assert!(!r.passed);
    let failing: Vec<&str> = r.properties.iter().filter(|p| p.failed > 0).map(|p| p.name.as_str()).collect();
    assert_eq!(failing, ["module.theta_nondegenerate"]);
}
