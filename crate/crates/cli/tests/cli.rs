use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn jetlie(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jetlie")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let o = jetlie(&all);
    (serde_json::from_slice(&o.stdout).expect("json output"), o.status.code().unwrap())
}

fn sample(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "samples", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn temp_file(contents: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    f
}

#[test]
fn liedet_of_iv() {
    let o = jetlie(&["liedet", "--algebra", "IV", "--order", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "-u1_2*(1 + u1_1^2)\n");
}

#[test]
fn lines_are_preserved_by_isometries() {
    let lines = sample("lines2.ode");
    let o = jetlie(&["check-symmetry", "--ode", &lines, "--algebra", "isometry", "--m", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "all 6 generators tangent\n");
}

#[test]
fn bent_system_is_not_preserved() {
    let f = temp_file("m = 2\nu1_2 = 1\nu2_2 = 0\n");
    let path = f.path().to_str().unwrap();
    let o = jetlie(&["check-symmetry", "--ode", path, "--algebra", "isometry"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("3 of 6 generators tangent"));
}

#[test]
fn rank_report_json() {
    let (v, code) = json(&["rank", "--algebra", "I", "--order", "1", "--seed", "11"]);
    assert_eq!(code, 0);
    assert_eq!(v["generic_rank"], 3);
    assert_eq!(v["witness"]["value"], "-1 - u1_1^2");
    assert_eq!(v["oracle"]["agrees"], true);
    for key in ["command", "inputs", "verdict", "timings"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn example_certificate_json() {
    let alg = sample("example3.alg");
    let (v, code) = json(&["certify37", "--algebra", &alg, "--order", "3", "--function", "u1_2"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "Certified");
    assert_eq!(v["equation"], "u1_3");
}

#[test]
fn failed_certificate_exits_one() {
    let o = jetlie(&["certify34", "--algebra", "I", "--order", "1", "--equation", "u1_1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("verdict: Failed("));
}

#[test]
fn empty_minor_request() {
    let (v, code) = json(&["minors", "--algebra", "IV", "--order", "2", "--size", "0"]);
    assert_eq!(code, 0);
    assert_eq!(v["minors"], Value::Array(vec![]));
}

#[test]
fn divisibility_of_minors() {
    let (v, code) = json(&["minors", "--algebra", "VII", "--order", "3", "--divisor", "(1 + u1_1^2)*u1_3 - 3*u1_1*u1_2^2"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "Divisible");
    assert_eq!(v["minors"].as_array().unwrap().len(), 6);
}

#[test]
fn parse_errors_exit_two_with_a_span() {
    let o = jetlie(&["invariant", "--algebra", "IV", "--order", "2", "--function", "u1_1/"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("1:5"), "{err}");
    assert!(err.contains('^'));
    assert!(stdout(&o).is_empty());

    let f = temp_file("m = 1\nu1_2 = u1_1 +* 2\n");
    let path = f.path().to_str().unwrap();
    let o = jetlie(&["check-symmetry", "--ode", path, "--algebra", "IV"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("2:"), "{}", stderr(&o));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(jetlie(&["liedet", "--algebra", "IX", "--order", "2"]).status.code(), Some(2));
    assert_eq!(jetlie(&["liedet", "--algebra", "IV"]).status.code(), Some(2));
    assert_eq!(jetlie(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(jetlie(&["liedet", "--algebra", "IV", "--order", "3"]).status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let args = ["certify34", "--algebra", "VIII", "--order", "5", "--equation", "9*u1_5*u1_2^2 + 40*u1_3^3 - 45*u1_2*u1_3*u1_4"];
    let a = jetlie(&args);
    let b = jetlie(&args);
    assert_eq!(a.stdout, b.stdout);
    let (mut x, _) = json(&args);
    let (mut y, _) = json(&args);
    x.as_object_mut().unwrap().remove("timings");
    y.as_object_mut().unwrap().remove("timings");
    assert_eq!(x, y);
    assert_eq!(x["verdict"], "Certified");
}

#[test]
fn dump_round_trips_through_a_file() {
    let first = stdout(&jetlie(&["dump", "--algebra", "real1"]));
    let f = temp_file(&first);
    let second = stdout(&jetlie(&["dump", "--algebra", f.path().to_str().unwrap()]));
    assert_eq!(first, second);
}

#[test]
fn first_integral_of_the_family() {
    let (v, code) = json(&[
        "first-integral",
        "--ode",
        &sample("family.ode"),
        "--algebra",
        &sample("sl2.alg"),
        "--num",
        "1,2",
        "--den",
        "1,3",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["verified"], true);
    assert_eq!(v["warnings"], Value::Array(vec![]));
}

#[test]
fn circles_sample_and_builtin_agree() {
    let a = stdout(&jetlie(&["check-symmetry", "--ode", &sample("circles2.ode"), "--algebra", "conformal"]));
    let b = stdout(&jetlie(&["check-symmetry", "--ode", "builtin:circles", "--algebra", "conformal", "--m", "2"]));
    assert_eq!(a, "all 10 generators tangent\n");
    assert_eq!(a, b);
}

#[test]
fn repro_scalar_table() {
    let o = jetlie(&["repro", "thm1.5"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.ends_with("14/14 checks passed\n"), "{out}");
    assert!(!out.contains("FAIL"));
}

#[test]
fn repro_small_targets() {
    for t in ["sec3.2", "prop3.9"] {
        let o = jetlie(&["repro", t]);
        assert_eq!(o.status.code(), Some(0), "{t}: {}", stdout(&o));
    }
}

#[test]
fn alpha_values() {
    let (v, code) = json(&["rank", "--algebra", "I", "--order", "2", "--alpha", "-1/2"]);
    assert_eq!(code, 0);
    assert_eq!(v["generic_rank"], 3);
    assert_eq!(jetlie(&["rank", "--algebra", "IV", "--order", "2", "--alpha", "1"]).status.code(), Some(2));
}
