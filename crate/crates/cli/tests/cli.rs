use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn quiverdim(args: &[&str], stdin: Option<&str>) -> Output {
    use std::io::Write;
    use std::process::Stdio;
    let mut child = Command::new(env!("CARGO_BIN_EXE_quiverdim"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary starts");
    let mut pipe = child.stdin.take().expect("stdin");
    pipe.write_all(stdin.unwrap_or("").as_bytes())
        .expect("write stdin");
    drop(pipe);
    child.wait_with_output().expect("binary finishes")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn example1(dir: &Path) -> String {
    let out = quiverdim(&["corpus", "example1", "--m", "10"], None);
    assert_eq!(code(&out), 0);
    let path = dir.join("ex1.txt");
    std::fs::write(&path, &out.stdout).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn algebra_from_stdin() {
    let out = quiverdim(&["parse"], Some("vertices: 1 2\narrow a: 1 -> 2\n"));
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["dim"], 3);
}

#[test]
fn malformed_algebra_is_an_input_error() {
    let out = quiverdim(&["parse"], Some("vertices: 1 2\narrow a: 1 -> 3\n"));
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains('3'), "{}", stderr(&out));
}

#[test]
fn usage_errors_are_input_errors() {
    assert_eq!(code(&quiverdim(&["--bogus"], None)), 1);
    assert_eq!(code(&quiverdim(&["corpus", "nosuch"], None)), 1);
    assert_eq!(code(&quiverdim(&["--help"], None)), 0);
}

#[test]
fn unknown_module_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let alg = example1(dir.path());
    let out = quiverdim(&["pd", "--module", "S99", &alg], None);
    assert_eq!(code(&out), 1);
}

#[test]
fn infinite_pd_set_violates_hypothesis() {
    let dir = tempfile::tempdir().unwrap();
    let alg = example1(dir.path());
    let out = quiverdim(&["certify", "--V", "1", &alg], None);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("pd V"), "{}", stderr(&out));
}

#[test]
fn tampered_chain_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let alg = example1(dir.path());
    let out = quiverdim(
        &["construct", "--what", "loewy", "--module", "P1", &alg],
        None,
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let good = dir.path().join("good.json");
    std::fs::write(&good, &out.stdout).unwrap();
    let ok = quiverdim(
        &[
            "construct",
            "--what",
            "loewy",
            "--verify-only",
            good.to_str().unwrap(),
            &alg,
        ],
        None,
    );
    assert_eq!(code(&ok), 0, "{}", stderr(&ok));

    let mut v: Value = serde_json::from_slice(&out.stdout).unwrap();
    for block in v["chain"]["maps"][0].as_array_mut().unwrap() {
        for row in block.as_array_mut().unwrap() {
            for x in row.as_array_mut().unwrap() {
                *x = Value::from(0);
            }
        }
    }
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, serde_json::to_string(&v).unwrap()).unwrap();
    let out = quiverdim(
        &[
            "construct",
            "--what",
            "loewy",
            "--verify-only",
            bad.to_str().unwrap(),
            &alg,
        ],
        None,
    );
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("surjective"), "{}", stderr(&out));
}

#[test]
fn out_flag_writes_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let alg = example1(dir.path());
    let target = dir.path().join("report.json");
    let out = quiverdim(
        &[
            "--out",
            target.to_str().unwrap(),
            "bounds",
            "--V",
            "3,4,5,6,7,8,9",
            &alg,
        ],
        None,
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&target).unwrap()).unwrap();
    assert_eq!(v["best"], 4);
}
