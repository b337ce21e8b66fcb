use std::fs;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_blowup8")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn emitted_certificates_verify() {
    let dir = tempfile::tempdir().unwrap();
    for (cone, class) in [
        ("eff", "3;1,1,1,1,1,1,1,1"),
        ("eff", "5;3,-2,4,1,0,2,2,1"),
        ("mov", "6;5,4,3,0,0,0,0,0"),
        ("mov", "7;4,4,3,3,3,2,2,1"),
        ("nef", "4;2,2,1,1,1,1,0,0"),
        ("curves", "3;1,1,0,0,0,0,0,0"),
    ] {
        let o = run(&["--format", "structured", "decompose", "--cone", cone, class]);
        assert_eq!(o.status.code(), Some(0), "{cone} {class}");
        let cert = stdout(&o);
        assert!(!cert.contains("\"member\":false"), "{cone} {class}: {cert}");
        let path = dir.path().join(format!("{cone}.json"));
        fs::write(&path, &cert).unwrap();
        let v = run(&["verify", path.to_str().unwrap()]);
        assert_eq!(v.status.code(), Some(0));
        assert!(stdout(&v).starts_with("valid"), "{}", stdout(&v));
    }
}

#[test]
fn tampered_certificate_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["--format", "structured", "decompose", "--cone", "eff", "3;1,1,1,1,1,1,1,1"]);
    let cert = stdout(&o).replacen("\"coeff\":\"1\"", "\"coeff\":\"2\"", 1);
    let path = dir.path().join("bad.json");
    fs::write(&path, cert).unwrap();
    let v = run(&["verify", path.to_str().unwrap()]);
    assert!(stdout(&v).starts_with("INVALID"), "{}", stdout(&v));
}

#[test]
fn output_is_deterministic() {
    let args = ["--format", "csv", "classify", "4;2,2,2,1,1,1,1,0", "3;3,1,1,1,0,0,0,0", "1;2,0,0,0,0,0,0,0"];
    assert_eq!(stdout(&run(&args)), stdout(&run(&args)));
}

#[test]
fn orbit_to_degree_two() {
    let o = run(&["orbit", "--max-degree", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("class,degree"));
    assert_eq!(lines.count(), 232);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["reduce", "3;2,2,2,2,1,1,1,0"]).status.code(), Some(0));
    assert_eq!(run(&["reduce", "not a class"]).status.code(), Some(2));
    assert_eq!(run(&["--max-steps", "5", "reduce", "-1;0,0,0,0,0,0,0,0"]).status.code(), Some(3));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    // A negative verdict is still a computed verdict.
    assert_eq!(run(&["decompose", "--cone", "nef", "1;1,1,0,0,0,0,0,0"]).status.code(), Some(0));
}

#[test]
fn file_input_and_output() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("classes.txt");
    let output = dir.path().join("out.csv");
    fs::write(&input, "3;2,2,2,2,1,1,1,0\n\n2;1,1,1,1,1,1,1,1\n").unwrap();
    let o = run(&[
        "--input",
        input.to_str().unwrap(),
        "--output",
        output.to_str().unwrap(),
        "--format",
        "csv",
        "reduce",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let csv = fs::read_to_string(&output).unwrap();
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(rows[0], "input,standard,word,cremona_steps");
    assert_eq!(rows.len(), 3);
    assert!(rows[1].ends_with(",2"), "{}", rows[1]);
}

#[test]
fn oracle_with_generator_file() {
    let dir = tempfile::tempdir().unwrap();
    let gens = dir.path().join("gens.txt");
    fs::write(&gens, "1,0\n0,1\n").unwrap();
    let o = run(&["oracle", "--generators", gens.to_str().unwrap(), "2,3", "-1,1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("feasible"), "{text}");
    assert!(text.contains("infeasible"), "{text}");
}
