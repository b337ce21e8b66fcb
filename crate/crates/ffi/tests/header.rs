//! The generated header must be valid C and C++.

use std::path::Path;
use std::process::Command;

fn compiles(compiler: &str, lang: &str) -> Option<bool> {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/blowup8.h");
    let status = Command::new(compiler)
        .args(["-fsyntax-only", "-Wall", "-Werror", "-x", lang])
        .arg(&header)
        .status()
        .ok()?;
    Some(status.success())
}

#[test]
fn header_is_generated() {
    let text = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/blowup8.h")).unwrap();
    for name in ["b8_divisor_parse", "b8_decompose", "b8_certificate_check", "B8_NOT_IN_CONE", "typedef struct B8Divisor B8Divisor"] {
        assert!(text.contains(name), "{name} missing from header");
    }
}

#[test]
fn header_compiles() {
    match compiles("cc", "c-header") {
        Some(ok) => assert!(ok, "header rejected by the C compiler"),
        None => eprintln!("no C compiler found; skipping"),
    }
    if let Some(ok) = compiles("c++", "c++-header") {
        assert!(ok, "header rejected by the C++ compiler");
    }
}
