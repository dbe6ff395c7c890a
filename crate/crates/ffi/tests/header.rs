//! The generated header must compile as C and C++.

use std::path::Path;
use std::process::Command;

fn compile(compiler: &str, extra: &[&str]) {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let status = match Command::new(compiler)
        .args(extra)
        .arg("-fsyntax-only")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(dir.join("include"))
        .arg(dir.join("tests/smoke.c"))
        .status()
    {
        Ok(s) => s,
        Err(_) => {
            eprintln!("{compiler} not available, skipping");
            return;
        }
    };
    assert!(status.success(), "{compiler} rejected include/quadcone.h");
}

#[test]
fn header_compiles_as_c() {
    compile("cc", &["-std=c99"]);
}

#[test]
fn header_compiles_as_cxx() {
    compile("c++", &["-x", "c++"]);
}
