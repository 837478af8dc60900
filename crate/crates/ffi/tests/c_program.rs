//! Compiles a small C program against the generated header and static library.

use std::path::{Path, PathBuf};
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "flatsol.h"

int main(void) {
    FlatsolEndo *endo = NULL;
    FlatsolReport *report = NULL;
    char *group = NULL;
    if (flatsol_endo_builtin("o36x125", &endo) != FLATSOL_STATUS_OK) return 1;
    if (flatsol_report_compute(endo, &report) != FLATSOL_STATUS_OK) return 2;
    if (flatsol_report_graded(report, "unstable_homology", 1, &group) != FLATSOL_STATUS_OK) return 3;
    printf("%s\n", group);
    flatsol_string_free(group);
    if (flatsol_endo_builtin("nothing", &endo) != FLATSOL_STATUS_UNKNOWN_NAME) return 4;
    printf("%s\n", flatsol_last_error());
    flatsol_report_free(report);
    flatsol_endo_free(endo);
    return 0;
}
"#;

fn target_dir() -> PathBuf {
    // target/<profile>/deps/<test binary>
    std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn c_program_links_and_runs() {
    let lib = target_dir().join("libflatsol_ffi.a");
    assert!(lib.exists(), "static library missing at {}", lib.display());
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let dir = tempfile_dir();
    let src = dir.join("main.c");
    let exe = dir.join("main");
    std::fs::write(&src, PROGRAM).unwrap();
    let status = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(&include)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .expect("a C compiler named cc");
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("Z/4 (+) Z/4"));
    assert!(lines.next().unwrap().contains("nothing"));
    let _ = std::fs::remove_dir_all(&dir);
}

fn tempfile_dir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("flatsol-ffi-c-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
