//! Compiles and runs a C program against the generated header and the
//! static library.

use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "toricproj.h"

int main(int argc, char **argv) {
    FILE *f = fopen(argv[1], "rb");
    if (!f) return 10;
    static char text[1 << 16];
    size_t n = fread(text, 1, sizeof text - 1, f);
    fclose(f);
    text[n] = 0;

    uint64_t mv = 0;
    if (tp_mixed_volume(text, 1, &mv) != TP_STATUS_OK || mv != 6) return 11;

    TpProblem *problem = NULL;
    if (tp_problem_parse(text, &problem) != TP_STATUS_OK) return 12;
    int64_t lambda[3] = {0, 0, 1};
    tp_problem_pin(problem, TP_PIN_LAMBDA, lambda, 3);
    TpResult *result = NULL;
    if (tp_project(problem, &result) != TP_STATUS_OK) return 13;
    char *out = NULL;
    if (tp_result_emit(result, false, &out) != TP_STATUS_OK) return 14;
    if (!strstr(out, "(-12*X1^3-6*X1^2+6*X1)/(4*X1^2+2*X1-1)")) return 15;
    char *report = NULL;
    if (tp_verify(text, out, &report) != TP_STATUS_OK) return 16;
    tp_string_free(report);
    tp_string_free(out);
    tp_result_free(result);
    tp_problem_free(problem);

    if (tp_problem_parse("toricproj-system 1\nn x\n", &problem) != TP_STATUS_PARSE_ERROR) return 17;
    if (!tp_last_error_message()) return 18;
    puts("ok");
    return 0;
}
"#;

#[test]
fn c_program_links_and_runs() {
    let crate_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(|d| d.parent()).unwrap().to_path_buf();
    let lib = profile_dir.join("libtoricproj_ffi.a");
    assert!(lib.exists(), "static library missing at {}", lib.display());

    let tmp = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let src = tmp.join("toricproj_smoke.c");
    let bin = tmp.join("toricproj_smoke");
    std::fs::write(&src, PROGRAM).unwrap();
    let status = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(crate_dir.join("include"))
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .expect("a C compiler named cc");
    assert!(status.success());

    let out = Command::new(&bin)
        .arg(crate_dir.join("../core/tests/data/worked.sys"))
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(String::from_utf8_lossy(&out.stdout), "ok\n");
}
