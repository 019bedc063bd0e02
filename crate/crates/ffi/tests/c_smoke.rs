//! Builds a small C program against `include/nfl.h` and the static library.

use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "nfl.h"

int main(void) {
    NflShape *shape = NULL;
    if (nfl_shape_new(1, 1, 1, 1, &shape) != NFL_STATUS_OK) return 10;
    size_t m_star = 0;
    if (nfl_count_classes(shape, &m_star) != NFL_STATUS_OK || m_star != 9) return 11;

    int64_t num[2] = {16, 9}, den[2] = {25, 25};
    NflState *state = NULL;
    if (nfl_state_from_ratios(num, den, 2, &state) != NFL_STATUS_OK) return 12;

    NflPartition *part = NULL;
    if (nfl_partition_new(state, shape, 0, 0, 1e-9, &part) != NFL_STATUS_OK) return 13;
    size_t m = 0;
    nfl_partition_class_count(part, &m);
    double avg = 0.0;
    if (nfl_partition_aggregate_cost(part, NFL_COST_MODEL_TRANSPOSITIONS, NFL_AGGREGATOR_AVERAGE, 0.0, &avg) != NFL_STATUS_OK) return 14;

    NflShape *bad = NULL;
    if (nfl_shape_new(1, 1, 1, 0, &bad) != NFL_STATUS_SHAPE || bad != NULL) return 15;
    if (nfl_last_error() == NULL || strlen(nfl_last_error()) == 0) return 16;

    char *count = NULL;
    nfl_stars_and_bars_count(2, &count);
    printf("m=%zu avg=%.1f sb=%s\n", m, avg, count);
    nfl_string_free(count);
    nfl_partition_free(part);
    nfl_state_free(state);
    nfl_shape_free(shape);
    return 0;
}
"#;

fn target_dir() -> PathBuf {
    // target/<profile>/deps/c_smoke-xxxx -> target/<profile>
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn c_program_links_and_runs() {
    let lib = target_dir().join("libnfl_ffi.a");
    if !lib.exists() {
        eprintln!("skipping: {} not built", lib.display());
        return;
    }
    if Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler");
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    let exe = dir.path().join("smoke");
    std::fs::write(&src, PROGRAM).unwrap();
    let include = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include");
    let status = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-o"])
        .arg(&exe)
        .arg(&src)
        .arg("-I")
        .arg(&include)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .status()
        .unwrap();
    assert!(status.success(), "C compilation failed");
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status.code());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "m=9 avg=2.0 sb=35");
}
