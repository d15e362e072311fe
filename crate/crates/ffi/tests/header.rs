//! Checks the generated C header.

use std::path::PathBuf;
use std::process::Command;

fn header_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include").join("ctoqw.h")
}

const EXPORTS: &[&str] = &[
    "ctoqw_version",
    "ctoqw_last_error_message",
    "ctoqw_graph_generate",
    "ctoqw_graph_from_edges",
    "ctoqw_graph_parse",
    "ctoqw_graph_free",
    "ctoqw_graph_vertex_count",
    "ctoqw_graph_edge_count",
    "ctoqw_graph_classify",
    "ctoqw_commutant_dimension",
    "ctoqw_liouvillian_build",
    "ctoqw_liouvillian_free",
    "ctoqw_liouvillian_dim",
    "ctoqw_steady_state",
    "ctoqw_evolve",
    "ctoqw_ctqw_limiting_average",
];

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(header_path()).unwrap();
    for name in EXPORTS {
        assert!(header.contains(&format!("{name}(")), "missing {name}");
    }
    for ty in ["typedef struct CtoqwGraph CtoqwGraph;", "typedef struct CtoqwLiouvillian CtoqwLiouvillian;"] {
        assert!(header.contains(ty), "missing opaque {ty}");
    }
    assert!(header.contains("CTOQW_STATUS_OK = 0"));
    assert!(header.contains("CTOQW_STATUS_PANIC = 6"));
}

#[test]
fn header_compiles_as_c() {
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if Command::new(&cc).arg("--version").output().is_err() {
        eprintln!("no C compiler found; skipping");
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("use.c");
    std::fs::write(
        &src,
        r#"#include "ctoqw.h"
int run(void) {
    CtoqwGraph *g = NULL;
    CtoqwLiouvillian *l = NULL;
    CtoqwSteadySummary s;
    double re[9], im[9];
    if (ctoqw_graph_generate(CTOQW_FAMILY_PATH, 3, &g) != CTOQW_STATUS_OK) return 1;
    if (ctoqw_liouvillian_build(g, &l) != CTOQW_STATUS_OK) return 2;
    if (ctoqw_steady_state(l, re, im, 9, &s) != CTOQW_STATUS_OK) return 3;
    ctoqw_liouvillian_free(l);
    ctoqw_graph_free(g);
    return s.unique ? 0 : 4;
}
"#,
    )
    .unwrap();
    let out = Command::new(&cc)
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(header_path().parent().unwrap())
        .arg(&src)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
