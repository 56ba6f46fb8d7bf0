#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use fcat_core::fixtures;

pub fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

/// Set `FCAT_BLESS=1` to rewrite the corpus and golden files.
pub fn blessing() -> bool {
    std::env::var_os("FCAT_BLESS").is_some()
}

pub fn fcat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fcat"))
        .args(args)
        .env_remove("FCAT_BUDGET_STATES")
        .output()
        .expect("fcat runs")
}

pub fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

/// Every corpus file with its expected contents, relative to the corpus root.
pub fn corpus() -> Vec<(String, String)> {
    let mut out = Vec::new();
    for (name, p) in fixtures::all() {
        out.push((format!("presentations/{name}.json"), p.to_canonical_json()));
    }
    for m in fixtures::mutation_catalogue() {
        out.push((
            format!("mutants/{}.json", m.name),
            m.apply().unwrap().to_canonical_json(),
        ));
    }
    out.push((
        "sources/walking-iso.category.json".into(),
        fixtures::walking_iso().to_canonical_json(),
    ));
    out.push((
        "sources/a-a2.two-category.json".into(),
        fixtures::two_category_a_a2().to_canonical_json(),
    ));
    out.push((
        "sources/loop.graph.json".into(),
        fixtures::loop_graph().to_canonical_json(),
    ));
    out
}

pub fn presentations() -> Vec<PathBuf> {
    let mut out: Vec<PathBuf> = ["presentations", "mutants"]
        .iter()
        .flat_map(|d| fs::read_dir(root().join(d)).unwrap())
        .map(|e| e.unwrap().path())
        .collect();
    out.sort();
    out
}

pub fn stem(p: &Path) -> String {
    let dir = p.parent().unwrap().file_name().unwrap().to_string_lossy();
    format!("{dir}/{}", p.file_stem().unwrap().to_string_lossy())
}

/// Compares `actual` with the golden file, or rewrites it when blessing.
pub fn golden(rel: &str, actual: &str) {
    let path = root().join("golden").join(rel);
    if blessing() {
        fs::create_dir_all(path.parent().unwrap()).unwrap();
        fs::write(&path, actual).unwrap();
        return;
    }
    let expected = fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden {rel}"));
    assert_eq!(expected, actual, "golden {rel} differs");
}
