use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join(name)
}

fn run(args: &[&str]) -> Output {
    run_env(args, None)
}

fn run_env(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_qhs-lab"));
    cmd.args(args).current_dir(data(""));
    cmd.env_remove("QHS_LAB_THREADS");
    if let Some(t) = threads {
        cmd.env("QHS_LAB_THREADS", t);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn z7_is_a_qhs() {
    let o = run(&["check", "--polytope", "lobell:7", "--colouring", "data/z7.mat", "--qhs"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("verdict: QHS"));
    assert!(stdout(&o).contains("betti: 1 0 0 1"));
}

#[test]
fn headerless_matrix_needs_polytope_flag() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("z7.txt");
    let text = std::fs::read_to_string(data("data/z7.mat")).unwrap();
    let body: String =
        text.lines().filter(|l| !l.starts_with('#') && !l.starts_with("polytope:")).map(|l| format!("{l}\n")).collect();
    std::fs::write(&path, body).unwrap();
    let p = path.to_str().unwrap();
    assert_eq!(run(&["check", "--polytope", "lobell:7", "--colouring", p, "--qhs"]).status.code(), Some(0));
    let o = run(&["check", "--colouring", p]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--polytope"));
}

#[test]
fn improper_colouring_is_a_negative_verdict() {
    let o = run(&["check", "--polytope", "lobell:7", "--colouring", "data/adjacent_equal.mat"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("not proper"));
}

#[test]
fn non_qhs_fails_only_when_asked() {
    assert_eq!(run(&["check", "--colouring", "data/torus.mat"]).status.code(), Some(0));
    let o = run(&["check", "--colouring", "data/torus.mat", "--qhs"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("betti: 1 3 3 1"));
    assert_eq!(run(&["audit", "--colouring", "data/torus.mat"]).status.code(), Some(2));
}

#[test]
fn input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"name": "x", "m": 4, "vertices": [[1, 2, 3]]}"#).unwrap();
    let spec = format!("file:{}", bad.display());
    let o = run(&["symmetries", "--polytope", &spec]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("euler"), "{}", stderr(&o));
    assert_eq!(run(&["check", "--colouring", "data/missing.mat"]).status.code(), Some(2));
    assert_eq!(run(&["check", "--polytope", "cube", "--colouring", "data/z7.mat"]).status.code(), Some(2));
    assert_eq!(run(&["enumerate", "--polytope", "lobell:4", "--rank", "3"]).status.code(), Some(2));
    assert_eq!(run(&["enumerate", "--polytope", "cube", "--rank", "2"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn dodecahedron_census_has_44_rows() {
    let o = run(&["enumerate", "--polytope", "dodecahedron", "--rank", "4", "--qhs", "--classify-sym", "--out", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let mut rdr = csv::Reader::from_reader(o.stdout.as_slice());
    assert_eq!(rdr.headers().unwrap(), vec!["canonical", "group", "order", "betti"]);
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 44);
    assert_eq!(rows.iter().filter(|r| &r[1] == "trivial").count(), 25);
    assert!(rows.iter().all(|r| &r[3] == "1 0 0 1"));
    assert!(stderr(&o).contains("S3: 1"));
}

#[test]
fn min_order_filter() {
    let o = run(&["enumerate", "--polytope", "dodecahedron", "--rank", "4", "--qhs", "--min-order", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("classes: 3\n"), "{}", stdout(&o));
    let o = run(&["enumerate", "--polytope", "dodecahedron", "--rank", "4", "--qhs", "--min-order", "7"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn output_does_not_depend_on_thread_count() {
    let args = ["enumerate", "--polytope", "dodecahedron", "--rank", "4", "--qhs", "--classify-sym", "--out", "json"];
    let one = run_env(&args, Some("1"));
    let four = run_env(&args, Some("4"));
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
    let flag = run(&[
        "--threads",
        "3",
        "enumerate",
        "--polytope",
        "dodecahedron",
        "--rank",
        "4",
        "--qhs",
        "--classify-sym",
        "--out",
        "json",
    ]);
    assert_eq!(flag.stdout, one.stdout);
    assert_eq!(run_env(&args, Some("lots")).status.code(), Some(2));
}

#[test]
fn construct_z7() {
    let o = run(&[
        "construct",
        "--polytope",
        "lobell:7",
        "--symmetry",
        "(2 3 4 5 6 7 8)(9 10 11 12 13 14 15)",
        "--rank",
        "4",
        "--seed",
        "data/z7.seed",
        "--qhs",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("raw candidates: 14"));
    assert!(out.contains("classes: 1\n"));
    assert!(out.contains("\tZ7\t7\t"));
}

#[test]
fn symmetry_listing() {
    let o = run(&["symmetries", "--polytope", "dodecahedron"]);
    assert_eq!(o.status.code(), Some(0));
    let lines: Vec<String> = stdout(&o).lines().map(str::to_string).collect();
    assert_eq!(lines.len(), 120);
    assert_eq!(lines.iter().filter(|l| l.contains("\tpreserving\t")).count(), 60);
    assert_eq!(lines.iter().filter(|l| l.contains("\tantipodal\t")).count(), 1);
    let o = run(&["symmetries", "--colouring", "data/z7.mat"]);
    assert!(stdout(&o).starts_with("group: Z7 (order 7)\n"));
}

const GOLDEN: [(&str, &[&str]); 6] = [
    ("z7_check.json", &["check", "--colouring", "data/z7.mat", "--json"]),
    ("torus_check.json", &["check", "--colouring", "data/torus.mat", "--json"]),
    ("z7_audit.json", &["audit", "--colouring", "data/z7.mat", "--json"]),
    (
        "z7_construct.json",
        &[
            "construct",
            "--polytope",
            "lobell:7",
            "--symmetry",
            "face:1",
            "--rank",
            "4",
            "--seed",
            "data/z7.seed",
            "--qhs",
            "--out",
            "json",
        ],
    ),
    (
        "cube_rank4_qhs.json",
        &["enumerate", "--polytope", "cube", "--rank", "4", "--qhs", "--classify-sym", "--out", "json"],
    ),
    ("simplex3_symmetries.json", &["symmetries", "--polytope", "simplex3", "--json"]),
];

#[test]
fn golden_outputs_match_and_parse() {
    for (file, args) in GOLDEN {
        let want = std::fs::read_to_string(data("golden").join(file)).unwrap();
        let v: Value = serde_json::from_str(&want).unwrap_or_else(|e| panic!("{file}: {e}"));
        assert_eq!(v["schema"], 1, "{file}");
        assert_eq!(serde_json::to_string_pretty(&v).unwrap() + "\n", want, "{file} does not round-trip");
        let o = run(args);
        assert_eq!(stdout(&o), want, "{file} differs from current output");
    }
}

#[test]
fn golden_values() {
    let read =
        |f: &str| -> Value { serde_json::from_str(&std::fs::read_to_string(data("golden").join(f)).unwrap()).unwrap() };
    let c = read("cube_rank4_qhs.json");
    assert_eq!(c["count"], 1);
    assert_eq!(c["classes"][0]["symmetry"]["identified_name"], "S3");
    assert_eq!(c["classes"][0]["betti"], serde_json::json!([1, 0, 0, 1]));
    let z = read("z7_construct.json");
    assert_eq!(z["raw_candidates"], 14);
    assert_eq!(z["count"], 1);
    assert_eq!(read("simplex3_symmetries.json")["order"], 24);
}

#[test]
fn audit_soft_exit() {
    let o = run(&["audit", "--colouring", "data/z7.mat", "--audit-soft"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("defects: 0"));
}
