use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use callnet_testkit::{jar_bytes, sample_jar_entries, SAMPLE_GEXF, SAMPLE_RELATIONS_CSV};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn callnet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_callnet"))
        .args(args)
        .output()
        .expect("run callnet")
}

fn ok(args: &[&str]) -> Output {
    let out = callnet(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn sample_jar(dir: &Path) -> PathBuf {
    let path = dir.join("sample.jar");
    fs::write(&path, jar_bytes(&sample_jar_entries())).unwrap();
    path
}

/// Scale-free-ish random graph as an edge list, big enough to exercise
/// every analysis stage.
fn random_edge_list(dir: &Path, n: usize, m: usize, seed: u64) -> PathBuf {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut text = String::new();
    for _ in 0..m {
        let u = rng.gen_range(0..n);
        let v = (rng.gen_range(0..n) * rng.gen_range(1..n)) / n;
        text.push_str(&format!("p.C{}::m{u} p.C{}\n", u % 37, v % 37));
    }
    let path = dir.join("random.edges");
    fs::write(&path, text).unwrap();
    path
}

#[test]
fn extract_and_build_match_golden_files() {
    let dir = tempfile::tempdir().unwrap();
    let jar = sample_jar(dir.path());
    let table = dir.path().join("sample.csv");
    let gexf = dir.path().join("sample.gexf");
    let out = ok(&["extract", s(&jar), "-o", s(&table)]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("0 skipped entries"));
    assert_eq!(fs::read_to_string(&table).unwrap(), SAMPLE_RELATIONS_CSV);
    ok(&["build", s(&table), "--prefix", "sample", "-o", s(&gexf)]);
    assert_eq!(fs::read_to_string(&gexf).unwrap(), SAMPLE_GEXF);
}

#[test]
fn stdout_when_no_output_path() {
    let dir = tempfile::tempdir().unwrap();
    let jar = sample_jar(dir.path());
    let out = ok(&["extract", s(&jar)]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), SAMPLE_RELATIONS_CSV);
}

#[test]
fn tsv_table_builds_same_graph() {
    let dir = tempfile::tempdir().unwrap();
    let jar = sample_jar(dir.path());
    let table = dir.path().join("sample.tsv");
    ok(&["extract", s(&jar), "-o", s(&table)]);
    assert!(fs::read_to_string(&table).unwrap().contains('\t'));
    let out = ok(&["build", s(&table), "--prefix", "sample"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), SAMPLE_GEXF);
}

#[test]
fn exit_codes() {
    let missing = callnet(&["extract", "/nonexistent/app.jar"]);
    assert_eq!(missing.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&missing.stderr).contains("/nonexistent/app.jar"));
    assert_eq!(
        callnet(&["analyze", "x.gexf", "--bogus"]).status.code(),
        Some(1)
    );
    assert_eq!(callnet(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(
        callnet(&["--threads", "0", "report", "r.json"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(callnet(&["--help"]).status.code(), Some(0));
    assert_eq!(callnet(&["--version"]).status.code(), Some(0));
}

#[test]
fn corrupt_entry_strict_and_tolerant() {
    let dir = tempfile::tempdir().unwrap();
    let mut entries = sample_jar_entries();
    entries.push((
        "broken/Bad.class".into(),
        vec![0xCA, 0xFE, 0xBA, 0xBE, 0, 0],
    ));
    let jar = dir.path().join("bad.jar");
    fs::write(&jar, jar_bytes(&entries)).unwrap();
    let strict = callnet(&["extract", s(&jar)]);
    assert_eq!(strict.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&strict.stderr).contains("broken/Bad.class"));
    let tolerant = ok(&["extract", s(&jar), "--tolerant"]);
    assert!(String::from_utf8_lossy(&tolerant.stderr).contains("1 skipped entries"));
    assert_eq!(
        String::from_utf8(tolerant.stdout).unwrap(),
        SAMPLE_RELATIONS_CSV
    );
}

#[test]
fn empty_table_gives_empty_gexf() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("empty.csv");
    fs::write(&table, "caller_kind,caller,callee_kind,callee\n").unwrap();
    let out = ok(&["build", s(&table)]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("<nodes>") && text.contains("</gexf>"));
    assert!(!text.contains("<node "));
}

#[test]
fn malformed_table_is_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("bad.csv");
    fs::write(
        &table,
        "caller_kind,caller,callee_kind,callee\nX,a.B::c,M,d.E::f\n",
    )
    .unwrap();
    assert_eq!(callnet(&["build", s(&table)]).status.code(), Some(2));
}

#[test]
fn analyze_report_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let graph = random_edge_list(dir.path(), 400, 1500, 1);
    let report = dir.path().join("report.json");
    let plots = dir.path().join("plots");
    let partition = dir.path().join("partition.csv");
    ok(&[
        "analyze",
        s(&graph),
        "--input-format",
        "edgelist",
        "--top",
        "7",
        "-o",
        s(&report),
        "--plot-dir",
        s(&plots),
        "--partition-out",
        s(&partition),
    ]);
    for kind in ["total", "in", "out"] {
        assert!(
            plots.join(format!("degree_histogram_{kind}.csv")).exists(),
            "{kind}"
        );
    }
    assert!(fs::read_to_string(&partition)
        .unwrap()
        .starts_with("vertex,community\n"));

    let csv = String::from_utf8(ok(&["report", s(&report), "--format", "csv"]).stdout).unwrap();
    assert_eq!(csv.lines().count(), 1 + 7);
    assert!(csv.starts_with("rank,betweenness,"));

    let table = String::from_utf8(ok(&["report", s(&report)]).stdout).unwrap();
    assert!(table.contains("Modularity") && table.contains("Top 7 by PageRank"));

    // json re-render is byte-identical to the analyzer's output
    let json = ok(&["report", s(&report), "--format", "json"]).stdout;
    assert_eq!(json, fs::read(&report).unwrap());
}

#[test]
fn report_independent_of_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let graph = random_edge_list(dir.path(), 300, 1200, 2);
    let run = |threads: &str| {
        ok(&[
            "--threads",
            threads,
            "analyze",
            s(&graph),
            "--input-format",
            "edgelist",
            "--seed",
            "3",
        ])
        .stdout
    };
    let one = run("1");
    assert_eq!(one, run("4"));
    assert_eq!(one, run("3"));
}

#[test]
fn skipped_stages_are_recorded() {
    let dir = tempfile::tempdir().unwrap();
    let graph = random_edge_list(dir.path(), 100, 300, 4);
    let out = ok(&[
        "analyze",
        s(&graph),
        "--input-format",
        "edgelist",
        "--skip",
        "betweenness",
        "--skip",
        "small-world",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"incomplete\""));
    assert!(text.contains("\"small-world\""));
    assert!(String::from_utf8_lossy(&out.stderr).contains("report incomplete"));
    assert!(!text.contains("generated_at"));
}

#[test]
fn report_rejects_garbage_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    fs::write(&path, "{not json").unwrap();
    assert_eq!(callnet(&["report", s(&path)]).status.code(), Some(2));
}
