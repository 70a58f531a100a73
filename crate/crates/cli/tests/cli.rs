use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn graphrep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_graphrep"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn figure_certifies_the_loop_decrease_and_writes_a_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("l.csv");
    let o = graphrep(&[
        "figure",
        "--model",
        "l",
        "--n",
        "18",
        "--m",
        "2",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(
        o.status.code(),
        Some(2),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.split("\r\n").filter(|l| !l.is_empty()).collect();
    assert_eq!(lines[0], "x_num,x_den,x_decimal,value_decimal,value_exact");
    assert_eq!(lines.len(), 64);
    assert!(lines[1].starts_with("1,64,1.5625"));
    let side = read_json(&dir.path().join("l.csv.json"));
    assert_eq!(side["certified_decrease"]["method"], "exact");
    let manifest = read_json(&dir.path().join("l.csv.manifest.json"));
    assert_eq!(manifest["command"], "figure");
    assert_eq!(manifest["exit_code"], 2);
    let digests = manifest["outputs"].as_object().unwrap();
    assert_eq!(digests.len(), 2);
    assert!(digests
        .values()
        .all(|d| d.as_str().unwrap().starts_with("sha256:")));
}

#[test]
fn figure_on_a_trivial_grid_has_one_row_and_no_pair() {
    let o = graphrep(&[
        "figure", "--model", "l", "--n", "1", "--m", "2", "--grid", "1/4",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 2);
    assert!(out.lines().nth(1).unwrap().starts_with("1,4,"));
}

#[test]
fn figure_rejects_bad_input() {
    assert_eq!(
        graphrep(&["figure", "--model", "q", "--n", "2", "--m", "2"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        graphrep(&["figure", "--model", "l", "--n", "1", "--m", "1"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn single_current_figure_certifies_with_intervals() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("p.csv");
    let o = graphrep(&[
        "figure",
        "--model",
        "P",
        "--n",
        "2000",
        "--m",
        "300",
        "--grid-steps",
        "2048",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    let side = read_json(&dir.path().join("p.csv.json"));
    assert_eq!(side["certified_decrease"]["method"], "interval");
    assert_eq!(side["certified_decrease"]["x2"], "2047/2048");
}

#[test]
fn table_overview_is_consistent() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("overview.json");
    let o = graphrep(&["table-overview", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let report = read_json(&out);
    let cells = report["cells"].as_array().unwrap();
    assert_eq!(cells.len(), 24);
    let find = |model: &str, prop: &str| {
        cells
            .iter()
            .find(|c| c["model"] == model && c["property"] == prop)
            .unwrap()["status"]
            .clone()
    };
    assert_eq!(find("loop", "SING"), "CERTIFIED-FALSE");
    assert_eq!(find("double-current", "SING"), "SCAN-CLEAN");
    assert_eq!(find("double-current", "FKG"), "OPEN");
}

#[test]
fn verify_appendix_tables_passes() {
    let o = graphrep(&["verify", "appendix-tables"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("0 failed"));
}

#[test]
fn verify_rejects_unknown_suites() {
    assert_eq!(graphrep(&["verify", "nope"]).status.code(), Some(1));
}

#[test]
fn prob_is_exact() {
    let o = graphrep(&[
        "prob",
        "--model",
        "loop",
        "--family",
        "theta",
        "--segments",
        "1,1,1",
        "--x",
        "1/2",
        "--event",
        "edge:0",
    ]);
    assert_eq!(o.status.code(), Some(0));
    // Z = 1 + 3x^2 and edge 0 lies in two of the three 2-cycles
    assert!(stdout(&o).contains("\t2/7\t"));
}

#[test]
fn prob_reads_a_json_graph() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.json");
    std::fs::write(
        &path,
        r#"{"vertices": 2, "edges": [[0,1]], "marks": {"a": 0, "b": 1}}"#,
    )
    .unwrap();
    let o = graphrep(&[
        "prob",
        "--model",
        "random-cluster",
        "--graph",
        path.to_str().unwrap(),
        "--x",
        "1/3",
        "--event",
        "connect:a,b",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("\t1/3\t"));
}

#[test]
fn single_current_needs_a_pythagorean_parameter() {
    let base = [
        "prob",
        "--model",
        "single-current",
        "--family",
        "theta",
        "--segments",
        "1,1,1",
        "--event",
        "edge:0",
    ];
    let mut bad = base.to_vec();
    bad.extend(["--x", "1/2"]);
    assert_eq!(graphrep(&bad).status.code(), Some(1));
    let mut good = base.to_vec();
    good.extend(["--t", "1/2"]);
    assert_eq!(graphrep(&good).status.code(), Some(0));
}

#[test]
fn fkg_finds_the_loop_counterexample() {
    let o = graphrep(&[
        "fkg",
        "--model",
        "loop",
        "--family",
        "theta",
        "--segments",
        "2,2,2",
        "--x",
        "1/10",
        "--event",
        "allopen:0,1,2,3",
        "--event",
        "allopen:2,3,4,5",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("gap -1/100060009"));
}

#[test]
fn fkg_is_clean_for_the_random_cluster() {
    let o = graphrep(&[
        "fkg",
        "--model",
        "random-cluster",
        "--family",
        "theta",
        "--segments",
        "2,2,2",
        "--x",
        "1/2",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("lattice condition: holds"));
}

#[test]
fn scan_detects_loss_of_domination() {
    let o = graphrep(&[
        "scan",
        "--model",
        "loop",
        "--family",
        "counter",
        "--n",
        "8",
        "--m",
        "2",
        "--grid",
        "7/8,57/64",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let o = graphrep(&[
        "scan",
        "--model",
        "random-cluster",
        "--family",
        "theta",
        "--segments",
        "1,2,2",
        "--grid-steps",
        "8",
    ]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn samples_are_reproducible() {
    let args = [
        "sample",
        "--model",
        "uniform-even:double-current",
        "--family",
        "theta",
        "--segments",
        "1,1,1",
        "--x",
        "1/2",
        "--seed",
        "7",
        "--sweeps",
        "50",
    ];
    let (a, b) = (graphrep(&args), graphrep(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let out = stdout(&a);
    assert!(out.contains("# rng: ChaCha8Rng"));
    assert_eq!(out.lines().filter(|l| !l.starts_with('#')).count(), 50);
}

#[test]
fn manifest_goes_where_asked() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("run.json");
    let o = graphrep(&[
        "--manifest",
        m.to_str().unwrap(),
        "prob",
        "--model",
        "bernoulli",
        "--family",
        "theta",
        "--segments",
        "1,1",
        "--x",
        "1/2",
        "--event",
        "edge:1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let manifest = read_json(&m);
    assert_eq!(manifest["parameters"]["model"], "bernoulli");
    assert_eq!(manifest["parameters"]["x"], "1/2");
}
