use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_contactlab"));
    c.env_remove("CONTACTLAB_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn generate(dir: &Path, name: &str, args: &[&str]) -> String {
    let path = dir.join(name);
    let path_s = path.to_str().unwrap().to_string();
    let mut all = vec!["generate"];
    all.extend_from_slice(args);
    all.extend_from_slice(&["-o", &path_s]);
    let o = run(&all);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    path_s
}

#[test]
fn generate_validate_stats() {
    let dir = tempfile::tempdir().unwrap();
    let fig6 = generate(dir.path(), "fig6.json", &["--type", "fpb-extremal", "--n", "100", "--k", "10"]);
    let o = run(&["validate", &fig6]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["stats", "--crossing", &fig6]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["crossing"]["c"], 1344);
    assert_eq!(v["k_effective"], 10);
    // fig6 is not simple.
    let o = run(&["validate", "--simple", &fig6]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn color_point_clique() {
    let dir = tempfile::tempdir().unwrap();
    let f = generate(dir.path(), "clique.json", &["--type", "point-clique", "--k", "490"]);
    let o = run(&["color", "--mode", "kplus1", &f]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["palette_size"], 491);
    assert_eq!(v["certificate"]["proper"], true);
    let o = run(&["pipeline", &f]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["coloring"]["palette_size"], 491);
    assert_eq!(v["discharge"]["initial_total"], "-12");
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn discharge_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let f = generate(dir.path(), "quad.json", &["--type", "bad-quad", "--k", "490"]);
    let csv = dir.path().join("charges.csv");
    let o = run(&["discharge", &f, "--csv", csv.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(csv).unwrap();
    assert!(text.starts_with("site,id,kind,degree,initial,received,given,final"));
    // 980 disks, 982 contact vertices, 980 faces.
    assert_eq!(text.lines().count(), 1 + 980 + 982 + 980);
}

#[test]
fn input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ nope").unwrap();
    assert_eq!(run(&["validate", bad.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["pipeline", bad.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["stats", "/nonexistent/file.json"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn invalid_family_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.json");
    std::fs::write(
        &path,
        r#"{"kind": "curves", "k": 2, "curves": ["a", "b", "c"],
            "contacts": [{"id": "p", "members": ["a", "b", "c"]}]}"#,
    )
    .unwrap();
    assert_eq!(run(&["validate", path.to_str().unwrap()]).status.code(), Some(1));
    assert_eq!(run(&["pipeline", path.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn bounds_table() {
    let o = run(&["bounds", "--alpha", "0.5", "--k", "100"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let line = text.lines().find(|l| l.starts_with("average-distance-beta-k")).unwrap();
    let value: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
    assert!((value - 1022.0).abs() < 1.0);
}

#[test]
fn cyclepack_csv_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.json");
    std::fs::write(
        &path,
        r#"{"vertices": ["a", "b", "c"],
            "arcs": [["a", "b"], ["b", "a"], ["b", "c"], ["c", "b"], ["c", "a"], ["a", "c"]]}"#,
    )
    .unwrap();
    let o = run(&["cyclepack", path.to_str().unwrap()]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["ratio"]["nu_star"], "3/2");
    assert_eq!(v["packing"]["nu"], 1);
    let o = run(&["cyclepack", path.to_str().unwrap(), "--report", "csv"]);
    assert!(stdout(&o).contains("# nu=1 nu_star=3/2 ratio=3/2"));
    let o = run(&["cyclepack", path.to_str().unwrap(), "--limit", "2"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn seeded_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = generate(dir.path(), "a.json", &["--type", "random", "--n", "60", "--k", "8", "--seed", "5"]);
    let b = generate(dir.path(), "b.json", &["--type", "random", "--n", "60", "--k", "8", "--seed", "5"]);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let s1 = run(&["sparsify", &a, "--trials", "2000", "--seed", "9"]);
    let s2 = run(&["sparsify", &a, "--trials", "2000", "--seed", "9"]);
    assert!(s1.status.success());
    assert_eq!(s1.stdout, s2.stdout);
    let env = bin()
        .args(["sparsify", &a, "--trials", "2000"])
        .env("CONTACTLAB_SEED", "9")
        .output()
        .unwrap();
    assert_eq!(env.stdout, s1.stdout);
}
