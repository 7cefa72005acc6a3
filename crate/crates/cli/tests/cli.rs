use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn mdrank(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mdrank")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

const PATH_COMPLEX: &str = "# path 0 - 1 - 2\nn 1\nv 0\nv 2\nv 1\ns 0 1\ns 1 2\n";
const HOLLOW: &str = "n 1\nv 0\nv 0\nv 0\ns 0 1\ns 1 2\ns 0 2\n";
const FILLED: &str = "n 1\nv 0\nv 0\nv 0\ns 0 1 2\n";
const TWO_D: &str = "n 2\nv 0 1\nv 1 0\nv 2 2\ns 0 1\ns 1 2\n";

#[test]
fn diagram_of_path_complex() {
    let dir = TempDir::new().unwrap();
    let input = write(dir.path(), "path.txt", PATH_COMPLEX);
    let o = mdrank(&["diagram", "--input", input.to_str().unwrap(), "--k", "0"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "k,birth,death,multiplicity\n0,0,inf,1\n0,1,2,1\n");
}

#[test]
fn diagram_of_triangles_in_degree_one() {
    let dir = TempDir::new().unwrap();
    let hollow = write(dir.path(), "h.txt", HOLLOW);
    let filled = write(dir.path(), "f.txt", FILLED);
    let o = mdrank(&["diagram", "--input", hollow.to_str().unwrap(), "--k", "1"]);
    assert_eq!(stdout(&o), "k,birth,death,multiplicity\n1,0,inf,1\n");
    let out = dir.path().join("f.csv");
    let o = mdrank(&["diagram", "--input", filled.to_str().unwrap(), "--k", "1", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(fs::read_to_string(out).unwrap(), "k,birth,death,multiplicity\n");
}

#[test]
fn diagram_of_vector_input_needs_a_leaf() {
    let dir = TempDir::new().unwrap();
    let input = write(dir.path(), "two.txt", TWO_D);
    let p = input.to_str().unwrap();
    assert_eq!(mdrank(&["diagram", "--input", p, "--k", "0"]).status.code(), Some(2));
    let o = mdrank(&["diagram", "--input", p, "--k", "0", "--l", "1,1", "--b", "0,0"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("k,birth,death,multiplicity\n0,"));
    assert!(text.contains(",inf,1"));
}

#[test]
fn rank_queries_and_rejections() {
    let dir = TempDir::new().unwrap();
    let input = write(dir.path(), "path.txt", PATH_COMPLEX);
    let p = input.to_str().unwrap();
    let rank = |u: &str, v: &str| mdrank(&["rank", "--input", p, "--k", "0", "--u", u, "--v", v]);
    assert_eq!(stdout(&rank("1", "1.5")), "2\n");
    assert_eq!(stdout(&rank("1.5", "3")), "1\n");
    assert_eq!(stdout(&rank("-1", "0.5")), "0\n");
    assert_eq!(rank("2", "1").status.code(), Some(2));
    assert_eq!(rank("1", "1").status.code(), Some(2));
}

#[test]
fn dmatch_between_files() {
    let dir = TempDir::new().unwrap();
    let a = write(dir.path(), "a.csv", "k,birth,death,multiplicity\n0,0,inf,1\n0,1,2,1\n");
    let b = write(dir.path(), "b.csv", "k,birth,death,multiplicity\n0,0.25,inf,1\n");
    let c = write(dir.path(), "c.csv", "k,birth,death,multiplicity\n0,0,2,1\n");
    let d = write(dir.path(), "d.csv", "k,birth,death,multiplicity\n1,0,2,1\n");
    let run = |x: &Path, y: &Path| mdrank(&["dmatch", "--a", x.to_str().unwrap(), "--b", y.to_str().unwrap()]);
    assert_eq!(stdout(&run(&a, &b)), "0.5\n");
    assert_eq!(stdout(&run(&a, &c)), "inf\n");
    assert_eq!(run(&c, &d).status.code(), Some(2));
}

#[test]
fn malformed_inputs_exit_two() {
    let dir = TempDir::new().unwrap();
    let bad = write(dir.path(), "bad.txt", "v 0\nn 1\n");
    let dangling = write(dir.path(), "dangling.txt", "n 1\nv 0\ns 0 4\n");
    let bad_csv = write(dir.path(), "bad.csv", "k,birth,death,multiplicity\n0,1,Infinity,1\n");
    for f in [&bad, &dangling] {
        assert_eq!(mdrank(&["diagram", "--input", f.to_str().unwrap(), "--k", "0"]).status.code(), Some(2));
    }
    let o = mdrank(&["dmatch", "--a", bad_csv.to_str().unwrap(), "--b", bad_csv.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(mdrank(&["diagram", "--k", "0"]).status.code(), Some(2));
    assert_eq!(mdrank(&["diagram", "--input", "/nonexistent/file", "--k", "0"]).status.code(), Some(2));
}

#[test]
fn multidimensional_estimate_and_report() {
    let dir = TempDir::new().unwrap();
    let a = write(dir.path(), "a.txt", TWO_D);
    let shifted = write(dir.path(), "b.txt", "n 2\nv 0.5 1.5\nv 1.5 0.5\nv 2.5 2.5\ns 0 1\ns 1 2\n");
    let other = write(dir.path(), "c.txt", "n 2\nv 0 1\nv 1 0\nv 2 2\ns 0 2\n");
    let report = dir.path().join("report.csv");
    let (pa, pb) = (a.to_str().unwrap(), shifted.to_str().unwrap());

    let o = mdrank(&["Dmatch", "--inputA", pa, "--inputB", pa, "--k", "0"]);
    assert_eq!(stdout(&o), "0\n");

    let o = mdrank(&[
        "Dmatch", "--inputA", pa, "--inputB", pb, "--k", "0", "--angles", "8", "--offsets", "5", "--report",
        report.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let est: f64 = stdout(&o).trim().parse().unwrap();
    assert!(est <= 0.5 + 1e-9, "{est}");
    assert!(est > 0.0);
    let rows = fs::read_to_string(&report).unwrap();
    assert!(rows.starts_with("l1,l2,b1,b2,min_l,leaf_dmatch,weighted\n"));
    assert_eq!(rows.lines().count(), 1 + 8 * 5);

    let o = mdrank(&["dmatch-multi", "--input-a", pa, "--input-b", other.to_str().unwrap(), "--k", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn single_vertex_estimate_equals_shift() {
    let dir = TempDir::new().unwrap();
    let a = write(dir.path(), "a.txt", "n 2\nv 0 0\n");
    let b = write(dir.path(), "b.txt", "n 2\nv 0.125 0.125\n");
    let o = mdrank(&["Dmatch", "--inputA", a.to_str().unwrap(), "--inputB", b.to_str().unwrap(), "--k", "0"]);
    let est: f64 = stdout(&o).trim().parse().unwrap();
    assert!((est - 0.125).abs() <= 1e-9, "{est}");
}

#[test]
fn stability_harness_passes_and_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let input = write(dir.path(), "path.txt", PATH_COMPLEX);
    let p = input.to_str().unwrap();
    let args = ["stability", "--input", p, "--k", "0", "--delta", "0.1", "--trials", "100", "--seed", "11"];
    let first = mdrank(&args);
    let second = mdrank(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    let text = stdout(&first);
    assert!(text.contains("rng=ChaCha8Rng"));
    assert!(text.contains("# 100/100 trials within bound"));
    assert_eq!(text.lines().filter(|l| l.ends_with(",pass")).count(), 100);

    let zero = mdrank(&["stability", "--input", p, "--k", "0", "--delta", "0", "--trials", "3"]);
    assert!(stdout(&zero).contains("0,0,0,pass"));

    let two = write(dir.path(), "two.txt", TWO_D);
    let o = mdrank(&[
        "stability", "--input", two.to_str().unwrap(), "--k", "0", "--delta", "0.2", "--trials", "25", "--mode", "multi",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("# 25/25 trials within bound"));
}

#[test]
fn grid_export() {
    let dir = TempDir::new().unwrap();
    let input = write(dir.path(), "path.txt", PATH_COMPLEX);
    let o = mdrank(&["grid", "--input", input.to_str().unwrap(), "--k", "0", "--resolution", "3"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("k,u,v,rank\n"));
    assert!(text.lines().any(|l| l == "0,1,1.5,2"));
    assert_eq!(mdrank(&["grid", "--input", input.to_str().unwrap(), "--k", "0", "--resolution", "1"]).status.code(), Some(2));
}
