use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;
use zps_parity::textfmt::format_matrix;
use zps_parity::{parity_check_iterative, standard_form, textfmt::parse_matrix};

const Z4_EXAMPLE: &str = "2 2 2 3\n1 1 2\n0 2 2\n";

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_zps-parity"))
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn std_form_of_z4_example() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.txt", Z4_EXAMPLE);
    let out = run(&["std-form", p(&g)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out),
        "type: 3 1 1\nperm: 1 2 3\n2 2 2 3\n1 1 2\n0 2 2\n"
    );
}

#[test]
fn std_form_of_empty_matrix() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.txt", "3 2 0 4\n");
    let out = run(&["std-form", p(&g)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("type: 4 0 0\n"));
}

#[test]
fn malformed_entry_is_a_parse_error() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.txt", "2 3 1 3\n1 9 0\n");
    let out = run(&["std-form", p(&g)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(
        stderr(&out).contains("line 2, column 3"),
        "{}",
        stderr(&out)
    );
}

#[test]
fn std_form_writes_output_file() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.txt", Z4_EXAMPLE);
    let target = dir.path().join("sf.txt");
    let out = run(&["std-form", p(&g), "-o", p(&target)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(fs::read_to_string(target)
        .unwrap()
        .starts_with("type: 3 1 1"));
}

#[test]
fn methods_give_byte_identical_output() {
    let dir = TempDir::new().unwrap();
    let g = write(
        &dir,
        "g.txt",
        "3 3 4 7\n1 4 0 2 9 13 26\n0 3 6 3 0 12 3\n0 0 9 0 18 9 0\n2 8 0 4 18 26 25\n",
    );
    let minors = dir.path().join("minors.txt");
    let iterative = dir.path().join("iterative.txt");
    for (method, target) in [("minors", &minors), ("iterative", &iterative)] {
        let out = run(&["parity-check", p(&g), "--method", method, "-o", p(target)]);
        assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
        assert!(stderr(&out).contains("big_mults="));
    }
    assert_eq!(fs::read(&minors).unwrap(), fs::read(&iterative).unwrap());
}

#[test]
fn z4_example_parity_checks() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.txt", Z4_EXAMPLE);
    let out = run(&["parity-check", p(&g), "--method", "minors"]);
    assert_eq!(stdout(&out), "2 2 2 3\n3 3 1\n2 2 0\n");

    let out = run(&["parity-check", p(&g), "--method", "bruteforce"]);
    assert_eq!(out.status.code(), Some(0));
    let dual = parse_matrix(&stdout(&out)).unwrap();
    assert_eq!(dual.nrows(), 8);
    assert!(dual.rows().any(|r| r == [3, 3, 1]));
    assert!(dual.rows().any(|r| r == [2, 2, 0]));
}

#[test]
fn s1_gives_classical_layout() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.txt", "5 1 2 4\n1 0 3 4\n0 1 2 2\n");
    let out = run(&["parity-check", p(&g), "--method", "iterative"]);
    assert_eq!(stdout(&out), "5 1 2 4\n2 3 1 0\n1 3 0 1\n");
}

#[test]
fn original_coordinates() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.txt", "2 2 2 3\n2 1 0\n0 2 2\n");
    let h = dir.path().join("h.txt");
    let out = run(&["parity-check", p(&g), "--original-coords", "-o", p(&h)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(run(&["verify", p(&g), p(&h)]).status.code(), Some(0));

    // the permuted H does not check the original code here
    let out = run(&["parity-check", p(&g), "-o", p(&h)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(run(&["verify", p(&g), p(&h)]).status.code(), Some(1));
}

#[test]
fn verify_outcomes() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.txt", Z4_EXAMPLE);
    let good = write(&dir, "h.txt", "2 2 2 3\n3 3 1\n2 2 0\n");
    let out = run(&["verify", p(&g), p(&good)]);
    assert_eq!(out.status.code(), Some(0));

    let bad = write(&dir, "bad.txt", "2 2 2 3\n3 3 1\n2 2 1\n");
    let out = run(&["verify", p(&g), p(&bad)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("[1, 2] = 2"), "{}", stdout(&out));

    let other_ring = write(&dir, "z9.txt", "3 2 1 3\n1 1 1\n");
    assert_eq!(
        run(&["verify", p(&g), p(&other_ring)]).status.code(),
        Some(2)
    );
    let short = write(&dir, "short.txt", "2 2 1 2\n1 1\n");
    assert_eq!(run(&["verify", p(&g), p(&short)]).status.code(), Some(2));
}

#[test]
fn bruteforce_budget() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.txt", "2 5 1 5\n1 0 0 0 0\n");
    let out = run(&["parity-check", p(&g), "--method", "bruteforce"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("budget"));
}

#[test]
fn std_form_round_trip() {
    let dir = TempDir::new().unwrap();
    let text = "3 2 3 6\n3 1 4 1 5 0\n0 3 6 0 3 3\n2 7 1 8 2 8\n";
    let g = write(&dir, "g.txt", text);
    let sf_path = dir.path().join("sf.txt");
    assert_eq!(
        run(&["std-form", p(&g), "-o", p(&sf_path)]).status.code(),
        Some(0)
    );
    let out = run(&["parity-check", p(&sf_path), "--method", "iterative"]);
    let library = parity_check_iterative(&standard_form(&parse_matrix(text).unwrap()));
    assert_eq!(stdout(&out), format_matrix(&library.h));

    // a carried perm line maps back to the very first coordinates
    let out = run(&["parity-check", p(&sf_path), "--original-coords"]);
    assert_eq!(stdout(&out), format_matrix(&library.h_original));
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect()
}

#[test]
fn bench_rows_and_determinism() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let args = |out: &Path| {
        vec![
            "bench".to_owned(),
            "--p".into(),
            "3".into(),
            "--s-range".into(),
            "2:6".into(),
            "--ell-range".into(),
            "2:2".into(),
            "--n-list".into(),
            "100".into(),
            "--trials".into(),
            "3".into(),
            "--seed".into(),
            "11".into(),
            "--out".into(),
            out.to_str().unwrap().to_owned(),
        ]
    };
    assert_eq!(
        bin().args(args(&a)).output().unwrap().status.code(),
        Some(0)
    );
    assert_eq!(
        bin().args(args(&b)).output().unwrap().status.code(),
        Some(0)
    );
    let ra = csv_rows(&fs::read_to_string(&a).unwrap());
    let rb = csv_rows(&fs::read_to_string(&b).unwrap());
    assert_eq!(
        ra[0].join(","),
        "method,p,s,n,ell,trial,seed,wall_ns,big_mults,big_adds,small_mults,small_adds"
    );
    assert_eq!(ra.len(), 1 + 30);
    let wall = ra[0].iter().position(|c| c == "wall_ns").unwrap();
    for (x, y) in ra.iter().zip(&rb) {
        let strip = |r: &Vec<String>| {
            let mut r = r.clone();
            r.remove(wall);
            r
        };
        assert_eq!(strip(x), strip(y));
    }
}

#[test]
fn bench_counter_mismatch_fails() {
    let out = run(&[
        "bench",
        "--p",
        "3",
        "--s-range",
        "2:3",
        "--ell-range",
        "1:1",
        "--n-list",
        "10",
        "--inject-counter-mismatch",
    ]);
    assert_eq!(out.status.code(), Some(4));
    assert!(stderr(&out).contains("closed form"));
}

#[test]
fn bench_rejects_bad_grid() {
    let out = run(&[
        "bench",
        "--p",
        "3",
        "--s-range",
        "2:3",
        "--ell-range",
        "2:2",
        "--n-list",
        "5",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&[
        "bench",
        "--p",
        "3",
        "--s-range",
        "3:2",
        "--ell-range",
        "2:2",
        "--n-list",
        "50",
    ]);
    assert_eq!(out.status.code(), Some(2));
}
