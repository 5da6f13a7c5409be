use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn lincom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lincom")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Summary fields: n, m, k, Q, time_ms.
fn detect(input: &Path, out: &Path, extra: &[&str]) -> Vec<String> {
    let mut args = vec!["detect", "--input", path_str(input), "--method", "ins", "--output", path_str(out)];
    args.extend_from_slice(extra);
    let o = lincom(&args);
    assert!(o.status.success(), "{}", stderr(&o));
    stdout(&o).trim().split('\t').map(String::from).collect()
}

#[test]
fn detect_karate() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("karate.cover");
    let fields = detect(&data("karate.txt"), &out, &[]);
    assert_eq!(&fields[..3], ["34", "78", "2"]);
    let q: f64 = fields[3].parse().unwrap();
    assert!((0.357..=0.447).contains(&q));

    let cover = std::fs::read_to_string(&out).unwrap();
    let labels: Vec<u32> = cover.lines().map(|l| l.split('\t').next().unwrap().parse().unwrap()).collect();
    assert_eq!(labels, (1..=34).collect::<Vec<_>>());
}

#[test]
fn skip_modmax_is_no_better() {
    let dir = TempDir::new().unwrap();
    for name in ["karate.txt", "lesmis.txt"] {
        let full = detect(&data(name), &dir.path().join("full"), &[]);
        let skip = detect(&data(name), &dir.path().join("skip"), &["--skip-modmax"]);
        let (qf, qs): (f64, f64) = (full[3].parse().unwrap(), skip[3].parse().unwrap());
        let (kf, ks): (usize, usize) = (full[2].parse().unwrap(), skip[2].parse().unwrap());
        assert!(qs <= qf && ks >= kf, "{name}: {skip:?} vs {full:?}");
    }
}

#[test]
fn explicit_start_node() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("c");
    let fields = detect(&data("example13.txt"), &out, &["--start", "N", "--threshold", "0.66"]);
    assert_eq!(&fields[..3], ["13", "20", "3"]);
}

#[test]
fn empty_graph() {
    let dir = TempDir::new().unwrap();
    let input = dir.path().join("empty.txt");
    std::fs::write(&input, "# nothing here\n").unwrap();
    let fields = detect(&input, &dir.path().join("c"), &[]);
    assert_eq!(&fields[..4], ["0", "0", "0", "0.000"]);
}

#[test]
fn input_errors_exit_2_without_output() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("c");
    let missing = dir.path().join("missing.txt");
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "a b\nc\n").unwrap();
    let karate = data("karate.txt");
    let cases: Vec<Vec<&str>> = vec![
        vec!["--input", path_str(&missing)],
        vec!["--input", path_str(&bad)],
        vec!["--input", path_str(&karate), "--threshold", "1.5"],
        vec!["--input", path_str(&karate), "--start", "99"],
    ];
    for case in cases {
        let mut args = vec!["detect", "--output", path_str(&out)];
        args.extend(case.iter());
        let o = lincom(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(stderr(&o).contains("error"));
        assert!(!out.exists());
    }
    let o = lincom(&["detect", "--input", path_str(&karate), "--method", "louvain", "--output", path_str(&out)]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn eval_round_trip() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("c");
    let fields = detect(&data("karate.txt"), &out, &[]);
    let o = lincom(&["eval", "--input", path_str(&data("karate.txt")), "--cover", path_str(&out)]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with(&format!("Q\t{}\nk\t2\n", fields[3])), "{text}");
    assert!(text.contains("community\tsize\tconductance\n"));
    assert_eq!(text.lines().count(), 6);
}

#[test]
fn eval_rejects_bad_covers() {
    let dir = TempDir::new().unwrap();
    let input = data("example13.txt");
    let partial = dir.path().join("partial");
    std::fs::write(&partial, "A\t0\nB\t0\n").unwrap();
    let o = lincom(&["eval", "--input", path_str(&input), "--cover", path_str(&partial)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("missing 11 node(s)"));
    assert!(stderr(&o).contains("N"));

    let unknown = dir.path().join("unknown");
    std::fs::write(&unknown, "Z\t0\n").unwrap();
    let o = lincom(&["eval", "--input", path_str(&input), "--cover", path_str(&unknown)]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn eval_singletons_not_positive() {
    let dir = TempDir::new().unwrap();
    let cover = dir.path().join("singletons");
    let body: String = (1..=34).map(|i| format!("{i}\t{i}\n")).collect();
    std::fs::write(&cover, body).unwrap();
    let o = lincom(&["eval", "--input", path_str(&data("karate.txt")), "--cover", path_str(&cover)]);
    let q: f64 = stdout(&o).lines().next().unwrap().split('\t').nth(1).unwrap().parse().unwrap();
    assert!(q <= 0.0);
}

#[test]
fn bench_csv() {
    let o = lincom(&[
        "bench", "--input", path_str(&data("lesmis.txt")), "--fractions", "0.5,1.0", "--repeats", "3", "--seed", "4",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("dataset,fraction,method,phase,run,time_ms,Q,k"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 6);
    // same sample for every repeat of a fraction
    for chunk in rows.chunks(3) {
        assert!(chunk.iter().all(|r| r[6] == chunk[0][6] && r[7] == chunk[0][7]));
        assert_eq!(chunk.iter().map(|r| r[4]).collect::<Vec<_>>(), ["0", "1", "2"]);
    }
    assert_eq!(&rows[0][..4], ["lesmis", "0.5", "ins", "traversal"]);
    assert!(stderr(&o).contains("r2\t"));

    let again = lincom(&[
        "bench", "--input", path_str(&data("lesmis.txt")), "--fractions", "0.5,1.0", "--repeats", "3", "--seed", "4",
    ]);
    let strip = |t: &str| -> Vec<String> {
        t.lines().map(|l| l.split(',').enumerate().filter(|(i, _)| *i != 5).map(|(_, f)| f).collect::<Vec<_>>().join(",")).collect()
    };
    assert_eq!(strip(&text), strip(&stdout(&again)));
}

#[test]
fn bench_rejects_single_fraction() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("bench.csv");
    let o = lincom(&["bench", "--input", path_str(&data("karate.txt")), "--fractions", "1.0", "--output", path_str(&out)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("two distinct fractions"));
    assert!(!out.exists());
}

#[test]
fn threshold_sweep_csv() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("sweep.csv");
    let o = lincom(&["sweep-threshold", "--input", path_str(&data("karate.txt")), "--from", "0.4", "--to", "0.85", "--step", "0.05", "--output", path_str(&out)]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "r,Q,k");
    assert_eq!(lines.len(), 11);
    assert_eq!(lines[1], "0.4,0.000000,1");
    assert!(lines[9].starts_with("0.8,"));
    let o2 = lincom(&["sweep-threshold", "--input", path_str(&data("karate.txt"))]);
    assert_eq!(stdout(&o2), text);
}

#[test]
fn start_sweep_clamps_and_summarizes() {
    let o = lincom(&["sweep-start", "--input", path_str(&data("karate.txt")), "--sample", "1000", "--threshold", "0.75"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("start,degree,Q,k"));
    assert_eq!(text.lines().count(), 35);
    assert!(stderr(&o).contains("summary\tmean_Q\t"));

    let o = lincom(&["sweep-start", "--input", path_str(&data("karate.txt")), "--sample", "zero"]);
    assert_eq!(o.status.code(), Some(2));
}
