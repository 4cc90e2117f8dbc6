use std::path::Path;
use std::process::{Command, Output};

fn primset(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_primset"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Data lines of the table introduced by `header`.
fn rows<'a>(text: &'a str, header: &str) -> Vec<Vec<&'a str>> {
    text.lines()
        .skip_while(|l| *l != header)
        .skip(1)
        .take_while(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| l.split(',').collect())
        .collect()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.display().to_string()
}

#[test]
fn sigma_rows_and_header() {
    let o = primset(&["sigma", "--x", "1e6", "--jmax", "3"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("# config: {\"command\":\"sigma\",\"x\":1000000,\"jmax\":3"));
    let r = rows(&text, "j,x,sigma_exact,h_main_term,ratio");
    assert_eq!(r.len(), 3);
    assert_eq!(r[0][2], "78498");
}

#[test]
fn malformed_numbers_are_usage_errors() {
    for args in [
        &["sigma", "--x", "-5"][..],
        &["sigma", "--x", "1.5"],
        &["sigma", "--x", "0"],
        &["sigma", "--x", "1e6", "--jmax", "9"],
        &["sigma", "--x", "10"],
    ] {
        let o = primset(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
    let o = primset(&["sigma", "--x", "-5"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"));
}

#[test]
fn construct_summary() {
    let o = primset(&[
        "construct",
        "--L",
        "power-of-log",
        "--epsilon",
        "1",
        "--x",
        "1e6",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    let summary = rows(&text, "x,S,predicted,window_low,window_high,B,Bprime");
    assert_eq!(summary.len(), 1);
    let s = &summary[0];
    assert_eq!(s[0], "1000000");
    let low: f64 = s[3].parse().unwrap();
    let high: f64 = s[4].parse().unwrap();
    assert!(low <= high);
    let per_k = rows(&text, "x,k,S_k,lemma23_ratio");
    let total: u64 = per_k.iter().map(|r| r[2].parse::<u64>().unwrap()).sum();
    assert_eq!(total.to_string(), s[1]);
    assert!(text.contains("# primitivity: verified"));
}

#[test]
fn construct_tiny_sequence_fixture() {
    let o = primset(&["construct", "--x", "20", "--test-sequence", "2,3,5,7,11"]);
    assert!(o.status.success());
    let text = stdout(&o);
    // S ∩ [1, 20] = {2} ∪ {9, 15}
    let per_k = rows(&text, "x,k,S_k,lemma23_ratio");
    assert_eq!(
        per_k,
        vec![vec!["20", "1", "1", ""], vec!["20", "2", "2", ""]]
    );
    assert_eq!(
        rows(&text, "x,S,predicted,window_low,window_high,B,Bprime")[0][1],
        "3"
    );
}

#[test]
fn injected_violation_exits_one() {
    let o = primset(&["construct", "--x", "1e4", "--inject-violation"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("primitivity: FAILED"));
}

#[test]
fn divergent_l_fails_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let table = write(dir.path(), "one.csv", "x,L\n2,1\n1e9,1\n");
    let o = primset(&[
        "primeseq",
        "--L",
        "custom-table",
        "--table",
        &table,
        "--K",
        "10",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let o = primset(&["primeseq", "--L", "custom-table"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn theorem2_block_methods() {
    let text = stdout(&primset(&["theorem2", "--blocks", "4"]));
    let r = rows(&text, "j,lo,hi,count,reciprocal_sum,method");
    assert_eq!(r.len(), 4);
    assert!(r.iter().all(|row| row[5] == "exact-enumeration"));
    assert_eq!(
        r[0],
        vec!["1", "4", "16", "3", "0.338095238095", "exact-enumeration"]
    );

    let text = stdout(&primset(&["theorem2", "--blocks", "6"]));
    let r = rows(&text, "j,lo,hi,count,reciprocal_sum,method");
    assert_eq!(r.len(), 6);
    assert_eq!(r[4][5], "analytic-odd-harmonic");
    assert_eq!(r[5][5], "analytic-odd-harmonic");
    assert_eq!(r[5][2], "2^128");
}

#[test]
fn theorem2_greedy_extraction() {
    let o = primset(&["theorem2", "--extract", "greedy", "--x", "65536"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let r = rows(&text, "x,strategy,subset_size,reciprocal_sum");
    assert_eq!(r[0][..3], ["65536", "greedy-ascending", "1027"]);
    assert!(text.contains("# extraction: verified primitive"));
    let o = primset(&[
        "theorem2",
        "--extract",
        "dyadic-block",
        "--x",
        "1e6",
        "--random-subsets",
        "50",
    ]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("# odd parts: 50 random primitive subsets passed"));
}

#[test]
fn verify_files() {
    let dir = tempfile::tempdir().unwrap();
    let good = write(dir.path(), "good.txt", "2\n3\n5\n");
    let o = primset(&["verify", "--file", &good]);
    assert!(o.status.success());
    let t = stdout(&o);
    let r = rows(
        &t,
        "size,primitive,witness_divisor,witness_multiple,erdos_sum",
    );
    let sum: f64 = r[0][4].parse().unwrap();
    let expect: f64 = [2.0f64, 3.0, 5.0].iter().map(|p| 1.0 / (p * p.ln())).sum();
    assert!((sum - expect).abs() < 1e-11);
    assert_eq!(r[0][1], "true");

    let bad = write(dir.path(), "bad.txt", "2\n4\n");
    let o = primset(&["verify", "--file", &bad]);
    assert_eq!(o.status.code(), Some(1));
    let t = stdout(&o);
    let r = rows(
        &t,
        "size,primitive,witness_divisor,witness_multiple,erdos_sum",
    );
    assert_eq!(r[0][..4], ["2", "false", "2", "4"]);

    let empty = write(dir.path(), "empty.txt", "");
    let o = primset(&["verify", "--file", &empty]);
    assert!(o.status.success());
    let t = stdout(&o);
    let r = rows(
        &t,
        "size,primitive,witness_divisor,witness_multiple,erdos_sum",
    );
    assert_eq!(r[0], vec!["0", "true", "", "", "0"]);

    let junk = write(dir.path(), "junk.txt", "2\nseven\n");
    assert_eq!(primset(&["verify", "--file", &junk]).status.code(), Some(2));
    let missing = dir.path().join("nope.txt").display().to_string();
    assert_eq!(
        primset(&["verify", "--file", &missing]).status.code(),
        Some(2)
    );
}

#[test]
fn primeseq_csv_and_json() {
    let text = stdout(&primset(&["primeseq", "--K", "5"]));
    let r = rows(&text, "k,p_k");
    assert_eq!(r.len(), 5);
    assert!(text.contains("# lspec=power-of-log(epsilon=1) y0=2 k0="));

    let o = primset(&["primeseq", "--K", "5", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["config"]["K"], 5);
    assert_eq!(v["sequence"]["primes"].as_array().unwrap().len(), 5);
    let total = v["sequence"]["prefix_sum"].as_f64().unwrap()
        + v["sequence"]["tail_bound"].as_f64().unwrap();
    assert!(total < 0.5);
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run.json").display().to_string();
    let args = [
        "theorem2",
        "--blocks",
        "3",
        "--random-subsets",
        "10",
        "--seed",
        "9",
        "--format",
        "json",
        "--out",
        &out,
        "--threads",
        "2",
    ];
    assert!(primset(&args).status.success());
    let first = std::fs::read(&out).unwrap();
    assert!(primset(&args).status.success());
    assert_eq!(std::fs::read(&out).unwrap(), first);
}

#[test]
fn segment_size_does_not_change_results() {
    let a = stdout(&primset(&["construct", "--x", "1e5"]));
    let b = stdout(&primset(&[
        "construct",
        "--x",
        "1e5",
        "--segment-size",
        "1000",
    ]));
    let strip = |t: &str| t.lines().skip(1).collect::<Vec<_>>().join("\n");
    assert_eq!(strip(&a), strip(&b));
}
