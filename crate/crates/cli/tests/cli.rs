use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("tests/data");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn ttm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ttm"))
        .args(args)
        .env_remove("TTM_PRECISION_BITS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn verify_fibonacci_passes() {
    let o = ttm(&[
        "verify",
        &data("fib.tt"),
        "--map",
        "f",
        "--max-len",
        "5",
        "--tol",
        "1e-12",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("all checks passed"));
}

#[test]
fn verify_thue_morse_json() {
    let o = ttm(&[
        "verify",
        &data("thue_morse.tt"),
        "--map",
        "t",
        "--max-len",
        "4",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["passed"], true);
    assert_eq!(v["suites"].as_array().unwrap().len(), 4);
}

#[test]
fn verify_with_wrong_vector_fails() {
    // (1, 1) is not an eigenvector of [[1,1],[1,0]].
    let o = ttm(&["verify", &data("fib.tt"), "--map", "f", "--vector", "1,1"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn measure_table() {
    let o = ttm(&[
        "measure",
        &data("fib.tt"),
        "--map",
        "f",
        "--table-up-to",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "path\tvalue");
    assert!(lines.contains(&"a\t1.618033988749"));
    assert!(lines.contains(&"a a\t0.618033988749"));
    assert!(lines.contains(&"b b\t0"));
    // 4 + 4·3 + 4·9 reduced paths on the two-petal rose.
    assert_eq!(lines.len(), 1 + 4 + 12 + 36);
    let lens: Vec<usize> = lines[1..]
        .iter()
        .map(|l| l.split('\t').next().unwrap().split(' ').count())
        .collect();
    assert!(lens.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn measure_paths_exact_and_json() {
    let o = ttm(&[
        "measure",
        &data("fib.tt"),
        "--map",
        "f",
        "--paths",
        "a b,~b ~a,a ~b",
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let vals: Vec<&str> = v["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["value"].as_str().unwrap())
        .collect();
    assert_eq!(vals, ["1.000000000000", "1.000000000000", "0"]);
    let o = ttm(&[
        "measure",
        &data("fib.tt"),
        "--map",
        "f",
        "--paths",
        "b b",
        "--exact",
    ]);
    assert_eq!(stdout(&o), "path\tvalue\nb b\t0\n");
}

#[test]
fn measure_is_deterministic() {
    let args = [
        "measure",
        &data("thue_morse.tt"),
        "--map",
        "t",
        "--table-up-to",
        "3",
        "--normalize",
        "sum",
    ];
    assert_eq!(ttm(&args).stdout, ttm(&args).stdout);
}

#[test]
fn ergodic_three_letters() {
    let o = ttm(&["ergodic", &data("three.sub"), "--subst", "s"]);
    let out = stdout(&o);
    assert!(out.contains("2 measure(s)"), "{out}");
    assert!(out.contains("frequencies a=0.5 b=0.5 c=0\n"));
    assert!(out.contains("a=0.333333333333 b=0.333333333333 c=0.333333333333"));
    let o = ttm(&[
        "ergodic",
        &data("three.sub"),
        "--subst",
        "s1",
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["measures"].as_array().unwrap().len(), 1);
}

#[test]
fn check_reports_witness() {
    let o = ttm(&["check", &data("fib.tt"), "--map", "g", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["train_track"], false);
    assert!(v["witness"]["iterate"].as_u64().unwrap() <= 5);
    let o = ttm(&["check", &data("fib.tt"), "--map", "f"]);
    assert!(stdout(&o).contains("train track: yes"));
}

#[test]
fn spectrum_json() {
    let o = ttm(&["spectrum", &data("fib.tt"), "--map", "f"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["matrix"], serde_json::json!([[1, 1], [1, 0]]));
    assert_eq!(v["distinguished"][0]["lambda"], "1.618033988749894");
}

#[test]
fn parse_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.tt");
    std::fs::write(
        &p,
        "graph R { vertices: v; edge a: v -> v }\nmap f: R -> R {\n  a -> a c\n}\n",
    )
    .unwrap();
    let o = ttm(&["check", p.to_str().unwrap(), "--map", "f"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains(":3:10:"), "{err}");
}

#[test]
fn precondition_errors_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("nontt.tt");
    std::fs::write(&p, "graph R { vertices: v; edge a: v -> v; edge b: v -> v }\nmap g: R -> R { a -> a b; b -> ~a }\n").unwrap();
    let o = ttm(&[
        "measure",
        p.to_str().unwrap(),
        "--map",
        "g",
        "--table-up-to",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn fmt_round_trip() {
    let first = ttm(&["fmt", &data("fib.tt")]);
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("canon.tt");
    std::fs::write(&p, &first.stdout).unwrap();
    let second = ttm(&["fmt", p.to_str().unwrap()]);
    assert_eq!(first.stdout, second.stdout);
}
