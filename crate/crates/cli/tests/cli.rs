use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn run(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_sofic-perm"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut pipe = child.stdin.take().unwrap();
    pipe.write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    drop(pipe);
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn file(contents: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    f
}

#[test]
fn stats_one_line_from_stdin() {
    let o = run(&["--format", "structured", "stats"], Some("2 1 3\n"));
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["cyc"]["1"], 1);
    assert_eq!(v["cyc"]["2"], 2);
    assert_eq!(v["m"], 2);
    assert_eq!(v["n_cycles"], 1);
    assert_eq!(v["hamming_to_id"], "2/3");
    assert!(stdout(&run(&["stats"], Some("2 1 3"))).contains("hamming_to_id: 2/3"));
}

#[test]
fn stats_identity_file() {
    let f = file("# the identity\ndegree 4\n()\n");
    let o = run(
        &[
            "--format",
            "structured",
            "stats",
            f.path().to_str().unwrap(),
        ],
        None,
    );
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["m"], 0);
    assert_eq!(v["hamming_to_id"], "0/1");
    assert_eq!(v["profile"]["inf"], "0/1");
}

#[test]
fn stats_malformed_names_position() {
    let f = file("1 2\n3 x\n");
    let o = run(&["stats", f.path().to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("line 2"), "{err}");
    assert!(err.contains("column"), "{err}");
}

#[test]
fn stats_missing_file_is_usage_error() {
    let o = run(&["stats", "/nonexistent/perm.txt"], None);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn factorize_five_cycle() {
    let o = run(
        &[
            "--format",
            "structured",
            "factorize",
            "--degree",
            "5",
            "--l1",
            "3",
            "--l2",
            "3",
        ],
        Some("(1 2 3 4 5)"),
    );
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["feasible"], true);
    assert_eq!(v["certificate"]["verified"], true);
    assert_eq!(v["certificate"]["l1"], 3);
}

#[test]
fn factorize_infeasible_reports_condition() {
    let o = run(
        &["factorize", "--degree", "5", "--l1", "3", "--l2", "2"],
        Some("(1 2 3 4 5)"),
    );
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).starts_with("infeasible: parity"));

    let o = run(
        &["factorize", "--l1", "4", "--l2", "2"],
        Some("1 2 3 4 5 6"),
    );
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).starts_with("infeasible: balance"));

    let o = run(
        &[
            "--format",
            "structured",
            "factorize",
            "--l1",
            "4",
            "--l2",
            "2",
        ],
        Some("1 2 3 4 5 6"),
    );
    assert_eq!(json(&o)["reason"]["condition"], "balance");
}

#[test]
fn factorize_range_errors() {
    let o = run(&["factorize", "--l1", "3", "--l2", "1"], Some("2 3 1"));
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["factorize", "--l1", "4", "--l2", "2"], Some("2 3 1"));
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8(o.stderr)
        .unwrap()
        .contains("out of range"));
}

#[test]
fn check_predicates() {
    let o = run(
        &[
            "check",
            "in-class-power",
            "--cp",
            "3/10",
            "--cq",
            "1/2",
            "--m",
            "2",
        ],
        None,
    );
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "true: 1/2 ≤ 3/5");

    let o = run(
        &["--format", "structured", "check", "bracket", "--c", "1/2"],
        None,
    );
    assert_eq!(json(&o)["index"], 2);

    let o = run(
        &[
            "check",
            "two-class",
            "--p-m",
            "1/2",
            "--p-n",
            "1/10",
            "--c1",
            "2/5",
            "--c2",
            "3/10",
        ],
        None,
    );
    assert!(stdout(&o).starts_with("true"));

    let o = run(&["check", "covers", "--p", "1/3", "--m", "3"], None);
    assert!(stdout(&o).starts_with("true"));
    let o = run(&["check", "covers", "--p", "1/3", "--m", "2"], None);
    assert!(stdout(&o).starts_with("false"));

    let o = run(
        &[
            "check",
            "trace",
            "--p",
            "1:1/2,inf:1/2",
            "--img",
            "1:1/2,inf:1/2",
        ],
        None,
    );
    assert!(stdout(&o).starts_with("true"));
}

#[test]
fn check_domain_and_parse_errors() {
    let o = run(
        &[
            "check",
            "in-class-power",
            "--cp",
            "2:1/2,inf:1/2",
            "--cq",
            "1/2",
            "--m",
            "2",
        ],
        None,
    );
    assert_eq!(o.status.code(), Some(4));
    let o = run(&["check", "bracket", "--c", "0/1"], None);
    assert_eq!(o.status.code(), Some(4));
    let o = run(&["check", "bracket", "--c", "0.5"], None);
    assert_eq!(o.status.code(), Some(2));
    let o = run(
        &[
            "check",
            "two-class",
            "--p-m",
            "1/2",
            "--p-n",
            "1/10",
            "--c1",
            "1/5",
            "--c2",
            "3/10",
        ],
        None,
    );
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn witness_commands() {
    let o = run(
        &[
            "--format",
            "structured",
            "witness",
            "power",
            "--n",
            "10000",
            "--cp",
            "3/10",
            "--cq",
            "1/2",
            "--m",
            "2",
        ],
        None,
    );
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["case"], "spread");
    assert!(v.get("parts").is_none());
    assert_eq!(v["part_supports"].as_array().unwrap().len(), 2);

    let o = run(
        &[
            "witness", "power", "--n", "1000", "--cp", "1/10", "--cq", "1/2", "--m", "2",
        ],
        None,
    );
    assert_eq!(o.status.code(), Some(3));

    let o = run(
        &[
            "witness",
            "two-class",
            "--degree",
            "1000",
            "--c1",
            "2/5",
            "--c2",
            "3/10",
        ],
        Some("(1 2 3)(4 5)"),
    );
    assert_eq!(o.status.code(), Some(3));

    let p = file("3 1 2 4 5");
    let q = file("1 2 3 5 4");
    let o = run(
        &[
            "--format",
            "structured",
            "witness",
            "conjugator",
            "--p",
            p.path().to_str().unwrap(),
            "--q",
            q.path().to_str().unwrap(),
        ],
        None,
    );
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["unmatched_mass"], 3);
}

#[test]
fn verify_suites() {
    let o = run(&["verify", "--suite", "hkl", "--max-n", "6"], None);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("hkl: pass"));

    let o = run(&["verify", "--suite", "unknown"], None);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_is_deterministic() {
    let args = [
        "--format",
        "structured",
        "verify",
        "--suite",
        "identities",
        "--seed",
        "42",
        "--samples",
        "300",
    ];
    let a = run(&args, None);
    let b = run(&args, None);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["passed"], true);
}
