use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_signed-harmonic"))
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = bin().args(args).env_remove("HARMONIC_THREADS").output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn ok(args: &[&str]) -> String {
    let (code, out, err) = run(args);
    assert_eq!(code, 0, "{args:?}: {err}");
    out
}

fn is_bfile_line(line: &str) -> bool {
    let Some((n, v)) = line.split_once(' ') else { return false };
    let v = v.strip_prefix('-').unwrap_or(v);
    !n.is_empty() && !v.is_empty() && n.bytes().all(|b| b.is_ascii_digit()) && v.bytes().all(|b| b.is_ascii_digit())
}

#[test]
fn table1_bfile_first_ten_rows() {
    let out = ok(&["table1", "--upto", "10", "--emit", "bfile"]);
    let expected: String = include_str!("data/primes_minsum.b").lines().take(10).map(|l| format!("{l}\n")).collect();
    assert_eq!(out, expected);
    assert!(out.ends_with("10 4919311\n"));
}

#[test]
fn table3_first_rows() {
    let out = ok(&["table3", "--upto", "5"]);
    let values: Vec<&str> = out.lines().map(|l| l.split('\t').nth(1).unwrap()).collect();
    assert_eq!(values, ["1", "1", "1", "2", "22"]);
}

#[test]
fn bfile_lines_are_well_formed() {
    for args in [
        &["--emit", "bfile", "table1", "--upto", "12"][..],
        &["--emit", "bfile", "table3", "--upto", "8"],
        &["--emit", "bfile", "seq", "--kind", "pk", "--k", "2", "--n", "30"],
        &["--emit", "bfile", "seq", "--kind", "nonprimes", "--upto", "50"],
        &["--emit", "bfile", "decay", "--n-max", "10", "--tau", "1/3"],
    ] {
        let out = ok(args);
        assert!(out.ends_with('\n'), "{args:?}");
        assert!(out.lines().all(is_bfile_line), "{args:?}:\n{out}");
    }
}

#[test]
fn seq_outputs() {
    assert_eq!(ok(&["seq", "--kind", "nonprimes", "--n", "6"]), "1\n4\n6\n8\n9\n10\n");
    assert_eq!(ok(&["seq", "--kind", "pk", "--k", "2", "--upto", "15"]), "6\n10\n14\n15\n");
    assert_eq!(ok(&["seq", "--kind", "ap", "--a", "3", "--q", "4", "--n", "3"]), "3\n7\n11\n");
}

#[test]
fn terms_from_file() {
    let path = std::env::temp_dir().join(format!("sh_terms_{}.b", std::process::id()));
    std::fs::write(&path, "1 2\n2 3\n3 5\n4 7\n").unwrap();
    let out = ok(&["minsum", "--kind", "file", "--file", path.to_str().unwrap(), "--n", "4"]);
    std::fs::remove_file(&path).unwrap();
    assert_eq!(out, "4\t23\t210\t-++-\t0/1\n");
}

#[test]
fn json_round_trips() {
    for args in [
        &["seq", "--n", "5"][..],
        &["minsum", "--n", "12", "--tau", "7/5"],
        &["gap", "--n", "9"],
        &["table1", "--upto", "6"],
        &["decay", "--n-max", "12", "--fit-from", "4"],
        &["two-stage", "--n", "20", "--tau", "1/3"],
        &["rho", "--n", "30", "--x", "2.5"],
        &["rho", "--x", "0.5", "--eps", "1e-6"],
        &["density", "--grid", "0:1:4", "--eps", "1e-5"],
        &["check", "exp-bound", "--n", "20", "--samples", "50"],
        &["check", "identity", "--n", "6"],
        &["mc", "--n", "40", "--samples", "5000", "--eps", "1e-5"],
    ] {
        let mut full = vec!["--emit", "json"];
        full.extend_from_slice(args);
        let out = ok(&full);
        for line in out.lines() {
            let v: serde_json::Value = serde_json::from_str(line).unwrap_or_else(|e| panic!("{args:?}: {e}"));
            assert_eq!(serde_json::to_string(&v).unwrap(), line, "{args:?}");
        }
    }
}

#[test]
fn json_big_integers_are_strings() {
    let out = ok(&["--emit", "json", "minsum", "--n", "30"]);
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["den"], "31610054640417607788145206291543662493274686990");
    assert!(v["scaled_num"].is_string());
    assert_eq!(v["n"], 30);
}

#[test]
fn exit_codes() {
    let (code, _, err) = run(&["minsum", "--kind", "primes", "--n", "0"]);
    assert_eq!(code, 2);
    assert!(!err.is_empty());
    assert_eq!(run(&["minsum", "--n", "5", "--tau", "abc"]).0, 2);
    assert_eq!(run(&["--unknown-flag", "seq", "--n", "3"]).0, 2);
    assert_eq!(run(&["gap", "--n", "27"]).0, 3);
    assert_eq!(run(&["minsum", "--n", "49"]).0, 3);
    assert_eq!(run(&["minsum", "--n", "30", "--memory-budget", "1024"]).0, 3);
    assert_eq!(run(&["density", "--kind", "ap", "--x", "0", "--eps", "1e-12"]).0, 4);
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn thread_count_does_not_change_output() {
    let args = ["--emit", "json", "mc", "--n", "200", "--samples", "20000", "--seed", "9", "--eps", "1e-5"];
    let one = bin().args(args).env("HARMONIC_THREADS", "1").output().unwrap();
    let four = bin().args(args).arg("--threads").arg("4").output().unwrap();
    assert!(one.status.success() && four.status.success());
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn checks_report_success() {
    let out = ok(&["--emit", "json", "check", "identity", "--n", "12"]);
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert!(v["difference"].as_f64().unwrap() < 1e-6, "{out}");
    for which in ["exp-bound", "sandwich"] {
        let out = ok(&["--emit", "json", "check", which, "--n", "12", "--samples", "200"]);
        let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
        assert_eq!(v["passed"], true, "{which}: {out}");
    }
}
