//! Golden-file tests for the `superjac` binary. Set `UPDATE_GOLDEN=1` to
//! rewrite the files under `tests/golden/` from the current output.

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;
use std::process::Command;

use serde::de::DeserializeOwned;
use serde_json::Value;
use superjac::core::{
    certify_d, eigenspace_table, enumerate_subgroups, genus_rh, verify_weyl, CertReport, CurveShape,
};
use superjac::report::{DimsReport, SubgroupEntry, SubgroupsReport, WeylPayload};
use superjac::{scan, ScanConfig, ScanSummary};

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn superjac(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_superjac"))
        .args(args)
        .env_remove("SUPERJAC_JOBS")
        .output()
        .expect("spawn superjac");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

/// Runs `args` with `--no-timing`, checks the exit code, and compares
/// stdout and stderr against `tests/golden/<name>`.
fn check(name: &str, args: &[&str], code: i32) -> Run {
    let mut full = vec!["--no-timing"];
    full.extend_from_slice(args);
    let run = superjac(&full);
    assert_eq!(run.code, code, "{name}: stderr {}", run.stderr);
    let actual = format!(
        "exit: {}\n--- stdout\n{}--- stderr\n{}",
        run.code, run.stdout, run.stderr
    );
    let path = golden_path(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::create_dir_all(path.parent().unwrap()).unwrap();
        fs::write(&path, &actual).unwrap();
    } else {
        let expected = fs::read_to_string(&path)
            .unwrap_or_else(|e| panic!("{}: {e} (run with UPDATE_GOLDEN=1)", path.display()));
        assert_eq!(actual, expected, "{name} differs from golden file");
    }
    run
}

fn payload<T: DeserializeOwned>(run: &Run) -> T {
    let record: Value = serde_json::from_str(&run.stdout).expect("valid JSON");
    serde_json::from_value(record["payload"].clone()).expect("payload shape")
}

#[test]
fn dims_examples() {
    let run = check(
        "dims_cubic_d5.txt",
        &[
            "dims",
            "--n",
            "3",
            "--e",
            "1",
            "--exponents",
            "1,1,1",
            "--d",
            "5",
        ],
        0,
    );
    assert!(run.stdout.contains("genus: 4"), "{}", run.stdout);

    let run = check(
        "dims_conic_d6.json",
        &[
            "--json",
            "dims",
            "--n",
            "2",
            "--e",
            "1",
            "--exponents",
            "1,1",
            "--d",
            "6",
        ],
        0,
    );
    let report: DimsReport = payload(&run);
    let shape = CurveShape::new(2, 1, vec![1, 1]).unwrap();
    let expected = DimsReport::new(
        &eigenspace_table(&shape, 6).unwrap(),
        genus_rh(&shape, 6).unwrap(),
    );
    assert_eq!(report, expected);
    assert_eq!(report.genus, 2);
    assert_eq!(report.dims[&5], 1);

    let run = check(
        "dims_reducible.txt",
        &[
            "dims",
            "--n",
            "4",
            "--e",
            "2",
            "--exponents",
            "1,1",
            "--d",
            "2",
        ],
        2,
    );
    assert!(run.stderr.contains("curve reducible: gcd(d,e)=2"));

    check(
        "dims_bad_shape.txt",
        &[
            "dims",
            "--n",
            "5",
            "--e",
            "1",
            "--exponents",
            "1,1",
            "--d",
            "7",
        ],
        2,
    );
    check(
        "dims_unsupported.txt",
        &["dims", "--n", "4", "--exponents", "1,1,1,1", "--d", "4"],
        2,
    );
    check(
        "dims_conic_d6.csv",
        &[
            "--csv",
            "dims",
            "--n",
            "2",
            "--exponents",
            "1,1",
            "--d",
            "6",
        ],
        0,
    );
}

#[test]
fn certify_examples() {
    let run = check(
        "certify_24.txt",
        &["certify", "--d", "24", "--n", "2", "--g", "1"],
        1,
    );
    assert!(run.stdout.contains("13"));
    check(
        "certify_25.txt",
        &["certify", "--d", "25", "--n", "2", "--g", "1"],
        0,
    );
    check(
        "certify_d_le_n.txt",
        &["certify", "--d", "2", "--n", "2", "--g", "1"],
        2,
    );
    check(
        "certify_24.csv",
        &["--csv", "certify", "--d", "24", "--n", "2", "--g", "1"],
        1,
    );

    let run = check(
        "certify_24.json",
        &["--json", "certify", "--d", "24", "--n", "2", "--g", "1"],
        1,
    );
    let report: CertReport = payload(&run);
    assert_eq!(report, certify_d(24, 2, 1));
    let run = check(
        "certify_30_n29.json",
        &["--json", "certify", "--d", "30", "--n", "29", "--g", "1"],
        1,
    );
    let report: CertReport = payload(&run);
    assert_eq!(report, certify_d(30, 29, 1));
}

#[test]
fn scan_examples() {
    let run = check(
        "scan_3_100.txt",
        &[
            "scan", "--from", "3", "--to", "100", "--n", "2", "--g", "1", "--jobs", "2",
        ],
        0,
    );
    assert!(run.stdout.contains("max bad d: 24"));
    let run = check(
        "scan_3_100.json",
        &[
            "--json", "scan", "--from", "3", "--to", "100", "--n", "2", "--g", "1",
        ],
        0,
    );
    let summary: ScanSummary = payload(&run);
    assert_eq!(
        summary,
        scan(&ScanConfig::new(3, 100, 2, 1))
            .unwrap()
            .without_timing()
    );
    check(
        "scan_3_100.csv",
        &[
            "--csv", "scan", "--from", "3", "--to", "100", "--n", "2", "--g", "1",
        ],
        0,
    );
    let run = check(
        "scan_25_100000.txt",
        &[
            "scan", "--from", "25", "--to", "100000", "--n", "2", "--g", "1", "--jobs", "8",
        ],
        0,
    );
    assert!(run.stdout.contains("bad d (0)"));
    check(
        "scan_bad_range.txt",
        &["scan", "--from", "10", "--to", "9", "--n", "2", "--g", "1"],
        2,
    );
}

#[test]
fn subgroups_examples() {
    check(
        "subgroups_24.txt",
        &["subgroups", "--d", "24", "--max-index", "2"],
        0,
    );
    check(
        "subgroups_5.txt",
        &["subgroups", "--d", "5", "--max-index", "2"],
        0,
    );
    check(
        "subgroups_2.txt",
        &["subgroups", "--d", "2", "--max-index", "8"],
        0,
    );
    check(
        "subgroups_24.csv",
        &["--csv", "subgroups", "--d", "24", "--max-index", "2"],
        0,
    );

    for (name, d, max_index, count) in [
        ("subgroups_24.json", 24, 2, 8),
        ("subgroups_5.json", 5, 2, 2),
        ("subgroups_2.json", 2, 8, 1),
    ] {
        let (ds, ms) = (d.to_string(), max_index.to_string());
        let run = check(
            name,
            &["--json", "subgroups", "--d", &ds, "--max-index", &ms],
            0,
        );
        let report: SubgroupsReport = payload(&run);
        let expected: Vec<SubgroupEntry> = enumerate_subgroups(d, max_index)
            .iter()
            .map(SubgroupEntry::new)
            .collect();
        assert_eq!(report.subgroups, expected);
        assert_eq!(report.subgroups.len(), count);
    }
}

#[test]
fn weyl_examples() {
    check(
        "weyl_5.txt",
        &["weyl", "--d", "5", "--g", "1", "--a-max", "3"],
        0,
    );
    check(
        "weyl_2.txt",
        &["weyl", "--d", "2", "--g", "1", "--a-max", "1"],
        0,
    );
    check(
        "weyl_24.csv",
        &["--csv", "weyl", "--d", "24", "--g", "1", "--a-max", "1"],
        0,
    );
    let run = check(
        "weyl_24.json",
        &["--json", "weyl", "--d", "24", "--g", "1", "--a-max", "1"],
        0,
    );
    let payload: WeylPayload = payload(&run);
    assert!(payload.passed && payload.violation.is_none());
    let report = payload.report.unwrap();
    assert_eq!(report, verify_weyl(24, 1, 1).unwrap());
    assert_eq!(report.rows.len(), 8);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["subgroups", "--d", "1", "--max-index", "2"][..],
        &["weyl", "--d", "1", "--g", "1", "--a-max", "1"],
        &["certify", "--d", "24", "--n", "2"],
        &[
            "--json", "--csv", "certify", "--d", "24", "--n", "2", "--g", "1",
        ],
        &[
            "scan", "--from", "3", "--to", "10", "--n", "2", "--g", "1", "--jobs", "0",
        ],
        &["frobnicate"],
    ] {
        let run = superjac(args);
        assert_eq!(run.code, 2, "{args:?}");
        assert!(run.stdout.is_empty() && !run.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn json_output_is_one_object_with_sorted_keys() {
    let run = superjac(&["--json", "certify", "--d", "24", "--n", "2", "--g", "1"]);
    let record: Value = serde_json::from_str(&run.stdout).unwrap();
    let obj = record.as_object().unwrap();
    let keys: Vec<&String> = obj.keys().collect();
    assert_eq!(keys, ["command", "inputs", "payload", "version"]);
    assert_eq!(record["command"], "certify");
    assert_eq!(record["version"], env!("CARGO_PKG_VERSION"));
    assert!(record["payload"].get("elapsed").is_some());
}

#[test]
fn csv_headers() {
    let expect: BTreeMap<&str, (&[&str], &str)> = BTreeMap::from([
        (
            "dims",
            (
                &["dims", "--n", "2", "--exponents", "1,1", "--d", "6"][..],
                "j,dim,new",
            ),
        ),
        (
            "scan",
            (
                &["scan", "--from", "3", "--to", "30", "--n", "2", "--g", "1"][..],
                "d,bad,violation_count",
            ),
        ),
    ]);
    for (name, (args, header)) in expect {
        let mut full = vec!["--csv"];
        full.extend_from_slice(args);
        let run = superjac(&full);
        assert_eq!(run.stdout.lines().next(), Some(header), "{name}");
    }
}

#[test]
fn jobs_do_not_change_output() {
    let base = [
        "--no-timing",
        "scan",
        "--from",
        "3",
        "--to",
        "5000",
        "--n",
        "2",
        "--g",
        "1",
    ];
    let mut outputs = Vec::new();
    for jobs in ["1", "3", "16"] {
        for format in [None, Some("--json"), Some("--csv")] {
            let mut args: Vec<&str> = format.into_iter().collect();
            args.extend_from_slice(&base);
            args.extend_from_slice(&["--jobs", jobs]);
            outputs.push((format, superjac(&args).stdout));
        }
    }
    for (format, out) in &outputs[3..] {
        let reference = &outputs.iter().find(|(f, _)| f == format).unwrap().1;
        assert_eq!(out, reference, "{format:?}");
    }

    let via_env = Command::new(env!("CARGO_BIN_EXE_superjac"))
        .args(base)
        .env("SUPERJAC_JOBS", "5")
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(via_env.stdout).unwrap(), outputs[0].1);
}
