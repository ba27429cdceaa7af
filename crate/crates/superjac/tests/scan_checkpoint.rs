use std::fs;
use std::process::Command;

use superjac::checkpoint::CheckpointError;
use superjac::{scan, Checkpoint, ScanConfig, ScanError, CHUNK_SIZE};

#[test]
fn resumed_scan_matches_full_scan() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scan.json");
    let full = scan(&ScanConfig::new(3, 6000, 2, 1))
        .unwrap()
        .without_timing();

    let partial = scan(
        &ScanConfig::new(3, 6000, 2, 1)
            .checkpoint(&path)
            .chunk_budget(2),
    )
    .unwrap();
    assert!(!partial.is_complete());
    assert_eq!(partial.completed_through, 2 + 2 * CHUNK_SIZE);
    let saved = Checkpoint::load(&path).unwrap().unwrap();
    assert_eq!(saved.completed_through, partial.completed_through);
    assert_eq!(saved.bad_d, full.bad_d);

    let resumed = scan(&ScanConfig::new(3, 6000, 2, 1).checkpoint(&path).workers(3)).unwrap();
    assert!(resumed.is_complete());
    assert_eq!(resumed.without_timing(), full);
    assert_eq!(
        Checkpoint::load(&path).unwrap().unwrap().completed_through,
        6000
    );
}

#[test]
fn checkpoint_file_layout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scan.json");
    scan(&ScanConfig::new(3, 100, 2, 1).checkpoint(&path)).unwrap();
    let value: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    let expected = serde_json::json!({
        "n": 2, "g": 1, "d_lo": 3, "d_hi": 100, "completed_through": 100,
        "bad_d": [3, 4, 6, 8, 12, 20, 24],
    });
    assert_eq!(value, expected);
    assert!(!dir.path().join("scan.json.tmp").exists());
}

#[test]
fn finished_checkpoint_skips_work() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scan.json");
    let first = scan(&ScanConfig::new(3, 500, 2, 1).checkpoint(&path)).unwrap();
    let again = scan(&ScanConfig::new(3, 500, 2, 1).checkpoint(&path)).unwrap();
    assert!(again.timing.is_none());
    assert_eq!(again.bad_d, first.bad_d);
    assert_eq!(again.violation_counts, first.violation_counts);
}

#[test]
fn mismatched_checkpoint_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scan.json");
    scan(&ScanConfig::new(3, 200, 2, 1).checkpoint(&path)).unwrap();
    let err = scan(&ScanConfig::new(3, 200, 2, 2).checkpoint(&path)).unwrap_err();
    assert!(
        matches!(err, ScanError::CheckpointMismatch { g: 1, .. }),
        "{err}"
    );
    let err = scan(&ScanConfig::new(3, 300, 2, 1).checkpoint(&path)).unwrap_err();
    assert!(
        matches!(err, ScanError::CheckpointMismatch { d_hi: 200, .. }),
        "{err}"
    );
}

#[test]
fn corrupt_checkpoints_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scan.json");
    let cases = [
        "not json",
        r#"{"n":2,"g":1,"d_lo":3,"d_hi":100}"#,
        r#"{"n":2,"g":1,"d_lo":3,"d_hi":100,"completed_through":500,"bad_d":[]}"#,
        r#"{"n":2,"g":1,"d_lo":3,"d_hi":100,"completed_through":50,"bad_d":[8,4]}"#,
        r#"{"n":2,"g":1,"d_lo":3,"d_hi":100,"completed_through":10,"bad_d":[24]}"#,
    ];
    for text in cases {
        fs::write(&path, text).unwrap();
        let err = scan(&ScanConfig::new(3, 100, 2, 1).checkpoint(&path)).unwrap_err();
        assert!(
            matches!(
                err,
                ScanError::CheckpointCorrupt(CheckpointError::Corrupt { .. })
            ),
            "{text}: {err}"
        );
    }
}

#[test]
fn cli_exit_codes_for_checkpoint_state() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scan.json");
    let run = |path: &std::path::Path, g: &str| {
        Command::new(env!("CARGO_BIN_EXE_superjac"))
            .args([
                "scan",
                "--from",
                "3",
                "--to",
                "100",
                "--n",
                "2",
                "--g",
                g,
                "--checkpoint",
            ])
            .arg(path)
            .output()
            .unwrap()
    };
    assert_eq!(run(&path, "1").status.code(), Some(0));
    assert_eq!(run(&path, "1").status.code(), Some(0));
    assert_eq!(run(&path, "2").status.code(), Some(3));

    fs::write(&path, "{ truncated").unwrap();
    let out = run(&path, "1");
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("corrupt"));
}

#[test]
fn results_independent_of_worker_count() {
    let reference = scan(&ScanConfig::new(3, 12_000, 2, 1))
        .unwrap()
        .without_timing();
    for workers in [4, 16] {
        let other = scan(&ScanConfig::new(3, 12_000, 2, 1).workers(workers)).unwrap();
        assert_eq!(other.without_timing(), reference, "workers={workers}");
    }
    let g2 = scan(&ScanConfig::new(5, 3000, 4, 2))
        .unwrap()
        .without_timing();
    assert_eq!(
        scan(&ScanConfig::new(5, 3000, 4, 2).workers(16))
            .unwrap()
            .without_timing(),
        g2
    );
}
