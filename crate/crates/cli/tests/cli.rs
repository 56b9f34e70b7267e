//! End-to-end checks of the binary: exit codes, error strings, output
//! modes, data-file resolution, and JSON round-tripping.

use std::path::Path;
use std::process::{Command, Output};

fn cmrt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cmrt"))
        .args(args)
        .env_remove("CMRT_DATA_DIR")
        .output()
        .expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is utf-8")
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr is utf-8")
}

#[test]
fn odd_prime_rejection_is_exact() {
    let out = cmrt(&["rayclass", "--dk", "-4", "--ell", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_of(&out), "error: ell must be an odd prime\n");
    assert_eq!(stdout_of(&out), "");
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        &["classnum"][..],
        &["no-such-command"][..],
        &["rayclass", "--dk", "-4"][..],
        &["weber", "--a", "1.5", "--b", "2", "--x", "0", "--y", "0"][..],
        &["weber", "--a", "1/0", "--b", "2", "--x", "0", "--y", "0"][..],
        &["kronecker", "5"][..],
        &["bound"][..],
        &["classnum", "--disc", "-3", "--scan", "10"][..],
    ] {
        let out = cmrt(args);
        assert_eq!(out.status.code(), Some(1), "args: {args:?}");
        assert!(!stderr_of(&out).is_empty(), "args: {args:?}");
    }
}

#[test]
fn help_and_version_exit_zero() {
    for args in [&["--help"][..], &["--version"][..], &["curve", "--help"][..]] {
        let out = cmrt(args);
        assert_eq!(out.status.code(), Some(0), "args: {args:?}");
        assert!(!stdout_of(&out).is_empty());
    }
}

#[test]
fn domain_errors_exit_two() {
    // singular curve, bad discriminant, conductor zero, degree past the table
    for args in [
        &["curve", "--a", "0", "--b", "0"][..],
        &["classnum", "--disc", "-5"][..],
        &["classnum", "--disc", "0"][..],
        &["order-classnum", "--dk", "-5", "--conductor", "1"][..],
        &["order-classnum", "--dk", "-4", "--conductor", "0"][..],
        &["table", "--max-degree", "8"][..],
        &["bound", "--degree", "0"][..],
        &["weber", "--a", "0", "--b", "1", "--x", "5", "--y", "5"][..],
    ] {
        let out = cmrt(args);
        assert_eq!(out.status.code(), Some(2), "args: {args:?}");
        assert!(stderr_of(&out).starts_with("error: "), "args: {args:?}");
    }
}

#[test]
fn data_errors_exit_three() {
    let out = cmrt(&["bound", "--degree", "3", "--data", "/nonexistent/discs.csv"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr_of(&out).starts_with("error: cannot read "));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("discs_h_le_7.csv");
    std::fs::write(&bad, "# complete_through=7\nh,abs_d\n1,20\n7,5923\n").unwrap();
    let out = cmrt(&["bound", "--degree", "3", "--data", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr_of(&out).contains("20"), "{}", stderr_of(&out));
}

#[test]
fn env_var_overrides_data_location() {
    let source = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/data");
    let dir = tempfile::tempdir().unwrap();
    for name in ["discs_h_le_7.csv", "watkins_max.csv"] {
        std::fs::copy(source.join(name), dir.path().join(name)).unwrap();
    }
    let out = Command::new(env!("CARGO_BIN_EXE_cmrt"))
        .args(["bound", "--degree", "7", "--quiet"])
        .env("CMRT_DATA_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_of(&out), "5923\n");

    // pointing at an empty directory must fail loudly, not fall back
    let empty = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_cmrt"))
        .args(["bound", "--degree", "7"])
        .env("CMRT_DATA_DIR", empty.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn flag_beats_env_var() {
    let source = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/data");
    let dir = tempfile::tempdir().unwrap();
    let discs = dir.path().join("mydiscs.csv");
    std::fs::copy(source.join("discs_h_le_7.csv"), &discs).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_cmrt"))
        .args(["bound", "--degree", "1", "--quiet", "--data", discs.to_str().unwrap()])
        .env("CMRT_DATA_DIR", "/nonexistent")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr_of(&out));
    assert_eq!(stdout_of(&out), "163\n");
}

#[test]
fn human_output_spot_checks() {
    let out = cmrt(&["rayclass", "--dk", "-163", "--ell", "163"]);
    let text = stdout_of(&out);
    assert!(text.contains("h_m = 13203"), "{text}");
    assert!(text.contains("ramified"), "{text}");

    let out = cmrt(&["bound", "--degree", "7"]);
    assert!(stdout_of(&out).contains("C(7) = 5923"));

    let out = cmrt(&["weber", "--a", "-595", "--b", "5586", "--x", "14", "--y", "0"]);
    assert!(stdout_of(&out).contains("weber value = -33915/64"));

    let out = cmrt(&["kronecker", "--", "-7", "15"]);
    assert_eq!(stdout_of(&out), "kronecker(-7, 15) = 1\n");
}

#[test]
fn quiet_prints_bare_values() {
    for (args, expected) in [
        (&["--quiet", "classnum", "--disc", "-5923"][..], "7\n"),
        (&["--quiet", "order-classnum", "--dk", "-3", "--conductor", "7"][..], "2\n"),
        (&["--quiet", "rayclass", "--dk", "-163", "--ell", "163"][..], "13203\n"),
        (&["--quiet", "curve", "--a", "-595", "--b", "5586"][..], "16581375\n"),
        (&["--quiet", "kronecker", "2", "3"][..], "-1\n"),
        (&["--quiet", "verify-data", "--scan-limit", "6000"][..], "ok\n"),
    ] {
        let out = cmrt(args);
        assert_eq!(out.status.code(), Some(0), "args: {args:?} err: {}", stderr_of(&out));
        assert_eq!(stdout_of(&out), expected, "args: {args:?}");
    }
}

#[test]
fn json_documents_round_trip() {
    for args in [
        &["--json", "kronecker", "--", "-7", "15"][..],
        &["--json", "classnum", "--disc", "-163"][..],
        &["--json", "classnum", "--scan", "500"][..],
        &["--json", "order-classnum", "--dk", "-4", "--conductor", "10"][..],
        &["--json", "rayclass", "--dk", "-7", "--ell", "5", "--oracle"][..],
        &["--json", "curve", "--a", "-595", "--b", "5586", "--degree", "1", "--ell", "7"][..],
        &["--json", "curve", "--a", "1", "--b", "1"][..],
        &["--json", "weber", "--a", "-595", "--b", "5586", "--x", "14", "--y", "0"][..],
        &["--json", "bound", "--degree", "5"][..],
        &["--json", "bound", "--degree", "60", "--rough"][..],
        &["--json", "table", "--max-degree", "7"][..],
        &["--json", "verify-data", "--scan-limit", "6000"][..],
    ] {
        let out = cmrt(args);
        assert_eq!(out.status.code(), Some(0), "args: {args:?} err: {}", stderr_of(&out));
        let text = stdout_of(&out);
        let line = text.trim_end();
        let doc: serde_json::Value = serde_json::from_str(line).expect("valid json");
        // parse then re-serialize is the identity on the emitted bytes
        assert_eq!(serde_json::to_string(&doc).unwrap(), line, "args: {args:?}");
        // envelope invariants
        assert!(doc["command"].is_string());
        assert!(doc["inputs"].is_object());
        assert!(!doc["result"].is_null());
        let prov = doc["provenance"].as_array().expect("provenance array");
        assert!(!prov.is_empty(), "provenance must be non-empty: {args:?}");
        for entry in prov {
            assert_eq!(entry.as_array().map(|p| p.len()), Some(2));
        }
    }
}

#[test]
fn json_envelope_reports_inputs_faithfully() {
    let out = cmrt(&["--json", "curve", "--a", "-2/4", "--b", "10/5"]);
    let doc: serde_json::Value = serde_json::from_str(stdout_of(&out).trim_end()).unwrap();
    // rationals are normalized to lowest terms on the way in
    assert_eq!(doc["inputs"]["a"], "-1/2");
    assert_eq!(doc["inputs"]["b"], "2");
    assert_eq!(doc["command"], "curve");
}

#[test]
fn repeated_runs_are_byte_identical() {
    for args in [
        &["table"][..],
        &["--json", "classnum", "--scan", "2000"][..],
        &["--json", "rayclass", "--dk", "-163", "--ell", "163", "--oracle"][..],
        &["verify-data", "--scan-limit", "6000"][..],
    ] {
        let first = cmrt(args);
        let second = cmrt(args);
        assert_eq!(first.stdout, second.stdout, "args: {args:?}");
        assert_eq!(first.status.code(), second.status.code());
    }
}

#[test]
fn oracle_flag_extends_the_report() {
    let plain = stdout_of(&cmrt(&["--json", "rayclass", "--dk", "-8", "--ell", "3"]));
    let with = stdout_of(&cmrt(&["--json", "rayclass", "--dk", "-8", "--ell", "3", "--oracle"]));
    let plain: serde_json::Value = serde_json::from_str(plain.trim_end()).unwrap();
    let with: serde_json::Value = serde_json::from_str(with.trim_end()).unwrap();
    assert!(plain["result"]["residue_unit_order_oracle"].is_null());
    assert_eq!(with["result"]["exact_sequence_check"], true);
    assert_eq!(
        with["result"]["residue_unit_order"],
        with["result"]["residue_unit_order_oracle"]
    );
}
