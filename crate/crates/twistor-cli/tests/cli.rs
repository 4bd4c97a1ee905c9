//! End-to-end tests of the scenario runner: exit codes, determinism,
//! configuration precedence and report formats.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_twistor"))
}

#[test]
fn list_enumerates_manifolds_structures_and_checks() {
    let out = bin().arg("--list").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for needle in [
        "flat_r4",
        "kodaira_primary",
        "kodaira_secondary",
        "s3xs1",
        "hermitian(eps=1)",
        "minimality.scan",
        "hopf.round_trip",
    ] {
        assert!(text.contains(needle), "missing `{needle}` in listing");
    }
}

#[test]
fn identities_pass_with_defaults_and_are_deterministic() {
    let run = || {
        let out = bin()
            .args([
                "verify-identities",
                "--manifold",
                "flat_r4",
                "--seed",
                "42",
            ])
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        out.stdout
    };
    assert_eq!(run(), run(), "report is not byte-stable");
}

#[test]
fn tolerance_override_forces_failures_with_exit_code_1() {
    let out = bin()
        .args([
            "verify-identities",
            "--manifold",
            "flat_r4",
            "--tolerance",
            "1e-30",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn unknown_manifold_is_a_config_error() {
    let out = bin()
        .args(["verify-identities", "--manifold", "bogus"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_t_list_is_a_config_error() {
    let out = bin()
        .args(["check-minimality", "--manifold", "flat_r4", "--t", "0,-1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn csv_has_the_documented_columns() {
    let out = bin()
        .args([
            "hopf-roundtrip",
            "--format",
            "csv",
            "--manifold",
            "s3xs1",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let header = text.lines().next().unwrap();
    assert_eq!(
        header,
        "check_id,manifold,structure,t,sample_index,residual,tolerance,pass"
    );
    assert!(text.lines().count() > 100);
}

#[test]
fn config_file_env_and_flags_compose_in_order() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("scenario.toml");
    std::fs::write(
        &cfg_path,
        "manifold = \"kodaira_primary\"\nseed = 7\nt = [1.0]\n[samples]\nbase_points = 2\nfiber_angles = 4\n",
    )
    .unwrap();
    // file sets the manifold; env overrides the seed; flag overrides format
    let out = bin()
        .args([
            "check-minimality",
            "--config",
            cfg_path.to_str().unwrap(),
            "--format",
            "json",
            "--structure",
            "hermitian",
        ])
        .env("TWISTOR_SEED", "99")
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let json: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(json["schema"], 1);
    assert_eq!(json["seed"], 99);
    assert_eq!(json["manifold"], "kodaira_primary");
    // structure filter keeps only the integrable family
    for rec in json["records"].as_array().unwrap() {
        assert!(rec["structure"].as_str().unwrap().starts_with("hermitian"));
    }
}

#[test]
fn out_flag_writes_the_report_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.md");
    let out = bin()
        .args([
            "reproduce-tables",
            "--format",
            "markdown",
            "--out",
            path.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("| tables.connection |"));
    assert!(text.contains("pass"));
}

#[test]
fn minimality_report_carries_expected_verdicts() {
    let out = bin()
        .args([
            "check-minimality",
            "--manifold",
            "kodaira_secondary",
            "--t",
            "0.5,2",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let json: serde_json::Value =
        serde_json::from_str(&String::from_utf8(out.stdout).unwrap()).unwrap();
    let reports = json["minimality"].as_array().unwrap();
    assert_eq!(reports.len(), 4);
    for rep in reports {
        assert_eq!(rep["numeric_minimal"], true);
        assert_eq!(rep["analytic_minimal"], true);
        assert_eq!(rep["class"], "Hermitian");
    }
}
