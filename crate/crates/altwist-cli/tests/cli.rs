//! Drives the installed binary end to end: exit codes, output formats,
//! determinism, and agreement with the library.

use std::process::{Command, Output};

fn altwist(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_altwist"))
        .args(args)
        .output()
        .expect("binary launches")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf8 stderr")
}

#[test]
fn check_curve_exit_codes() {
    assert_eq!(code(&altwist(&["check-curve", "--x0", "137"])), 0);
    assert_eq!(code(&altwist(&["check-curve", "--x0", "131"])), 2);
    assert_eq!(code(&altwist(&["check-curve", "--x0", "12"])), 1);
    assert_eq!(code(&altwist(&["check-curve"])), 1);
    // clap conflict: both curve families at once
    assert_eq!(
        code(&altwist(&["check-curve", "--x0", "7", "--xd", "6", "--q", "2"])),
        1
    );
    // --xd without --q is rejected before any computation
    let out = altwist(&["check-curve", "--xd", "6"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("--q"));
}

#[test]
fn help_and_version_exit_zero() {
    let help = altwist(&["--help"]);
    assert_eq!(code(&help), 0);
    assert!(stdout(&help).contains("find-twists"));
    assert_eq!(code(&altwist(&["--version"])), 0);
    assert_eq!(code(&altwist(&["scan", "--help"])), 0);
}

#[test]
fn find_twists_failures_name_the_hypothesis() {
    let out = altwist(&["find-twists", "--x0", "163"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("h1"), "stderr: {}", stderr(&out));

    // q = 2 <= 163 fails the class-number hypothesis for X^6+
    let out = altwist(&["find-twists", "--xd", "6", "--q", "2"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("h1"));

    // quotient genus 1: h4
    let out = altwist(&["find-twists", "--x0", "131"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("h4"));
}

#[test]
fn find_twists_json_is_byte_deterministic_and_matches_the_library() {
    let args = [
        "find-twists",
        "--x0",
        "167",
        "--variant",
        "inert",
        "--bound",
        "2000",
        "--format",
        "json",
    ];
    let a = altwist(&args);
    let b = altwist(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout, "nondeterministic JSON output");

    let text = stdout(&a);
    let cert = altwist::cert::certificate_from_json(text.trim_end()).expect("valid certificate");
    cert.verify().expect("self-verifying");

    let desc = altwist::cert::CurveDescriptor::x0(167).unwrap();
    let expected = altwist::cert::certify(&desc, altwist::cert::Variant::Inert, 2000).unwrap();
    assert_eq!(cert, expected);
    assert_eq!(
        text.trim_end(),
        altwist::cert::certificate_to_canonical_json(&expected)
    );
}

#[test]
fn density_json_reports_exact_fraction() {
    let out = altwist(&[
        "density", "--x0", "167", "--variant", "inert", "--format", "json",
    ]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["num"], serde_json::json!(1));
    // 4 · 2¹³⁵ · 2 = 2¹³⁸ exceeds 2⁵³, so it is a decimal string
    let den = v["den"].as_str().expect("big denominator is a string");
    let expected = num_bigint::BigInt::from(1u8) << 138usize;
    assert_eq!(den, expected.to_string());
    assert_eq!(v["decimal"].as_str().unwrap(), "2.86985e-42");
}

#[test]
fn scan_plus_genus_ends_at_131() {
    let out = altwist(&["scan", "plus-genus", "--limit", "1000", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,genus,genus_plus"));
    let last = text.lines().last().unwrap();
    assert_eq!(last, "131,11,1");
    assert!(!text.contains('"'), "csv must not quote");
}

#[test]
fn scan_d0_pinned_values() {
    let out = altwist(&["scan", "d0", "--limit", "6", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["d0"], serde_json::json!(6));

    // below the smallest quaternion discriminant: usage error
    assert_eq!(code(&altwist(&["scan", "d0", "--limit", "5"])), 1);
}

#[test]
fn scan_shih_17_is_always_obstructed() {
    let out = altwist(&["scan", "shih", "--n", "17", "--pmax", "100", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let mut rows = 0;
    for line in text.lines().skip(1) {
        assert!(
            line.ends_with(",17,obstructed"),
            "unexpected row: {line}"
        );
        rows += 1;
    }
    assert!(rows > 10);

    // non-squarefree level rejected eagerly
    assert_eq!(code(&altwist(&["scan", "shih", "--n", "12", "--pmax", "10"])), 1);
}

#[test]
fn invariants_match_known_values() {
    let out = altwist(&["invariants", "--x0", "137", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["genus"], serde_json::json!(11));
    assert_eq!(v["genus_plus"], serde_json::json!(4));
    assert_eq!(v["wn_fixed"], serde_json::json!(8));
    assert_eq!(v["min_fixed_degree"], serde_json::json!(8));

    let out = altwist(&["invariants", "--xd", "26", "--q", "13", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["genus_xd"], serde_json::json!(2));
    assert_eq!(v["genus_xd_plus"], serde_json::json!(0));
    assert_eq!(v["genus_klein"], serde_json::json!(0));

    assert_eq!(code(&altwist(&["invariants", "--x0", "12"])), 1);
}

#[test]
fn out_flag_writes_the_same_bytes() {
    let dir = std::env::temp_dir().join(format!("altwist-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("cert.json");
    let args = [
        "find-twists",
        "--x0",
        "167",
        "--variant",
        "inert",
        "--bound",
        "500",
        "--format",
        "json",
    ];
    let direct = altwist(&args);
    let mut with_out: Vec<String> = args.iter().map(|s| s.to_string()).collect();
    with_out.push("--out".into());
    with_out.push(path.to_str().unwrap().into());
    let refs: Vec<&str> = with_out.iter().map(String::as_str).collect();
    let redirected = altwist(&refs);
    assert_eq!(code(&redirected), 0);
    assert!(redirected.stdout.is_empty());
    let written = std::fs::read(&path).unwrap();
    assert_eq!(written, direct.stdout);
    std::fs::remove_dir_all(&dir).unwrap();
}
