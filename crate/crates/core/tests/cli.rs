//! End-to-end tests of the command-line interface: exit codes, output
//! formats, the bundled JSON schema, and external registry files.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sptpairs"))
        .args(args)
        .env_remove("SPTPAIRS_PROFILE")
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

#[test]
fn verify_single_identity_passes() {
    let out = run(&["verify", "--id", "crank-dissection-5", "--depth", "60"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("PASS crank-dissection-5"));
}

#[test]
fn verify_unknown_id_is_usage_error() {
    let out = run(&["verify", "--id", "nope"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_unmatched_filter_is_usage_error() {
    let out = run(&["verify", "--filter", "zzz-nothing"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_bad_profile_is_usage_error() {
    let out = run(&["verify", "--all", "--profile", "fast"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_negative_depth_is_usage_error() {
    let out = run(&["verify", "--id", "vchi1-from-g", "--depth", "-3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_json_matches_bundled_schema() {
    let out = run(&[
        "verify",
        "--filter",
        "vchi1",
        "--depth",
        "20",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let reports: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    let schema: serde_json::Value =
        serde_json::from_str(include_str!("../schema/report-schema.json")).expect("schema");
    // structural check against the bundled schema: required fields present,
    // no fields beyond those the schema declares
    let item_schema = &schema["items"];
    let required: Vec<&str> = item_schema["required"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap())
        .collect();
    let declared: Vec<&str> = item_schema["properties"]
        .as_object()
        .unwrap()
        .keys()
        .map(|k| k.as_str())
        .collect();
    let items = reports.as_array().expect("top level array");
    assert!(!items.is_empty());
    for item in items {
        let obj = item.as_object().expect("report object");
        for field in &required {
            assert!(obj.contains_key(*field), "missing field {}", field);
        }
        for key in obj.keys() {
            assert!(declared.contains(&key.as_str()), "undeclared field {}", key);
        }
        let outcome = obj["outcome"].as_str().unwrap();
        assert!(["pass", "fail", "error"].contains(&outcome));
        assert_eq!(outcome == "fail", obj.contains_key("witness"));
        assert_eq!(outcome == "error", obj.contains_key("message"));
    }
    // and the reports round-trip through the typed representation
    let typed: Vec<sptpairs::registry::VerificationReport> =
        serde_json::from_str(&stdout(&out)).expect("typed round trip");
    let back = serde_json::to_value(&typed).unwrap();
    assert_eq!(back, reports);
}

#[test]
fn verify_external_registry_reports_failure_with_exit_one() {
    // a deliberately false identity: (q;q)_inf = 1 + (q;q)_inf... corrupted
    let dir = std::env::temp_dir().join("sptpairs-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad-registry.sexp");
    std::fs::write(
        &path,
        "(theorem corrupted (ring rational) (depth 20)\n  (lhs (euler 1)) (rhs (+ 1 (euler 1))))\n",
    )
    .unwrap();
    let out = run(&["verify", "--all", "--registry", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("FAIL corrupted at q^0"), "{}", text);
}

#[test]
fn congruences_csv_round_trips() {
    let out = run(&[
        "congruences",
        "--n-max",
        "40",
        "--vanishing-depth",
        "30",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("i,ell,r,n,pp_i,residue"));
    let mut seen = 0;
    for line in lines {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 6, "bad row {}", line);
        let i: u8 = fields[0].parse().unwrap();
        let ell: i64 = fields[1].parse().unwrap();
        let r: i64 = fields[2].parse().unwrap();
        let n: i64 = fields[3].parse().unwrap();
        let _pp: sptpairs::Int = fields[4].parse().unwrap();
        let residue: i64 = fields[5].parse().unwrap();
        assert!((1..=4).contains(&i));
        assert_eq!(n % ell, r % ell);
        assert_eq!(residue, 0);
        seen += 1;
    }
    // six progressions with ~40/ell instances each
    assert!(seen >= 40, "only {} rows", seen);
}

#[test]
fn congruences_degenerate_n_max() {
    let out = run(&["congruences", "--n-max", "1", "--vanishing-depth", "10"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
}

#[test]
fn cranks_tabulates_and_agrees() {
    let out = run(&["cranks", "--family", "1", "--n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("m =   -1: 1"), "{}", text);
    assert!(text.contains("m =    0: 1"), "{}", text);
    assert!(text.contains("m =    1: 1"), "{}", text);
    assert!(text.contains("agree: yes"));
}

#[test]
fn cranks_empty_family() {
    let out = run(&["cranks", "--family", "2", "--n", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("(empty)"));
}

#[test]
fn cranks_cap_and_family_validation() {
    let out = run(&["cranks", "--family", "1", "--n", "99"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["cranks", "--family", "7", "--n", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn profile_env_variable_is_honored() {
    let out = Command::new(env!("CARGO_BIN_EXE_sptpairs"))
        .args(["verify", "--id", "vchi1-from-g"])
        .env("SPTPAIRS_PROFILE", "nonsense")
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(2));
}
