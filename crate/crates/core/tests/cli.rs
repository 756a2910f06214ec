use std::path::PathBuf;
use std::process::{Command, Output};

fn goeritz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_goeritz"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("goeritz-cli-{}-{name}", std::process::id()))
}

#[test]
fn apply_uses_rightmost_first_by_default() {
    let o = goeritz(&["apply", "T_a1 T_b1", "a1"]);
    assert_eq!(o.status.code(), Some(0));
    let left = goeritz(&["apply", "--toggles", "t1=L", "T_b1 T_a1", "a1"]);
    assert_eq!(stdout(&o), stdout(&left));
}

#[test]
fn apply_reports_parse_position() {
    let o = goeritz(&["apply", "T_a1 T_q", "a1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("byte 5"));
}

#[test]
fn discover_empty_profile_exits_one() {
    let o = goeritz(&["discover", "--profile", "theta", "--max-image-len", "3"]);
    assert_eq!(o.status.code(), Some(1));
    let o = goeritz(&["discover", "--profile", "identity"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn discover_reads_profile_file() {
    let path = scratch("profile.json");
    let profile = goeritz::powell::ConstraintProfile::identity();
    std::fs::write(&path, serde_json::to_string(&profile).unwrap()).unwrap();
    let o = goeritz(&["--format", "json", "discover", "--profile-file", path.to_str().unwrap()]);
    let _ = std::fs::remove_file(&path);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["discovery"]["forward_candidates"], 1);
}

#[test]
fn validate_generators_records_seed() {
    let o = goeritz(&[
        "--format",
        "json",
        "--seed",
        "17",
        "validate-generators",
        "--samples",
        "50",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["config"]["seed"], 17);
    assert_eq!(v["accepted_handedness"], "Left");
    assert_eq!(
        goeritz(&["validate-generators", "--inject-broken"]).status.code(),
        Some(1)
    );
}

#[test]
fn theorem_below_reach_fails_with_trace() {
    let o = goeritz(&[
        "verify-theorem",
        "--max-image-len",
        "theta=6,nu=10",
        "--toggles",
        "t1=R,t3=L,t5=F,t6=S",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("raise the bounds"));
}

#[test]
fn check_rejects_unreadable_input() {
    let path = scratch("garbage.json");
    std::fs::write(&path, "{ not json").unwrap();
    let o = goeritz(&["check", path.to_str().unwrap()]);
    let _ = std::fs::remove_file(&path);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(goeritz(&["check", "/nonexistent/cert.json"]).status.code(), Some(2));
}

#[test]
fn theorem_certificate_round_trip() {
    let path = scratch("cert.json");
    let p = path.to_str().unwrap();
    let o = goeritz(&["--out", p, "verify-theorem", "--toggles", "t1=R,t3=L,t4=F,t5=F,t6=S"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("pants exponents"));

    let ok = goeritz(&["check", p]);
    assert_eq!(ok.status.code(), Some(0));

    let applied = goeritz(&["apply", "--cert", p, "D_nu^-1 D_nu", "a1 b2"]);
    assert_eq!(stdout(&applied), "a1 b2\n");

    let mut cert: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    cert["pants"]["p"] = serde_json::json!(cert["pants"]["p"].as_i64().unwrap() + 1);
    std::fs::write(&path, cert.to_string()).unwrap();
    let bad = goeritz(&["check", p]);
    let _ = std::fs::remove_file(&path);
    assert_eq!(bad.status.code(), Some(1));
}
