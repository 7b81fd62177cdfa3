//! End-to-end runs of the `nctorus` binary.

use std::process::{Command, Output};

fn nctorus(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nctorus"))
        .args(args)
        .env_remove("NCTORUS_LEMMA")
        .env_remove("NCTORUS_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let o = nctorus(args);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout).unwrap().trim_end().to_string()
}

#[test]
fn normal_forms() {
    assert_eq!(stdout(&["nf", "v1 u1"]), "d^-1 * u1 v1");
    assert_eq!(stdout(&["nf", "u1 u1^-1"]), "1 * <identity>");
    assert_eq!(stdout(&["nf", "u1 v1 u1 v1^-1"]), "d^-1 * u1^2");
}

#[test]
fn normal_form_round_trips() {
    for w in ["v1 u1", "u2^-3 v1 u2 v2^2 u1", "v2 v2^-1 u1", "d*u1 + 2*v1 u1"] {
        let once = stdout(&["nf", w]);
        assert_eq!(stdout(&["nf", &once]), once);
    }
}

#[test]
fn traces_and_inner_products() {
    assert_eq!(stdout(&["trace", "1*<identity> + 2*u1"]), "1");
    assert_eq!(stdout(&["trace", "--expr", "chi1*chi1"]), "4");
    assert_eq!(stdout(&["inner", "u1 v1", "u1 v1"]), "1");
    assert_eq!(stdout(&["inner", "u1", "u2"]), "0");
    let numeric = stdout(&["trace", "d * <identity>", "--theta", "0.25"]);
    assert_eq!(numeric.lines().nth(1), Some("0.000000000000 + 1.000000000000i"));
}

#[test]
fn parse_errors_exit_2_with_a_column() {
    let o = nctorus(&["nf", "u1 w2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("column"));
}

#[test]
fn basis_json_and_cap() {
    let v: serde_json::Value = serde_json::from_str(&stdout(&["basis", "1", "--format", "json"])).unwrap();
    assert!(!v.as_array().unwrap().is_empty());
    assert_eq!(nctorus(&["basis", "8"]).status.code(), Some(2));
}

#[test]
fn single_check_report() {
    let out = stdout(&["verify", "--lemma", "chi-recursion", "--lmax", "6", "--no-timing"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let entries = v.as_array().unwrap();
    assert_eq!(entries.len(), 1);
    assert_eq!(entries[0]["lemma_id"], "chi-recursion");
    assert_eq!(entries[0]["status"], "pass");
    assert!(entries[0].get("millis").is_none());
}

#[test]
fn config_file_env_and_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    let out = dir.path().join("report.md");
    std::fs::write(&cfg, format!("lmax = 3\n[output]\nformat = \"markdown\"\npath = {:?}\n", out)).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_nctorus"))
        .args(["verify", "--config", cfg.to_str().unwrap()])
        .env("NCTORUS_LEMMA", "chi-recursion,chi-recursion/negative-control")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let md = std::fs::read_to_string(&out).unwrap();
    assert!(md.contains("chi-recursion/negative-control"));
    assert!(md.contains("lmax=3"));
}

#[test]
fn config_errors_exit_2() {
    assert_eq!(nctorus(&["verify", "--lemma", "no-such-check"]).status.code(), Some(2));
    assert_eq!(nctorus(&["verify", "--truncation", "9"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "sede = 1\n").unwrap();
    assert_eq!(nctorus(&["verify", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn failing_exact_check_exits_1() {
    let o = nctorus(&["verify", "--lemma", "xi-inner-products-epsilon"]);
    assert_eq!(o.status.code(), Some(1));
}
