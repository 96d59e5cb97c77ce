use std::process::{Command, Output};

fn k3fix(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_k3fix"))
        .args(args)
        .env_remove("K3FIX_DATA_DIR")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn classify_21_checks_clean() {
    let o = k3fix(&["classify", "--order", "21", "--check"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let s = stdout(&o);
    assert!(s.contains("check order21_purely_final: ok"), "{s}");
    assert!(!s.contains("MISMATCH"));
}

#[test]
fn every_purely_order_checks_clean() {
    for n in ["7", "14", "28", "42"] {
        let o = k3fix(&["classify", "--order", n, "--check"]);
        assert_eq!(o.status.code(), Some(0), "order {n}: {}", stdout(&o));
    }
}

#[test]
fn missing_symplectic_order_is_not_an_error() {
    let o = k3fix(&["classify", "--order", "28", "--not-purely", "7"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("no admissible cases"));
    let o = k3fix(&["classify", "--order", "28", "--not-purely", "7", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["records"].as_array().unwrap().len(), 0);
}

#[test]
fn not_purely_prints_both_readings() {
    let o = k3fix(&["classify", "--order", "14", "--not-purely", "2", "--check"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let s = stdout(&o);
    assert!(s.contains("printed reading:") && s.contains("orbit reading:"), "{s}");
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["classify", "--order", "13"][..],
        &["classify", "--order", "14", "--not-purely", "3"],
        &["verify", "--example", "Z9"],
        &["oracle", "--order", "28"],
        &["data", "--dump", "nope"],
        &["verify"],
    ] {
        let o = k3fix(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn verify_one_and_all() {
    let o = k3fix(&["verify", "--example", "A1(9,1)"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = k3fix(&["verify", "--all"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("0 failed"));
    let o = k3fix(&["verify", "--example", "D2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v[0]["status"], "skipped");
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["--seed", "7", "verify", "--all"][..],
        &["classify", "--order", "42", "--format", "json"],
    ] {
        assert_eq!(k3fix(args).stdout, k3fix(args).stdout, "{args:?}");
    }
}

#[test]
fn json_and_csv_formats() {
    let o = k3fix(&["classify", "--order", "42", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let rec = &v["records"][0];
    for key in ["label", "type_counts", "dims", "ns", "status"] {
        assert!(rec.get(key).is_some(), "missing {key}");
    }
    let o = k3fix(&["classify", "--order", "42", "--format", "csv"]);
    assert!(stdout(&o).starts_with("case,"));
}

#[test]
fn oracle_agrees_on_small_orders() {
    let o = k3fix(&["oracle", "--order", "7"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("agree\n"));
}

#[test]
fn data_dir_override() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data");
    let o = Command::new(env!("CARGO_BIN_EXE_k3fix"))
        .args(["classify", "--order", "21", "--check"])
        .env("K3FIX_DATA_DIR", dir)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let o = Command::new(env!("CARGO_BIN_EXE_k3fix"))
        .args(["classify", "--order", "21"])
        .env("K3FIX_DATA_DIR", "/nonexistent/k3fix")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn data_listing_and_dump() {
    let list = stdout(&k3fix(&["data", "--list"]));
    assert!(list.lines().count() > 3);
    let o = k3fix(&["data", "--dump", "order21_purely_final"]);
    assert_eq!(o.status.code(), Some(0));
    serde_json::from_slice::<serde_json::Value>(&o.stdout).unwrap();
}

#[test]
fn output_file() {
    let path = std::env::temp_dir().join(format!("k3fix-cli-{}.md", std::process::id()));
    let o = k3fix(&["classify", "--order", "7", "-o", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert!(!std::fs::read_to_string(&path).unwrap().is_empty());
    std::fs::remove_file(path).ok();
}
