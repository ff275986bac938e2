use std::path::PathBuf;
use std::process::Command;

fn hlob() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hlob"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hlob-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn schema() -> jsonschema::JSONSchema {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/schema/report.schema.json")).unwrap();
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    jsonschema::JSONSchema::compile(&value).unwrap()
}

fn assert_valid(json: &str) {
    let v: serde_json::Value = serde_json::from_str(json).unwrap();
    let s = schema();
    let msgs: Vec<String> = match s.validate(&v) {
        Ok(()) => Vec::new(),
        Err(errors) => errors.map(|e| e.to_string()).collect(),
    };
    assert!(msgs.is_empty(), "report does not match the schema: {msgs:?}");
}

#[test]
fn verify_series_passes_with_zero_residuals() {
    let out = hlob().args(["verify", "series", "--order", "8", "--format", "json"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_valid(&text);
    let v: Vec<serde_json::Value> = serde_json::from_str(&text).unwrap();
    assert!(!v.is_empty());
    for r in &v {
        assert_eq!(r["status"], "pass");
        assert_eq!(r["max_error"], 0.0);
        assert!(r["check"].as_str().unwrap().contains("to order 8"));
    }
}

#[test]
fn corrupted_rule_fails_with_named_relation() {
    let out = hlob()
        .args(["verify", "crossprod", "--table", "consistent", "--corrupt-rule", "--format", "json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_valid(&text);
    let v: Vec<serde_json::Value> = serde_json::from_str(&text).unwrap();
    let failed: Vec<&serde_json::Value> = v.iter().filter(|r| r["status"] == "fail").collect();
    assert!(failed.iter().any(|r| r["check"] == "recombination [x, J+] = -1"));
    assert!(failed.iter().all(|r| r.get("witness").is_some()));
}

#[test]
fn consistent_table_passes_every_crossprod_check() {
    let out = hlob().args(["verify", "crossprod", "--table", "consistent"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn verify_all_is_deterministic() {
    let run = || hlob().args(["verify", "all", "--seed", "42", "--format", "json"]).output().unwrap();
    let (a, b) = (run(), run());
    assert_eq!(a.stdout, b.stdout);
    assert_valid(&String::from_utf8(a.stdout).unwrap());
}

#[test]
fn flags_win_over_the_config_file() {
    let cfg = scratch("flags.conf");
    std::fs::write(&cfg, "# test config\nformat = csv\norder = 3\n").unwrap();
    let out = hlob().args(["verify", "series", "--config", cfg.to_str().unwrap(), "--format", "json"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_valid(&text);
    assert!(text.contains("to order 3"));

    let out = hlob().args(["verify", "series", "--config", cfg.to_str().unwrap()]).output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("suite,check,status,max_error,witness"));
}

#[test]
fn out_flag_writes_a_file() {
    let path = scratch("hopf.json");
    let code = hlob().args(["verify", "hopf", "--format", "json", "--out", path.to_str().unwrap()]).status().unwrap();
    assert_eq!(code.code(), Some(0));
    assert_valid(&std::fs::read_to_string(&path).unwrap());
}

#[test]
fn usage_and_config_errors_exit_two() {
    assert_eq!(hlob().args(["verify", "everything"]).status().unwrap().code(), Some(2));
    assert_eq!(hlob().args(["--tol", "abc", "verify", "hopf"]).status().unwrap().code(), Some(2));
    let cfg = scratch("bad.conf");
    std::fs::write(&cfg, "seed = 1\nthis line has no equals sign\n").unwrap();
    let out = hlob().args(["verify", "hopf", "--config", cfg.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains(":2:"));
    assert_eq!(hlob().args(["verify", "hopf", "--config", "/nonexistent/hlob.conf"]).status().unwrap().code(), Some(2));
}

#[test]
fn modes_default_grid() {
    let out = hlob().args(["modes", "--k", "0.3", "--kappa", "2", "--grid", "default"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,y,re,im,classical_re,classical_im"));
    assert_eq!(lines.count(), 30);
}

#[test]
fn propagator_single_row() {
    let out = hlob()
        .args(["propagator", "--sector", "extended", "--dx", "1", "--y", "1", "--yprime", "1", "--mu", "1", "--h", "0.1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0], "sector,dx,y,yprime,mu,h,value,value_im,est_error,error");
    let fields: Vec<&str> = rows[1].split(',').collect();
    assert_eq!(fields[0], "extended");
    let value: f64 = fields[6].parse().unwrap();
    // same hyperbolic distance as (dx, y, y') = (0, 1, 2); cosh d = 1.5
    assert!((value - 0.0535273306).abs() < 1e-9, "{value}");
    assert_eq!(fields[9], "");
}

#[test]
fn coincident_points_are_annotated_not_fatal() {
    let out = hlob().args(["propagator", "--dx", "0", "--y", "1", "--yprime", "1,2", "--format", "json"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: Vec<serde_json::Value> = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v.len(), 6);
    assert!(v[0]["error"].as_str().unwrap().contains("coincidence"));
    assert!(v[5]["value"].as_f64().unwrap() > 0.0);
}

#[test]
fn integrate_matches_quadrature() {
    let out = hlob().args(["integrate", "--samples", "10", "--seed", "3", "--format", "json"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_valid(&String::from_utf8(out.stdout).unwrap());
    let out = hlob().args(["integrate", "--samples", "4", "--format", "csv"]).output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("check,sample,lhs_re,lhs_im,rhs_re,rhs_im,deviation"));
    assert_eq!(text.lines().count(), 5);
}
