use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_metaplectic"))
        .args(args)
        .env_remove("METAPLECTIC_CONFIG")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn glob_matching_nothing_is_empty_and_passes() {
    let o = run(&["check", "--filter", "nothing.*"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["suite"], "metaplectic");
    assert_eq!(v["checks"].as_array().unwrap().len(), 0);
}

#[test]
fn unknown_check_name_is_a_usage_error() {
    let o = run(&["check", "--filter", "lie.nonexistent"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown check"));
}

#[test]
fn bad_flags_and_config_exit_2() {
    assert_eq!(run(&["check", "--no-such-flag"]).status.code(), Some(2));
    assert_eq!(run(&["check", "--degree", "1"]).status.code(), Some(2));
    assert_eq!(run(&["check", "--format", "xml", "--filter", "poly.*"]).status.code(), Some(2));
    assert_eq!(run(&["table", "--what", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["dump", "nope"]).status.code(), Some(2));
}

#[test]
fn negative_control_fails_with_exit_1() {
    let o = run(&["check", "--filter", "negative.*", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.starts_with("name,status,max_residual,tolerance\n"));
    assert!(out.contains("negative.mutated_kernel,fail,"));
}

#[test]
fn lie_checks_pass_for_r2() {
    let o = run(&["check", "--filter", "lie.*", "--r", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let checks = v["checks"].as_array().unwrap();
    assert!(checks.len() >= 5);
    for c in checks {
        assert_eq!(c["status"], "pass");
        assert!(c["max_residual"].as_f64().unwrap() < 1e-12, "{c}");
    }
}

#[test]
fn output_is_deterministic() {
    let a = run(&["check", "--filter", "fock.*", "--seed", "7"]);
    let b = run(&["check", "--filter", "fock.*", "--seed", "7"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn config_file_from_environment() {
    let dir = std::env::temp_dir().join(format!("metaplectic-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("cfg.json");
    std::fs::write(&path, r#"{"r_values": [1], "seed": 3}"#).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_metaplectic"))
        .args(["check", "--filter", "poly.ring_axioms"])
        .env("METAPLECTIC_CONFIG", &path)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["config"]["seed"], 3);
    std::fs::write(&path, r#"{"seeds": 3}"#).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_metaplectic"))
        .args(["check", "--filter", "poly.ring_axioms"])
        .env("METAPLECTIC_CONFIG", &path)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn norms_table_csv() {
    let o = run(&["table", "--what", "norms", "--r", "2", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("m,a_m,c_m"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 7);
    let one = rows.iter().find(|r| r[0] == "1").unwrap();
    let a1: f64 = one[1].parse().unwrap();
    assert!((a1 - std::f64::consts::PI.powi(2) / 12.0).abs() < 1e-15);
    assert_eq!(one[1].split('e').next().unwrap().replace(['.', '-'], "").len(), 17);
}

#[test]
fn kernel_map_and_dumps() {
    let o = run(&["table", "--what", "kernel-map", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 5);
    let mut fact = 1.0f64;
    for (n, row) in rows.iter().enumerate() {
        if n > 0 {
            fact *= n as f64;
        }
        assert_eq!(row["n"], n);
        assert!((row["coefficient"]["re"].as_f64().unwrap() - fact.sqrt().recip()).abs() < 1e-15);
    }
    let o = run(&["dump", "e_tilde", "--r", "2", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("row,col,re,im\n"));
    let o = run(&["dump", "pspace", "--r", "2"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let dims: Vec<usize> = v["components"].as_array().unwrap().iter().map(|c| c["basis"].as_array().unwrap().len()).collect();
    assert_eq!(dims, vec![1, 3, 6, 3, 1]);
}
