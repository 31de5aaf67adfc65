use std::process::{Command, Output};

fn dworkzeta(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_dworkzeta"));
    cmd.args(args);
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn kloosterman_lfun_exits_zero_with_degree_two() {
    let o = dworkzeta(&["--format", "json", "lfun", "--p", "3", "--poly", "x1+x1^-1", "--N", "8", "--t-deg", "4"], &[]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["degree"], 2);
    assert_eq!(v["volume_check"]["expected"], 2);
    assert_eq!(v["W"], "7");
    assert_eq!(v["oracle"].as_array().unwrap().len(), 4);
    assert!(v["oracle"].as_array().unwrap().iter().all(|o| o["pass"] == true));
}

#[test]
fn parse_error_exit_code() {
    let o = dworkzeta(&["polytope", "--poly", "x1^"], &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("position"));
}

#[test]
fn geometry_error_exit_code() {
    let o = dworkzeta(&["polytope", "--n", "1", "--poly", "1"], &[]);
    assert_eq!(o.status.code(), Some(3));
    let o = dworkzeta(&["lfun", "--n", "2", "--r", "1", "--poly", "x1+x2^-1"], &[]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn cap_exit_code() {
    let o = dworkzeta(&["sums", "--p", "7", "--poly", "x1+x2", "--oracle-m", "3", "--cap", "1000"], &[]);
    assert_eq!(o.status.code(), Some(4));
    let o = dworkzeta(&["lfun", "--p", "3", "--poly", "x1+x1^-1", "--W", "3"], &[]);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("W >= 7"));
}

#[test]
fn sums_surface_exact_values() {
    let o = dworkzeta(&["--format", "json", "sums", "--p", "5", "--poly", "x1", "--oracle-m", "2"], &[]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    // S_m = -1 for f = x on the torus
    assert_eq!(v[0]["cyc"], serde_json::json!(["-1", "0", "0", "0"]));
    assert_eq!(v[1]["cyc"], serde_json::json!(["-1", "0", "0", "0"]));
}

#[test]
fn environment_defaults_and_flag_precedence() {
    let env = [("DWORKZETA_P", "5"), ("DWORKZETA_POLY", "x1"), ("DWORKZETA_FORMAT", "json")];
    let o = dworkzeta(&["lfun"], &env);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["p"], 5);
    let o = dworkzeta(&["lfun", "--p", "7"], &env);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["p"], 7);
}

#[test]
fn output_independent_of_thread_count() {
    let args = ["--format", "json", "lfun", "--p", "3", "--n", "2", "--poly", "x1+x2+x1^-1*x2^-1", "--oracle-m", "2"];
    let one = dworkzeta(&args, &[("RAYON_NUM_THREADS", "1")]);
    let many = dworkzeta(&args, &[("RAYON_NUM_THREADS", "4")]);
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, many.stdout);
}

#[test]
fn verify_default_suite_passes() {
    let o = dworkzeta(&["--format", "json", "verify", "--p", "3", "--poly", "x1+x1^-1", "--seed", "7"], &[]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let checks = v.as_array().unwrap();
    assert!(checks.len() >= 10);
    assert!(checks.iter().all(|c| c["pass"] == true));
}
