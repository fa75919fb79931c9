use std::process::{Command, Output};

fn braidorder(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_braidorder"))
        .args(args)
        .env_remove("BRAIDORDER_CONFIG")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON on stdout")
}

#[test]
fn expand_generator() {
    let o = braidorder(&["expand", "--free", "x_1", "-d", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "1 + X_1");
}

#[test]
fn expand_identity() {
    let o = braidorder(&["expand", "--free", "1", "-d", "3"]);
    assert_eq!(stdout(&o).trim(), "1");
}

#[test]
fn expand_surface_commutes_at_degree_two() {
    let a = braidorder(&["expand", "--surface", "-g", "1", "w_2 w_1", "-d", "2"]);
    let b = braidorder(&["expand", "--surface", "-g", "1", "w_1 w_2", "-d", "2"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn expand_json_shape() {
    let o = braidorder(&["--json", "expand", "--free", "x_1 x_2^-1", "-d", "2"]);
    let v = json(&o);
    assert_eq!(v["schema"], "braidorder.series/1");
    assert_eq!(v["degree"], 2);
    let terms = v["terms"].as_array().unwrap();
    assert_eq!(terms[0]["mono"], serde_json::json!([]));
    assert_eq!(terms[0]["coeff"], "1");
}

#[test]
fn expand_parse_error_reports_position() {
    let o = braidorder(&["expand", "--free", "x_1 x_?"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("byte"));
}

#[test]
fn compare_free_identity_below_generator() {
    let o = braidorder(&["compare", "free", "1", "x_1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "LT");
}

#[test]
fn compare_surface_equal() {
    let o = braidorder(&["compare", "surface", "-g", "2", "w_1", "w_1"]);
    assert_eq!(stdout(&o).trim(), "EQ");
}

#[test]
fn compare_kn_generators() {
    // Within one family a larger strand index gives the smaller free
    // variable and hence the smaller element, so f[1,2,1] > f[1,3,1].
    let o = braidorder(&["compare", "kn", "f[1,2,1]", "f[1,3,1]"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "GT");
    let o = braidorder(&["compare", "kn", "f[1,3,1]", "f[1,2,1]"]);
    assert_eq!(stdout(&o).trim(), "LT");
}

#[test]
fn compare_undecided_at_cap_has_its_own_exit_code() {
    // A long commutator-of-commutators sits deep in the lower central series.
    let a = "x_1 x_2 x_1^-1 x_2^-1 x_1 x_1 x_2 x_1^-1 x_1^-1 x_2^-1";
    let o = braidorder(&["compare", "free", a, "1", "--d0", "1", "--cap", "1"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("undecided"));
}

#[test]
fn compare_rejects_bad_escalation() {
    let o = braidorder(&["compare", "free", "x_1", "x_2", "--d0", "8", "--cap", "4"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn certify_small_and_large() {
    for (n, i) in [("2", "1"), ("7", "4")] {
        let o = braidorder(&["certify", "-n", n, "-i", i]);
        assert_eq!(o.status.code(), Some(0));
        let v = json(&o);
        assert_eq!(v["schema"], "braidorder.gt-certificate/1");
        assert_eq!(v["surface"], "nonorientable");
        assert_eq!(v["valid"], true);
        let steps = v["steps"].as_array().unwrap();
        assert!(steps.iter().any(|s| s["status"] == "assumed"));
        assert!(steps.iter().any(|s| s["status"] == "checked"));
    }
}

#[test]
fn certify_rejects_one_strand() {
    let o = braidorder(&["certify", "-n", "1", "-i", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn act_round_trips() {
    let o = braidorder(&["act", "a[1,2]", "f[1,2,w_1]; f[2,3,w_2]", "-n", "3", "-g", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let image = stdout(&o);
    let back = braidorder(&["act", "a[1,2]", image.trim(), "--inverse", "-n", "3", "-g", "1"]);
    assert_eq!(stdout(&back).trim(), "f[1,2,w_1]; f[2,3,w_2]");
}

#[test]
fn artin_images() {
    let o = braidorder(&["artin", "-n", "2", "s1"]);
    assert_eq!(stdout(&o), "x_1 -> x_1 x_2 x_1^-1\nx_2 -> x_1\n");
}

#[test]
fn proptest_bi_invariance_passes() {
    let o = braidorder(&["proptest", "bi-invariance", "--samples", "300", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["schema"], "braidorder.suite-report/1");
    assert_eq!(v["violation_count"], 0);
    assert!(v["violations"].as_array().unwrap().is_empty());
}

#[test]
fn proptest_psi_order_passes() {
    let o = braidorder(&["proptest", "psi-order", "-n", "4", "-g", "2", "--samples", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["violation_count"], 0);
}

#[test]
fn proptest_negative_controls_report_violations() {
    let o = braidorder(&["proptest", "negative-controls", "--samples", "50"]);
    let v = json(&o);
    assert!(v["violation_count"].as_u64().unwrap() > 0);
    for s in v["sections"].as_array().unwrap() {
        assert_eq!(s["expect_failure"], true);
        assert!(s["violation_count"].as_u64().unwrap() > 0);
    }
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn proptest_unknown_suite_is_usage_error() {
    let o = braidorder(&["proptest", "no-such-suite"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unknown_flag_is_usage_error() {
    let o = braidorder(&["compare", "free", "x_1", "x_2", "--frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn proptest_output_is_byte_identical() {
    let args = ["proptest", "surface-order", "--samples", "60", "--seed", "11"];
    let a = braidorder(&args);
    let b = braidorder(&args);
    let mut seq = args.to_vec();
    seq.push("--sequential");
    let c = braidorder(&seq);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn config_file_supplies_defaults() {
    let dir = std::env::temp_dir().join(format!("braidorder-cfg-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("config.json");
    std::fs::write(&path, r#"{"genus": 2, "format": "json"}"#).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_braidorder"))
        .args(["compare", "surface", "w_3", "w_3"])
        .env("BRAIDORDER_CONFIG", &path)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["schema"], "braidorder.compare/1");
    assert_eq!(v["verdict"], "EQ");

    std::fs::write(&path, r#"{"genus": 2, "colour": "red"}"#).unwrap();
    let o = braidorder(&["--config", path.to_str().unwrap(), "compare", "free", "x_1", "x_2"]);
    assert_eq!(o.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}
