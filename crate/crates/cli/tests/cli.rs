use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use ptcubic::verify::{verify, Status, VerifyConfig};
use serde_json::Value;

fn ptcubic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ptcubic"))
        .args(args)
        .env_remove("PTCUBIC_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    assert!(output.status.success(), "stderr: {}", String::from_utf8_lossy(&output.stderr));
    String::from_utf8(output.stdout.clone()).unwrap()
}

fn error_record(output: &Output) -> Value {
    assert!(!output.status.success());
    serde_json::from_slice(&output.stderr).expect("stderr holds a JSON error record")
}

fn path_str(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn coeffs_csv_rows() {
    let out = stdout(&ptcubic(&["coeffs", "--order", "5", "--format", "csv"]));
    assert_eq!(out, "n,b_n\n1,11\n2,-930\n3,158836\n4,-38501610\n5,11777967516\n");
}

#[test]
fn coeffs_order_zero_is_empty() {
    let out = stdout(&ptcubic(&["coeffs", "--order", "0", "--format", "csv"]));
    assert_eq!(out, "n,b_n\n");
}

#[test]
fn bounce_json_closed_form() {
    let out = stdout(&ptcubic(&["bounce", "--eps", "1/10", "--format", "json"]));
    let doc: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["schema"], "ptcubic.bounce/v1");
    assert_eq!(doc["results"][0]["closed_form"], "5/3");
    let numeric = doc["results"][0]["numeric"].as_f64().unwrap();
    assert!((numeric - 5.0 / 3.0).abs() < 1e-10);
    assert_eq!(doc["precision"], 30);
}

#[test]
fn energy_at_lambda_two() {
    let out = stdout(&ptcubic(&["energy", "--lambda", "2", "--format", "json", "--precision", "12"]));
    let doc: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["precision"], 12);
    let e = &doc["energies"][0];
    assert_eq!(e["lambda"], "2");
    assert!(e["diag_energy"].as_str().unwrap().starts_with("3.16075"));
    assert!(e["offdiag_energy"].as_str().unwrap().starts_with("1.14031"));
}

#[test]
fn decimal_lambda_is_exact() {
    let a = stdout(&ptcubic(&["pade", "--lambda", "0.125", "--format", "csv", "--depth", "3"]));
    let b = stdout(&ptcubic(&["pade", "--lambda", "1/8", "--format", "csv", "--depth", "3"]));
    assert_eq!(a, b);
    assert!(a.starts_with("lambda,t,N,diag,subdiag\n1/8,1/64,0,11.000000000000000000000000000000,"));
}

#[test]
fn outputs_are_byte_stable_with_cache() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("b.cache");
    for format in ["csv", "json"] {
        let args = ["growth", "--order", "12", "--cache", path_str(&cache), "--format", format];
        let first = ptcubic(&args).stdout;
        let second = ptcubic(&args).stdout;
        assert!(!first.is_empty());
        assert_eq!(first, second);
    }
    let text = fs::read_to_string(&cache).unwrap();
    assert!(text.starts_with("bncache v1 "));
    assert_eq!(text.lines().count(), 13);
}

#[test]
fn short_cache_is_extended_and_rewritten() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("b.cache");
    stdout(&ptcubic(&["coeffs", "--order", "4", "--cache", path_str(&cache)]));
    assert_eq!(fs::read_to_string(&cache).unwrap().lines().count(), 5);
    let out = stdout(&ptcubic(&["coeffs", "--order", "8", "--cache", path_str(&cache), "--format", "csv"]));
    assert_eq!(out.lines().count(), 9);
    assert_eq!(fs::read_to_string(&cache).unwrap().lines().count(), 9);
    // a longer cache serves shorter requests without being rewritten
    let out = stdout(&ptcubic(&["coeffs", "--order", "3", "--cache", path_str(&cache), "--format", "csv"]));
    assert_eq!(out, "n,b_n\n1,11\n2,-930\n3,158836\n");
    assert_eq!(fs::read_to_string(&cache).unwrap().lines().count(), 9);
}

#[test]
fn cache_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let nested = dir.path().join("nested");
    let output = Command::new(env!("CARGO_BIN_EXE_ptcubic"))
        .args(["coeffs", "--order", "3"])
        .env("PTCUBIC_CACHE_DIR", &nested)
        .output()
        .unwrap();
    stdout(&output);
    assert!(nested.join(ptcubic::config::CACHE_FILE_NAME).exists());
}

#[test]
fn foreign_cache_is_not_overwritten() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("b.cache");
    fs::write(&cache, "bncache v1 p2+x4\n1\t3\n").unwrap();
    let record = error_record(&ptcubic(&["coeffs", "--order", "3", "--cache", path_str(&cache)]));
    assert_eq!(record["error"]["module"], "perturbation");
    assert_eq!(record["error"]["kind"], "computation");
    assert_eq!(fs::read_to_string(&cache).unwrap(), "bncache v1 p2+x4\n1\t3\n");
}

#[test]
fn invalid_configs_are_rejected_with_records() {
    for args in [
        &["coeffs", "--precision", "9"][..],
        &["energy", "--lambda", "abc"],
        &["shoot", "--lambda", "0"],
        &["bounce", "--eps", "-1/10"],
        &["growth", "--depth", "8"],
        &["coeffs", "--no-such-flag"],
    ] {
        let output = ptcubic(args);
        assert_eq!(output.status.code(), Some(2), "{args:?}");
        let record = error_record(&output);
        assert_eq!(record["schema"], "ptcubic.error/v1");
        assert_eq!(record["error"]["kind"], "invalid-config", "{args:?}");
        assert!(output.stdout.is_empty());
    }
}

#[test]
fn module_errors_carry_their_tag() {
    let output = ptcubic(&["pade", "--order", "10"]);
    assert_eq!(output.status.code(), Some(1));
    let record = error_record(&output);
    assert_eq!(record["error"]["module"], "pade");
    assert!(record["error"]["message"].as_str().unwrap().contains("46 series coefficients"));
}

#[test]
fn shoot_starts_from_pade_average() {
    let out = stdout(&ptcubic(&["shoot", "--lambda", "1/16", "--format", "json"]));
    let doc: Value = serde_json::from_str(&out).unwrap();
    let r = &doc["results"][0];
    assert!((r["re_energy"].as_f64().unwrap() - 0.53393).abs() < 5e-6);
    assert!(r["im_energy"].as_f64().unwrap().abs() < 1e-9);
    assert!(r["guess"].as_str().unwrap().starts_with("0.53393"));
}

#[test]
fn dispersion_rows_report_both_signs() {
    let out = stdout(&ptcubic(&["dispersion", "--order", "2", "--format", "json"]));
    let doc: Value = serde_json::from_str(&out).unwrap();
    let first = &doc["moments"][0];
    assert!(first["value"].as_f64().unwrap() < 0.0);
    assert!(first["magnitude"].as_f64().unwrap() > 0.0);
    assert!(first["relative_difference"].as_f64().unwrap() < 1e-10);
    assert!(first["closed_form"].as_str().unwrap().starts_with("2.615182574"));
}

#[test]
fn verify_skips_ladder_for_short_cache() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("b.cache");
    stdout(&ptcubic(&["coeffs", "--order", "10", "--cache", path_str(&cache)]));
    let report = verify(&VerifyConfig {
        cache: Some(cache),
        ..VerifyConfig::default()
    });
    let c3 = report.criterion(3).unwrap();
    assert_eq!(c3.status, Status::Skipped);
    assert!(c3.detail.starts_with("skipped: insufficient order"), "{}", c3.detail);
}

#[test]
fn verify_names_a_mutated_coefficient() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("b.cache");
    stdout(&ptcubic(&["coeffs", "--order", "46", "--cache", path_str(&cache)]));
    let text = fs::read_to_string(&cache).unwrap().replace("\n2\t-930\n", "\n2\t-931\n");
    fs::write(&cache, text).unwrap();
    let output = ptcubic(&["verify", "--cache", path_str(&cache), "--format", "json"]);
    let doc: Value = serde_json::from_str(&stdout(&output)).unwrap();
    let first = &doc["criteria"][0];
    assert_eq!(first["id"], 1);
    assert_eq!(first["status"], "fail");
    assert!(first["detail"].as_str().unwrap().contains("n = 2"));
}
