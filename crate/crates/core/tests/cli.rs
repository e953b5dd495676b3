use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn curve(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("curves")
        .join(format!("{name}.curve"))
}

fn hklab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hklab"))
        .args(args)
        .env_remove("HKLAB_CACHE")
        .env("NO_COLOR", "1")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stderr).expect("error is JSON")
}

#[test]
fn hk_reports_phi_rows() {
    let c = curve("h_char3");
    let o = hklab(&["hk", "--curve", c.to_str().unwrap(), "--e-max", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(
        stdout(&o).contains(r#"{"e":2,"q":9,"phi":252}"#),
        "{}",
        stdout(&o)
    );
}

#[test]
fn hk_csv() {
    let c = curve("g_char2");
    let o = hklab(&[
        "hk",
        "--curve",
        c.to_str().unwrap(),
        "--e-max",
        "3",
        "--format",
        "csv",
    ]);
    assert_eq!(stdout(&o), "e,q,phi\n0,1,1\n1,2,8\n2,4,44\n3,8,196\n");
}

#[test]
fn dump_echoes_job_and_curve() {
    let c = curve("fermat4_f625");
    let o = hklab(&[
        "--dump",
        "hn",
        "--curve",
        c.to_str().unwrap(),
        "--gens",
        "X^2,Y^2,Z^2",
        "--twist",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["subcommand"], "hn");
    assert_eq!(v["gens"], "X^2,Y^2,Z^2");
    assert_eq!(v["twist"], 3);
    assert_eq!(v["e_max"], 2);
    assert_eq!(v["curve"]["parsed"]["p"], 5);
    assert_eq!(v["curve"]["parsed"]["ext_degree"], 4);
    assert_eq!(
        v["curve"]["parsed"]["modulus"],
        serde_json::json!([3, 0, 0, 0, 1])
    );
    let again = hklab(&[
        "--dump",
        "hn",
        "--curve",
        c.to_str().unwrap(),
        "--gens",
        "X^2,Y^2,Z^2",
        "--twist",
        "3",
    ]);
    assert_eq!(o.stdout, again.stdout);
}

#[test]
fn singular_curve_is_a_domain_error() {
    let c = curve("h_char3_t0");
    let o = hklab(&["hk", "--curve", c.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let e = stderr_json(&o);
    assert_eq!(e["error"]["kind"], "singular_curve");
    assert!(e["error"]["message"].as_str().unwrap().contains("(0:1:0)"));
}

#[test]
fn non_primary_ideal_is_a_domain_error() {
    let c = curve("h_char3");
    let o = hklab(&[
        "hk",
        "--curve",
        c.to_str().unwrap(),
        "--ideal",
        "X+Y",
        "--e-max",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stderr_json(&o)["error"]["kind"], "non_primary");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(hklab(&["hk"]).status.code(), Some(2));
    assert_eq!(hklab(&["frobnicate"]).status.code(), Some(2));
    let c = curve("fermat4_f5");
    let o = hklab(&["cech", "--curve", c.to_str().unwrap(), "--action", "orbit"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr_json(&o)["error"]["kind"], "usage");
}

#[test]
fn cache_hit_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let c = curve("g_char2");
    let args = [
        "hn",
        "--curve",
        c.to_str().unwrap(),
        "--gens",
        "X^2,Y^2,Z^2",
        "--twist",
        "3",
        "--e-max",
        "2",
        "--cache-dir",
        dir.path().to_str().unwrap(),
    ];
    let cold = hklab(&args);
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    let warm = hklab(&args);
    let fresh = hklab(&args[..args.len() - 2]);
    assert_eq!(cold.stdout, warm.stdout);
    assert_eq!(cold.stdout, fresh.stdout);

    let via_env = Command::new(env!("CARGO_BIN_EXE_hklab"))
        .args(&args[..args.len() - 2])
        .env("HKLAB_CACHE", dir.path())
        .output()
        .unwrap();
    assert_eq!(cold.stdout, via_env.stdout);
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn cache_key_follows_content_not_path() {
    let dir = tempfile::tempdir().unwrap();
    let copy = dir.path().join("renamed.curve");
    std::fs::copy(curve("h_char3"), &copy).unwrap();
    let cache = dir.path().join("cache");
    let run = |p: &PathBuf| {
        hklab(&[
            "hk",
            "--curve",
            p.to_str().unwrap(),
            "--e-max",
            "1",
            "--cache-dir",
            cache.to_str().unwrap(),
        ])
    };
    assert_eq!(run(&curve("h_char3")).stdout, run(&copy).stdout);
    assert_eq!(std::fs::read_dir(&cache).unwrap().count(), 1);
}

#[test]
fn prank_and_descent() {
    let c = curve("fermat4_f5");
    let o = hklab(&["prank", "--curve", c.to_str().unwrap()]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["genus"], 3);
    assert_eq!(v["p_rank"], 3);

    let o = hklab(&[
        "descent", "--r", "2", "--g", "3", "--m-gg", "3", "--deg-o1", "4", "--seq", "4:1,4:2",
    ]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let count = &v["context"]["count"];
    assert_eq!(count["n"], 46);
    assert_eq!(count["c"], "97152");
    assert!(v["margins"]["trigger"].is_null());
}

#[test]
fn cech_orbit_of_parametrized_class() {
    let c = curve("fermat4_f625");
    let o = hklab(&[
        "cech",
        "--curve",
        c.to_str().unwrap(),
        "--action",
        "orbit",
        "--class",
        "a*Z^3/(X^2*Y)+t*a*Z^3/(X*Y^2)",
        "--steps",
        "3",
    ]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["orbit"].as_array().unwrap().len(), 4);
    assert!(v["orbit"][3].as_str().unwrap().contains("t^125"));
    assert!(v["repetition"].is_null());
}

#[test]
fn paper_suite_flags_tampered_curve() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::copy(curve("h_char3_t0"), dir.path().join("h_char3.curve")).unwrap();
    let o = hklab(&[
        "paper-suite",
        "--curve-dir",
        dir.path().to_str().unwrap(),
        "--format",
        "text",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 10);
    let first = out.lines().next().unwrap();
    assert!(
        first.contains("FAIL") && first.contains("singular at (0:1:0)"),
        "{first}"
    );
}
