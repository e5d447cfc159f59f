use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn fx(rel: &str) -> String {
    fixtures().join(rel).display().to_string()
}

fn okbody(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_okbody"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn vertices(v: &Value) -> Vec<Vec<String>> {
    serde_json::from_value(v["body"]["vertices"].clone()).unwrap()
}

#[test]
fn body_of_plane_divisor() {
    let o = okbody(&[
        "body",
        "--model",
        &fx("models/plane.json"),
        "--divisor",
        &fx("divisors/plane_d2.json"),
        "--flag",
        &fx("flags/plane_std.json"),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let mut vs = vertices(&stdout_json(&o));
    vs.sort();
    assert_eq!(vs, vec![vec!["0", "0"], vec!["0", "2"], vec!["2", "0"]]);
    assert!(!o.stderr.is_empty());
}

#[test]
fn single_checks_follow_exit_contract() {
    let o = okbody(&[
        "check",
        "thm1_3",
        "--instance",
        &fx("instances/quadric_product.json"),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let r = stdout_json(&o);
    assert_eq!(r["margin"], "0");
    assert_eq!(r["verdict"], "strict");
    let o = okbody(&[
        "check",
        "cor3_5",
        "--instance",
        &fx("instances/quadric_product.json"),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout_json(&o)["verdict"], "holds");
    let o = okbody(&[
        "check",
        "thm1_2",
        "--instance",
        &fx("instances/kodaira_one_over_elliptic.json"),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("K_Y big"));
}

#[test]
fn whole_corpus_matches_declared_expectations() {
    let o = okbody(&["check", "--all", &fx("instances")]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let reports = stdout_json(&o);
    assert_eq!(reports.as_array().unwrap().len(), 60);
}

#[test]
fn exit_codes_per_verdict_on_corpus() {
    for entry in std::fs::read_dir(fixtures().join("instances")).unwrap() {
        let path = entry.unwrap().path();
        let inst: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        for (name, want) in inst["expect"].as_object().unwrap() {
            let o = okbody(&["check", name, "--instance", &path.display().to_string()]);
            let code = match want.as_str().unwrap() {
                "holds" | "strict" => 0,
                "fails" => 1,
                _ => 2,
            };
            assert_eq!(o.status.code(), Some(code), "{} {name}", path.display());
            assert_eq!(&stdout_json(&o)["verdict"], want);
        }
    }
}

#[test]
fn reports_are_byte_identical() {
    let args = [
        "check",
        "thm1_1",
        "--instance",
        &fx("instances/genus2_product.json"),
    ];
    let a = okbody(&args);
    let b = okbody(&args);
    assert_eq!(a.stdout, b.stdout);
    let r = stdout_json(&a);
    assert_eq!(r["volumes"]["vol⁺(K_X)/ν!"], "4");
}

#[test]
fn malformed_input_is_located() {
    let dir = std::env::temp_dir().join(format!("okbody-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("broken.json");
    std::fs::write(&bad, "{\"coeffs\": [1, 2,]}").unwrap();
    let o = okbody(&[
        "vol",
        "--model",
        &fx("models/plane.json"),
        "--divisor",
        &bad.display().to_string(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("broken.json:1:"), "{err}");
    std::fs::write(&bad, "{\"coeffs\": [1, 2]}").unwrap();
    let o = okbody(&[
        "vol",
        "--model",
        &fx("models/plane.json"),
        "--divisor",
        &bad.display().to_string(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    let o = okbody(&["validate", &bad.display().to_string(), &fx("models")]);
    assert_eq!(o.status.code(), Some(0));
    std::fs::write(&bad, "{\"kind\": \"curve\", \"genus\": -1}").unwrap();
    let o = okbody(&["validate", &bad.display().to_string()]);
    assert_eq!(o.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn validate_whole_corpus() {
    let o = okbody(&["validate", &fx("")]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
}

#[test]
fn surface_verbs() {
    let o = okbody(&[
        "zariski",
        "--model",
        &fx("models/blown_up_plane.json"),
        "--divisor",
        &fx("divisors/blowup_2h_plus_e.json"),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let r = stdout_json(&o);
    assert_eq!(r["P"], serde_json::json!(["2", "0"]));
    assert_eq!(r["N"], serde_json::json!(["0", "1"]));
    assert_eq!(r["volume"], "4");
    let o = okbody(&[
        "dims",
        "--model",
        &fx("models/blown_up_plane.json"),
        "--divisor",
        &fx("divisors/blowup_e.json"),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout_json(&o)["dims"]["nu_bdpp"], 0);
    let o = okbody(&[
        "dims",
        "--model",
        &fx("models/blown_up_plane.json"),
        "--divisor",
        &fx("divisors/blowup_not_psef.json"),
    ]);
    assert_eq!(o.status.code(), Some(2));
    let o = okbody(&[
        "limbody",
        "--model",
        &fx("models/genus2_product.json"),
        "--divisor",
        &fx("divisors/genus2_k.json"),
        "--flag",
        &fx("flags/genus2_f1.json"),
        "--epsilon",
        "1/32",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(vertices(&stdout_json(&o)).len(), 4);
}

#[test]
fn scaling_search_reports_double_cover_factor() {
    let o = okbody(&[
        "scaling-search",
        "--instance",
        &fx("instances/kodaira_one_over_elliptic.json"),
        "--grid-step",
        "1/2",
        "--bound",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let r = stdout_json(&o);
    assert_eq!(r["min_alpha_unit"], "2");
    assert_eq!(r["reverse_strict"], true);
    let feasible: Vec<Vec<String>> = serde_json::from_value(r["feasible"].clone()).unwrap();
    assert!(feasible.contains(&vec!["2".into(), "1".into(), "1".into()]));
    assert!(!feasible.contains(&vec!["1".into(), "1".into(), "1".into()]));
}

#[test]
fn oracle_compare_contained() {
    let o = okbody(&[
        "oracle-compare",
        "--model",
        &fx("models/plane.json"),
        "--divisor",
        &fx("divisors/plane_h.json"),
        "--m",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let r = stdout_json(&o);
    assert_eq!(r["contained"], true);
    assert_eq!(r["volume_ratio"], "1");
}

#[test]
fn plots() {
    let base = [
        "--model",
        &fx("models/quadric.json") as &str,
        "--divisor",
        &fx("divisors/quadric_2_3.json"),
    ]
    .map(String::from);
    let mut args: Vec<&str> = vec!["emit-plot"];
    args.extend(base.iter().map(String::as_str));
    let o = okbody(&args);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&o.stdout).lines().count(), 5);
    args.extend(["--format", "svg"]);
    let o = okbody(&args);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stdout).contains(" Z\""));
    let o = okbody(&[
        "emit-plot",
        "--model",
        &fx("models/p3.json"),
        "--divisor",
        &fx("divisors/plane_h.json"),
    ]);
    assert_eq!(o.status.code(), Some(2));
}
