use std::process::Command;

fn snc() -> Command {
    Command::new(env!("CARGO_BIN_EXE_snc"))
}

#[test]
fn compute_q_prints_and_writes_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("q.json");
    let run = |units: &str, elements: &str, psd: &str| {
        let o = snc()
            .args(["compute-q", "--model", "hcw", "--dt", "600", "--units", units])
            .args(["--elements", elements, "--psd", psd, "--out"])
            .arg(&out)
            .output()
            .unwrap();
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        assert_eq!(String::from_utf8_lossy(&o.stdout).lines().count(), 7);
        let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
        v["matrix"][0][0].as_f64().unwrap()
    };
    let m = run("m", "6.9e6,0,0.001,0.29,0.29,135", "1e-12,1e-12,1e-12");
    let km = run("km", "6900,0,0.001,0.29,0.29,135", "1e-18,1e-18,1e-18");
    assert!(m > 0.0);
    assert!((km * 1e6 / m - 1.0).abs() < 1e-9, "{km} {m}");
}

#[test]
fn compute_q_rejects_unknown_model() {
    let o = snc()
        .args(["compute-q", "--model", "bogus", "--dt", "1", "--elements", "7e6,0,0,0,0,0", "--psd", "1,1,1"])
        .output()
        .unwrap();
    assert!(!o.status.success());
}

#[test]
fn validate_passes() {
    let o = snc().args(["validate", "--cases", "5"]).output().unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));
    assert_eq!(String::from_utf8_lossy(&o.stdout).matches(" ok").count(), 4);
}

#[test]
fn sweep_with_config_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{"grid": {"step_orbits": 0.1, "max_orbits": 1.0},
            "absolute": {"eccentricities": [0.0, 0.2]},
            "relative": {"separations_rad": [0.001, 0.1]}}"#,
    )
    .unwrap();
    let out = dir.path().join("out");
    let o = snc()
        .args(["emit", "--models", "kinematic,equinoctial-sub4,small-sep-equinoctial", "--subintervals", "2"])
        .args(["--psd-scenario", "tdom", "--curves", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let abs = std::fs::read_to_string(out.join("absolute_sweep.csv")).unwrap();
    assert_eq!(abs.lines().count(), 1 + 2 * 2 * 2);
    assert!(abs.contains("equinoctial-sub2") && abs.contains(",tdom,"));
    let rel = std::fs::read_to_string(out.join("relative_sweep.csv")).unwrap();
    assert_eq!(rel.lines().count(), 1 + 2);
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["config"]["absolute"]["scenarios"][0], "tdom");
    assert_eq!(manifest["config_hash"].as_str().unwrap().len(), 64);
}

#[test]
fn default_config_is_loadable() {
    let o = snc().arg("default-config").output().unwrap();
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["threshold"], 0.1);
}
