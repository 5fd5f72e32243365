use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_sectorial");

fn scenario(name: &str) -> String {
    format!("{}/scenarios/{name}.json", env!("CARGO_MANIFEST_DIR"))
}

fn sectorial(args: &[&str], out_dir: &Path) -> Output {
    Command::new(BIN)
        .args(args)
        .env("SECTORIAL_OUTPUT_DIR", out_dir)
        .output()
        .expect("binary runs")
}

#[test]
fn run_writes_three_artifacts_into_env_dir() {
    let dir = tempfile::tempdir().unwrap();
    let out = sectorial(&["run", &scenario("example43")], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for f in ["example43.csv", "example43_summary.json", "example43_raw.json"] {
        assert!(dir.path().join(f).is_file(), "missing {f}");
    }
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("example43_summary.json")).unwrap()).unwrap();
    assert_eq!(summary["pass"], true);
}

#[test]
fn config_output_overrides_env() {
    let env_dir = tempfile::tempdir().unwrap();
    let cfg_dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(scenario("kato_simon")).unwrap();
    let mut value: serde_json::Value = serde_json::from_str(&text).unwrap();
    value["output"] = cfg_dir.path().to_str().unwrap().into();
    let cfg = env_dir.path().join("cfg.json");
    std::fs::write(&cfg, value.to_string()).unwrap();
    let out = sectorial(&["run", cfg.to_str().unwrap()], env_dir.path());
    assert!(out.status.success());
    assert!(cfg_dir.path().join("kato_simon.csv").is_file());
    assert!(!env_dir.path().join("kato_simon.csv").exists());
}

#[test]
fn runs_are_byte_identical() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for d in [&a, &b] {
        assert!(sectorial(&["run", &scenario("example43")], d.path()).status.success());
    }
    for f in ["example43.csv", "example43_summary.json", "example43_raw.json"] {
        let x = std::fs::read(a.path().join(f)).unwrap();
        let y = std::fs::read(b.path().join(f)).unwrap();
        assert_eq!(x, y, "{f} differs between runs");
    }
}

#[test]
fn report_reproduces_csv_and_renders_markdown() {
    let dir = tempfile::tempdir().unwrap();
    assert!(sectorial(&["run", &scenario("series")], dir.path()).status.success());
    let raw = dir.path().join("series_raw.json");
    let out = sectorial(&["report", raw.to_str().unwrap(), "--format", "csv"], dir.path());
    assert!(out.status.success());
    assert_eq!(out.stdout, std::fs::read(dir.path().join("series.csv")).unwrap());
    let md = sectorial(&["report", raw.to_str().unwrap(), "--format", "markdown"], dir.path());
    let md = String::from_utf8(md.stdout).unwrap();
    assert!(md.starts_with("# series"));
    assert!(md.contains("| n | t | err_resolvent | err_product |"));
}

#[test]
fn invalid_config_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    std::fs::write(
        &cfg,
        r#"{"version":1,"kind":"series","dimension":3,"seed":1,"schedule":[4,2],"t_values":[1.0]}"#,
    )
    .unwrap();
    let out = sectorial(&["run", cfg.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("`schedule`"));
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let ok = sectorial(&["verify", "--filter", "example43"], dir.path());
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).starts_with("PASS example43"));
    let mutated = sectorial(&["verify", "--filter", "sector_calculus", "--mutate", "sector-sign"], dir.path());
    assert_eq!(mutated.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&mutated.stdout).contains("FAIL sector_calculus"));
    let nothing = sectorial(&["verify", "--filter", "no-such-criterion"], dir.path());
    assert_eq!(nothing.status.code(), Some(1));
}

#[test]
fn bad_arguments_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    assert!(!sectorial(&["verify", "--mutate", "flip-everything"], dir.path()).status.success());
    assert!(!sectorial(&["report", "missing.json", "--format", "pdf"], dir.path()).status.success());
}

#[test]
fn several_configs_run_together() {
    let dir = tempfile::tempdir().unwrap();
    let out = sectorial(&["run", &scenario("series"), &scenario("example43")], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let ex = text.find("example43: all checks pass").unwrap();
    let se = text.find("series: all checks pass").unwrap();
    assert!(ex < se, "outcomes are sorted by scenario id");
    assert!(dir.path().join("series.csv").is_file());
}

#[test]
fn duplicate_targets_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let out = sectorial(&["run", &scenario("series"), &scenario("series")], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("`output`"));
}
