use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_waveguide-echo"))
}

fn run(args: &[&str], out: Option<&Path>) -> Output {
    let mut cmd = bin();
    cmd.args(args);
    if let Some(dir) = out {
        cmd.arg("--out").arg(dir);
    }
    cmd.output().unwrap()
}

fn write_config(dir: &Path, json: &str) -> String {
    let path = dir.join("config.json");
    fs::write(&path, json).unwrap();
    path.to_string_lossy().into_owned()
}

const CUSTOM: &str = r#"{
  "scenario": "custom",
  "lattice": {"kind": "1d", "n": 6, "kappa": 2.0, "delta_over_kappa": 4.0},
  "protocol": {"segment_length": 10.0, "num_samples": 11},
  "input": {"type": "fock", "site": 2, "n0": 3}
}"#;

#[test]
fn list_scenarios_names_all() {
    let out = run(&["list-scenarios"], None);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for id in ["fig1", "fig2a", "fig2b", "fig3a", "fig3b", "fig4", "custom"] {
        assert!(text.lines().any(|l| l.starts_with(id)), "missing {id}");
    }
}

#[test]
fn fig3b_writes_photon_sweep() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(&["run", "fig3b"], Some(tmp.path()));
    assert!(out.status.success());
    let csv = fs::read_to_string(tmp.path().join("fig3b_n0.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(rows[0], "n0,fidelity");
    assert_eq!(rows.len(), 7);
    assert!(rows[1].starts_with("1,0.95522212202857"));
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("fig3b_summary.json")).unwrap())
            .unwrap();
    assert_eq!(summary["scenario"], "fig3b");
}

#[test]
fn custom_config_json_output_with_squared() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), CUSTOM);
    let out = run(
        &[
            "run",
            "custom",
            "--config",
            &cfg,
            "--format",
            "json",
            "--squared",
        ],
        Some(&tmp.path().join("o")),
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("o/custom.json")).unwrap())
            .unwrap();
    let text = doc.to_string();
    assert!(text.contains("fidelity_squared"));
}

#[test]
fn validate_reports_ok_and_bad_fields() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), CUSTOM);
    let out = run(&["validate", "--config", &cfg], None);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok: custom"));

    let bad = CUSTOM.replace("\"n\": 6", "\"n\": \"six\"");
    let cfg = write_config(tmp.path(), &bad);
    let out = run(&["validate", "--config", &cfg], None);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("lattice.n"));

    let bad = CUSTOM.replace("\"site\": 2", "\"site\": 60");
    let cfg = write_config(tmp.path(), &bad);
    assert_eq!(
        run(&["validate", "--config", &cfg], None).status.code(),
        Some(2)
    );
}

#[test]
fn usage_errors_exit_two() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(
        run(&["run", "custom"], Some(tmp.path())).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["run", "fig9"], Some(tmp.path())).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["run", "fig1", "--format", "xml"], Some(tmp.path()))
            .status
            .code(),
        Some(2)
    );
    let cfg = write_config(tmp.path(), CUSTOM);
    assert_eq!(
        run(&["run", "fig1", "--config", &cfg], Some(tmp.path()))
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["validate", "--config", "/nonexistent/config.json"], None)
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn seed_changes_ensemble_and_reruns_match() {
    let tmp = tempfile::tempdir().unwrap();
    let read = |seed: &str| {
        let dir = tmp.path().join("run");
        let _ = fs::remove_dir_all(&dir);
        assert!(run(&["run", "fig2b", "--seed", seed], Some(&dir))
            .status
            .success());
        fs::read(dir.join("fig2b_ensemble_delta10.csv")).unwrap()
    };
    let a = read("11");
    let b = read("11");
    let c = read("12");
    assert_eq!(a, b);
    assert_ne!(a, c);
}
