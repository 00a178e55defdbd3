use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn ptbox(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ptbox"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn ok(out: &Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn error_line(out: &Output) -> Value {
    let stderr = String::from_utf8_lossy(&out.stderr);
    let line = stderr.lines().last().expect("an error line");
    serde_json::from_str(line).unwrap_or_else(|e| panic!("`{line}` is not JSON: {e}"))
}

const SHORT_RUN: &str = r#"
[trajectory]
kind = "harmonic"
a = 10.0
b = 1.0
omega = 1.0

[physics]
alpha = 1.0

[numerics]
n_modes = 12
t_final = 2.0
dt = 1e-3
sample_interval = 0.25
"#;

fn write_config(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn spectrum_to_stdout() {
    let dir = TempDir::new().unwrap();
    let out = ptbox(
        &[
            "spectrum", "--n-max", "3", "--length", "10", "--alpha", "1", "--out", "-",
        ],
        dir.path(),
    );
    let text = ok(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,E_n,A_n");
    assert_eq!(lines.len(), 4);
    let fields: Vec<f64> = lines[1].split(',').map(|f| f.parse().unwrap()).collect();
    assert_eq!(fields[0], 1.0);
    assert!((fields[1] - std::f64::consts::PI.powi(2) / 200.0).abs() < 1e-15);
    assert!(!dir.path().join("out").exists());
}

#[test]
fn default_output_lands_in_out_dir_with_manifest() {
    let dir = TempDir::new().unwrap();
    let out = ptbox(
        &["spectrum", "--n-max", "2", "--length", "1", "--alpha", "2"],
        dir.path(),
    );
    let printed = ok(&out);
    let csv = dir.path().join(printed.trim());
    assert!(csv.starts_with(dir.path().join("out")));
    assert!(csv
        .file_name()
        .unwrap()
        .to_str()
        .unwrap()
        .starts_with("spectrum-"));
    let manifest: Value =
        serde_json::from_str(&fs::read_to_string(csv.with_extension("manifest.json")).unwrap())
            .unwrap();
    assert_eq!(manifest["subcommand"], "spectrum");
    assert_eq!(manifest["config"]["alpha"], 2.0);
}

#[test]
fn simulate_is_deterministic_and_reproducible_from_manifest() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "run.toml", SHORT_RUN);
    let first = dir.path().join("a.csv");
    let second = dir.path().join("b.csv");
    let replay = dir.path().join("c.csv");
    ok(&ptbox(
        &[
            "simulate",
            "--config",
            &cfg,
            "--out",
            first.to_str().unwrap(),
        ],
        dir.path(),
    ));
    ok(&ptbox(
        &[
            "simulate",
            "--config",
            &cfg,
            "--out",
            second.to_str().unwrap(),
        ],
        dir.path(),
    ));
    let a = fs::read(&first).unwrap();
    assert_eq!(a, fs::read(&second).unwrap());

    let manifest = dir.path().join("a.manifest.json");
    ok(&ptbox(
        &[
            "simulate",
            "--config",
            manifest.to_str().unwrap(),
            "--out",
            replay.to_str().unwrap(),
        ],
        dir.path(),
    ));
    assert_eq!(a, fs::read(&replay).unwrap());

    let text = String::from_utf8(a).unwrap();
    let header: Vec<&str> = text.lines().next().unwrap().split(',').collect();
    assert_eq!(
        &header[..9],
        ["t", "L", "Ldot", "N", "E_raw", "E_over_N", "F", "x_avg", "pop_0"]
    );
    assert_eq!(header.len(), 8 + 12);
    assert_eq!(text.lines().count(), 1 + 9);
    assert!(text.ends_with('\n'));
}

#[test]
fn hermitian_manifest_replays_as_hermitian() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "run.toml", SHORT_RUN);
    let first = dir.path().join("h.csv");
    let replay = dir.path().join("r.csv");
    ok(&ptbox(
        &[
            "simulate",
            "--hermitian",
            "--config",
            &cfg,
            "--out",
            first.to_str().unwrap(),
        ],
        dir.path(),
    ));
    let text = fs::read_to_string(&first).unwrap();
    assert!(text
        .lines()
        .next()
        .unwrap()
        .ends_with(",pop_1,pop_2,pop_3,pop_4,pop_5,pop_6,pop_7,pop_8,pop_9,pop_10,pop_11,pop_12"));
    ok(&ptbox(
        &[
            "simulate",
            "--config",
            dir.path().join("h.manifest.json").to_str().unwrap(),
            "--out",
            replay.to_str().unwrap(),
        ],
        dir.path(),
    ));
    assert_eq!(text, fs::read_to_string(&replay).unwrap());
}

#[test]
fn invalid_config_reports_key_path_and_fails() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "bad.toml", "[physics]\nalpha = -1.0\n");
    let out = ptbox(&["simulate", "--config", &cfg, "--out", "-"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let err = error_line(&out);
    assert_eq!(err["error"]["kind"], "config");
    assert!(err["error"]["message"]
        .as_str()
        .unwrap()
        .contains("physics.alpha"));

    let cfg = write_config(
        dir.path(),
        "collapse.toml",
        "[trajectory]\nkind = \"contracting\"\na = 10.0\nb = 1.0\n[numerics]\nt_final = 5.0\n",
    );
    let out = ptbox(&["simulate", "--config", &cfg, "--out", "-"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(error_line(&out)["error"]["message"]
        .as_str()
        .unwrap()
        .contains("trajectory.b"));

    let missing = ptbox(&["simulate", "--config", "nope.toml"], dir.path());
    assert_eq!(missing.status.code(), Some(2));
    assert_eq!(error_line(&missing)["error"]["kind"], "io");
}

#[test]
fn berry_range_writes_one_row_per_n() {
    let dir = TempDir::new().unwrap();
    let out = ptbox(
        &[
            "berry", "--n", "1..3", "--a", "10", "--b", "1", "--alpha", "1", "--out", "-",
        ],
        dir.path(),
    );
    let text = ok(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "n,re_gamma_analytic,im_gamma_analytic,re_gamma_numeric,im_gamma_numeric,discrepancy"
    );
    assert_eq!(lines.len(), 4);
    let first: Vec<f64> = lines[1].split(',').map(|f| f.parse().unwrap()).collect();
    assert!((first[2] + 0.3648).abs() < 1e-4);

    let bad = ptbox(
        &["berry", "--n", "2", "--a", "1", "--b", "3", "--alpha", "1"],
        dir.path(),
    );
    assert_eq!(bad.status.code(), Some(2));
    assert_eq!(error_line(&bad)["error"]["kind"], "invalid_parameter");
}

#[test]
fn sweep_writes_index_and_isolates_failures() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "run.toml", SHORT_RUN);
    let sweep_dir = dir.path().join("sweep");
    let out = ptbox(
        &[
            "sweep",
            "--config",
            &cfg,
            "--axis",
            "b",
            "--values",
            "0.5,20,1",
            "--out-dir",
            sweep_dir.to_str().unwrap(),
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1));
    let index: Value =
        serde_json::from_str(&fs::read_to_string(sweep_dir.join("index.json")).unwrap()).unwrap();
    let runs = index["config"]["runs"].as_array().unwrap();
    assert_eq!(runs.len(), 3);
    assert_eq!(runs[0]["status"], "ok");
    assert_eq!(runs[1]["status"], "error");
    assert_eq!(runs[2]["status"], "ok");
    assert!(sweep_dir.join("b-000.csv").exists());
    assert!(!sweep_dir.join("b-001.csv").exists());
    assert!(sweep_dir.join("b-002.manifest.json").exists());
}

#[test]
fn oracle_check_prints_discrepancies() {
    let dir = TempDir::new().unwrap();
    let text = ok(&ptbox(&["oracle-check", "--n-max", "8"], dir.path()));
    let i2: f64 = text
        .split_whitespace()
        .find_map(|w| w.strip_prefix("max_i2_discrepancy="))
        .unwrap()
        .parse()
        .unwrap();
    assert!(i2 <= 1e-10);
}
