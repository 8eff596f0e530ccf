//! End-to-end runs of the `polariton` binary: exit codes, output layout and
//! field-file handling.

use polariton::kerr::format::{write_binary, write_text};
use polariton::kerr::ScalarField3D;
use serde_json::Value;
use std::path::Path;
use std::process::{Command, Output};

fn polariton(args: &[&str], out: &Path, env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_polariton"));
    cmd.args(args).arg("--out").arg(out).env_remove("POLARITON_SEED").env_remove("POLARITON_THREADS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().unwrap()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_slice(&std::fs::read(path).unwrap()).unwrap()
}

fn gaussian(n: usize, h: f64, shift: [f64; 3]) -> ScalarField3D {
    let half = h * (n - 1) as f64 / 2.0;
    let origin = [shift[0] - half, shift[1] - half, shift[2] - half];
    ScalarField3D::from_fn([n; 3], [h; 3], origin, |[x, y, z]| {
        let (x, y, z) = (x - shift[0], y - shift[1], z - shift[2]);
        (-(x * x + y * y + z * z) / (2.0 * (0.2e-6f64).powi(2))).exp()
    })
    .unwrap()
}

fn toml_path(p: &Path) -> String {
    format!("\"{}\"", p.display())
}

#[test]
fn unknown_config_key_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = polariton(&["critical", "--set", "critical.nonsense=1"], dir.path(), &[]);
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn missing_config_file_and_bad_env_are_config_errors() {
    let dir = tempfile::tempdir().unwrap();
    let o = polariton(&["critical", "--config", "/nonexistent/run.toml"], dir.path(), &[]);
    assert_eq!(o.status.code(), Some(2));
    let o = polariton(&["critical"], dir.path(), &[("POLARITON_SEED", "not-a-number")]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn invalid_values_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let o = polariton(&["phase-diagram", "--set", "phase_diagram.t.points=0"], dir.path(), &[]);
    assert_eq!(o.status.code(), Some(2));
    let o = polariton(&["kerr"], dir.path(), &[]);
    assert_eq!(o.status.code(), Some(2), "kerr without a mode file");
}

#[test]
fn validate_passes_and_fails_on_tight_tolerances() {
    let dir = tempfile::tempdir().unwrap();
    let ok = polariton(&["validate"], &dir.path().join("ok"), &[]);
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stdout));
    let report = read_json(&dir.path().join("ok/validate.json"));
    let checks = report["results"]["checks"].as_array().unwrap();
    assert!(checks.len() >= 10);
    assert!(checks.iter().all(|c| c["pass"] == Value::Bool(true)));

    let bad = polariton(&["validate", "--tolerance-scale", "1e-30"], &dir.path().join("bad"), &[]);
    assert_eq!(bad.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&bad.stdout).contains("FAIL"));
}

#[test]
fn zero_mode_is_a_numerical_error() {
    let dir = tempfile::tempdir().unwrap();
    let zero = ScalarField3D::new([3; 3], [1e-7; 3], [0.0; 3], vec![0.0; 27]).unwrap();
    let path = dir.path().join("zero.bin");
    write_binary(&zero, &path).unwrap();
    let o = polariton(&["kerr", "--set", &format!("kerr.phi={}", toml_path(&path))], &dir.path().join("out"), &[]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn critical_writes_csv_metadata_and_snapshot() {
    let dir = tempfile::tempdir().unwrap();
    let o = polariton(
        &["critical", "--set", "critical.big_n=[1, 3]", "--seed", "5", "--physical-units"],
        dir.path(),
        &[("POLARITON_SEED", "99")],
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.path().join("critical.csv")).unwrap();
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().starts_with("N,detuning,t_c"));
    assert_eq!(lines.count(), 2);
    // flags beat the environment
    let snapshot = std::fs::read_to_string(dir.path().join("config.toml")).unwrap();
    assert!(snapshot.contains("seed = 5"), "{snapshot}");
    let meta = read_json(&dir.path().join("metadata.json"));
    assert_eq!(meta["command"], "critical");
    assert!(dir.path().join("timing.json").exists());
}

#[test]
fn environment_seed_applies_without_flag() {
    let dir = tempfile::tempdir().unwrap();
    let o = polariton(&["critical", "--set", "critical.big_n=[1]"], dir.path(), &[("POLARITON_SEED", "99")]);
    assert_eq!(o.status.code(), Some(0));
    let snapshot = std::fs::read_to_string(dir.path().join("config.toml")).unwrap();
    assert!(snapshot.contains("seed = 99"), "{snapshot}");
}

#[test]
fn snapshot_reproduces_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["phase-diagram", "--set", "phase_diagram.t.points=4", "--set", "phase_diagram.mu.points=3"];
    assert!(polariton(&args, &dir.path().join("a"), &[]).status.success());
    let snap = dir.path().join("a/config.toml");
    let snap_arg = snap.to_str().unwrap();
    assert!(polariton(&["phase-diagram", "--config", snap_arg], &dir.path().join("b"), &[]).status.success());
    for f in ["phase_diagram.csv", "psi_heatmap.pgm", "metadata.json", "config.toml"] {
        assert_eq!(
            std::fs::read(dir.path().join("a").join(f)).unwrap(),
            std::fs::read(dir.path().join("b").join(f)).unwrap(),
            "{f}"
        );
    }
    let pgm = std::fs::read(dir.path().join("a/psi_heatmap.pgm")).unwrap();
    assert!(pgm.starts_with(b"P5\n"));
}

#[test]
fn kerr_reads_both_formats_and_respects_translation() {
    let dir = tempfile::tempdir().unwrap();
    let h = 0.05e-6;
    let phi = gaussian(25, h, [0.0; 3]);
    let moved = gaussian(25, h, [0.3e-6, -0.1e-6, 0.7e-6]);
    let bin = dir.path().join("phi.bin");
    let txt = dir.path().join("phi.txt");
    let moved_path = dir.path().join("moved.bin");
    write_binary(&phi, &bin).unwrap();
    write_text(&phi, &txt).unwrap();
    write_binary(&moved, &moved_path).unwrap();

    let run = |name: &str, field: &Path, chi3: &str| -> Value {
        let out = dir.path().join(name);
        let o = polariton(
            &[
                "kerr",
                "--set",
                &format!("kerr.phi={}", toml_path(field)),
                "--set",
                &format!("kerr.chi3={chi3}"),
                "--set",
                &format!("kerr.displacement_m=[{}, 0.0, 0.0]", 4.0 * h),
            ],
            &out,
            &[],
        );
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        read_json(&out.join("kerr.json"))["results"].clone()
    };
    let a = run("bin", &bin, "1e-18");
    let b = run("txt", &txt, "1e-18");
    let c = run("moved", &moved_path, "1e-18");
    let z = run("nochi", &bin, "0.0");
    assert_eq!(a["t"], b["t"]);
    assert_eq!(a["u"], b["u"]);
    let (ta, tc) = (a["t"].as_f64().unwrap(), c["t"].as_f64().unwrap());
    let (ua, uc) = (a["u"].as_f64().unwrap(), c["u"].as_f64().unwrap());
    assert!((ta - tc).abs() < 1e-12 * ta.abs());
    assert!((ua - uc).abs() < 1e-12 * ua.abs());
    assert!(ua < 0.0 && ta > 0.0 && ta < 1.0);
    assert_eq!(z["u"].as_f64().unwrap(), 0.0);
    assert_eq!(z["t"], a["t"]);
}

#[test]
fn corrupt_field_file_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.bin");
    std::fs::write(&path, b"PLFIELD\0garbage").unwrap();
    let o = polariton(&["kerr", "--set", &format!("kerr.phi={}", toml_path(&path))], &dir.path().join("out"), &[]);
    assert_eq!(o.status.code(), Some(2));
}
