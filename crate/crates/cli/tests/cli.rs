//! End-to-end command-line behavior: exit codes, file round trips, and the
//! output-directory override.

use std::path::Path;
use std::process::Command;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tlwavelab::grid::{random_band_limited, GridSpec};
use tlwavelab::io::{read_grid, write_grid};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tlwavelab"))
}

fn write_test_grid(path: &Path, seed: u64) {
    let spec = GridSpec::with_default_window(1, 3, 9).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = random_band_limited(&spec, &mut rng);
    write_grid(path, &f).unwrap();
}

#[test]
fn usage_error_exits_2() {
    let out = bin().arg("--definitely-not-a-flag").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn corrupted_grid_file_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.tlwg");
    std::fs::write(&path, b"XXXXnot a grid file at all").unwrap();
    let out = bin()
        .args(["norm", "--which", "l1", "--input"])
        .arg(&path)
        .arg("--out")
        .arg(dir.path())
        .env_remove("TLWAVELAB_OUT")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn missing_input_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["riesz", "--ell", "1", "--input", "/nonexistent/f.tlwg"])
        .arg("--out")
        .arg(dir.path())
        .env_remove("TLWAVELAB_OUT")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn analyze_synthesize_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let grid_in = dir.path().join("f.tlwg");
    let coeffs = dir.path().join("c.csv");
    let grid_out = dir.path().join("g.tlwg");
    write_test_grid(&grid_in, 42);

    let st = bin()
        .args(["analyze", "--input"])
        .arg(&grid_in)
        .arg("--output")
        .arg(&coeffs)
        .env_remove("TLWAVELAB_OUT")
        .status()
        .unwrap();
    assert!(st.success());

    let st = bin()
        .args(["synthesize", "--input"])
        .arg(&coeffs)
        .arg("--output")
        .arg(&grid_out)
        .env_remove("TLWAVELAB_OUT")
        .status()
        .unwrap();
    assert!(st.success());

    let f = read_grid(&grid_in).unwrap();
    let g = read_grid(&grid_out).unwrap();
    let amp = f.samples().iter().map(|v| v.norm()).fold(0.0, f64::max);
    let mut worst = 0.0f64;
    for (a, b) in f.samples().iter().zip(g.samples()) {
        worst = worst.max((a - b).norm());
    }
    assert!(worst <= 1e-9 * amp, "file round trip error {worst:e}");
}

#[test]
fn riesz_square_sum_check_passes_on_zero_mean() {
    let dir = tempfile::tempdir().unwrap();
    let grid_in = dir.path().join("f.tlwg");
    write_test_grid(&grid_in, 7);
    let st = bin()
        .args(["riesz", "--ell", "1", "--check-square-sum", "--input"])
        .arg(&grid_in)
        .arg("--out")
        .arg(dir.path())
        .env_remove("TLWAVELAB_OUT")
        .status()
        .unwrap();
    assert!(st.success());
}

#[test]
fn norm_report_carries_schema_and_value() {
    let dir = tempfile::tempdir().unwrap();
    let grid_in = dir.path().join("f.tlwg");
    write_test_grid(&grid_in, 9);
    let st = bin()
        .args(["norm", "--which", "f01q", "--q", "2", "--input"])
        .arg(&grid_in)
        .arg("--out")
        .arg(dir.path())
        .env_remove("TLWAVELAB_OUT")
        .status()
        .unwrap();
    assert!(st.success());
    let text = std::fs::read_to_string(dir.path().join("norm_f01q.json")).unwrap();
    assert!(text.contains("\"schema\": \"tlwavelab/1\""));
    assert!(text.contains("\"name\": \"f01q\""));
}

#[test]
fn out_env_var_overrides_flag() {
    let dir = tempfile::tempdir().unwrap();
    let flag_dir = dir.path().join("by-flag");
    let env_dir = dir.path().join("by-env");
    std::fs::create_dir_all(&flag_dir).unwrap();
    let st = bin()
        .args(["wavelet", "table", "--points", "64", "--out"])
        .arg(&flag_dir)
        .env("TLWAVELAB_OUT", &env_dir)
        .status()
        .unwrap();
    assert!(st.success());
    assert!(env_dir.join("wavelet_table.csv").exists());
    assert!(!flag_dir.join("wavelet_table.csv").exists());
}

#[test]
fn verify_passes_in_both_dimensions() {
    for dim in ["1", "2"] {
        let dir = tempfile::tempdir().unwrap();
        let out = bin()
            .args(["verify", "--dim", dim, "--out"])
            .arg(dir.path())
            .env_remove("TLWAVELAB_OUT")
            .output()
            .unwrap();
        assert!(
            out.status.success(),
            "verify --dim {dim}: {}",
            String::from_utf8_lossy(&out.stdout)
        );
        let text = std::fs::read_to_string(dir.path().join("verify.json")).unwrap();
        assert!(text.contains("\"schema\": \"tlwavelab/1\""));
        assert!(!text.contains("\"passed\": false"));
    }
}

#[test]
fn wavelet_build_reports_and_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["wavelet", "build", "--out"])
        .arg(dir.path())
        .env_remove("TLWAVELAB_OUT")
        .output()
        .unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("profile-partition-identity"));
    assert!(dir.path().join("wavelet_build.json").exists());
}

#[test]
fn wavelet_build_degraded_tolerance_still_structured() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["wavelet", "build", "--quad-tol", "1e-2", "--out"])
        .arg(dir.path())
        .env_remove("TLWAVELAB_OUT")
        .output()
        .unwrap();
    // margins may degrade, but the run must still produce the report
    assert!(dir.path().join("wavelet_build.json").exists());
    let text = std::fs::read_to_string(dir.path().join("wavelet_build.json")).unwrap();
    assert!(text.contains("\"quad_tol\": 0.01"));
    let _ = out;
}
