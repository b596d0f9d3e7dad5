use std::fs;
use std::process::{Command, Output};

use spinstar::runner::{parse_csv, parse_summary, CSV_HEADER};

fn spinstar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spinstar"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn run_writes_csv_to_stdout() {
    let out = spinstar(&["run", "--ambient", "1", "--t-max", "2", "--stride", "50"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with(CSV_HEADER));
    let samples = parse_csv(text.as_bytes()).unwrap();
    let times: Vec<f64> = samples.iter().map(|s| s.t).collect();
    assert_eq!(times.len(), 5);
    assert_eq!(times[0], 0.0);
    assert!((times[4] - 2.0).abs() < 1e-12);
    assert!(String::from_utf8_lossy(&out.stderr).contains("coherence_time="));
}

#[test]
fn run_with_config_file_and_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "ambient_count = 3\ncoupling = ising\nt_max = 1\nsample_stride = 100\n").unwrap();
    let csv = dir.path().join("out.csv");
    let out = spinstar(&[
        "run",
        "--config",
        cfg.to_str().unwrap(),
        "--ambient",
        "2",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("M=2 coupling=ising"), "{stderr}");
    let samples = parse_csv(fs::read(&csv).unwrap().as_slice()).unwrap();
    assert_eq!(samples.len(), 2);
}

#[test]
fn figure_expands_preset() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = spinstar(&["figure", "fig2b", "--out-dir", d, "--t-max", "1", "--stride", "20"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    for m in [2, 5, 8] {
        assert!(dir.path().join(format!("fig2b_M{m}.csv")).exists());
    }
    let summary = fs::read(dir.path().join("fig2b_summary.csv")).unwrap();
    let rows = parse_summary(summary.as_slice()).unwrap();
    let ms: Vec<usize> = rows.iter().map(|r| r.ambient_count).collect();
    assert_eq!(ms, [2, 5, 8]);
}

#[test]
fn sweep_over_ambient_list() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = spinstar(&[
        "sweep",
        "--ambient-list",
        "1,3",
        "--coupling",
        "xxx",
        "--ambient-state",
        "thermal",
        "--decay-jump",
        "sigma-x",
        "--t-max",
        "1",
        "--out-dir",
        d,
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(dir.path().join("sweep_M1.csv").exists());
    assert!(dir.path().join("sweep_M3.csv").exists());
    let summary = fs::read_to_string(dir.path().join("sweep_summary.csv")).unwrap();
    assert!(summary.starts_with("M,coherence_time,revivals\n1,unreached,0\n3,unreached,0\n"));
}

#[test]
fn configuration_errors_exit_with_two() {
    for args in [
        &["run", "--coupling", "heisenberg"][..],
        &["run", "--ambient", "0"],
        &["run", "--ambient", "13"],
        &["run", "--dt", "-0.1"],
        &["run", "--gamma", "-1"],
        &["figure", "fig9"],
    ] {
        let out = spinstar(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    fs::write(&cfg, "speed = 3\n").unwrap();
    let out = spinstar(&["run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown key"));
}

#[test]
fn io_errors_exit_with_four() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("no/such/dir/out.csv");
    let out = spinstar(&["run", "--t-max", "0.1", "--out", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no/such/dir"));
    let out = spinstar(&["run", "--config", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
}
