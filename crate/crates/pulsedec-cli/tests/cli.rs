//! Behavior of the installed binary: exit codes, file outputs, determinism.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pulsedec"))
}

fn temp_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("pulsedec_cli_{name}_{}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_config(dir: &Path, body: &str) -> PathBuf {
    let path = dir.join("test.cfg");
    fs::write(&path, body).unwrap();
    path
}

fn run(cmd: &mut Command) -> Output {
    cmd.output().expect("binary runs")
}

const SMALL_BYPASS: &str = "\
[scenario]
count = 3
master_seed = 11
fs_hz = 4000
duration_s = 12
f_min_hz = 0.5
f_max_hz = 120
n_choices = 2

[experiment]
demod = bypass
";

#[test]
fn help_exits_zero() {
    let out = run(bin().arg("--help"));
    assert!(out.status.success());
}

#[test]
fn unknown_flag_is_usage_error() {
    let out = run(bin().args(["decompose", "--definitely-not-a-flag"]));
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn invalid_config_reports_line_and_exits_2() {
    let dir = temp_dir("badcfg");
    let cfg = write_config(&dir, "[scenario]\ncount = many\n");
    let out = run(bin().args([
        "generate",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.join("out").to_str().unwrap(),
    ]));
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("line 2"), "stderr: {stderr}");
}

#[test]
fn generate_is_idempotent() {
    let dir = temp_dir("gen");
    let cfg = write_config(&dir, SMALL_BYPASS);
    let out_dir = dir.join("corpus");
    for _ in 0..2 {
        let out = run(bin().args([
            "generate",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            out_dir.to_str().unwrap(),
        ]));
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let manifest = fs::read(out_dir.join("manifest.json")).unwrap();
    let wave = fs::read(out_dir.join("sig_0000.bin")).unwrap();
    // Re-run into a second directory and compare bytes.
    let out_dir2 = dir.join("corpus2");
    run(bin().args([
        "generate",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out_dir2.to_str().unwrap(),
    ]));
    assert_eq!(manifest, fs::read(out_dir2.join("manifest.json")).unwrap());
    assert_eq!(wave, fs::read(out_dir2.join("sig_0000.bin")).unwrap());
}

#[test]
fn decompose_rejects_empty_file() {
    let dir = temp_dir("empty");
    let path = dir.join("empty.bin");
    fs::write(&path, []).unwrap();
    let out = run(bin().args(["decompose", path.to_str().unwrap()]));
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn decompose_two_component_fixture_with_json() {
    // A modulating-signal fixture with lines at 0.5 and 8.25 Hz.
    let dir = temp_dir("fixture");
    let fs_hz = 2000.0;
    let dur = 24.0;
    let a = pulsedec::testgen::gen_pulse_wave(
        &pulsedec::PulseWaveParams::new(0.5, 0.0, 0.5, 0.02).unwrap(),
        fs_hz,
        dur,
    )
    .unwrap();
    let b = pulsedec::testgen::gen_pulse_wave(
        &pulsedec::PulseWaveParams::new(8.25, 0.0, 0.5, 0.01).unwrap(),
        fs_hz,
        dur,
    )
    .unwrap();
    let sum: Vec<f64> = a
        .samples()
        .iter()
        .zip(b.samples())
        .map(|(x, y)| x + y)
        .collect();
    let u = pulsedec::SampledSignal::new(sum, fs_hz).unwrap();
    let wave = dir.join("two.bin");
    pulsedec::wavefile::write_waveform(&wave, &u).unwrap();

    let out = run(bin().args([
        "decompose",
        wave.to_str().unwrap(),
        "--n",
        "2",
        "--bypass-demod",
        "--json",
    ]));
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let comps = json["components"].as_array().unwrap();
    assert_eq!(comps.len(), 2);
    let f0 = comps[0]["f_hz"].as_f64().unwrap();
    let f1 = comps[1]["f_hz"].as_f64().unwrap();
    assert!((f0 - 0.5).abs() < 0.1, "f0 {f0}");
    assert!((f1 - 8.25).abs() < 0.1, "f1 {f1}");
    assert!(json["diagnostics"]["peaks"].as_array().unwrap().len() >= 2);

    // Table mode prints one row per component.
    let out = run(bin().args([
        "decompose",
        wave.to_str().unwrap(),
        "--n",
        "2",
        "--bypass-demod",
    ]));
    assert!(out.status.success());
    let table = String::from_utf8_lossy(&out.stdout);
    assert_eq!(table.lines().count(), 3, "{table}");
}

#[test]
fn experiment_outputs_are_worker_invariant() {
    let dir = temp_dir("exp");
    let cfg = write_config(&dir, SMALL_BYPASS);
    let mut outputs = Vec::new();
    for (label, workers) in [("a", "1"), ("b", "3"), ("c", "1")] {
        let out_dir = dir.join(label);
        let out = run(bin().args([
            "experiment",
            "--config",
            cfg.to_str().unwrap(),
            "--workers",
            workers,
            "--out",
            out_dir.to_str().unwrap(),
        ]));
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        outputs.push((
            fs::read(out_dir.join("errors.csv")).unwrap(),
            fs::read(out_dir.join("boxstats.txt")).unwrap(),
        ));
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[0], outputs[2]);
    let csv = String::from_utf8_lossy(&outputs[0].0).to_string();
    assert!(csv.starts_with("signal_id,N,i,f_true,f_est,k_true,k_est,delta_f,delta_k,matched"));
}
