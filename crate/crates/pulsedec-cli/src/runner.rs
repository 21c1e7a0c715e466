//! Orchestration of the corpus pipeline: generate → (demodulate | bypass) →
//! decompose → metrics. Per-signal work is independent and runs on a rayon
//! pool sized by the `workers` setting; results are merged in signal order,
//! so outputs are identical at any worker count.

use crate::config::{DemodMode, FileConfig};
use anyhow::{anyhow, bail, Context, Result};
use pulsedec::decompose::{decompose, Decomposition};
use pulsedec::demod::{build_carrier_template, demodulate, estimate_carrier_frequency};
use pulsedec::metrics::{match_components, relative_errors, summarize, ErrorRecord};
use pulsedec::testgen::{gen_modulating, gen_test_signal, sample_scenarios};
use pulsedec::wavefile::{
    read_waveform, signal_file_name, signal_id, Manifest, ManifestEntry,
};
use pulsedec::{ModulationSpec, SampledSignal};
use rayon::prelude::*;
use serde::Serialize;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::time::Instant;

/// Writes the corpus to `output_dir`: one waveform file per signal plus a
/// manifest recording every spec field and seed. Deterministic for a fixed
/// scenario, so re-running overwrites the files with identical bytes.
pub fn run_generate(cfg: &FileConfig, out_dir: &Path) -> Result<()> {
    let specs = sample_scenarios(&cfg.scenario)?;
    fs::create_dir_all(out_dir)
        .with_context(|| format!("creating {}", out_dir.display()))?;

    let manifest = Manifest {
        scenario: cfg.scenario.clone(),
        signals: specs
            .iter()
            .enumerate()
            .map(|(i, spec)| ManifestEntry {
                id: signal_id(i),
                spec: spec.clone(),
            })
            .collect(),
    };
    manifest.write_json(&out_dir.join("manifest.json"))?;

    for (i, spec) in specs.iter().enumerate() {
        let u = gen_test_signal(spec)?;
        pulsedec::wavefile::write_waveform(&out_dir.join(signal_file_name(i)), &u)?;
    }
    eprintln!(
        "wrote {} waveforms and manifest.json to {}",
        specs.len(),
        out_dir.display()
    );
    Ok(())
}

/// Demodulates a voltage waveform down to its modulating signal.
pub fn demodulate_waveform(u: &SampledSignal) -> pulsedec::Result<SampledSignal> {
    let f_c = estimate_carrier_frequency(u)?;
    let est = build_carrier_template(u, f_c)?;
    demodulate(u, &est)
}

#[derive(Debug, Serialize)]
pub struct DecomposeReport {
    pub file: String,
    pub fs: f64,
    pub n_samples: usize,
    pub bypass_demod: bool,
    pub components: Vec<ComponentRow>,
    pub warnings: Vec<String>,
    pub diagnostics: pulsedec::decompose::Diagnostics,
}

#[derive(Debug, Serialize)]
pub struct ComponentRow {
    pub f_hz: f64,
    pub phase_rad: f64,
    pub duty: f64,
    pub amplitude: f64,
}

/// Decomposes one waveform file; `bypass` means the file already contains a
/// modulating signal rather than a voltage waveform.
pub fn run_decompose_file(
    path: &Path,
    n_components: usize,
    bypass: bool,
    json: bool,
    cfg: &FileConfig,
) -> Result<()> {
    let raw = read_waveform(path)?;
    let input = if bypass {
        raw
    } else {
        demodulate_waveform(&raw).context("demodulation failed")?
    };
    let opts = cfg.decompose.options_for(n_components);
    let result = decompose(&input, &opts)?;

    let report = DecomposeReport {
        file: path.display().to_string(),
        fs: input.fs(),
        n_samples: input.len(),
        bypass_demod: bypass,
        components: result
            .components
            .iter()
            .map(|c| ComponentRow {
                f_hz: c.f_hz(),
                phase_rad: c.phase_rad(),
                duty: c.duty(),
                amplitude: c.amplitude(),
            })
            .collect(),
        warnings: result.diagnostics.warnings.clone(),
        diagnostics: result.diagnostics,
    };

    if json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        println!("{:>3}  {:>12}  {:>10}  {:>6}  {:>12}", "i", "f [Hz]", "phase [rad]", "duty", "amplitude");
        for (i, c) in report.components.iter().enumerate() {
            println!(
                "{i:>3}  {:>12.6}  {:>10.4}  {:>6.2}  {:>12.6}",
                c.f_hz, c.phase_rad, c.duty, c.amplitude
            );
        }
        for w in &report.warnings {
            eprintln!("warning: {w}");
        }
    }
    Ok(())
}

struct SignalOutcome {
    records: Vec<ErrorRecord>,
    seconds: f64,
    error: Option<String>,
}

fn process_signal(
    index: usize,
    spec: &ModulationSpec,
    cfg: &FileConfig,
) -> Result<(Vec<ErrorRecord>, Decomposition), String> {
    let truth = spec.components();
    let input = match cfg.experiment.demod {
        DemodMode::Bypass => gen_modulating(spec).map_err(|e| e.to_string())?,
        DemodMode::Full => {
            let u = gen_test_signal(spec).map_err(|e| e.to_string())?;
            demodulate_waveform(&u).map_err(|e| e.to_string())?
        }
    };
    let opts = cfg.decompose.options_for(truth.len());
    let result = decompose(&input, &opts).map_err(|e| e.to_string())?;
    let pairing = match_components(&result.components, truth);
    let records = relative_errors(&signal_id(index), truth, &result.components, &pairing);
    Ok((records, result))
}

/// Full experiment over the configured corpus. Emits `errors.csv`,
/// `boxstats.txt`, `run.log`, `manifest.json` and `effective_config.json` in
/// the output directory. Fails when more than 10 % of signals error out.
pub fn run_experiment(cfg: &FileConfig, out_dir: &Path) -> Result<()> {
    let started = Instant::now();
    fs::create_dir_all(out_dir)
        .with_context(|| format!("creating {}", out_dir.display()))?;

    fs::write(
        out_dir.join("effective_config.json"),
        serde_json::to_string_pretty(cfg)?,
    )?;

    let t_gen = Instant::now();
    let specs = sample_scenarios(&cfg.scenario)?;
    let manifest = Manifest {
        scenario: cfg.scenario.clone(),
        signals: specs
            .iter()
            .enumerate()
            .map(|(i, spec)| ManifestEntry {
                id: signal_id(i),
                spec: spec.clone(),
            })
            .collect(),
    };
    manifest.write_json(&out_dir.join("manifest.json"))?;
    if cfg.experiment.write_waveforms {
        let wave_dir = out_dir.join("waveforms");
        fs::create_dir_all(&wave_dir)?;
        for (i, spec) in specs.iter().enumerate() {
            let u = gen_test_signal(spec)?;
            pulsedec::wavefile::write_waveform(&wave_dir.join(signal_file_name(i)), &u)?;
        }
    }
    let gen_seconds = t_gen.elapsed().as_secs_f64();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.experiment.workers)
        .build()
        .map_err(|e| anyhow!("cannot build worker pool: {e}"))?;

    let t_proc = Instant::now();
    let outcomes: Vec<SignalOutcome> = pool.install(|| {
        specs
            .par_iter()
            .enumerate()
            .map(|(i, spec)| {
                let t = Instant::now();
                match process_signal(i, spec, cfg) {
                    Ok((records, _)) => SignalOutcome {
                        records,
                        seconds: t.elapsed().as_secs_f64(),
                        error: None,
                    },
                    Err(e) => SignalOutcome {
                        records: Vec::new(),
                        seconds: t.elapsed().as_secs_f64(),
                        error: Some(e),
                    },
                }
            })
            .collect()
    });
    let proc_seconds = t_proc.elapsed().as_secs_f64();

    let records: Vec<ErrorRecord> = outcomes
        .iter()
        .flat_map(|o| o.records.iter().cloned())
        .collect();
    let failures: Vec<(usize, &str)> = outcomes
        .iter()
        .enumerate()
        .filter_map(|(i, o)| o.error.as_deref().map(|e| (i, e)))
        .collect();

    let mut csv = Vec::new();
    pulsedec::metrics::write_csv(&records, &mut csv)?;
    fs::write(out_dir.join("errors.csv"), &csv)?;

    fs::write(out_dir.join("boxstats.txt"), render_boxstats(&records)?)?;

    let mut log = String::new();
    writeln!(log, "signals: {}", specs.len())?;
    writeln!(log, "demod mode: {:?}", cfg.experiment.demod)?;
    writeln!(log, "workers: {}", cfg.experiment.workers)?;
    writeln!(log, "generate: {gen_seconds:.3} s")?;
    writeln!(log, "process (wall): {proc_seconds:.3} s")?;
    writeln!(
        log,
        "process (cpu-equivalent): {:.3} s",
        outcomes.iter().map(|o| o.seconds).sum::<f64>()
    )?;
    writeln!(log, "total (wall): {:.3} s", started.elapsed().as_secs_f64())?;
    writeln!(log, "failed signals: {}", failures.len())?;
    for (i, e) in &failures {
        writeln!(log, "  {}: {e}", signal_id(*i))?;
    }
    fs::write(out_dir.join("run.log"), log)?;

    eprintln!(
        "experiment finished: {} signals, {} failures, results in {}",
        specs.len(),
        failures.len(),
        out_dir.display()
    );

    if failures.len() * 10 > specs.len() {
        bail!(
            "{} of {} signals failed (more than 10 %)",
            failures.len(),
            specs.len()
        );
    }
    Ok(())
}

/// Box statistics of δf and δk per component-count group, as aligned text.
fn render_boxstats(records: &[ErrorRecord]) -> Result<String> {
    let mut out = String::new();
    writeln!(out, "# error distribution summary")?;
    writeln!(
        out,
        "# groups by N (true component count); matched components only"
    )?;
    writeln!(
        out,
        "{:<6} {:<8} {:>6} {:>12} {:>12} {:>12} {:>12} {:>12} {:>12} {:>9}",
        "group", "metric", "n", "mean", "median", "q1", "q3", "whisk_lo", "whisk_hi", "outliers"
    )?;
    let mut groups: Vec<usize> = records.iter().map(|r| r.n_components).collect();
    groups.sort_unstable();
    groups.dedup();
    for n in groups {
        for (metric, select) in [
            ("delta_f", &(|r: &ErrorRecord| r.delta_f) as &dyn Fn(&ErrorRecord) -> f64),
            ("delta_k", &|r: &ErrorRecord| r.delta_k),
        ] {
            let values: Vec<f64> = records
                .iter()
                .filter(|r| r.n_components == n && r.matched)
                .map(select)
                .collect();
            if values.is_empty() {
                writeln!(out, "N={n:<4} {metric:<8} {:>6}", 0)?;
                continue;
            }
            let s = summarize(&values)?;
            writeln!(
                out,
                "N={n:<4} {metric:<8} {:>6} {:>12.6} {:>12.6} {:>12.6} {:>12.6} {:>12.6} {:>12.6} {:>9}",
                s.n, s.mean, s.median, s.q1, s.q3, s.whisker_lo, s.whisker_hi, s.outlier_count
            )?;
        }
    }
    Ok(out)
}
