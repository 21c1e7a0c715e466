//! Flat `key = value` configuration files with `[section]` headers.
//!
//! Three sections are recognized: `[scenario]` (corpus parameters),
//! `[decompose]` (estimator knobs) and `[experiment]` (run orchestration).
//! Every key has a default, so an empty file is a valid desk-scale setup.
//! Unknown sections or keys, and malformed values, are reported with their
//! line number.

use anyhow::{anyhow, bail, Result};
use pulsedec::decompose::DecomposeOptions;
use pulsedec::testgen::{PhaseMode, ScenarioConfig};
use pulsedec::CarrierSpec;
use serde::Serialize;
use std::path::{Path, PathBuf};

/// Estimator knobs without the per-signal component count.
#[derive(Debug, Clone, Serialize)]
pub struct DecomposePrefs {
    pub duty_resolution: f64,
    pub amp_steps: usize,
    pub reject_multiples: Vec<u32>,
    pub freq_tolerance_hz: Option<f64>,
    pub energy_neighborhood_bins: Option<usize>,
}

impl Default for DecomposePrefs {
    fn default() -> Self {
        let d = DecomposeOptions::new(1);
        Self {
            duty_resolution: d.duty_resolution,
            amp_steps: d.amp_steps,
            reject_multiples: d.freq_reject_multiples,
            freq_tolerance_hz: None,
            energy_neighborhood_bins: None,
        }
    }
}

impl DecomposePrefs {
    pub fn options_for(&self, n_components: usize) -> DecomposeOptions {
        DecomposeOptions {
            n_components,
            duty_resolution: self.duty_resolution,
            amp_steps: self.amp_steps,
            freq_reject_multiples: self.reject_multiples.clone(),
            freq_tolerance_hz: self.freq_tolerance_hz,
            energy_neighborhood_bins: self.energy_neighborhood_bins,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DemodMode {
    /// Demodulate the voltage waveform before decomposing.
    Full,
    /// Feed the true modulating signal straight to the decomposer.
    Bypass,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentPrefs {
    pub demod: DemodMode,
    pub output_dir: PathBuf,
    /// 0 means one worker per logical CPU.
    pub workers: usize,
    pub write_waveforms: bool,
}

impl Default for ExperimentPrefs {
    fn default() -> Self {
        Self {
            demod: DemodMode::Full,
            output_dir: PathBuf::from("out"),
            workers: 0,
            write_waveforms: false,
        }
    }
}

/// Fully resolved configuration of a run.
#[derive(Debug, Clone, Serialize, Default)]
pub struct FileConfig {
    pub scenario: ScenarioConfig,
    pub decompose: DecomposePrefs,
    pub experiment: ExperimentPrefs,
}

pub fn load_config(path: &Path) -> Result<FileConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| anyhow!("cannot read config {}: {e}", path.display()))?;
    parse_config(&text).map_err(|e| anyhow!("{}: {e}", path.display()))
}

pub fn parse_config(text: &str) -> Result<FileConfig> {
    let mut cfg = FileConfig::default();
    let mut carrier = (50.0, 0.8, 230.0);
    let mut section = String::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with(';') {
            continue;
        }
        if let Some(name) = line.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| anyhow!("line {line_no}: unterminated section header"))?;
            section = name.trim().to_string();
            if !matches!(section.as_str(), "scenario" | "decompose" | "experiment") {
                bail!("line {line_no}: unknown section [{section}]");
            }
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| anyhow!("line {line_no}: expected `key = value`"))?;
        let key = key.trim();
        let value = value.trim();
        apply_key(&mut cfg, &mut carrier, &section, key, value)
            .map_err(|e| anyhow!("line {line_no}: {e}"))?;
    }

    cfg.scenario.carrier = CarrierSpec::new(carrier.0, carrier.1, carrier.2)
        .map_err(|e| anyhow!("invalid carrier: {e}"))?;
    cfg.scenario
        .validate()
        .map_err(|e| anyhow!("invalid scenario: {e}"))?;
    cfg.decompose
        .options_for(1)
        .validate()
        .map_err(|e| anyhow!("invalid decompose settings: {e}"))?;
    Ok(cfg)
}

fn apply_key(
    cfg: &mut FileConfig,
    carrier: &mut (f64, f64, f64),
    section: &str,
    key: &str,
    value: &str,
) -> Result<()> {
    match (section, key) {
        ("scenario", "count") => cfg.scenario.count = parse(value)?,
        ("scenario", "master_seed") => cfg.scenario.master_seed = parse(value)?,
        ("scenario", "fs_hz") => cfg.scenario.fs = parse(value)?,
        ("scenario", "duration_s") => cfg.scenario.duration = parse(value)?,
        ("scenario", "k_min") => cfg.scenario.k_range[0] = parse(value)?,
        ("scenario", "k_max") => cfg.scenario.k_range[1] = parse(value)?,
        ("scenario", "f_min_hz") => cfg.scenario.f_range[0] = parse(value)?,
        ("scenario", "f_max_hz") => cfg.scenario.f_range[1] = parse(value)?,
        ("scenario", "duty_choices") => cfg.scenario.duty_choices = parse_list(value)?,
        ("scenario", "n_choices") => cfg.scenario.n_choices = parse_list(value)?,
        ("scenario", "noise_std") => cfg.scenario.noise_std = parse(value)?,
        ("scenario", "phase_mode") => {
            cfg.scenario.phase_mode = match value {
                "random" => PhaseMode::Random,
                "fixed0" => PhaseMode::Fixed0,
                other => bail!("phase_mode must be `random` or `fixed0`, got `{other}`"),
            }
        }
        ("scenario", "carrier_f_hz") => carrier.0 = parse(value)?,
        ("scenario", "carrier_clip") => carrier.1 = parse(value)?,
        ("scenario", "carrier_u_rms") => carrier.2 = parse(value)?,
        ("decompose", "duty_resolution") => cfg.decompose.duty_resolution = parse(value)?,
        ("decompose", "amp_steps") => cfg.decompose.amp_steps = parse(value)?,
        ("decompose", "reject_multiples") => {
            cfg.decompose.reject_multiples = parse_list(value)?
        }
        ("decompose", "freq_tolerance_hz") => {
            cfg.decompose.freq_tolerance_hz = parse_auto(value)?
        }
        ("decompose", "energy_neighborhood_bins") => {
            cfg.decompose.energy_neighborhood_bins = parse_auto(value)?
        }
        ("experiment", "demod") => {
            cfg.experiment.demod = match value {
                "full" => DemodMode::Full,
                "bypass" => DemodMode::Bypass,
                other => bail!("demod must be `full` or `bypass`, got `{other}`"),
            }
        }
        ("experiment", "output_dir") => cfg.experiment.output_dir = PathBuf::from(value),
        ("experiment", "workers") => cfg.experiment.workers = parse(value)?,
        ("experiment", "write_waveforms") => {
            cfg.experiment.write_waveforms = match value {
                "true" => true,
                "false" => false,
                other => bail!("write_waveforms must be `true` or `false`, got `{other}`"),
            }
        }
        ("", key) => bail!("key `{key}` appears before any [section]"),
        (section, key) => bail!("unknown key `{key}` in section [{section}]"),
    }
    Ok(())
}

fn parse<T: std::str::FromStr>(value: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    value
        .parse()
        .map_err(|e| anyhow!("cannot parse `{value}`: {e}"))
}

fn parse_list<T: std::str::FromStr>(value: &str) -> Result<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    value.split(',').map(|v| parse(v.trim())).collect()
}

fn parse_auto<T: std::str::FromStr>(value: &str) -> Result<Option<T>>
where
    T::Err: std::fmt::Display,
{
    if value == "auto" {
        Ok(None)
    } else {
        parse(value).map(Some)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_is_desk_default() {
        let cfg = parse_config("").unwrap();
        assert_eq!(cfg.scenario.count, 100);
        assert_eq!(cfg.scenario.fs, 10_000.0);
        assert_eq!(cfg.experiment.demod, DemodMode::Full);
    }

    #[test]
    fn full_config_round_trip() {
        let text = "\
# desk corpus
[scenario]
count = 10
master_seed = 7
fs_hz = 4000
duration_s = 20
k_min = 1e-3
k_max = 2e-2
f_min_hz = 0.5
f_max_hz = 120
duty_choices = 0.2,0.5,0.8
phase_mode = fixed0
n_choices = 2,3
noise_std = 0
carrier_f_hz = 60
carrier_clip = 0.9
carrier_u_rms = 120

[decompose]
duty_resolution = 0.02
amp_steps = 100
reject_multiples = 2,3
freq_tolerance_hz = 0.5
energy_neighborhood_bins = auto

[experiment]
demod = bypass
output_dir = /tmp/run
workers = 3
write_waveforms = true
";
        let cfg = parse_config(text).unwrap();
        assert_eq!(cfg.scenario.count, 10);
        assert_eq!(cfg.scenario.duty_choices, vec![0.2, 0.5, 0.8]);
        assert_eq!(cfg.scenario.phase_mode, PhaseMode::Fixed0);
        assert_eq!(cfg.scenario.carrier.f_hz(), 60.0);
        assert_eq!(cfg.decompose.amp_steps, 100);
        assert_eq!(cfg.decompose.freq_tolerance_hz, Some(0.5));
        assert_eq!(cfg.experiment.demod, DemodMode::Bypass);
        assert_eq!(cfg.experiment.workers, 3);
        assert!(cfg.experiment.write_waveforms);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = parse_config("[scenario]\ncount = ten\n").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
        let err = parse_config("[scenario]\nbogus = 1\n").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
        let err = parse_config("[nope]\n").unwrap_err();
        assert!(err.to_string().contains("line 1"), "{err}");
        let err = parse_config("count = 5\n").unwrap_err();
        assert!(err.to_string().contains("before any"), "{err}");
    }

    #[test]
    fn semantic_validation_applies() {
        let err = parse_config("[scenario]\nf_max_hz = 9000\n").unwrap_err();
        assert!(err.to_string().contains("Nyquist"), "{err}");
    }
}
