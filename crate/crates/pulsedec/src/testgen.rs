//! Test-signal synthesis: clipped-cosine carriers, pulse-wave modulating
//! signals, amplitude-modulated test signals and randomized scenario
//! sampling, all deterministic under a fixed seed.

use crate::error::{Error, Result};
use crate::model::{unit_clipped_rms, CarrierSpec, ModulationSpec, PulseWaveParams, SampledSignal};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// Scale factor in volts that makes a clipped cosine with clipping level
/// `clip_level` reach the target rms `u_rms`, from the closed-form rms of the
/// unit clipped cosine over one exact period.
pub fn solve_ku(clip_level: f64, u_rms: f64, f_c_hz: f64) -> Result<f64> {
    if !(u_rms > 0.0) || !(f_c_hz > 0.0) {
        return Err(Error::InvalidInput(
            "carrier rms and frequency must be positive".into(),
        ));
    }
    Ok(u_rms / unit_clipped_rms(clip_level)?)
}

/// Samples of the carrier k_u · clamp(cos(2π·f_c·t), ±m) over `duration`
/// seconds at `fs` Sa/s.
pub fn gen_clipped_cosine(spec: &CarrierSpec, fs: f64, duration: f64) -> Result<SampledSignal> {
    if fs <= 2.0 * spec.f_hz() {
        return Err(Error::Aliasing {
            f_hz: spec.f_hz(),
            fs,
        });
    }
    let n = sample_count(fs, duration)?;
    let (k_u, m, f) = (spec.k_u(), spec.clip_level(), spec.f_hz());
    let samples = (0..n)
        .map(|i| k_u * (TAU * f * (i as f64 / fs)).cos().clamp(-m, m))
        .collect();
    SampledSignal::new(samples, fs)
}

/// Phase position of each sample within the pulse-wave period, in [0, 1).
///
/// A positive phase advances the waveform in time, matching the sinusoid
/// convention sin(2π·f·t + φ). Both the generator and the estimator's
/// candidate-wave scoring derive on/off membership from these exact values,
/// so they can never disagree about a boundary sample.
pub(crate) fn phase_fractions(f_hz: f64, phase_rad: f64, fs: f64, n: usize) -> Vec<f64> {
    let phase_frac = phase_rad / TAU;
    (0..n)
        .map(|i| {
            let x = f_hz * (i as f64 / fs) + phase_frac;
            x - x.floor()
        })
        .collect()
}

pub(crate) fn gen_pulse_wave_n(p: &PulseWaveParams, fs: f64, n: usize) -> Result<SampledSignal> {
    if p.f_hz() >= fs / 2.0 {
        return Err(Error::Aliasing {
            f_hz: p.f_hz(),
            fs,
        });
    }
    let (k, duty) = (p.amplitude(), p.duty());
    let samples = phase_fractions(p.f_hz(), p.phase_rad(), fs, n)
        .into_iter()
        .map(|frac| if frac < duty { k } else { -k })
        .collect();
    SampledSignal::new(samples, fs)
}

/// A two-level pulse wave: +amplitude for the first `duty` fraction of each
/// period, −amplitude for the rest. Samples landing exactly on the period
/// start take the high level (the on-interval is half-open).
pub fn gen_pulse_wave(p: &PulseWaveParams, fs: f64, duration: f64) -> Result<SampledSignal> {
    gen_pulse_wave_n(p, fs, sample_count(fs, duration)?)
}

/// Sum of the spec's pulse-wave components plus zero-mean uniform noise with
/// the configured standard deviation, drawn from a ChaCha stream seeded by
/// `spec.seed`.
pub fn gen_modulating(spec: &ModulationSpec) -> Result<SampledSignal> {
    let n = spec.n_samples();
    let fs = spec.fs();
    let mut sum = vec![0.0f64; n];
    for comp in spec.components() {
        let wave = gen_pulse_wave_n(comp, fs, n)?;
        for (acc, v) in sum.iter_mut().zip(wave.samples()) {
            *acc += v;
        }
    }
    if spec.noise_std() > 0.0 {
        // Uniform on [−a, a] has standard deviation a/√3.
        let half_width = 3.0f64.sqrt() * spec.noise_std();
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        for acc in sum.iter_mut() {
            *acc += (2.0 * rng.random::<f64>() - 1.0) * half_width;
        }
    }
    SampledSignal::new(sum, fs)
}

/// Amplitude-modulated test signal u_c(t)·(1 + u_mod(t)), composed pointwise
/// from the clipped-cosine carrier and the modulating signal.
pub fn gen_test_signal(spec: &ModulationSpec) -> Result<SampledSignal> {
    let carrier = gen_clipped_cosine(&spec.carrier, spec.fs(), spec.duration())?;
    let modulating = gen_modulating(spec)?;
    let samples = carrier
        .samples()
        .iter()
        .zip(modulating.samples())
        .map(|(c, m)| c * (1.0 + m))
        .collect();
    SampledSignal::new(samples, spec.fs())
}

fn sample_count(fs: f64, duration: f64) -> Result<usize> {
    if !(fs > 0.0) || !(duration > 0.0) {
        return Err(Error::InvalidInput(
            "sampling rate and duration must be positive".into(),
        ));
    }
    let n = (fs * duration).round();
    if n < 1.0 {
        return Err(Error::InvalidInput(
            "window must contain at least one sample".into(),
        ));
    }
    Ok(n as usize)
}

/// How component phases are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseMode {
    /// Uniform on [0, 2π).
    Random,
    /// All phases zero.
    Fixed0,
}

/// Randomized simulation scenario: parameter ranges and discrete choices for
/// a corpus of `count` test signals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub count: usize,
    pub master_seed: u64,
    pub fs: f64,
    pub duration: f64,
    /// Component amplitude range [lo, hi], dimensionless.
    pub k_range: [f64; 2],
    /// Component fundamental range [lo, hi] in Hz.
    pub f_range: [f64; 2],
    pub duty_choices: Vec<f64>,
    pub phase_mode: PhaseMode,
    /// Candidate component counts.
    pub n_choices: Vec<usize>,
    pub noise_std: f64,
    pub carrier: CarrierSpec,
}

impl Default for ScenarioConfig {
    /// Desk-scale profile: the published parameter ranges at a reduced corpus
    /// size and sampling rate.
    fn default() -> Self {
        Self {
            count: 100,
            master_seed: 1,
            fs: 10_000.0,
            duration: 60.0,
            k_range: [5e-4, 2.5e-2],
            f_range: [0.1, 150.0],
            duty_choices: (1..=9).map(|i| i as f64 / 10.0).collect(),
            phase_mode: PhaseMode::Random,
            n_choices: vec![2, 3, 4],
            noise_std: 1e-5,
            carrier: CarrierSpec::new(50.0, 0.8, 230.0).expect("valid default carrier"),
        }
    }
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        if self.count == 0 {
            return Err(Error::InvalidInput("count must be at least 1".into()));
        }
        if !(self.fs > 0.0) || !(self.duration > 0.0) {
            return Err(Error::InvalidInput(
                "sampling rate and duration must be positive".into(),
            ));
        }
        if !(self.k_range[0] >= 0.0) || self.k_range[1] < self.k_range[0] {
            return Err(Error::InvalidInput(format!(
                "amplitude range [{}, {}] is invalid",
                self.k_range[0], self.k_range[1]
            )));
        }
        if !(self.f_range[0] > 0.0) || self.f_range[1] < self.f_range[0] {
            return Err(Error::InvalidInput(format!(
                "frequency range [{}, {}] is invalid",
                self.f_range[0], self.f_range[1]
            )));
        }
        if self.f_range[1] >= self.fs / 2.0 {
            return Err(Error::InvalidInput(format!(
                "frequency range exceeds Nyquist ({} Sa/s)",
                self.fs
            )));
        }
        if self.duty_choices.is_empty()
            || self.duty_choices.iter().any(|&d| !(d > 0.0 && d < 1.0))
        {
            return Err(Error::InvalidInput(
                "duty choices must be a non-empty subset of (0, 1)".into(),
            ));
        }
        if self.n_choices.is_empty() || self.n_choices.iter().any(|&n| n == 0) {
            return Err(Error::InvalidInput(
                "component-count choices must be non-empty positive integers".into(),
            ));
        }
        if !(self.noise_std >= 0.0) {
            return Err(Error::InvalidInput(
                "noise standard deviation must be non-negative".into(),
            ));
        }
        Ok(())
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Deterministic per-signal seed derived from the master seed and index.
pub fn child_seed(master_seed: u64, index: u64) -> u64 {
    splitmix64(master_seed ^ splitmix64(index.wrapping_add(1)))
}

fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    if hi > lo {
        lo + (hi - lo) * rng.random::<f64>()
    } else {
        lo
    }
}

/// Draws `count` modulation specs from the scenario: per component the draw
/// order is fundamental frequency (redrawn while it collides with an earlier
/// one within 10·fs/L), phase, duty, amplitude. Noise seeds are derived
/// deterministically per signal, so corpora are reproducible byte for byte.
pub fn sample_scenarios(cfg: &ScenarioConfig) -> Result<Vec<ModulationSpec>> {
    cfg.validate()?;
    let l = (cfg.fs * cfg.duration).round();
    let min_separation = 10.0 * cfg.fs / l;
    let mut specs = Vec::with_capacity(cfg.count);
    for s in 0..cfg.count {
        let seed = child_seed(cfg.master_seed, s as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = cfg.n_choices[rng.random_range(0..cfg.n_choices.len())];
        let mut components = Vec::with_capacity(n);
        let mut freqs: Vec<f64> = Vec::with_capacity(n);
        for _ in 0..n {
            let mut attempts = 0;
            let f = loop {
                let f = uniform(&mut rng, cfg.f_range[0], cfg.f_range[1]);
                if freqs.iter().all(|&g| (f - g).abs() > min_separation) {
                    break f;
                }
                attempts += 1;
                if attempts > 10_000 {
                    return Err(Error::InvalidInput(
                        "cannot draw pairwise distinct frequencies; \
                         range too narrow for the separation requirement"
                            .into(),
                    ));
                }
            };
            freqs.push(f);
            let phase = match cfg.phase_mode {
                PhaseMode::Random => uniform(&mut rng, 0.0, TAU),
                PhaseMode::Fixed0 => 0.0,
            };
            let duty = cfg.duty_choices[rng.random_range(0..cfg.duty_choices.len())];
            let k = uniform(&mut rng, cfg.k_range[0], cfg.k_range[1]);
            components.push(PulseWaveParams::new(f, phase, duty, k)?);
        }
        let noise_seed = splitmix64(seed ^ 0x6E6F_6973_655F_7365);
        specs.push(ModulationSpec::new(
            cfg.carrier,
            components,
            cfg.noise_std,
            noise_seed,
            cfg.fs,
            cfg.duration,
        )?);
    }
    Ok(specs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ku_reference_clipping_level() {
        // 0.8 clipping at 230 V rms lands near 361.6.
        let ku = solve_ku(0.8, 230.0, 50.0).unwrap();
        assert!((ku - 361.6).abs() < 0.5, "got {ku}");
    }

    #[test]
    fn ku_unclipped_is_sqrt2_scale() {
        let ku = solve_ku(1.0, 230.0, 50.0).unwrap();
        assert!((ku - 230.0 * 2.0f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn ku_matches_trapezoid_oracle_at_half_clip() {
        // Independent oracle: trapezoid integration of the unit clipped
        // cosine squared over one exact period at 1e6 points.
        let m = 0.5;
        let n = 1_000_000usize;
        let mut acc = 0.0;
        for i in 0..=n {
            let theta = TAU * i as f64 / n as f64;
            let v = theta.cos().clamp(-m, m);
            let w = if i == 0 || i == n { 0.5 } else { 1.0 };
            acc += w * v * v;
        }
        let rms_oracle = (acc / n as f64).sqrt();
        let ku_oracle = 230.0 / rms_oracle;
        let ku = solve_ku(0.5, 230.0, 50.0).unwrap();
        assert!(
            ((ku - ku_oracle) / ku_oracle).abs() < 1e-6,
            "{ku} vs oracle {ku_oracle}"
        );
    }

    #[test]
    fn ku_rejects_bad_clip_level() {
        assert!(solve_ku(0.0, 230.0, 50.0).is_err());
        assert!(solve_ku(1.5, 230.0, 50.0).is_err());
    }

    #[test]
    fn clipped_cosine_is_pure_cosine_when_unclipped() {
        let spec = CarrierSpec::new(50.0, 1.0, 230.0).unwrap();
        let u = gen_clipped_cosine(&spec, 10_000.0, 0.1).unwrap();
        for (i, &v) in u.samples().iter().enumerate() {
            let expected = spec.k_u() * (TAU * 50.0 * i as f64 / 10_000.0).cos();
            assert!((v - expected).abs() < 1e-9);
        }
    }

    #[test]
    fn clipped_cosine_clamps_branches() {
        let spec = CarrierSpec::new(50.0, 0.8, 230.0).unwrap();
        let u = gen_clipped_cosine(&spec, 10_000.0, 0.2).unwrap();
        let limit = spec.k_u() * 0.8;
        for (i, &v) in u.samples().iter().enumerate() {
            let c = (TAU * 50.0 * (i as f64 / 10_000.0)).cos();
            if c > 0.8 {
                assert_eq!(v, limit);
            } else if c < -0.8 {
                assert_eq!(v, -limit);
            } else {
                assert!((v - spec.k_u() * c).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn clipped_cosine_rms_hits_target() {
        // Integer number of periods: rms must land within 0.1 % of target.
        for &m in &[0.5, 0.8, 1.0] {
            let spec = CarrierSpec::new(50.0, m, 230.0).unwrap();
            let u = gen_clipped_cosine(&spec, 10_000.0, 1.0).unwrap();
            let rms = u.rms();
            assert!(
                ((rms - 230.0) / 230.0).abs() < 1e-3,
                "clip {m}: rms {rms}"
            );
        }
    }

    #[test]
    fn clipped_cosine_rejects_aliasing() {
        let spec = CarrierSpec::new(50.0, 0.8, 230.0).unwrap();
        assert!(gen_clipped_cosine(&spec, 90.0, 1.0).is_err());
    }

    #[test]
    fn pulse_wave_symmetric_square_layout() {
        let p = PulseWaveParams::new(1.0, 0.0, 0.5, 1.0).unwrap();
        let u = gen_pulse_wave(&p, 1000.0, 2.0).unwrap();
        assert_eq!(u.len(), 2000);
        assert!(u.samples()[..500].iter().all(|&v| v == 1.0));
        assert!(u.samples()[500..1000].iter().all(|&v| v == -1.0));
        assert!(u.samples()[1000..1500].iter().all(|&v| v == 1.0));
        assert!(u.samples()[1500..].iter().all(|&v| v == -1.0));
    }

    #[test]
    fn pulse_wave_mean_over_period() {
        // Direct-summation oracle: mean over one period is k·(2δ−1).
        let k = 0.7;
        let p = PulseWaveParams::new(0.1, 0.0, 0.3, k).unwrap();
        let u = gen_pulse_wave(&p, 1000.0, 10.0).unwrap();
        let mean = u.samples().iter().sum::<f64>() / u.len() as f64;
        assert!((mean - k * (2.0 * 0.3 - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn pulse_wave_duty_fraction_matches() {
        // Over integer periods the on-fraction is δ within 1/(fs·T) per period.
        let fs = 1000.0;
        for &(f, duty) in &[(2.0, 0.3), (4.0, 0.7), (10.0, 0.15), (2.5, 0.47)] {
            let p = PulseWaveParams::new(f, 0.0, duty, 1.0).unwrap();
            let periods = 10.0;
            let u = gen_pulse_wave(&p, fs, periods / f).unwrap();
            let on = u.samples().iter().filter(|&&v| v > 0.0).count() as f64;
            let fraction = on / u.len() as f64;
            assert!(
                (fraction - duty).abs() <= f / fs + 1e-12,
                "f {f} duty {duty}: fraction {fraction}"
            );
        }
    }

    #[test]
    fn pulse_wave_phase_shifts_pattern() {
        // A phase of π/2 advances the waveform by a quarter period.
        let p0 = PulseWaveParams::new(2.0, 0.0, 0.5, 1.0).unwrap();
        let p1 = PulseWaveParams::new(2.0, std::f64::consts::FRAC_PI_2, 0.5, 1.0).unwrap();
        let u0 = gen_pulse_wave(&p0, 1000.0, 2.0).unwrap();
        let u1 = gen_pulse_wave(&p1, 1000.0, 2.0).unwrap();
        let quarter = 125; // samples per quarter period
        for i in 0..u0.len() - quarter {
            assert_eq!(u1.samples()[i], u0.samples()[i + quarter]);
        }
    }

    #[test]
    fn modulating_single_component_equals_pulse_wave() {
        let carrier = CarrierSpec::new(50.0, 0.8, 230.0).unwrap();
        let comp = PulseWaveParams::new(3.0, 1.0, 0.4, 0.02).unwrap();
        let spec = ModulationSpec::new(carrier, vec![comp], 0.0, 9, 2000.0, 3.0).unwrap();
        let m = gen_modulating(&spec).unwrap();
        let w = gen_pulse_wave(&comp, 2000.0, 3.0).unwrap();
        assert_eq!(m.samples(), w.samples());
    }

    #[test]
    fn modulating_three_components_sum_exactly() {
        let carrier = CarrierSpec::new(50.0, 0.8, 230.0).unwrap();
        let comps = vec![
            PulseWaveParams::new(0.5, 0.0, 0.5, 0.02).unwrap(),
            PulseWaveParams::new(3.0, 1.0, 0.3, 0.01).unwrap(),
            PulseWaveParams::new(17.0, 2.0, 0.7, 0.005).unwrap(),
        ];
        let spec =
            ModulationSpec::new(carrier, comps.clone(), 0.0, 9, 2000.0, 4.0).unwrap();
        let m = gen_modulating(&spec).unwrap();
        let waves: Vec<_> = comps
            .iter()
            .map(|c| gen_pulse_wave(c, 2000.0, 4.0).unwrap())
            .collect();
        for i in 0..m.len() {
            let expected: f64 = waves.iter().map(|w| w.samples()[i]).sum();
            assert_eq!(m.samples()[i], expected);
        }
    }

    #[test]
    fn noise_std_and_bounds() {
        let carrier = CarrierSpec::new(50.0, 0.8, 230.0).unwrap();
        let comp = PulseWaveParams::new(1.0, 0.0, 0.5, 0.0).unwrap();
        let std = 1e-5;
        let spec = ModulationSpec::new(carrier, vec![comp], std, 4, 100_000.0, 10.0).unwrap();
        let m = gen_modulating(&spec).unwrap();
        // Component amplitude is zero, so the signal is pure noise.
        let n = m.len() as f64;
        let mean = m.mean();
        let sample_std =
            (m.samples().iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n).sqrt();
        assert!(
            ((sample_std - std) / std).abs() < 0.02,
            "sample std {sample_std}"
        );
        let half = 3.0f64.sqrt() * std;
        assert!(m.samples().iter().all(|v| v.abs() <= half));
    }

    #[test]
    fn test_signal_composition_identity() {
        let carrier = CarrierSpec::new(50.0, 0.8, 230.0).unwrap();
        let comps = vec![
            PulseWaveParams::new(1.5, 0.3, 0.4, 0.02).unwrap(),
            PulseWaveParams::new(8.0, 0.0, 0.6, 0.01).unwrap(),
        ];
        let spec = ModulationSpec::new(carrier, comps, 1e-5, 11, 4000.0, 2.0).unwrap();
        let test = gen_test_signal(&spec).unwrap();
        let c = gen_clipped_cosine(&spec.carrier, spec.fs(), spec.duration()).unwrap();
        let m = gen_modulating(&spec).unwrap();
        for i in 0..test.len() {
            let composed = c.samples()[i] * (1.0 + m.samples()[i]);
            assert_eq!(test.samples()[i], composed);
        }
    }

    #[test]
    fn test_signal_without_modulation_is_carrier() {
        let carrier = CarrierSpec::new(50.0, 0.8, 230.0).unwrap();
        // Zero-amplitude component and zero noise: u_mod ≡ 0.
        let comp = PulseWaveParams::new(1.0, 0.0, 0.5, 0.0).unwrap();
        let spec = ModulationSpec::new(carrier, vec![comp], 0.0, 0, 4000.0, 1.0).unwrap();
        let test = gen_test_signal(&spec).unwrap();
        let c = gen_clipped_cosine(&carrier, 4000.0, 1.0).unwrap();
        assert_eq!(test.samples(), c.samples());
    }

    #[test]
    fn test_signal_envelope_swing_is_twice_k() {
        // Per-half-cycle peak envelope: swing (max−min)/mean ≈ 2k for a
        // single slow component.
        let carrier = CarrierSpec::new(50.0, 0.8, 230.0).unwrap();
        let k = 0.025;
        let comp = PulseWaveParams::new(1.0, 0.0, 0.5, k).unwrap();
        let spec = ModulationSpec::new(carrier, vec![comp], 0.0, 0, 10_000.0, 2.0).unwrap();
        let test = gen_test_signal(&spec).unwrap();
        let half_period = 100usize; // fs / f_c / 2
        let peaks: Vec<f64> = test
            .samples()
            .chunks(half_period)
            .filter(|c| c.len() == half_period)
            .map(|c| c.iter().fold(0.0f64, |m, &v| m.max(v.abs())))
            .collect();
        let interior = &peaks[1..peaks.len() - 1];
        let max = interior.iter().cloned().fold(f64::MIN, f64::max);
        let min = interior.iter().cloned().fold(f64::MAX, f64::min);
        let mean = interior.iter().sum::<f64>() / interior.len() as f64;
        let swing = (max - min) / mean;
        assert!((swing - 2.0 * k).abs() < 0.002, "swing {swing}");
    }

    #[test]
    fn scenarios_are_deterministic() {
        let cfg = ScenarioConfig {
            count: 10,
            ..ScenarioConfig::default()
        };
        let a = sample_scenarios(&cfg).unwrap();
        let b = sample_scenarios(&cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn scenarios_respect_ranges_and_choices() {
        let cfg = ScenarioConfig {
            count: 50,
            master_seed: 7,
            ..ScenarioConfig::default()
        };
        let specs = sample_scenarios(&cfg).unwrap();
        assert_eq!(specs.len(), 50);
        for spec in &specs {
            assert!(cfg.n_choices.contains(&spec.components().len()));
            for c in spec.components() {
                assert!(c.f_hz() >= 0.1 && c.f_hz() <= 150.0);
                assert!(c.amplitude() >= 5e-4 && c.amplitude() <= 2.5e-2);
                assert!(cfg
                    .duty_choices
                    .iter()
                    .any(|&d| (d - c.duty()).abs() < 1e-12));
            }
        }
    }

    #[test]
    fn scenarios_keep_frequencies_separated() {
        let cfg = ScenarioConfig {
            count: 1000,
            master_seed: 3,
            ..ScenarioConfig::default()
        };
        let specs = sample_scenarios(&cfg).unwrap();
        let min_sep = 10.0 * cfg.fs / (cfg.fs * cfg.duration);
        let mut smallest = f64::INFINITY;
        for spec in &specs {
            let comps = spec.components();
            for (i, a) in comps.iter().enumerate() {
                for b in comps.iter().skip(i + 1) {
                    smallest = smallest.min((a.f_hz() - b.f_hz()).abs());
                }
            }
        }
        assert!(smallest > min_sep, "closest pair {smallest}");
    }

    #[test]
    fn scenario_rejects_nyquist_violation() {
        let cfg = ScenarioConfig {
            f_range: [0.1, 6000.0],
            ..ScenarioConfig::default()
        };
        assert!(sample_scenarios(&cfg).is_err());
    }
}
