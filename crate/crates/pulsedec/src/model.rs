//! Shared domain types and their invariants.
//!
//! Everything here is an immutable value type; all construction goes through
//! validating constructors so that code downstream never sees an empty
//! signal, a non-positive sampling rate or a duty cycle outside (0, 1).

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// A uniformly sampled real-valued waveform.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledSignal {
    samples: Vec<f64>,
    fs: f64,
    t0: f64,
}

impl SampledSignal {
    /// Wraps samples taken at `fs` Sa/s, starting at t = 0.
    pub fn new(samples: Vec<f64>, fs: f64) -> Result<Self> {
        Self::with_start_time(samples, fs, 0.0)
    }

    /// Wraps samples taken at `fs` Sa/s with the first sample at `t0` seconds.
    pub fn with_start_time(samples: Vec<f64>, fs: f64, t0: f64) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidInput("signal must be non-empty".into()));
        }
        if !(fs > 0.0) || !fs.is_finite() {
            return Err(Error::InvalidInput(format!(
                "sampling rate must be positive and finite, got {fs}"
            )));
        }
        Ok(Self { samples, fs, t0 })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    /// Sampling rate in Sa/s.
    pub fn fs(&self) -> f64 {
        self.fs
    }

    /// Time of the first sample in seconds.
    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Window length in seconds.
    pub fn duration(&self) -> f64 {
        self.samples.len() as f64 / self.fs
    }

    pub fn mean(&self) -> f64 {
        self.samples.iter().sum::<f64>() / self.samples.len() as f64
    }

    pub fn rms(&self) -> f64 {
        (self.samples.iter().map(|x| x * x).sum::<f64>() / self.samples.len() as f64).sqrt()
    }

    /// max − min over the window.
    pub fn peak_to_peak(&self) -> f64 {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for &x in &self.samples {
            lo = lo.min(x);
            hi = hi.max(x);
        }
        hi - lo
    }
}

/// Parameters of one basis pulse wave: a two-level periodic signal alternating
/// between `+amplitude` and `-amplitude`, spending the fraction `duty` of each
/// period at the high level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PulseWaveParams {
    f_hz: f64,
    phase_rad: f64,
    duty: f64,
    amplitude: f64,
}

impl PulseWaveParams {
    /// Validates and normalizes parameters; the phase is reduced to [0, 2π).
    pub fn new(f_hz: f64, phase_rad: f64, duty: f64, amplitude: f64) -> Result<Self> {
        if !(f_hz > 0.0) || !f_hz.is_finite() {
            return Err(Error::InvalidInput(format!(
                "pulse-wave frequency must be positive, got {f_hz}"
            )));
        }
        if !(duty > 0.0 && duty < 1.0) {
            return Err(Error::InvalidInput(format!(
                "duty cycle must lie in (0, 1), got {duty}"
            )));
        }
        if !(amplitude >= 0.0) || !amplitude.is_finite() {
            return Err(Error::InvalidInput(format!(
                "pulse-wave amplitude must be non-negative, got {amplitude}"
            )));
        }
        if !phase_rad.is_finite() {
            return Err(Error::InvalidInput("phase must be finite".into()));
        }
        Ok(Self {
            f_hz,
            phase_rad: phase_rad.rem_euclid(TAU),
            duty,
            amplitude,
        })
    }

    /// Fundamental frequency in Hz.
    pub fn f_hz(&self) -> f64 {
        self.f_hz
    }

    /// Initial phase in [0, 2π) rad.
    pub fn phase_rad(&self) -> f64 {
        self.phase_rad
    }

    /// Duty cycle, the on-fraction of each period.
    pub fn duty(&self) -> f64 {
        self.duty
    }

    /// Amplitude, dimensionless relative to the carrier.
    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    /// Period in seconds.
    pub fn period(&self) -> f64 {
        1.0 / self.f_hz
    }
}

/// Description of a clipped-cosine carrier: a cosine at `f_hz` scaled by `k_u`
/// and clamped to ±`clip_level`·`k_u`, so that its rms equals `u_rms`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CarrierSpec {
    f_hz: f64,
    clip_level: f64,
    u_rms: f64,
    k_u: f64,
}

impl CarrierSpec {
    /// Builds a carrier spec, deriving the scale `k_u` from the target rms.
    pub fn new(f_hz: f64, clip_level: f64, u_rms: f64) -> Result<Self> {
        if !(f_hz > 0.0) || !f_hz.is_finite() {
            return Err(Error::InvalidInput(format!(
                "carrier frequency must be positive, got {f_hz}"
            )));
        }
        if !(u_rms > 0.0) || !u_rms.is_finite() {
            return Err(Error::InvalidInput(format!(
                "carrier rms must be positive, got {u_rms}"
            )));
        }
        let rms_unit = unit_clipped_rms(clip_level)?;
        Ok(Self {
            f_hz,
            clip_level,
            u_rms,
            k_u: u_rms / rms_unit,
        })
    }

    pub fn f_hz(&self) -> f64 {
        self.f_hz
    }

    /// Clipping level m ∈ (0, 1]; 1 means no clipping.
    pub fn clip_level(&self) -> f64 {
        self.clip_level
    }

    pub fn u_rms(&self) -> f64 {
        self.u_rms
    }

    /// Derived scale in volts applied to the unit clipped cosine.
    pub fn k_u(&self) -> f64 {
        self.k_u
    }
}

/// rms of clamp(cos θ, ±m) over one exact period, in closed form.
///
/// With θc = arccos(m), the clipped region |cos θ| > m has measure 4·θc per
/// period and contributes m² there; the rest contributes cos². Integrating:
/// ∫ = 4·m²·θc + π − 2·θc − sin(2·θc).
pub(crate) fn unit_clipped_rms(clip_level: f64) -> Result<f64> {
    if !(clip_level > 0.0 && clip_level <= 1.0) {
        return Err(Error::InvalidInput(format!(
            "clipping level must lie in (0, 1], got {clip_level}"
        )));
    }
    let theta_c = clip_level.acos();
    let integral = 4.0 * clip_level * clip_level * theta_c + std::f64::consts::PI
        - 2.0 * theta_c
        - (2.0 * theta_c).sin();
    Ok((integral / TAU).sqrt())
}

/// Full generative description of a test signal: carrier, pulse-wave
/// components, noise level and the seed driving the noise draw.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModulationSpec {
    pub carrier: CarrierSpec,
    components: Vec<PulseWaveParams>,
    noise_std: f64,
    pub seed: u64,
    fs: f64,
    duration: f64,
}

impl ModulationSpec {
    pub fn new(
        carrier: CarrierSpec,
        components: Vec<PulseWaveParams>,
        noise_std: f64,
        seed: u64,
        fs: f64,
        duration: f64,
    ) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidInput(
                "a modulation spec needs at least one component".into(),
            ));
        }
        for (i, a) in components.iter().enumerate() {
            for b in components.iter().skip(i + 1) {
                if a.f_hz() == b.f_hz() {
                    return Err(Error::InvalidInput(format!(
                        "component fundamental frequencies must be pairwise distinct, \
                         {} Hz repeats",
                        a.f_hz()
                    )));
                }
            }
        }
        if !(noise_std >= 0.0) || !noise_std.is_finite() {
            return Err(Error::InvalidInput(format!(
                "noise standard deviation must be non-negative, got {noise_std}"
            )));
        }
        if !(fs > 0.0) || !(duration > 0.0) {
            return Err(Error::InvalidInput(
                "sampling rate and duration must be positive".into(),
            ));
        }
        if (fs * duration).round() < 1.0 {
            return Err(Error::InvalidInput(
                "window must contain at least one sample".into(),
            ));
        }
        Ok(Self {
            carrier,
            components,
            noise_std,
            seed,
            fs,
            duration,
        })
    }

    pub fn components(&self) -> &[PulseWaveParams] {
        &self.components
    }

    pub fn noise_std(&self) -> f64 {
        self.noise_std
    }

    pub fn fs(&self) -> f64 {
        self.fs
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    /// Number of samples in the generated window.
    pub fn n_samples(&self) -> usize {
        (self.fs * self.duration).round() as usize
    }
}

/// One-sided amplitude spectrum with its bin spacing.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    /// Bin magnitudes; index 0 is DC.
    pub amplitudes: Vec<f64>,
    /// Bin spacing in Hz, fs / nfft of the producing transform.
    pub df: f64,
    /// Number of samples of the source series (before zero padding).
    pub window_len: usize,
}

impl Spectrum {
    /// Frequency of bin `i` in Hz.
    pub fn freq_of_bin(&self, i: usize) -> f64 {
        i as f64 * self.df
    }
}
