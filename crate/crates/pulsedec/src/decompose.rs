//! Four-stage pulse-wave decomposition of an amplitude-modulating signal.
//!
//! The stages, each estimated independently from the full input:
//!
//! 1. **Frequencies** — autocovariance of the input, amplitude spectrum of the
//!    lag series, then the strongest local maxima; a candidate is dropped when
//!    it sits within the frequency resolution of n× an already accepted
//!    frequency for n ∈ {2, 3, 4, 5}.
//! 2. **Phase** — cross-correlation against the ideal unit square wave at the
//!    estimated frequency; the global-maximum lag converted to a phase.
//! 3. **Duty cycle** — grid search over candidate duty cycles; each candidate
//!    pulse wave is scored by the global maximum of its cross-covariance with
//!    the input over one period of lags.
//! 4. **Amplitude** — grid search over candidate amplitudes; the candidate
//!    whose spectral energy around its fundamental best matches the input's
//!    energy in the same bins wins.
//!
//! All grid searches break ties toward the smallest candidate, so results do
//! not depend on evaluation order (the duty grid is scored in parallel when
//! the `parallel` feature is on).

use crate::error::{Error, Result};
use crate::model::{PulseWaveParams, SampledSignal, Spectrum};
use crate::spectral::{
    amplitude_spectrum, autocovariance, cross_correlation_with_square, find_peaks, SpectralPeak,
};
use crate::testgen::{gen_pulse_wave_n, phase_fractions};
use crate::{fft, par};
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// Frequency-equality resolution 10·fs/L used for harmonic rejection and as
/// the default spectral neighborhood width.
pub fn default_freq_tolerance(fs: f64, len: usize) -> f64 {
    10.0 * fs / len as f64
}

/// Transform length shared by the stage-1 lag-series spectrum and the stage-4
/// signal spectra for a window of `len` samples: twice the next power of two
/// above the window length. The factor of two halves the peak-bin
/// quantization, which bounds how far the stage-3/4 candidate waves can drift
/// against the input over the window.
pub fn pipeline_nfft(len: usize) -> usize {
    fft::next_pow2(len) * 2
}

/// Knobs of the decomposition; `new` fills in the published defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecomposeOptions {
    /// Number of components to extract.
    pub n_components: usize,
    /// Duty-cycle grid step Δδ.
    pub duty_resolution: f64,
    /// Number of amplitude candidates R; the grid spans the input's
    /// peak-to-peak value.
    pub amp_steps: usize,
    /// Harmonic multiples rejected in stage 1.
    pub freq_reject_multiples: Vec<u32>,
    /// Override for the frequency-equality resolution; `None` = 10·fs/L.
    pub freq_tolerance_hz: Option<f64>,
    /// Half-width, in bins, of the stage-4 energy window; `None` derives it
    /// from the frequency resolution.
    pub energy_neighborhood_bins: Option<usize>,
}

impl DecomposeOptions {
    pub fn new(n_components: usize) -> Self {
        Self {
            n_components,
            duty_resolution: 0.01,
            amp_steps: 200,
            freq_reject_multiples: vec![2, 3, 4, 5],
            freq_tolerance_hz: None,
            energy_neighborhood_bins: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_components == 0 {
            return Err(Error::InvalidInput(
                "at least one component must be requested".into(),
            ));
        }
        if !(self.duty_resolution > 0.0 && self.duty_resolution < 0.5) {
            return Err(Error::InvalidInput(format!(
                "duty resolution must lie in (0, 0.5), got {}",
                self.duty_resolution
            )));
        }
        if self.amp_steps < 10 {
            return Err(Error::InvalidInput(format!(
                "amplitude grid needs at least 10 steps, got {}",
                self.amp_steps
            )));
        }
        Ok(())
    }
}

/// Why a spectral peak was or was not used in stage 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum PeakStatus {
    Accepted,
    /// Within the frequency resolution of `multiple` × `of_hz`.
    RejectedMultiple { multiple: u32, of_hz: f64 },
    /// Ranked below the last accepted peak; never examined further.
    Unused,
}

/// A stage-1 peak decision, kept for diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeakDecision {
    pub peak: SpectralPeak,
    pub status: PeakStatus,
}

/// Stage-1 output: accepted frequencies in ascending order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequencyScan {
    pub frequencies: Vec<f64>,
    /// True when fewer than the requested number of peaks survived.
    pub shortfall: bool,
    pub peaks: Vec<PeakDecision>,
}

/// Per-component stage diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentDiagnostics {
    pub freq_hz: f64,
    /// Lag of the stage-2 correlation maximum in seconds.
    pub xcorr_peak_lag_s: f64,
    pub xcorr_peak_value: f64,
    /// (duty candidate, best covariance over lags).
    pub duty_scores: Vec<(f64, f64)>,
    /// (amplitude candidate, band energy of the candidate wave).
    pub amplitude_energies: Vec<(f64, f64)>,
    /// Input band energy the candidates are matched against.
    pub input_band_energy: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Diagnostics {
    pub peaks: Vec<PeakDecision>,
    pub components: Vec<ComponentDiagnostics>,
    pub warnings: Vec<String>,
}

/// Result of a full decomposition: components sorted by ascending frequency.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Decomposition {
    pub components: Vec<PulseWaveParams>,
    pub diagnostics: Diagnostics,
}

// ---------------------------------------------------------------------------
// Stage 1: frequencies
// ---------------------------------------------------------------------------

/// Sub-bin refinement of a peak position: vertex of the parabola through the
/// peak bin and its neighbors. The offset is clamped to half a bin.
fn parabolic_refine(spec: &Spectrum, bin: usize) -> f64 {
    if bin == 0 || bin + 1 >= spec.amplitudes.len() {
        return spec.freq_of_bin(bin);
    }
    let (a, b, c) = (
        spec.amplitudes[bin - 1],
        spec.amplitudes[bin],
        spec.amplitudes[bin + 1],
    );
    let denom = a + c - 2.0 * b;
    if denom == 0.0 {
        return spec.freq_of_bin(bin);
    }
    let offset = (0.5 * (a - c) / denom).clamp(-0.5, 0.5);
    (bin as f64 + offset) * spec.df
}

/// Final frequency polish: golden-section maximization of the least-squares
/// single-line fit energy of the mean-removed input within ±1 bin of the
/// initial estimate.
///
/// The duty and amplitude stages compare the input against candidate waves
/// generated at the estimated frequency over the whole window, so a residual
/// error of even a tenth of a bin lets the candidates drift visibly against
/// the input. The signal's own spectral line pins the frequency one to two
/// orders of magnitude tighter than the lag-series peak alone.
fn periodogram_refine(centered: &[f64], fs: f64, f0: f64, half_width: f64) -> f64 {
    // Components with only a handful of cycles in the window need their
    // rectangular harmonics in the fit, or the harmonic tails drag the peak.
    let duration = centered.len() as f64 / fs;
    let mut harmonics = if f0 * duration < 120.0 { 5 } else { 1 };
    while harmonics > 1 && harmonics as f64 * f0 >= 0.5 * fs {
        harmonics -= 1;
    }
    let mag = |f: f64| fft::line_fit_energy(centered, fs, f, harmonics);
    let inv_phi = 0.618_033_988_749_894_9_f64;
    let mut lo = (f0 - half_width).max(half_width * 1e-3);
    let mut hi = f0 + half_width;
    let mut a = hi - inv_phi * (hi - lo);
    let mut b = lo + inv_phi * (hi - lo);
    let mut fa = mag(a);
    let mut fb = mag(b);
    for _ in 0..20 {
        if fa > fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - inv_phi * (hi - lo);
            fa = mag(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + inv_phi * (hi - lo);
            fb = mag(b);
        }
    }
    0.5 * (lo + hi)
}

/// Stage 1: estimate up to `opts.n_components` fundamental frequencies.
///
/// Peaks of the autocovariance spectrum are visited in descending magnitude;
/// one is accepted unless it lies within the frequency resolution of an
/// integer multiple (from `freq_reject_multiples`) of an already accepted
/// frequency. Accepted positions are then refined to sub-bin accuracy, since
/// the later stages need the candidate waves to stay aligned with the input
/// over the whole window.
pub fn estimate_frequencies(u: &SampledSignal, opts: &DecomposeOptions) -> Result<FrequencyScan> {
    opts.validate()?;
    let l = u.len();
    let max_lag = l / 2;
    let tolerance = opts
        .freq_tolerance_hz
        .unwrap_or_else(|| default_freq_tolerance(u.fs(), l));

    let acov = autocovariance(u, max_lag)?;
    let lag_signal = SampledSignal::new(acov.values().to_vec(), u.fs())?;
    let spec = amplitude_spectrum(&lag_signal, pipeline_nfft(l))?;

    // Peaks closer than the frequency resolution are indistinguishable by the
    // method's own tolerance, so the same resolution separates them here.
    // This also keeps sidelobes of a strong line from posing as components.
    let min_sep = ((tolerance / spec.df).ceil() as usize).max(3);
    let peaks = find_peaks(&spec, true, min_sep);

    let mut accepted: Vec<SpectralPeak> = Vec::new();
    let mut decisions: Vec<PeakDecision> = Vec::new();
    for p in &peaks {
        if accepted.len() == opts.n_components {
            break;
        }
        let rejection = accepted.iter().find_map(|a| {
            opts.freq_reject_multiples
                .iter()
                .find(|&&n| (p.freq_hz - n as f64 * a.freq_hz).abs() <= tolerance)
                .map(|&n| (n, a.freq_hz))
        });
        match rejection {
            Some((multiple, of_hz)) => decisions.push(PeakDecision {
                peak: *p,
                status: PeakStatus::RejectedMultiple { multiple, of_hz },
            }),
            None => {
                accepted.push(*p);
                decisions.push(PeakDecision {
                    peak: *p,
                    status: PeakStatus::Accepted,
                });
            }
        }
    }
    // A few of the next-ranked peaks for context.
    for p in peaks.iter().skip(decisions.len()).take(8) {
        decisions.push(PeakDecision {
            peak: *p,
            status: PeakStatus::Unused,
        });
    }

    let mean = u.mean();
    let centered: Vec<f64> = u.samples().iter().map(|x| x - mean).collect();
    let mut frequencies: Vec<f64> = accepted
        .iter()
        .map(|p| {
            let f0 = parabolic_refine(&spec, p.bin);
            periodogram_refine(&centered, u.fs(), f0, spec.df)
        })
        .collect();
    frequencies.sort_by(|a, b| a.partial_cmp(b).unwrap());

    Ok(FrequencyScan {
        shortfall: frequencies.len() < opts.n_components,
        frequencies,
        peaks: decisions,
    })
}

// ---------------------------------------------------------------------------
// Stage 2: phase
// ---------------------------------------------------------------------------

/// Resolves the correlation maximum to the left edge of a flat top.
///
/// Against the duty-0.5 reference square, a pulse wave of any other duty
/// produces a correlation with a plateau of width |0.5 − δ| per period; the
/// true alignment is the plateau's left break, where the rising flank ends.
/// The plateau itself is not exactly flat (the signal's DC level times the
/// reference's partial-period sums ripples across it), so the raw maximum can
/// land anywhere on it. Walking left while each step drops less than the
/// mean slope per period stops within a sample of the break: the flank falls
/// at twice that threshold or steeper, the plateau ripple is far below it.
fn left_edge_of_maximum(values: &[f64], raw_lag: usize, period_lags: usize) -> usize {
    let start = raw_lag.saturating_sub(period_lags);
    let min_near = values[start..=raw_lag]
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    let step_threshold = (values[raw_lag] - min_near) / period_lags as f64;
    let mut lag = raw_lag;
    while lag > start && values[lag - 1] > values[lag] - step_threshold {
        lag -= 1;
    }
    lag
}

/// Mirror of [`left_edge_of_maximum`] for the right break of a flat top.
fn right_edge_of_maximum(values: &[f64], raw_lag: usize, period_lags: usize) -> usize {
    let end = (raw_lag + period_lags).min(values.len() - 1);
    let min_near = values[raw_lag..=end]
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    let step_threshold = (values[raw_lag] - min_near) / period_lags as f64;
    let mut lag = raw_lag;
    while lag < end && values[lag + 1] > values[lag] - step_threshold {
        lag += 1;
    }
    lag
}

/// Sub-sample position of the correlation break at `lag`: the crossing of
/// the line through the two flank samples outside it with the line through
/// the top samples. For a tent this is the apex, for a flat top the break on
/// the chosen side; exact in both ideal cases. The offset is clamped to one
/// sample, so a noisy flank cannot displace the estimate further than the
/// grid itself could.
fn subsample_break(values: &[f64], lag: usize, left: bool) -> f64 {
    if left {
        if lag < 2 || lag + 1 >= values.len() {
            return lag as f64;
        }
        let flank = values[lag - 1] - values[lag - 2];
        let top = values[lag + 1] - values[lag];
        if flank <= 0.0 || flank <= top {
            return lag as f64;
        }
        let offset = (values[lag] - values[lag - 1] - flank) / (flank - top);
        lag as f64 + offset.clamp(-1.0, 0.5)
    } else {
        if lag < 1 || lag + 2 >= values.len() {
            return lag as f64;
        }
        let flank = values[lag + 2] - values[lag + 1];
        let top = values[lag] - values[lag - 1];
        if flank >= 0.0 || flank >= top {
            return lag as f64;
        }
        let offset = (values[lag + 1] - values[lag] - flank) / (top - flank);
        lag as f64 + offset.clamp(-0.5, 1.0)
    }
}

/// Both break positions of the correlation top, as phases.
///
/// Which one is the component's phase depends on its duty cycle: for duty
/// below 0.5 the reference's on-interval contains the signal's and the
/// containment range starts at the true alignment (left break); above 0.5
/// the containment flips and the range *ends* there (right break). The
/// decomposition picks after the duty stage; the two coincide at duty 0.5.
struct PhaseEdges {
    left_phase: f64,
    right_phase: f64,
    left_lag_s: f64,
    peak_value: f64,
}

fn phase_edges(u: &SampledSignal, f_hz: f64) -> Result<PhaseEdges> {
    if u.samples().iter().all(|&v| v == 0.0) {
        return Err(Error::UndefinedPhase);
    }
    let xc = cross_correlation_with_square(u, f_hz)?;
    let values = xc.values();
    let (mut raw_lag, _) = xc.argmax();
    let period_lags = ((u.fs() / f_hz).ceil() as usize).min(u.len() - 1).max(1);
    // A maximum earlier than one period can belong to a flat top whose left
    // break wrapped past lag 0 and is unobservable there. The top recurs one
    // period later with a full flank in front of it; the phase is unchanged
    // modulo the period.
    if raw_lag < period_lags && 2 * period_lags < values.len() {
        let hi = (raw_lag + period_lags).min(values.len() - 1);
        let mut best = period_lags;
        for t in period_lags..=hi {
            if values[t] > values[best] {
                best = t;
            }
        }
        raw_lag = best;
    }
    let left_lag = left_edge_of_maximum(values, raw_lag, period_lags);
    let right_lag = right_edge_of_maximum(values, raw_lag, period_lags);
    let t_left = subsample_break(values, left_lag, true) * xc.dt();
    let t_right = subsample_break(values, right_lag, false) * xc.dt();
    Ok(PhaseEdges {
        left_phase: (TAU * t_left * f_hz).rem_euclid(TAU),
        right_phase: (TAU * t_right * f_hz).rem_euclid(TAU),
        left_lag_s: t_left,
        peak_value: values[left_lag],
    })
}

/// Stage 2: initial phase of the component at `f_hz`, from the global
/// maximum of the cross-correlation against the ideal unit square wave:
/// φ = mod(2π·t_max·f, 2π). A flat-topped correlation resolves to the left
/// edge of its plateau, which is the component's phase for duty cycles up to
/// 0.5; [`decompose`] switches to the right edge when the duty stage finds a
/// wider component.
pub fn estimate_phase(u: &SampledSignal, f_hz: f64) -> Result<f64> {
    phase_edges(u, f_hz).map(|e| e.left_phase)
}

// ---------------------------------------------------------------------------
// Stage 3: duty cycle
// ---------------------------------------------------------------------------

/// On-runs (half-open sample index ranges at the high level) of the candidate
/// pulse wave for each duty on the grid. Built incrementally: raising the
/// duty only extends each period's run, so the whole grid costs one pass over
/// the phase fractions plus the extensions.
fn duty_grid_runs(
    fracs: &[f64],
    duty_resolution: f64,
) -> (Vec<f64>, Vec<Vec<(usize, usize)>>) {
    let l = fracs.len();
    let mut starts = vec![0usize];
    for i in 1..l {
        if fracs[i] < fracs[i - 1] {
            starts.push(i);
        }
    }
    let n_periods = starts.len();
    let period_end = |p: usize| if p + 1 < n_periods { starts[p + 1] } else { l };

    let n_duties = (1.0 / duty_resolution).round() as usize - 1;
    let mut ends: Vec<usize> = starts.clone();
    let mut duties = Vec::with_capacity(n_duties);
    let mut runs_per_duty = Vec::with_capacity(n_duties);
    for j in 1..=n_duties {
        let duty = j as f64 * duty_resolution;
        for p in 0..n_periods {
            let pe = period_end(p);
            let mut e = ends[p];
            while e < pe && fracs[e] < duty {
                e += 1;
            }
            ends[p] = e;
        }
        duties.push(duty);
        runs_per_duty.push(starts.iter().copied().zip(ends.iter().copied()).collect());
    }
    (duties, runs_per_duty)
}

/// Cross-covariance of the mean-removed input against a mean-removed
/// two-level wave given by its on-runs, maximized over lags 0..=max_lag.
///
/// With w = A·(2x − 1) and q the on-fraction, the lag-τ sum reduces to
/// 2A·(Σ ũ[i]·x[i+τ] − q·Σ ũ[i]), both sums read off prefix sums of ũ.
/// This is the literal covariance definition, just re-associated.
fn best_covariance_over_lags(
    prefix: &[f64],
    runs: &[(usize, usize)],
    amplitude: f64,
    l: usize,
    max_lag: usize,
) -> f64 {
    let n_on: usize = runs.iter().map(|(s, e)| e - s).sum();
    let q = n_on as f64 / l as f64;
    let mut best = f64::NEG_INFINITY;
    for tau in 0..=max_lag {
        let s_all = prefix[l - tau];
        let mut s_on = 0.0;
        for &(s, e) in runs {
            if e <= tau {
                continue;
            }
            let hi = e - tau;
            let lo = s.saturating_sub(tau);
            if hi > lo {
                s_on += prefix[hi] - prefix[lo];
            }
        }
        let score = 2.0 * amplitude * (s_on - q * s_all) / l as f64;
        if score > best {
            best = score;
        }
    }
    best
}

fn duty_detail(
    u: &SampledSignal,
    f_hz: f64,
    phase_rad: f64,
    opts: &DecomposeOptions,
) -> Result<(f64, Vec<(f64, f64)>)> {
    let l = u.len();
    let fs = u.fs();
    if !(f_hz > 0.0) || f_hz >= fs / 2.0 {
        return Err(Error::Aliasing { f_hz, fs });
    }
    let mean = u.mean();
    let mut prefix = Vec::with_capacity(l + 1);
    let mut acc = 0.0;
    prefix.push(0.0);
    for &x in u.samples() {
        acc += x - mean;
        prefix.push(acc);
    }
    let amplitude = u.peak_to_peak() / 2.0;
    let max_lag = ((fs / f_hz).ceil() as usize).min(l - 1);

    let fracs = phase_fractions(f_hz, phase_rad, fs, l);
    let (duties, runs_per_duty) = duty_grid_runs(&fracs, opts.duty_resolution);

    let best_scores = par::map_collect(&runs_per_duty, |runs| {
        best_covariance_over_lags(&prefix, runs, amplitude, l, max_lag)
    });

    let mut best = 0usize;
    for (i, &s) in best_scores.iter().enumerate() {
        if s > best_scores[best] {
            best = i;
        }
    }
    let scores: Vec<(f64, f64)> = duties.iter().copied().zip(best_scores).collect();
    Ok((duties[best], scores))
}

/// Stage 3: duty cycle of the component at (`f_hz`, `phase_rad`).
///
/// Candidate pulse waves with amplitude equal to half the input's
/// peak-to-peak value are built for every duty on the Δδ grid; the duty whose
/// cross-covariance with the input attains the largest global maximum wins
/// (smallest duty on ties).
pub fn estimate_duty(
    u: &SampledSignal,
    f_hz: f64,
    phase_rad: f64,
    opts: &DecomposeOptions,
) -> Result<f64> {
    duty_detail(u, f_hz, phase_rad, opts).map(|(d, _)| d)
}

// ---------------------------------------------------------------------------
// Stage 4: amplitude
// ---------------------------------------------------------------------------

fn amplitude_detail(
    u: &SampledSignal,
    f_hz: f64,
    phase_rad: f64,
    duty: f64,
    opts: &DecomposeOptions,
) -> Result<(f64, Vec<(f64, f64)>, f64)> {
    let l = u.len();
    let fs = u.fs();
    let ptp = u.peak_to_peak();
    if ptp == 0.0 {
        return Ok((0.0, Vec::new(), 0.0));
    }
    let r = opts.amp_steps;
    let dk = ptp / r as f64;

    let nfft = pipeline_nfft(l);
    let spec_in = amplitude_spectrum(u, nfft)?;
    let unit = gen_pulse_wave_n(&PulseWaveParams::new(f_hz, phase_rad, duty, 1.0)?, fs, l)?;
    let spec_unit = amplitude_spectrum(&unit, nfft)?;

    let tolerance = opts
        .freq_tolerance_hz
        .unwrap_or_else(|| default_freq_tolerance(fs, l));
    let band = opts
        .energy_neighborhood_bins
        .unwrap_or(((tolerance / spec_in.df).ceil() as usize).max(1));

    // Global maximum of the candidate spectrum, searched in the component's
    // own band. For strongly asymmetric duties the DC line would otherwise
    // win, and the input's DC carries the other components' offsets.
    let half = spec_unit.amplitudes.len() - 1;
    let center = ((f_hz / spec_unit.df).round() as usize).clamp(1, half);
    let lo = center.saturating_sub(band).max(1);
    let hi = (center + band).min(half);
    let mut m_star = lo;
    for b in lo..=hi {
        if spec_unit.amplitudes[b] > spec_unit.amplitudes[m_star] {
            m_star = b;
        }
    }

    let wlo = m_star.saturating_sub(band);
    let whi = (m_star + band).min(half);
    let e_unit: f64 = spec_unit.amplitudes[wlo..=whi].iter().map(|a| a * a).sum();
    let e_in: f64 = spec_in.amplitudes[wlo..=whi].iter().map(|a| a * a).sum();

    // A candidate of amplitude a is a·(unit wave), so its band energy is
    // a²·e_unit; the grid search stays explicit but needs no further FFTs.
    let mut curve = Vec::with_capacity(r);
    let mut best = (0usize, f64::INFINITY);
    for j in 1..=r {
        let a = j as f64 * dk;
        let energy = a * a * e_unit;
        let miss = (energy - e_in).abs();
        if miss < best.1 {
            best = (j, miss);
        }
        curve.push((a, energy));
    }
    Ok((best.0 as f64 * dk, curve, e_in))
}

/// Stage 4: amplitude of the component at (`f_hz`, `phase_rad`, `duty`).
///
/// Candidates {Δk, 2Δk, …, R·Δk} span the input's peak-to-peak value; the
/// winner's spectral energy around the candidate wave's fundamental is
/// closest to the input's energy in the same bins (smallest candidate on
/// ties).
pub fn estimate_amplitude(
    u: &SampledSignal,
    f_hz: f64,
    phase_rad: f64,
    duty: f64,
    opts: &DecomposeOptions,
) -> Result<f64> {
    amplitude_detail(u, f_hz, phase_rad, duty, opts).map(|(a, _, _)| a)
}

// ---------------------------------------------------------------------------
// Full pipeline
// ---------------------------------------------------------------------------

/// Runs stages 1–4 in order; every component is estimated independently from
/// the same input. Weak or missing components produce warnings in the
/// diagnostics, never an abort.
pub fn decompose(u: &SampledSignal, opts: &DecomposeOptions) -> Result<Decomposition> {
    opts.validate()?;
    if u.samples().iter().all(|&v| v == 0.0) {
        return Ok(Decomposition {
            components: Vec::new(),
            diagnostics: Diagnostics {
                warnings: vec!["input is identically zero; nothing to decompose".into()],
                ..Diagnostics::default()
            },
        });
    }

    let scan = estimate_frequencies(u, opts)?;
    let mut warnings = Vec::new();
    if scan.shortfall {
        warnings.push(format!(
            "only {} of {} requested components survived peak selection",
            scan.frequencies.len(),
            opts.n_components
        ));
    }

    let mut components = Vec::with_capacity(scan.frequencies.len());
    let mut per_component = Vec::with_capacity(scan.frequencies.len());
    for &f_hz in &scan.frequencies {
        let edges = phase_edges(u, f_hz)?;
        // The duty search is invariant to a phase offset (its lag scan spans
        // a full period), so the provisional left-edge phase is fine here.
        let (duty, duty_scores) = duty_detail(u, f_hz, edges.left_phase, opts)?;
        let phase = if duty > 0.5 {
            edges.right_phase
        } else {
            edges.left_phase
        };
        let (amplitude, amplitude_energies, input_band_energy) =
            amplitude_detail(u, f_hz, phase, duty, opts)?;
        components.push(PulseWaveParams::new(f_hz, phase, duty, amplitude)?);
        per_component.push(ComponentDiagnostics {
            freq_hz: f_hz,
            xcorr_peak_lag_s: edges.left_lag_s,
            xcorr_peak_value: edges.peak_value,
            duty_scores,
            amplitude_energies,
            input_band_energy,
        });
    }

    Ok(Decomposition {
        components,
        diagnostics: Diagnostics {
            peaks: scan.peaks,
            components: per_component,
            warnings,
        },
    })
}
