//! Amplitude demodulation with carrier-signal estimation.
//!
//! The carrier of a fluctuating voltage waveform is not assumed sinusoidal
//! (switching power supplies flatten the tops), so the demodulator first
//! estimates the carrier frequency, folds the signal over the carrier period
//! into a robust template of the actual carrier shape, and then recovers the
//! modulation as a sliding projection of the signal onto the tiled template.
//! A final frequency-domain equalization flattens the projection's known
//! averaging response so that modulation up to three times the carrier
//! frequency comes through at its injected level.

use crate::error::{Error, Result};
use crate::fft;
use crate::model::{SampledSignal, Spectrum};
use crate::spectral::amplitude_spectrum;
use rustfft::num_complex::Complex;
use std::f64::consts::TAU;

/// Projection window length as a fraction of the carrier period. Short
/// windows keep the projection's averaging bandwidth well above 3·f_c —
/// modulating square waves at the top of the band still need several of
/// their harmonics through — and the equalizer removes the in-band droop.
const WINDOW_PERIOD_DIVISOR: f64 = 32.0;

/// Wiener regularization of the inverse response; caps the equalizer gain
/// near nulls at roughly 1/(2·√μ).
const EQ_REGULARIZATION: f64 = 0.015;

/// Estimated carrier: refined frequency plus one period of the normalized
/// carrier shape.
#[derive(Debug, Clone, PartialEq)]
pub struct CarrierEstimate {
    f_c_hz: f64,
    template: Vec<f64>,
    quality: f64,
}

impl CarrierEstimate {
    pub fn f_c_hz(&self) -> f64 {
        self.f_c_hz
    }

    /// One period of the carrier shape, unit peak magnitude, anchored at the
    /// carrier phase of the window's first sample.
    pub fn template(&self) -> &[f64] {
        &self.template
    }

    /// Normalized rms residual of the periodic averaging; small values mean
    /// the signal really is periodic at the estimated frequency.
    pub fn quality(&self) -> f64 {
        self.quality
    }
}

fn parabolic_peak(spec: &Spectrum) -> f64 {
    let a = &spec.amplitudes;
    let mut m = 1usize;
    for b in 1..a.len() {
        if a[b] > a[m] {
            m = b;
        }
    }
    if m == 0 || m + 1 >= a.len() {
        return spec.freq_of_bin(m);
    }
    let denom = a[m - 1] + a[m + 1] - 2.0 * a[m];
    if denom == 0.0 {
        return spec.freq_of_bin(m);
    }
    let offset = (0.5 * (a[m - 1] - a[m + 1]) / denom).clamp(-0.5, 0.5);
    (m as f64 + offset) * spec.df
}

/// Carrier frequency as the global spectral maximum refined by quadratic
/// interpolation over three bins. Assumes the carrier dominates the spectrum.
pub fn estimate_carrier_frequency(u: &SampledSignal) -> Result<f64> {
    let nfft = crate::decompose::pipeline_nfft(u.len());
    let spec = amplitude_spectrum(u, nfft)?;
    Ok(parabolic_peak(&spec))
}

/// Refines a carrier frequency estimate by fitting the phase slope of the
/// carrier line across window segments. Folding over thousands of periods
/// needs the frequency to a few µHz; the spectral peak alone is two orders
/// of magnitude short of that.
fn refine_frequency(u: &SampledSignal, f0: f64) -> f64 {
    let l = u.len();
    let fs = u.fs();
    let segments = 4usize;
    let seg_len = l / segments;
    if seg_len < 8 {
        return f0;
    }
    let mut f = f0;
    for _ in 0..2 {
        let phases: Vec<f64> = (0..segments)
            .map(|s| {
                let start = s * seg_len;
                fft::single_bin_dft(&u.samples()[start..start + seg_len], start, fs, f).arg()
            })
            .collect();
        let mut slope_sum = 0.0;
        for pair in phases.windows(2) {
            let mut d = pair[1] - pair[0];
            while d > std::f64::consts::PI {
                d -= TAU;
            }
            while d < -std::f64::consts::PI {
                d += TAU;
            }
            slope_sum += d;
        }
        let seg_duration = seg_len as f64 / fs;
        f += slope_sum / (segments - 1) as f64 / (TAU * seg_duration);
    }
    f
}

/// Nearest phase bin: bin i is centered on phase i/period_bins. Centering
/// matters because at the common commensurate rates (50 Hz at 10 kSa/s) every
/// sample phase lands exactly on a bin center; flooring instead would let
/// rounding noise scatter samples across two bins.
fn phase_bin(j: usize, f_hz: f64, fs: f64, period_bins: usize) -> usize {
    let x = f_hz * (j as f64 / fs);
    let frac = x - x.floor();
    ((frac * period_bins as f64 + 0.5) as usize) % period_bins
}

/// Template value at sample j's exact phase, linearly interpolated between
/// the two nearest bin centers.
fn template_at(template: &[f64], j: usize, f_hz: f64, fs: f64) -> f64 {
    let p = template.len();
    let x = f_hz * (j as f64 / fs);
    let frac = x - x.floor();
    let pos = frac * p as f64;
    let i = pos.floor() as usize % p;
    let w = pos - pos.floor();
    template[i] * (1.0 - w) + template[(i + 1) % p] * w
}

/// Mean of the values with the top and bottom 5 % discarded.
fn trimmed_mean(values: &mut Vec<f64>) -> f64 {
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let cut = values.len() / 20;
    let kept = &values[cut..values.len() - cut];
    kept.iter().sum::<f64>() / kept.len() as f64
}

/// Folds the signal over the carrier period and averages per phase point
/// (robust mean, top/bottom 5 % discarded), yielding a unit-peak template of
/// the carrier shape. The frequency is internally refined first so the fold
/// stays phase-coherent across the whole window.
pub fn build_carrier_template(u: &SampledSignal, f_c_hz: f64) -> Result<CarrierEstimate> {
    if !(f_c_hz > 0.0) {
        return Err(Error::InvalidInput(format!(
            "carrier frequency must be positive, got {f_c_hz}"
        )));
    }
    if u.duration() < 2.0 / f_c_hz {
        return Err(Error::InvalidInput(format!(
            "carrier period {}s exceeds half the window ({}s)",
            1.0 / f_c_hz,
            u.duration()
        )));
    }
    let fs = u.fs();
    let f = refine_frequency(u, f_c_hz);
    let period_bins = (fs / f).round() as usize;
    if period_bins < 2 {
        return Err(Error::InvalidInput(
            "carrier period must span at least two samples".into(),
        ));
    }

    let mut bins: Vec<Vec<f64>> = vec![Vec::with_capacity(u.len() / period_bins + 2); period_bins];
    for (j, &x) in u.samples().iter().enumerate() {
        bins[phase_bin(j, f, fs, period_bins)].push(x);
    }
    let profile: Vec<f64> = bins
        .iter_mut()
        .map(|b| if b.is_empty() { 0.0 } else { trimmed_mean(b) })
        .collect();

    let peak = profile.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
    if peak == 0.0 {
        return Err(Error::DegenerateTemplate(
            "periodic average is identically zero".into(),
        ));
    }

    let mut residual = 0.0;
    for (j, &x) in u.samples().iter().enumerate() {
        let d = x - profile[phase_bin(j, f, fs, period_bins)];
        residual += d * d;
    }
    let quality = (residual / u.len() as f64).sqrt() / u.rms();

    Ok(CarrierEstimate {
        f_c_hz: f,
        template: profile.iter().map(|v| v / peak).collect(),
        quality,
    })
}

/// Recovers the amplitude-modulating signal from `u` given a carrier
/// estimate.
///
/// Each output sample is the least-squares projection of a short window of
/// the signal onto the tiled carrier template, normalized by the window mean
/// of the projection and equalized against the projection's own averaging
/// response. Half a window plus an equalization guard is trimmed from both
/// ends; the output's `t0` reflects the trim. The projection ratio cancels
/// any overall signal scale.
pub fn demodulate(u: &SampledSignal, est: &CarrierEstimate) -> Result<SampledSignal> {
    let l = u.len();
    let fs = u.fs();
    let f = est.f_c_hz;

    let w_raw = (fs / (WINDOW_PERIOD_DIVISOR * f)).round() as usize;
    let w = (w_raw | 1).max(5);
    let h = w / 2;
    let guard = 2 * w;
    if l < 2 * (h + guard) + w {
        return Err(Error::InvalidInput(format!(
            "signal too short to demodulate: {l} samples at window {w}"
        )));
    }

    let tiled: Vec<f64> = (0..l)
        .map(|j| template_at(&est.template, j, f, fs))
        .collect();

    // Sliding projection num/den over a centered window of w samples.
    let mut num = 0.0;
    let mut den = 0.0;
    for j in 0..w {
        num += u.samples()[j] * tiled[j];
        den += tiled[j] * tiled[j];
    }
    let den_floor = 1e-12 * w as f64;
    let valid = l - 2 * h;
    let mut raw = Vec::with_capacity(valid);
    for t in h..l - h {
        if den <= den_floor {
            return Err(Error::DegenerateTemplate(
                "zero template energy in a projection window".into(),
            ));
        }
        raw.push(num / den);
        if t + 1 < l - h {
            let add = t + h + 1;
            let drop = t - h;
            num += u.samples()[add] * tiled[add] - u.samples()[drop] * tiled[drop];
            den += tiled[add] * tiled[add] - tiled[drop] * tiled[drop];
        }
    }

    // Average effective projection kernel, for the equalizer.
    let mut kernel = vec![0.0f64; w];
    {
        let c2: Vec<f64> = tiled.iter().map(|c| c * c).collect();
        let mut den_t: f64 = c2[..w].iter().sum();
        let mut count = 0.0;
        let mut acc = vec![0.0f64; w];
        for t in h..l - h {
            let base = t - h;
            let inv = 1.0 / den_t;
            for (d, a) in acc.iter_mut().enumerate() {
                *a += c2[base + d] * inv;
            }
            count += 1.0;
            if t + 1 < l - h {
                den_t += c2[t + h + 1] - c2[t - h];
            }
        }
        for (k, a) in kernel.iter_mut().zip(acc.iter()) {
            *k = a / count;
        }
    }

    // Normalize out the carrier scale, then subtract the unit level.
    let mean = raw.iter().sum::<f64>() / raw.len() as f64;
    if mean.abs() < 1e-300 {
        return Err(Error::DegenerateTemplate(
            "projection mean is zero; no carrier level to normalize".into(),
        ));
    }
    let mut x: Vec<f64> = raw.iter().map(|v| v / mean - 1.0).collect();

    equalize(&mut x, &kernel, fs);

    let out = x[guard..x.len() - guard].to_vec();
    SampledSignal::with_start_time(out, fs, u.t0() + (h + guard) as f64 / fs)
}

/// Divides the spectrum of `x` by the kernel's frequency response using a
/// Wiener-regularized inverse, so the sliding average's droop inside the
/// modulation band is undone and out-of-band gain stays bounded.
fn equalize(x: &mut [f64], kernel: &[f64], fs: f64) {
    let lv = x.len();
    let m = fft::next_pow2(lv);
    let mut buf = vec![Complex::new(0.0, 0.0); m];
    for (b, &v) in buf.iter_mut().zip(x.iter()) {
        b.re = v;
    }
    fft::transform(&mut buf, false);

    let h = kernel.len() / 2;
    let half = m / 2;
    let mut gains = Vec::with_capacity(half + 1);
    for b in 0..=half {
        let f_hz = b as f64 * fs / m as f64;
        let mut resp = Complex::new(0.0, 0.0);
        for (d, &k) in kernel.iter().enumerate() {
            let ang = -TAU * f_hz * (d as f64 - h as f64) / fs;
            resp += Complex::from_polar(k, ang);
        }
        gains.push(resp.conj() / (resp.norm_sqr() + EQ_REGULARIZATION));
    }
    let g0 = gains[0];
    for g in &mut gains {
        *g /= g0.re;
    }
    for b in 0..m {
        let g = if b <= half {
            gains[b]
        } else {
            gains[m - b].conj()
        };
        buf[b] *= g;
    }
    fft::transform(&mut buf, true);
    let scale = 1.0 / m as f64;
    for (v, b) in x.iter_mut().zip(buf.iter()) {
        *v = b.re * scale;
    }
}
