//! Statistical signal primitives: autocovariance, cross-correlation against a
//! reference square wave, cross-covariance, one-sided amplitude spectra and
//! spectral peak picking.
//!
//! The three lag statistics share one index convention: the value at lag k is
//! a sum over i = 0..L−1−k normalized by 1/L (a biased estimate, the sum
//! simply loses terms as the lag grows). They are computed through
//! frequency-domain correlation but are required — and tested — to agree
//! with the literal summation to 1e-12 of the series scale.

use crate::error::{Error, Result};
use crate::fft;
use crate::model::{SampledSignal, Spectrum};
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// A lag statistic sampled at multiples of `dt` seconds, lag 0 first.
#[derive(Debug, Clone, PartialEq)]
pub struct LagSeries {
    values: Vec<f64>,
    dt: f64,
}

impl LagSeries {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Lag step in seconds (one sample interval).
    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn max_lag(&self) -> usize {
        self.values.len() - 1
    }

    /// Index and value of the global maximum; the smallest lag wins ties.
    pub fn argmax(&self) -> (usize, f64) {
        let mut best = (0usize, f64::NEG_INFINITY);
        for (i, &v) in self.values.iter().enumerate() {
            if v > best.1 {
                best = (i, v);
            }
        }
        best
    }
}

/// A local maximum of an amplitude spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralPeak {
    /// Bin-center frequency in Hz.
    pub freq_hz: f64,
    pub magnitude: f64,
    pub bin: usize,
}

/// sign with sign(0) = 0, as written in the correlation reference.
fn signum0(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Shared core of the two covariance statistics: remove each window mean,
/// correlate, scale by 1/L.
fn lag_covariance(u1: &[f64], u2: &[f64], fs: f64, max_lag: usize) -> LagSeries {
    let l = u1.len() as f64;
    let m1 = u1.iter().sum::<f64>() / l;
    let v1: Vec<f64> = u1.iter().map(|x| x - m1).collect();
    let mut r = if std::ptr::eq(u1, u2) {
        fft::lagged_products(&v1, &v1, max_lag)
    } else {
        let m2 = u2.iter().sum::<f64>() / l;
        let v2: Vec<f64> = u2.iter().map(|x| x - m2).collect();
        fft::lagged_products(&v1, &v2, max_lag)
    };
    for x in &mut r {
        *x /= l;
    }
    LagSeries {
        values: r,
        dt: 1.0 / fs,
    }
}

/// Autocovariance of `u` for lags 0..=`max_lag`: the window mean is removed
/// and the lag-k sum over the remaining L−k overlapping terms is divided
/// by L.
pub fn autocovariance(u: &SampledSignal, max_lag: usize) -> Result<LagSeries> {
    if max_lag >= u.len() {
        return Err(Error::InvalidInput(format!(
            "max_lag {max_lag} must be below the signal length {}",
            u.len()
        )));
    }
    Ok(lag_covariance(u.samples(), u.samples(), u.fs(), max_lag))
}

/// Cross-correlation of `u` against the ideal unit square wave
/// sign(sin(2π·f·t)) at the signal's own sampling grid (t = 0 at the first
/// sample), for all lags 0..L−1. The signal mean is deliberately not removed.
pub fn cross_correlation_with_square(u: &SampledSignal, f_hz: f64) -> Result<LagSeries> {
    let fs = u.fs();
    if !(f_hz > 0.0) || f_hz >= fs / 2.0 {
        return Err(Error::Aliasing { f_hz, fs });
    }
    let l = u.len();
    let reference: Vec<f64> = (0..l)
        .map(|i| signum0((TAU * f_hz * (i as f64 / fs)).sin()))
        .collect();
    let mut r = fft::lagged_products(u.samples(), &reference, l - 1);
    let ln = l as f64;
    for x in &mut r {
        *x /= ln;
    }
    Ok(LagSeries {
        values: r,
        dt: 1.0 / fs,
    })
}

/// Cross-covariance of two equally long, equally sampled signals for lags
/// 0..=`max_lag`, each with its own window mean removed, normalized by 1/L.
pub fn cross_covariance(
    u1: &SampledSignal,
    u2: &SampledSignal,
    max_lag: usize,
) -> Result<LagSeries> {
    if u1.fs() != u2.fs() {
        return Err(Error::InvalidInput(format!(
            "sampling rates differ: {} vs {} Sa/s",
            u1.fs(),
            u2.fs()
        )));
    }
    if u1.len() != u2.len() {
        return Err(Error::InvalidInput(format!(
            "signal lengths differ: {} vs {}",
            u1.len(),
            u2.len()
        )));
    }
    if max_lag >= u1.len() {
        return Err(Error::InvalidInput(format!(
            "max_lag {max_lag} must be below the signal length {}",
            u1.len()
        )));
    }
    Ok(lag_covariance(u1.samples(), u2.samples(), u1.fs(), max_lag))
}

/// One-sided amplitude spectrum of `u`, zero-padded to `nfft` points.
///
/// Scaling follows the sinusoid convention: a pure sinusoid of amplitude A at
/// a bin-centered frequency produces a bin magnitude of A (DC and Nyquist
/// bins are not doubled). Power-of-two `nfft` uses the Cooley–Tukey path,
/// anything else a direct DFT.
pub fn amplitude_spectrum(u: &SampledSignal, nfft: usize) -> Result<Spectrum> {
    if nfft < u.len() {
        return Err(Error::InvalidInput(format!(
            "nfft {nfft} must be at least the signal length {}",
            u.len()
        )));
    }
    let l = u.len() as f64;
    let buf = fft::real_spectrum(u.samples(), nfft);
    let half = nfft / 2;
    let mut amplitudes = Vec::with_capacity(half + 1);
    for (i, c) in buf.iter().take(half + 1).enumerate() {
        let one_sided = if i == 0 || (nfft % 2 == 0 && i == half) {
            1.0
        } else {
            2.0
        };
        amplitudes.push(one_sided * c.norm() / l);
    }
    Ok(Spectrum {
        amplitudes,
        df: u.fs() / nfft as f64,
        window_len: u.len(),
    })
}

/// Strict local maxima of a spectrum, magnitude-descending.
///
/// A bin qualifies when it exceeds both neighbors (the DC bin when allowed
/// needs only to exceed bin 1). Peaks closer than `min_separation_bins` to an
/// already kept larger peak are suppressed. Equal-magnitude peaks keep the
/// lower bin first.
pub fn find_peaks(
    s: &Spectrum,
    exclude_dc: bool,
    min_separation_bins: usize,
) -> Vec<SpectralPeak> {
    let a = &s.amplitudes;
    let mut candidates: Vec<usize> = Vec::new();
    if !exclude_dc && a.len() >= 2 && a[0] > a[1] {
        candidates.push(0);
    }
    for b in 1..a.len().saturating_sub(1) {
        if a[b] > a[b - 1] && a[b] > a[b + 1] {
            candidates.push(b);
        }
    }
    candidates.sort_by(|&x, &y| {
        a[y].partial_cmp(&a[x])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(x.cmp(&y))
    });

    // Suppression via separation-wide buckets: two kept peaks can never share
    // a bucket, so each candidate checks at most three slots. A noisy
    // spectrum has local maxima at a sizable fraction of its bins, and a
    // kept-list scan would go quadratic there.
    let sep = min_separation_bins.max(1);
    let mut bucket_of: Vec<Option<usize>> = vec![None; a.len() / sep + 2];
    let mut kept: Vec<SpectralPeak> = Vec::new();
    for b in candidates {
        let bucket = b / sep;
        let too_close = (bucket.saturating_sub(1)..=bucket + 1).any(|nb| {
            bucket_of
                .get(nb)
                .and_then(|slot| *slot)
                .is_some_and(|kb| b.abs_diff(kb) < sep)
        });
        if !too_close {
            bucket_of[bucket] = Some(b);
            kept.push(SpectralPeak {
                freq_hz: s.freq_of_bin(b),
                magnitude: a[b],
                bin: b,
            });
        }
    }
    kept
}
