//! Matching of estimated components to ground truth and the relative-error
//! statistics used to compare decompositions: δf = |f_est − f|/f and
//! δk = |k_est − k|/k per matched component, summarized as box-plot stats.

use crate::error::{Error, Result};
use crate::model::PulseWaveParams;
use serde::{Deserialize, Serialize};
use std::io::Write;

/// Per-component estimation errors for one signal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorRecord {
    pub signal_id: String,
    /// Number of true components in the signal.
    pub n_components: usize,
    /// Index of the truth component this record describes.
    pub component: usize,
    pub f_true: f64,
    pub f_est: f64,
    pub k_true: f64,
    pub k_est: f64,
    pub delta_f: f64,
    pub delta_k: f64,
    pub matched: bool,
}

/// Five-number summary plus mean, whiskers at 1.5·IQR clipped to the data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxStats {
    pub n: usize,
    pub mean: f64,
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
    pub whisker_lo: f64,
    pub whisker_hi: f64,
    pub outlier_count: usize,
}

/// One-to-one assignment of truth components to estimated components,
/// minimizing the summed relative frequency distance Σ|ln(f_est/f_true)|
/// by exhaustive enumeration (component counts never exceed a handful).
/// `pairing[i]` is the estimate index for truth component `i`, or `None`
/// when there are fewer estimates than truths.
pub fn match_components(
    estimated: &[PulseWaveParams],
    truth: &[PulseWaveParams],
) -> Vec<Option<usize>> {
    let n_truth = truth.len();
    let n_est = estimated.len();
    let mut best: Option<(f64, Vec<Option<usize>>)> = None;
    let mut assignment: Vec<Option<usize>> = vec![None; n_truth];
    let mut used = vec![false; n_est];

    fn recurse(
        t: usize,
        remaining_est: usize,
        cost: f64,
        estimated: &[PulseWaveParams],
        truth: &[PulseWaveParams],
        used: &mut [bool],
        assignment: &mut Vec<Option<usize>>,
        best: &mut Option<(f64, Vec<Option<usize>>)>,
    ) {
        if t == truth.len() {
            if best.as_ref().map_or(true, |(c, _)| cost < *c) {
                *best = Some((cost, assignment.clone()));
            }
            return;
        }
        let unmatched_allowed = estimated.len() < truth.len();
        for e in 0..estimated.len() {
            if used[e] {
                continue;
            }
            used[e] = true;
            assignment[t] = Some(e);
            let d = (estimated[e].f_hz() / truth[t].f_hz()).ln().abs();
            recurse(
                t + 1,
                remaining_est - 1,
                cost + d,
                estimated,
                truth,
                used,
                assignment,
                best,
            );
            used[e] = false;
            assignment[t] = None;
        }
        // Leave this truth unmatched only when estimates cannot cover all.
        if unmatched_allowed && remaining_est < truth.len() - t {
            recurse(
                t + 1,
                remaining_est,
                cost,
                estimated,
                truth,
                used,
                assignment,
                best,
            );
        }
    }

    recurse(
        0,
        n_est,
        0.0,
        estimated,
        truth,
        &mut used,
        &mut assignment,
        &mut best,
    );
    best.map(|(_, a)| a).unwrap_or(assignment)
}

/// Relative errors per truth component given a pairing from
/// [`match_components`]. Unmatched truths keep NaN estimates and are flagged.
pub fn relative_errors(
    signal_id: &str,
    truth: &[PulseWaveParams],
    estimated: &[PulseWaveParams],
    pairing: &[Option<usize>],
) -> Vec<ErrorRecord> {
    truth
        .iter()
        .enumerate()
        .map(|(i, t)| match pairing[i] {
            Some(e) if t.f_hz() > 0.0 && t.amplitude() > 0.0 => {
                let est = &estimated[e];
                ErrorRecord {
                    signal_id: signal_id.to_string(),
                    n_components: truth.len(),
                    component: i,
                    f_true: t.f_hz(),
                    f_est: est.f_hz(),
                    k_true: t.amplitude(),
                    k_est: est.amplitude(),
                    delta_f: (est.f_hz() - t.f_hz()).abs() / t.f_hz(),
                    delta_k: (est.amplitude() - t.amplitude()).abs() / t.amplitude(),
                    matched: true,
                }
            }
            _ => ErrorRecord {
                signal_id: signal_id.to_string(),
                n_components: truth.len(),
                component: i,
                f_true: t.f_hz(),
                f_est: f64::NAN,
                k_true: t.amplitude(),
                k_est: f64::NAN,
                delta_f: f64::NAN,
                delta_k: f64::NAN,
                matched: false,
            },
        })
        .collect()
}

/// Type-7 (linear interpolation) quantile of sorted data.
fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let h = (n - 1) as f64 * p;
    let lo = h.floor() as usize;
    let frac = h - lo as f64;
    if lo + 1 < n {
        sorted[lo] + frac * (sorted[lo + 1] - sorted[lo])
    } else {
        sorted[n - 1]
    }
}

/// Box-plot summary of a sample: type-7 quartiles, whiskers at the most
/// extreme data points within 1.5·IQR of the quartiles, outliers counted
/// beyond them.
pub fn summarize(values: &[f64]) -> Result<BoxStats> {
    if values.is_empty() {
        return Err(Error::InvalidInput(
            "cannot summarize an empty sample".into(),
        ));
    }
    if values.iter().any(|v| v.is_nan()) {
        return Err(Error::InvalidInput(
            "cannot summarize a sample containing NaN".into(),
        ));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let q1 = quantile_sorted(&sorted, 0.25);
    let median = quantile_sorted(&sorted, 0.5);
    let q3 = quantile_sorted(&sorted, 0.75);
    let iqr = q3 - q1;
    let lo_fence = q1 - 1.5 * iqr;
    let hi_fence = q3 + 1.5 * iqr;
    let whisker_lo = sorted
        .iter()
        .copied()
        .find(|&v| v >= lo_fence)
        .unwrap_or(sorted[0]);
    let whisker_hi = sorted
        .iter()
        .rev()
        .copied()
        .find(|&v| v <= hi_fence)
        .unwrap_or(sorted[sorted.len() - 1]);
    let outlier_count = sorted
        .iter()
        .filter(|&&v| v < whisker_lo || v > whisker_hi)
        .count();
    Ok(BoxStats {
        n: sorted.len(),
        mean: sorted.iter().sum::<f64>() / sorted.len() as f64,
        median,
        q1,
        q3,
        whisker_lo,
        whisker_hi,
        outlier_count,
    })
}

/// CSV header for [`write_csv`].
pub const CSV_HEADER: &str =
    "signal_id,N,i,f_true,f_est,k_true,k_est,delta_f,delta_k,matched";

/// Writes error records as CSV with the fixed column set. Floats use the
/// shortest round-trip representation, so output is byte-stable.
pub fn write_csv<W: Write>(records: &[ErrorRecord], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            r.signal_id,
            r.n_components,
            r.component,
            r.f_true,
            r.f_est,
            r.k_true,
            r.k_est,
            r.delta_f,
            r.delta_k,
            r.matched
        )?;
    }
    Ok(())
}
