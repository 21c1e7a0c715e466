//! Transform plumbing shared by the spectral and decomposition modules.
//!
//! Power-of-two sizes go through the Cooley–Tukey path (rustfft); any other
//! size falls back to a direct O(n²) DFT. All internal callers pick
//! power-of-two sizes, so the direct path only runs when a caller explicitly
//! requests an odd transform length.

use rustfft::{num_complex::Complex, FftPlanner};
use std::cell::RefCell;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn fft_pow2(buf: &mut [Complex<f64>], inverse: bool) {
    debug_assert!(buf.len().is_power_of_two());
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        let fft = if inverse {
            p.plan_fft_inverse(buf.len())
        } else {
            p.plan_fft_forward(buf.len())
        };
        fft.process(buf);
    });
}

fn dft_direct(buf: &mut [Complex<f64>], inverse: bool) {
    let n = buf.len();
    let sign = if inverse { 1.0 } else { -1.0 };
    let mut out = vec![Complex::new(0.0, 0.0); n];
    for (k, o) in out.iter_mut().enumerate() {
        let w = sign * std::f64::consts::TAU * k as f64 / n as f64;
        let mut acc = Complex::new(0.0, 0.0);
        for (i, x) in buf.iter().enumerate() {
            let (s, c) = (w * i as f64).sin_cos();
            acc += x * Complex::new(c, s);
        }
        *o = acc;
    }
    buf.copy_from_slice(&out);
}

/// In-place transform; unnormalized in both directions (callers scale).
pub(crate) fn transform(buf: &mut [Complex<f64>], inverse: bool) {
    if buf.len().is_power_of_two() {
        fft_pow2(buf, inverse);
    } else {
        dft_direct(buf, inverse);
    }
}

/// In-place transform without the power-of-two restriction, for internal
/// correlation scratch sizes where a mixed-radix length avoids doubling the
/// buffer.
fn transform_any(buf: &mut [Complex<f64>], inverse: bool) {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        let fft = if inverse {
            p.plan_fft_inverse(buf.len())
        } else {
            p.plan_fft_forward(buf.len())
        };
        fft.process(buf);
    });
}

/// Smallest FFT-friendly length ≥ n among {2^k, 3·2^k, 5·2^k, 7·2^k}.
fn fast_len(n: usize) -> usize {
    let pow2 = n.next_power_of_two();
    let mut best = pow2;
    for odd in [3usize, 5, 7] {
        let mut m = odd;
        while m < n {
            m <<= 1;
        }
        if m >= n && m < best {
            best = m;
        }
    }
    best
}

/// Forward transform of a real series zero-padded to `nfft`, returning the
/// full complex spectrum.
pub(crate) fn real_spectrum(x: &[f64], nfft: usize) -> Vec<Complex<f64>> {
    debug_assert!(nfft >= x.len());
    let mut buf = vec![Complex::new(0.0, 0.0); nfft];
    for (b, &v) in buf.iter_mut().zip(x.iter()) {
        b.re = v;
    }
    transform(&mut buf, false);
    buf
}

/// Lagged products r[k] = Σ_{i=0}^{L−1−k} a[i]·b[i+k] for k = 0..=max_lag,
/// computed via frequency-domain correlation with enough zero padding that
/// no circular wrap reaches the requested lags. Passing the same slice twice
/// takes an autocorrelation fast path with one forward transform.
pub(crate) fn lagged_products(a: &[f64], b: &[f64], max_lag: usize) -> Vec<f64> {
    assert_eq!(a.len(), b.len());
    let l = a.len();
    debug_assert!(max_lag < l);
    let m = fast_len(l + max_lag + 1);
    let scale = 1.0 / m as f64;

    if std::ptr::eq(a, b) {
        let mut fa = vec![Complex::new(0.0, 0.0); m];
        for (slot, &v) in fa.iter_mut().zip(a.iter()) {
            slot.re = v;
        }
        transform_any(&mut fa, false);
        for v in fa.iter_mut() {
            *v = Complex::new(v.norm_sqr(), 0.0);
        }
        transform_any(&mut fa, true);
        return fa[..=max_lag].iter().map(|c| c.re * scale).collect();
    }

    let mut fa = vec![Complex::new(0.0, 0.0); m];
    for (slot, &v) in fa.iter_mut().zip(a.iter()) {
        slot.re = v;
    }
    let mut fb = vec![Complex::new(0.0, 0.0); m];
    for (slot, &v) in fb.iter_mut().zip(b.iter()) {
        slot.re = v;
    }
    transform_any(&mut fa, false);
    transform_any(&mut fb, false);
    for (vb, va) in fb.iter_mut().zip(fa.iter()) {
        *vb *= va.conj();
    }
    transform_any(&mut fb, true);
    fb[..=max_lag].iter().map(|c| c.re * scale).collect()
}

pub(crate) fn next_pow2(n: usize) -> usize {
    n.next_power_of_two()
}

/// Single-frequency DFT value of a slice whose first sample sits at absolute
/// index `start`, via an incremental complex rotation (renormalized
/// periodically to stay on the unit circle).
pub(crate) fn single_bin_dft(
    samples: &[f64],
    start: usize,
    fs: f64,
    f_hz: f64,
) -> Complex<f64> {
    let step = Complex::from_polar(1.0, -std::f64::consts::TAU * f_hz / fs);
    let mut rot = Complex::from_polar(
        1.0,
        -std::f64::consts::TAU * f_hz * (start as f64 / fs),
    );
    let mut acc = Complex::new(0.0, 0.0);
    for (i, &x) in samples.iter().enumerate() {
        acc += rot * x;
        rot *= step;
        if i % 4096 == 4095 {
            rot /= rot.norm();
        }
    }
    acc
}

/// Energy explained by the least-squares fit of
/// Σ_{n=1..harmonics} aₙ·cos(2πnft) + bₙ·sin(2πnft) to the samples.
///
/// Unlike the plain periodogram |X(f)|², the fit carries the basis Gram
/// matrix, which accounts for the negative-frequency images and, with
/// harmonics included, for the overlap between a rectangular component's
/// harmonic tails and its fundamental. Both matter for lines only a few
/// cycles long in the window, where those tails otherwise bias the peak
/// position by a good fraction of its lobe width.
pub(crate) fn line_fit_energy(samples: &[f64], fs: f64, f_hz: f64, harmonics: usize) -> f64 {
    let m = 2 * harmonics;
    let step = Complex::from_polar(1.0, std::f64::consts::TAU * f_hz / fs);
    let mut rot = Complex::new(1.0, 0.0);
    let mut basis = vec![0.0f64; m];
    let mut rhs = vec![0.0f64; m];
    let mut gram = vec![0.0f64; m * m];
    for (i, &x) in samples.iter().enumerate() {
        let mut h = rot;
        for n in 0..harmonics {
            basis[2 * n] = h.re;
            basis[2 * n + 1] = h.im;
            h *= rot;
        }
        for (j, &bj) in basis.iter().enumerate() {
            rhs[j] += x * bj;
            for (kk, &bk) in basis.iter().enumerate().skip(j) {
                gram[j * m + kk] += bj * bk;
            }
        }
        rot *= step;
        if i % 4096 == 4095 {
            rot /= rot.norm();
        }
    }
    for j in 0..m {
        for kk in 0..j {
            gram[j * m + kk] = gram[kk * m + j];
        }
    }
    match solve_in_place(&mut gram, &rhs, m) {
        Some(coeffs) => rhs.iter().zip(coeffs.iter()).map(|(r, c)| r * c).sum(),
        None => {
            let (xc, xs) = (rhs[0], rhs[1]);
            (xc * xc + xs * xs) / samples.len() as f64
        }
    }
}

/// Gaussian elimination with partial pivoting for the tiny Gram systems.
fn solve_in_place(a: &mut [f64], b: &[f64], m: usize) -> Option<Vec<f64>> {
    let scale = (0..m).fold(0.0f64, |s, j| s.max(a[j * m + j].abs()));
    let mut x = b.to_vec();
    for col in 0..m {
        let pivot_row = (col..m)
            .max_by(|&r1, &r2| {
                a[r1 * m + col]
                    .abs()
                    .partial_cmp(&a[r2 * m + col].abs())
                    .unwrap()
            })
            .unwrap();
        let pivot = a[pivot_row * m + col];
        if pivot.abs() < 1e-12 * scale {
            return None;
        }
        if pivot_row != col {
            for j in 0..m {
                a.swap(col * m + j, pivot_row * m + j);
            }
            x.swap(col, pivot_row);
        }
        for row in col + 1..m {
            let factor = a[row * m + col] / a[col * m + col];
            if factor == 0.0 {
                continue;
            }
            for j in col..m {
                a[row * m + j] -= factor * a[col * m + j];
            }
            x[row] -= factor * x[col];
        }
    }
    for col in (0..m).rev() {
        for j in col + 1..m {
            let t = a[col * m + j] * x[j];
            x[col] -= t;
        }
        x[col] /= a[col * m + col];
    }
    Some(x)
}
