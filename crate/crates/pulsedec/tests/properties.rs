//! Property tests over the generators and statistics.

use proptest::prelude::*;
use pulsedec::metrics::{match_components, summarize};
use pulsedec::spectral::{autocovariance, cross_covariance};
use pulsedec::testgen::gen_pulse_wave;
use pulsedec::{PulseWaveParams, SampledSignal};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Over an integer number of periods the on-fraction of a pulse wave is
    /// the duty cycle within one sample per period.
    #[test]
    fn pulse_wave_on_fraction_tracks_duty(
        f in 0.5f64..40.0,
        duty in 0.05f64..0.95,
        phase in 0.0f64..std::f64::consts::TAU,
        periods in 3u32..12,
    ) {
        let fs = 2000.0;
        let p = PulseWaveParams::new(f, phase, duty, 1.0).unwrap();
        let duration = periods as f64 / f;
        let u = gen_pulse_wave(&p, fs, duration).unwrap();
        let on = u.samples().iter().filter(|&&v| v > 0.0).count() as f64;
        let fraction = on / u.len() as f64;
        // One boundary sample of slack per period, plus the rounding of the
        // window length itself.
        let slack = (periods as f64 + 1.0) / u.len() as f64;
        prop_assert!((fraction - duty).abs() <= slack,
            "duty {duty}, fraction {fraction}, slack {slack}");
    }

    /// Cross-covariance of a signal with itself is its autocovariance.
    #[test]
    fn cross_covariance_degenerates_to_autocovariance(
        seed in 0u64..5000,
        len in 64usize..512,
    ) {
        let mut state = seed.wrapping_mul(0x9E3779B97F4A7C15) | 1;
        let samples: Vec<f64> = (0..len)
            .map(|_| {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
                (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
            })
            .collect();
        let u = SampledSignal::new(samples, 1000.0).unwrap();
        let max_lag = len / 2;
        let a = autocovariance(&u, max_lag).unwrap();
        let c = cross_covariance(&u, &u, max_lag).unwrap();
        prop_assert_eq!(a.values(), c.values());
    }

    /// Box statistics do not depend on the sample order.
    #[test]
    fn summarize_is_permutation_invariant(
        mut values in proptest::collection::vec(0.0f64..10.0, 1..60),
        swaps in proptest::collection::vec((0usize..60, 0usize..60), 0..30),
    ) {
        let before = summarize(&values).unwrap();
        for (i, j) in swaps {
            let n = values.len();
            values.swap(i % n, j % n);
        }
        let after = summarize(&values).unwrap();
        prop_assert_eq!(before, after);
    }

    /// Matching recovers an arbitrary permutation of the truth exactly.
    #[test]
    fn matching_inverts_permutations(
        perm_seed in 0u64..1000,
        n in 1usize..5,
    ) {
        let freqs = [0.4, 3.0, 21.0, 88.0];
        let truth: Vec<PulseWaveParams> = freqs[..n]
            .iter()
            .map(|&f| PulseWaveParams::new(f, 0.0, 0.5, 0.01).unwrap())
            .collect();
        let mut order: Vec<usize> = (0..n).collect();
        let mut state = perm_seed;
        for i in (1..n).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
            order.swap(i, (state >> 33) as usize % (i + 1));
        }
        let estimates: Vec<PulseWaveParams> = order.iter().map(|&i| truth[i]).collect();
        let pairing = match_components(&estimates, &truth);
        for (t, assigned) in pairing.iter().enumerate() {
            prop_assert_eq!(estimates[assigned.unwrap()].f_hz(), truth[t].f_hz());
        }
    }
}
