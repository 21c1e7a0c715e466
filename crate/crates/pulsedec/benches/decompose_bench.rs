//! Decomposition throughput, parallel against single-threaded.
//!
//! With the default `parallel` feature the suite runs the same workload on
//! the full rayon pool and on a one-thread pool; built with
//! `--no-default-features` it measures the sequential fallback directly.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use pulsedec::decompose::{decompose, DecomposeOptions};
use pulsedec::testgen::gen_pulse_wave;
use pulsedec::{PulseWaveParams, SampledSignal};
use std::hint::black_box;

fn two_component_signal(n: usize, fs: f64) -> SampledSignal {
    let dur = n as f64 / fs;
    let a = gen_pulse_wave(
        &PulseWaveParams::new(1.3, 0.4, 0.3, 0.02).unwrap(),
        fs,
        dur,
    )
    .unwrap();
    let b = gen_pulse_wave(
        &PulseWaveParams::new(21.0, 2.0, 0.6, 0.01).unwrap(),
        fs,
        dur,
    )
    .unwrap();
    let sum: Vec<f64> = a
        .samples()
        .iter()
        .zip(b.samples())
        .map(|(x, y)| x + y)
        .collect();
    SampledSignal::new(sum, fs).unwrap()
}

fn bench_decompose(c: &mut Criterion) {
    let fs = 4000.0;
    let mut group = c.benchmark_group("decompose");
    group.sample_size(10);
    for log2n in [16usize, 17] {
        let n = 1usize << log2n;
        let u = two_component_signal(n, fs);
        let opts = DecomposeOptions::new(2);

        #[cfg(feature = "parallel")]
        {
            group.bench_with_input(BenchmarkId::new("parallel", n), &u, |b, u| {
                b.iter(|| black_box(decompose(u, &opts).unwrap()))
            });
            let single = rayon::ThreadPoolBuilder::new()
                .num_threads(1)
                .build()
                .unwrap();
            group.bench_with_input(BenchmarkId::new("single-thread", n), &u, |b, u| {
                b.iter(|| single.install(|| black_box(decompose(u, &opts).unwrap())))
            });
        }

        #[cfg(not(feature = "parallel"))]
        group.bench_with_input(BenchmarkId::new("sequential", n), &u, |b, u| {
            b.iter(|| black_box(decompose(u, &opts).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, bench_decompose);
criterion_main!(benches);
