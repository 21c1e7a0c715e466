use pulsedec::decompose::*;
use pulsedec::testgen::gen_pulse_wave;
use pulsedec::PulseWaveParams;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;
use std::time::Instant;

fn wrapped(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

fn main() {
    let fs = 10_000.0;
    let duration = 60.0;
    let n = (fs * duration) as usize;
    let df = fs / pipeline_nfft(n) as f64;
    let tol_f = default_freq_tolerance(fs, n);
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE01);
    let opts = DecomposeOptions::new(1);
    let mut total = 0.0;
    let mut bad = 0;
    for trial in 0..50 {
        let f_raw = 140.0f64.powf(rng.random::<f64>()).max(1.0);
        let f = (f_raw / df).round() * df;
        let duty = rng.random_range(10..=90) as f64 * 0.01;
        let k = 1e-3 * 25.0f64.powf(rng.random::<f64>());
        let phase = rng.random::<f64>() * TAU;
        let p = PulseWaveParams::new(f, phase, duty, k).unwrap();
        let u = gen_pulse_wave(&p, fs, duration).unwrap();
        let t = Instant::now();
        let r = decompose(&u, &opts).unwrap();
        total += t.elapsed().as_secs_f64();
        let c = &r.components[0];
        let dk = u.peak_to_peak() / 200.0;
        let ptol = TAU * f * 3.0 / fs;
        let perr = wrapped(c.phase_rad(), phase);
        let ok = (c.f_hz() - f).abs() <= tol_f
            && c.duty() == duty
            && (c.amplitude() - k).abs() <= dk
            && perr <= ptol;
        if !ok {
            bad += 1;
            println!(
                "trial {trial}: f {f:.4} duty {duty} k {k:.5} phase {phase:.4} -> \
                 f_est {:.4} duty {} k {:.5} perr {perr:.4}/{ptol:.4}",
                c.f_hz(),
                c.duty(),
                c.amplitude()
            );
        }
    }
    println!("{bad} bad trials, total decompose time {total:.1} s");
}
