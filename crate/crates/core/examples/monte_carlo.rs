//! Simulated detector outcomes against the analytic channel.

use std::f64::consts::FRAC_PI_4;

use quantum_capacity::receivers::{povm_binary_erasure, sample_outcomes, SignalSet};

fn main() -> quantum_capacity::Result<()> {
    let s = SignalSet::from_angles(&[0.0, FRAC_PI_4])?;
    let ch = povm_binary_erasure(&s.states()[0], &s.states()[1])?.channel;
    let n = 100_000;
    for k in 0..ch.num_inputs() {
        let h = sample_outcomes(&ch, k, n, 2024 + k as u64)?;
        println!("input {} ({} draws, {} seed {}):", h.input, h.samples, h.generator, h.seed);
        for ((label, f), p) in h.labels.iter().zip(h.frequencies()).zip(ch.row(k)) {
            let sigma = (p * (1.0 - p) / n as f64).sqrt();
            println!("  {label}: {f:.4}  expected {p:.4} ± {:.4}", 3.0 * sigma);
        }
    }
    Ok(())
}
