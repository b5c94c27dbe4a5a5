//! Two polarization signals 45° apart, read out three ways.
//!
//! ```text
//! cargo run --example binary_receivers
//! ```

use std::f64::consts::FRAC_PI_4;

use quantum_capacity::dmc::capacity;
use quantum_capacity::receivers::{helstrom_binary, measure_channel, polarization_filter, povm_binary_erasure, SignalSet};
use quantum_capacity::LogBase;

fn main() -> quantum_capacity::Result<()> {
    let signals = SignalSet::from_angles(&[0.0, FRAC_PI_4])?;
    let (a, b) = (&signals.states()[0], &signals.states()[1]);

    let filter = measure_channel(&signals, &polarization_filter(0.0))?;
    let helstrom = helstrom_binary(a, b)?.channel;
    let erasure = povm_binary_erasure(a, b)?.channel;

    for (name, ch) in [("horizontal filter", filter), ("helstrom", helstrom), ("unambiguous", erasure)] {
        let c = capacity(&ch, LogBase::Bits)?;
        println!("{name}:");
        for (label, row) in ch.input_labels().iter().zip(ch.transition()) {
            let cells: Vec<String> = row.iter().map(|p| format!("{p:.4}")).collect();
            println!("  {label} -> [{}]", cells.join(", "));
        }
        println!("  capacity {:.4} bit at input {:?}\n", c.capacity, c.optimal_input.probs());
    }
    Ok(())
}
