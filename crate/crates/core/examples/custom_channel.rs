//! Capacity of a channel loaded from JSON, plus capacity per unit cost.
//!
//! ```text
//! cargo run --example custom_channel -- data/trine_orthogonal_channel.json
//! ```

use quantum_capacity::dmc::{capacity, Dmc, DmcFile};
use quantum_capacity::photon::capacity_per_unit_cost;
use quantum_capacity::LogBase;

const FALLBACK: &str = r#"{
  "inputs": ["off", "weak", "strong"],
  "outputs": ["none", "click"],
  "P": [[0.95, 0.05], [0.6, 0.4], [0.1, 0.9]]
}"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(path)?,
        None => FALLBACK.to_string(),
    };
    let ch = Dmc::try_from(serde_json::from_str::<DmcFile>(&text)?)?;
    let c = capacity(&ch, LogBase::Bits)?;
    println!("capacity {:.4} bit after {} iterations (gap {:.1e})", c.capacity, c.iterations, c.gap);
    for (label, q) in ch.input_labels().iter().zip(c.optimal_input.probs()) {
        println!("  {label}: {q:.4}");
    }

    // first input costs nothing, the rest cost their index
    let costs: Vec<f64> = (0..ch.num_inputs()).map(|k| k as f64).collect();
    let u = capacity_per_unit_cost(&ch, &costs, LogBase::Bits)?;
    if u.is_unbounded() {
        println!("capacity per unit cost is unbounded");
    } else {
        println!("capacity per unit cost {:.4} bit, best input {}", u.value, ch.input_labels()[u.input]);
    }
    Ok(())
}
