//! Photon efficiency curves written as CSV.
//!
//! ```text
//! cargo run --example efficiency_curves -- /tmp/curves
//! ```

use std::path::PathBuf;

use quantum_capacity::photon::{emit_curve, grid, CurveKind};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::args().nth(1).map(PathBuf::from);

    let cost = emit_curve(CurveKind::CostPerBit, &grid(1.1, 1e4, 40, true)?)?;
    let band = emit_curve(CurveKind::BandLimited, &grid(0.01, 10.0, 40, true)?)?;

    for (name, curve) in [("cost_per_bit.csv", cost), ("band_limited.csv", band)] {
        match &dir {
            Some(d) => {
                std::fs::create_dir_all(d)?;
                std::fs::write(d.join(name), curve.to_csv())?;
                println!("wrote {} ({} points)", d.join(name).display(), curve.len());
            }
            None => {
                println!("# {name}");
                for line in curve.to_csv().lines().step_by(5) {
                    println!("{line}");
                }
            }
        }
    }
    Ok(())
}
