//! Trine states sent twice (as photon pairs) and decoded jointly with the
//! square-root measurement.

use quantum_capacity::dmc::{capacity, InputDistribution};
use quantum_capacity::holevo::holevo_capacity;
use quantum_capacity::qstate::density_from_ket;
use quantum_capacity::receivers::{measure_channel, pair_signals, square_root_measurement, trine_states};
use quantum_capacity::LogBase;

fn main() -> quantum_capacity::Result<()> {
    let pairs = pair_signals(&trine_states())?;
    let srm = square_root_measurement(&pairs, &InputDistribution::uniform(pairs.len()))?;
    let ch = measure_channel(&pairs, &srm)?;

    println!("outputs: {:?}", ch.output_labels());
    for (label, row) in ch.input_labels().iter().zip(ch.transition()) {
        let cells: Vec<String> = row.iter().map(|p| format!("{p:.4}")).collect();
        println!("{label:>5}: {}", cells.join("  "));
    }

    let cs = capacity(&ch, LogBase::Bits)?.capacity;
    let rho: Vec<_> = pairs.states().iter().map(density_from_ket).collect();
    let cn = holevo_capacity(&rho, LogBase::Bits)?.capacity;
    println!("C_S = {cs:.4} bit ({:.4} per photon)", cs / 2.0);
    println!("C_N = {cn:.4} bit ({:.4} per photon)", cn / 2.0);
    Ok(())
}
