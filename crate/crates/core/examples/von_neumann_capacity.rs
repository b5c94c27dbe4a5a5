//! Holevo quantity of a pure pair as the angle between the states opens up,
//! against the best measured (Helstrom) channel.

use quantum_capacity::dmc::capacity;
use quantum_capacity::holevo::holevo_capacity;
use quantum_capacity::qstate::density_from_ket;
use quantum_capacity::receivers::{helstrom_binary, SignalSet};
use quantum_capacity::LogBase;

fn main() -> quantum_capacity::Result<()> {
    println!("{:>6}  {:>8}  {:>8}", "angle", "C_N", "C_S");
    for deg in (5..=90).step_by(5) {
        let s = SignalSet::from_angles(&[0.0, f64::from(deg).to_radians()])?;
        let rho: Vec<_> = s.states().iter().map(density_from_ket).collect();
        let cn = holevo_capacity(&rho, LogBase::Bits)?.capacity;
        let cs = capacity(&helstrom_binary(&s.states()[0], &s.states()[1])?.channel, LogBase::Bits)?.capacity;
        println!("{deg:>6}  {cn:>8.4}  {cs:>8.4}");
    }
    Ok(())
}
