//! Three polarization states 120° apart on the Poincaré circle.

use quantum_capacity::dmc::capacity;
use quantum_capacity::holevo::holevo_capacity;
use quantum_capacity::qstate::density_from_ket;
use quantum_capacity::receivers::{helstrom_binary, measure_channel, trine_povm_orthogonal, trine_povm_parallel, trine_states};
use quantum_capacity::LogBase;

fn main() -> quantum_capacity::Result<()> {
    let trine = trine_states();
    let rho: Vec<_> = trine.states().iter().map(density_from_ket).collect();
    let hol = holevo_capacity(&rho, LogBase::Bits)?;
    println!("holevo capacity   {:.4} bit, priors {:?}", hol.capacity, hol.optimal_priors.probs());

    for (name, povm) in [("parallel", trine_povm_parallel()), ("orthogonal", trine_povm_orthogonal())] {
        let c = capacity(&measure_channel(&trine, &povm)?, LogBase::Bits)?;
        println!("{name:<17} {:.4} bit", c.capacity);
    }

    // drop one symbol and use the optimal binary detector on the rest
    let sub = helstrom_binary(&trine.states()[0], &trine.states()[1])?;
    println!(
        "binary subset     {:.4} bit (error probability {:.4})",
        capacity(&sub.channel, LogBase::Bits)?.capacity,
        sub.channel.get(0, 1)
    );
    Ok(())
}
