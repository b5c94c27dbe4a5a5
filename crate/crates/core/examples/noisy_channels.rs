//! Loss modeled as erasure, and random polarization rotation as a mixed state.

use std::f64::consts::PI;

use quantum_capacity::dmc::{attenuation_db, capacity, compose_erasure, erasure_from_db};
use quantum_capacity::holevo::{noisy_orthogonal_capacity, polarization_noise_d, NoiseDistribution};
use quantum_capacity::receivers::{measure_channel, polarization_filter, SignalSet};
use quantum_capacity::LogBase;

fn main() -> quantum_capacity::Result<()> {
    let ortho = SignalSet::from_angles(&[0.0, PI / 2.0])?;
    let clean = measure_channel(&ortho, &polarization_filter(0.0))?;
    println!("{:>6}  {:>6}  {:>8}", "dB", "eps", "C bit");
    for db in [0.0, 0.5, 1.0, 3.0, 10.0] {
        let eps = erasure_from_db(db)?;
        let c = capacity(&compose_erasure(&clean, eps)?, LogBase::Bits)?.capacity;
        println!("{db:>6.1}  {eps:>6.3}  {c:>8.4}");
    }
    println!("eps = 0.1 is {:.3} dB\n", attenuation_db(0.1)?);

    for noise in [
        NoiseDistribution::Uniform { width: 0.6 },
        NoiseDistribution::Gaussian { sigma: 0.2 },
        NoiseDistribution::Gaussian { sigma: 0.5 },
    ] {
        let d = polarization_noise_d(&noise)?;
        let c = noisy_orthogonal_capacity(d, LogBase::Bits)?;
        println!("{noise:?}: d = {d:.4}, C_N = {:.4}, C_S = {:.4}", c.von_neumann, c.shannon);
    }
    Ok(())
}
