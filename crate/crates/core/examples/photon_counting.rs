//! On-off keying over a photon-counting channel with dark counts,
//! and pulse position modulation.

use quantum_capacity::photon::{
    capacity_per_photon, cost_per_bit, ook_capacity, ook_optimal_q, ppm_capacity, IntensityPair, PpmConfig,
};
use quantum_capacity::LogBase;

fn main() -> quantum_capacity::Result<()> {
    println!("{:>6} {:>8} {:>10} {:>8} {:>10} {:>10}", "g0", "g1", "C nat/s", "q", "nat/photon", "photon/bit");
    for (g0, g1) in [(0.0, 1.0), (0.0, 10.0), (0.1, 10.0), (1.0, 10.0), (1.0, 100.0), (5.0, 6.0)] {
        let ip = IntensityPair::new(g0, g1)?;
        println!(
            "{g0:>6} {g1:>8} {:>10.4} {:>8.4} {:>10.4} {:>10.4}",
            ook_capacity(&ip),
            ook_optimal_q(&ip),
            capacity_per_photon(&ip),
            cost_per_bit(&ip)
        );
    }

    println!("\nPPM, mean photons per pulse = 2");
    for slots in [2, 4, 16, 256] {
        let cfg = PpmConfig::new(slots, 2.0)?;
        println!(
            "  {slots:>4} slots: {:.4} bit per pulse (erasure {:.4})",
            ppm_capacity(&cfg, LogBase::Bits),
            cfg.erasure_probability()
        );
    }
    Ok(())
}
