//! Classical and quantum capacities of photon communication channels.
//!
//! The crate models classical information carried by polarized photons and
//! by photon-counting (Poisson) light:
//!
//! * [`qstate`]: kets, density matrices, Hermitian eigen-decomposition and
//!   von Neumann entropy for 2 to 4 dimensional state spaces.
//! * [`dmc`]: discrete memoryless channels, mutual information and
//!   Blahut-Arimoto capacity with certified bounds.
//! * [`receivers`]: measurements (polarization filters, the minimum-error
//!   binary receiver, unambiguous-discrimination POVMs, trine POVMs and the
//!   square-root measurement) compiled into channels, plus Monte Carlo
//!   sampling of outcomes.
//! * [`holevo`]: Holevo quantity, prior optimization and the attenuation
//!   and polarization-noise models.
//! * [`photon`]: PPM and on-off keying over Poisson channels, capacity per
//!   unit cost and efficiency curves.
//! * [`report`] and [`cli`]: the reproduction table and the `qcap` command.
//!
//! Shannon capacities of measured channels never exceed the Holevo capacity
//! of the transmitted ensemble; the test suite checks that inequality for
//! every receiver in the crate.

pub mod base;
pub mod cli;
pub mod dmc;
mod error;
pub mod holevo;
pub mod photon;
pub mod qstate;
pub mod receivers;
pub mod report;

pub use base::LogBase;
pub use error::{Error, Result};
