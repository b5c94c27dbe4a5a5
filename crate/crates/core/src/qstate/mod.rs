//! Small-dimension complex linear algebra for polarization states.
//!
//! Covers pure states (kets), density matrices, overlaps, tensor products
//! of photon pairs, Hermitian eigen-decomposition and von Neumann entropy.
//! Dimensions are limited to 2, 3 and 4.
//!
//! Scalar products follow the bra-ket convention `⟨φ|ψ⟩ = Σ φᵢ* ψᵢ`, i.e. the
//! left argument is conjugated. Under this convention the circular state
//! `(|0⟩ + j|1⟩)/√2` has `⟨ψ|1⟩ = -j/√2`; capacities only ever use `|⟨φ|ψ⟩|²`
//! so the sign of the imaginary part does not matter downstream.

mod complex;
mod eigen;
mod ket;
mod matrix;

use serde::{Deserialize, Serialize};

pub use complex::Complex;
pub use eigen::{eig_hermitian, Spectrum, JACOBI_TOLERANCE};
pub use ket::{Ket, NORM_TOLERANCE};
pub use matrix::{CMatrix, DensityMatrix, DENSITY_TOLERANCE, EIGEN_CLAMP};

use crate::base::{check_distribution, neg_xlnx, LogBase};
use crate::error::{Error, Result};

/// Linear polarization at angle `theta`: `cos θ|0⟩ + sin θ|1⟩`.
///
/// # Panics
///
/// If `theta` is not finite.
pub fn ket_from_angle(theta: f64) -> Ket {
    assert!(theta.is_finite(), "polarization angle must be finite");
    let (s, c) = theta.sin_cos();
    Ket::normalized(vec![Complex::real(c), Complex::real(s)]).expect("cos and sin never both vanish")
}

/// `⟨φ|ψ⟩`, conjugating `phi`.
pub fn inner_product(phi: &Ket, psi: &Ket) -> Result<Complex> {
    if phi.dim() != psi.dim() {
        return Err(Error::DimensionMismatch {
            expected: phi.dim(),
            found: psi.dim(),
        });
    }
    Ok(phi
        .amplitudes()
        .iter()
        .zip(psi.amplitudes())
        .map(|(a, b)| a.conj() * *b)
        .sum())
}

/// `|⟨φ|ψ⟩|²`.
pub fn overlap_sqr(phi: &Ket, psi: &Ket) -> Result<f64> {
    inner_product(phi, psi).map(Complex::norm_sqr)
}

/// Pure-state density matrix `|ψ⟩⟨ψ|`.
pub fn density_from_ket(psi: &Ket) -> DensityMatrix {
    DensityMatrix::new_unchecked(CMatrix::projector(psi))
}

/// Kronecker product `|a⟩ ⊗ |b⟩`, ordered `(a₀b₀, a₀b₁, a₁b₀, a₁b₁)`.
///
/// Only products of dimension at most 4 (two qubits) are representable.
pub fn tensor(a: &Ket, b: &Ket) -> Result<Ket> {
    let dim = a.dim() * b.dim();
    if dim > 4 {
        return Err(Error::UnsupportedDimension(dim));
    }
    let amps = a
        .amplitudes()
        .iter()
        .flat_map(|x| b.amplitudes().iter().map(move |y| *x * *y))
        .collect();
    Ket::normalized(amps)
}

/// A transmitter alphabet: prior probabilities paired with states.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "EnsembleRepr", into = "EnsembleRepr")]
pub struct SignalEnsemble {
    priors: Vec<f64>,
    states: Vec<DensityMatrix>,
}

#[derive(Serialize, Deserialize)]
struct EnsembleRepr {
    priors: Vec<f64>,
    states: Vec<DensityMatrix>,
}

impl SignalEnsemble {
    pub fn new(priors: Vec<f64>, states: Vec<DensityMatrix>) -> Result<Self> {
        if priors.len() != states.len() {
            return Err(Error::DimensionMismatch {
                expected: states.len(),
                found: priors.len(),
            });
        }
        check_distribution(&priors)?;
        let dim = states[0].dim();
        if let Some(s) = states.iter().find(|s| s.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: s.dim(),
            });
        }
        Ok(SignalEnsemble { priors, states })
    }

    pub fn uniform(states: Vec<DensityMatrix>) -> Result<Self> {
        let n = states.len().max(1);
        SignalEnsemble::new(vec![1.0 / n as f64; states.len()], states)
    }

    /// Ensemble of pure states.
    pub fn pure(priors: Vec<f64>, kets: &[Ket]) -> Result<Self> {
        SignalEnsemble::new(priors, kets.iter().map(density_from_ket).collect())
    }

    pub fn priors(&self) -> &[f64] {
        &self.priors
    }

    pub fn states(&self) -> &[DensityMatrix] {
        &self.states
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &DensityMatrix)> {
        self.priors.iter().copied().zip(&self.states)
    }
}

impl TryFrom<EnsembleRepr> for SignalEnsemble {
    type Error = Error;
    fn try_from(r: EnsembleRepr) -> Result<Self> {
        SignalEnsemble::new(r.priors, r.states)
    }
}

impl From<SignalEnsemble> for EnsembleRepr {
    fn from(e: SignalEnsemble) -> Self {
        EnsembleRepr {
            priors: e.priors,
            states: e.states,
        }
    }
}

/// Average state `ρ = Σ qₖ ρₖ`.
pub fn mix(ensemble: &SignalEnsemble) -> DensityMatrix {
    let n = ensemble.dim();
    let m = ensemble
        .iter()
        .fold(CMatrix::zeros(n), |acc, (q, rho)| {
            &acc + &rho.matrix().scale(q)
        });
    DensityMatrix::new_unchecked(m)
}

/// Von Neumann entropy `S(ρ) = -tr ρ log ρ`, with `0 log 0 = 0`.
pub fn von_neumann_entropy(rho: &DensityMatrix, base: LogBase) -> f64 {
    let nats: f64 = rho.eigenvalues().into_iter().map(neg_xlnx).sum();
    base.from_nats(nats.max(0.0))
}
