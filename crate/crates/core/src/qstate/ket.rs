use serde::{Deserialize, Serialize};

use super::{CMatrix, Complex};
use crate::error::{Error, Result};

/// Largest allowed deviation of a ket's squared norm from one.
pub const NORM_TOLERANCE: f64 = 1e-12;

/// A normalized pure state of dimension 2, 3 or 4.
///
/// Serialized as an array of `[re, im]` amplitude pairs. Deserialization
/// validates the norm, so JSON inputs need full double precision.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Complex>", into = "Vec<Complex>")]
pub struct Ket {
    amps: Vec<Complex>,
}

pub(crate) fn check_dim(dim: usize) -> Result<()> {
    if (2..=4).contains(&dim) {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension(dim))
    }
}

impl Ket {
    /// Wraps amplitudes that are already normalized.
    pub fn new(amps: Vec<Complex>) -> Result<Self> {
        check_dim(amps.len())?;
        let n = norm_sqr(&amps);
        if !n.is_finite() || (n - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized(n));
        }
        Ok(Ket { amps })
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(amps: Vec<Complex>) -> Result<Self> {
        check_dim(amps.len())?;
        let n = norm_sqr(&amps);
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::NotNormalized(n));
        }
        let k = 1.0 / n.sqrt();
        Ok(Ket {
            amps: amps.into_iter().map(|a| a.scale(k)).collect(),
        })
    }

    pub fn from_real(amps: &[f64]) -> Result<Self> {
        Ket::new(amps.iter().copied().map(Complex::real).collect())
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        check_dim(dim)?;
        if index >= dim {
            return Err(Error::IndexOutOfRange { index, len: dim });
        }
        let mut amps = vec![Complex::ZERO; dim];
        amps[index] = Complex::ONE;
        Ok(Ket { amps })
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.amps)
    }

    /// True when every amplitude is real within `tol`.
    pub fn is_real(&self, tol: f64) -> bool {
        self.amps.iter().all(|a| a.im.abs() <= tol)
    }

    /// The qubit state orthogonal to this one, `(-b*, a*)` for `(a, b)`.
    pub fn orthogonal(&self) -> Result<Ket> {
        if self.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: self.dim(),
            });
        }
        let (a, b) = (self.amps[0], self.amps[1]);
        Ok(Ket {
            amps: vec![-b.conj(), a.conj()],
        })
    }

    /// Applies a unitary, `U|ψ⟩`.
    pub fn apply(&self, u: &CMatrix) -> Result<Ket> {
        Ket::new(u.apply(&self.amps)?)
    }

    /// Multiplies every amplitude by `e^{i phi}`.
    pub fn with_global_phase(&self, phi: f64) -> Ket {
        let p = Complex::from_phase(phi);
        Ket {
            amps: self.amps.iter().map(|&a| a * p).collect(),
        }
    }
}

fn norm_sqr(amps: &[Complex]) -> f64 {
    amps.iter().map(|a| a.norm_sqr()).sum()
}

impl TryFrom<Vec<Complex>> for Ket {
    type Error = Error;
    fn try_from(amps: Vec<Complex>) -> Result<Self> {
        Ket::new(amps)
    }
}

impl From<Ket> for Vec<Complex> {
    fn from(k: Ket) -> Self {
        k.amps
    }
}
