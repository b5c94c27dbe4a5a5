use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use super::eigen::{self, Spectrum};
use super::ket::check_dim;
use super::{Complex, Ket};
use crate::error::{Error, Result};

/// Tolerance for Hermiticity and unit trace of a density matrix.
pub const DENSITY_TOLERANCE: f64 = 1e-12;
/// Eigenvalues this far outside `[0, 1]` are treated as rounding and clamped.
pub const EIGEN_CLAMP: f64 = 1e-10;

/// Dense square complex matrix, row-major.
///
/// Serialized as a list of rows of `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<Complex>>", into = "Vec<Vec<Complex>>")]
pub struct CMatrix {
    n: usize,
    data: Vec<Complex>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        CMatrix {
            n,
            data: vec![Complex::ZERO; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMatrix::zeros(n);
        for i in 0..n {
            m.set(i, i, Complex::ONE);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Complex>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::UnsupportedDimension(0));
        }
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(CMatrix { n, data })
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        CMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().copied().map(Complex::real).collect())
                .collect(),
        )
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = CMatrix::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, Complex::real(d));
        }
        m
    }

    /// `|a⟩⟨b|`.
    pub fn outer(a: &Ket, b: &Ket) -> Result<Self> {
        if a.dim() != b.dim() {
            return Err(Error::DimensionMismatch {
                expected: a.dim(),
                found: b.dim(),
            });
        }
        Ok(outer_amps(a.amplitudes(), b.amplitudes()))
    }

    /// Rank-one projector `|k⟩⟨k|`.
    pub fn projector(k: &Ket) -> Self {
        outer_amps(k.amplitudes(), k.amplitudes())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Complex {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex) {
        self.data[i * self.n + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<Complex>> {
        self.data.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn adjoint(&self) -> Self {
        let mut m = CMatrix::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                m.set(j, i, self.get(i, j).conj());
            }
        }
        m
    }

    pub fn scale(&self, k: f64) -> Self {
        CMatrix {
            n: self.n,
            data: self.data.iter().map(|c| c.scale(k)).collect(),
        }
    }

    pub fn trace(&self) -> Complex {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        debug_assert_eq!(self.n, other.n);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (*a - *b).abs())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise deviation from `M = M†`.
    pub fn hermitian_deviation(&self) -> f64 {
        let mut dev = 0.0f64;
        for i in 0..self.n {
            for j in i..self.n {
                dev = dev.max((self.get(i, j) - self.get(j, i).conj()).abs());
            }
        }
        dev
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Complex]) -> Result<Vec<Complex>> {
        if v.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: v.len(),
            });
        }
        Ok((0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j) * v[j]).sum())
            .collect())
    }

    /// `⟨ψ|M|ψ⟩`.
    pub fn expectation(&self, psi: &Ket) -> Result<Complex> {
        let mv = self.apply(psi.amplitudes())?;
        Ok(psi
            .amplitudes()
            .iter()
            .zip(&mv)
            .map(|(a, b)| a.conj() * *b)
            .sum())
    }

    /// `U M U†`.
    pub fn conjugate_by(&self, u: &CMatrix) -> CMatrix {
        &(u * self) * &u.adjoint()
    }

    /// Spectral decomposition of a Hermitian matrix.
    pub fn eig_hermitian(&self) -> Result<Spectrum> {
        eigen::eig_hermitian(self)
    }
}

fn outer_amps(a: &[Complex], b: &[Complex]) -> CMatrix {
    let n = a.len();
    let mut m = CMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            m.set(i, j, a[i] * b[j].conj());
        }
    }
    m
}

impl TryFrom<Vec<Vec<Complex>>> for CMatrix {
    type Error = Error;
    fn try_from(rows: Vec<Vec<Complex>>) -> Result<Self> {
        CMatrix::from_rows(rows)
    }
}

impl From<CMatrix> for Vec<Vec<Complex>> {
    fn from(m: CMatrix) -> Self {
        m.rows()
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.n, rhs.n, "matrix dimension mismatch");
        CMatrix {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| *a + *b).collect(),
        }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.n, rhs.n, "matrix dimension mismatch");
        CMatrix {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| *a - *b).collect(),
        }
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.n, rhs.n, "matrix dimension mismatch");
        let n = self.n;
        let mut m = CMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == Complex::ZERO {
                    continue;
                }
                for j in 0..n {
                    m.data[i * n + j] += a * rhs.get(k, j);
                }
            }
        }
        m
    }
}

/// A valid quantum state: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CMatrix", into = "CMatrix")]
pub struct DensityMatrix(CMatrix);

impl DensityMatrix {
    pub fn new(m: CMatrix) -> Result<Self> {
        check_dim(m.dim())?;
        let dev = m.hermitian_deviation();
        if !(dev <= DENSITY_TOLERANCE) {
            return Err(Error::NotHermitian(dev));
        }
        let tr = m.trace().re;
        if !((tr - 1.0).abs() <= DENSITY_TOLERANCE) {
            return Err(Error::InvalidTrace(tr));
        }
        let sp = eigen::eig_hermitian(&m)?;
        let min = sp.eigenvalues.last().copied().unwrap_or(0.0);
        if min < -EIGEN_CLAMP {
            return Err(Error::NegativeEigenvalue(min));
        }
        Ok(DensityMatrix(m))
    }

    /// Skips validation; callers guarantee the invariants (e.g. convex mixtures).
    pub(crate) fn new_unchecked(m: CMatrix) -> Self {
        DensityMatrix(m)
    }

    pub fn from_diagonal(diag: &[f64]) -> Result<Self> {
        DensityMatrix::new(CMatrix::from_diagonal(diag))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    /// Eigen-decomposition with eigenvalues clamped into `[0, 1]`.
    ///
    /// Eigenvalues further than `EIGEN_CLAMP` outside the interval are errors.
    pub fn spectrum(&self) -> Result<Spectrum> {
        let mut sp = eigen::eig_hermitian(&self.0)?;
        for l in sp.eigenvalues.iter_mut() {
            *l = clamp_unit(*l)?;
        }
        Ok(sp)
    }

    /// Clamped eigenvalues, descending. Never fails for a validated state.
    pub fn eigenvalues(&self) -> Vec<f64> {
        eigen::eigenvalues(&self.0)
            .into_iter()
            .map(|l| l.clamp(0.0, 1.0))
            .collect()
    }

    pub fn purity(&self) -> f64 {
        (&self.0 * &self.0).trace().re
    }

    /// `U ρ U†`; the result is again a valid state when `U` is unitary.
    pub fn rotate(&self, u: &CMatrix) -> Result<DensityMatrix> {
        let mut m = self.0.conjugate_by(u);
        // restore exact Hermiticity lost to rounding
        let n = m.dim();
        for i in 0..n {
            let d = m.get(i, i);
            m.set(i, i, Complex::real(d.re));
            for j in (i + 1)..n {
                let avg = (m.get(i, j) + m.get(j, i).conj()).scale(0.5);
                m.set(i, j, avg);
                m.set(j, i, avg.conj());
            }
        }
        DensityMatrix::new(m)
    }
}

fn clamp_unit(l: f64) -> Result<f64> {
    if !(-EIGEN_CLAMP..=1.0 + EIGEN_CLAMP).contains(&l) {
        Err(Error::NegativeEigenvalue(l))
    } else {
        Ok(l.clamp(0.0, 1.0))
    }
}

impl TryFrom<CMatrix> for DensityMatrix {
    type Error = Error;
    fn try_from(m: CMatrix) -> Result<Self> {
        DensityMatrix::new(m)
    }
}

impl From<DensityMatrix> for CMatrix {
    fn from(d: DensityMatrix) -> Self {
        d.0
    }
}

impl AsRef<CMatrix> for DensityMatrix {
    fn as_ref(&self) -> &CMatrix {
        &self.0
    }
}
