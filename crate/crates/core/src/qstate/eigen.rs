//! Hermitian eigen-decomposition for the small matrices used here.
//!
//! Dimension two uses the closed-form roots of the characteristic
//! polynomial. Larger matrices use cyclic complex Jacobi rotations: each
//! rotation first removes the phase of the pivot `a_pq` and then applies the
//! real plane rotation that annihilates it.

use serde::{Deserialize, Serialize};

use super::ket::check_dim;
use super::{CMatrix, Complex, Ket};
use crate::error::{Error, Result};

/// Off-diagonal Frobenius norm (relative to `max(1, ‖M‖)`) at which Jacobi stops.
pub const JACOBI_TOLERANCE: f64 = 1e-12;
const MAX_SWEEPS: usize = 64;

/// Eigenvalues in descending order with matching orthonormal eigenvectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<Ket>,
}

impl Spectrum {
    /// `Σ f(λᵢ) |vᵢ⟩⟨vᵢ|`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let n = self.eigenvectors.first().map_or(0, Ket::dim);
        let mut m = CMatrix::zeros(n);
        for (l, v) in self.eigenvalues.iter().zip(&self.eigenvectors) {
            m = &m + &CMatrix::projector(v).scale(f(*l));
        }
        m
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.reconstruct_with(|l| l)
    }
}

/// Full spectral decomposition of a Hermitian matrix of dimension 2 to 4.
pub fn eig_hermitian(m: &CMatrix) -> Result<Spectrum> {
    check_dim(m.dim())?;
    let scale = m.frobenius_norm().max(1.0);
    let dev = m.hermitian_deviation();
    if !(dev <= 1e-12 * scale) {
        return Err(Error::NotHermitian(dev));
    }
    let (values, vectors) = if m.dim() == 2 {
        closed_form_2x2(m)
    } else {
        let (vals, v, sweeps) = jacobi(m);
        if sweeps.is_none() {
            return Err(Error::NonConvergence {
                iterations: MAX_SWEEPS,
                lower: f64::NAN,
                upper: f64::NAN,
            });
        }
        let cols = (0..v.dim())
            .map(|j| (0..v.dim()).map(|i| v.get(i, j)).collect::<Vec<_>>())
            .collect();
        (vals, cols)
    };
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    let eigenvalues = order.iter().map(|&i| values[i]).collect();
    let eigenvectors = order
        .iter()
        .map(|&i| Ket::normalized(vectors[i].clone()))
        .collect::<Result<Vec<_>>>()?;
    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
    })
}

/// Eigenvalues only, descending, without validation or error reporting.
pub(crate) fn eigenvalues(m: &CMatrix) -> Vec<f64> {
    let mut vals = if m.dim() == 2 {
        closed_form_2x2(m).0
    } else {
        jacobi(m).0
    };
    vals.sort_by(|a, b| b.total_cmp(a));
    vals
}

fn closed_form_2x2(m: &CMatrix) -> (Vec<f64>, Vec<Vec<Complex>>) {
    let a = m.get(0, 0).re;
    let d = m.get(1, 1).re;
    let b = m.get(0, 1);
    let mean = 0.5 * (a + d);
    let half = 0.5 * (a - d);
    let r = half.hypot(b.abs());
    let hi = mean + r;
    let lo = mean - r;
    if b.abs() <= 1e-300 {
        let e0 = vec![Complex::ONE, Complex::ZERO];
        let e1 = vec![Complex::ZERO, Complex::ONE];
        return if a >= d {
            (vec![a, d], vec![e0, e1])
        } else {
            (vec![d, a], vec![e1, e0])
        };
    }
    // two algebraically equivalent eigenvector forms; keep the better scaled one
    let v1 = [b, Complex::real(hi - a)];
    let v2 = [Complex::real(hi - d), b.conj()];
    let n1 = v1[0].norm_sqr() + v1[1].norm_sqr();
    let n2 = v2[0].norm_sqr() + v2[1].norm_sqr();
    let (v, n) = if n1 >= n2 { (v1, n1) } else { (v2, n2) };
    let k = 1.0 / n.sqrt();
    let top = vec![v[0].scale(k), v[1].scale(k)];
    let bottom = vec![-top[1].conj(), top[0].conj()];
    (vec![hi, lo], vec![top, bottom])
}

fn off_diagonal_norm(a: &CMatrix) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a.get(i, j).norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Cyclic Jacobi. Returns diagonal, accumulated rotations (columns are
/// eigenvectors) and the number of sweeps used, `None` if not converged.
fn jacobi(m: &CMatrix) -> (Vec<f64>, CMatrix, Option<usize>) {
    let n = m.dim();
    let mut a = m.clone();
    let mut v = CMatrix::identity(n);
    let target = JACOBI_TOLERANCE * m.frobenius_norm().max(1.0);
    let mut converged = None;
    for sweep in 0..=MAX_SWEEPS {
        if off_diagonal_norm(&a) < target {
            converged = Some(sweep);
            break;
        }
        if sweep == MAX_SWEEPS {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                let mag = apq.abs();
                if mag == 0.0 {
                    continue;
                }
                let phase = apq.scale(1.0 / mag).conj();
                let theta = (a.get(q, q).re - a.get(p, p).re) / (2.0 * mag);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let mut j = CMatrix::identity(n);
                j.set(p, p, Complex::real(c));
                j.set(p, q, Complex::real(s));
                j.set(q, p, phase.scale(-s));
                j.set(q, q, phase.scale(c));
                a = &(&j.adjoint() * &a) * &j;
                // the pivot is zero in exact arithmetic
                a.set(p, q, Complex::ZERO);
                a.set(q, p, Complex::ZERO);
                v = &v * &j;
            }
        }
    }
    let diag = (0..n).map(|i| a.get(i, i).re).collect();
    (diag, v, converged)
}
