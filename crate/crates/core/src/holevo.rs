//! Holevo (von Neumann) capacity of signal ensembles and two noise models.
//!
//! For an ensemble `{qₖ, ρₖ}` the Holevo quantity is
//! `χ = S(ρ̄) - Σ qₖ S(ρₖ)` with `ρ̄ = Σ qₖ ρₖ`. It bounds the Shannon
//! capacity of every channel obtained by measuring the ensemble, and its
//! maximum over the priors is the von Neumann capacity `C_N`.
//!
//! The maximization is certified like Blahut-Arimoto: for any priors `q`,
//! `χ(q) ≤ C_N ≤ maxₖ D(ρₖ ‖ ρ̄_q)` where `D` is the quantum relative entropy.

use serde::{Deserialize, Serialize};

use crate::base::LogBase;
use crate::dmc::{blahut_arimoto, bsc, InputDistribution};
use crate::error::{Error, Result};
use crate::qstate::{eig_hermitian, mix, von_neumann_entropy, CMatrix, DensityMatrix, SignalEnsemble, Spectrum};

/// Default certified gap for [`maximize_holevo`], in the reporting base.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;
/// Maximum number of pairwise refinement cycles.
pub const MAX_CYCLES: usize = 2_000;
/// Priors below this are reported as exactly zero.
pub const PRIOR_FLOOR: f64 = 1e-12;
/// Agreement required between successive Simpson estimates.
pub const QUADRATURE_TOLERANCE: f64 = 1e-8;

/// Outcome of a prior optimization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HolevoResult {
    pub capacity: f64,
    pub optimal_priors: InputDistribution,
    pub chi_at_uniform: f64,
    /// Certified distance between `capacity` and the true maximum.
    pub gap: f64,
    pub cycles: usize,
}

/// `χ = S(ρ̄) - Σ qₖ S(ρₖ)` at the ensemble's priors.
pub fn holevo_chi(ensemble: &SignalEnsemble, base: LogBase) -> f64 {
    let avg = von_neumann_entropy(&mix(ensemble), LogBase::Nats);
    let own: f64 = ensemble
        .iter()
        .map(|(q, rho)| q * von_neumann_entropy(rho, LogBase::Nats))
        .sum();
    base.from_nats((avg - own).max(0.0))
}

struct Objective<'a> {
    states: &'a [DensityMatrix],
    entropies: Vec<f64>,
}

impl<'a> Objective<'a> {
    fn new(states: &'a [DensityMatrix]) -> Self {
        let entropies = states
            .iter()
            .map(|s| von_neumann_entropy(s, LogBase::Nats))
            .collect();
        Objective { states, entropies }
    }

    fn average(&self, q: &[f64]) -> CMatrix {
        let n = self.states[0].dim();
        self.states
            .iter()
            .zip(q)
            .fold(CMatrix::zeros(n), |acc, (s, w)| &acc + &s.matrix().scale(*w))
    }

    fn chi(&self, q: &[f64]) -> f64 {
        let avg = DensityMatrix::new_unchecked(self.average(q));
        let own: f64 = q.iter().zip(&self.entropies).map(|(w, s)| w * s).sum();
        (von_neumann_entropy(&avg, LogBase::Nats) - own).max(0.0)
    }

    fn spectrum(&self, q: &[f64]) -> Result<Spectrum> {
        eig_hermitian(&self.average(q))
    }

    /// `D(ρₖ ‖ ρ̄)` in nats, infinite when `ρₖ` leaves the support of `ρ̄`.
    fn divergence(&self, k: usize, avg: &Spectrum) -> Result<f64> {
        let mut cross = 0.0;
        for (l, v) in avg.eigenvalues.iter().zip(&avg.eigenvectors) {
            let w = self.states[k].matrix().expectation(v)?.re;
            if *l <= 0.0 {
                if w > 1e-14 {
                    return Ok(f64::INFINITY);
                }
                continue;
            }
            cross -= w * l.ln();
        }
        Ok((cross - self.entropies[k]).max(0.0))
    }

    fn divergences(&self, q: &[f64]) -> Result<Vec<f64>> {
        let sp = self.spectrum(q)?;
        (0..self.states.len())
            .map(|k| self.divergence(k, &sp))
            .collect()
    }

    /// Best split of `q[i] + q[j]` between the two states, others fixed.
    /// `χ` is concave along the segment; its slope is `D(ρᵢ‖ρ̄) - D(ρⱼ‖ρ̄)`.
    fn exchange(&self, q: &mut [f64], i: usize, j: usize) -> Result<()> {
        let a = q[i] + q[j];
        if a <= 0.0 {
            return Ok(());
        }
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        for _ in 0..200 {
            let s = 0.5 * (lo + hi);
            if s <= lo || s >= hi {
                break;
            }
            q[i] = a * s;
            q[j] = a - q[i];
            let sp = self.spectrum(q)?;
            let slope = self.divergence(i, &sp)? - self.divergence(j, &sp)?;
            if slope > 0.0 {
                lo = s;
            } else if slope < 0.0 {
                hi = s;
            } else {
                return Ok(());
            }
        }
        q[i] = a * 0.5 * (lo + hi);
        q[j] = a - q[i];
        Ok(())
    }
}

/// Visits every composition of `steps` into `n` nonnegative parts.
fn for_each_grid_point(n: usize, steps: usize, mut f: impl FnMut(&[usize])) {
    fn rec(parts: &mut Vec<usize>, n: usize, left: usize, f: &mut dyn FnMut(&[usize])) {
        if parts.len() == n - 1 {
            parts.push(left);
            f(parts);
            parts.pop();
            return;
        }
        for k in 0..=left {
            parts.push(k);
            rec(parts, n, left - k, f);
            parts.pop();
        }
    }
    rec(&mut Vec::with_capacity(n), n, steps, &mut f);
}

fn grid_steps(n: usize) -> usize {
    match n {
        3 => 100,
        4 => 20,
        _ => 1,
    }
}

/// Maximizes `χ` over the priors of 1 to 4 fixed states.
///
/// Two states start at uniform priors; three and four states start from the
/// best point of a simplex grid (steps 0.01 and 0.05). Pairwise exchange
/// steps then refine the priors until the certified gap is at most `tol`
/// (in `base` units).
pub fn maximize_holevo(states: &[DensityMatrix], base: LogBase, tol: f64) -> Result<HolevoResult> {
    let n = states.len();
    if n == 0 || n > 4 {
        return Err(Error::Domain(format!(
            "prior optimization supports 1 to 4 states, got {n}"
        )));
    }
    let dim = states[0].dim();
    if let Some(s) = states.iter().find(|s| s.dim() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: s.dim(),
        });
    }
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    let obj = Objective::new(states);
    let uniform = vec![1.0 / n as f64; n];
    let chi_at_uniform = obj.chi(&uniform);
    if n == 1 {
        return Ok(HolevoResult {
            capacity: 0.0,
            optimal_priors: InputDistribution::new(vec![1.0])?,
            chi_at_uniform: 0.0,
            gap: 0.0,
            cycles: 0,
        });
    }

    let mut q = uniform.clone();
    if n > 2 {
        let steps = grid_steps(n);
        let mut best = chi_at_uniform;
        for_each_grid_point(n, steps, |parts| {
            let p: Vec<f64> = parts.iter().map(|&k| k as f64 / steps as f64).collect();
            let v = obj.chi(&p);
            if v > best {
                best = v;
                q = p;
            }
        });
    }

    let tol_nats = base.to_nats(tol);
    let mut lower = obj.chi(&q);
    let mut upper = f64::INFINITY;
    for cycle in 0..=MAX_CYCLES {
        let d = obj.divergences(&q)?;
        lower = obj.chi(&q);
        upper = d.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if upper - lower <= tol_nats {
            return finish(&obj, q, lower, upper, chi_at_uniform, cycle, base);
        }
        if cycle == MAX_CYCLES {
            break;
        }
        for i in 0..n {
            for j in (i + 1)..n {
                obj.exchange(&mut q, i, j)?;
            }
        }
    }
    Err(Error::NonConvergence {
        iterations: MAX_CYCLES,
        lower: base.from_nats(lower),
        upper: base.from_nats(upper),
    })
}

fn finish(
    obj: &Objective,
    mut q: Vec<f64>,
    lower: f64,
    upper: f64,
    chi_at_uniform: f64,
    cycles: usize,
    base: LogBase,
) -> Result<HolevoResult> {
    q.iter_mut().for_each(|w| {
        if *w < PRIOR_FLOOR {
            *w = 0.0
        }
    });
    let total: f64 = q.iter().sum();
    q.iter_mut().for_each(|w| *w /= total);
    let capacity = obj.chi(&q).max(lower);
    Ok(HolevoResult {
        capacity: base.from_nats(capacity),
        optimal_priors: InputDistribution::new(q)?,
        chi_at_uniform: base.from_nats(chi_at_uniform),
        gap: base.from_nats((upper - capacity).max(0.0)),
        cycles,
    })
}

/// [`maximize_holevo`] with [`DEFAULT_TOLERANCE`].
pub fn holevo_capacity(states: &[DensityMatrix], base: LogBase) -> Result<HolevoResult> {
    maximize_holevo(states, base, DEFAULT_TOLERANCE)
}

/// Density `f(φ)` of a random polarization rotation, symmetric about zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum NoiseDistribution {
    /// Uniform on `[-width/2, width/2]`.
    Uniform { width: f64 },
    /// Zero-mean normal with standard deviation `sigma`.
    Gaussian { sigma: f64 },
    /// Tabulated density on a uniform grid symmetric about zero.
    Custom(TabulatedDensity),
}

/// Samples of `f(φ)` on an evenly spaced grid; `angles.len() - 1` must be a
/// multiple of 4 so two Simpson levels are available.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TabulatedDensity {
    pub angles: Vec<f64>,
    pub density: Vec<f64>,
}

impl TabulatedDensity {
    pub fn new(angles: Vec<f64>, density: Vec<f64>) -> Result<Self> {
        let t = TabulatedDensity { angles, density };
        t.validate()?;
        Ok(t)
    }

    /// Samples `f` on `points` evenly spaced angles over `[-half_width, half_width]`.
    pub fn sample(f: impl Fn(f64) -> f64, half_width: f64, points: usize) -> Result<Self> {
        if points < 2 {
            return Err(Error::InvalidGrid("need at least two points".into()));
        }
        let h = 2.0 * half_width / (points - 1) as f64;
        let angles: Vec<f64> = (0..points).map(|i| -half_width + h * i as f64).collect();
        let density = angles.iter().map(|&a| f(a)).collect();
        TabulatedDensity::new(angles, density)
    }

    fn step(&self) -> f64 {
        (self.angles[self.angles.len() - 1] - self.angles[0]) / (self.angles.len() - 1) as f64
    }

    fn validate(&self) -> Result<()> {
        let n = self.angles.len();
        if n != self.density.len() {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: self.density.len(),
            });
        }
        if n < 5 || !(n - 1).is_multiple_of(4) {
            return Err(Error::InvalidGrid(format!(
                "{n} samples; need 4k + 1 with k ≥ 1"
            )));
        }
        if let Some(v) = self.density.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(Error::InvalidDistribution(format!("density value {v}")));
        }
        let h = self.step();
        if !(h > 0.0) {
            return Err(Error::InvalidGrid("angles must increase".into()));
        }
        for (i, a) in self.angles.iter().enumerate() {
            let want = self.angles[0] + h * i as f64;
            if (a - want).abs() > 1e-9 * h.max(1.0) {
                return Err(Error::InvalidGrid(format!("angle {i} is off the uniform grid")));
            }
            if (a + self.angles[n - 1 - i]).abs() > 1e-9 * h.max(1.0) {
                return Err(Error::InvalidGrid("grid is not symmetric about zero".into()));
            }
        }
        let mass = self.integrate(|_| 1.0)?;
        if (mass - 1.0).abs() > QUADRATURE_TOLERANCE {
            return Err(Error::InvalidDistribution(format!("density integrates to {mass}")));
        }
        let asym = self.integrate_indexed(|i, f| (f - self.density[n - 1 - i]).abs())?;
        if asym > QUADRATURE_TOLERANCE {
            return Err(Error::InvalidDistribution(format!(
                "density is not symmetric about zero (∫|f(φ) - f(-φ)| = {asym:e})"
            )));
        }
        Ok(())
    }

    /// `∫ f(φ) g(φ) dφ` by composite Simpson on the table.
    pub fn integrate(&self, g: impl Fn(f64) -> f64) -> Result<f64> {
        self.integrate_indexed(|i, f| f * g(self.angles[i]))
    }

    /// Simpson on strides 1, 2, 4, ... of the table; the finest two estimates
    /// must agree to [`QUADRATURE_TOLERANCE`].
    fn integrate_indexed(&self, term: impl Fn(usize, f64) -> f64) -> Result<f64> {
        let n = self.angles.len();
        let vals: Vec<f64> = (0..n).map(|i| term(i, self.density[i])).collect();
        let h = self.step();
        let simpson = |stride: usize| {
            let m = (n - 1) / stride;
            let mut s = vals[0] + vals[n - 1];
            for k in 1..m {
                s += if k % 2 == 1 { 4.0 } else { 2.0 } * vals[k * stride];
            }
            s * h * stride as f64 / 3.0
        };
        let fine = simpson(1);
        let coarse = simpson(2);
        if (fine - coarse).abs() > QUADRATURE_TOLERANCE {
            return Err(Error::Quadrature(format!(
                "Simpson estimates {fine} and {coarse} differ by more than {QUADRATURE_TOLERANCE:e}; refine the table"
            )));
        }
        Ok(fine)
    }
}

/// `d = ∫ f(φ) sin²φ dφ`, the flip probability induced by the noise.
pub fn polarization_noise_d(noise: &NoiseDistribution) -> Result<f64> {
    let d = match noise {
        NoiseDistribution::Uniform { width } => {
            if !(*width >= 0.0) || !width.is_finite() {
                return Err(Error::Domain(format!("uniform width {width}")));
            }
            if *width == 0.0 {
                0.0
            } else {
                0.5 * (1.0 - width.sin() / width)
            }
        }
        NoiseDistribution::Gaussian { sigma } => {
            if !(*sigma >= 0.0) || !sigma.is_finite() {
                return Err(Error::Domain(format!("gaussian sigma {sigma}")));
            }
            -0.5 * (-2.0 * sigma * sigma).exp_m1()
        }
        NoiseDistribution::Custom(t) => {
            t.validate()?;
            t.integrate(|phi| phi.sin().powi(2))?
        }
    };
    check_d(d)?;
    Ok(d)
}

fn check_d(d: f64) -> Result<()> {
    if !(0.0..=0.5).contains(&d) {
        return Err(Error::Domain(format!(
            "noise parameter d = {d} is outside [0, 1/2]"
        )));
    }
    Ok(())
}

/// Mixed state received when a horizontal (`0`) or vertical (`π/2`) photon
/// suffers symmetric polarization noise of strength `d`.
pub fn apply_polarization_noise(pure_angle: f64, d: f64) -> Result<DensityMatrix> {
    check_d(d)?;
    use std::f64::consts::{FRAC_PI_2, PI};
    let a = pure_angle.rem_euclid(PI);
    let near = |x: f64| (a - x).abs() < 1e-12 || (a - x - PI).abs() < 1e-12;
    if near(0.0) {
        DensityMatrix::from_diagonal(&[1.0 - d, d])
    } else if near(FRAC_PI_2) {
        DensityMatrix::from_diagonal(&[d, 1.0 - d])
    } else {
        Err(Error::UnsupportedAngle(pure_angle))
    }
}

/// Von Neumann and Shannon capacities of orthogonal signals under noise `d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoisyCapacity {
    pub von_neumann: f64,
    pub shannon: f64,
}

/// Both capacities are `1 - H(d)` bits; they are computed independently
/// (Holevo maximization on the noisy states, Blahut-Arimoto on `BSC(d)`).
pub fn noisy_orthogonal_capacity(d: f64, base: LogBase) -> Result<NoisyCapacity> {
    let states = [
        apply_polarization_noise(0.0, d)?,
        apply_polarization_noise(std::f64::consts::FRAC_PI_2, d)?,
    ];
    let cn = maximize_holevo(&states, LogBase::Nats, 1e-12)?.capacity;
    let cs = blahut_arimoto(&bsc(d)?, LogBase::Nats, 1e-12, 1_000_000)?.capacity;
    Ok(NoisyCapacity {
        von_neumann: base.from_nats(cn),
        shannon: base.from_nats(cs),
    })
}

/// `χ` when each photon is lost with probability `eps` and the loss is detected.
pub fn attenuated_holevo(ensemble: &SignalEnsemble, eps: f64, base: LogBase) -> Result<f64> {
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::InvalidProbability(eps));
    }
    Ok((1.0 - eps) * holevo_chi(ensemble, base))
}
