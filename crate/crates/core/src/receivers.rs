//! Receivers: measurements on polarization states compiled into channels.
//!
//! A receiver is a POVM `{Eⱼ}`; sending state `|sₖ⟩` produces outcome `j` with
//! probability `P(j|k) = ⟨sₖ|Eⱼ|sₖ⟩`, which turns a signal set plus a
//! measurement into a [`Dmc`].
//!
//! The three-outcome erasure receiver is physically an ancilla photon plus a
//! projective test in the four dimensional joint space. Only its effective
//! POVM on the signal qubit is represented here; the transition
//! probabilities are identical.

use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dmc::{Dmc, InputDistribution};
use crate::error::{Error, Result};
use crate::qstate::{
    eig_hermitian, inner_product, ket_from_angle, overlap_sqr, tensor, CMatrix, Ket,
    SignalEnsemble,
};

/// Tolerance for POVM positivity and completeness.
pub const POVM_TOLERANCE: f64 = 1e-10;
/// Eigenvalues of the average state at or below this are treated as null space.
pub const SRM_NULL_EIGENVALUE: f64 = 1e-12;
/// Smallest accepted ratio of support eigenvalues to the largest one.
pub const SRM_MIN_CONDITION: f64 = 1e-8;
/// Name of the generator used by [`sample_outcomes`].
pub const SAMPLER_RNG: &str = "ChaCha8Rng";

/// A positive-operator-valued measure: one PSD operator per outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PovmRepr", into = "PovmRepr")]
pub struct Povm {
    elements: Vec<CMatrix>,
    labels: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct PovmRepr {
    labels: Vec<String>,
    elements: Vec<CMatrix>,
}

impl Povm {
    pub fn new(elements: Vec<CMatrix>, labels: Vec<String>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::InvalidPovm("no elements".into()));
        }
        if labels.len() != elements.len() {
            return Err(Error::DimensionMismatch {
                expected: elements.len(),
                found: labels.len(),
            });
        }
        let dim = elements[0].dim();
        let mut total = CMatrix::zeros(dim);
        for (e, label) in elements.iter().zip(&labels) {
            if e.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: e.dim(),
                });
            }
            let sp = eig_hermitian(e)?;
            let min = sp.eigenvalues.last().copied().unwrap_or(0.0);
            if min < -POVM_TOLERANCE {
                return Err(Error::InvalidPovm(format!(
                    "element {label} has negative eigenvalue {min:e}"
                )));
            }
            total = &total + e;
        }
        let dev = total.max_abs_diff(&CMatrix::identity(dim));
        if dev > POVM_TOLERANCE {
            return Err(Error::InvalidPovm(format!(
                "elements sum to identity only within {dev:e}"
            )));
        }
        Ok(Povm { elements, labels })
    }

    /// Projective measurement onto an orthonormal set of kets.
    pub fn projective(basis: &[Ket], labels: Vec<String>) -> Result<Self> {
        Povm::new(basis.iter().map(CMatrix::projector).collect(), labels)
    }

    pub fn dim(&self) -> usize {
        self.elements[0].dim()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[CMatrix] {
        &self.elements
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Largest deviation of `Σ Eⱼ` from the identity.
    pub fn completeness_error(&self) -> f64 {
        let total = self
            .elements
            .iter()
            .fold(CMatrix::zeros(self.dim()), |acc, e| &acc + e);
        total.max_abs_diff(&CMatrix::identity(self.dim()))
    }

    /// The same measurement in a rotated frame, `{U Eⱼ U†}`.
    pub fn rotate(&self, u: &CMatrix) -> Result<Povm> {
        Povm::new(
            self.elements.iter().map(|e| e.conjugate_by(u)).collect(),
            self.labels.clone(),
        )
    }
}

impl TryFrom<PovmRepr> for Povm {
    type Error = Error;
    fn try_from(r: PovmRepr) -> Result<Self> {
        Povm::new(r.elements, r.labels)
    }
}

impl From<Povm> for PovmRepr {
    fn from(p: Povm) -> Self {
        PovmRepr {
            labels: p.labels,
            elements: p.elements,
        }
    }
}

/// The transmitter's pure-state alphabet.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SignalSetRepr", into = "SignalSetRepr")]
pub struct SignalSet {
    states: Vec<Ket>,
    labels: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct SignalSetRepr {
    labels: Vec<String>,
    states: Vec<Ket>,
}

impl SignalSet {
    pub fn new(states: Vec<Ket>, labels: Vec<String>) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::Domain("signal set is empty".into()));
        }
        if labels.len() != states.len() {
            return Err(Error::DimensionMismatch {
                expected: states.len(),
                found: labels.len(),
            });
        }
        let dim = states[0].dim();
        if let Some(s) = states.iter().find(|s| s.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: s.dim(),
            });
        }
        Ok(SignalSet { states, labels })
    }

    /// Linear polarizations at the given angles (radians), labelled `s0, s1, ...`.
    pub fn from_angles(angles: &[f64]) -> Result<Self> {
        SignalSet::new(
            angles.iter().map(|&a| ket_from_angle(a)).collect(),
            (0..angles.len()).map(|i| format!("s{i}")).collect(),
        )
    }

    pub fn states(&self) -> &[Ket] {
        &self.states
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
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

    /// Keeps only the listed signals, in the given order.
    pub fn subset(&self, indices: &[usize]) -> Result<SignalSet> {
        let n = self.len();
        let mut states = Vec::with_capacity(indices.len());
        let mut labels = Vec::with_capacity(indices.len());
        for &i in indices {
            if i >= n {
                return Err(Error::IndexOutOfRange { index: i, len: n });
            }
            states.push(self.states[i].clone());
            labels.push(self.labels[i].clone());
        }
        SignalSet::new(states, labels)
    }

    /// Pairs the signals with prior probabilities.
    pub fn ensemble(&self, priors: &InputDistribution) -> Result<SignalEnsemble> {
        SignalEnsemble::pure(priors.probs().to_vec(), &self.states)
    }

    pub fn uniform_ensemble(&self) -> Result<SignalEnsemble> {
        self.ensemble(&InputDistribution::uniform(self.len()))
    }

    /// Applies a common unitary to every signal.
    pub fn rotate(&self, u: &CMatrix) -> Result<SignalSet> {
        SignalSet::new(
            self.states
                .iter()
                .map(|s| s.apply(u))
                .collect::<Result<Vec<_>>>()?,
            self.labels.clone(),
        )
    }
}

impl TryFrom<SignalSetRepr> for SignalSet {
    type Error = Error;
    fn try_from(r: SignalSetRepr) -> Result<Self> {
        SignalSet::new(r.states, r.labels)
    }
}

impl From<SignalSet> for SignalSetRepr {
    fn from(s: SignalSet) -> Self {
        SignalSetRepr {
            labels: s.labels,
            states: s.states,
        }
    }
}

/// A measurement together with the channel it induces on a signal set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Receiver {
    pub povm: Povm,
    pub channel: Dmc,
}

/// Channel induced by measuring `signals` with `povm`: `P(j|k) = ⟨sₖ|Eⱼ|sₖ⟩`.
pub fn measure_channel(signals: &SignalSet, povm: &Povm) -> Result<Dmc> {
    if signals.dim() != povm.dim() {
        return Err(Error::DimensionMismatch {
            expected: povm.dim(),
            found: signals.dim(),
        });
    }
    let mut rows = Vec::with_capacity(signals.len());
    for s in &signals.states {
        let mut row = povm
            .elements
            .iter()
            .map(|e| e.expectation(s).map(|c| c.re.max(0.0)))
            .collect::<Result<Vec<f64>>>()?;
        // completeness holds to POVM_TOLERANCE; restore exact stochasticity
        let total: f64 = row.iter().sum();
        row.iter_mut().for_each(|p| *p /= total);
        rows.push(row);
    }
    Dmc::new(rows, signals.labels.clone(), povm.labels.clone())
}

/// Two-outcome projective test `{|χ⟩⟨χ|, |χ⊥⟩⟨χ⊥|}` with `χ` at `angle`.
pub fn polarization_filter(angle: f64) -> Povm {
    Povm::projective(
        &[ket_from_angle(angle), ket_from_angle(angle + std::f64::consts::FRAC_PI_2)],
        vec!["0".into(), "1".into()],
    )
    .expect("orthogonal projectors form a POVM")
}

/// Minimum error probability for two equiprobable pure states,
/// `(1 - √(1 - |⟨s₀|s₁⟩|²)) / 2`.
pub fn helstrom_error(s0: &Ket, s1: &Ket) -> Result<f64> {
    let ov = overlap_sqr(s0, s1)?.min(1.0);
    Ok(0.5 * (1.0 - (1.0 - ov).sqrt()))
}

fn polarization_angle(s: &Ket, index: usize) -> Result<f64> {
    if s.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: s.dim(),
        });
    }
    // a global phase of -1 is still a linear polarization
    let a = s.amplitudes();
    let pivot = if a[0].abs() >= a[1].abs() { a[0] } else { a[1] };
    let phase = pivot.scale(1.0 / pivot.abs()).conj();
    let (x, y) = (a[0] * phase, a[1] * phase);
    if x.im.abs() > 1e-12 || y.im.abs() > 1e-12 {
        return Err(Error::NotLinearPolarization(index));
    }
    Ok(y.re.atan2(x.re))
}

/// Minimum-error projective receiver for two linearly polarized signals.
///
/// The measurement basis is placed symmetrically about the bisector of the
/// two signals, so the induced channel is binary symmetric with crossover
/// [`helstrom_error`]. Identical signals give crossover ½ and zero capacity.
pub fn helstrom_binary(s0: &Ket, s1: &Ket) -> Result<Receiver> {
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
    let t0 = polarization_angle(s0, 0)?;
    let t1 = polarization_angle(s1, 1)?;
    // polarizations are defined modulo π
    let mut delta = t1 - t0;
    delta -= PI * (delta / PI).round();
    if delta <= -FRAC_PI_2 {
        delta += PI;
    }
    let mid = t0 + 0.5 * delta;
    let (chi0, chi1) = if delta >= 0.0 {
        (mid - FRAC_PI_4, mid + FRAC_PI_4)
    } else {
        (mid + FRAC_PI_4, mid - FRAC_PI_4)
    };
    let povm = Povm::projective(
        &[ket_from_angle(chi0), ket_from_angle(chi1)],
        vec!["0".into(), "1".into()],
    )?;
    let signals = SignalSet::new(vec![s0.clone(), s1.clone()], vec!["s0".into(), "s1".into()])?;
    let channel = measure_channel(&signals, &povm)?;
    Ok(Receiver { povm, channel })
}

/// Unambiguous-discrimination receiver for two qubit states at angle `β`.
///
/// Outcomes `0` and `1` are conclusive and never wrong; outcome `e` is the
/// no-decision result. The conclusive elements project onto the states
/// orthogonal to the *other* signal, scaled by `1/(1 + cos β)`, and the
/// remainder completes the identity. The channel is a binary erasure channel
/// with `ε = cos β`.
pub fn povm_binary_erasure(s0: &Ket, s1: &Ket) -> Result<Receiver> {
    let cos_beta = inner_product(s0, s1)?.abs();
    if s0.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: s0.dim(),
        });
    }
    if cos_beta > 1.0 - 1e-12 {
        return Err(Error::IdenticalSignals);
    }
    let k = 1.0 / (1.0 + cos_beta);
    let e0 = CMatrix::projector(&s1.orthogonal()?).scale(k);
    let e1 = CMatrix::projector(&s0.orthogonal()?).scale(k);
    let rest = &(&CMatrix::identity(2) - &e0) - &e1;
    let povm = Povm::new(vec![e0, e1, rest], vec!["0".into(), "1".into(), "e".into()])?;
    let signals = SignalSet::new(vec![s0.clone(), s1.clone()], vec!["s0".into(), "s1".into()])?;
    let channel = measure_channel(&signals, &povm)?;
    Ok(Receiver { povm, channel })
}

/// Three linear polarizations 120° apart: `(1,0)`, `(-½, √3/2)`, `(-½, -√3/2)`.
pub fn trine_states() -> SignalSet {
    let h = 3f64.sqrt() / 2.0;
    SignalSet::new(
        vec![
            Ket::from_real(&[1.0, 0.0]).unwrap(),
            Ket::from_real(&[-0.5, h]).unwrap(),
            Ket::from_real(&[-0.5, -h]).unwrap(),
        ],
        vec!["s1".into(), "s2".into(), "s3".into()],
    )
    .expect("trine is a valid signal set")
}

fn trine_frame(kets: Vec<Ket>) -> Povm {
    Povm::new(
        kets.iter().map(|k| CMatrix::projector(k).scale(2.0 / 3.0)).collect(),
        vec!["a".into(), "b".into(), "c".into()],
    )
    .expect("scaled trine projectors sum to identity")
}

/// Trine POVM with elements `(2/3)|sᵢ⟩⟨sᵢ|` along the signals.
pub fn trine_povm_parallel() -> Povm {
    trine_frame(trine_states().states)
}

/// Trine POVM with elements `(2/3)|s̄ᵢ⟩⟨s̄ᵢ|`, `s̄ᵢ ⊥ sᵢ`; outcome `i` rules out signal `i`.
pub fn trine_povm_orthogonal() -> Povm {
    trine_frame(
        trine_states()
            .states
            .iter()
            .map(|s| s.orthogonal().expect("qubit"))
            .collect(),
    )
}

/// Photon-pair alphabet `|sᵢ⟩ ⊗ |sᵢ⟩` from a qubit alphabet.
pub fn pair_signals(base: &SignalSet) -> Result<SignalSet> {
    if base.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: base.dim(),
        });
    }
    SignalSet::new(
        base.states
            .iter()
            .map(|s| tensor(s, s))
            .collect::<Result<Vec<_>>>()?,
        base.labels.iter().map(|l| format!("{l}{l}")).collect(),
    )
}

/// Square-root (pretty good) measurement `Eⱼ = ρ̄^{-1/2} qⱼ|ψⱼ⟩⟨ψⱼ| ρ̄^{-1/2}`.
///
/// The inverse square root is taken on the support of `ρ̄ = Σ qⱼ|ψⱼ⟩⟨ψⱼ|`.
/// If the signals do not span the whole space, an extra outcome `null`
/// holding the projector onto the orthogonal complement completes the POVM;
/// no signal ever produces it.
pub fn square_root_measurement(signals: &SignalSet, priors: &InputDistribution) -> Result<Povm> {
    if priors.len() != signals.len() {
        return Err(Error::DimensionMismatch {
            expected: signals.len(),
            found: priors.len(),
        });
    }
    let n = signals.dim();
    let avg = signals
        .states
        .iter()
        .zip(priors.probs())
        .fold(CMatrix::zeros(n), |acc, (s, q)| {
            &acc + &CMatrix::projector(s).scale(*q)
        });
    let sp = eig_hermitian(&avg)?;
    let top = sp.eigenvalues[0];
    let mut inv_sqrt = CMatrix::zeros(n);
    let mut null = CMatrix::zeros(n);
    let mut has_null = false;
    for (l, v) in sp.eigenvalues.iter().zip(&sp.eigenvectors) {
        let proj = CMatrix::projector(v);
        if *l <= SRM_NULL_EIGENVALUE {
            null = &null + &proj;
            has_null = true;
        } else if *l < SRM_MIN_CONDITION * top {
            return Err(Error::IllConditioned(top / l));
        } else {
            inv_sqrt = &inv_sqrt + &proj.scale(1.0 / l.sqrt());
        }
    }
    let mut elements = Vec::with_capacity(signals.len() + 1);
    for (s, q) in signals.states.iter().zip(priors.probs()) {
        let raw = inv_sqrt.apply(s.amplitudes())?;
        let mut e = CMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                e.set(i, j, (raw[i] * raw[j].conj()).scale(*q));
            }
        }
        elements.push(e);
    }
    let mut labels = signals.labels.clone();
    if has_null {
        elements.push(null);
        labels.push("null".into());
    }
    Povm::new(elements, labels)
}

/// Empirical outcome counts for one channel input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutcomeHistogram {
    pub input: usize,
    pub labels: Vec<String>,
    pub counts: Vec<u64>,
    pub samples: u64,
    pub seed: u64,
    pub generator: String,
}

impl OutcomeHistogram {
    pub fn frequencies(&self) -> Vec<f64> {
        self.counts
            .iter()
            .map(|&c| c as f64 / self.samples as f64)
            .collect()
    }
}

/// Draws `n` outputs of `channel` for a fixed input; reproducible for a given seed.
pub fn sample_outcomes(channel: &Dmc, input_symbol: usize, n: u64, seed: u64) -> Result<OutcomeHistogram> {
    if input_symbol >= channel.num_inputs() {
        return Err(Error::IndexOutOfRange {
            index: input_symbol,
            len: channel.num_inputs(),
        });
    }
    if n == 0 {
        return Err(Error::Domain("sample count must be at least 1".into()));
    }
    let dist = WeightedIndex::new(channel.row(input_symbol))
        .map_err(|e| Error::Domain(format!("cannot sample row {input_symbol}: {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = vec![0u64; channel.num_outputs()];
    for _ in 0..n {
        counts[dist.sample(&mut rng)] += 1;
    }
    Ok(OutcomeHistogram {
        input: input_symbol,
        labels: channel.output_labels().to_vec(),
        counts,
        samples: n,
        seed,
        generator: SAMPLER_RNG.into(),
    })
}
