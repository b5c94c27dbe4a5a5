//! Discrete memoryless channels and their Shannon capacity.
//!
//! Capacities are computed with the Blahut-Arimoto alternating update. Every
//! iteration yields a two-sided certificate: the mutual information of the
//! current input distribution is a lower bound and the largest divergence
//! `max_k D(P(·|k) ‖ r)` of a row from the induced output distribution `r`
//! is an upper bound. Iteration stops once the two are within `tol`.

use serde::{Deserialize, Serialize};

use crate::base::{check_distribution, neg_xlnx, LogBase};
use crate::error::{Error, Result};

/// Tolerance on row sums and entry ranges of a transition matrix.
pub const ROW_TOLERANCE: f64 = 1e-12;
/// Input probabilities below this are reported as exactly zero.
pub const ZERO_INPUT: f64 = 1e-12;

/// On-disk layout of a channel: `{"inputs": [...], "outputs": [...], "P": [[...]]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DmcFile {
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    #[serde(rename = "P")]
    pub transition: Vec<Vec<f64>>,
}

/// Row-stochastic transition matrix `P(j|k)` with symbol labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DmcFile", into = "DmcFile")]
pub struct Dmc {
    transition: Vec<Vec<f64>>,
    input_labels: Vec<String>,
    output_labels: Vec<String>,
}

fn default_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

impl Dmc {
    pub fn new(
        transition: Vec<Vec<f64>>,
        input_labels: Vec<String>,
        output_labels: Vec<String>,
    ) -> Result<Self> {
        if transition.is_empty() {
            return Err(Error::InvalidChannel {
                row: 0,
                reason: "channel has no inputs".into(),
            });
        }
        let width = output_labels.len();
        if input_labels.len() != transition.len() {
            return Err(Error::DimensionMismatch {
                expected: transition.len(),
                found: input_labels.len(),
            });
        }
        if width == 0 {
            return Err(Error::InvalidChannel {
                row: 0,
                reason: "channel has no outputs".into(),
            });
        }
        let mut transition = transition;
        for (k, row) in transition.iter_mut().enumerate() {
            if row.len() != width {
                return Err(Error::InvalidChannel {
                    row: k,
                    reason: format!("has {} entries, expected {width}", row.len()),
                });
            }
            for (j, p) in row.iter_mut().enumerate() {
                if !(p.is_finite() && *p >= -ROW_TOLERANCE && *p <= 1.0 + ROW_TOLERANCE) {
                    return Err(Error::InvalidChannel {
                        row: k,
                        reason: format!("entry {j} is {p}, outside [0, 1]"),
                    });
                }
                *p = p.clamp(0.0, 1.0);
            }
            let total: f64 = row.iter().sum();
            if (total - 1.0).abs() > ROW_TOLERANCE {
                return Err(Error::InvalidChannel {
                    row: k,
                    reason: format!("sums to {total}, expected 1"),
                });
            }
        }
        Ok(Dmc {
            transition,
            input_labels,
            output_labels,
        })
    }

    /// Channel with labels `0..K` and `0..J`.
    pub fn from_matrix(transition: Vec<Vec<f64>>) -> Result<Self> {
        let k = transition.len();
        let j = transition.first().map_or(0, Vec::len);
        Dmc::new(transition, default_labels(k), default_labels(j))
    }

    /// Noiseless channel on `n` symbols.
    pub fn identity(n: usize) -> Self {
        let rows = (0..n)
            .map(|k| (0..n).map(|j| if j == k { 1.0 } else { 0.0 }).collect())
            .collect();
        Dmc::from_matrix(rows).expect("identity is stochastic")
    }

    pub fn num_inputs(&self) -> usize {
        self.transition.len()
    }

    pub fn num_outputs(&self) -> usize {
        self.output_labels.len()
    }

    pub fn transition(&self) -> &[Vec<f64>] {
        &self.transition
    }

    pub fn row(&self, k: usize) -> &[f64] {
        &self.transition[k]
    }

    pub fn get(&self, k: usize, j: usize) -> f64 {
        self.transition[k][j]
    }

    pub fn input_labels(&self) -> &[String] {
        &self.input_labels
    }

    pub fn output_labels(&self) -> &[String] {
        &self.output_labels
    }

    /// Merges output `b` into output `a`; a deterministic post-processing.
    pub fn merge_outputs(&self, a: usize, b: usize) -> Result<Dmc> {
        let j = self.num_outputs();
        for idx in [a, b] {
            if idx >= j {
                return Err(Error::IndexOutOfRange { index: idx, len: j });
            }
        }
        if a == b {
            return Ok(self.clone());
        }
        let rows = self
            .transition
            .iter()
            .map(|row| {
                let mut r = row.clone();
                r[a] += r[b];
                r.remove(b);
                r
            })
            .collect();
        let mut outputs = self.output_labels.clone();
        outputs[a] = format!("{}+{}", outputs[a], outputs[b]);
        outputs.remove(b);
        Dmc::new(rows, self.input_labels.clone(), outputs)
    }
}

impl TryFrom<DmcFile> for Dmc {
    type Error = Error;
    fn try_from(f: DmcFile) -> Result<Self> {
        Dmc::new(f.transition, f.inputs, f.outputs)
    }
}

impl From<Dmc> for DmcFile {
    fn from(d: Dmc) -> Self {
        DmcFile {
            inputs: d.input_labels,
            outputs: d.output_labels,
            transition: d.transition,
        }
    }
}

/// Probability assignment `Q(k)` over channel inputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct InputDistribution(Vec<f64>);

impl InputDistribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        check_distribution(&probs)?;
        Ok(InputDistribution(probs))
    }

    pub fn uniform(n: usize) -> Self {
        InputDistribution(vec![1.0 / n as f64; n])
    }

    pub fn probs(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl TryFrom<Vec<f64>> for InputDistribution {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        InputDistribution::new(v)
    }
}

impl From<InputDistribution> for Vec<f64> {
    fn from(d: InputDistribution) -> Self {
        d.0
    }
}

/// Outcome of a capacity computation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapacityResult {
    pub capacity: f64,
    pub optimal_input: InputDistribution,
    pub iterations: usize,
    /// Certified distance between the upper bound and `capacity`.
    pub gap: f64,
}

fn output_distribution(q: &[f64], ch: &Dmc) -> Vec<f64> {
    let mut r = vec![0.0; ch.num_outputs()];
    for (qk, row) in q.iter().zip(&ch.transition) {
        if *qk > 0.0 {
            for (rj, p) in r.iter_mut().zip(row) {
                *rj += qk * p;
            }
        }
    }
    r
}

/// `D(P(·|k) ‖ r)` in nats; infinite when the row is not dominated by `r`.
fn row_divergence(row: &[f64], r: &[f64]) -> f64 {
    row.iter()
        .zip(r)
        .filter(|(p, _)| **p > 0.0)
        .map(|(p, rj)| {
            if *rj > 0.0 {
                p * (p / rj).ln()
            } else {
                f64::INFINITY
            }
        })
        .sum()
}

fn mutual_information_nats(q: &[f64], ch: &Dmc) -> f64 {
    let r = output_distribution(q, ch);
    let info: f64 = q
        .iter()
        .zip(&ch.transition)
        .filter(|(qk, _)| **qk > 0.0)
        .map(|(qk, row)| qk * row_divergence(row, &r))
        .sum();
    info.max(0.0)
}

/// Average mutual information `I(X;Y)` for input distribution `q`.
pub fn mutual_information(q: &InputDistribution, ch: &Dmc, base: LogBase) -> Result<f64> {
    if q.len() != ch.num_inputs() {
        return Err(Error::DimensionMismatch {
            expected: ch.num_inputs(),
            found: q.len(),
        });
    }
    Ok(base.from_nats(mutual_information_nats(q.probs(), ch)))
}

/// Binary entropy `H(p) = -p log p - (1-p) log(1-p)`.
pub fn binary_entropy(p: f64, base: LogBase) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidProbability(p));
    }
    Ok(base.from_nats(neg_xlnx(p) + neg_xlnx(1.0 - p)))
}

const MAX_RELAXATION: f64 = 1e6;
const MAX_LOG_STEP: f64 = 30.0;

/// Blahut-Arimoto settings.
#[derive(Debug, Clone, PartialEq)]
pub struct BlahutArimoto {
    /// Required gap between upper and lower bound, in the reporting base.
    pub tol: f64,
    pub max_iter: usize,
    /// Inputs allowed to carry probability; `None` means all of them.
    pub support: Option<Vec<bool>>,
}

impl Default for BlahutArimoto {
    fn default() -> Self {
        BlahutArimoto {
            tol: 1e-9,
            max_iter: 100_000,
            support: None,
        }
    }
}

impl BlahutArimoto {
    pub fn new(tol: f64, max_iter: usize) -> Self {
        BlahutArimoto {
            tol,
            max_iter,
            support: None,
        }
    }

    /// Restricts the optimization to inputs whose mask entry is `true`.
    pub fn with_support(mut self, mask: Vec<bool>) -> Self {
        self.support = Some(mask);
        self
    }

    pub fn run(&self, ch: &Dmc, base: LogBase) -> Result<CapacityResult> {
        if !(self.tol > 0.0) {
            return Err(Error::Domain(format!("tolerance must be positive, got {}", self.tol)));
        }
        let k = ch.num_inputs();
        let support = match &self.support {
            Some(mask) if mask.len() != k => {
                return Err(Error::DimensionMismatch {
                    expected: k,
                    found: mask.len(),
                })
            }
            Some(mask) => mask.clone(),
            None => vec![true; k],
        };
        let active = support.iter().filter(|s| **s).count();
        if active == 0 {
            return Err(Error::Domain("input support mask is empty".into()));
        }
        let tol = base.to_nats(self.tol);
        let mut q: Vec<f64> = support
            .iter()
            .map(|&s| if s { 1.0 / active as f64 } else { 0.0 })
            .collect();
        let mut div = vec![0.0; k];
        let (mut lower, mut upper) = (0.0, f64::INFINITY);
        // over-relaxed steps q ∝ q·exp(μD); μ doubles while I keeps rising
        // and drops back to 1 (the plain, monotone update) when it does not
        let mut mu = 1.0;
        let mut stepped = 1.0;
        let mut prev_q = q.clone();
        let mut prev_lower = f64::NEG_INFINITY;
        for it in 1..=self.max_iter.max(1) {
            let r = output_distribution(&q, ch);
            for (d, row) in div.iter_mut().zip(&ch.transition) {
                *d = row_divergence(row, &r);
            }
            lower = q.iter().zip(&div).map(|(a, b)| if *a > 0.0 { a * b } else { 0.0 }).sum();
            if stepped > 1.0 && lower < prev_lower {
                q.clone_from(&prev_q);
                mu = 1.0;
                lower = prev_lower;
                let r = output_distribution(&q, ch);
                for (d, row) in div.iter_mut().zip(&ch.transition) {
                    *d = row_divergence(row, &r);
                }
            }
            upper = div
                .iter()
                .zip(&support)
                .filter(|(_, s)| **s)
                .map(|(d, _)| *d)
                .fold(f64::NEG_INFINITY, f64::max);
            if upper - lower <= tol {
                return Ok(finish(q, ch, upper, it, base));
            }
            if it == self.max_iter.max(1) {
                break;
            }
            prev_q.clone_from(&q);
            prev_lower = lower;
            stepped = mu;
            let mut total = 0.0;
            for ((qk, d), s) in q.iter_mut().zip(&div).zip(&support) {
                if *s {
                    *qk *= (mu * (d - upper)).max(-MAX_LOG_STEP).exp();
                    total += *qk;
                }
            }
            q.iter_mut().for_each(|x| *x /= total);
            mu = (2.0 * mu).min(MAX_RELAXATION);
        }
        Err(Error::NonConvergence {
            iterations: self.max_iter,
            lower,
            upper,
        })
    }
}

fn finish(mut q: Vec<f64>, ch: &Dmc, upper: f64, iterations: usize, base: LogBase) -> CapacityResult {
    for x in q.iter_mut() {
        if *x < ZERO_INPUT {
            *x = 0.0;
        }
    }
    let total: f64 = q.iter().sum();
    q.iter_mut().for_each(|x| *x /= total);
    let capacity = mutual_information_nats(&q, ch);
    CapacityResult {
        capacity: base.from_nats(capacity),
        optimal_input: InputDistribution(q),
        iterations,
        gap: base.from_nats((upper - capacity).max(0.0)),
    }
}

/// Shannon capacity by Blahut-Arimoto, starting from the uniform input.
pub fn blahut_arimoto(ch: &Dmc, base: LogBase, tol: f64, max_iter: usize) -> Result<CapacityResult> {
    BlahutArimoto::new(tol, max_iter).run(ch, base)
}

/// Capacity with default settings (`tol = 1e-9`, `10⁵` iterations).
pub fn capacity(ch: &Dmc, base: LogBase) -> Result<CapacityResult> {
    BlahutArimoto::default().run(ch, base)
}

fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidProbability(p))
    }
}

/// Z-channel: input 0 is noiseless, input 1 is received as 0 with probability `p`.
pub fn z_channel(p: f64) -> Result<Dmc> {
    check_probability(p)?;
    Dmc::from_matrix(vec![vec![1.0, 0.0], vec![p, 1.0 - p]])
}

/// Binary symmetric channel with crossover probability `p`.
pub fn bsc(p: f64) -> Result<Dmc> {
    check_probability(p)?;
    Dmc::from_matrix(vec![vec![1.0 - p, p], vec![p, 1.0 - p]])
}

/// M-ary erasure channel: the sent symbol with probability `1-eps`, otherwise
/// the erasure output `e` (last column).
pub fn erasure_channel(m_ary: usize, eps: f64) -> Result<Dmc> {
    check_probability(eps)?;
    if m_ary < 2 {
        return Err(Error::Domain(format!("erasure channel needs at least 2 symbols, got {m_ary}")));
    }
    compose_erasure(&Dmc::identity(m_ary), eps)
}

/// Closed-form Z-channel capacity `log(1 + (1-p) p^{p/(1-p)})`.
///
/// The optimal probability of the noisy input is `z / (1 + (1-p) z)` with
/// `z = p^{p/(1-p)}`.
pub fn z_channel_capacity_closed_form(p: f64, base: LogBase) -> Result<CapacityResult> {
    if !(0.0..1.0).contains(&p) {
        return Err(Error::InvalidProbability(p));
    }
    let z = if p == 0.0 { 1.0 } else { (p / (1.0 - p) * p.ln()).exp() };
    let q1 = z / (1.0 + (1.0 - p) * z);
    Ok(CapacityResult {
        capacity: base.from_nats(((1.0 - p) * z).ln_1p()),
        optimal_input: InputDistribution(vec![1.0 - q1, q1]),
        iterations: 0,
        gap: 0.0,
    })
}

/// `1 - H(p)`.
pub fn bsc_capacity(p: f64, base: LogBase) -> Result<f64> {
    let h = binary_entropy(p, LogBase::Nats)?;
    Ok(base.from_nats(std::f64::consts::LN_2 - h))
}

/// `(1 - eps) log M`.
pub fn erasure_capacity(m_ary: usize, eps: f64, base: LogBase) -> Result<f64> {
    check_probability(eps)?;
    Ok(base.from_nats((1.0 - eps) * (m_ary as f64).ln()))
}

/// Appends an erasure output reached with probability `eps` from every input.
pub fn compose_erasure(ch: &Dmc, eps: f64) -> Result<Dmc> {
    check_probability(eps)?;
    let rows = ch
        .transition
        .iter()
        .map(|row| {
            let mut r: Vec<f64> = row.iter().map(|p| p * (1.0 - eps)).collect();
            r.push(eps);
            r
        })
        .collect();
    let mut outputs = ch.output_labels.clone();
    outputs.push("e".into());
    Dmc::new(rows, ch.input_labels.clone(), outputs)
}

/// Loss expressed in decibels, `A = -10 log₁₀(1 - eps)`.
pub fn attenuation_db(eps: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&eps) {
        return Err(Error::InvalidProbability(eps));
    }
    Ok(-10.0 * (-eps).ln_1p() / std::f64::consts::LN_10)
}

/// Inverse of [`attenuation_db`]: the lost fraction for `db` decibels.
pub fn erasure_from_db(db: f64) -> Result<f64> {
    if !(db >= 0.0 && db.is_finite()) {
        return Err(Error::Domain(format!("attenuation must be a nonnegative dB value, got {db}")));
    }
    Ok(-(-db / 10.0 * std::f64::consts::LN_10).exp_m1())
}
