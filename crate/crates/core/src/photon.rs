//! Photon-counting channels: PPM, intensity-limited on-off keying, capacity
//! per unit cost and band-limited OOK efficiency.
//!
//! All quantities are computed in nats; rates are nats per second for the
//! continuous-time Poisson channel and nats per pulse for the slotted one.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::base::{check_distribution, fmt_sig, LogBase};
use crate::dmc::Dmc;
use crate::error::{Error, Result};

/// Relative separation of the intensities below which capacity is taken as 0.
pub const EQUAL_INTENSITY_TOLERANCE: f64 = 1e-12;

/// Dark (`gamma0`) and peak (`gamma1`) photon intensities, photons per second.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntensityPair {
    gamma0: f64,
    gamma1: f64,
}

impl IntensityPair {
    pub fn new(gamma0: f64, gamma1: f64) -> Result<Self> {
        if !(gamma0.is_finite() && gamma1.is_finite() && gamma0 >= 0.0 && gamma0 < gamma1) {
            return Err(Error::InvalidIntensity { gamma0, gamma1 });
        }
        Ok(IntensityPair { gamma0, gamma1 })
    }

    pub fn gamma0(&self) -> f64 {
        self.gamma0
    }

    pub fn gamma1(&self) -> f64 {
        self.gamma1
    }

    fn nearly_equal(&self) -> bool {
        (self.gamma1 - self.gamma0) <= EQUAL_INTENSITY_TOLERANCE * self.gamma1
    }

    /// `x = w - 1` with `w = γ₀ ln(γ₁/γ₀) / (γ₁ - γ₀)`, accurate as `γ₁ → γ₀`.
    fn x(&self) -> f64 {
        let (g0, g1) = (self.gamma0, self.gamma1);
        let delta = (g1 - g0) / g0;
        if delta < 1e-2 {
            // (ln(1+δ) - δ)/δ = Σ_{k≥2} (-1)^{k+1} δ^{k-1} / k
            let mut sum = 0.0;
            let mut pow = 1.0;
            for k in 2..16 {
                pow *= delta;
                let sign = if k % 2 == 0 { -1.0 } else { 1.0 };
                sum += sign * pow / k as f64;
            }
            sum
        } else {
            let l = g1.ln() - g0.ln();
            g0 * l / (g1 - g0) - 1.0
        }
    }
}

/// `eˣ - 1 - x` without cancellation for small `x`.
fn exp_excess(x: f64) -> f64 {
    if x.abs() < 1e-2 {
        let mut term = x;
        let mut sum = 0.0;
        for k in 2..14 {
            term *= x / k as f64;
            sum += term;
        }
        sum
    } else {
        x.exp_m1() - x
    }
}

/// Capacity of the intensity-limited Poisson channel, nats per second.
///
/// `C = γ₀/e (γ₁/γ₀)^{γ₁/(γ₁-γ₀)} - γ₀γ₁/(γ₁-γ₀) ln(γ₁/γ₀)`, evaluated as
/// `γ₁ (e^{w-1} - w)`; `γ₀ = 0` gives `γ₁/e`.
pub fn ook_capacity(ip: &IntensityPair) -> f64 {
    if ip.gamma0 == 0.0 {
        return ip.gamma1 / std::f64::consts::E;
    }
    if ip.nearly_equal() {
        return 0.0;
    }
    ip.gamma1 * exp_excess(ip.x())
}

/// Probability of the "on" symbol at capacity; `1/e` when `γ₀ = 0`.
pub fn ook_optimal_q(ip: &IntensityPair) -> f64 {
    let (g0, g1) = (ip.gamma0, ip.gamma1);
    if g0 == 0.0 {
        return (-1.0f64).exp();
    }
    if ip.nearly_equal() {
        return 0.5;
    }
    let x = ip.x();
    let delta = (g1 - g0) / g0;
    if delta < 1.0 {
        // q = (e^{x + ln(1+δ)} - 1) / δ
        (x + delta.ln_1p()).exp_m1() / delta
    } else {
        (g1 * x.exp() - g0) / (g1 - g0)
    }
}

/// Mean signal photon rate `q (γ₁ - γ₀)` at capacity.
pub fn average_intensity(ip: &IntensityPair) -> f64 {
    ook_optimal_q(ip) * (ip.gamma1 - ip.gamma0)
}

/// Capacity per signal photon, nats per photon. Tends to 0 as `γ₁ → γ₀`.
pub fn capacity_per_photon(ip: &IntensityPair) -> f64 {
    if ip.gamma0 > 0.0 && ip.nearly_equal() {
        return 0.0;
    }
    ook_capacity(ip) / average_intensity(ip)
}

/// Photons needed per bit, `ln 2 / C_ph`; infinite when nothing gets through.
pub fn cost_per_bit(ip: &IntensityPair) -> f64 {
    let c = capacity_per_photon(ip);
    if c > 0.0 {
        std::f64::consts::LN_2 / c
    } else {
        f64::INFINITY
    }
}

/// Pulse-position modulation with `slots` positions and mean `mean_photons`
/// per pulse. A pulse is missed (erased) with probability `e^{-m}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PpmConfig {
    slots: u64,
    mean_photons: f64,
}

impl PpmConfig {
    /// `mean_photons` may be `+∞` for an erasure-free link.
    pub fn new(slots: u64, mean_photons: f64) -> Result<Self> {
        if slots < 2 {
            return Err(Error::Domain(format!("PPM needs at least 2 slots, got {slots}")));
        }
        if !(mean_photons > 0.0) {
            return Err(Error::Domain(format!("mean photon number must be positive, got {mean_photons}")));
        }
        Ok(PpmConfig { slots, mean_photons })
    }

    pub fn slots(&self) -> u64 {
        self.slots
    }

    pub fn mean_photons(&self) -> f64 {
        self.mean_photons
    }

    pub fn erasure_probability(&self) -> f64 {
        (-self.mean_photons).exp()
    }
}

/// `(1 - e^{-m}) log M` per transmitted frame.
pub fn ppm_capacity(cfg: &PpmConfig, base: LogBase) -> f64 {
    let detected = -(-cfg.mean_photons).exp_m1();
    base.from_nats(detected * (cfg.slots as f64).ln())
}

/// Kullback-Leibler divergence `Σ p log(p/q)`.
pub fn divergence(p: &[f64], q: &[f64], base: LogBase) -> Result<f64> {
    check_distribution(p)?;
    check_distribution(q)?;
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch {
            expected: p.len(),
            found: q.len(),
        });
    }
    let d = divergence_nats(p, q);
    if d.is_infinite() {
        let i = p.iter().zip(q).position(|(a, b)| *a > 0.0 && *b == 0.0).unwrap();
        return Err(Error::AbsoluteContinuity(i));
    }
    Ok(base.from_nats(d))
}

fn divergence_nats(p: &[f64], q: &[f64]) -> f64 {
    let mut d = 0.0;
    for (a, b) in p.iter().zip(q) {
        if *a > 0.0 {
            if *b == 0.0 {
                return f64::INFINITY;
            }
            d += a * (a / b).ln();
        }
    }
    d.max(0.0)
}

/// Capacity per unit cost for a channel with one free input symbol.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitCostCapacity {
    /// Information per unit cost in the requested base; `+∞` when unbounded.
    pub value: f64,
    /// Input attaining the supremum.
    pub input: usize,
}

impl UnitCostCapacity {
    pub fn is_unbounded(&self) -> bool {
        self.value.is_infinite()
    }
}

/// `sup_x D(P_{Y|X=0} ‖ P_{Y|X=x}) / b[x]` over the costly inputs, where
/// input `0` here stands for the unique zero-cost symbol.
pub fn capacity_per_unit_cost(channel: &Dmc, costs: &[f64], base: LogBase) -> Result<UnitCostCapacity> {
    if costs.len() != channel.num_inputs() {
        return Err(Error::InvalidCosts(format!(
            "{} costs for {} inputs",
            costs.len(),
            channel.num_inputs()
        )));
    }
    if let Some(c) = costs.iter().find(|c| !(c.is_finite() && **c >= 0.0)) {
        return Err(Error::InvalidCosts(format!("cost {c} is not a finite nonnegative number")));
    }
    let free: Vec<usize> = (0..costs.len()).filter(|&i| costs[i] == 0.0).collect();
    let [zero] = free[..] else {
        return Err(Error::InvalidCosts(format!(
            "exactly one zero-cost input required, found {}",
            free.len()
        )));
    };
    let reference = channel.row(zero);
    let mut best: Option<UnitCostCapacity> = None;
    for x in (0..costs.len()).filter(|&x| x != zero) {
        let value = divergence_nats(reference, channel.row(x)) / costs[x];
        if best.is_none_or(|b| value > b.value) {
            best = Some(UnitCostCapacity { value, input: x });
        }
    }
    let Some(mut best) = best else {
        return Err(Error::InvalidCosts("no input with positive cost".into()));
    };
    best.value = base.from_nats(best.value);
    Ok(best)
}

/// Band-limited on-off keying with `γ₀ = 0`: a Z-channel with miss
/// probability `p = e^{-m}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandLimitedPoint {
    pub m: f64,
    pub p: f64,
    pub q: f64,
    pub capacity_nats: f64,
    pub nats_per_photon: f64,
}

/// Optimal "on" probability, the capacity per pulse and the efficiency
/// `C / (q m)` for mean photon number `m` per pulse.
pub fn band_limited_ook(m: f64) -> Result<BandLimitedPoint> {
    if !(m > 0.0 && m.is_finite()) {
        return Err(Error::Domain(format!("mean photon number must be positive and finite, got {m}")));
    }
    let p = (-m).exp();
    let one_minus_p = -(-m).exp_m1();
    // z = p^{p/(1-p)}, computed from ln p = -m
    let z = (-m * p / one_minus_p).exp();
    let q = z / (1.0 + z * one_minus_p);
    let on = q * one_minus_p;
    let capacity = -on * q.ln() - q * p * m - (1.0 - on) * (-on).ln_1p();
    Ok(BandLimitedPoint {
        m,
        p,
        q,
        capacity_nats: capacity,
        nats_per_photon: capacity / (q * m),
    })
}

/// One point of the cost-per-bit curve at `γ₀ = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostCurvePoint {
    pub gamma1: f64,
    pub capacity_nats_per_s: f64,
    pub q_on: f64,
    pub photons_per_bit: f64,
}

/// Background intensity used for the cost-per-bit curve.
pub const CURVE_GAMMA0: f64 = 1.0;

pub fn cost_curve_point(gamma1: f64) -> Result<CostCurvePoint> {
    let ip = IntensityPair::new(CURVE_GAMMA0, gamma1)?;
    Ok(CostCurvePoint {
        gamma1,
        capacity_nats_per_s: ook_capacity(&ip),
        q_on: ook_optimal_q(&ip),
        photons_per_bit: cost_per_bit(&ip),
    })
}

/// Tabulated curves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
pub enum CurveKind {
    /// Photons per bit against peak intensity `γ₁` at `γ₀ = 1`.
    #[serde(rename = "fig7")]
    #[value(name = "fig7")]
    CostPerBit,
    /// Nats per photon against mean photons per pulse, band-limited OOK.
    #[serde(rename = "fig8")]
    #[value(name = "fig8")]
    BandLimited,
}

impl FromStr for CurveKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fig7" => Ok(CurveKind::CostPerBit),
            "fig8" => Ok(CurveKind::BandLimited),
            _ => Err(Error::Domain(format!("unknown curve {s:?}; expected fig7 or fig8"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "points", rename_all = "lowercase")]
pub enum Curve {
    #[serde(rename = "fig7")]
    CostPerBit(Vec<CostCurvePoint>),
    #[serde(rename = "fig8")]
    BandLimited(Vec<BandLimitedPoint>),
}

/// Significant digits in CSV output.
pub const CSV_DIGITS: usize = 12;

impl Curve {
    pub fn len(&self) -> usize {
        match self {
            Curve::CostPerBit(v) => v.len(),
            Curve::BandLimited(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn header(&self) -> &'static str {
        match self {
            Curve::CostPerBit(_) => "x,capacity_nats,q_on,cost_per_bit",
            Curve::BandLimited(_) => "m,p,q,capacity_nats,nats_per_photon",
        }
    }

    pub fn to_csv(&self) -> String {
        let f = |v: f64| fmt_sig(v, CSV_DIGITS);
        let mut out = String::new();
        out.push_str(self.header());
        out.push('\n');
        match self {
            Curve::CostPerBit(points) => {
                for p in points {
                    let _ = writeln!(
                        out,
                        "{},{},{},{}",
                        f(p.gamma1),
                        f(p.capacity_nats_per_s),
                        f(p.q_on),
                        f(p.photons_per_bit)
                    );
                }
            }
            Curve::BandLimited(points) => {
                for p in points {
                    let _ = writeln!(
                        out,
                        "{},{},{},{},{}",
                        f(p.m),
                        f(p.p),
                        f(p.q),
                        f(p.capacity_nats),
                        f(p.nats_per_photon)
                    );
                }
            }
        }
        out
    }
}

/// Evaluates a curve on a strictly increasing grid.
pub fn emit_curve(kind: CurveKind, grid: &[f64]) -> Result<Curve> {
    if grid.is_empty() {
        return Err(Error::InvalidGrid("grid is empty".into()));
    }
    if let Some(w) = grid.windows(2).find(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidGrid(format!(
            "grid must be strictly increasing ({} then {})",
            w[0], w[1]
        )));
    }
    match kind {
        CurveKind::CostPerBit => grid
            .iter()
            .map(|&g| cost_curve_point(g))
            .collect::<Result<Vec<_>>>()
            .map(Curve::CostPerBit),
        CurveKind::BandLimited => grid
            .iter()
            .map(|&m| band_limited_ook(m))
            .collect::<Result<Vec<_>>>()
            .map(Curve::BandLimited),
    }
}

/// `points` values from `from` to `to`, evenly spaced or log-spaced.
pub fn grid(from: f64, to: f64, points: usize, log: bool) -> Result<Vec<f64>> {
    if points == 0 {
        return Err(Error::InvalidGrid("need at least one point".into()));
    }
    if !(from.is_finite() && to.is_finite()) || (points > 1 && !(from < to)) {
        return Err(Error::InvalidGrid(format!("bad range {from} .. {to}")));
    }
    if log && !(from > 0.0) {
        return Err(Error::InvalidGrid("log spacing needs a positive start".into()));
    }
    if points == 1 {
        return Ok(vec![from]);
    }
    let n = (points - 1) as f64;
    Ok((0..points)
        .map(|i| {
            let t = i as f64 / n;
            if i == points - 1 {
                to
            } else if log {
                (from.ln() + t * (to.ln() - from.ln())).exp()
            } else {
                from + t * (to - from)
            }
        })
        .collect())
}
