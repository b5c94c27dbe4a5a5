//! Machine-readable run reports and the built-in reproduction scenarios.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, LN_2};

use serde::{Deserialize, Serialize};

use crate::base::LogBase;
use crate::dmc::{
    attenuation_db, blahut_arimoto, capacity, compose_erasure, erasure_from_db, z_channel,
    InputDistribution,
};
use crate::error::Result;
use crate::holevo::{holevo_chi, maximize_holevo, noisy_orthogonal_capacity};
use crate::photon::{band_limited_ook, capacity_per_photon, cost_curve_point, ook_capacity, IntensityPair};
use crate::qstate::{density_from_ket, SignalEnsemble};
use crate::receivers::{
    helstrom_binary, measure_channel, pair_signals, polarization_filter, povm_binary_erasure,
    square_root_measurement, trine_povm_orthogonal, trine_povm_parallel, trine_states, SignalSet,
};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// One computed quantity, optionally compared against an expected value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultEntry {
    pub name: String,
    #[serde(with = "lossless_f64")]
    pub value: f64,
    pub unit: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pass: Option<bool>,
}

impl ResultEntry {
    pub fn new(name: impl Into<String>, value: f64, unit: impl Into<String>) -> Self {
        ResultEntry {
            name: name.into(),
            value,
            unit: unit.into(),
            expected: None,
            tolerance: None,
            pass: None,
        }
    }

    /// Attaches an expected value; passes when `|value - expected| ≤ tolerance`.
    pub fn expect(mut self, expected: f64, tolerance: f64) -> Self {
        self.expected = Some(expected);
        self.tolerance = Some(tolerance);
        self.pass = Some((self.value - expected).abs() <= tolerance);
        self
    }

    pub fn deviation(&self) -> Option<f64> {
        self.expected.map(|e| (self.value - e).abs())
    }
}

/// Non-finite values (unbounded capacities) are written as strings so the
/// report stays valid JSON and round-trips exactly.
mod lossless_f64 {
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else if v.is_nan() {
            s.serialize_str("nan")
        } else if *v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Num(f64),
        Str(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(v),
            Raw::Str(s) => match s.as_str() {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                other => Err(de::Error::custom(format!("unexpected value {other:?}"))),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub scenario: String,
    pub inputs: serde_json::Value,
    pub results: Vec<ResultEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub tool_version: String,
}

impl RunReport {
    pub fn new(scenario: impl Into<String>, inputs: serde_json::Value) -> Self {
        RunReport {
            scenario: scenario.into(),
            inputs,
            results: Vec::new(),
            seed: None,
            tool_version: TOOL_VERSION.into(),
        }
    }

    pub fn push(&mut self, entry: ResultEntry) {
        self.results.push(entry);
    }

    pub fn get(&self, name: &str) -> Option<&ResultEntry> {
        self.results.iter().find(|r| r.name == name)
    }

    /// Entries whose comparison failed.
    pub fn failures(&self) -> impl Iterator<Item = &ResultEntry> {
        self.results.iter().filter(|r| r.pass == Some(false))
    }

    pub fn all_pass(&self) -> bool {
        self.failures().next().is_none()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    /// Aligned text table; compared rows show the expected value and deviation.
    pub fn to_table(&self) -> String {
        let width = self.results.iter().map(|r| r.name.len()).max().unwrap_or(0);
        let mut out = String::new();
        for r in &self.results {
            let line = match (r.expected, r.pass) {
                (Some(e), Some(pass)) => format!(
                    "{:<width$}  computed {:>10}  expected {:>10}  |Δ| {:.1e}  {}",
                    r.name,
                    format_value(r.value),
                    format_value(e),
                    r.deviation().unwrap_or(0.0),
                    if pass { "pass" } else { "FAIL" }
                ),
                _ if r.unit == "count" => format!("{:<width$}  {}", r.name, r.value),
                _ => format!("{:<width$}  {} {}", r.name, format_value(r.value), r.unit),
            };
            out.push_str(line.trim_end());
            out.push('\n');
        }
        out
    }
}

/// Four decimals, with scientific notation for very small or large magnitudes.
pub fn format_value(v: f64) -> String {
    if !v.is_finite() {
        return crate::base::fmt_sig(v, 4);
    }
    let a = v.abs();
    if a != 0.0 && !(1e-3..1e6).contains(&a) {
        format!("{v:.4e}")
    } else {
        format!("{v:.4}")
    }
}

/// Every reference scenario, each compared against its expected value.
pub fn reproduce() -> Result<RunReport> {
    let mut r = RunReport::new("reproduce", serde_json::json!({}));
    let bits = LogBase::Bits;
    let d = 0.005;

    // two signals 45° apart measured with a horizontal filter
    let fig1 = SignalSet::from_angles(&[0.0, FRAC_PI_4])?;
    let z = measure_channel(&fig1, &polarization_filter(0.0))?;
    let cz = capacity(&z, bits)?;
    r.push(ResultEntry::new("fig1_z_channel", cz.capacity, "bit").expect(0.32, d));
    r.push(ResultEntry::new("fig1_q0", cz.optimal_input.probs()[0], "prob").expect(0.60, d));

    let h = helstrom_binary(&fig1.states()[0], &fig1.states()[1])?;
    r.push(ResultEntry::new("fig2_helstrom_p", h.channel.get(0, 1), "prob").expect(0.146, 0.001));
    r.push(ResultEntry::new("fig2_helstrom", capacity(&h.channel, bits)?.capacity, "bit").expect(0.40, d));

    let e = povm_binary_erasure(&fig1.states()[0], &fig1.states()[1])?;
    r.push(ResultEntry::new("fig3_erasure_eps", e.channel.get(0, 2), "prob").expect(FRAC_1_SQRT_2, 1e-9));
    r.push(ResultEntry::new("fig3_erasure", capacity(&e.channel, bits)?.capacity, "bit").expect(0.293, d));

    let pair45 = SignalEnsemble::pure(vec![0.5, 0.5], fig1.states())?;
    r.push(ResultEntry::new("pair45_CN", holevo_chi(&pair45, bits), "bit").expect(0.60, d));

    let trine = trine_states();
    let par = measure_channel(&trine, &trine_povm_parallel())?;
    let ort = measure_channel(&trine, &trine_povm_orthogonal())?;
    r.push(ResultEntry::new("fig4_trine_parallel", capacity(&par, bits)?.capacity, "bit").expect(0.33, d));
    r.push(ResultEntry::new("fig4_trine_orthogonal", capacity(&ort, bits)?.capacity, "bit").expect(0.585, d));
    let trine_rho: Vec<_> = trine.states().iter().map(density_from_ket).collect();
    let tn = maximize_holevo(&trine_rho, bits, 1e-10)?;
    r.push(ResultEntry::new("fig4_trine_CN", tn.capacity, "bit").expect(1.0, 1e-6));
    let sub = helstrom_binary(&trine.states()[0], &trine.states()[1])?;
    r.push(ResultEntry::new("fig4_binary_p", sub.channel.get(0, 1), "prob").expect(0.067, 0.001));
    r.push(ResultEntry::new("fig4_binary_helstrom", capacity(&sub.channel, bits)?.capacity, "bit").expect(0.65, d));

    let pairs = pair_signals(&trine)?;
    let srm = square_root_measurement(&pairs, &InputDistribution::uniform(3))?;
    let pc = measure_channel(&pairs, &srm)?;
    r.push(ResultEntry::new("fig5_pair_diag", pc.get(0, 0), "prob").expect(0.97, d));
    r.push(ResultEntry::new("fig5_pair_offdiag", pc.get(0, 1), "prob").expect(0.015, d));
    let cs = capacity(&pc, bits)?.capacity;
    r.push(ResultEntry::new("fig5_pair_CS", cs / 2.0, "bit/photon").expect(0.68, d));
    r.push(ResultEntry::new("fig5_pair_CS_total", cs, "bit").expect(1.37, 0.01));
    let pair_rho: Vec<_> = pairs.states().iter().map(density_from_ket).collect();
    let pn = maximize_holevo(&pair_rho, bits, 1e-10)?.capacity;
    r.push(ResultEntry::new("fig5_pair_CN", pn / 2.0, "bit/photon").expect(0.75, d));
    r.push(ResultEntry::new("fig5_pair_CN_total", pn, "bit").expect(1.50, d));

    let lossy = compose_erasure(&h.channel, 0.1)?;
    r.push(ResultEntry::new("loss_helstrom_eps0.1", capacity(&lossy, bits)?.capacity, "bit").expect(0.36, d));
    let ortho = SignalSet::from_angles(&[0.0, FRAC_PI_2])?;
    let oc = measure_channel(&ortho, &polarization_filter(0.0))?;
    let lossy = compose_erasure(&oc, erasure_from_db(1.0)?)?;
    r.push(ResultEntry::new("loss_orthogonal_1dB", capacity(&lossy, bits)?.capacity, "bit").expect(0.79, d));
    r.push(ResultEntry::new("loss_eps0.1_dB", attenuation_db(0.1)?, "dB").expect(0.46, d));

    let noisy = noisy_orthogonal_capacity(0.1, bits)?;
    r.push(ResultEntry::new("noise_d0.1_CN", noisy.von_neumann, "bit").expect(0.53, d));
    r.push(ResultEntry::new("noise_d0.1_CS", noisy.shannon, "bit").expect(0.53, d));
    r.push(ResultEntry::new("noise_d0.1_CN_minus_CS", noisy.von_neumann - noisy.shannon, "bit").expect(0.0, 1e-9));

    for g1 in [0.1, 1.0, 10.0, 100.0] {
        let ip = IntensityPair::new(0.0, g1)?;
        r.push(ResultEntry::new(format!("dark_free_C_g1={g1}"), ook_capacity(&ip), "nat/s").expect(g1 / std::f64::consts::E, 1e-9 * g1));
        let cph = capacity_per_photon(&ip);
        r.push(ResultEntry::new(format!("dark_free_Cph_g1={g1}"), cph / LN_2, "bit/photon").expect(1.0 / LN_2, 1e-9));
    }

    let tail = cost_curve_point(1e4)?.photons_per_bit;
    r.push(ResultEntry::new("fig7_cost_per_bit_g1=1e4", tail, "photon/bit").expect(LN_2, 0.01 * LN_2));
    let fig7_grid = [1.5, 2.0, 5.0, 10.0, 100.0, 1e3, 1e4];
    let costs = fig7_grid
        .iter()
        .map(|&g| cost_curve_point(g).map(|p| p.photons_per_bit))
        .collect::<Result<Vec<_>>>()?;
    let mono = costs.windows(2).all(|w| w[1] < w[0]);
    r.push(ResultEntry::new("fig7_monotone", f64::from(u8::from(mono)), "bool").expect(1.0, 0.0));

    let ms = [0.01, 0.1, 0.5, 1.0, 2.0, 5.0];
    let pts = ms.iter().map(|&m| band_limited_ook(m)).collect::<Result<Vec<_>>>()?;
    r.push(ResultEntry::new("fig8_Cph_m=0.01", pts[0].nats_per_photon, "nat/photon").expect(1.0, 0.01));
    let mono = pts.windows(2).all(|w| w[1].nats_per_photon < w[0].nats_per_photon);
    r.push(ResultEntry::new("fig8_monotone", f64::from(u8::from(mono)), "bool").expect(1.0, 0.0));
    let mut worst: f64 = 0.0;
    for p in &pts {
        let ba = blahut_arimoto(&z_channel(p.p)?, LogBase::Nats, 1e-13, 1_000_000)?;
        worst = worst.max((ba.optimal_input.probs()[1] - p.q).abs());
    }
    r.push(ResultEntry::new("fig8_q_vs_blahut_arimoto", worst, "prob").expect(0.0, 1e-6));

    Ok(r)
}
