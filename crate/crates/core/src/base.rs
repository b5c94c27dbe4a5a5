use serde::{Deserialize, Serialize};

/// Logarithm base used when reporting entropies and capacities.
///
/// Everything is computed in nats internally and converted on output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum LogBase {
    #[default]
    Bits,
    Nats,
}

impl LogBase {
    /// Converts a quantity measured in nats into this base.
    pub fn from_nats(self, nats: f64) -> f64 {
        match self {
            LogBase::Bits => nats / std::f64::consts::LN_2,
            LogBase::Nats => nats,
        }
    }

    /// Converts a quantity measured in this base into nats.
    pub fn to_nats(self, value: f64) -> f64 {
        match self {
            LogBase::Bits => value * std::f64::consts::LN_2,
            LogBase::Nats => value,
        }
    }

    pub fn unit(self) -> &'static str {
        match self {
            LogBase::Bits => "bit",
            LogBase::Nats => "nat",
        }
    }
}

/// `-x ln x` with the convention `0 ln 0 = 0`.
pub(crate) fn neg_xlnx(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -x * x.ln()
    }
}

/// Tolerance on the total mass of a probability vector.
pub const DISTRIBUTION_TOLERANCE: f64 = 1e-12;

pub(crate) fn check_distribution(p: &[f64]) -> crate::Result<()> {
    use crate::Error;
    if p.is_empty() {
        return Err(Error::InvalidDistribution("empty".into()));
    }
    if let Some((i, x)) = p
        .iter()
        .enumerate()
        .find(|(_, x)| !(x.is_finite() && **x >= 0.0))
    {
        return Err(Error::InvalidDistribution(format!(
            "entry {i} is {x}, expected a nonnegative number"
        )));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > DISTRIBUTION_TOLERANCE {
        return Err(Error::InvalidDistribution(format!(
            "entries sum to {total}, expected 1"
        )));
    }
    Ok(())
}

/// `%g`-style formatting with `sig` significant digits.
pub(crate) fn fmt_sig(v: f64, sig: usize) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return if v.is_nan() { "nan".into() } else if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{:.*e}", sig - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let trim = |s: &str| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s.to_string()
        }
    };
    if (-5..sig as i32).contains(&exp) {
        trim(&format!("{:.*}", (sig as i32 - 1 - exp).max(0) as usize, v))
    } else {
        format!("{}e{exp}", trim(mantissa))
    }
}
