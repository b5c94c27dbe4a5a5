//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Every tolerance check compares the library against a value produced
//! independently here (closed forms, brute-force optimization, Gram-matrix
//! square roots, Poisson counting) as well as the published figure.

mod common;

use std::f64::consts::{E, FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, LN_2, PI};
use std::process::ExitCode;
use std::time::Instant;

use common::*;
use quantum_capacity::dmc::{
    attenuation_db, blahut_arimoto, bsc, bsc_capacity, capacity, compose_erasure, erasure_capacity, erasure_channel,
    erasure_from_db, z_channel, z_channel_capacity_closed_form, Dmc, InputDistribution,
};
use quantum_capacity::holevo::{apply_polarization_noise, holevo_chi, maximize_holevo};
use quantum_capacity::photon::{
    band_limited_ook, capacity_per_photon, cost_curve_point, emit_curve, grid, ook_capacity, ook_optimal_q, Curve,
    CurveKind, IntensityPair,
};
use quantum_capacity::qstate::{density_from_ket, DensityMatrix, SignalEnsemble};
use quantum_capacity::receivers::{
    helstrom_binary, measure_channel, pair_signals, polarization_filter, povm_binary_erasure, sample_outcomes,
    square_root_measurement, trine_povm_orthogonal, trine_povm_parallel, trine_states, Povm, SignalSet,
};
use quantum_capacity::{LogBase, Result};

const BITS: LogBase = LogBase::Bits;
const D: f64 = 0.005;

#[derive(Default)]
struct Checks {
    items: Vec<(String, bool)>,
}

impl Checks {
    fn close(&mut self, what: &str, got: f64, want: f64, tol: f64) {
        let ok = (got - want).abs() <= tol;
        self.items.push((format!("{what} {got:.6} vs {want:.6} ± {tol:.0e}"), ok));
    }

    fn holds(&mut self, what: &str, ok: bool) {
        self.items.push((what.to_string(), ok));
    }

    fn passed(&self) -> bool {
        !self.items.is_empty() && self.items.iter().all(|(_, ok)| *ok)
    }
}

fn rho(signals: &SignalSet) -> Vec<DensityMatrix> {
    signals.states().iter().map(density_from_ket).collect()
}

fn symmetric_capacity_bits(row: &[f64]) -> f64 {
    (row.len() as f64).log2() + row.iter().filter(|p| **p > 0.0).map(|p| p * p.log2()).sum::<f64>()
}

fn c1_filter_z_channel(c: &mut Checks) -> Result<()> {
    let s = SignalSet::from_angles(&[0.0, FRAC_PI_4])?;
    let z = measure_channel(&s, &polarization_filter(0.0))?;
    c.close("P(0|1)", z.get(1, 0), 0.5, 1e-12);
    let r = capacity(&z, BITS)?;
    let (oc, oq) = binary_capacity_bits(&[vec![1.0, 0.0], vec![0.5, 0.5]]);
    c.close("C vs oracle", r.capacity, oc, 1e-9);
    c.close("C", r.capacity, 0.32, D);
    c.close("Q*(0)", r.optimal_input.probs()[0], 0.60, D);
    c.close("Q*(1)", r.optimal_input.probs()[1], 0.40, D);
    c.close("Q*(1) vs oracle", r.optimal_input.probs()[1], oq, 1e-4);
    Ok(())
}

fn c2_helstrom(c: &mut Checks) -> Result<()> {
    let s = SignalSet::from_angles(&[0.0, FRAC_PI_4])?;
    let h = helstrom_binary(&s.states()[0], &s.states()[1])?;
    let p = h.channel.get(0, 1);
    let oracle = 0.5 * (1.0 - (1.0 - 0.5f64).sqrt());
    c.close("p vs oracle", p, oracle, 1e-12);
    c.close("p", p, 0.146, 0.001);
    c.holds("channel symmetric", (h.channel.get(1, 0) - p).abs() < 1e-12);
    let cap = capacity(&h.channel, BITS)?.capacity;
    c.close("C vs 1-H(p)", cap, 1.0 - binary_entropy_bits(oracle), 1e-9);
    c.close("C", cap, 0.40, D);
    Ok(())
}

fn c3_erasure(c: &mut Checks) -> Result<()> {
    let s = SignalSet::from_angles(&[0.0, FRAC_PI_4])?;
    let e = povm_binary_erasure(&s.states()[0], &s.states()[1])?;
    c.close("eps", e.channel.get(0, 2), FRAC_1_SQRT_2, 1e-9);
    c.close("eps (input 1)", e.channel.get(1, 2), FRAC_1_SQRT_2, 1e-9);
    let cap = capacity(&e.channel, BITS)?.capacity;
    c.close("C vs 1-eps", cap, 1.0 - FRAC_1_SQRT_2, 1e-9);
    c.close("C", cap, 0.293, D);
    Ok(())
}

fn c4_pair_holevo(c: &mut Checks) -> Result<()> {
    let s = SignalSet::from_angles(&[0.0, FRAC_PI_4])?;
    let chi = holevo_chi(&SignalEnsemble::pure(vec![0.5, 0.5], s.states())?, BITS);
    // average state has eigenvalues (1 ± cos 45°)/2
    let oracle = binary_entropy_bits(0.5 * (1.0 + FRAC_1_SQRT_2));
    c.close("chi vs oracle", chi, oracle, 1e-12);
    c.close("chi", chi, 0.60, D);
    let best = maximize_holevo(&rho(&s), BITS, 1e-10)?;
    c.close("maximizing prior", best.optimal_priors.probs()[0], 0.5, 1e-4);
    Ok(())
}

fn c5_trine(c: &mut Checks) -> Result<()> {
    let t = trine_states();
    let par = measure_channel(&t, &trine_povm_parallel())?;
    let ort = measure_channel(&t, &trine_povm_orthogonal())?;
    // (2/3)|<s_j|s_k>|^2 and (2/3)|<s_j^perp|s_k>|^2
    c.close("parallel diag", par.get(0, 0), 2.0 / 3.0, 1e-12);
    c.close("orthogonal off", ort.get(0, 1), 0.5, 1e-12);
    let cp = capacity(&par, BITS)?.capacity;
    let co = capacity(&ort, BITS)?.capacity;
    c.close("parallel C vs oracle", cp, symmetric_capacity_bits(&[2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0]), 1e-9);
    c.close("parallel C", cp, 0.33, D);
    c.close("orthogonal C vs oracle", co, symmetric_capacity_bits(&[0.0, 0.5, 0.5]), 1e-9);
    c.close("orthogonal C", co, 0.585, D);
    let cn = maximize_holevo(&rho(&t), BITS, 1e-10)?.capacity;
    c.close("C_N", cn, 1.0, 1e-6);
    let sub = helstrom_binary(&t.states()[0], &t.states()[1])?;
    let p = sub.channel.get(0, 1);
    let oracle = 0.5 * (1.0 - (1.0 - 0.25f64).sqrt());
    c.close("binary p vs oracle", p, oracle, 1e-12);
    c.close("binary p", p, 0.067, 0.001);
    let cb = capacity(&sub.channel, BITS)?.capacity;
    c.close("binary C vs 1-H(p)", cb, 1.0 - binary_entropy_bits(oracle), 1e-9);
    c.close("binary C", cb, 0.65, D);
    Ok(())
}

fn c6_pairs(c: &mut Checks) -> Result<()> {
    let pairs = pair_signals(&trine_states())?;
    let srm = square_root_measurement(&pairs, &InputDistribution::uniform(3))?;
    let ch = measure_channel(&pairs, &srm)?;
    // pair overlaps are (-1/2)^2 = 1/4 for every distinct pair
    let (diag, off) = symmetric_srm(3, 0.25);
    c.close("diag vs Gram oracle", ch.get(0, 0), diag, 1e-10);
    c.close("off vs Gram oracle", ch.get(0, 1), off, 1e-10);
    c.close("diag", ch.get(0, 0), 0.97, D);
    c.close("off", ch.get(1, 0), 0.015, D);
    let cs = capacity(&ch, BITS)?.capacity;
    c.close("C_S vs oracle", cs, symmetric_capacity_bits(&[diag, off, off]), 1e-9);
    c.close("C_S", cs, 1.37, 0.01);
    c.close("C_S per photon", cs / 2.0, 0.68, D);
    // uniform-prior average state has the Gram spectrum / 3
    let lam: [f64; 3] = [(1.0 + 2.0 * 0.25) / 3.0, 0.75 / 3.0, 0.75 / 3.0];
    let oracle: f64 = lam.iter().map(|l| -l * l.log2()).sum();
    let cn = maximize_holevo(&rho(&pairs), BITS, 1e-10)?.capacity;
    c.close("C_N vs oracle", cn, oracle, 1e-6);
    c.close("C_N", cn, 1.50, D);
    c.close("C_N per photon", cn / 2.0, 0.75, D);
    Ok(())
}

fn c7_loss(c: &mut Checks) -> Result<()> {
    let p = 0.5 * (1.0 - 0.5f64.sqrt());
    let lossy = compose_erasure(&bsc(p)?, 0.1)?;
    let cl = capacity(&lossy, BITS)?.capacity;
    c.close("BSC+erasure vs (1-eps)(1-H)", cl, 0.9 * (1.0 - binary_entropy_bits(p)), 1e-9);
    c.close("BSC+erasure", cl, 0.36, D);
    let ortho = SignalSet::from_angles(&[0.0, FRAC_PI_2])?;
    let clean = measure_channel(&ortho, &polarization_filter(0.0))?;
    let eps = erasure_from_db(1.0)?;
    c.close("eps at 1 dB", eps, 1.0 - 10f64.powf(-0.1), 1e-12);
    let co = capacity(&compose_erasure(&clean, eps)?, BITS)?.capacity;
    c.close("orthogonal 1 dB", co, 0.79, D);
    let db = attenuation_db(0.1)?;
    c.close("A(eps=0.1) vs -10log10(0.9)", db, -10.0 * 0.9f64.log10(), 1e-12);
    c.close("A(eps=0.1)", db, 0.46, D);
    Ok(())
}

fn c8_noise(c: &mut Checks) -> Result<()> {
    let d = 0.1;
    let states = vec![apply_polarization_noise(0.0, d)?, apply_polarization_noise(FRAC_PI_2, d)?];
    let cn = maximize_holevo(&states, BITS, 1e-12)?.capacity;
    let cs = blahut_arimoto(&bsc(d)?, BITS, 1e-12, 1_000_000)?.capacity;
    c.close("C_N", cn, 0.53, D);
    c.close("C_S", cs, 0.53, D);
    c.close("C_N - C_S", cn - cs, 0.0, 1e-9);
    c.close("C_S vs 1-H(d)", cs, 1.0 - binary_entropy_bits(d), 1e-9);
    Ok(())
}

fn c9_dark_free(c: &mut Checks) -> Result<()> {
    for g1 in [0.1, 1.0, 10.0, 100.0] {
        let ip = IntensityPair::new(0.0, g1)?;
        c.close(&format!("C(g1={g1})/g1"), ook_capacity(&ip) / g1, 1.0 / E, 1e-12);
        c.close(&format!("C_ph(g1={g1}) bit"), capacity_per_photon(&ip) / LN_2, 1.44, D);
        c.close(&format!("C_ph(g1={g1}) 1/ln2"), capacity_per_photon(&ip) / LN_2, 1.0 / LN_2, 1e-9);
    }
    let (oc, _) = poisson_ook_oracle(0.0, 10.0);
    c.close("counting oracle g1=10", oc, 10.0 / E, 1e-7);
    Ok(())
}

fn c10_cost_per_bit(c: &mut Checks) -> Result<()> {
    let tail = cost_curve_point(1e4)?.photons_per_bit;
    c.close("cost/bit at 1e4", tail, LN_2, 0.01 * LN_2);
    let g = grid(1.1, 1e4, 60, true)?;
    let Curve::CostPerBit(points) = emit_curve(CurveKind::CostPerBit, &g)? else {
        c.holds("curve kind", false);
        return Ok(());
    };
    c.holds("cost/bit strictly decreasing", points.windows(2).all(|w| w[1].photons_per_bit < w[0].photons_per_bit));
    c.holds("cost/bit above ln 2", points.iter().all(|p| p.photons_per_bit >= LN_2 - 1e-9));
    // signal photons per second over bits per second, from the counting oracle
    let (cap, q) = poisson_ook_oracle(1.0, 100.0);
    let ip = IntensityPair::new(1.0, 100.0)?;
    let photons = q * 99.0;
    c.close("cost/bit g1=100 vs oracle", cost_curve_point(100.0)?.photons_per_bit, photons / (cap / LN_2), 1e-6);
    c.close("q g1=100 vs oracle", ook_optimal_q(&ip), q, 1e-3);
    Ok(())
}

fn c11_band_limited(c: &mut Checks) -> Result<()> {
    let ms = [0.01, 0.1, 0.5, 1.0, 2.0, 5.0];
    let pts = ms.iter().map(|&m| band_limited_ook(m)).collect::<Result<Vec<_>>>()?;
    c.close("c_ph(0.01)", pts[0].nats_per_photon, 1.0, 0.01);
    c.holds("c_ph strictly decreasing", pts.windows(2).all(|w| w[1].nats_per_photon < w[0].nats_per_photon));
    for p in &pts {
        let z = z_channel(p.p)?;
        let ba = blahut_arimoto(&z, LogBase::Nats, 1e-13, 1_000_000)?;
        c.close(&format!("q(m={}) vs BA", p.m), p.q, ba.optimal_input.probs()[1], 1e-6);
        let (oc, oq) = binary_capacity_bits(z.transition());
        c.close(&format!("C(m={}) vs golden", p.m), p.capacity_nats, oc * LN_2, 1e-9);
        c.close(&format!("q(m={}) vs golden", p.m), p.q, oq, 1e-5);
    }
    Ok(())
}

fn completeness_and_rows(c: &mut Checks, what: &str, povm: &Povm, ch: &Dmc) {
    c.holds(&format!("{what} completeness"), povm.completeness_error() < 1e-10);
    let ok = ch
        .transition()
        .iter()
        .all(|row| row.iter().all(|p| *p >= 0.0) && (row.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    c.holds(&format!("{what} stochastic"), ok);
}

fn within_three_sigma(c: &mut Checks, what: &str, ch: &Dmc, seed: u64) -> Result<()> {
    let n = 1_000_000u64;
    let mut ok = true;
    for k in 0..ch.num_inputs() {
        let h = sample_outcomes(ch, k, n, seed + k as u64)?;
        for (f, p) in h.frequencies().iter().zip(ch.row(k)) {
            let sigma = (p * (1.0 - p) / n as f64).sqrt();
            ok &= (f - p).abs() <= 3.0 * sigma;
        }
    }
    c.holds(&format!("{what} Monte Carlo within 3 sigma"), ok);
    Ok(())
}

fn c12_properties(c: &mut Checks) -> Result<()> {
    let mut schemes: Vec<(String, SignalSet, Povm)> = Vec::new();
    for deg in [10.0, 30.0, 45.0, 60.0, 80.0] {
        let s = SignalSet::from_angles(&[0.0, deg * PI / 180.0])?;
        let (a, b) = (s.states()[0].clone(), s.states()[1].clone());
        schemes.push((format!("filter {deg}"), s.clone(), polarization_filter(0.0)));
        schemes.push((format!("tilted filter {deg}"), s.clone(), polarization_filter(deg * PI / 360.0)));
        schemes.push((format!("helstrom {deg}"), s.clone(), helstrom_binary(&a, &b)?.povm));
        schemes.push((format!("erasure {deg}"), s.clone(), povm_binary_erasure(&a, &b)?.povm));
    }
    let t = trine_states();
    schemes.push(("trine parallel".into(), t.clone(), trine_povm_parallel()));
    schemes.push(("trine orthogonal".into(), t.clone(), trine_povm_orthogonal()));
    let sub = t.subset(&[0, 1])?;
    schemes.push(("trine binary".into(), sub.clone(), helstrom_binary(&sub.states()[0], &sub.states()[1])?.povm));
    let pairs = pair_signals(&t)?;
    let srm = square_root_measurement(&pairs, &InputDistribution::uniform(3))?;
    schemes.push(("pair srm".into(), pairs, srm));

    let mut dominance = true;
    for (what, s, povm) in &schemes {
        let ch = measure_channel(s, povm)?;
        completeness_and_rows(c, what, povm, &ch);
        let cs = capacity(&ch, BITS)?.capacity;
        let cn = maximize_holevo(&rho(s), BITS, 1e-10)?.capacity;
        dominance &= cs <= cn + 1e-9;
    }
    c.holds("C_S <= C_N for every receiver", dominance);

    let mut closed = 0.0f64;
    for i in 0..=20 {
        let p = f64::from(i) / 20.0 * 0.98;
        let z = capacity(&z_channel(p)?, BITS)?.capacity;
        closed = closed.max((z - z_channel_capacity_closed_form(p, BITS)?.capacity).abs());
        closed = closed.max((capacity(&bsc(p)?, BITS)?.capacity - bsc_capacity(p, BITS)?).abs());
        for m in 2..5 {
            let e = capacity(&erasure_channel(m, p)?, BITS)?.capacity;
            closed = closed.max((e - erasure_capacity(m, p, BITS)?).abs());
        }
    }
    c.close("BA vs closed forms, worst", closed, 0.0, 1e-6);

    let mut worst = 0.0f64;
    for g0 in [0.1, 0.5, 1.0, 2.0, 5.0] {
        for r in [1.5, 3.0, 10.0, 30.0, 100.0] {
            let (oc, _) = poisson_ook_oracle(g0, g0 * r);
            let got = ook_capacity(&IntensityPair::new(g0, g0 * r)?);
            worst = worst.max((got - oc).abs() / oc);
        }
    }
    c.close("OOK vs Poisson counting, worst rel", worst, 0.0, 1e-6);

    let fig1 = SignalSet::from_angles(&[0.0, FRAC_PI_4])?;
    let (a, b) = (fig1.states()[0].clone(), fig1.states()[1].clone());
    within_three_sigma(c, "Z(1/2)", &measure_channel(&fig1, &polarization_filter(0.0))?, 1)?;
    within_three_sigma(c, "helstrom", &helstrom_binary(&a, &b)?.channel, 11)?;
    within_three_sigma(c, "erasure", &povm_binary_erasure(&a, &b)?.channel, 21)?;
    within_three_sigma(c, "trine parallel", &measure_channel(&t, &trine_povm_parallel())?, 31)?;
    Ok(())
}

fn main() -> ExitCode {
    type Criterion = fn(&mut Checks) -> Result<()>;
    let criteria: [(&str, Criterion); 12] = [
        ("filter receiver gives Z(1/2)", c1_filter_z_channel),
        ("Helstrom receiver gives BSC", c2_helstrom),
        ("unambiguous receiver gives erasure channel", c3_erasure),
        ("Holevo capacity of the 45 degree pair", c4_pair_holevo),
        ("trine receivers and binary sub-channel", c5_trine),
        ("photon-pair square-root measurement", c6_pairs),
        ("attenuation as erasure", c7_loss),
        ("depolarizing noise on orthogonal signals", c8_noise),
        ("dark-free photon counting", c9_dark_free),
        ("cost per bit curve", c10_cost_per_bit),
        ("band-limited on-off keying", c11_band_limited),
        ("property suite", c12_properties),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut checks = Checks::default();
        let outcome = f(&mut checks);
        let ok = outcome.is_ok() && checks.passed();
        println!(
            "criterion {:>2}: {:<45} {} ({} checks, {:.1}s)",
            i + 1,
            name,
            if ok { "PASS" } else { "FAIL" },
            checks.items.len(),
            start.elapsed().as_secs_f64()
        );
        if !ok {
            failed += 1;
            if let Err(e) = outcome {
                println!("    error: {e}");
            }
            for (what, _) in checks.items.iter().filter(|(_, ok)| !ok) {
                println!("    failed: {what}");
            }
        }
    }
    println!("{}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
