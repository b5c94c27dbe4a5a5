//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::LN_2;

/// Poisson probabilities `P(N = n)` for `n = 0..len`.
pub fn poisson_pmf(lambda: f64, len: usize) -> Vec<f64> {
    let mut p = Vec::with_capacity(len);
    let mut term = (-lambda).exp();
    for n in 0..len {
        p.push(term);
        term *= lambda / (n + 1) as f64;
    }
    p
}

/// Smallest length whose upper tail mass at rate `lambda` is below `tail`.
pub fn truncation(lambda: f64, tail: f64) -> usize {
    let mut term = (-lambda).exp();
    let mut cdf = 0.0;
    let mut n = 0;
    while 1.0 - cdf >= tail || (n as f64) < lambda {
        cdf += term;
        n += 1;
        term *= lambda / n as f64;
        if n > 10_000 {
            break;
        }
    }
    n
}

/// Mutual information (nats) between an on/off input with `P(on) = q` and
/// the photon count in one slot of length `dt`.
pub fn slot_information(g0: f64, g1: f64, dt: f64, q: f64) -> f64 {
    let len = truncation(g1 * dt, 1e-14);
    let on = poisson_pmf(g1 * dt, len);
    let off = poisson_pmf(g0 * dt, len);
    let mut i = 0.0;
    for (a, b) in on.iter().zip(&off) {
        let r = q * a + (1.0 - q) * b;
        if *a > 0.0 {
            i += q * a * (a / r).ln();
        }
        if *b > 0.0 {
            i += (1.0 - q) * b * (b / r).ln();
        }
    }
    i
}

/// Golden-section maximum of a unimodal function on `[lo, hi]`.
pub fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, width: f64) -> (f64, f64) {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = hi - r * (hi - lo);
    let mut b = lo + r * (hi - lo);
    let (mut fa, mut fb) = (f(a), f(b));
    while hi - lo > width {
        if fa < fb {
            lo = a;
            a = b;
            fa = fb;
            b = lo + r * (hi - lo);
            fb = f(b);
        } else {
            hi = b;
            b = a;
            fb = fa;
            a = hi - r * (hi - lo);
            fa = f(a);
        }
    }
    let x = 0.5 * (lo + hi);
    (x, f(x))
}

/// Capacity (nats/s) and optimal "on" probability of the peak-limited
/// Poisson channel, computed by maximizing the slotted mutual information
/// for slots `h, h/2, h/4, h/8` and Richardson-extrapolating to zero width.
pub fn poisson_ook_oracle(g0: f64, g1: f64) -> (f64, f64) {
    let h = 0.05 / g1;
    let levels: Vec<(f64, f64)> = (0..4)
        .map(|k| {
            let dt = h / f64::from(1u32 << k);
            let (q, i) = golden_max(|q| slot_information(g0, g1, dt, q), 0.0, 1.0, 1e-11);
            (i / dt, q)
        })
        .collect();
    let extrapolate = |v: Vec<f64>| {
        let mut t = v;
        for j in 1..t.len() {
            let f = f64::from(1u32 << j);
            for k in (j..t.len()).rev() {
                t[k] = (f * t[k] - t[k - 1]) / (f - 1.0);
            }
        }
        *t.last().unwrap()
    };
    (
        extrapolate(levels.iter().map(|l| l.0).collect()),
        extrapolate(levels.iter().map(|l| l.1).collect()),
    )
}

/// Square-root measurement on equiprobable symmetric pure states:
/// `P(j|i) = |(G^{1/2})ⱼᵢ|² ` for Gram matrix `G = (1-c)I + cJ` on `n` states
/// with real pairwise overlap `c`. Returns (diagonal, off-diagonal).
pub fn symmetric_srm(n: usize, c: f64) -> (f64, f64) {
    // eigenvalues: 1 + (n-1)c on the all-ones vector, 1 - c elsewhere
    let big = (1.0 + (n as f64 - 1.0) * c).sqrt();
    let small = (1.0 - c).sqrt();
    let off = (big - small) / n as f64;
    let diag = small + off;
    (diag * diag, off * off)
}

pub fn binary_entropy_bits(p: f64) -> f64 {
    let h = |x: f64| if x <= 0.0 { 0.0 } else { -x * x.log2() };
    h(p) + h(1.0 - p)
}

/// Mutual information in bits of a channel `w` at input `q`, computed from scratch.
pub fn mutual_information_bits(q: &[f64], w: &[Vec<f64>]) -> f64 {
    let outputs = w[0].len();
    let r: Vec<f64> = (0..outputs).map(|j| q.iter().zip(w).map(|(qi, row)| qi * row[j]).sum()).collect();
    let mut i = 0.0;
    for (qi, row) in q.iter().zip(w) {
        for (p, rj) in row.iter().zip(&r) {
            if *qi > 0.0 && *p > 0.0 {
                i += qi * p * (p / rj).log2();
            }
        }
    }
    i
}

/// Binary-input capacity in bits by golden section on `P(input 1)`.
pub fn binary_capacity_bits(w: &[Vec<f64>]) -> (f64, f64) {
    let (q, c) = golden_max(|q| mutual_information_bits(&[1.0 - q, q], w), 0.0, 1.0, 1e-12);
    (c, q)
}

pub const BITS_PER_NAT: f64 = 1.0 / LN_2;
