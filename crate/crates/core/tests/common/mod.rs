#![allow(dead_code)]

//! Brute-force scans used as independent references for the threshold
//! functions.

/// Last point of `lo, lo + step, ..., hi` where `violates` holds.
fn last_violation(violates: impl Fn(f64) -> bool, lo: f64, hi: f64, step: f64) -> Option<f64> {
    let n = ((hi - lo) / step) as u64;
    (0..=n).rev().map(|i| lo + i as f64 * step).find(|&z| violates(z))
}

const FINE: f64 = 1.0 / 4096.0;

fn scan(violates: impl Fn(f64) -> bool + Copy, start: f64, cap: f64) -> Option<f64> {
    if cap - start <= 2000.0 {
        return last_violation(violates, start, cap, FINE);
    }
    // integer pass, then a fine pass over the unit interval after the last
    // violating integer
    let k = (start.ceil() as u64..=cap as u64).rev().find(|&k| violates(k as f64))?;
    last_violation(violates, k as f64, k as f64 + 1.0, FINE)
}

pub fn omega_scan(x: f64) -> u64 {
    let violates = move |z: f64| z < x * z.ln();
    let cap = 4.0 * x * x.max(2.0).ln() + 10.0;
    match scan(violates, 1.0, cap) {
        Some(v) => v.floor() as u64 + 1,
        None => 1,
    }
}

pub fn omega2_scan(x: f64) -> u64 {
    let violates = move |z: f64| z < x * z.ln().ln();
    let cap = 4.0 * x * x.max(3.0).ln() + 10.0;
    match scan(violates, 3.0, cap) {
        Some(v) => (v.floor() as u64 + 1).max(3),
        None => 3,
    }
}

pub const OMEGA_POINTS: [f64; 8] = [0.5, 1.0, std::f64::consts::E, 5.0, 10.0, 16.0, 100.0, 1e4];
