//! Threshold functions `omega(x)` and `omega2(x)`.
//!
//! `omega(x)` is the least natural `y` with `z >= x ln z` for every real
//! `z >= y`; `omega2(x)` is the least natural `y > e` with
//! `z >= x ln ln z` for every real `z >= y`. Both are found by bisecting
//! for the larger root of the boundary equation and then checking the
//! integers on either side of it.

use crate::error::{Error, Result};

fn check(x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("threshold argument must be positive and finite, got {x}")))
    }
}

/// Larger root of an increasing-beyond-`start` function `g` with
/// `g(start) < 0`.
fn larger_root(g: impl Fn(f64) -> f64, start: f64) -> f64 {
    let mut lo = start;
    let mut hi = 2.0 * start.max(1.0);
    while g(hi) < 0.0 {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

/// Rounds the root up and fixes the result so that `g(y) >= 0` holds and
/// `g(y - 1) < 0`. `floor` must not exceed the answer.
fn settle(g: impl Fn(f64) -> f64, root: f64, floor: u64) -> u64 {
    let mut y = (root.ceil() as u64).max(floor);
    while g(y as f64) < 0.0 {
        y += 1;
    }
    while y > floor && g((y - 1) as f64) >= 0.0 {
        y -= 1;
    }
    y
}

pub fn omega(x: f64) -> Result<u64> {
    check(x)?;
    if x <= std::f64::consts::E {
        return Ok(1);
    }
    let g = |z: f64| z - x * z.ln();
    // g decreases up to z = x and increases after
    let root = larger_root(g, x);
    Ok(settle(g, root, x.floor() as u64 + 1))
}

pub fn omega2(x: f64) -> Result<u64> {
    check(x)?;
    let h = |z: f64| z - x * z.ln().ln();
    // h is minimized where z ln z = x; to the right of that it increases
    let z0 = if x > 3.0 * 3f64.ln() {
        larger_root(|z: f64| z * z.ln() - x, std::f64::consts::E)
    } else {
        3.0
    };
    if h(z0) >= 0.0 && h(3.0) >= 0.0 {
        return Ok(3);
    }
    let root = larger_root(h, z0);
    Ok(settle(h, root, (z0.floor() as u64 + 1).max(3)))
}

/// `max(omega(8 sigma2 alpha K / eps^2), omega(8 sigma2 alpha K / delta_min^2))`.
pub fn omega_star(epsilon: f64, delta_min: f64, alpha: f64, arms: usize, sigma2: f64) -> Result<u64> {
    for (name, v) in [("epsilon", epsilon), ("delta_min", delta_min), ("alpha", alpha), ("sigma2", sigma2)] {
        if !(v > 0.0) {
            return Err(Error::InvalidArgument(format!("{name} must be positive, got {v}")));
        }
    }
    let c = 8.0 * sigma2 * alpha * arms as f64;
    // an unbounded margin contributes omega(0+) = 1
    let term = |v: f64| if v.is_infinite() { Ok(1) } else { omega(c / (v * v)) };
    Ok(term(epsilon)?.max(term(delta_min)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        assert_eq!(omega(1.0).unwrap(), 1);
        assert_eq!(omega(10.0).unwrap(), 36);
        assert_eq!(omega(100.0).unwrap(), 648);
        assert_eq!(omega2(1.0).unwrap(), 3);
        assert_eq!(omega2(20.0).unwrap(), 23);
    }

    #[test]
    fn rejects_nonpositive() {
        assert!(omega(0.0).is_err());
        assert!(omega(-1.0).is_err());
        assert!(omega2(f64::NAN).is_err());
    }

    #[test]
    fn omega2_at_least_three() {
        for x in [0.01, 0.5, 1.0, 3.0, 3.3, 10.0, 31.0, 40.0, 1e3] {
            assert!(omega2(x).unwrap() >= 3);
        }
    }

    #[test]
    fn omega_star_examples() {
        assert_eq!(omega_star(2.0, 2.0, 4.0, 2, 1.0).unwrap(), omega(16.0).unwrap());
        assert_eq!(omega_star(0.1, 0.5, 4.0, 2, 1.0).unwrap(), omega(6400.0).unwrap());
        assert!(omega_star(0.0, 1.0, 4.0, 2, 1.0).is_err());
        assert_eq!(omega_star(f64::INFINITY, 2.0, 4.0, 2, 1.0).unwrap(), omega(16.0).unwrap());
    }
}
