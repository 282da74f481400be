//! Grid-based analysis of individual parameters: the finite-regret margin,
//! the easy / ambiguous / hard partition and the ambiguity ratio.
//!
//! Interval spaces are scanned on a uniform grid joined with every
//! breakpoint of the mean functions. Equalities between means are judged
//! with a tolerance of `1e-9` times the spread of all means on the scan, so
//! results depend on the scan resolution.

use crate::error::{Error, Result};
use crate::problem::{argmax, ParameterSpace, StructuredBandit, Theta};

const RELATIVE_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EpsilonOutcome {
    /// Margin found. `f64::INFINITY` when no scanned parameter changes the
    /// optimal arm.
    Found(f64),
    /// Every margin is defeated at scan resolution.
    Absent,
    /// The optimal arm is not unique at the queried parameter.
    Degenerate,
}

impl EpsilonOutcome {
    pub fn value(self) -> Option<f64> {
        match self {
            EpsilonOutcome::Found(e) => Some(e),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ThetaClass {
    Easy { epsilon: f64 },
    Ambiguous,
    Hard { witness: Theta },
}

impl ThetaClass {
    pub fn label(&self) -> &'static str {
        match self {
            ThetaClass::Easy { .. } => "easy",
            ThetaClass::Ambiguous => "ambiguous",
            ThetaClass::Hard { .. } => "hard",
        }
    }
}

struct Scan {
    points: Vec<Theta>,
    means: Vec<Vec<f64>>,
    step: f64,
    tol: f64,
}

fn scan(bandit: &StructuredBandit, resolution: usize) -> Result<Scan> {
    let points: Vec<Theta> = match bandit.space() {
        ParameterSpace::Finite { .. } => bandit.space().enumerate()?,
        ParameterSpace::Interval { .. } => {
            let mut xs = bandit.space().grid_with(resolution)?;
            xs.extend(bandit.decomposition().expect("interval decomposition").points.iter().copied());
            xs.sort_by(f64::total_cmp);
            xs.dedup();
            xs.into_iter().map(Theta::Real).collect()
        }
        ParameterSpace::Product { .. } => {
            return Err(Error::Unsupported("parameter analysis needs a finite or interval space".into()))
        }
    };
    let means: Vec<Vec<f64>> = points.iter().map(|p| bandit.means_at(p)).collect::<Result<_>>()?;
    let (lo, hi) = means.iter().flatten().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    let step = match bandit.space() {
        ParameterSpace::Interval { lower, upper, .. } => (upper - lower) / (resolution.max(2) - 1) as f64,
        _ => 0.0,
    };
    Ok(Scan { points, means, step, tol: RELATIVE_TOLERANCE * (hi - lo) })
}

fn strictly_optimal(means: &[f64], arm: usize, tol: f64) -> bool {
    means.iter().enumerate().all(|(j, &m)| j == arm || means[arm] > m + tol)
}

fn default_resolution(bandit: &StructuredBandit) -> usize {
    match bandit.space() {
        ParameterSpace::Interval { resolution, .. } => *resolution,
        _ => 2,
    }
}

/// Largest margin `eps` such that every scanned `theta` whose optimal-arm
/// mean lies within `eps` of its value at `theta_star` keeps that arm
/// strictly optimal. The margin is the distance to the nearest scanned
/// parameter that breaks strict optimality; it counts as found only when
/// it exceeds what the grid spacing alone could hide.
pub fn finite_regret_epsilon(
    bandit: &StructuredBandit,
    theta_star: &Theta,
    scan_resolution: usize,
) -> Result<EpsilonOutcome> {
    let star = bandit.means_at(theta_star)?;
    let best = argmax(&star);
    if !strictly_optimal(&star, best, 0.0) {
        return Ok(EpsilonOutcome::Degenerate);
    }
    let s = scan(bandit, scan_resolution)?;
    let margin = s
        .means
        .iter()
        .filter(|m| !strictly_optimal(m, best, s.tol))
        .map(|m| (star[best] - m[best]).abs())
        .fold(f64::INFINITY, f64::min);
    let resolvable = bandit.max_slope(best) * s.step + s.tol;
    Ok(if margin > resolvable { EpsilonOutcome::Found(margin) } else { EpsilonOutcome::Absent })
}

/// Places a two-armed parameter in the easy, ambiguous or hard class.
pub fn classify_parameter(bandit: &StructuredBandit, theta: &Theta) -> Result<ThetaClass> {
    if bandit.arms() != 2 {
        return Err(Error::Unsupported(format!("classification needs 2 arms, problem has {}", bandit.arms())));
    }
    let means = bandit.means_at(theta)?;
    if means[0] == means[1] {
        return Err(Error::ZeroGap);
    }
    let best = argmax(&means);
    let level = means[best];
    let resolution = default_resolution(bandit);
    let s = scan(bandit, resolution)?;
    let mut candidates: Vec<(Theta, Vec<f64>)> = s.points.into_iter().zip(s.means).collect();
    if let crate::problem::MeanFunction::Piecewise(p) = &bandit.mean_functions()[best] {
        for x in p.level_crossings(level) {
            let th = Theta::Real(x);
            if bandit.space().contains(&th) {
                let m = bandit.means_at(&th)?;
                candidates.push((th, m));
            }
        }
    }
    for (th, m) in candidates {
        if (m[best] - level).abs() <= s.tol && argmax(&m) != best {
            return Ok(ThetaClass::Hard { witness: th });
        }
    }
    Ok(match finite_regret_epsilon(bandit, theta, resolution)? {
        EpsilonOutcome::Found(epsilon) => ThetaClass::Easy { epsilon },
        _ => ThetaClass::Ambiguous,
    })
}

/// Grid supremum of `(mu_b(t') - mu_a(t')) / |mu_a(theta) - mu_a(t')|` over
/// `t'` with `0 < |mu_a(theta) - mu_a(t')| < delta`, where `a` is the
/// optimal arm at `theta` and `b` the other arm. `None` when no scanned
/// parameter qualifies.
pub fn ambiguity_ratio(bandit: &StructuredBandit, theta: &Theta, delta: f64) -> Result<Option<f64>> {
    if bandit.arms() != 2 {
        return Err(Error::Unsupported(format!("the ambiguity ratio needs 2 arms, problem has {}", bandit.arms())));
    }
    if !(delta > 0.0) {
        return Err(Error::InvalidArgument(format!("delta must be positive, got {delta}")));
    }
    let means = bandit.means_at(theta)?;
    let a = argmax(&means);
    let b = 1 - a;
    let s = scan(bandit, default_resolution(bandit))?;
    let mut sup: Option<f64> = None;
    for m in &s.means {
        let den = (means[a] - m[a]).abs();
        if den > s.tol && den < delta {
            let r = (m[b] - m[a]) / den;
            sup = Some(sup.map_or(r, |v: f64| v.max(r)));
        }
    }
    Ok(sup)
}

/// Ambiguity ratios at `delta = f * spread` for `f` in `1e-1, 1e-2, ...`
/// (`steps` values), where `spread` is the range of all scanned means.
pub fn ambiguity_profile(bandit: &StructuredBandit, theta: &Theta, steps: usize) -> Result<Vec<(f64, Option<f64>)>> {
    let s = scan(bandit, default_resolution(bandit))?;
    let spread = s.tol / RELATIVE_TOLERANCE;
    (1..=steps)
        .map(|j| {
            let delta = spread * 10f64.powi(-(j as i32));
            Ok((delta, ambiguity_ratio(bandit, theta, delta)?))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::catalog::make_builtin;

    fn eps(name: &str, x: f64) -> EpsilonOutcome {
        finite_regret_epsilon(&make_builtin(name).unwrap(), &Theta::Real(x), 2001).unwrap()
    }

    #[test]
    fn epsilon_examples() {
        assert!((eps("example-a", 0.5).value().unwrap() - 0.5).abs() < 1e-12);
        assert_eq!(eps("example-b", -0.3), EpsilonOutcome::Absent);
        assert!((eps("example-c", 0.4).value().unwrap() - 0.4).abs() < 1e-12);
        assert!((eps("example-a", 0.04).value().unwrap() - 0.04).abs() < 1e-12);
        assert_eq!(eps("example-a", 0.0), EpsilonOutcome::Degenerate);
    }

    #[test]
    fn classification_examples() {
        let amb = make_builtin("ambiguous-a").unwrap();
        assert_eq!(classify_parameter(&amb, &Theta::Real(-0.5)).unwrap(), ThetaClass::Ambiguous);
        assert!(matches!(classify_parameter(&amb, &Theta::Real(0.5)).unwrap(), ThetaClass::Easy { .. }));
        let b = make_builtin("example-b").unwrap();
        match classify_parameter(&b, &Theta::Real(-0.3)).unwrap() {
            ThetaClass::Hard { witness } => {
                let m = b.means_at(&witness).unwrap();
                assert_eq!(m[0], 0.0);
                assert_eq!(argmax(&m), 1);
            }
            other => panic!("expected hard, got {other:?}"),
        }
        assert!(matches!(
            classify_parameter(&make_builtin("example-a").unwrap(), &Theta::Real(0.0)),
            Err(Error::ZeroGap)
        ));
        assert!(classify_parameter(&make_builtin("example-f").unwrap(), &Theta::Real(1.0)).is_err());
    }

    #[test]
    fn ambiguity_ratio_bounded_on_ambiguous_region() {
        let amb = make_builtin("ambiguous-a").unwrap();
        let r = ambiguity_ratio(&amb, &Theta::Real(-0.5), 0.1).unwrap().unwrap();
        assert!(r <= 1.0 + 1e-9, "{r}");
        for (_, v) in ambiguity_profile(&amb, &Theta::Real(-0.5), 2).unwrap() {
            assert!(v.unwrap() <= 1.0 + 1e-9);
        }
    }

    #[test]
    fn ambiguity_ratio_vacuous_delta() {
        let a = make_builtin("example-a").unwrap();
        let th = Theta::Real(0.5);
        let all = ambiguity_ratio(&a, &th, 100.0).unwrap().unwrap();
        // sup over all t' != theta of (-2 t') / |0.5 - t'| is attained next to theta
        let grid = a.space().grid_with(2001).unwrap();
        let hand = grid
            .iter()
            .filter(|&&x| x != 0.5)
            .map(|&x| -2.0 * x / (0.5 - x).abs())
            .fold(f64::NEG_INFINITY, f64::max);
        assert!((all - hand).abs() < 1e-9 * hand.abs().max(1.0));
    }

    #[test]
    fn uninformative_optimal_arm_has_no_ratio() {
        let b = make_builtin("example-b").unwrap();
        assert_eq!(ambiguity_ratio(&b, &Theta::Real(-0.3), 0.1).unwrap(), None);
    }
}
