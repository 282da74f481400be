//! Problem definition files.
//!
//! A problem file is TOML:
//!
//! ```toml
//! name = "advertising"      # optional
//! arms = 2                  # optional; checked against the [[arm]] count
//! sigma2 = 1.0
//!
//! [space]                   # interval space ...
//! lower = -1.0
//! upper = 1.0
//! resolution = 2001         # optional, default 2001
//! ambiguous = [[-1.0, 0.0]] # optional closed subintervals
//!
//! [[arm]]
//! points = [[-1.0, 0.0], [1.0, 0.0]]  # (theta, value) breakpoints
//!
//! [[arm]]
//! points = [[-1.0, -1.0], [1.0, 1.0]]
//! jumps = [{ at = 0.0, left = -1.0, right = 0.0, side = "left" }]
//! ```
//!
//! A finite space replaces the bounds with `labels = ["A", "B"]` (and
//! optionally `ambiguous = ["A"]`), and each arm gives `values = [...]`, one
//! per label.

use serde::Deserialize;

use super::{Knot, MeanFunction, ParameterSpace, PiecewiseLinear, Side, StructuredBandit, DEFAULT_RESOLUTION};
use crate::error::{Error, Result};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProblemFile {
    name: Option<String>,
    arms: Option<usize>,
    sigma2: f64,
    space: SpaceSection,
    arm: Vec<ArmSection>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpaceSection {
    lower: Option<f64>,
    upper: Option<f64>,
    resolution: Option<usize>,
    labels: Option<Vec<String>>,
    ambiguous: Option<Marks>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum Marks {
    Intervals(Vec<[f64; 2]>),
    Labels(Vec<String>),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ArmSection {
    points: Option<Vec<[f64; 2]>>,
    jumps: Option<Vec<JumpSpec>>,
    values: Option<Vec<f64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct JumpSpec {
    at: f64,
    left: f64,
    right: f64,
    #[serde(default)]
    side: Side,
}

pub fn parse_problem(text: &str) -> Result<StructuredBandit> {
    let file: ProblemFile = toml::from_str(text)?;
    if let Some(k) = file.arms {
        if k != file.arm.len() {
            return Err(Error::InvalidProblem(format!("arms = {k} but {} [[arm]] sections", file.arm.len())));
        }
    }
    let s = file.space;
    let bandit = match (s.labels, s.lower, s.upper) {
        (Some(labels), None, None) => {
            let mut space = ParameterSpace::finite(labels.clone());
            match s.ambiguous {
                None => {}
                Some(Marks::Labels(names)) => {
                    let idx = names
                        .iter()
                        .map(|n| {
                            labels
                                .iter()
                                .position(|l| l == n)
                                .ok_or_else(|| Error::InvalidProblem(format!("unknown ambiguous label `{n}`")))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    space = space.with_ambiguous_labels(idx);
                }
                Some(Marks::Intervals(_)) => {
                    return Err(Error::InvalidProblem("finite spaces mark ambiguous points by label".into()))
                }
            }
            let means = file
                .arm
                .into_iter()
                .enumerate()
                .map(|(k, a)| {
                    a.values
                        .map(MeanFunction::Table)
                        .ok_or_else(|| Error::InvalidProblem(format!("arm {k}: finite spaces need `values`")))
                })
                .collect::<Result<Vec<_>>>()?;
            StructuredBandit::new(space, means, file.sigma2)?
        }
        (None, Some(lower), Some(upper)) => {
            let mut space =
                ParameterSpace::interval(lower, upper).with_resolution(s.resolution.unwrap_or(DEFAULT_RESOLUTION));
            match s.ambiguous {
                None => {}
                Some(Marks::Intervals(iv)) => space = space.with_ambiguous_intervals(iv.into_iter().map(|[a, b]| (a, b)).collect()),
                Some(Marks::Labels(_)) => {
                    return Err(Error::InvalidProblem("interval spaces mark ambiguous regions as [lo, hi] pairs".into()))
                }
            }
            let means = file.arm.into_iter().enumerate().map(|(k, a)| arm_function(k, a)).collect::<Result<Vec<_>>>()?;
            StructuredBandit::new(space, means, file.sigma2)?
        }
        _ => {
            return Err(Error::InvalidProblem(
                "[space] needs either `labels` or both `lower` and `upper`".into(),
            ))
        }
    };
    Ok(bandit.named(file.name.unwrap_or_else(|| "custom".into())))
}

fn arm_function(k: usize, a: ArmSection) -> Result<MeanFunction> {
    let mut knots: Vec<Knot> = a.points.unwrap_or_default().into_iter().map(|[x, y]| Knot::new(x, y)).collect();
    for j in a.jumps.unwrap_or_default() {
        let jump = Knot::jump(j.at, j.left, j.right).taking(j.side);
        match knots.iter_mut().find(|kn| kn.x == j.at) {
            Some(existing) => *existing = jump,
            None => knots.push(jump),
        }
    }
    if knots.is_empty() {
        return Err(Error::InvalidProblem(format!("arm {k}: interval spaces need `points`")));
    }
    knots.sort_by(|p, q| p.x.total_cmp(&q.x));
    Ok(MeanFunction::Piecewise(PiecewiseLinear::new(knots)?))
}

pub fn load_problem(path: &std::path::Path) -> Result<StructuredBandit> {
    parse_problem(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{catalog::make_builtin, Theta};

    #[test]
    fn interval_file_matches_builtin() {
        let text = r#"
            name = "ambiguous-a"
            arms = 2
            sigma2 = 1.0
            [space]
            lower = -1.0
            upper = 1.0
            ambiguous = [[-1.0, 0.0]]
            [[arm]]
            points = [[-1.0, 0.0], [0.0, 0.0], [1.0, -1.0]]
            [[arm]]
            points = [[-1.0, -1.0], [1.0, 0.0]]
            jumps = [{ at = 0.0, left = -1.0, right = 0.0, side = "left" }]
        "#;
        let parsed = parse_problem(text).unwrap();
        let builtin = make_builtin("ambiguous-a").unwrap();
        assert_eq!(parsed, builtin);
    }

    #[test]
    fn finite_file() {
        let text = r#"
            sigma2 = 1.0
            [space]
            labels = ["A", "B"]
            ambiguous = ["B"]
            [[arm]]
            values = [0.0, 0.0]
            [[arm]]
            values = [1.0, -1.0]
        "#;
        let b = parse_problem(text).unwrap();
        assert_eq!(b.arms(), 2);
        assert_eq!(b.evaluate_mean(1, &Theta::Label(1)).unwrap(), -1.0);
        assert!(b.space().is_ambiguous(&Theta::Label(1)));
        assert!(!b.space().is_ambiguous(&Theta::Label(0)));
    }

    #[test]
    fn malformed_files_are_rejected() {
        assert!(parse_problem("sigma2 = 1.0\n[space]\nlower = 0.0\n").is_err());
        let count_mismatch = "arms = 3\nsigma2 = 1.0\n[space]\nlabels=[\"a\"]\n[[arm]]\nvalues=[0.0]\n";
        assert!(matches!(parse_problem(count_mismatch), Err(Error::InvalidProblem(_))));
        let unsorted = "sigma2 = 1.0\n[space]\nlower=-1.0\nupper=1.0\n[[arm]]\npoints=[[1.0,0.0],[1.0,1.0]]\n";
        assert!(parse_problem(unsorted).is_err());
    }
}
