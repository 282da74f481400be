//! Structured bandit problems: parameter spaces, per-arm mean functions and
//! the gap profile induced by a parameter.

pub mod catalog;
pub mod config;
pub mod mean;

use std::fmt;

pub use mean::{Knot, MeanFunction, PiecewiseLinear, Side};

use crate::error::{Error, Result};

/// Default number of grid points used to enumerate an interval space.
pub const DEFAULT_RESOLUTION: usize = 2001;

/// A point of a parameter space.
#[derive(Clone, Debug, PartialEq)]
pub enum Theta {
    Real(f64),
    Label(usize),
    Vector(Vec<f64>),
}

impl From<f64> for Theta {
    fn from(x: f64) -> Self {
        Theta::Real(x)
    }
}

impl fmt::Display for Theta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Theta::Real(x) => write!(f, "{x}"),
            Theta::Label(i) => write!(f, "#{i}"),
            Theta::Vector(v) => write!(f, "{v:?}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ParameterSpace {
    /// Ordered, labeled points.
    Finite { labels: Vec<String>, ambiguous: Option<Vec<usize>> },
    /// `[lower, upper]`, enumerated on `resolution` equally spaced points.
    /// Ambiguous marks are closed subintervals.
    Interval { lower: f64, upper: f64, resolution: usize, ambiguous: Option<Vec<(f64, f64)>> },
    /// Product of closed intervals; used with coordinate mean functions.
    Product { lower: Vec<f64>, upper: Vec<f64> },
}

impl ParameterSpace {
    pub fn finite<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Self {
        ParameterSpace::Finite { labels: labels.into_iter().map(Into::into).collect(), ambiguous: None }
    }

    pub fn interval(lower: f64, upper: f64) -> Self {
        ParameterSpace::Interval { lower, upper, resolution: DEFAULT_RESOLUTION, ambiguous: None }
    }

    pub fn product(lower: Vec<f64>, upper: Vec<f64>) -> Self {
        ParameterSpace::Product { lower, upper }
    }

    pub fn with_resolution(mut self, res: usize) -> Self {
        if let ParameterSpace::Interval { resolution, .. } = &mut self {
            *resolution = res;
        }
        self
    }

    pub fn with_ambiguous_intervals(mut self, marks: Vec<(f64, f64)>) -> Self {
        if let ParameterSpace::Interval { ambiguous, .. } = &mut self {
            *ambiguous = Some(marks);
        }
        self
    }

    pub fn with_ambiguous_labels(mut self, marks: Vec<usize>) -> Self {
        if let ParameterSpace::Finite { ambiguous, .. } = &mut self {
            *ambiguous = Some(marks);
        }
        self
    }

    fn validate(&self) -> Result<()> {
        match self {
            ParameterSpace::Finite { labels, ambiguous } => {
                if labels.is_empty() {
                    return Err(Error::InvalidProblem("finite space needs at least one point".into()));
                }
                if let Some(a) = ambiguous {
                    if let Some(bad) = a.iter().find(|&&i| i >= labels.len()) {
                        return Err(Error::InvalidProblem(format!("ambiguous label index {bad} out of range")));
                    }
                }
            }
            ParameterSpace::Interval { lower, upper, resolution, ambiguous } => {
                if !(lower.is_finite() && upper.is_finite() && lower < upper) {
                    return Err(Error::InvalidProblem(format!("interval needs lower < upper, got [{lower}, {upper}]")));
                }
                if *resolution < 2 {
                    return Err(Error::InvalidProblem("grid resolution must be at least 2".into()));
                }
                if let Some(a) = ambiguous {
                    for &(lo, hi) in a {
                        if !(lo <= hi && lo >= *lower && hi <= *upper) {
                            return Err(Error::InvalidProblem(format!(
                                "ambiguous interval [{lo}, {hi}] is not inside [{lower}, {upper}]"
                            )));
                        }
                    }
                }
            }
            ParameterSpace::Product { lower, upper } => {
                if lower.is_empty() || lower.len() != upper.len() {
                    return Err(Error::InvalidProblem("product space bounds must have equal, nonzero length".into()));
                }
                if lower.iter().zip(upper).any(|(l, u)| !(l.is_finite() && u.is_finite() && l < u)) {
                    return Err(Error::InvalidProblem("product space needs lower < upper in every coordinate".into()));
                }
            }
        }
        Ok(())
    }

    pub fn contains(&self, theta: &Theta) -> bool {
        match (self, theta) {
            (ParameterSpace::Finite { labels, .. }, Theta::Label(i)) => *i < labels.len(),
            (ParameterSpace::Interval { lower, upper, .. }, Theta::Real(x)) => *x >= *lower && *x <= *upper,
            (ParameterSpace::Product { lower, upper }, Theta::Vector(v)) => {
                v.len() == lower.len() && v.iter().zip(lower.iter().zip(upper)).all(|(x, (l, u))| x >= l && x <= u)
            }
            _ => false,
        }
    }

    pub fn has_ambiguous_marks(&self) -> bool {
        matches!(
            self,
            ParameterSpace::Finite { ambiguous: Some(_), .. } | ParameterSpace::Interval { ambiguous: Some(_), .. }
        )
    }

    pub fn is_ambiguous(&self, theta: &Theta) -> bool {
        match (self, theta) {
            (ParameterSpace::Finite { ambiguous: Some(a), .. }, Theta::Label(i)) => a.contains(i),
            (ParameterSpace::Interval { ambiguous: Some(a), .. }, Theta::Real(x)) => {
                a.iter().any(|&(lo, hi)| *x >= lo && *x <= hi)
            }
            _ => false,
        }
    }

    /// Equally spaced points of an interval space, both endpoints included.
    pub fn grid_with(&self, resolution: usize) -> Result<Vec<f64>> {
        match self {
            ParameterSpace::Interval { lower, upper, .. } => Ok(uniform_grid(*lower, *upper, resolution.max(2))),
            _ => Err(Error::Unsupported("grid enumeration needs an interval space".into())),
        }
    }

    /// Canonical enumeration: labels in order, or the default grid in
    /// ascending order.
    pub fn enumerate(&self) -> Result<Vec<Theta>> {
        match self {
            ParameterSpace::Finite { labels, .. } => Ok((0..labels.len()).map(Theta::Label).collect()),
            ParameterSpace::Interval { resolution, .. } => {
                Ok(self.grid_with(*resolution)?.into_iter().map(Theta::Real).collect())
            }
            ParameterSpace::Product { .. } => Err(Error::Unsupported("product spaces are not enumerable".into())),
        }
    }

    /// Resolve a label name of a finite space.
    pub fn label_index(&self, name: &str) -> Option<usize> {
        match self {
            ParameterSpace::Finite { labels, .. } => labels.iter().position(|l| l == name),
            _ => None,
        }
    }
}

pub fn uniform_grid(lower: f64, upper: f64, resolution: usize) -> Vec<f64> {
    let step = (upper - lower) / (resolution - 1) as f64;
    (0..resolution)
        .map(|j| if j + 1 == resolution { upper } else { lower + j as f64 * step })
        .collect()
}

/// Elementary decomposition of an interval space into breakpoint locations
/// and the open cells between them, on which every arm is affine.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Decomposition {
    pub points: Vec<f64>,
    /// `point_values[j][k]` = mean of arm `k` at `points[j]`.
    pub point_values: Vec<Vec<f64>>,
    /// Per open cell `(points[j], points[j + 1])`: per arm `(f(a+), f(b-))`.
    pub cell_limits: Vec<Vec<(f64, f64)>>,
}

impl Decomposition {
    fn build(lower: f64, upper: f64, means: &[PiecewiseLinear]) -> Self {
        let mut points = vec![lower, upper];
        for m in means {
            points.extend(m.knots().iter().map(|k| k.x).filter(|&x| x > lower && x < upper));
        }
        points.sort_by(f64::total_cmp);
        points.dedup();
        let point_values = points.iter().map(|&x| means.iter().map(|m| m.eval(x)).collect()).collect();
        let cell_limits = points
            .windows(2)
            .map(|w| means.iter().map(|m| m.open_limits(w[0], w[1])).collect())
            .collect();
        Decomposition { points, point_values, cell_limits }
    }
}

/// A K-armed structured bandit: known mean functions of an unknown shared
/// parameter, with Gaussian rewards of variance `sigma2`.
#[derive(Clone, Debug, PartialEq)]
pub struct StructuredBandit {
    name: String,
    space: ParameterSpace,
    means: Vec<MeanFunction>,
    sigma2: f64,
    reconstructed: bool,
    decomposition: Option<Decomposition>,
}

impl StructuredBandit {
    pub fn new(space: ParameterSpace, means: Vec<MeanFunction>, sigma2: f64) -> Result<Self> {
        space.validate()?;
        if means.is_empty() {
            return Err(Error::InvalidProblem("a bandit needs at least one arm".into()));
        }
        if !(sigma2.is_finite() && sigma2 >= 0.0) {
            return Err(Error::InvalidProblem(format!("sigma2 must be finite and >= 0, got {sigma2}")));
        }
        let decomposition = match &space {
            ParameterSpace::Finite { labels, .. } => {
                for (k, m) in means.iter().enumerate() {
                    match m {
                        MeanFunction::Table(v) if v.len() == labels.len() => {}
                        MeanFunction::Table(v) => {
                            return Err(Error::InvalidProblem(format!(
                                "arm {k}: {} tabulated values for {} labels",
                                v.len(),
                                labels.len()
                            )))
                        }
                        _ => return Err(Error::InvalidProblem(format!("arm {k}: finite spaces need tabulated means"))),
                    }
                }
                None
            }
            ParameterSpace::Interval { lower, upper, .. } => {
                let pwl = means
                    .iter()
                    .enumerate()
                    .map(|(k, m)| match m {
                        MeanFunction::Piecewise(p) => Ok(p.clone()),
                        _ => Err(Error::InvalidProblem(format!("arm {k}: interval spaces need piecewise-linear means"))),
                    })
                    .collect::<Result<Vec<_>>>()?;
                Some(Decomposition::build(*lower, *upper, &pwl))
            }
            ParameterSpace::Product { lower, .. } => {
                for (k, m) in means.iter().enumerate() {
                    match m {
                        MeanFunction::Coordinate(c) if *c < lower.len() => {}
                        _ => {
                            return Err(Error::InvalidProblem(format!(
                                "arm {k}: product spaces need coordinate means below dimension {}",
                                lower.len()
                            )))
                        }
                    }
                }
                None
            }
        };
        Ok(StructuredBandit { name: "custom".into(), space, means, sigma2, reconstructed: false, decomposition })
    }

    /// Classic unstructured bandit: `Theta = prod [lower, upper]`, `mu_k(theta) = theta_k`.
    pub fn unstructured(arms: usize, lower: f64, upper: f64, sigma2: f64) -> Result<Self> {
        Self::new(
            ParameterSpace::product(vec![lower; arms], vec![upper; arms]),
            (0..arms).map(MeanFunction::Coordinate).collect(),
            sigma2,
        )
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub(crate) fn mark_reconstructed(mut self) -> Self {
        self.reconstructed = true;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// True for catalog entries whose formulas were read off drawings.
    pub fn is_reconstructed(&self) -> bool {
        self.reconstructed
    }

    pub fn arms(&self) -> usize {
        self.means.len()
    }

    pub fn space(&self) -> &ParameterSpace {
        &self.space
    }

    pub fn mean_functions(&self) -> &[MeanFunction] {
        &self.means
    }

    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }

    pub(crate) fn decomposition(&self) -> Option<&Decomposition> {
        self.decomposition.as_ref()
    }

    /// Same problem with a different reward variance.
    pub fn with_sigma2(&self, sigma2: f64) -> Result<Self> {
        let mut b = Self::new(self.space.clone(), self.means.clone(), sigma2)?;
        b.name = self.name.clone();
        b.reconstructed = self.reconstructed;
        Ok(b)
    }

    /// Same problem with a different space (e.g. another grid resolution or
    /// ambiguous marking).
    pub fn with_space(&self, space: ParameterSpace) -> Result<Self> {
        let mut b = Self::new(space, self.means.clone(), self.sigma2)?;
        b.name = self.name.clone();
        b.reconstructed = self.reconstructed;
        Ok(b)
    }

    /// Every mean function shifted by `c`.
    pub fn shifted(&self, c: f64) -> Result<Self> {
        if matches!(self.space, ParameterSpace::Product { .. }) {
            return Err(Error::Unsupported("cannot shift coordinate means".into()));
        }
        let mut b = Self::new(self.space.clone(), self.means.iter().map(|m| m.shifted(c)).collect(), self.sigma2)?;
        b.name = self.name.clone();
        Ok(b)
    }

    pub fn check_arm(&self, arm: usize) -> Result<()> {
        if arm < self.arms() {
            Ok(())
        } else {
            Err(Error::ArmOutOfRange { arm, arms: self.arms() })
        }
    }

    pub fn check_theta(&self, theta: &Theta) -> Result<()> {
        if self.space.contains(theta) {
            Ok(())
        } else {
            Err(Error::ThetaOutsideSpace(theta.to_string()))
        }
    }

    /// `mu_arm(theta)`.
    pub fn evaluate_mean(&self, arm: usize, theta: &Theta) -> Result<f64> {
        self.check_arm(arm)?;
        self.check_theta(theta)?;
        Ok(self.mean_unchecked(arm, theta))
    }

    pub(crate) fn mean_unchecked(&self, arm: usize, theta: &Theta) -> f64 {
        match (&self.means[arm], theta) {
            (MeanFunction::Piecewise(p), Theta::Real(x)) => p.eval(*x),
            (MeanFunction::Table(v), Theta::Label(i)) => v[*i],
            (MeanFunction::Coordinate(c), Theta::Vector(v)) => v[*c],
            _ => f64::NAN,
        }
    }

    /// Mean of `arm` at a real parameter; interval spaces only.
    pub fn mean_at(&self, arm: usize, x: f64) -> f64 {
        match &self.means[arm] {
            MeanFunction::Piecewise(p) => p.eval(x),
            _ => f64::NAN,
        }
    }

    pub fn means_at(&self, theta: &Theta) -> Result<Vec<f64>> {
        self.check_theta(theta)?;
        Ok((0..self.arms()).map(|k| self.mean_unchecked(k, theta)).collect())
    }

    pub fn gap_profile(&self, theta: &Theta) -> Result<GapProfile> {
        Ok(GapProfile::from_means(&self.means_at(theta)?))
    }

    /// Optimal arm at `theta`, ties to the lowest index.
    pub fn optimal_arm(&self, theta: &Theta) -> Result<usize> {
        Ok(argmax(&self.means_at(theta)?))
    }

    /// Largest absolute slope over all piecewise-linear means of one arm.
    pub(crate) fn max_slope(&self, arm: usize) -> f64 {
        match &self.means[arm] {
            MeanFunction::Piecewise(p) => p.max_slope(),
            _ => 0.0,
        }
    }
}

/// Index of the largest value, lowest index on ties. NaN never wins.
pub fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] || values[best].is_nan() {
            best = i;
        }
    }
    best
}

/// Gaps of every arm relative to the best arm at one parameter.
#[derive(Clone, Debug, PartialEq)]
pub struct GapProfile {
    pub optimal_arm: usize,
    pub optimal_mean: f64,
    pub gaps: Vec<f64>,
    pub delta_min: Option<f64>,
    pub delta_max: f64,
    pub suboptimal: Vec<usize>,
}

impl GapProfile {
    pub fn from_means(means: &[f64]) -> Self {
        let optimal_arm = argmax(means);
        let optimal_mean = means[optimal_arm];
        let gaps: Vec<f64> = means.iter().map(|m| optimal_mean - m).collect();
        let suboptimal: Vec<usize> = (0..gaps.len()).filter(|&i| gaps[i] > 0.0).collect();
        let delta_min = suboptimal.iter().map(|&i| gaps[i]).reduce(f64::min);
        let delta_max = gaps.iter().copied().fold(0.0, f64::max);
        GapProfile { optimal_arm, optimal_mean, gaps, delta_min, delta_max, suboptimal }
    }

    pub fn arms(&self) -> usize {
        self.gaps.len()
    }

    pub fn is_degenerate(&self) -> bool {
        self.suboptimal.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_grid_has_resolution_points_with_endpoints() {
        let g = uniform_grid(-1.0, 1.0, 2001);
        assert_eq!(g.len(), 2001);
        assert_eq!(g[0], -1.0);
        assert_eq!(g[2000], 1.0);
        assert!((g[1000]).abs() < 1e-15);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn space_validation() {
        let bad = StructuredBandit::new(
            ParameterSpace::interval(1.0, -1.0),
            vec![MeanFunction::Piecewise(PiecewiseLinear::line(-1.0, 0.0, 1.0, 0.0).unwrap())],
            1.0,
        );
        assert!(bad.is_err());
        let bad_res = StructuredBandit::new(
            ParameterSpace::interval(-1.0, 1.0).with_resolution(1),
            vec![MeanFunction::Piecewise(PiecewiseLinear::line(-1.0, 0.0, 1.0, 0.0).unwrap())],
            1.0,
        );
        assert!(bad_res.is_err());
        let bad_marks = StructuredBandit::new(
            ParameterSpace::interval(-1.0, 1.0).with_ambiguous_intervals(vec![(-2.0, 0.0)]),
            vec![MeanFunction::Piecewise(PiecewiseLinear::line(-1.0, 0.0, 1.0, 0.0).unwrap())],
            1.0,
        );
        assert!(bad_marks.is_err());
        let bad_table = StructuredBandit::new(ParameterSpace::finite(["a", "b"]), vec![MeanFunction::Table(vec![0.0])], 1.0);
        assert!(bad_table.is_err());
        let bad_sigma = StructuredBandit::new(ParameterSpace::finite(["a"]), vec![MeanFunction::Table(vec![0.0])], -1.0);
        assert!(bad_sigma.is_err());
    }

    #[test]
    fn gap_profile_zero_gap() {
        let g = GapProfile::from_means(&[0.0, 0.0]);
        assert_eq!(g.optimal_arm, 0);
        assert!(g.suboptimal.is_empty());
        assert_eq!(g.delta_min, None);
        assert_eq!(g.delta_max, 0.0);
    }

    #[test]
    fn argmax_ties_go_low() {
        assert_eq!(argmax(&[1.0, 1.0, 0.5]), 0);
        assert_eq!(argmax(&[0.0, 2.0, 2.0]), 1);
    }

    #[test]
    fn decomposition_cells() {
        let b = catalog::make_builtin("ambiguous-a").unwrap();
        let d = b.decomposition().unwrap();
        assert_eq!(d.points, vec![-1.0, 0.0, 1.0]);
        // arm 2 at the jump takes the left value
        assert_eq!(d.point_values[1], vec![0.0, -1.0]);
        assert_eq!(d.cell_limits[1][1], (0.0, 0.0));
        assert_eq!(d.cell_limits[1][0], (0.0, -1.0));
    }

    #[test]
    fn out_of_space_errors() {
        let b = catalog::make_builtin("example-a").unwrap();
        assert!(matches!(b.evaluate_mean(0, &Theta::Real(1.5)), Err(Error::ThetaOutsideSpace(_))));
        assert!(matches!(b.evaluate_mean(2, &Theta::Real(0.0)), Err(Error::ArmOutOfRange { .. })));
        assert!(b.gap_profile(&Theta::Label(0)).is_err());
    }
}
