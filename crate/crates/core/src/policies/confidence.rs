//! Confidence radii and the plausible parameter set.
//!
//! The plausible set at step `t` is every `theta` with
//! `|mu_i(theta) - mean_i| < radius_i` for all arms `i`. It is computed
//! exactly for interval spaces (the means are piecewise linear, so each
//! constraint cuts an open subinterval out of every cell between
//! breakpoints), exactly for finite and product spaces, and optionally by
//! enumerating the interval grid.

use crate::problem::{ParameterSpace, StructuredBandit, Theta};
use crate::stats::ArmStatistics;

/// `sqrt(2 alpha sigma2 ln t / pulls)`, infinite for an unpulled arm.
pub fn confidence_radius(t: u64, pulls: u64, alpha: f64, sigma2: f64) -> f64 {
    if pulls == 0 {
        return f64::INFINITY;
    }
    let log_t = (t.max(1) as f64).ln();
    (2.0 * alpha * sigma2 * log_t / pulls as f64).sqrt()
}

/// How interval spaces are searched.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SetMode {
    /// Exact interval arithmetic on the piecewise-linear structure.
    #[default]
    Exact,
    /// Enumerate the space's grid points.
    Grid,
}

impl std::str::FromStr for SetMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "exact" => Ok(SetMode::Exact),
            "grid" => Ok(SetMode::Grid),
            other => Err(format!("unknown confidence mode `{other}` (expected exact or grid)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ArmInterval {
    pub center: f64,
    pub radius: f64,
}

impl ArmInterval {
    #[inline]
    fn admits(&self, value: f64) -> bool {
        self.radius.is_infinite() || (value - self.center).abs() < self.radius
    }
}

/// Part of the plausible set of an interval space, in ascending order.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Piece {
    /// A breakpoint location (index into the decomposition's points).
    Point { knot: usize, x: f64 },
    /// Open subinterval of cell `cell`; `s_lo < s_hi` are positions within
    /// the cell scaled to `[0, 1]`.
    Open { cell: usize, lo: f64, hi: f64, s_lo: f64, s_hi: f64 },
}

/// One coordinate of a plausible box: bounds and whether each end is open.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Span {
    pub lo: f64,
    pub hi: f64,
    pub lo_open: bool,
    pub hi_open: bool,
}

impl Span {
    fn is_empty(&self) -> bool {
        self.lo > self.hi || (self.lo == self.hi && (self.lo_open || self.hi_open))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Region {
    Labels(Vec<usize>),
    Grid(Vec<f64>),
    Pieces(Vec<Piece>),
    Boxed(Vec<Span>),
}

/// The plausible parameter set together with the per-arm intervals that
/// define it.
#[derive(Clone, Debug, PartialEq)]
pub struct ConfidenceSet {
    pub intervals: Vec<ArmInterval>,
    pub region: Region,
}

#[inline]
fn lerp(fa: f64, fb: f64, s: f64) -> f64 {
    if s <= 0.0 {
        fa
    } else if s >= 1.0 {
        fb
    } else {
        fa + (fb - fa) * s
    }
}

impl ConfidenceSet {
    pub fn is_empty(&self) -> bool {
        match &self.region {
            Region::Labels(v) => v.is_empty(),
            Region::Grid(v) => v.is_empty(),
            Region::Pieces(v) => v.is_empty(),
            Region::Boxed(spans) => spans.iter().any(Span::is_empty),
        }
    }

    /// Whether `theta` satisfies every arm's constraint.
    pub fn admits(&self, bandit: &StructuredBandit, theta: &Theta) -> bool {
        bandit.space().contains(theta)
            && self.intervals.iter().enumerate().all(|(k, iv)| iv.admits(bandit.mean_unchecked(k, theta)))
    }

    /// `sup` of each arm's mean over the set; `-inf` everywhere when empty.
    pub fn sup_means(&self, bandit: &StructuredBandit) -> Vec<f64> {
        let k = bandit.arms();
        let mut sup = vec![f64::NEG_INFINITY; k];
        if self.is_empty() {
            return sup;
        }
        match &self.region {
            Region::Labels(labels) => {
                for &l in labels {
                    let theta = Theta::Label(l);
                    for (arm, s) in sup.iter_mut().enumerate() {
                        *s = s.max(bandit.mean_unchecked(arm, &theta));
                    }
                }
            }
            Region::Grid(xs) => {
                for &x in xs {
                    for (arm, s) in sup.iter_mut().enumerate() {
                        *s = s.max(bandit.mean_at(arm, x));
                    }
                }
            }
            Region::Pieces(pieces) => {
                let d = bandit.decomposition().expect("interval space has a decomposition");
                for p in pieces {
                    match *p {
                        Piece::Point { knot, .. } => {
                            for (arm, s) in sup.iter_mut().enumerate() {
                                *s = s.max(d.point_values[knot][arm]);
                            }
                        }
                        Piece::Open { cell, s_lo, s_hi, .. } => {
                            for (arm, s) in sup.iter_mut().enumerate() {
                                let (fa, fb) = d.cell_limits[cell][arm];
                                *s = s.max(lerp(fa, fb, s_lo).max(lerp(fa, fb, s_hi)));
                            }
                        }
                    }
                }
            }
            Region::Boxed(spans) => {
                for (arm, s) in sup.iter_mut().enumerate() {
                    if let crate::problem::MeanFunction::Coordinate(c) = bandit.mean_functions()[arm] {
                        *s = spans[c].hi;
                    }
                }
            }
        }
        sup
    }

    /// First parameter of the set, in canonical ascending order, that lies
    /// in the space's ambiguous region. Inside an open piece whose
    /// intersection with the region has no least element, the midpoint of
    /// that intersection is used.
    pub fn first_ambiguous(&self, bandit: &StructuredBandit) -> Option<Theta> {
        let space = bandit.space();
        match &self.region {
            Region::Labels(labels) => {
                labels.iter().map(|&l| Theta::Label(l)).find(|th| space.is_ambiguous(th))
            }
            Region::Grid(xs) => xs.iter().map(|&x| Theta::Real(x)).find(|th| space.is_ambiguous(th)),
            Region::Pieces(pieces) => {
                let marks = match space {
                    ParameterSpace::Interval { ambiguous: Some(a), .. } => a,
                    _ => return None,
                };
                for p in pieces {
                    match *p {
                        Piece::Point { x, .. } => {
                            if marks.iter().any(|&(c, d)| x >= c && x <= d) {
                                return Some(Theta::Real(x));
                            }
                        }
                        Piece::Open { lo, hi, .. } => {
                            let mut best: Option<f64> = None;
                            for &(c, d) in marks {
                                let (a, b) = (lo.max(c), hi.min(d));
                                let candidate = if c > lo && c < hi {
                                    // closed end of the mark lies inside the piece
                                    Some(c)
                                } else if a < b {
                                    Some(0.5 * (a + b))
                                } else {
                                    None
                                };
                                if let Some(x) = candidate {
                                    best = Some(best.map_or(x, |bx: f64| bx.min(x)));
                                }
                            }
                            if let Some(x) = best {
                                return Some(Theta::Real(x));
                            }
                        }
                    }
                }
                None
            }
            Region::Boxed(_) => None,
        }
    }
}

/// Per-arm confidence intervals at step `t` (so `stats` holds `t - 1`
/// rewards).
pub fn arm_intervals(stats: &ArmStatistics, t: u64, alpha: f64, sigma2: f64) -> Vec<ArmInterval> {
    (0..stats.arms())
        .map(|i| ArmInterval { center: stats.mean(i), radius: confidence_radius(t, stats.pulls(i), alpha, sigma2) })
        .collect()
}

pub fn plausible_parameters(
    bandit: &StructuredBandit,
    stats: &ArmStatistics,
    t: u64,
    alpha: f64,
    mode: SetMode,
) -> ConfidenceSet {
    let intervals = arm_intervals(stats, t, alpha, bandit.sigma2());
    plausible_from_intervals(bandit, intervals, mode)
}

/// Plausible set for explicitly given per-arm intervals.
pub fn plausible_from_intervals(bandit: &StructuredBandit, intervals: Vec<ArmInterval>, mode: SetMode) -> ConfidenceSet {
    let region = match bandit.space() {
        ParameterSpace::Finite { labels, .. } => Region::Labels(
            (0..labels.len())
                .filter(|&l| {
                    let th = Theta::Label(l);
                    intervals.iter().enumerate().all(|(k, iv)| iv.admits(bandit.mean_unchecked(k, &th)))
                })
                .collect(),
        ),
        ParameterSpace::Interval { lower, upper, resolution, .. } => match mode {
            SetMode::Grid => Region::Grid(
                crate::problem::uniform_grid(*lower, *upper, *resolution)
                    .into_iter()
                    .filter(|&x| intervals.iter().enumerate().all(|(k, iv)| iv.admits(bandit.mean_at(k, x))))
                    .collect(),
            ),
            SetMode::Exact => Region::Pieces(exact_pieces(bandit, &intervals)),
        },
        ParameterSpace::Product { lower, upper } => {
            let mut spans: Vec<Span> = lower
                .iter()
                .zip(upper)
                .map(|(&lo, &hi)| Span { lo, hi, lo_open: false, hi_open: false })
                .collect();
            for (arm, iv) in intervals.iter().enumerate() {
                if iv.radius.is_infinite() {
                    continue;
                }
                if let crate::problem::MeanFunction::Coordinate(c) = bandit.mean_functions()[arm] {
                    let span = &mut spans[c];
                    let (lo, hi) = (iv.center - iv.radius, iv.center + iv.radius);
                    if lo >= span.lo {
                        span.lo = lo;
                        span.lo_open = true;
                    }
                    if hi <= span.hi {
                        span.hi = hi;
                        span.hi_open = true;
                    }
                }
            }
            Region::Boxed(spans)
        }
    };
    ConfidenceSet { intervals, region }
}

fn exact_pieces(bandit: &StructuredBandit, intervals: &[ArmInterval]) -> Vec<Piece> {
    let d = bandit.decomposition().expect("interval space has a decomposition");
    let mut pieces = Vec::new();
    for (j, &x) in d.points.iter().enumerate() {
        if intervals.iter().zip(&d.point_values[j]).all(|(iv, &v)| iv.admits(v)) {
            pieces.push(Piece::Point { knot: j, x });
        }
        let Some(limits) = d.cell_limits.get(j) else { continue };
        let (mut s_lo, mut s_hi) = (0.0f64, 1.0f64);
        for (iv, &(fa, fb)) in intervals.iter().zip(limits) {
            if iv.radius.is_infinite() {
                continue;
            }
            let slope = fb - fa;
            if slope == 0.0 {
                if !iv.admits(fa) {
                    s_hi = f64::NEG_INFINITY;
                    break;
                }
                continue;
            }
            let a = (iv.center - iv.radius - fa) / slope;
            let b = (iv.center + iv.radius - fa) / slope;
            let (a, b) = if slope > 0.0 { (a, b) } else { (b, a) };
            s_lo = s_lo.max(a);
            s_hi = s_hi.min(b);
            if s_lo >= s_hi {
                break;
            }
        }
        if s_lo < s_hi {
            let (a, b) = (x, d.points[j + 1]);
            pieces.push(Piece::Open { cell: j, lo: lerp(a, b, s_lo), hi: lerp(a, b, s_hi), s_lo, s_hi });
        }
    }
    pieces
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::catalog::make_builtin;
    use crate::problem::MeanFunction;

    fn two_point_space() -> StructuredBandit {
        StructuredBandit::new(
            ParameterSpace::finite(["A", "B"]),
            vec![MeanFunction::Table(vec![0.0, 0.0]), MeanFunction::Table(vec![1.0, -1.0])],
            1.0,
        )
        .unwrap()
    }

    #[test]
    fn radius_values() {
        let r = confidence_radius(100, 100, 4.0, 1.0);
        assert!((r - (8.0 * 100f64.ln() / 100.0).sqrt()).abs() < 1e-15);
        assert!((r - 0.6070).abs() < 1e-4);
        assert_eq!(confidence_radius(1, 5, 4.0, 1.0), 0.0);
        assert_eq!(confidence_radius(10, 0, 4.0, 1.0), f64::INFINITY);
    }

    #[test]
    fn radius_monotonicity() {
        for t in [2u64, 10, 1000] {
            let rs: Vec<f64> = (1..50).map(|n| confidence_radius(t, n, 4.0, 1.0)).collect();
            assert!(rs.windows(2).all(|w| w[1] <= w[0]));
        }
        let rs: Vec<f64> = (1..50).map(|t| confidence_radius(t, 7, 4.0, 1.0)).collect();
        assert!(rs.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn finite_example_keeps_a_only() {
        let b = two_point_space();
        let stats = ArmStatistics::from_parts(vec![100, 100], vec![0.0, 0.9]);
        let set = plausible_parameters(&b, &stats, 100, 4.0, SetMode::Exact);
        assert_eq!(set.region, Region::Labels(vec![0]));
    }

    #[test]
    fn no_data_means_whole_space() {
        let b = make_builtin("example-a").unwrap();
        let stats = ArmStatistics::new(2);
        let set = plausible_parameters(&b, &stats, 1, 4.0, SetMode::Exact);
        let sup = set.sup_means(&b);
        assert_eq!(sup, vec![1.0, 1.0]);
        let grid = plausible_parameters(&b, &stats, 1, 4.0, SetMode::Grid);
        match grid.region {
            Region::Grid(xs) => assert_eq!(xs.len(), 2001),
            _ => unreachable!(),
        }
        let f = two_point_space();
        let set = plausible_parameters(&f, &ArmStatistics::new(2), 1, 4.0, SetMode::Exact);
        assert_eq!(set.region, Region::Labels(vec![0, 1]));
    }

    #[test]
    fn far_means_give_empty_set() {
        let b = make_builtin("example-a").unwrap();
        let stats = ArmStatistics::from_parts(vec![1000, 1000], vec![10.0, 10.0]);
        for mode in [SetMode::Exact, SetMode::Grid] {
            let set = plausible_parameters(&b, &stats, 2000, 4.0, mode);
            assert!(set.is_empty());
            assert_eq!(set.sup_means(&b), vec![f64::NEG_INFINITY; 2]);
        }
    }

    #[test]
    fn exact_and_grid_agree_on_example_a() {
        let b = make_builtin("example-a").unwrap();
        let stats = ArmStatistics::from_parts(vec![40, 25], vec![0.1, -0.05]);
        let exact = plausible_parameters(&b, &stats, 66, 4.0, SetMode::Exact).sup_means(&b);
        let grid = plausible_parameters(&b, &stats, 66, 4.0, SetMode::Grid).sup_means(&b);
        // closed-form: theta in (m1 - r1, m1 + r1) and (-m2 - r2, -m2 + r2)
        let r1 = confidence_radius(66, 40, 4.0, 1.0);
        let r2 = confidence_radius(66, 25, 4.0, 1.0);
        let hi = (0.1 + r1).min(0.05 + r2).min(1.0);
        let lo = (0.1 - r1).max(0.05 - r2).max(-1.0);
        assert!((exact[0] - hi).abs() < 1e-12);
        assert!((exact[1] + lo).abs() < 1e-12);
        for k in 0..2 {
            assert!((exact[k] - grid[k]).abs() <= 1e-3 + 1e-12, "{exact:?} vs {grid:?}");
            assert!(grid[k] <= exact[k] + 1e-12);
        }
    }

    #[test]
    fn jump_point_is_evaluated_on_its_side() {
        // ambiguous-a: mu2(0) = -1 but mu2 = 0 just right of 0
        let b = make_builtin("ambiguous-a").unwrap();
        let set = plausible_from_intervals(
            &b,
            vec![
                ArmInterval { center: 0.0, radius: 0.01 },
                ArmInterval { center: -1.0, radius: 0.01 },
            ],
            SetMode::Exact,
        );
        // admitted: [-1, 0] (mu1 = 0, mu2 = -1); nothing right of 0
        let sup = set.sup_means(&b);
        assert_eq!(sup, vec![0.0, -1.0]);
        assert!(set.admits(&b, &Theta::Real(0.0)));
        assert!(!set.admits(&b, &Theta::Real(0.001)));
        assert_eq!(set.first_ambiguous(&b), Some(Theta::Real(-1.0)));
    }

    #[test]
    fn boxed_region_caps_at_the_edge() {
        let b = StructuredBandit::unstructured(2, -10.0, 10.0, 1.0).unwrap();
        let set = plausible_from_intervals(
            &b,
            vec![ArmInterval { center: 9.5, radius: 1.0 }, ArmInterval { center: 0.0, radius: 1.0 }],
            SetMode::Exact,
        );
        assert_eq!(set.sup_means(&b), vec![10.0, 1.0]);
        let empty = plausible_from_intervals(
            &b,
            vec![ArmInterval { center: 12.0, radius: 1.0 }, ArmInterval { center: 0.0, radius: 1.0 }],
            SetMode::Exact,
        );
        assert!(empty.is_empty());
    }
}
