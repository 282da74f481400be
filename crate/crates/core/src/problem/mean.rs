//! Per-arm mean functions.

use serde::Deserialize;

use crate::error::{Error, Result};

/// Which one-sided value a breakpoint takes at its own location.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    #[default]
    Right,
}

/// A breakpoint of a piecewise-linear function. Continuous breakpoints have
/// `left == right`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Knot {
    pub x: f64,
    pub left: f64,
    pub right: f64,
    pub side: Side,
}

impl Knot {
    pub fn new(x: f64, y: f64) -> Self {
        Knot { x, left: y, right: y, side: Side::Right }
    }

    /// Jump discontinuity evaluated with the right-hand value at `x`.
    pub fn jump(x: f64, left: f64, right: f64) -> Self {
        Knot { x, left, right, side: Side::Right }
    }

    pub fn taking(mut self, side: Side) -> Self {
        self.side = side;
        self
    }

    pub fn is_jump(&self) -> bool {
        self.left != self.right
    }

    fn at(&self) -> f64 {
        match self.side {
            Side::Left => self.left,
            Side::Right => self.right,
        }
    }
}

/// Piecewise-linear function over the real line, linearly interpolated
/// between strictly increasing breakpoints and held constant outside them.
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewiseLinear {
    knots: Vec<Knot>,
}

impl PiecewiseLinear {
    pub fn new(knots: Vec<Knot>) -> Result<Self> {
        if knots.is_empty() {
            return Err(Error::InvalidProblem("piecewise-linear function needs at least one breakpoint".into()));
        }
        for k in &knots {
            if !(k.x.is_finite() && k.left.is_finite() && k.right.is_finite()) {
                return Err(Error::InvalidProblem(format!("non-finite breakpoint {k:?}")));
            }
        }
        if let Some(w) = knots.windows(2).find(|w| w[0].x >= w[1].x) {
            return Err(Error::InvalidProblem(format!(
                "breakpoints must be strictly increasing ({} then {})",
                w[0].x, w[1].x
            )));
        }
        Ok(PiecewiseLinear { knots })
    }

    /// Straight line through two points.
    pub fn line(x0: f64, y0: f64, x1: f64, y1: f64) -> Result<Self> {
        Self::new(vec![Knot::new(x0, y0), Knot::new(x1, y1)])
    }

    pub fn knots(&self) -> &[Knot] {
        &self.knots
    }

    pub fn eval(&self, x: f64) -> f64 {
        let ks = &self.knots;
        let first = &ks[0];
        let last = &ks[ks.len() - 1];
        if ks.len() == 1 {
            return if x == first.x { first.at() } else if x < first.x { first.left } else { first.right };
        }
        if x <= first.x {
            return first.right;
        }
        if x >= last.x {
            return last.left;
        }
        // ks[j].x <= x < ks[j + 1].x
        let j = ks.partition_point(|k| k.x <= x) - 1;
        if ks[j].x == x {
            return ks[j].at();
        }
        interpolate(&ks[j], &ks[j + 1], x)
    }

    /// One-sided limits `(f(a+), f(b-))` on an open interval `(a, b)` that
    /// contains no breakpoint.
    pub fn open_limits(&self, a: f64, b: f64) -> (f64, f64) {
        let ks = &self.knots;
        let mid = 0.5 * (a + b);
        let first = &ks[0];
        let last = &ks[ks.len() - 1];
        if mid < first.x {
            return (first.left, first.left);
        }
        if mid > last.x {
            return (last.right, last.right);
        }
        let j = ks.partition_point(|k| k.x <= mid) - 1;
        let (k0, k1) = (&ks[j], &ks[j + 1]);
        (interpolate(k0, k1, a), interpolate(k0, k1, b))
    }

    /// Largest absolute slope over all segments.
    pub fn max_slope(&self) -> f64 {
        self.knots
            .windows(2)
            .map(|w| ((w[1].left - w[0].right) / (w[1].x - w[0].x)).abs())
            .fold(0.0, f64::max)
    }

    /// Points strictly inside non-constant segments where the function
    /// equals `level`.
    pub fn level_crossings(&self, level: f64) -> Vec<f64> {
        let mut out = Vec::new();
        for w in self.knots.windows(2) {
            let (y0, y1) = (w[0].right, w[1].left);
            if y0 == y1 {
                continue;
            }
            let s = (level - y0) / (y1 - y0);
            if s > 0.0 && s < 1.0 {
                out.push(w[0].x + s * (w[1].x - w[0].x));
            }
        }
        out
    }

    fn shifted(&self, c: f64) -> Self {
        let knots = self
            .knots
            .iter()
            .map(|k| Knot { left: k.left + c, right: k.right + c, ..*k })
            .collect();
        PiecewiseLinear { knots }
    }
}

fn interpolate(k0: &Knot, k1: &Knot, x: f64) -> f64 {
    let s = (x - k0.x) / (k1.x - k0.x);
    k0.right + s * (k1.left - k0.right)
}

/// Mean function of one arm, `theta -> mu_k(theta)`.
#[derive(Clone, Debug, PartialEq)]
pub enum MeanFunction {
    /// Over a real interval.
    Piecewise(PiecewiseLinear),
    /// One value per label of a finite space, in label order.
    Table(Vec<f64>),
    /// `theta -> theta[coordinate]` on a product box.
    Coordinate(usize),
}

impl MeanFunction {
    /// The same function plus a constant. Coordinate means cannot be shifted
    /// without changing the space, so they are returned unchanged.
    pub fn shifted(&self, c: f64) -> Self {
        match self {
            MeanFunction::Piecewise(p) => MeanFunction::Piecewise(p.shifted(c)),
            MeanFunction::Table(v) => MeanFunction::Table(v.iter().map(|x| x + c).collect()),
            MeanFunction::Coordinate(i) => MeanFunction::Coordinate(*i),
        }
    }
}
