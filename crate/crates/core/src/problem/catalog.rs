//! Builtin example problems. All use unit-variance rewards.
//!
//! `example-d`, `example-e`, `example-f`, `counter-b` and `counter-d` have no
//! printed formulas; their shapes are read off the drawings and the returned
//! bandits report `is_reconstructed() == true`.

use super::{Knot, MeanFunction, ParameterSpace, PiecewiseLinear, Side, StructuredBandit};
use crate::error::{Error, Result};

/// `(identifier, description)` for every builtin.
pub const CATALOG: &[(&str, &str)] = &[
    ("example-a", "mu1 = theta, mu2 = -theta on [-1, 1]"),
    ("example-b", "mu1 = 0, mu2 = theta on [-1, 1]"),
    ("example-c", "mu1 = theta 1{theta > 0}, mu2 = -theta 1{theta < 0} on [-1, 1]"),
    ("example-d", "reconstructed: piecewise with jumps at -1/2 and 1/2"),
    ("example-e", "reconstructed: jump at -1/2, log regret at theta = 1/2"),
    ("example-f", "reconstructed: 3-arm permutation bandit, six cells on [0, 9]"),
    ("ambiguous-a", "mu1 = -theta 1{theta > 0}, mu2 = -1{theta <= 0}, ambiguous on [-1, 0]"),
    ("counter-b", "reconstructed: mu1 = 0, mu2 = -1/2 below 0 and +1/2 from 0"),
    ("counter-d", "reconstructed: mu1 = theta/2 1{theta > 0}, mu2 = theta above 0 and -1 up to 0"),
];

fn pwl(knots: Vec<Knot>) -> Result<MeanFunction> {
    Ok(MeanFunction::Piecewise(PiecewiseLinear::new(knots)?))
}

fn line(y0: f64, y1: f64) -> Result<MeanFunction> {
    Ok(MeanFunction::Piecewise(PiecewiseLinear::line(-1.0, y0, 1.0, y1)?))
}

/// Piecewise-constant function with one value per cell of width `width`
/// starting at 0.
fn cells(values: &[f64], width: f64) -> Result<MeanFunction> {
    let mut knots = vec![Knot::new(0.0, values[0])];
    for j in 1..values.len() {
        knots.push(Knot::jump(j as f64 * width, values[j - 1], values[j]));
    }
    knots.push(Knot::new(values.len() as f64 * width, values[values.len() - 1]));
    pwl(knots)
}

pub fn make_builtin(name: &str) -> Result<StructuredBandit> {
    let unit = ParameterSpace::interval(-1.0, 1.0);
    let bandit = match name {
        "example-a" => StructuredBandit::new(unit, vec![line(-1.0, 1.0)?, line(1.0, -1.0)?], 1.0)?,
        "example-b" => StructuredBandit::new(unit, vec![line(0.0, 0.0)?, line(-1.0, 1.0)?], 1.0)?,
        "example-c" => StructuredBandit::new(
            unit,
            vec![
                pwl(vec![Knot::new(-1.0, 0.0), Knot::new(0.0, 0.0), Knot::new(1.0, 1.0)])?,
                pwl(vec![Knot::new(-1.0, 1.0), Knot::new(0.0, 0.0), Knot::new(1.0, 0.0)])?,
            ],
            1.0,
        )?,
        "example-d" => StructuredBandit::new(
            unit,
            vec![
                pwl(vec![
                    Knot::new(-1.0, 0.5),
                    Knot::jump(-0.5, 0.5, -0.5),
                    Knot::jump(0.5, -0.5, 0.5),
                    Knot::new(1.0, 1.0),
                ])?,
                pwl(vec![Knot::new(-1.0, 0.5), Knot::new(-0.5, 0.0), Knot::jump(0.5, 0.0, 1.0), Knot::new(1.0, 1.0)])?,
            ],
            1.0,
        )?
        .mark_reconstructed(),
        "example-e" => StructuredBandit::new(
            unit,
            vec![
                pwl(vec![Knot::new(-1.0, 0.5), Knot::jump(-0.5, 0.5, -0.5), Knot::new(1.0, 1.0)])?,
                pwl(vec![Knot::new(-1.0, 1.0), Knot::jump(-0.5, 1.0, 0.0), Knot::new(1.0, 0.0)])?,
            ],
            1.0,
        )?
        .mark_reconstructed(),
        "example-f" => {
            // drawn levels 1, 2, 3 map to -1/2, 0, 1/2
            let lv = |ys: [f64; 6]| ys.map(|y| (y - 2.0) / 2.0);
            StructuredBandit::new(
                ParameterSpace::interval(0.0, 9.0),
                vec![
                    cells(&lv([1.0, 2.0, 3.0, 3.0, 2.0, 1.0]), 1.5)?,
                    cells(&lv([2.0, 1.0, 1.0, 2.0, 3.0, 3.0]), 1.5)?,
                    cells(&lv([3.0, 3.0, 2.0, 1.0, 1.0, 2.0]), 1.5)?,
                ],
                1.0,
            )?
            .mark_reconstructed()
        }
        "ambiguous-a" => StructuredBandit::new(
            unit.with_ambiguous_intervals(vec![(-1.0, 0.0)]),
            vec![
                pwl(vec![Knot::new(-1.0, 0.0), Knot::new(0.0, 0.0), Knot::new(1.0, -1.0)])?,
                pwl(vec![Knot::new(-1.0, -1.0), Knot::jump(0.0, -1.0, 0.0).taking(Side::Left), Knot::new(1.0, 0.0)])?,
            ],
            1.0,
        )?,
        "counter-b" => StructuredBandit::new(
            unit,
            vec![line(0.0, 0.0)?, pwl(vec![Knot::new(-1.0, -0.5), Knot::jump(0.0, -0.5, 0.5), Knot::new(1.0, 0.5)])?],
            1.0,
        )?
        .mark_reconstructed(),
        "counter-d" => StructuredBandit::new(
            unit.with_ambiguous_intervals(vec![(-1.0, 0.0)]),
            vec![
                pwl(vec![Knot::new(-1.0, 0.0), Knot::new(0.0, 0.0), Knot::new(1.0, 0.5)])?,
                pwl(vec![Knot::new(-1.0, -1.0), Knot::jump(0.0, -1.0, 0.0).taking(Side::Left), Knot::new(1.0, 1.0)])?,
            ],
            1.0,
        )?
        .mark_reconstructed(),
        other => return Err(Error::UnknownProblem(other.to_string())),
    };
    Ok(bandit.named(name))
}
