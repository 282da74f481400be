//! Plain-text data tables: `#` header lines followed by whitespace
//! separated numeric rows printed with six significant digits.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

/// `printf("%g")`: six significant digits, trailing zeros removed,
/// scientific notation outside `[1e-4, 1e6)`.
pub fn format_g(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..6).contains(&exp) {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{m}e{sign}{:02}", exp.abs());
    }
    let decimals = (5 - exp).max(0) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    /// `key = value` pairs echoed in the header.
    pub meta: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn meta(&self, key: &str) -> Option<&str> {
        self.meta.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r[j]).collect()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.meta {
            let _ = writeln!(out, "# {k} = {v}");
        }
        let _ = writeln!(out, "# columns: {}", self.columns.join(" "));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&v| format_g(v)).collect();
            let _ = writeln!(out, "{}", cells.join(" "));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Table> {
        let mut table = Table::default();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                let rest = rest.trim();
                if let Some(cols) = rest.strip_prefix("columns:") {
                    table.columns = cols.split_whitespace().map(String::from).collect();
                } else if let Some((k, v)) = rest.split_once(" = ") {
                    table.meta.push((k.trim().to_string(), v.trim().to_string()));
                }
                continue;
            }
            let row = line
                .split_whitespace()
                .map(|c| c.parse::<f64>().map_err(|_| Error::Table(format!("line {}: bad number `{c}`", lineno + 1))))
                .collect::<Result<Vec<_>>>()?;
            if let Some(first) = table.rows.first() {
                if first.len() != row.len() {
                    return Err(Error::Table(format!("line {}: expected {} columns", lineno + 1, first.len())));
                }
            }
            table.rows.push(row);
        }
        Ok(table)
    }
}

pub fn write_table(table: &Table, path: &Path) -> Result<()> {
    if table.rows.is_empty() {
        return Err(Error::Table("refusing to write an empty table".into()));
    }
    std::fs::write(path, table.render())?;
    Ok(())
}

pub fn read_table(path: &Path) -> Result<Table> {
    Table::parse(&std::fs::read_to_string(path)?)
}

/// Whether `a` and `b` agree to six significant digits.
pub fn same_to_six_digits(a: f64, b: f64) -> bool {
    format_g(a) == format_g(b) || (a - b).abs() <= 5e-6 * a.abs().max(b.abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn g_formatting() {
        let cases = [
            (0.0, "0"),
            (-0.0, "0"),
            (1.0, "1"),
            (0.5, "0.5"),
            (-0.2, "-0.2"),
            (123456.0, "123456"),
            (1234567.0, "1.23457e+06"),
            (0.0001, "0.0001"),
            (0.00001234, "1.234e-05"),
            (3.14159265, "3.14159"),
            (999999.5, "1e+06"),
            (100.0, "100"),
            (0.1 + 0.2, "0.3"),
        ];
        for (x, s) in cases {
            assert_eq!(format_g(x), s, "{x}");
        }
    }

    #[test]
    fn zero_row() {
        let t = Table { meta: vec![], columns: vec!["theta".into(), "a".into(), "b".into()], rows: vec![vec![0.0; 3]] };
        assert!(t.render().ends_with("\n0 0 0\n"));
    }

    #[test]
    fn malformed_tables() {
        assert!(Table::parse("1 2\n3\n").is_err());
        assert!(Table::parse("1 x\n").is_err());
    }

    proptest! {
        #[test]
        fn round_trip(rows in proptest::collection::vec(proptest::collection::vec(-1e7f64..1e7, 3), 1..20)) {
            let t = Table { meta: vec![("seed".into(), "1".into())], columns: vec!["x".into(), "y".into(), "z".into()], rows };
            let back = Table::parse(&t.render()).unwrap();
            prop_assert_eq!(&back.meta, &t.meta);
            prop_assert_eq!(&back.columns, &t.columns);
            for (r0, r1) in t.rows.iter().zip(&back.rows) {
                for (a, b) in r0.iter().zip(r1) {
                    prop_assert!(same_to_six_digits(*a, *b), "{} vs {}", a, b);
                }
            }
        }
    }
}
