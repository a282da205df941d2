//! `t,value` text format shared by both function types. Numbers carry 17
//! significant digits so a write/read cycle is lossless. A hitting law with a
//! nonzero slope beyond its last knot gets a trailing `# tail_slope=` line.

use std::io::{BufRead, Write};

use super::{PiecewiseLinear, StepFn};
use crate::error::{Error, Result};

pub const HEADER: &str = "t,value";

/// Which function type a CSV file holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CsvKind {
    Step,
    Linear,
}

fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_step<W: Write>(f: &StepFn<f64>, mut out: W) -> Result<()> {
    writeln!(out, "{HEADER}")?;
    for (t, v) in f.breakpoints().iter().zip(f.values()) {
        writeln!(out, "{},{}", fmt17(*t), fmt17(*v))?;
    }
    Ok(())
}

pub fn write_linear<W: Write>(f: &PiecewiseLinear<f64>, mut out: W) -> Result<()> {
    writeln!(out, "{HEADER}")?;
    for (t, y) in f.knots() {
        writeln!(out, "{},{}", fmt17(*t), fmt17(*y))?;
    }
    if *f.tail_slope() != 0.0 {
        writeln!(out, "# tail_slope={}", fmt17(*f.tail_slope()))?;
    }
    Ok(())
}

struct Rows {
    rows: Vec<(f64, f64)>,
    tail_slope: f64,
}

fn read_rows<R: BufRead>(input: R) -> Result<Rows> {
    let mut rows = Vec::new();
    let mut tail_slope = 0.0;
    let mut saw_header = false;
    for (lineno, line) in input.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some(v) = comment.trim().strip_prefix("tail_slope=") {
                tail_slope = v
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("line {}: bad tail slope", lineno + 1)))?;
            }
            continue;
        }
        if !saw_header {
            if line.replace(' ', "") != HEADER {
                return Err(Error::Parse(format!("expected header `{HEADER}`, got `{line}`")));
            }
            saw_header = true;
            continue;
        }
        let (a, b) = line
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("line {}: expected two columns", lineno + 1)))?;
        let parse = |s: &str| {
            s.trim()
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| Error::Parse(format!("line {}: bad number `{s}`", lineno + 1)))
        };
        rows.push((parse(a)?, parse(b)?));
    }
    if !saw_header {
        return Err(Error::Parse("missing header".into()));
    }
    Ok(Rows { rows, tail_slope })
}

pub fn read_step<R: BufRead>(input: R) -> Result<StepFn<f64>> {
    let rows = read_rows(input)?;
    let (b, v) = rows.rows.into_iter().unzip();
    StepFn::new(b, v)
}

pub fn read_linear<R: BufRead>(input: R) -> Result<PiecewiseLinear<f64>> {
    let rows = read_rows(input)?;
    PiecewiseLinear::with_tail_slope(rows.rows, rows.tail_slope)
}

/// Guesses the function type: hitting laws always start with the knot
/// `(0, 0)`, which a canonical step function never lists.
pub fn sniff_kind(text: &str) -> Result<CsvKind> {
    let rows = read_rows(text.as_bytes())?;
    match rows.rows.first() {
        Some((t, v)) if *t == 0.0 && *v == 0.0 => Ok(CsvKind::Linear),
        _ => Ok(CsvKind::Step),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distfn::{cf_hitting, forward_transform};
    use proptest::prelude::*;

    fn to_string(f: impl FnOnce(&mut Vec<u8>) -> Result<()>) -> String {
        let mut buf = Vec::new();
        f(&mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn header_and_rows() {
        let s = to_string(|b| write_step(&StepFn::unit_step(1.0).unwrap(), b));
        assert_eq!(s, "t,value\n1.0000000000000000e0,1.0000000000000000e0\n");
    }

    #[test]
    fn tail_slope_survives() {
        let f = forward_transform(&StepFn::new(vec![0.5], vec![0.75]).unwrap());
        let s = to_string(|b| write_linear(&f, b));
        assert!(s.contains("# tail_slope="));
        assert_eq!(read_linear(s.as_bytes()).unwrap(), f);
        assert_eq!(sniff_kind(&s).unwrap(), CsvKind::Linear);
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(read_step("t,value\n0.5,0.7\n0.6,0.2\n".as_bytes()).is_err());
        assert!(read_step("x,y\n0.5,0.7\n".as_bytes()).is_err());
        assert!(read_step("t,value\n0.5;0.7\n".as_bytes()).is_err());
        assert!(read_step("t,value\nnan,0.7\n".as_bytes()).is_err());
    }

    #[test]
    fn cf_law_round_trips_bitwise() {
        let f = cf_hitting(0.3, 0.7).unwrap();
        let s = to_string(|b| write_linear(&f, b));
        assert_eq!(read_linear(s.as_bytes()).unwrap(), f);
    }

    proptest! {
        #[test]
        fn step_csv_is_lossless(raw in proptest::collection::vec((1e-9f64..100.0, 0.0f64..1.0), 1..30)) {
            let mut ts: Vec<f64> = raw.iter().map(|p| p.0).collect();
            let mut vs: Vec<f64> = raw.iter().map(|p| p.1).collect();
            ts.sort_by(|a, b| a.total_cmp(b));
            ts.dedup();
            vs.truncate(ts.len());
            vs.sort_by(|a, b| a.total_cmp(b));
            let f = StepFn::new(ts, vs).unwrap();
            let s = to_string(|b| write_step(&f, b));
            prop_assert_eq!(read_step(s.as_bytes()).unwrap(), f);
        }
    }
}
