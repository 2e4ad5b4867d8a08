//! Piecewise constant functions on `[0,1)`.
//!
//! Pieces are left-closed and right-open, so evaluating at an interior
//! breakpoint returns the value of the piece to its right.

use std::fmt;

use crate::error::{Error, Result};

/// A half-open interval `[low, high)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub low: f64,
    pub high: f64,
}

impl Interval {
    pub const UNIT: Interval = Interval {
        low: 0.0,
        high: 1.0,
    };

    pub fn new(low: f64, high: f64) -> Self {
        Interval { low, high }
    }

    pub fn len(&self) -> f64 {
        self.high - self.low
    }

    pub fn is_empty(&self) -> bool {
        self.high <= self.low
    }

    pub fn contains(&self, x: f64) -> bool {
        self.low <= x && x < self.high
    }

    pub fn midpoint(&self) -> f64 {
        self.low + 0.5 * self.len()
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {})", self.low, self.high)
    }
}

/// Sorted breakpoints `0 = a_0 < a_1 < ... < a_k = 1` and one value per piece.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseConstantFn {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

impl PiecewiseConstantFn {
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if breakpoints.len() < 2 {
            return Err(Error::domain("need at least the breakpoints 0 and 1"));
        }
        if breakpoints[0] != 0.0 || *breakpoints.last().unwrap() != 1.0 {
            return Err(Error::domain("breakpoints must start at 0 and end at 1"));
        }
        if let Some(w) = breakpoints.windows(2).find(|w| !(w[0] < w[1])) {
            return Err(Error::domain(format!(
                "breakpoints not strictly increasing at {} -> {}",
                w[0], w[1]
            )));
        }
        if values.len() != breakpoints.len() - 1 {
            return Err(Error::domain(format!(
                "{} breakpoints need {} values, got {}",
                breakpoints.len(),
                breakpoints.len() - 1,
                values.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::domain(format!("non-finite piece value {v}")));
        }
        Ok(PiecewiseConstantFn {
            breakpoints,
            values,
        })
    }

    pub fn constant(value: f64) -> Self {
        PiecewiseConstantFn {
            breakpoints: vec![0.0, 1.0],
            values: vec![value],
        }
    }

    /// The function equal to `value` on `interval` and `outside` elsewhere.
    pub fn indicator(interval: Interval, value: f64, outside: f64) -> Result<Self> {
        let Interval { low, high } = interval;
        if !(0.0 <= low && low < high && high <= 1.0) {
            return Err(Error::domain(format!("bad interval {interval}")));
        }
        let mut bps = vec![0.0];
        let mut vals = Vec::with_capacity(3);
        if low > 0.0 {
            bps.push(low);
            vals.push(outside);
        }
        vals.push(value);
        if high < 1.0 {
            bps.push(high);
            vals.push(outside);
        }
        bps.push(1.0);
        PiecewiseConstantFn::new(bps, vals)
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn piece_count(&self) -> usize {
        self.values.len()
    }

    pub fn pieces(&self) -> impl Iterator<Item = (Interval, f64)> + '_ {
        self.breakpoints
            .windows(2)
            .zip(&self.values)
            .map(|(w, &v)| (Interval::new(w[0], w[1]), v))
    }

    /// Index of the piece containing `x`. Caller guarantees `0 <= x < 1`.
    fn piece_index(&self, x: f64) -> usize {
        self.breakpoints.partition_point(|&b| b <= x) - 1
    }

    pub fn evaluate(&self, x: f64) -> Result<f64> {
        if !(0.0..1.0).contains(&x) {
            return Err(Error::domain(format!("{x} is outside [0,1)")));
        }
        Ok(self.values[self.piece_index(x)])
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Pointwise sum over the merged refinement of both breakpoint sets.
    pub fn sum(&self, other: &PiecewiseConstantFn) -> PiecewiseConstantFn {
        let (a, b) = (&self.breakpoints, &other.breakpoints);
        let mut bps = Vec::with_capacity(a.len() + b.len() - 1);
        let mut vals = Vec::with_capacity(a.len() + b.len() - 2);
        bps.push(0.0);
        let (mut i, mut j) = (1, 1);
        while i < a.len() && j < b.len() {
            vals.push(self.values[i - 1] + other.values[j - 1]);
            let (x, y) = (a[i], b[j]);
            if x < y {
                bps.push(x);
                i += 1;
            } else if y < x {
                bps.push(y);
                j += 1;
            } else {
                bps.push(x);
                i += 1;
                j += 1;
            }
        }
        PiecewiseConstantFn {
            breakpoints: bps,
            values: vals,
        }
    }

    /// Sum of many functions by balanced pairwise reduction.
    pub fn sum_all(fns: &[PiecewiseConstantFn]) -> PiecewiseConstantFn {
        match fns.len() {
            0 => PiecewiseConstantFn::constant(0.0),
            1 => fns[0].clone(),
            n => {
                let (l, r) = fns.split_at(n / 2);
                PiecewiseConstantFn::sum_all(l).sum(&PiecewiseConstantFn::sum_all(r))
            }
        }
    }

    /// Leftmost piece attaining the maximum value.
    pub fn argmax_interval(&self) -> (Interval, f64) {
        let mut best = 0;
        for (i, &v) in self.values.iter().enumerate().skip(1) {
            if v > self.values[best] {
                best = i;
            }
        }
        (
            Interval::new(self.breakpoints[best], self.breakpoints[best + 1]),
            self.values[best],
        )
    }

    /// Drops breakpoints separating pieces with identical values.
    pub fn merge_equal(&self) -> PiecewiseConstantFn {
        let mut bps = vec![0.0];
        let mut vals = vec![self.values[0]];
        for (i, &v) in self.values.iter().enumerate().skip(1) {
            if v != *vals.last().unwrap() {
                bps.push(self.breakpoints[i]);
                vals.push(v);
            }
        }
        bps.push(1.0);
        PiecewiseConstantFn {
            breakpoints: bps,
            values: vals,
        }
    }

    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> Result<PiecewiseConstantFn> {
        PiecewiseConstantFn::new(
            self.breakpoints.clone(),
            self.values.iter().map(|&v| f(v)).collect(),
        )
    }

    /// Two-line text form: breakpoints, then values, space separated.
    pub fn to_text(&self) -> String {
        self.to_string()
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let parse_line = |line: Option<&str>, no: usize| -> Result<Vec<f64>> {
            let line = line.ok_or_else(|| Error::parse(no, "missing line"))?;
            line.split_whitespace()
                .map(|tok| {
                    tok.parse::<f64>()
                        .map_err(|e| Error::parse(no, format!("{tok:?}: {e}")))
                })
                .collect()
        };
        let bps = parse_line(lines.next(), 1)?;
        let vals = parse_line(lines.next(), 2)?;
        PiecewiseConstantFn::new(bps, vals)
    }
}

impl fmt::Display for PiecewiseConstantFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |xs: &[f64]| {
            xs.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        writeln!(f, "{}", join(&self.breakpoints))?;
        writeln!(f, "{}", join(&self.values))
    }
}
