//! Exact best-in-hindsight bookkeeping.

use crate::error::{Error, Result};
use crate::lazy_tree::{Additive, LazyIntervalTree};
use crate::piecewise::{Interval, PiecewiseConstantFn};

/// Running sum `F = f_1 + ... + f_t` kept in an additive interval tree.
#[derive(Debug, Clone, Default)]
pub struct CumulativePayoff {
    tree: LazyIntervalTree<Additive>,
    rounds: usize,
}

impl CumulativePayoff {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rounds(&self) -> usize {
        self.rounds
    }

    pub fn add(&mut self, f: &PiecewiseConstantFn) -> Result<()> {
        for (piece, v) in f.pieces() {
            self.tree.range_update(piece, v)?;
        }
        self.rounds += 1;
        Ok(())
    }

    /// `(piece, F on that piece)` for every leaf, left to right.
    pub fn pieces(&self) -> Vec<(Interval, f64)> {
        self.tree
            .leaves()
            .into_iter()
            .map(|l| (l.interval, l.mass / l.interval.len()))
            .collect()
    }

    /// Leftmost maximal piece of `F` and its value.
    pub fn best(&self) -> Result<(Interval, f64)> {
        if self.rounds == 0 {
            return Err(Error::protocol("no rounds recorded yet"));
        }
        let mut best: Option<(Interval, f64)> = None;
        for (iv, v) in self.pieces() {
            if best.is_none_or(|(_, b)| v > b) {
                best = Some((iv, v));
            }
        }
        Ok(best.expect("tree always has a leaf"))
    }

    pub fn tree(&self) -> &LazyIntervalTree<Additive> {
        &self.tree
    }
}
