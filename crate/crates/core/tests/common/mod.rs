//! Eager reference implementations shared by the integration tests.

#![allow(dead_code)]

use smoothopt::{Interval, PiecewiseConstantFn};

/// Flat leaf array updated eagerly: no messages, no tree.
#[derive(Debug, Clone)]
pub struct DenseOracle {
    /// `cuts[i]..cuts[i + 1]` is leaf `i`.
    pub cuts: Vec<f64>,
    pub mass: Vec<f64>,
    additive: bool,
}

impl DenseOracle {
    pub fn multiplicative() -> Self {
        DenseOracle {
            cuts: vec![0.0, 1.0],
            mass: vec![1.0],
            additive: false,
        }
    }

    pub fn additive() -> Self {
        DenseOracle {
            cuts: vec![0.0, 1.0],
            mass: vec![0.0],
            additive: true,
        }
    }

    pub fn insert(&mut self, p: f64) {
        let i = self.cuts.partition_point(|&c| c <= p);
        if self.cuts[i - 1] == p {
            return;
        }
        let (lo, hi) = (self.cuts[i - 1], self.cuts[i]);
        let m = self.mass[i - 1];
        let left = m * (p - lo) / (hi - lo);
        self.mass[i - 1] = left;
        self.mass.insert(i, m - left);
        self.cuts.insert(i, p);
    }

    pub fn range_update(&mut self, lo: f64, hi: f64, delta: f64) {
        if lo > 0.0 {
            self.insert(lo);
        }
        if hi < 1.0 {
            self.insert(hi);
        }
        for i in 0..self.mass.len() {
            let (a, b) = (self.cuts[i], self.cuts[i + 1]);
            if a >= lo && b <= hi {
                if self.additive {
                    self.mass[i] += delta * (b - a);
                } else {
                    self.mass[i] *= delta;
                }
            }
        }
    }

    pub fn total(&self) -> f64 {
        self.mass.iter().sum()
    }

    pub fn leaves(&self) -> Vec<(Interval, f64)> {
        self.mass
            .iter()
            .enumerate()
            .map(|(i, &m)| (Interval::new(self.cuts[i], self.cuts[i + 1]), m))
            .collect()
    }
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

/// Largest relative deviation between tree leaves and oracle leaves, or
/// `None` if the partitions differ.
pub fn max_leaf_error(tree: &[smoothopt::LeafMass], oracle: &DenseOracle) -> Option<f64> {
    let want = oracle.leaves();
    if tree.len() != want.len() {
        return None;
    }
    let mut worst: f64 = 0.0;
    for (l, (iv, m)) in tree.iter().zip(want) {
        if l.interval != iv {
            return None;
        }
        let scale = l.mass.abs().max(m.abs());
        if scale > 0.0 {
            worst = worst.max((l.mass - m).abs() / scale);
        }
    }
    Some(worst)
}

/// `sum_i f_i`, evaluated pointwise at `x`.
pub fn pointwise_sum(fs: &[PiecewiseConstantFn], x: f64) -> f64 {
    fs.iter().map(|f| f.evaluate(x).unwrap()).sum()
}

/// Least-squares fit `y = a + b x`; returns `(a, b, r_squared)`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let b = sxy / sxx;
    let a = my - b * mx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    (a, b, r2)
}
