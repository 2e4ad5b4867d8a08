//! Bandit learner over a fixed grid of `1/mu` cells.
//!
//! Only `f_t(x_t)` is observed. The learner spreads the importance-weighted
//! estimate `f_t(x_t) / p_t(I_t)` over the whole cell `I_t` that contains
//! `x_t` and mixes its exponential-weights density with a uniform
//! exploration term of weight `gamma`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::forecaster::MassGuard;
use crate::lazy_tree::{LazyIntervalTree, Multiplicative};
use crate::piecewise::{Interval, PiecewiseConstantFn};

/// Learning rate, exploration rate and grid size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BanditParams {
    pub eta: f64,
    pub gamma: f64,
    /// Number of grid cells, `1/mu`.
    pub cells: usize,
}

impl BanditParams {
    pub fn new(eta: f64, cells: usize, gamma: f64) -> Result<Self> {
        let p = BanditParams { eta, gamma, cells };
        p.validate()?;
        Ok(p)
    }

    pub fn mu(&self) -> f64 {
        1.0 / self.cells as f64
    }

    /// `mu = T^{-1/3}` rounded so that `1/mu` is an integer, `gamma =
    /// min(T^{-1/3}, 1/2)` and `eta = gamma * mu`.
    pub fn for_horizon(horizon: usize) -> Result<Self> {
        if horizon == 0 {
            return Err(Error::domain("horizon must be at least 1"));
        }
        let cube_root = (horizon as f64).cbrt();
        let cells = (cube_root.round() as usize).max(1);
        let gamma = (1.0 / cube_root).min(0.5);
        let mu = 1.0 / cells as f64;
        BanditParams::new(gamma * mu, cells, gamma)
    }

    pub fn validate(&self) -> Result<()> {
        if self.cells == 0 {
            return Err(Error::domain("need at least one grid cell"));
        }
        if !(self.gamma > 0.0 && self.gamma <= 0.5) {
            return Err(Error::domain(format!("gamma must lie in (0, 1/2], got {}", self.gamma)));
        }
        if !(self.eta > 0.0) {
            return Err(Error::domain(format!("eta must be positive, got {}", self.eta)));
        }
        if self.eta > self.gamma * self.mu() * (1.0 + 1e-12) {
            return Err(Error::domain(format!(
                "eta = {} exceeds gamma * mu = {}",
                self.eta,
                self.gamma * self.mu()
            )));
        }
        Ok(())
    }
}

/// `2 gamma T + 2 (eta/mu) T + ln(1/mu)/eta + k sigma mu T`.
pub fn theoretical_bound(
    horizon: usize,
    pieces: usize,
    sigma: f64,
    mu: f64,
    gamma: f64,
    eta: f64,
) -> Result<f64> {
    let cells = 1.0 / mu;
    if !(mu > 0.0 && mu <= 1.0) || (cells - cells.round()).abs() > 1e-9 * cells {
        return Err(Error::domain(format!("1/mu must be a natural number, got mu = {mu}")));
    }
    if !(sigma > 0.0) || pieces == 0 {
        return Err(Error::domain("need k >= 1 and sigma > 0"));
    }
    BanditParams::new(eta, cells.round() as usize, gamma)?;
    let t = horizon as f64;
    Ok(2.0 * gamma * t + 2.0 * (eta / mu) * t + (1.0 / mu).ln() / eta + pieces as f64 * sigma * mu * t)
}

/// Grid search for parameters minimizing [`theoretical_bound`]. For each
/// grid size and exploration rate the learning rate is the closed-form
/// minimizer of the `eta` terms, capped at `gamma * mu`.
pub fn tune_params(horizon: usize, pieces: usize, sigma: f64) -> Result<(BanditParams, f64)> {
    if horizon == 0 {
        return Err(Error::domain("horizon must be at least 1"));
    }
    let t = horizon as f64;
    let max_cells = (8.0 * t.cbrt()).ceil() as usize + 16;
    let gammas: Vec<f64> = (0..60).map(|i| 0.5 * 0.85f64.powi(i)).collect();
    let mut best: Option<(BanditParams, f64)> = None;
    for cells in 2..=max_cells {
        let mu = 1.0 / cells as f64;
        let eta_free = (mu * mu.recip().ln() / (2.0 * t)).sqrt();
        for &gamma in &gammas {
            let eta = eta_free.min(gamma * mu);
            let bound = theoretical_bound(horizon, pieces, sigma, mu, gamma, eta)?;
            if best.is_none_or(|(_, b)| bound < b) {
                best = Some((BanditParams { eta, gamma, cells }, bound));
            }
        }
    }
    Ok(best.expect("at least one grid point"))
}

/// One row of a bandit trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BanditTrace {
    pub t: usize,
    pub x: f64,
    pub cell: usize,
    pub observed: f64,
    pub cell_probability: f64,
    pub estimate: f64,
}

impl BanditTrace {
    pub const CSV_HEADER: &'static str = "t,x,cell,observed,cell_probability,estimate";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.t, self.x, self.cell, self.observed, self.cell_probability, self.estimate
        )
    }
}

#[derive(Debug, Clone)]
pub struct BanditLearner {
    params: BanditParams,
    tree: LazyIntervalTree<Multiplicative>,
    bounds: Vec<f64>,
    t: usize,
    payoff_total: f64,
    log_scale_offset: f64,
    rng: ChaCha8Rng,
    pending: Option<(f64, usize)>,
    guard: MassGuard,
}

impl BanditLearner {
    pub fn new(params: BanditParams, seed: u64) -> Result<Self> {
        params.validate()?;
        let n = params.cells;
        let bounds: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
        let mut tree = LazyIntervalTree::new();
        for &b in &bounds[1..n] {
            tree.insert(b)?;
        }
        Ok(BanditLearner {
            params,
            tree,
            bounds,
            t: 0,
            payoff_total: 0.0,
            log_scale_offset: 0.0,
            rng: ChaCha8Rng::seed_from_u64(seed),
            pending: None,
            guard: MassGuard::default(),
        })
    }

    pub fn params(&self) -> BanditParams {
        self.params
    }

    pub fn rounds(&self) -> usize {
        self.t
    }

    pub fn payoff_total(&self) -> f64 {
        self.payoff_total
    }

    pub fn tree(&self) -> &LazyIntervalTree<Multiplicative> {
        &self.tree
    }

    pub fn cell(&self, i: usize) -> Interval {
        Interval::new(self.bounds[i], self.bounds[i + 1])
    }

    /// Index of the grid cell containing `x`.
    pub fn cell_of(&self, x: f64) -> usize {
        let n = self.params.cells;
        let mut i = ((x * n as f64) as usize).min(n - 1);
        while i > 0 && x < self.bounds[i] {
            i -= 1;
        }
        while i + 1 < n && x >= self.bounds[i + 1] {
            i += 1;
        }
        i
    }

    /// `p_t(I)` for every cell: `(1 - gamma) w(I)/W + gamma mu`.
    pub fn cell_probabilities(&self) -> Vec<f64> {
        let total = self.tree.total_mass();
        let (gamma, mu) = (self.params.gamma, self.params.mu());
        self.tree
            .leaves()
            .iter()
            .map(|l| (1.0 - gamma) * l.mass / total + gamma * mu)
            .collect()
    }

    /// Draws `x_t`: uniform with probability `gamma`, otherwise from the
    /// weights. Returns the point and its cell.
    pub fn select(&mut self) -> Result<(f64, usize)> {
        if self.pending.is_some() {
            return Err(Error::protocol("select called twice in one round"));
        }
        let x = if self.rng.random::<f64>() < self.params.gamma {
            self.rng.random::<f64>()
        } else {
            self.tree.draw(&mut self.rng)?
        };
        let cell = self.cell_of(x);
        self.pending = Some((x, cell));
        Ok((x, cell))
    }

    /// Feeds back `f_t(x_t)`.
    pub fn update(&mut self, observed: f64) -> Result<BanditTrace> {
        if !(0.0..=1.0).contains(&observed) {
            return Err(Error::domain(format!("observed payoff {observed} outside [0,1]")));
        }
        let (x, cell) = self
            .pending
            .take()
            .ok_or_else(|| Error::protocol("update called before select"))?;
        let (gamma, mu, eta) = (self.params.gamma, self.params.mu(), self.params.eta);
        let leaf_mass = self.tree.leaf_at(x)?.mass;
        let p_cell = (1.0 - gamma) * leaf_mass / self.tree.total_mass() + gamma * mu;
        let estimate = observed / p_cell;
        if eta * estimate > 1.0 + 1e-12 {
            return Err(Error::domain(format!(
                "importance estimate {estimate} violates eta * estimate <= 1"
            )));
        }
        if observed > 0.0 {
            self.tree.range_update(self.cell(cell), (eta * estimate).exp())?;
        }
        self.t += 1;
        self.payoff_total += observed;
        self.log_scale_offset += self.guard.apply(&mut self.tree)?;
        Ok(BanditTrace {
            t: self.t,
            x,
            cell,
            observed,
            cell_probability: p_cell,
            estimate,
        })
    }

    /// Regret against the best fixed point for the full payoff functions the
    /// harness retained, one per round played.
    pub fn regret_vs(&self, history: &[PiecewiseConstantFn]) -> Result<f64> {
        if history.len() != self.t {
            return Err(Error::protocol(format!(
                "{} payoff functions for {} rounds",
                history.len(),
                self.t
            )));
        }
        if history.is_empty() {
            return Ok(0.0);
        }
        let opt = PiecewiseConstantFn::sum_all(history).argmax_interval().1;
        Ok(opt - self.payoff_total)
    }
}
