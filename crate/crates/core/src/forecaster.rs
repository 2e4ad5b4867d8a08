//! Continuous exponentially weighted forecaster (full information).
//!
//! Round `t` samples `x_t` with density proportional to `exp(eta * F_t(x))`,
//! where `F_t` is the sum of the payoff functions seen so far. Weights live
//! in a multiplicative [`LazyIntervalTree`]; `F_t` itself is tracked exactly
//! by a [`CumulativePayoff`] so regret is never read back through `exp`/`ln`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lazy_tree::{LazyIntervalTree, Multiplicative, UpdateLaw};
use crate::piecewise::{Interval, PiecewiseConstantFn};
use crate::regret::CumulativePayoff;

/// Total-mass window outside which the weights are rescaled to 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MassGuard {
    pub low: f64,
    pub high: f64,
}

impl Default for MassGuard {
    fn default() -> Self {
        MassGuard {
            low: 1e-100,
            high: 1e100,
        }
    }
}

impl MassGuard {
    /// Rescales `tree` if its mass left the window; returns `ln` of the
    /// factor that was divided out, or 0.
    pub(crate) fn apply(&self, tree: &mut LazyIntervalTree<Multiplicative>) -> Result<f64> {
        let total = tree.total_mass();
        if total >= self.low && total <= self.high {
            return Ok(0.0);
        }
        tree.scale_all(Multiplicative::invert(total))?;
        Ok(total.ln())
    }
}

/// One row of a per-round trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoundTrace {
    pub t: usize,
    pub x: f64,
    pub payoff: f64,
    /// Best fixed point's cumulative payoff after this round, if requested.
    pub opt: Option<f64>,
    pub payoff_total: f64,
}

impl RoundTrace {
    pub const CSV_HEADER: &'static str = "t,x,payoff,opt,payoff_total";

    pub fn csv_row(&self) -> String {
        let opt = self.opt.map(|v| v.to_string()).unwrap_or_default();
        format!("{},{},{},{},{}", self.t, self.x, self.payoff, opt, self.payoff_total)
    }
}

/// `sqrt(ln(k^2 T^3 sigma) / ((e - 2) T))`, clamped to `(0, 1]`.
pub fn suggested_eta(horizon: usize, pieces: usize, sigma: f64) -> Result<f64> {
    if horizon == 0 || pieces == 0 || !(sigma > 0.0) {
        return Err(Error::domain(format!(
            "need T >= 1, k >= 1, sigma > 0 (got T={horizon}, k={pieces}, sigma={sigma})"
        )));
    }
    let (t, k) = (horizon as f64, pieces as f64);
    let log_arg = 2.0 * k.ln() + 3.0 * t.ln() + sigma.ln();
    if !(log_arg > 0.0) {
        return Err(Error::domain("k^2 T^3 sigma must exceed 1"));
    }
    Ok((log_arg / ((std::f64::consts::E - 2.0) * t)).sqrt().min(1.0))
}

/// `2 sqrt((e - 2) ln(k^2 T^3 sigma) T) + 1`, the expected-regret bound
/// achieved with [`suggested_eta`].
pub fn regret_bound(horizon: usize, pieces: usize, sigma: f64) -> f64 {
    let (t, k) = (horizon as f64, pieces as f64);
    let log_arg = 2.0 * k.ln() + 3.0 * t.ln() + sigma.ln();
    2.0 * ((std::f64::consts::E - 2.0) * log_arg * t).sqrt() + 1.0
}

#[derive(Debug, Clone)]
pub struct Forecaster {
    eta: f64,
    tree: LazyIntervalTree<Multiplicative>,
    hindsight: CumulativePayoff,
    t: usize,
    log_scale_offset: f64,
    payoff_total: f64,
    rng: ChaCha8Rng,
    pending: Option<f64>,
    guard: MassGuard,
}

impl Forecaster {
    pub fn new(eta: f64, seed: u64) -> Result<Self> {
        if !(eta > 0.0 && eta.is_finite()) {
            return Err(Error::domain(format!("learning rate must be positive, got {eta}")));
        }
        Ok(Forecaster {
            eta,
            tree: LazyIntervalTree::new(),
            hindsight: CumulativePayoff::new(),
            t: 0,
            log_scale_offset: 0.0,
            payoff_total: 0.0,
            rng: ChaCha8Rng::seed_from_u64(seed),
            pending: None,
            guard: MassGuard::default(),
        })
    }

    pub fn with_guard(mut self, guard: MassGuard) -> Self {
        self.guard = guard;
        self
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// Rounds completed.
    pub fn rounds(&self) -> usize {
        self.t
    }

    pub fn payoff_total(&self) -> f64 {
        self.payoff_total
    }

    /// Sum of `ln` of every factor divided out of the weights.
    pub fn log_scale_offset(&self) -> f64 {
        self.log_scale_offset
    }

    pub fn tree(&self) -> &LazyIntervalTree<Multiplicative> {
        &self.tree
    }

    pub fn hindsight(&self) -> &CumulativePayoff {
        &self.hindsight
    }

    pub fn select(&mut self) -> Result<f64> {
        if self.pending.is_some() {
            return Err(Error::protocol("select called twice in one round"));
        }
        let x = self.tree.draw(&mut self.rng)?;
        self.pending = Some(x);
        Ok(x)
    }

    /// Plays `x` instead of sampling. Meant for replays and tests.
    pub fn force_select(&mut self, x: f64) -> Result<f64> {
        if self.pending.is_some() {
            return Err(Error::protocol("select called twice in one round"));
        }
        if !(0.0..1.0).contains(&x) {
            return Err(Error::domain(format!("{x} is outside [0,1)")));
        }
        self.pending = Some(x);
        Ok(x)
    }

    /// Reveals `f_t`; returns the payoff `f_t(x_t)`.
    pub fn update(&mut self, f: &PiecewiseConstantFn) -> Result<f64> {
        if f.min_value() < 0.0 || f.max_value() > 1.0 {
            return Err(Error::domain("payoff values must lie in [0,1]"));
        }
        let x = self
            .pending
            .take()
            .ok_or_else(|| Error::protocol("update called before select"))?;
        let payoff = f.evaluate(x)?;
        for (piece, v) in f.pieces() {
            self.tree.range_update(piece, (self.eta * v).exp())?;
        }
        self.hindsight.add(f)?;
        self.t += 1;
        self.payoff_total += payoff;
        self.log_scale_offset += self.guard.apply(&mut self.tree)?;
        Ok(payoff)
    }

    /// Select, then update with `f`.
    pub fn play_round(&mut self, f: &PiecewiseConstantFn, track_opt: bool) -> Result<RoundTrace> {
        let x = self.select()?;
        let payoff = self.update(f)?;
        Ok(RoundTrace {
            t: self.t,
            x,
            payoff,
            opt: if track_opt {
                Some(self.hindsight.best()?.1)
            } else {
                None
            },
            payoff_total: self.payoff_total,
        })
    }

    /// Leftmost maximal piece of the cumulative payoff and its value. The
    /// piece's length is the realized `eps*` of the regret analysis.
    pub fn best_in_hindsight(&self) -> Result<(Interval, f64)> {
        self.hindsight.best()
    }

    pub fn regret(&self) -> Result<f64> {
        Ok(self.best_in_hindsight()?.1 - self.payoff_total)
    }

    /// Probability of each leaf under the current sampling density.
    pub fn leaf_distribution(&self) -> Vec<(Interval, f64)> {
        let total = self.tree.total_mass();
        self.tree
            .leaves()
            .into_iter()
            .map(|l| (l.interval, l.mass / total))
            .collect()
    }
}
