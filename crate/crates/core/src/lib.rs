//! Online optimization of piecewise constant payoffs on `[0,1)` against
//! smoothed adversaries.
//!
//! The full-information learner ([`Forecaster`]) samples from the
//! exponentially weighted density `exp(eta * F_t)` kept in a
//! [`LazyIntervalTree`], so each round costs `O(k log(tk))`. The bandit
//! learner ([`BanditLearner`]) runs the same machinery over a fixed grid with
//! importance-weighted estimates. The [`adversary`] and [`heuristics`]
//! modules produce payoff sequences, and [`experiment`] runs repeated games
//! and aggregates per-round regret.

// `!(x > 0.0)` deliberately rejects NaN alongside non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod adversary;
pub mod bandit;
pub mod error;
pub mod experiment;
pub mod forecaster;
pub mod heuristics;
pub mod lazy_tree;
pub mod piecewise;
pub mod regret;

pub use bandit::BanditLearner;
pub use error::{Error, Result};
pub use forecaster::Forecaster;
pub use lazy_tree::{Additive, LazyIntervalTree, LeafMass, Multiplicative, UpdateLaw};
pub use piecewise::{Interval, PiecewiseConstantFn};
pub use regret::CumulativePayoff;
