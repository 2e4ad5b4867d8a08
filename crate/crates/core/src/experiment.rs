//! Repeated learner-vs-environment games with per-round regret at
//! checkpoints, aggregated across repetitions.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::adversary::{SmoothedAdversary, SmoothedAdversaryConfig, WorstCaseAdversary};
use crate::bandit::{theoretical_bound, BanditLearner, BanditParams};
use crate::error::{Error, Result};
use crate::forecaster::{suggested_eta, Forecaster};
use crate::heuristics::{payoff_curve, KMeansInstance, KnapsackInstance, MwisInstance};
use crate::piecewise::PiecewiseConstantFn;
use crate::regret::CumulativePayoff;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Environment {
    Smoothed(SmoothedAdversaryConfig),
    WorstCase,
    Knapsack { n: usize, capacity: f64 },
    Mwis { n: usize, edge_prob: f64 },
    KMeans { n: usize, k: usize, gaussians: usize },
}

impl Environment {
    pub fn name(&self) -> &'static str {
        match self {
            Environment::Smoothed(_) => "smoothed",
            Environment::WorstCase => "worstcase",
            Environment::Knapsack { .. } => "knapsack",
            Environment::Mwis { .. } => "mwis",
            Environment::KMeans { .. } => "kmeans",
        }
    }

    /// `(k, sigma)` fed to the default learning rate and the bound overlay.
    /// Environments without their own smoothness parameters use `(5, 10)`;
    /// the worst-case adversary pays on at most 3 pieces.
    pub fn bound_params(&self) -> (usize, f64) {
        match self {
            Environment::Smoothed(c) => (c.k, c.sigma),
            Environment::WorstCase => (3, 1.0),
            _ => (5, 10.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LearnerKind {
    FullInfo,
    Bandit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub environment: Environment,
    pub learner: LearnerKind,
    pub horizon: usize,
    pub repetitions: usize,
    pub eta: Option<f64>,
    pub mu: Option<f64>,
    pub gamma: Option<f64>,
    pub seed: u64,
    /// Reuse one heuristic instance for every round of a repetition.
    pub fixed_instance: bool,
    /// Worker threads; 0 uses every core.
    pub threads: usize,
}

impl ExperimentConfig {
    pub fn new(environment: Environment, learner: LearnerKind, horizon: usize, repetitions: usize) -> Self {
        ExperimentConfig {
            environment,
            learner,
            horizon,
            repetitions,
            eta: None,
            mu: None,
            gamma: None,
            seed: 0,
            fixed_instance: false,
            threads: 0,
        }
    }

    /// Learner parameters after applying defaults and overrides.
    pub fn resolve(&self) -> Result<ResolvedLearner> {
        if self.horizon == 0 {
            return Err(Error::domain("T must be at least 1"));
        }
        if self.repetitions == 0 {
            return Err(Error::domain("need at least one repetition"));
        }
        match self.environment {
            Environment::Smoothed(c) => c.validate()?,
            Environment::Knapsack { n, capacity } => {
                if n == 0 || !(capacity > 0.0) {
                    return Err(Error::domain("knapsack needs n >= 1 and capacity > 0"));
                }
            }
            Environment::Mwis { n, edge_prob } => {
                if n == 0 || !(0.0..=1.0).contains(&edge_prob) {
                    return Err(Error::domain("mwis needs n >= 1 and edge probability in [0,1]"));
                }
            }
            Environment::KMeans { n, k, gaussians } => {
                if n < 2 || k == 0 || k > n || gaussians == 0 {
                    return Err(Error::domain("kmeans needs 2 <= n, 1 <= k <= n, centers >= 1"));
                }
            }
            Environment::WorstCase => {}
        }
        let (k, sigma) = self.environment.bound_params();
        match self.learner {
            LearnerKind::FullInfo => {
                let eta = match self.eta {
                    Some(e) if e > 0.0 && e.is_finite() => e,
                    Some(e) => return Err(Error::domain(format!("eta must be positive, got {e}"))),
                    None => suggested_eta(self.horizon, k, sigma)?,
                };
                Ok(ResolvedLearner::FullInfo { eta })
            }
            LearnerKind::Bandit => {
                let base = BanditParams::for_horizon(self.horizon)?;
                let cells = match self.mu {
                    None => base.cells,
                    Some(mu) => {
                        let c = (1.0 / mu).round();
                        if !(mu > 0.0 && mu <= 1.0) || (1.0 / mu - c).abs() > 1e-9 * c {
                            return Err(Error::domain(format!("1/mu must be a natural number, got mu = {mu}")));
                        }
                        c as usize
                    }
                };
                let gamma = self.gamma.unwrap_or(base.gamma);
                let eta = self.eta.unwrap_or(gamma / cells as f64);
                Ok(ResolvedLearner::Bandit(BanditParams::new(eta, cells, gamma)?))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ResolvedLearner {
    FullInfo { eta: f64 },
    Bandit(BanditParams),
}

/// One CSV row: per-round regret statistics at round `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegretRecord {
    pub t: usize,
    pub mean_regret: f64,
    pub std_regret: f64,
    pub bound: f64,
}

pub const CSV_HEADER: &str = "t,mean_regret,std_regret,bound";

pub fn records_to_csv(records: &[RegretRecord]) -> Result<String> {
    if records.is_empty() {
        return Err(Error::domain("no records to write"));
    }
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for r in records {
        s.push_str(&format!("{},{},{},{}\n", r.t, r.mean_regret, r.std_regret, r.bound));
    }
    Ok(s)
}

/// Powers of 2 and of 10 up to `horizon`, plus `horizon` itself.
pub fn checkpoints(horizon: usize) -> Vec<usize> {
    let mut out = Vec::new();
    for base in [2usize, 10] {
        let mut p = 1usize;
        while p <= horizon {
            out.push(p);
            match p.checked_mul(base) {
                Some(q) => p = q,
                None => break,
            }
        }
    }
    out.push(horizon);
    out.sort_unstable();
    out.dedup();
    out
}

/// Optional per-round output of a single repetition.
#[derive(Debug, Clone, Default)]
pub struct RepetitionLog {
    /// `t,x,payoff,opt,payoff_total` rows.
    pub trace: Vec<String>,
    pub payoffs: Vec<PiecewiseConstantFn>,
    pub keep_payoffs: bool,
}

impl RepetitionLog {
    pub const TRACE_HEADER: &'static str = "t,x,payoff,opt,payoff_total";
}

enum Source {
    Smoothed(SmoothedAdversary),
    WorstCase(WorstCaseAdversary),
    Fixed(PiecewiseConstantFn),
    Fresh,
}

struct Game<'a> {
    env: &'a Environment,
    source: Source,
    rng: ChaCha8Rng,
}

impl<'a> Game<'a> {
    fn new(cfg: &'a ExperimentConfig, rep_seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(rep_seed);
        rng.set_stream(u64::MAX);
        let env = &cfg.environment;
        let source = match env {
            Environment::Smoothed(c) => Source::Smoothed(SmoothedAdversary::new(SmoothedAdversaryConfig {
                seed: rep_seed,
                ..*c
            })?),
            Environment::WorstCase => Source::WorstCase(WorstCaseAdversary::new()),
            _ if cfg.fixed_instance => Source::Fixed(heuristic_round(env, &mut rng)?),
            _ => Source::Fresh,
        };
        Ok(Game { env, source, rng })
    }

    fn payoff(&mut self, t: usize) -> Result<PiecewiseConstantFn> {
        match &mut self.source {
            Source::Smoothed(a) => Ok(a.round(t as u64)),
            Source::WorstCase(a) => Ok(a.next_round(&mut self.rng)),
            Source::Fixed(f) => Ok(f.clone()),
            Source::Fresh => heuristic_round(self.env, &mut self.rng),
        }
    }
}

/// Payoff curve of a freshly drawn heuristic instance.
pub fn heuristic_round(env: &Environment, rng: &mut ChaCha8Rng) -> Result<PiecewiseConstantFn> {
    match *env {
        Environment::Knapsack { n, capacity } => Ok(payoff_curve(&KnapsackInstance::random(n, capacity, rng)?)),
        Environment::Mwis { n, edge_prob } => Ok(payoff_curve(&MwisInstance::random(n, edge_prob, rng)?)),
        Environment::KMeans { n, k, gaussians } => {
            Ok(payoff_curve(&KMeansInstance::random(n, k, gaussians, rng)?))
        }
        _ => Err(Error::domain("not a heuristic environment")),
    }
}

enum Player {
    Full(Forecaster),
    Bandit(BanditLearner),
}

/// Plays one repetition with seed `cfg.seed + rep`; returns per-round regret
/// at each checkpoint.
pub fn run_repetition(cfg: &ExperimentConfig, rep: usize, mut log: Option<&mut RepetitionLog>) -> Result<Vec<f64>> {
    let learner = cfg.resolve()?;
    let rep_seed = cfg.seed.wrapping_add(rep as u64);
    let mut game = Game::new(cfg, rep_seed)?;
    let mut player = match learner {
        ResolvedLearner::FullInfo { eta } => Player::Full(Forecaster::new(eta, rep_seed)?),
        ResolvedLearner::Bandit(p) => Player::Bandit(BanditLearner::new(p, rep_seed)?),
    };
    let marks = checkpoints(cfg.horizon);
    let mut next_mark = 0;
    let mut hindsight = CumulativePayoff::new();
    let mut total = 0.0;
    let mut out = Vec::with_capacity(marks.len());
    for t in 1..=cfg.horizon {
        let (x, payoff) = match &mut player {
            Player::Full(fc) => {
                let x = fc.select()?;
                let f = game.payoff(t)?;
                let p = fc.update(&f)?;
                hindsight.add(&f)?;
                if let Some(l) = log.as_deref_mut() {
                    if l.keep_payoffs {
                        l.payoffs.push(f);
                    }
                }
                (x, p)
            }
            Player::Bandit(b) => {
                let (x, _) = b.select()?;
                let f = game.payoff(t)?;
                let p = f.evaluate(x)?;
                b.update(p)?;
                hindsight.add(&f)?;
                if let Some(l) = log.as_deref_mut() {
                    if l.keep_payoffs {
                        l.payoffs.push(f);
                    }
                }
                (x, p)
            }
        };
        total += payoff;
        let at_mark = marks[next_mark] == t;
        if at_mark || log.is_some() {
            let opt = hindsight.best()?.1;
            if let Some(l) = log.as_deref_mut() {
                l.trace.push(format!("{t},{x},{payoff},{opt},{total}"));
            }
            if at_mark {
                out.push((opt - total) / t as f64);
                next_mark += 1;
            }
        }
    }
    Ok(out)
}

/// Runs every repetition and aggregates mean and sample standard deviation
/// of per-round regret at each checkpoint.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<RegretRecord>> {
    let learner = cfg.resolve()?;
    let runs = run_all(cfg)?;
    let marks = checkpoints(cfg.horizon);
    let (k, sigma) = cfg.environment.bound_params();
    let n = runs.len() as f64;
    marks
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            let mean = runs.iter().map(|r| r[i]).sum::<f64>() / n;
            let var = if runs.len() > 1 {
                runs.iter().map(|r| (r[i] - mean).powi(2)).sum::<f64>() / (n - 1.0)
            } else {
                0.0
            };
            let bound = match learner {
                ResolvedLearner::FullInfo { eta } => 2.0 * eta,
                ResolvedLearner::Bandit(p) => theoretical_bound(t, k, sigma, p.mu(), p.gamma, p.eta)? / t as f64,
            };
            Ok(RegretRecord {
                t,
                mean_regret: mean,
                std_regret: var.sqrt(),
                bound,
            })
        })
        .collect()
}

#[cfg(feature = "parallel")]
fn run_all(cfg: &ExperimentConfig) -> Result<Vec<Vec<f64>>> {
    use rayon::prelude::*;
    let work = || {
        (0..cfg.repetitions)
            .into_par_iter()
            .map(|rep| run_repetition(cfg, rep, None))
            .collect::<Result<Vec<_>>>()
    };
    if cfg.threads == 0 {
        return work();
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| Error::domain(format!("thread pool: {e}")))?
        .install(work)
}

#[cfg(not(feature = "parallel"))]
fn run_all(cfg: &ExperimentConfig) -> Result<Vec<Vec<f64>>> {
    (0..cfg.repetitions).map(|rep| run_repetition(cfg, rep, None)).collect()
}
