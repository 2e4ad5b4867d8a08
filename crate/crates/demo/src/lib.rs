//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Every export is a thin wrapper over a plain Rust function so the logic
//! can be tested natively.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use smoothopt::adversary::{SmoothedAdversary, SmoothedAdversaryConfig};
use smoothopt::bandit::{theoretical_bound, BanditParams};
use smoothopt::forecaster::{regret_bound, suggested_eta};
use smoothopt::heuristics::{payoff_curve, KMeansInstance, KnapsackInstance, MwisInstance};
use smoothopt::{BanditLearner, CumulativePayoff, Error, Forecaster, PiecewiseConstantFn};
use wasm_bindgen::prelude::*;

/// Result of one learner run against a smoothed adversary.
#[wasm_bindgen]
#[derive(Debug, Clone)]
pub struct Run {
    regret: Vec<f64>,
    edges: Vec<f64>,
    density: Vec<f64>,
    bound: f64,
    eta: f64,
}

#[wasm_bindgen]
impl Run {
    /// Cumulative regret after each round.
    #[wasm_bindgen(getter)]
    pub fn regret(&self) -> Vec<f64> {
        self.regret.clone()
    }

    /// Boundaries of the final sampling density's pieces.
    #[wasm_bindgen(getter)]
    pub fn edges(&self) -> Vec<f64> {
        self.edges.clone()
    }

    /// Density on each piece; integrates to 1.
    #[wasm_bindgen(getter)]
    pub fn density(&self) -> Vec<f64> {
        self.density.clone()
    }

    /// Expected regret guarantee at the final round.
    #[wasm_bindgen(getter)]
    pub fn bound(&self) -> f64 {
        self.bound
    }

    #[wasm_bindgen(getter)]
    pub fn eta(&self) -> f64 {
        self.eta
    }
}

/// Exact payoff curve of a greedy heuristic over its parameter in [0,1).
#[wasm_bindgen]
#[derive(Debug, Clone)]
pub struct Curve {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
    instance: String,
}

#[wasm_bindgen]
impl Curve {
    #[wasm_bindgen(getter)]
    pub fn breakpoints(&self) -> Vec<f64> {
        self.breakpoints.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn values(&self) -> Vec<f64> {
        self.values.clone()
    }

    /// Instance text the curve was computed from.
    #[wasm_bindgen(getter)]
    pub fn instance(&self) -> String {
        self.instance.clone()
    }
}

fn adversary(k: usize, sigma: f64, seed: u64) -> Result<SmoothedAdversary, Error> {
    SmoothedAdversary::new(SmoothedAdversaryConfig {
        k,
        sigma,
        seed,
        ..Default::default()
    })
}

fn density_of(pieces: impl Iterator<Item = (f64, f64)>) -> (Vec<f64>, Vec<f64>) {
    let mut edges = vec![0.0];
    let mut density = Vec::new();
    for (high, d) in pieces {
        edges.push(high);
        density.push(d);
    }
    (edges, density)
}

/// Full-information exponential weights against a smoothed adversary.
pub fn full_info(k: usize, sigma: f64, horizon: usize, seed: u64) -> Result<Run, Error> {
    let adv = adversary(k, sigma, seed)?;
    let eta = suggested_eta(horizon, k, sigma)?;
    let mut fc = Forecaster::new(eta, seed.wrapping_add(1))?;
    let mut regret = Vec::with_capacity(horizon);
    for t in 0..horizon {
        let row = fc.play_round(&adv.round(t as u64), true)?;
        regret.push(row.opt.unwrap_or(0.0) - row.payoff_total);
    }
    let (edges, density) = density_of(
        fc.leaf_distribution()
            .into_iter()
            .map(|(iv, p)| (iv.high, p / iv.len())),
    );
    Ok(Run {
        regret,
        edges,
        density,
        bound: regret_bound(horizon, k, sigma),
        eta,
    })
}

/// Bandit learner with grid cells tuned for the horizon.
pub fn bandit(k: usize, sigma: f64, horizon: usize, seed: u64) -> Result<Run, Error> {
    let adv = adversary(k, sigma, seed)?;
    let params = BanditParams::for_horizon(horizon)?;
    let mut learner = BanditLearner::new(params, seed.wrapping_add(1))?;
    let mut opt = CumulativePayoff::new();
    let mut regret = Vec::with_capacity(horizon);
    for t in 0..horizon {
        let f = adv.round(t as u64);
        let (x, _) = learner.select()?;
        learner.update(f.evaluate(x)?)?;
        opt.add(&f)?;
        regret.push(opt.best()?.1 - learner.payoff_total());
    }
    let width = 1.0 / params.cells as f64;
    let (edges, density) = density_of(
        learner
            .cell_probabilities()
            .into_iter()
            .enumerate()
            .map(|(i, p)| ((i + 1) as f64 * width, p / width)),
    );
    Ok(Run {
        regret,
        edges,
        density,
        bound: theoretical_bound(horizon, k, sigma, params.mu(), params.gamma, params.eta)?,
        eta: params.eta,
    })
}

fn curve_from(f: PiecewiseConstantFn, instance: String) -> Curve {
    Curve {
        breakpoints: f.breakpoints().to_vec(),
        values: f.values().to_vec(),
        instance,
    }
}

/// Payoff curve of `problem` ("knapsack", "mwis" or "kmeans") for the given
/// instance text.
pub fn curve(problem: &str, text: &str) -> Result<Curve, Error> {
    let f = match problem {
        "knapsack" => payoff_curve(&KnapsackInstance::from_text(text)?),
        "mwis" => payoff_curve(&MwisInstance::from_text(text)?),
        "kmeans" => payoff_curve(&KMeansInstance::from_text(text)?),
        other => return Err(unknown_problem(other)),
    };
    Ok(curve_from(f, text.to_string()))
}

/// Payoff curve of a random instance with `n` elements.
pub fn random_curve(problem: &str, n: usize, seed: u64) -> Result<Curve, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let text = match problem {
        "knapsack" => KnapsackInstance::random(n, 1.0, &mut rng)?.to_text(),
        "mwis" => MwisInstance::random(n, 0.3, &mut rng)?.to_text(),
        "kmeans" => KMeansInstance::random(n, 3.min(n), 3, &mut rng)?.to_text(),
        other => return Err(unknown_problem(other)),
    };
    curve(problem, &text)
}

fn unknown_problem(name: &str) -> Error {
    Error::Domain(format!("unknown problem {name:?}"))
}

fn js(e: Error) -> JsError {
    JsError::new(&e.to_string())
}

#[wasm_bindgen(js_name = runFullInfo)]
pub fn run_full_info(k: usize, sigma: f64, horizon: usize, seed: u32) -> Result<Run, JsError> {
    full_info(k, sigma, horizon, seed.into()).map_err(js)
}

#[wasm_bindgen(js_name = runBandit)]
pub fn run_bandit(k: usize, sigma: f64, horizon: usize, seed: u32) -> Result<Run, JsError> {
    bandit(k, sigma, horizon, seed.into()).map_err(js)
}

#[wasm_bindgen(js_name = payoffCurve)]
pub fn payoff_curve_js(problem: &str, text: &str) -> Result<Curve, JsError> {
    curve(problem, text).map_err(js)
}

#[wasm_bindgen(js_name = randomPayoffCurve)]
pub fn random_payoff_curve(problem: &str, n: usize, seed: u32) -> Result<Curve, JsError> {
    random_curve(problem, n, seed.into()).map_err(js)
}
