//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any failed.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::{linear_fit, max_leaf_error, DenseOracle};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use smoothopt::adversary::SmoothedAdversaryConfig;
use smoothopt::bandit::BanditParams;
use smoothopt::experiment::{run_experiment, run_repetition, Environment, ExperimentConfig, LearnerKind};
use smoothopt::forecaster::{regret_bound, suggested_eta};
use smoothopt::heuristics::{payoff_curve, GreedyFamily, KMeansInstance, KnapsackInstance, MwisInstance};
use smoothopt::{BanditLearner, Interval, LazyIntervalTree, Multiplicative, PiecewiseConstantFn};

type Outcome = (bool, String);

fn random_update(rng: &mut ChaCha8Rng) -> (f64, f64, f64) {
    let a: f64 = rng.random_range(0.0..1.0);
    let b: f64 = rng.random_range(0.0..1.0);
    let (lo, hi) = (a.min(b), a.max(b));
    let (lo, hi) = if lo == hi { (0.0, 1.0) } else { (lo, hi) };
    (lo, hi, rng.random_range(0.5..2.0))
}

fn tree_matches_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(100);
    let mut tree = LazyIntervalTree::<Multiplicative>::new();
    let mut oracle = DenseOracle::multiplicative();
    let mut worst: f64 = 0.0;
    for op in 0..10_000 {
        if rng.random_bool(0.3) {
            let p = rng.random_range(1e-9..1.0);
            tree.insert(p).unwrap();
            oracle.insert(p);
        } else {
            let (lo, hi, d) = random_update(&mut rng);
            tree.range_update(Interval::new(lo, hi), d).unwrap();
            oracle.range_update(lo, hi, d);
        }
        if op % 1000 == 999 {
            match max_leaf_error(&tree.leaves(), &oracle) {
                Some(e) => worst = worst.max(e),
                None => return (false, format!("leaf partitions differ after op {op}")),
            }
        }
    }
    let elapsed = start.elapsed();
    (
        worst <= 1e-9 && elapsed < Duration::from_secs(10),
        format!(
            "10^4 ops, {} leaves, max leaf rel err {worst:.2e} (tol 1e-9), {:.2} s (limit 10 s)",
            tree.leaf_count(),
            elapsed.as_secs_f64()
        ),
    )
}

fn subtree_sums_consistent() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut tree = LazyIntervalTree::<Multiplicative>::new();
    for op in 0..1000 {
        match rng.random_range(0..3) {
            0 => tree.insert(rng.random_range(1e-9..1.0)).unwrap(),
            1 => {
                let (lo, hi, d) = random_update(&mut rng);
                tree.range_update(Interval::new(lo, hi), d).unwrap();
            }
            _ => {
                tree.draw(&mut rng).unwrap();
            }
        }
        if let Err(e) = tree.audit(1e-9) {
            return (false, format!("lazy audit failed after op {op}: {e}"));
        }
        let mut flushed = tree.clone();
        flushed.flush();
        if let Err(e) = flushed.audit(1e-9) {
            return (false, format!("flushed audit failed after op {op}: {e}"));
        }
    }
    (true, "every internal node equals its leaf sum after each of 10^3 ops (tol 1e-9)".into())
}

fn draw_law() -> Outcome {
    let mut tree = LazyIntervalTree::<Multiplicative>::new();
    for i in 1..16 {
        tree.insert(i as f64 / 16.0).unwrap();
    }
    // Masses proportional to 1, 2, ..., 16 with a few overlapping updates
    // left pending in the messages.
    for i in 0..16 {
        let lo = i as f64 / 16.0;
        tree.range_update(Interval::new(lo, lo + 1.0 / 16.0), (i + 1) as f64).unwrap();
    }
    tree.range_update(Interval::new(0.25, 0.75), 3.0).unwrap();
    tree.range_update(Interval::new(0.25, 0.75), 1.0 / 3.0).unwrap();
    let total: f64 = (1..=16).map(|i| i as f64).sum();
    let exact: Vec<f64> = (1..=16).map(|i| i as f64 / total).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let n = 100_000;
    let mut counts = [0usize; 16];
    for _ in 0..n {
        let x = tree.draw(&mut rng).unwrap();
        counts[((x * 16.0) as usize).min(15)] += 1;
    }
    let tv: f64 = counts
        .iter()
        .zip(&exact)
        .map(|(&c, &p)| (c as f64 / n as f64 - p).abs())
        .sum::<f64>()
        / 2.0;
    (tv <= 0.01, format!("16 leaves, 10^5 draws, TV distance {tv:.4} (limit 0.01)"))
}

fn touches_logarithmic() -> Outcome {
    let sizes = [1_000usize, 10_000, 100_000, 1_000_000];
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    for &n in &sizes {
        let mut tree = LazyIntervalTree::<Multiplicative>::new();
        while tree.leaf_count() < n {
            tree.insert(rng.random_range(1e-12..1.0)).unwrap();
        }
        let ops = 4000;
        tree.reset_touches();
        for i in 0..ops {
            match i % 3 {
                0 => tree.insert(rng.random_range(1e-12..1.0)).unwrap(),
                1 => {
                    let (lo, hi, d) = random_update(&mut rng);
                    tree.range_update(Interval::new(lo, hi), d).unwrap();
                }
                _ => {
                    tree.draw(&mut rng).unwrap();
                }
            }
        }
        xs.push((n as f64).ln());
        ys.push(tree.touches() as f64 / ops as f64);
    }
    let (a, b, r2) = linear_fit(&xs, &ys);
    let per_op: Vec<String> = ys.iter().map(|y| format!("{y:.1}")).collect();
    (
        r2 >= 0.95 && b > 0.0,
        format!(
            "touches/op at n=10^3..10^6: [{}], fit {a:.1} + {b:.2} ln n, R^2 {r2:.4} (min 0.95)",
            per_op.join(", ")
        ),
    )
}

fn full_information_bound() -> Outcome {
    let start = Instant::now();
    let (horizon, reps) = (10_000, 20);
    let mut cfg = ExperimentConfig::new(
        Environment::Smoothed(SmoothedAdversaryConfig::default()),
        LearnerKind::FullInfo,
        horizon,
        reps,
    );
    cfg.seed = 1;
    let eta = suggested_eta(horizon, 5, 10.0).unwrap();
    cfg.eta = Some(eta);
    let bound = regret_bound(horizon, 5, 10.0);
    let mut within = 0;
    let mut worst = f64::NEG_INFINITY;
    for rep in 0..reps {
        let per_round = *run_repetition(&cfg, rep, None).unwrap().last().unwrap();
        let cumulative = per_round * horizon as f64;
        worst = worst.max(cumulative);
        if cumulative <= bound {
            within += 1;
        }
    }
    let elapsed = start.elapsed();
    (
        within >= 19 && elapsed < Duration::from_secs(60),
        format!(
            "k=5 sigma=10 T=10^4 eta={eta:.6}: {within}/20 reps within bound {bound:.2} (max regret {worst:.2}), {:.1} s (limit 60 s)",
            elapsed.as_secs_f64()
        ),
    )
}

fn worst_case_linear_regret() -> Outcome {
    let mut cfg = ExperimentConfig::new(Environment::WorstCase, LearnerKind::FullInfo, 200, 50);
    cfg.seed = 2;
    let rec = run_experiment(&cfg).unwrap();
    let last = rec.last().unwrap();
    (
        last.t == 200 && last.mean_regret >= 0.4,
        format!("T=200, 50 reps: mean per-round regret {:.4} (min 0.4)", last.mean_regret),
    )
}

fn bandit_scaling() -> Outcome {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for e in 10..=16 {
        let horizon = 1usize << e;
        let mut cfg = ExperimentConfig::new(
            Environment::Smoothed(SmoothedAdversaryConfig::default()),
            LearnerKind::Bandit,
            horizon,
            20,
        );
        cfg.seed = 3;
        let rec = run_experiment(&cfg).unwrap();
        let cumulative = rec.last().unwrap().mean_regret * horizon as f64;
        xs.push((horizon as f64).ln());
        ys.push(cumulative.ln());
    }
    let (_, slope, r2) = linear_fit(&xs, &ys);

    // Estimator invariants: bounded estimates on a long run, and the exact
    // expectation of the estimate at the played point is at most 1/mu.
    let params = BanditParams::for_horizon(4096).unwrap();
    let mut b = BanditLearner::new(params, 9).unwrap();
    let adv = smoothopt::adversary::SmoothedAdversary::new(SmoothedAdversaryConfig::default()).unwrap();
    let mut bounded = true;
    let mut expectation_ok = true;
    for t in 0..4096u64 {
        let f = adv.round(t);
        if t % 256 == 0 {
            let probs = b.cell_probabilities();
            let mut e = 0.0;
            for (i, p) in probs.iter().enumerate() {
                let cell = b.cell(i);
                for (piece, v) in f.pieces() {
                    let w = piece.high.min(cell.high) - piece.low.max(cell.low);
                    if w > 0.0 {
                        e += p * (w / cell.len()) * (v / p);
                    }
                }
            }
            expectation_ok &= e <= params.cells as f64;
        }
        let (x, _) = b.select().unwrap();
        let tr = b.update(f.evaluate(x).unwrap()).unwrap();
        bounded &= params.eta * tr.estimate <= 1.0 && tr.cell_probability >= params.gamma * params.mu() * (1.0 - 1e-12);
    }
    (
        (0.5..=0.85).contains(&slope) && bounded && expectation_ok,
        format!(
            "log-log slope {slope:.3} over T=2^10..2^16, 20 seeds (range [0.5, 0.85], R^2 {r2:.3}); eta*estimate <= 1: {bounded}; E[estimate] <= 1/mu: {expectation_ok}"
        ),
    )
}

fn check_curve<F: GreedyFamily>(family: &F, pointwise: impl Fn(f64) -> f64, rng: &mut ChaCha8Rng) -> Result<PiecewiseConstantFn, String> {
    let curve = payoff_curve(family);
    for _ in 0..1000 {
        let x: f64 = rng.random();
        let (c, p) = (curve.evaluate(x).unwrap(), pointwise(x));
        if c != p {
            return Err(format!("curve {c} vs greedy {p} at x={x}"));
        }
    }
    Ok(curve)
}

fn heuristic_curves_exact() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    let mut max_pieces = [0usize; 3];
    for _ in 0..100 {
        let n = rng.random_range(1..=10);
        let ks = KnapsackInstance::random(n, 1.0, &mut rng).unwrap();
        match check_curve(&ks, |x| ks.normalized(ks.greedy(x).1), &mut rng) {
            Ok(c) => {
                if c.piece_count() > 1 + n * (n - 1) / 2 {
                    return (false, format!("knapsack n={n}: {} pieces", c.piece_count()));
                }
                max_pieces[0] = max_pieces[0].max(c.piece_count());
            }
            Err(e) => return (false, format!("knapsack: {e}")),
        }

        let n = rng.random_range(1..=10);
        let mw = MwisInstance::random(n, rng.random_range(0.1..0.5), &mut rng).unwrap();
        match check_curve(&mw, |x| mw.normalized(mw.greedy(x).1), &mut rng) {
            Ok(c) => max_pieces[1] = max_pieces[1].max(c.piece_count()),
            Err(e) => return (false, format!("mwis: {e}")),
        }

        let n = rng.random_range(3..=8);
        let km = KMeansInstance::random(n, 3, 3, &mut rng).unwrap();
        match check_curve(&km, |x| km.normalized(km.greedy(km.rho_of(x)).1), &mut rng) {
            Ok(c) => max_pieces[2] = max_pieces[2].max(c.piece_count()),
            Err(e) => return (false, format!("kmeans: {e}")),
        }
    }
    (
        true,
        format!(
            "100 instances per family, 10^3 samples each, all exact; max pieces knapsack {} mwis {} kmeans {}",
            max_pieces[0], max_pieces[1], max_pieces[2]
        ),
    )
}

fn heuristic_reproduction() -> Outcome {
    let runs = [
        ("knapsack", Environment::Knapsack { n: 20, capacity: 1.0 }, 5000),
        ("mwis", Environment::Mwis { n: 20, edge_prob: 0.3 }, 2000),
        ("kmeans", Environment::KMeans { n: 10, k: 3, gaussians: 3 }, 1000),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, env, horizon) in runs {
        let start = Instant::now();
        let mut cfg = ExperimentConfig::new(env, LearnerKind::FullInfo, horizon, 20);
        cfg.seed = 5;
        let rec = run_experiment(&cfg).unwrap();
        let elapsed = start.elapsed();
        let last = rec.last().unwrap();
        let at100 = rec.iter().find(|r| r.t == 100).unwrap();
        let pass = last.mean_regret < last.bound && last.mean_regret < at100.mean_regret && elapsed < Duration::from_secs(300);
        ok &= pass;
        parts.push(format!(
            "{name} T={horizon}: {:.4} < 2eta={:.4}, t=100 {:.4}, {:.1} s",
            last.mean_regret,
            last.bound,
            at100.mean_regret,
            elapsed.as_secs_f64()
        ));
    }
    (ok, parts.join("; "))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 9] = [
        ("tree matches eager oracle", tree_matches_oracle),
        ("subtree sums consistent", subtree_sums_consistent),
        ("draw follows leaf masses", draw_law),
        ("touch counts logarithmic", touches_logarithmic),
        ("full-information regret bound", full_information_bound),
        ("worst-case linear regret", worst_case_linear_regret),
        ("bandit regret scaling", bandit_scaling),
        ("heuristic curves exact", heuristic_curves_exact),
        ("heuristic regret reproduction", heuristic_reproduction),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, run) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let (pass, detail) = match catch_unwind(AssertUnwindSafe(run)) {
            Ok(o) => o,
            Err(e) => {
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                (false, format!("panicked: {msg}"))
            }
        };
        if !pass {
            failed += 1;
        }
        println!("{} {name}: {detail}", if pass { "PASS" } else { "FAIL" });
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
