use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use smoothopt::adversary::{
    covering_check, covering_sample_size, min_pairwise_gap, AnchorMode, SmoothedAdversary, SmoothedAdversaryConfig,
    WorstCaseAdversary,
};
use smoothopt::PiecewiseConstantFn;

#[test]
fn close_breakpoints_are_rare() {
    let eps = 1e-4;
    let rounds = 10_000;
    for anchors in [AnchorMode::Fixed, AnchorMode::Random] {
        let adv = SmoothedAdversary::new(SmoothedAdversaryConfig {
            anchors,
            seed: 4,
            ..Default::default()
        })
        .unwrap();
        let close = (0..rounds)
            .filter(|&t| {
                let bp = adv.round(t).breakpoints().to_vec();
                min_pairwise_gap(&bp[1..bp.len() - 1]).unwrap() < eps
            })
            .count();
        let bound: f64 = 25.0 * 10.0 * eps;
        let se = (bound * (1.0 - bound) / rounds as f64).sqrt();
        let freq = close as f64 / rounds as f64;
        assert!(freq <= bound + 3.0 * se, "{anchors:?}: {freq}");
    }
}

#[test]
fn uniform_min_gap_matches_order_statistics() {
    // For n uniform points P(min gap > g) = (1 - (n-1) g)^n, so the mean
    // min gap is 1 / ((n-1)(n+1)) and its variance is close to its square.
    let n = 1000;
    let trials = 2000;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let gaps: Vec<f64> = (0..trials)
        .map(|_| {
            let pts: Vec<f64> = (0..n).map(|_| rng.random()).collect();
            min_pairwise_gap(&pts).unwrap()
        })
        .collect();
    let mean = gaps.iter().sum::<f64>() / trials as f64;
    let want = 1.0 / ((n - 1) as f64 * (n + 1) as f64);
    let se = want / (trials as f64).sqrt();
    assert!((mean - want).abs() < 4.0 * se, "{mean} vs {want}");

    let g = want;
    let below = gaps.iter().filter(|&&x| x <= g).count() as f64 / trials as f64;
    let p = 1.0 - (1.0 - (n - 1) as f64 * g).powi(n);
    assert!((below - p).abs() < 4.0 * (p * (1.0 - p) / trials as f64).sqrt());
}

#[test]
fn fine_net_failure_rate() {
    let (eps, delta) = (0.01, 0.01);
    let n = covering_sample_size(eps, delta).unwrap();
    // 99 gaps of width 1/99 > eps.
    let anchors: Vec<f64> = (0..=99).map(|i| i as f64 / 99.0).collect();
    let trials = 1000;
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let failures = (0..trials)
        .filter(|_| {
            let samples: Vec<f64> = (0..n).map(|_| rng.random()).collect();
            !covering_check(&anchors, &samples)
        })
        .count();
    let se = (delta * (1.0 - delta) / trials as f64).sqrt();
    assert!((failures as f64 / trials as f64) <= delta + 3.0 * se, "{failures} failures");
}

#[test]
fn worst_case_exact_expectation() {
    // Enumerate every coin sequence: OPT is T on each branch while any fixed
    // point collects at most 1 + (T - 1)/2 in expectation.
    for horizon in 1..=9usize {
        let branches = 1usize << (horizon - 1);
        let grid: Vec<f64> = (0..1000).map(|i| (i as f64 + 0.5) / 1000.0).collect();
        let mut expected = vec![0.0; grid.len()];
        for coins in 0..branches {
            let mut adv = WorstCaseAdversary::new();
            let mut hist = Vec::new();
            for t in 0..horizon {
                hist.push(adv.next_round_with(t > 0 && coins >> (t - 1) & 1 == 1));
            }
            let sum = PiecewiseConstantFn::sum_all(&hist);
            assert_eq!(sum.argmax_interval().1, horizon as f64);
            for (e, &x) in expected.iter_mut().zip(&grid) {
                *e += sum.evaluate(x).unwrap() / branches as f64;
            }
        }
        let cap = 1.0 + (horizon as f64 - 1.0) / 2.0;
        assert!(expected.iter().all(|&e| e <= cap + 1e-12));
    }
}
