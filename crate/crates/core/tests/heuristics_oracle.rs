use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use smoothopt::heuristics::{payoff_curve, simulate, GreedyFamily, KMeansInstance, KnapsackInstance, MwisInstance};

/// Best independent set weight by enumeration.
fn brute_force_mwis(inst: &MwisInstance) -> f64 {
    let n = inst.len();
    let mut best: f64 = 0.0;
    for mask in 0u32..(1 << n) {
        let set: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        if inst.is_independent(&set) {
            best = best.max(inst.weight_of(&set));
        }
    }
    best
}

#[test]
fn triangle_greedy_is_optimal_at_zero() {
    let tri = MwisInstance::new(vec![3.0, 2.0, 1.0], vec![(0, 1), (1, 2), (0, 2)]).unwrap();
    assert_eq!(tri.greedy(0.0).1, brute_force_mwis(&tri));
}

#[test]
fn kmeans_single_center_cost_by_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..20 {
        let inst = KMeansInstance::random(7, 1, 2, &mut rng).unwrap();
        let (c, cost) = inst.greedy(0.4);
        let heaviest = (0..7)
            .max_by(|&a, &b| inst.weights()[a].total_cmp(&inst.weights()[b]).then(b.cmp(&a)))
            .unwrap();
        assert_eq!(c, vec![heaviest]);
        let direct: f64 = (0..7)
            .map(|i| inst.weights()[i] * inst.distance(i, heaviest).powi(2))
            .sum();
        assert!((cost - direct).abs() < 1e-12 * direct.max(1.0));
    }
}

#[test]
fn every_piece_matches_simulation_inside() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..40 {
        let ks = KnapsackInstance::random(9, 1.0, &mut rng).unwrap();
        let mw = MwisInstance::random(9, 0.35, &mut rng).unwrap();
        let km = KMeansInstance::random(8, 3, 3, &mut rng).unwrap();
        check_pieces(&ks);
        check_pieces(&mw);
        check_pieces(&km);
    }
}

fn check_pieces<F: GreedyFamily>(family: &F) {
    let curve = payoff_curve(family);
    for (piece, v) in curve.pieces() {
        for q in [0.25, 0.5, 0.75] {
            let x = piece.low + q * piece.len();
            assert_eq!(simulate(family, x), v, "piece {piece} at {x}");
        }
    }
}

fn instance(n: usize) -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (
        prop::collection::vec(0.01f64..1.0, n),
        prop::collection::vec(0.01f64..1.0, n),
    )
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn knapsack_feasible_and_scale_invariant((v, s) in (1usize..10).prop_flat_map(instance), c in 0.2f64..3.0, scale in 0.1f64..50.0) {
        let inst = KnapsackInstance::new(v.clone(), s.clone(), c).unwrap();
        let scaled = KnapsackInstance::new(v.iter().map(|x| x * scale).collect(), s.clone(), c).unwrap();
        for i in 0..50 {
            let rho = i as f64 / 49.0;
            let (set, value) = inst.greedy(rho);
            let used: f64 = set.iter().map(|&j| s[j]).sum();
            prop_assert!(used <= c + 1e-12);
            prop_assert!((0.0..=1.0 + 1e-12).contains(&inst.normalized(value)));
            let (set2, value2) = scaled.greedy(rho);
            let mut a = set.clone();
            let mut b = set2.clone();
            a.sort_unstable();
            b.sort_unstable();
            prop_assert_eq!(a, b);
            prop_assert!((inst.normalized(value) - scaled.normalized(value2)).abs() < 1e-12);
        }
        let n = v.len();
        prop_assert!(payoff_curve(&inst).piece_count() <= 1 + n * (n - 1) / 2);
    }

    #[test]
    fn mwis_independent_and_scale_invariant(n in 1usize..10, p in 0.1f64..0.6, scale in 0.1f64..50.0, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = MwisInstance::random(n, p, &mut rng).unwrap();
        let scaled = MwisInstance::new(inst.weights().iter().map(|w| w * scale).collect(), inst.edges().to_vec()).unwrap();
        for i in 0..30 {
            let rho = i as f64 / 29.0;
            let (set, w) = inst.greedy(rho);
            prop_assert!(inst.is_independent(&set));
            // Maximal: every vertex outside the set has a neighbour inside.
            for u in 0..n {
                if !set.contains(&u) {
                    let mut with_u = set.clone();
                    with_u.push(u);
                    prop_assert!(!inst.is_independent(&with_u));
                }
            }
            prop_assert!(w <= brute_force_mwis(&inst) + 1e-12);
            let (set2, w2) = scaled.greedy(rho);
            prop_assert_eq!(set, set2);
            prop_assert!((inst.normalized(w) - scaled.normalized(w2)).abs() < 1e-12);
        }
    }

    #[test]
    fn kmeans_picks_k_distinct_centers(n in 2usize..9, k in 1usize..4, seed in any::<u64>()) {
        prop_assume!(k <= n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = KMeansInstance::random(n, k, 3, &mut rng).unwrap();
        for i in 1..=20 {
            let rho = i as f64 / 20.0;
            let (mut c, cost) = inst.greedy(rho);
            c.sort_unstable();
            c.dedup();
            prop_assert_eq!(c.len(), k);
            let u = inst.normalized(cost);
            prop_assert!((0.0..=1.0).contains(&u));
        }
    }
}
