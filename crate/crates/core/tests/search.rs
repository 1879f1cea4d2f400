use itertools::Itertools;
use num_bigint::BigUint;
use proptest::prelude::*;
use qae_core::pipeline::random_simplex;
use qae_core::qstate::BipartiteDims;
use qae_core::rng::rng_from_seed;
use qae_core::search::{
    breadth_first, depth_first, exhaustive_search, optimize, Method, SearchConfig,
};
use qae_core::tableau::{enumerate_regular, YoungTableau};

fn dims(a: usize, b: usize) -> BipartiteDims {
    BipartiteDims::new(a, b).unwrap()
}

fn sorted_probs(n: usize, seed: u64) -> Vec<f64> {
    let mut p = random_simplex(n, &mut rng_from_seed(seed));
    p.sort_by(|a, b| b.total_cmp(a));
    p
}

fn h(xs: &[f64]) -> f64 {
    xs.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.ln()).sum()
}

/// Mutual information of the grid where cell `k` holds `probs[cells[k] - 1]`.
fn oracle_mi(probs: &[f64], d: BipartiteDims, cells: &[u32]) -> f64 {
    let mut rows = vec![0.0; d.d_a];
    let mut cols = vec![0.0; d.d_b];
    for (k, &v) in cells.iter().enumerate() {
        let p = probs[v as usize - 1];
        rows[k / d.d_b] += p;
        cols[k % d.d_b] += p;
    }
    h(&rows) + h(&cols) - h(probs)
}

/// Minimum over every arrangement of the probabilities, regular or not.
fn brute_force_min(probs: &[f64], d: BipartiteDims) -> f64 {
    let n = d.total() as u32;
    (1..=n)
        .permutations(n as usize)
        .map(|cells| oracle_mi(probs, d, &cells))
        .fold(f64::INFINITY, f64::min)
}

fn config(seed: u64) -> SearchConfig {
    SearchConfig {
        n1: 200,
        n2: 6,
        n_d: 20,
        seed,
        ..SearchConfig::default()
    }
}

fn heuristic_only(seed: u64) -> SearchConfig {
    SearchConfig {
        exhaustive_threshold: BigUint::from(1u32),
        ..config(seed)
    }
}

#[test]
fn exhaustive_matches_all_arrangements() {
    for (a, b) in [(2, 3), (3, 2), (2, 2), (1, 4)] {
        let d = dims(a, b);
        for seed in 0..10 {
            let p = sorted_probs(d.total(), seed);
            let r = exhaustive_search(&p, d, &config(0)).unwrap();
            assert_eq!(r.method, Method::Exhaustive);
            assert!((r.best_mi - brute_force_min(&p, d)).abs() < 1e-12);
            assert!((oracle_mi(&p, d, r.best_tableau.cells()) - r.best_mi).abs() < 1e-12);
            assert!(r.best_tableau.is_regular());
        }
    }
}

#[test]
fn exhaustive_symmetric_shape_matches_brute_force() {
    let d = dims(3, 3);
    for seed in 0..3 {
        let p = sorted_probs(9, seed);
        let r = exhaustive_search(&p, d, &config(0)).unwrap();
        let regular_min = enumerate_regular(d, false)
            .map(|t| oracle_mi(&p, d, t.cells()))
            .fold(f64::INFINITY, f64::min);
        assert!((r.best_mi - regular_min).abs() < 1e-12);
    }
}

#[test]
fn descent_from_every_tableau_finds_the_optimum() {
    let d = dims(2, 3);
    let seeds: Vec<YoungTableau> = enumerate_regular(d, false).collect();
    assert_eq!(seeds.len(), 5);
    for s in 0..10 {
        let p = sorted_probs(6, s);
        let exact = exhaustive_search(&p, d, &config(0)).unwrap();
        let cfg = SearchConfig {
            n_d: 10,
            ..config(0)
        };
        let r = depth_first(&p, d, &seeds, &cfg).unwrap();
        assert!((r.best_mi - exact.best_mi).abs() < 1e-15);
    }
}

#[test]
fn optimum_seed_is_retained() {
    let d = dims(3, 3);
    let p = sorted_probs(9, 42);
    let exact = exhaustive_search(&p, d, &config(0)).unwrap();
    let r = depth_first(&p, d, std::slice::from_ref(&exact.best_tableau), &config(0)).unwrap();
    assert!(r.best_mi <= exact.best_mi);
    assert_eq!(r.trajectory[0], exact.best_mi);
}

#[test]
fn breadth_first_matches_sorted_draws() {
    use qae_core::rng::task_rng;
    use qae_core::tableau::random_regular_with;
    let d = dims(3, 4);
    let p = sorted_probs(12, 5);
    let cfg = SearchConfig {
        n1: 100,
        n2: 12,
        seed: 77,
        ..config(0)
    };
    let got = breadth_first(&p, d, &cfg).unwrap();

    let mut draws: Vec<(f64, usize, Vec<u32>)> = (0..100)
        .map(|i| {
            let t = random_regular_with(d, &mut task_rng(77, i as u64));
            (oracle_mi(&p, d, t.cells()), i, t.cells().to_vec())
        })
        .collect();
    draws.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let want: Vec<_> = draws
        .into_iter()
        .unique_by(|x| x.2.clone())
        .take(12)
        .collect();

    assert_eq!(got.len(), want.len());
    for (c, w) in got.iter().zip(&want) {
        assert_eq!(c.draw_index, w.1);
        assert_eq!(c.tableau.cells(), &w.2[..]);
        assert!((c.mi - w.0).abs() < 1e-12);
    }
}

#[test]
fn heuristic_never_beats_exhaustive() {
    for (a, b) in [(3, 3), (3, 4), (4, 4)] {
        let d = dims(a, b);
        for seed in 0..4 {
            let p = sorted_probs(d.total(), 100 + seed);
            let exact = optimize(&p, d, &config(seed)).unwrap();
            let heur = optimize(&p, d, &heuristic_only(seed)).unwrap();
            assert_eq!(exact.method, Method::Exhaustive);
            assert_eq!(heur.method, Method::Heuristic);
            assert!(heur.best_mi >= exact.best_mi - 1e-12);
            assert!(heur.best_mi <= heur.initial_mi);
        }
    }
}

#[test]
fn product_probabilities_reach_zero() {
    for seed in 0..10 {
        let mut rng = rng_from_seed(seed);
        let pa = random_simplex(2, &mut rng);
        let pb = random_simplex(2, &mut rng);
        let mut p: Vec<f64> = pa
            .iter()
            .flat_map(|x| pb.iter().map(move |y| x * y))
            .collect();
        p.sort_by(|a, b| b.total_cmp(a));
        let r = optimize(&p, dims(2, 2), &config(0)).unwrap();
        assert!(r.best_mi < 1e-12, "{}", r.best_mi);
    }
}

#[test]
fn large_grid_routes_to_heuristic() {
    let p = sorted_probs(64, 3);
    let cfg = SearchConfig {
        n1: 50,
        n2: 3,
        n_d: 5,
        ..config(0)
    };
    let r = optimize(&p, dims(8, 8), &cfg).unwrap();
    assert_eq!(r.method, Method::Heuristic);
    assert!(r.best_tableau.is_regular());
}

#[test]
fn thread_count_does_not_change_results() {
    let d = dims(5, 5);
    let p = sorted_probs(25, 8);
    let base = SearchConfig {
        n1: 300,
        n2: 8,
        n_d: 30,
        seed: 4,
        ..config(0)
    };
    let one = optimize(
        &p,
        d,
        &SearchConfig {
            parallelism: 1,
            ..base.clone()
        },
    )
    .unwrap();
    let four = optimize(
        &p,
        d,
        &SearchConfig {
            parallelism: 4,
            ..base.clone()
        },
    )
    .unwrap();
    assert_eq!(one.best_mi.to_bits(), four.best_mi.to_bits());
    assert_eq!(one.best_tableau, four.best_tableau);
    assert_eq!(one.trajectory, four.trajectory);
    assert_eq!(one.evaluations, four.evaluations);

    let d = dims(4, 4);
    let p = sorted_probs(16, 9);
    let one = exhaustive_search(
        &p,
        d,
        &SearchConfig {
            parallelism: 1,
            ..base.clone()
        },
    )
    .unwrap();
    let four = exhaustive_search(
        &p,
        d,
        &SearchConfig {
            parallelism: 4,
            ..base
        },
    )
    .unwrap();
    assert_eq!(one.best_mi.to_bits(), four.best_mi.to_bits());
    assert_eq!(one.best_tableau, four.best_tableau);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn trajectory_is_non_increasing(seed in any::<u64>(), a in 2usize..=4, b in 3usize..=5) {
        let d = dims(a, b);
        let p = sorted_probs(d.total(), seed);
        let r = optimize(&p, d, &heuristic_only(seed)).unwrap();
        prop_assert!(r.trajectory.windows(2).all(|w| w[1] <= w[0]));
        prop_assert!(r.best_mi <= *r.trajectory.last().unwrap());
        prop_assert!((oracle_mi(&p, d, r.best_tableau.cells()) - r.best_mi).abs() < 1e-12);
    }

    #[test]
    fn same_seed_same_answer(seed in any::<u64>()) {
        let d = dims(4, 5);
        let p = sorted_probs(20, seed);
        let x = optimize(&p, d, &heuristic_only(seed)).unwrap();
        let y = optimize(&p, d, &heuristic_only(seed)).unwrap();
        prop_assert_eq!(x.best_mi.to_bits(), y.best_mi.to_bits());
        prop_assert_eq!(x.best_tableau, y.best_tableau);
        prop_assert_eq!(x.provenance, y.provenance);
    }
}
