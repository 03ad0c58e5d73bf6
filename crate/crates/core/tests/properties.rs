//! Randomised invariants of the arena transforms, potentials, the En⁺
//! subroutine and the solver, checked against the reference oracles.

#![allow(clippy::needless_range_loop)]

mod common;

use esl_core::arena::{dualize, generate_random, lift_simplicity, parse, serialize, Arena, Edge, Player};
use esl_core::dijkstra::compute_en_plus;
use esl_core::esl::{solve, SolveOptions};
use esl_core::oracle::{brute_force_en, brute_force, evaluate, value_iteration_en, Extended, UltimatelyPeriodicWord, Valuation};
use esl_core::potential::{apply, compose, path_sum, Potential, PotentialMode};
use esl_core::Weight;
use proptest::prelude::*;

fn arena_strategy(max_n: usize) -> impl Strategy<Value = Arena> {
    (1..=max_n, 0..=2usize, 1..=4i64, any::<u64>()).prop_flat_map(|(n, extra, w, seed)| {
        (n..=n + extra * n).prop_map(move |m| generate_random(n, m, w, seed).unwrap())
    })
}

fn simple_arena_strategy(max_n: usize) -> impl Strategy<Value = Arena> {
    arena_strategy(max_n).prop_filter("simple", esl_core::arena::is_simple)
}

fn potential_for(n: usize) -> impl Strategy<Value = Vec<Weight>> {
    prop::collection::vec(prop_oneof![9 => (0..20i64).prop_map(Weight::Finite), 1 => Just(Weight::Inf)], n)
}

fn weight_vec(max_len: usize) -> impl Strategy<Value = Vec<Weight>> {
    prop::collection::vec(prop_oneof![9 => (-5..=5i64).prop_map(Weight::Finite), 1 => Just(Weight::Inf)], 0..max_len)
}

/// Cycle reached from `start` by always taking the first edge.
fn first_edge_cycle(a: &Arena, start: usize) -> (usize, Vec<usize>) {
    let mut seen = vec![None; a.n()];
    let mut path = Vec::new();
    let mut v = start;
    while seen[v].is_none() {
        seen[v] = Some(path.len());
        let e = a.out_edges(v)[0];
        path.push(e);
        v = a.edge(e).dst;
    }
    (v, path[seen[v].unwrap()..].to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn serialization_round_trips(a in arena_strategy(8)) {
        let text = serialize(&a);
        let back = parse(&text).unwrap();
        prop_assert_eq!(&back, &a.canonical());
        prop_assert_eq!(serialize(&back), text);
    }

    #[test]
    fn dualize_is_an_involution(a in arena_strategy(8)) {
        prop_assert_eq!(dualize(&dualize(&a)), a);
    }

    #[test]
    fn lifting_removes_zero_cycles_and_keeps_positive_set(a in arena_strategy(6)) {
        let lifted = lift_simplicity(&a).unwrap();
        prop_assert!(esl_core::arena::is_simple(&lifted));
        prop_assert!(lifted.max_abs_weight() <= (a.n() as i64 + 1) * a.max_abs_weight() + 1);
        let positive = |x: &Arena| value_iteration_en(x).iter().map(|v| v.is_infinite()).collect::<Vec<_>>();
        prop_assert_eq!(positive(&a), positive(&lifted));
    }

    #[test]
    fn zero_potential_is_identity(a in arena_strategy(8)) {
        prop_assert_eq!(apply(&a, &Potential::zero(a.n(), PotentialMode::Natural)).unwrap(), a);
    }

    #[test]
    fn potentials_compose((a, p, q) in arena_strategy(6).prop_flat_map(|a| {
        let n = a.n();
        (Just(a), potential_for(n), potential_for(n))
    })) {
        let p = Potential::new(p, PotentialMode::Natural).unwrap();
        let q = Potential::new(q, PotentialMode::Natural).unwrap();
        let twice = apply(&apply(&a, &p).unwrap(), &q).unwrap();
        prop_assert_eq!(twice, apply(&a, &compose(&p, &q).unwrap()).unwrap());
    }

    #[test]
    fn cycle_sums_are_preserved((a, p, start) in arena_strategy(8).prop_flat_map(|a| {
        let n = a.n();
        (Just(a), prop::collection::vec(0..50i64, n), 0..n)
    })) {
        let p = Potential::new(p.into_iter().map(Weight::Finite).collect(), PotentialMode::Natural).unwrap();
        let (entry, cycle) = first_edge_cycle(&a, start);
        let zero = Potential::zero(a.n(), PotentialMode::Natural);
        let raw = path_sum(&a, entry, &cycle, &zero).unwrap();
        prop_assert_eq!(path_sum(&a, entry, &cycle, &p).unwrap(), raw);
        let modified = apply(&a, &p).unwrap();
        prop_assert_eq!(path_sum(&modified, entry, &cycle, &zero).unwrap(), raw);
    }

    #[test]
    fn potential_reduction_identity((a, r) in arena_strategy(6).prop_flat_map(|a| {
        let n = a.n();
        (Just(a), potential_for(n))
    })) {
        let en = value_iteration_en(&a);
        let phi: Vec<Weight> = en.iter().zip(&r).map(|(e, x)| *e.min(x)).collect();
        let phi = Potential::sound(phi).unwrap();
        let reduced = value_iteration_en(&apply(&a, &phi).unwrap());
        let sum: Vec<Weight> = phi.values().iter().zip(&reduced).map(|(p, x)| p.checked_add(*x).unwrap()).collect();
        prop_assert_eq!(sum, en);
    }

    #[test]
    fn positive_energy_at_most_energy(prefix in weight_vec(6), cycle in weight_vec(6).prop_filter("nonempty", |c| !c.is_empty())) {
        let word = UltimatelyPeriodicWord::new(prefix, cycle).unwrap();
        prop_assert!(evaluate(&word, Valuation::PositiveEnergy) <= evaluate(&word, Valuation::Energy));
        prop_assert!(evaluate(&word, Valuation::NegativeEnergy) <= Extended::integer(0));
    }

    #[test]
    fn oracles_agree(a in arena_strategy(5)) {
        if let Ok(b) = brute_force_en(&a) {
            prop_assert_eq!(b, value_iteration_en(&a));
        }
    }

    #[test]
    fn threshold_triple_equivalence(a in arena_strategy(5)) {
        let Ok(mp) = brute_force(&a, Valuation::MeanPayoff, 100_000) else { return Ok(()) };
        let en = value_iteration_en(&a);
        let bound = Weight::Finite((a.n() as i64 - 1) * a.max_abs_weight());
        for v in 0..a.n() {
            prop_assert_eq!(mp.values[v] <= Extended::integer(0), en[v].is_finite());
            prop_assert_eq!(en[v].is_finite(), en[v] <= bound);
        }
    }

    #[test]
    fn optimal_min_paths_lose_at_most_the_value_difference(a in arena_strategy(5)) {
        let Ok(b) = brute_force(&a, Valuation::Energy, 100_000) else { return Ok(()) };
        let en = value_iteration_en(&a);
        // Every path consistent with the optimal Min strategy, of length up
        // to 2n, between finite-value vertices.
        let mut stack: Vec<(usize, usize, i64, usize)> =
            (0..a.n()).filter(|&v| en[v].is_finite()).map(|v| (v, v, 0, 0)).collect();
        while let Some((start, v, sum, len)) = stack.pop() {
            if let (Weight::Finite(e0), Weight::Finite(ek)) = (en[start], en[v]) {
                prop_assert!(sum <= e0 - ek, "path from {} to {} sums to {}", start, v, sum);
            }
            if len == 2 * a.n() {
                continue;
            }
            let edges: Vec<usize> = match a.owner(v) {
                Player::Min => vec![b.min_strategy.choice(v).unwrap()],
                Player::Max => a.out_edges(v).to_vec(),
            };
            for e in edges {
                let edge = a.edge(e);
                if let (Weight::Finite(w), true) = (edge.weight, en[edge.dst].is_finite()) {
                    stack.push((start, edge.dst, sum + w, len + 1));
                }
            }
        }
    }

    #[test]
    fn en_plus_ignores_edge_order((a, rotation) in simple_arena_strategy(8).prop_flat_map(|a| {
        let m = a.m();
        (Just(a), 0..m)
    })) {
        let Ok(r) = compute_en_plus(&a) else { return Ok(()) };
        let mut edges: Vec<Edge> = a.edges().to_vec();
        edges.rotate_left(rotation);
        let b = Arena::new(a.owners().to_vec(), edges).unwrap();
        prop_assert_eq!(compute_en_plus(&b).unwrap().values, r.values);
    }

    #[test]
    fn en_plus_heap_work_is_bounded(a in simple_arena_strategy(8)) {
        let Ok(r) = compute_en_plus(&a) else { return Ok(()) };
        let s = r.stats;
        prop_assert!(s.heap_pushes <= a.m());
        prop_assert!(s.heap_pushes + (s.heap_pops - s.stale_pops) <= a.m() + a.n());
        prop_assert_eq!(s.settled, r.values.iter().filter(|v| v.is_finite()).count());
        for &v in &r.seeds {
            prop_assert_eq!(r.values[v], Weight::ZERO);
        }
    }

    #[test]
    fn potentials_stay_sound_and_infinity_is_absorbing(a in simple_arena_strategy(8)) {
        let options = SolveOptions { record_potentials: true, verify_strategies: false, ..SolveOptions::default() };
        let r = solve(&a, options).unwrap();
        let en = value_iteration_en(&a);
        let mut total = Potential::zero(a.n(), PotentialMode::Natural);
        let mut infinite = vec![false; a.n()];
        for it in &r.per_iteration {
            total = compose(&total, &Potential::sound(it.phi.clone().unwrap()).unwrap()).unwrap();
            for v in 0..a.n() {
                prop_assert!(total.get(v) <= en[v]);
                prop_assert!(!infinite[v] || total.get(v).is_infinite());
                infinite[v] = total.get(v).is_infinite();
            }
        }
        prop_assert_eq!(total.values(), en.as_slice());
    }

    #[test]
    fn solve_is_exact_unless_it_reports_non_simplicity(a in arena_strategy(8)) {
        let options = SolveOptions { verify_strategies: false, ..SolveOptions::default() };
        let vi = value_iteration_en(&a);
        match solve(&a, options) {
            Ok(r) => prop_assert_eq!(r.en_values.unwrap(), vi),
            Err(esl_core::SolveError::NotSimple { .. }) => {
                prop_assert!(!esl_core::arena::is_simple(&a));
                let lifted = solve(&a, SolveOptions { auto_lift: true, ..options }).unwrap();
                let positive: Vec<bool> = vi.iter().map(|v| v.is_infinite()).collect();
                let reported: Vec<bool> = lifted.threshold.iter().map(|t| *t == esl_core::Threshold::Positive).collect();
                prop_assert_eq!(reported, positive);
            }
            Err(e) => prop_assert!(false, "{}", e),
        }
    }

    #[test]
    fn dual_solver_mirrors_primal(a in simple_arena_strategy(6)) {
        let options = SolveOptions { verify_strategies: false, ..SolveOptions::default() };
        let primal = solve(&a, options).unwrap();
        let dual = esl_core::esl::solve_dual(&dualize(&a), options).unwrap();
        let negated: Vec<Weight> = primal.en_values.unwrap().iter().map(|v| v.checked_neg().unwrap()).collect();
        prop_assert_eq!(dual.values, Some(negated));
    }
}
