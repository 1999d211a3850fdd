use ldtsp::heuristics::{cycle_length, two_opt, warm_start};
use ldtsp::instance::{make_instance, read_instance, write_instance, Instance, Metric, NodeSet};
use ldtsp::model::evaluate_tour;
use ldtsp::oracles::{brute_force, held_karp};
use ldtsp::solver::{solve, SolveConfig, SolveStatus};
use proptest::prelude::*;

fn instance(max_targets: usize) -> impl Strategy<Value = Instance> {
    (1..=max_targets).prop_flat_map(|n| {
        (
            prop::collection::vec((0.0..100.0f64, 0.0..100.0f64), n + 1),
            prop::collection::vec(0.1..5.0f64, n),
            prop_oneof![Just(0.0), 0.5..20.0f64, Just(1e4)],
            0..=n,
        )
            .prop_map(|(coords, masses, gamma, depot)| {
                let nodes = NodeSet::new("prop", coords, Metric::EuclidExact).unwrap();
                make_instance(nodes, Some(depot), &masses, gamma, 0.1).unwrap()
            })
    })
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-6 * (1.0 + a.abs().max(b.abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn tour_cost_is_leg_sum(inst in instance(7), shuffle in any::<u64>()) {
        let mut order: Vec<usize> = inst.targets().collect();
        let k = order.len();
        order.rotate_left((shuffle as usize) % k);
        let (tour, cost) = evaluate_tour(&inst, &order).unwrap();
        let mut sum = 0.0;
        let mut prev = f64::INFINITY;
        for ((a, b), &m) in tour.legs().zip(&tour.masses) {
            prop_assert!(m < prev);
            prev = m;
            sum += inst.alpha() * m * inst.d(a, b);
        }
        prop_assert!(close(tour.masses[0], inst.laden()));
        prop_assert!(close(*tour.masses.last().unwrap(), inst.unladen()));
        prop_assert!(close(sum, cost));
        prop_assert!(cost + 1e-9 >= inst.alpha() * inst.unladen() * tour.distance(&inst));
    }

    #[test]
    fn native_format_roundtrip(inst in instance(6)) {
        let back = read_instance(&write_instance(&inst)).unwrap();
        prop_assert_eq!(back.depot(), inst.depot());
        prop_assert_eq!(back.target_masses(), inst.target_masses());
        prop_assert_eq!(back.unladen(), inst.unladen());
        let order: Vec<usize> = inst.targets().collect();
        prop_assert_eq!(evaluate_tour(&back, &order).unwrap().1, evaluate_tour(&inst, &order).unwrap().1);
    }

    #[test]
    fn dynamic_program_matches_enumeration(inst in instance(6)) {
        let (_, bf) = brute_force(&inst).unwrap();
        let (tour, hk) = held_karp(&inst).unwrap();
        prop_assert!(close(bf, hk));
        prop_assert!(close(evaluate_tour(&inst, tour.order()).unwrap().1, hk));
        prop_assert!(warm_start(&inst).1 + 1e-9 >= hk);
    }

    #[test]
    fn two_opt_never_lengthens(inst in instance(9)) {
        let seq: Vec<usize> = (0..inst.len()).collect();
        let improved = two_opt(&seq, inst.dist());
        let mut sorted = improved.clone();
        sorted.sort_unstable();
        prop_assert_eq!(sorted, seq.clone());
        prop_assert!(cycle_length(&improved, inst.dist()) <= cycle_length(&seq, inst.dist()) + 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn branch_and_cut_matches_dynamic_program(inst in instance(5)) {
        let (_, hk) = held_karp(&inst).unwrap();
        let r = solve(&inst, &SolveConfig::default()).unwrap();
        prop_assert_eq!(r.status, SolveStatus::Optimal);
        let cost = r.incumbent_cost.unwrap();
        prop_assert!(close(cost, hk), "solver {} vs dp {}", cost, hk);
        prop_assert!(r.best_bound <= cost + 1e-6 * (1.0 + cost));
    }
}
