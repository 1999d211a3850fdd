//! Cross-checks brute force, the subset dynamic program and the MILP
//! search on a handful of instances and validates each reported solution.

use ldtsp::instance::random_instance;
use ldtsp::oracles::{brute_force, held_karp, verify_solution};
use ldtsp::solver::{solve, SolveConfig};

fn main() {
    for seed in 0..5 {
        let inst = random_instance(7, [0.0, 2.0, 5.0, 10.0, 1.0][seed as usize], seed);
        let (_, bf) = brute_force(&inst).unwrap();
        let (_, hk) = held_karp(&inst).unwrap();
        let r = solve(&inst, &SolveConfig::default()).unwrap();
        let verdict = verify_solution(&inst, &r);
        println!(
            "seed {seed}: brute {bf:.6} dp {hk:.6} milp {:.6} verdict {}",
            r.incumbent_cost.unwrap(),
            if verdict.passed() { "ok".to_string() } else { verdict.failures.join("; ") }
        );
    }
}
