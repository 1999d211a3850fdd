//! With zero unladen mass the return leg is free and the search estimate
//! vanishes; the tree search still matches the dynamic program.

use ldtsp::instance::random_instance;
use ldtsp::oracles::held_karp;
use ldtsp::solver::{astar_heuristic, astar_search, SolveConfig};

fn main() {
    for gamma in [0.0, 2.0] {
        let inst = random_instance(9, gamma, 5);
        let r = astar_search(&inst, &SolveConfig::default()).expect("small instance");
        let (_, hk) = held_karp(&inst).expect("small instance");
        println!(
            "gamma={gamma}: root estimate {:.4}, cost {:.6}, dynamic program {:.6}, expanded {}",
            astar_heuristic(&inst, 0, inst.depot()),
            r.incumbent_cost.unwrap(),
            hk,
            r.nodes_explored
        );
    }
}
