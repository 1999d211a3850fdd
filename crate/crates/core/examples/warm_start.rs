//! Effect of seeding the search with a nearest-neighbor plus 2-opt tour.

use ldtsp::heuristics::warm_start;
use ldtsp::instance::random_instance;
use ldtsp::solver::{solve, SolveConfig};

fn main() {
    let inst = random_instance(11, 10.0, 4);
    let (_, seed_cost) = warm_start(&inst);
    println!("heuristic tour cost {seed_cost:.6}");
    for on in [true, false] {
        let cfg = SolveConfig {
            warm_start: on,
            ..SolveConfig::default()
        };
        let r = solve(&inst, &cfg).unwrap();
        println!(
            "warm start {:<3}: cost {:.6}, nodes {}, lp iterations {}, {:.2} s",
            if on { "on" } else { "off" },
            r.incumbent_cost.unwrap(),
            r.nodes_explored,
            r.lp_iterations,
            r.wall_time
        );
    }
}
