//! Runs every solvable variant on the same instances and tabulates nodes,
//! cuts, LP iterations and time.

use ldtsp::instance::random_instance;
use ldtsp::model::ModelVariant;
use ldtsp::solver::{astar_search, solve, SolveConfig};

fn main() {
    println!("{:>6} {:>18} {:>12} {:>7} {:>5} {:>8} {:>8}", "seed", "variant", "cost", "nodes", "cuts", "lp_iter", "time_s");
    for seed in 1..=3 {
        let inst = random_instance(9, 2.0, seed);
        for variant in [ModelVariant::CoreMilp, ModelVariant::Baseline1Milp, ModelVariant::Baseline2MilpDfj] {
            let cfg = SolveConfig {
                variant,
                ..SolveConfig::default()
            };
            let r = solve(&inst, &cfg).expect("linear variant");
            println!(
                "{seed:>6} {:>18} {:>12.6} {:>7} {:>5} {:>8} {:>8.3}",
                variant.name(),
                r.incumbent_cost.unwrap(),
                r.nodes_explored,
                r.cuts_added,
                r.lp_iterations,
                r.wall_time
            );
        }
        let r = astar_search(&inst, &SolveConfig::default()).expect("small instance");
        println!(
            "{seed:>6} {:>18} {:>12.6} {:>7} {:>5} {:>8} {:>8.3}",
            "astar",
            r.incumbent_cost.unwrap(),
            r.nodes_explored,
            0,
            0,
            r.wall_time
        );
    }
}
