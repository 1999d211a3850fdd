//! Solves a random instance with the core formulation and prints the
//! progress log and the delivery sequence.
//!
//! `cargo run --release --example solve_core -- [targets] [seed]`

use ldtsp::instance::random_instance;
use ldtsp::solver::{solve, SolveConfig};

fn main() {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(10);
    let seed: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(1);
    let inst = random_instance(n, 10.0, seed);
    let r = solve(&inst, &SolveConfig::default()).expect("core variant is solvable");
    for e in &r.events {
        println!("{e}");
    }
    let tour = r.incumbent.expect("tour found");
    let ids: Vec<String> = tour.order().iter().map(|v| (v + 1).to_string()).collect();
    println!("status {} cost {:.6} sequence {}", r.status, r.incumbent_cost.unwrap(), ids.join("-"));
}
