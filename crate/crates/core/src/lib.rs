//! Exact and heuristic solvers for the load-dependent travelling salesman
//! problem, where travel cost scales with the vehicle's current mass.

pub mod energy;
mod fmt;
pub mod instance;
pub mod lp;
pub mod model;
pub mod rng;
pub mod heuristics;
pub mod solver;
pub mod oracles;
pub mod cli;
