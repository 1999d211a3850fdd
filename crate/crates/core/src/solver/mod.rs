//! Exact solvers: LP-based branch-and-bound over the MILP formulations and
//! a best-first tree search over delivery sequences.

mod astar;
mod bnb;
mod dfj;
mod relax;

pub use astar::{astar_heuristic, astar_search};
pub use dfj::{max_flow, separate_dfj};

use std::fmt;
use std::time::Duration;

use thiserror::Error;

use crate::instance::Instance;
use crate::model::{ModelError, ModelVariant, Tour};

#[derive(Debug, Error, PartialEq)]
pub enum SolverError {
    #[error("variant {0} cannot be solved, only exported")]
    Unsupported(ModelVariant),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("integral LP solution is not a tour: {0}")]
    Subtour(ModelError),
    #[error("gap is undefined for incumbent cost {0}")]
    GapUndefined(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeSelection {
    /// Lowest bound first, with a depth-first dive every tenth expansion.
    BestBound,
    DepthFirst,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchRule {
    /// Edge whose value is closest to one half; smallest `(i, j)` on ties.
    MostFractional,
    /// Pseudo-cost product once both directions of an edge have been
    /// observed, most fractional otherwise.
    PseudoFirst,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveConfig {
    pub variant: ModelVariant,
    pub time_limit: Duration,
    /// Relative gap at which a node is pruned and the run is optimal.
    pub gap_tolerance: f64,
    pub warm_start: bool,
    pub node_selection: NodeSelection,
    pub branch_rule: BranchRule,
    /// Recorded in reports; every search rule here is deterministic.
    pub seed: u64,
    pub max_nodes: usize,
    /// Open-list size at which the tree search gives up.
    pub max_open: usize,
}

impl Default for SolveConfig {
    fn default() -> Self {
        Self {
            variant: ModelVariant::CoreMilp,
            time_limit: Duration::from_secs(600),
            gap_tolerance: 1e-6,
            warm_start: true,
            node_selection: NodeSelection::BestBound,
            branch_rule: BranchRule::MostFractional,
            seed: 0,
            max_nodes: usize::MAX,
            max_open: 20_000_000,
        }
    }
}

impl SolveConfig {
    fn check(&self) -> Result<(), SolverError> {
        if self.time_limit.is_zero() {
            return Err(SolverError::Config("time limit must be positive".into()));
        }
        if !(self.gap_tolerance >= 0.0) {
            return Err(SolverError::Config("gap tolerance must be non-negative".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    FeasibleTimeLimit,
    Infeasible,
    NodeLimit,
}

impl SolveStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SolveStatus::Optimal => "optimal",
            SolveStatus::FeasibleTimeLimit => "feasible_time_limit",
            SolveStatus::Infeasible => "infeasible",
            SolveStatus::NodeLimit => "node_limit",
        }
    }
}

impl fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Progress snapshot, written whenever the incumbent or bound improves.
#[derive(Debug, Clone, PartialEq)]
pub struct Event {
    pub elapsed: f64,
    pub nodes: usize,
    pub bound: f64,
    pub incumbent: Option<f64>,
}

impl Event {
    pub fn gap(&self) -> Option<f64> {
        self.incumbent.and_then(|inc| gap_percent(inc, self.bound).ok())
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let opt = |v: Option<f64>| v.map_or("none".to_string(), |v| format!("{v:.6}"));
        write!(
            f,
            "t={:.3} nodes={} bound={:.6} incumbent={} gap={}",
            self.elapsed,
            self.nodes,
            self.bound,
            opt(self.incumbent),
            opt(self.gap())
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub status: SolveStatus,
    pub incumbent: Option<Tour>,
    pub incumbent_cost: Option<f64>,
    pub best_bound: f64,
    /// Objective of the first relaxation solved, when there is one.
    pub root_bound: Option<f64>,
    pub gap_percent: Option<f64>,
    pub nodes_explored: usize,
    pub cuts_added: usize,
    pub lp_iterations: usize,
    pub wall_time: f64,
    pub events: Vec<Event>,
    /// Successor arrays of every integral relaxation solution reached,
    /// before they were checked for subtours.
    pub integral_successors: Vec<Vec<usize>>,
}

impl SolveReport {
    /// Fields that do not depend on timing, for reproducibility checks.
    pub fn outcome(&self) -> (SolveStatus, Option<f64>, f64, usize, usize, usize) {
        (
            self.status,
            self.incumbent_cost,
            self.best_bound,
            self.nodes_explored,
            self.cuts_added,
            self.lp_iterations,
        )
    }
}

/// `100 * (incumbent - bound) / incumbent`.
pub fn gap_percent(incumbent: f64, bound: f64) -> Result<f64, SolverError> {
    if !(incumbent > 0.0) {
        return Err(SolverError::GapUndefined(incumbent));
    }
    Ok(100.0 * (incumbent - bound) / incumbent)
}

/// Branch-and-bound (branch-and-cut for the lazily cut variant) on the
/// chosen MILP.
pub fn solve(inst: &Instance, cfg: &SolveConfig) -> Result<SolveReport, SolverError> {
    cfg.check()?;
    if cfg.variant == ModelVariant::Minlp {
        return Err(SolverError::Unsupported(cfg.variant));
    }
    bnb::run(inst, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gap_examples() {
        assert_eq!(gap_percent(100.0, 100.0).unwrap(), 0.0);
        assert!((gap_percent(100.0, 87.0).unwrap() - 13.0).abs() < 1e-12);
        assert_eq!(gap_percent(246.15, 246.15).unwrap(), 0.0);
        assert_eq!(gap_percent(0.0, 0.0), Err(SolverError::GapUndefined(0.0)));
    }

    #[test]
    fn event_line_format() {
        let e = Event {
            elapsed: 1.5,
            nodes: 7,
            bound: 9.0,
            incumbent: Some(10.0),
        };
        assert_eq!(e.to_string(), "t=1.500 nodes=7 bound=9.000000 incumbent=10.000000 gap=10.000000");
    }

    #[test]
    fn rejects_bad_config() {
        let inst = crate::instance::random_instance(2, 1.0, 1);
        let cfg = SolveConfig {
            time_limit: Duration::ZERO,
            ..SolveConfig::default()
        };
        assert!(matches!(solve(&inst, &cfg), Err(SolverError::Config(_))));
        let cfg = SolveConfig {
            variant: ModelVariant::Minlp,
            ..SolveConfig::default()
        };
        assert_eq!(solve(&inst, &cfg), Err(SolverError::Unsupported(ModelVariant::Minlp)));
    }
}
