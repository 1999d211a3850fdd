//! Solver-agnostic model representation and the load-dependent TSP
//! formulations built on it.

mod export;
mod milp;
mod minlp;
mod tour;

pub use export::{export_lp, export_mps};
pub use milp::{build_milp, dfj_cut};
pub use minlp::build_minlp;
pub use tour::{evaluate_tour, tour_point, validate_successors, Tour};

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    #[error("variant {0} has no linear model")]
    NoLinearModel(ModelVariant),
    #[error("cut set must contain the depot and leave at least one node outside")]
    BadCutSet,
    #[error("sequence is not a permutation of the targets: {0}")]
    BadSequence(String),
    #[error("name `{0}` does not fit a fixed MPS field")]
    MpsName(String),
}

/// Model variable. Node arguments are zero-based indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarId {
    /// Edge `(i, j)` selected.
    X(usize, usize),
    /// Mass at the tail of a selected edge, zero otherwise.
    Zeta(usize, usize),
    /// Mass at the head of a selected edge, zero otherwise.
    Eta(usize, usize),
    /// Vehicle mass after serving a target.
    Mass(usize),
}

impl fmt::Display for VarId {
    /// Export name, one-based node ids.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            VarId::X(i, j) => write!(f, "x_{}_{}", i + 1, j + 1),
            VarId::Zeta(i, j) => write!(f, "z_{}_{}", i + 1, j + 1),
            VarId::Eta(i, j) => write!(f, "e_{}_{}", i + 1, j + 1),
            VarId::Mass(i) => write!(f, "M_{}", i + 1),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Variable {
    pub id: VarId,
    pub lb: f64,
    pub ub: f64,
    pub integer: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sense {
    Le,
    Eq,
    Ge,
}

impl Sense {
    pub fn symbol(self) -> &'static str {
        match self {
            Sense::Le => "<=",
            Sense::Eq => "=",
            Sense::Ge => ">=",
        }
    }

    pub fn holds(self, lhs: f64, rhs: f64, tol: f64) -> bool {
        match self {
            Sense::Le => lhs <= rhs + tol,
            Sense::Eq => (lhs - rhs).abs() <= tol,
            Sense::Ge => lhs >= rhs - tol,
        }
    }
}

/// Provenance of a constraint row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tag {
    DegreeOut,
    DegreeIn,
    /// Tail mass on depot departures equals the laden mass.
    DepotLaden,
    /// Head mass on depot arrivals equals the unladen mass.
    DepotUnladen,
    /// Tail and head mass differ by the package dropped at the head.
    MassDrop,
    /// Arriving head mass equals departing tail mass at each target.
    MassBalance,
    ZetaLower,
    ZetaUpper,
    EtaLower,
    EtaUpper,
    ZetaLinkUpper,
    ZetaLinkLower,
    EtaLinkUpper,
    EtaLinkLower,
    /// Mass-variable drop constraint, upper side of the absolute value.
    DropUpper,
    /// Mass-variable drop constraint, lower side of the absolute value.
    DropLower,
    Dfj,
}

impl Tag {
    pub fn as_str(self) -> &'static str {
        match self {
            Tag::DegreeOut => "degree-out",
            Tag::DegreeIn => "degree-in",
            Tag::DepotLaden => "depot-laden",
            Tag::DepotUnladen => "depot-unladen",
            Tag::MassDrop => "mass-drop",
            Tag::MassBalance => "mass-balance",
            Tag::ZetaLower => "zeta-lower",
            Tag::ZetaUpper => "zeta-upper",
            Tag::EtaLower => "eta-lower",
            Tag::EtaUpper => "eta-upper",
            Tag::ZetaLinkUpper => "zeta-link-upper",
            Tag::ZetaLinkLower => "zeta-link-lower",
            Tag::EtaLinkUpper => "eta-link-upper",
            Tag::EtaLinkLower => "eta-link-lower",
            Tag::DropUpper => "drop-upper",
            Tag::DropLower => "drop-lower",
            Tag::Dfj => "dfj",
        }
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearConstraint {
    pub terms: Vec<(VarId, f64)>,
    pub sense: Sense,
    pub rhs: f64,
    pub tag: Tag,
}

impl LinearConstraint {
    /// Merges repeated variables (first occurrence keeps its position) and
    /// drops zero coefficients.
    pub fn new(terms: impl IntoIterator<Item = (VarId, f64)>, sense: Sense, rhs: f64, tag: Tag) -> Self {
        let mut merged: Vec<(VarId, f64)> = Vec::new();
        let mut pos: HashMap<VarId, usize> = HashMap::new();
        for (v, c) in terms {
            match pos.get(&v) {
                Some(&p) => merged[p].1 += c,
                None => {
                    pos.insert(v, merged.len());
                    merged.push((v, c));
                }
            }
        }
        merged.retain(|t| t.1 != 0.0);
        Self {
            terms: merged,
            sense,
            rhs,
            tag,
        }
    }

    pub fn activity(&self, value: impl Fn(VarId) -> f64) -> f64 {
        self.terms.iter().map(|&(v, c)| c * value(v)).sum()
    }

    /// Amount by which the row is violated at the given point (0 if satisfied).
    pub fn violation(&self, value: impl Fn(VarId) -> f64) -> f64 {
        let lhs = self.activity(value);
        match self.sense {
            Sense::Le => (lhs - self.rhs).max(0.0),
            Sense::Ge => (self.rhs - lhs).max(0.0),
            Sense::Eq => (lhs - self.rhs).abs(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelVariant {
    CoreMilp,
    Baseline1Milp,
    Baseline2MilpDfj,
    Minlp,
}

impl ModelVariant {
    pub fn name(self) -> &'static str {
        match self {
            ModelVariant::CoreMilp => "core_milp",
            ModelVariant::Baseline1Milp => "baseline1_milp",
            ModelVariant::Baseline2MilpDfj => "baseline2_milp_dfj",
            ModelVariant::Minlp => "minlp",
        }
    }

    /// Whether subtour cuts are separated lazily while solving.
    pub fn lazy_dfj(self) -> bool {
        self == ModelVariant::Baseline2MilpDfj
    }
}

impl fmt::Display for ModelVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Minimization model: linear objective plus an optional bilinear part
/// (only the mass-variable formulation has one).
#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel {
    pub name: String,
    pub variant: ModelVariant,
    pub vars: Vec<Variable>,
    pub constraints: Vec<LinearConstraint>,
    pub objective: Vec<(VarId, f64)>,
    pub bilinear: Vec<(VarId, VarId, f64)>,
    index: HashMap<VarId, usize>,
}

impl LinearModel {
    pub(crate) fn new(name: impl Into<String>, variant: ModelVariant) -> Self {
        Self {
            name: name.into(),
            variant,
            vars: Vec::new(),
            constraints: Vec::new(),
            objective: Vec::new(),
            bilinear: Vec::new(),
            index: HashMap::new(),
        }
    }

    pub(crate) fn add_var(&mut self, id: VarId, lb: f64, ub: f64, integer: bool) {
        debug_assert!(lb <= ub, "{id}: {lb} > {ub}");
        debug_assert!(!self.index.contains_key(&id));
        self.index.insert(id, self.vars.len());
        self.vars.push(Variable { id, lb, ub, integer });
    }

    pub(crate) fn push(&mut self, c: LinearConstraint) {
        debug_assert!(c.terms.iter().all(|(v, k)| self.index.contains_key(v) && k.is_finite()));
        self.constraints.push(c);
    }

    pub fn var_index(&self, id: VarId) -> Option<usize> {
        self.index.get(&id).copied()
    }

    pub fn n_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn count_tag(&self, tag: Tag) -> usize {
        self.constraints.iter().filter(|c| c.tag == tag).count()
    }

    /// Objective at a point given in variable order.
    pub fn objective_value(&self, point: &[f64]) -> f64 {
        let v = |id: VarId| point[self.index[&id]];
        let lin: f64 = self.objective.iter().map(|&(id, c)| c * v(id)).sum();
        let quad: f64 = self.bilinear.iter().map(|&(a, b, c)| c * v(a) * v(b)).sum();
        lin + quad
    }

    /// Largest bound or row violation at a point given in variable order.
    pub fn max_violation(&self, point: &[f64]) -> f64 {
        let bounds = self
            .vars
            .iter()
            .zip(point)
            .map(|(v, &x)| (v.lb - x).max(x - v.ub).max(0.0))
            .fold(0.0, f64::max);
        let rows = self
            .constraints
            .iter()
            .map(|c| c.violation(|id| point[self.index[&id]]))
            .fold(0.0, f64::max);
        bounds.max(rows)
    }

    pub fn is_feasible(&self, point: &[f64], tol: f64) -> bool {
        self.max_violation(point) <= tol
    }
}

/// Directed edges of the complete graph on `n` nodes in `(i, j)` order.
pub fn edges(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
}

/// Position of `(i, j)` in [`edges`] order.
#[inline]
pub fn edge_index(n: usize, i: usize, j: usize) -> usize {
    i * (n - 1) + if j < i { j } else { j - 1 }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_indexing_matches_enumeration() {
        for n in 2..6 {
            for (k, (i, j)) in edges(n).enumerate() {
                assert_eq!(edge_index(n, i, j), k);
            }
        }
    }

    #[test]
    fn constraint_merges_terms() {
        let c = LinearConstraint::new(
            [(VarId::X(0, 1), 1.0), (VarId::X(1, 0), 2.0), (VarId::X(0, 1), -1.0)],
            Sense::Le,
            1.0,
            Tag::Dfj,
        );
        assert_eq!(c.terms, vec![(VarId::X(1, 0), 2.0)]);
    }

    #[test]
    fn names_are_one_based() {
        assert_eq!(VarId::X(0, 2).to_string(), "x_1_3");
        assert_eq!(VarId::Zeta(1, 0).to_string(), "z_2_1");
        assert_eq!(VarId::Eta(3, 4).to_string(), "e_4_5");
        assert_eq!(VarId::Mass(9).to_string(), "M_10");
    }
}
