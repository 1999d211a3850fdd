//! Reduced form of the MILP relaxation used inside branch-and-bound.
//!
//! The equality rows pin most mass variables to affine functions of `x`:
//! `zeta_Dj = (M + Mbar) x_Dj`, `eta_jD = M x_jD` and
//! `eta_ij = zeta_ij - m_j x_ij`. Writing each remaining tail mass as
//! `zeta_ij = L_ij x_ij + f_ij`, with `L_ij` the smallest mass allowed on
//! the edge, leaves the edge variables, one slack `f_ij` per edge leaving a
//! target, the degree rows, the mass balance rows and `f_ij <= (M + Mbar -
//! L_ij) x_ij`. Every dropped row is implied by these, so the reduced LP has
//! the same optimum as the full relaxation. Extra rows (link rows, subtour
//! cuts) are carried over through the same substitution.

use std::collections::HashMap;

use crate::instance::Instance;
use crate::lp::{LpProblem, LpRow};
use crate::model::{edge_index, edges, LinearConstraint, LinearModel, Sense, Tag, VarId};

pub(crate) struct Compact {
    pub problem: LpProblem,
    n: usize,
    depot: usize,
    laden: f64,
    unladen: f64,
    masses: Vec<f64>,
    f_col: Vec<Option<usize>>,
}

impl Compact {
    pub fn new(inst: &Instance, model: &LinearModel) -> Self {
        let n = inst.len();
        let depot = inst.depot();
        let n_edges = n * (n - 1);
        let mut c = Self {
            problem: LpProblem {
                cost: vec![0.0; n_edges],
                lower: vec![0.0; n_edges],
                upper: vec![1.0; n_edges],
                rows: Vec::new(),
            },
            n,
            depot,
            laden: inst.laden(),
            unladen: inst.unladen(),
            masses: (0..n).map(|v| inst.mass(v)).collect(),
            f_col: vec![None; n_edges],
        };
        for (i, j) in edges(n).filter(|&(i, _)| i != depot) {
            let room = c.laden - c.floor(i, j);
            let col = c.problem.cost.len();
            c.f_col[edge_index(n, i, j)] = Some(col);
            c.problem.cost.push(0.0);
            c.problem.lower.push(0.0);
            c.problem.upper.push(room.max(0.0));
        }
        let (objective, _) = c.expand(&model.objective);
        for (col, a) in objective {
            c.problem.cost[col] += a;
        }
        for row in &model.constraints {
            let keep = matches!(
                row.tag,
                Tag::DegreeOut
                    | Tag::DegreeIn
                    | Tag::MassBalance
                    | Tag::ZetaLinkUpper
                    | Tag::ZetaLinkLower
                    | Tag::EtaLinkUpper
                    | Tag::EtaLinkLower
                    | Tag::Dfj
            );
            if keep {
                if let Some(r) = c.translate(row) {
                    c.problem.rows.push(r);
                }
            }
        }
        for (i, j) in edges(n).filter(|&(i, _)| i != depot) {
            let e = edge_index(n, i, j);
            let f = c.f_col[e].expect("f column exists for target tails");
            let room = c.problem.upper[f];
            c.problem.rows.push(LpRow {
                coefs: vec![(f, 1.0), (e, -room)],
                sense: Sense::Le,
                rhs: 0.0,
            });
        }
        c
    }

    /// Smallest tail mass on a selected edge `(i, j)` with `i` a target.
    fn floor(&self, _i: usize, j: usize) -> f64 {
        if j == self.depot {
            self.unladen
        } else {
            self.unladen + self.masses[j]
        }
    }

    pub fn x_col(&self, i: usize, j: usize) -> usize {
        edge_index(self.n, i, j)
    }

    pub fn n_edges(&self) -> usize {
        self.n * (self.n - 1)
    }

    /// Affine image of a model variable: column terms plus a constant.
    fn image(&self, v: VarId) -> (Vec<(usize, f64)>, f64) {
        let x = |i, j| edge_index(self.n, i, j);
        let f = |i, j| self.f_col[edge_index(self.n, i, j)].expect("target tail");
        let d = self.depot;
        match v {
            VarId::X(i, j) => (vec![(x(i, j), 1.0)], 0.0),
            VarId::Zeta(i, j) if i == d => (vec![(x(i, j), self.laden)], 0.0),
            VarId::Zeta(i, j) => (vec![(x(i, j), self.floor(i, j)), (f(i, j), 1.0)], 0.0),
            VarId::Eta(i, j) if i == d => (vec![(x(i, j), self.laden - self.masses[j])], 0.0),
            VarId::Eta(i, j) if j == d => (vec![(x(i, j), self.unladen)], 0.0),
            VarId::Eta(i, j) => (vec![(x(i, j), self.unladen), (f(i, j), 1.0)], 0.0),
            VarId::Mass(_) => unreachable!("mass variables only occur in the bilinear model"),
        }
    }

    fn expand(&self, terms: &[(VarId, f64)]) -> (Vec<(usize, f64)>, f64) {
        let mut acc: HashMap<usize, f64> = HashMap::new();
        let mut order = Vec::new();
        let mut constant = 0.0;
        for &(v, a) in terms {
            let (cols, k) = self.image(v);
            constant += a * k;
            for (col, b) in cols {
                let e = acc.entry(col).or_insert_with(|| {
                    order.push(col);
                    0.0
                });
                *e += a * b;
            }
        }
        let scale = terms.iter().map(|t| t.1.abs()).fold(0.0, f64::max);
        let out = order
            .into_iter()
            .map(|col| (col, acc[&col]))
            .filter(|t| t.1.abs() > 1e-12 * scale.max(1.0))
            .collect();
        (out, constant)
    }

    /// The row in reduced columns; `None` when it has no terms left and
    /// holds trivially. Every tail and head mass image carries `M x_ij`;
    /// when those parts add up to a combination of degree rows they are
    /// subtracted out, which keeps rows free of the unladen mass scale.
    pub fn translate(&self, row: &LinearConstraint) -> Option<LpRow> {
        let (mut coefs, constant) = self.expand(&row.terms);
        let mut rhs = row.rhs - constant;
        if let Some((u, w)) = self.degree_potentials(&row.terms) {
            let mut acc: HashMap<usize, f64> = coefs.iter().copied().collect();
            for (i, j) in edges(self.n) {
                let e = edge_index(self.n, i, j);
                *acc.entry(e).or_insert(0.0) -= u[i] + w[j];
            }
            rhs -= u.iter().sum::<f64>() + w.iter().sum::<f64>();
            let scale = row.terms.iter().map(|t| t.1.abs()).fold(1.0, f64::max);
            let mut cols: Vec<usize> = acc.keys().copied().collect();
            cols.sort_unstable();
            coefs = cols
                .into_iter()
                .map(|c| (c, acc[&c]))
                .filter(|t| t.1.abs() > 1e-12 * scale)
                .collect();
        }
        if coefs.is_empty() {
            assert!(row.sense.holds(0.0, rhs, 1e-9), "row {} is infeasible after substitution", row.tag);
            return None;
        }
        Some(LpRow {
            coefs,
            sense: row.sense,
            rhs,
        })
    }

    /// Node multipliers `u` (out-degree rows) and `w` (in-degree rows) with
    /// `u_i + w_j` equal to the unladen-mass part of edge `(i, j)` in the
    /// row, if such multipliers exist and the part is not zero.
    fn degree_potentials(&self, terms: &[(VarId, f64)]) -> Option<(Vec<f64>, Vec<f64>)> {
        let n = self.n;
        if self.unladen == 0.0 || n < 3 {
            return None;
        }
        let mut c = vec![0.0; n * n];
        let mut any = false;
        for &(v, a) in terms {
            if let VarId::Zeta(i, j) | VarId::Eta(i, j) = v {
                c[i * n + j] += a * self.unladen;
                any = true;
            }
        }
        if !any {
            return None;
        }
        let mut u = vec![0.0; n];
        let mut w = vec![0.0; n];
        w[1..n].copy_from_slice(&c[1..n]);
        for i in 1..n {
            let j = if i == 1 { 2 } else { 1 };
            u[i] = c[i * n + j] - w[j];
        }
        w[0] = c[n] - u[1];
        let tol = 1e-12 * self.unladen * terms.iter().map(|t| t.1.abs()).fold(1.0, f64::max);
        let fits = edges(n).all(|(i, j)| (u[i] + w[j] - c[i * n + j]).abs() <= tol);
        fits.then_some((u, w))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::random_instance;
    use crate::lp::{solve_lp, LpConfig, LpStatus};
    use crate::model::{build_milp, evaluate_tour, ModelVariant};

    #[test]
    fn reduced_relaxation_matches_full_relaxation() {
        for (seed, gamma, variant) in [
            (1, 0.0, ModelVariant::CoreMilp),
            (2, 2.0, ModelVariant::CoreMilp),
            (3, 10.0, ModelVariant::CoreMilp),
            (4, 5.0, ModelVariant::Baseline1Milp),
            (5, 0.0, ModelVariant::Baseline1Milp),
        ] {
            let inst = random_instance(4, gamma, seed);
            let model = build_milp(&inst, variant).unwrap();
            let full = solve_lp(&LpProblem::from_model(&model).unwrap(), &LpConfig::default()).unwrap();
            let small = solve_lp(&Compact::new(&inst, &model).problem, &LpConfig::default()).unwrap();
            assert_eq!(full.status, LpStatus::Optimal);
            assert_eq!(small.status, LpStatus::Optimal);
            assert!(
                (full.objective - small.objective).abs() <= 1e-7 * full.objective.abs().max(1.0),
                "seed {seed}: {} vs {}",
                full.objective,
                small.objective
            );
        }
    }

    #[test]
    fn fixing_a_tour_recovers_its_cost() {
        let inst = random_instance(4, 3.0, 9);
        let model = build_milp(&inst, ModelVariant::CoreMilp).unwrap();
        let c = Compact::new(&inst, &model);
        let (tour, cost) = evaluate_tour(&inst, &[2, 0, 3, 1]).unwrap();
        let next = tour.successors();
        let mut p = c.problem.clone();
        for (i, j) in edges(inst.len()) {
            p = p.fix_variable(c.x_col(i, j), (next[i] == j) as u8 as f64).unwrap();
        }
        let r = solve_lp(&p, &LpConfig::default()).unwrap();
        assert!((r.objective - cost).abs() < 1e-9, "{} vs {cost}", r.objective);
    }
}
