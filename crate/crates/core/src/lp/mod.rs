//! Linear programming over bounded columns.

pub(crate) mod tableau;

use thiserror::Error;

use crate::model::{LinearModel, Sense};

pub(crate) use tableau::{ColState, Outcome, Tableau};

#[derive(Debug, Error, PartialEq)]
pub enum LpError {
    #[error("model has a bilinear objective")]
    Bilinear,
    #[error("column {0} has an infinite or inverted bound")]
    ColumnBounds(usize),
    #[error("value {value} is outside the bounds of column {col}")]
    FixOutOfBounds { col: usize, value: f64 },
    #[error("row {row} references column {col}, which does not exist")]
    BadColumn { row: usize, col: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpRow {
    pub coefs: Vec<(usize, f64)>,
    pub sense: Sense,
    pub rhs: f64,
}

/// `min cost . x` subject to `rows` and `lower <= x <= upper`.
#[derive(Debug, Clone, PartialEq)]
pub struct LpProblem {
    pub cost: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub rows: Vec<LpRow>,
}

impl LpProblem {
    /// Continuous relaxation of a linear model, columns in model order.
    pub fn from_model(model: &LinearModel) -> Result<Self, LpError> {
        if !model.bilinear.is_empty() {
            return Err(LpError::Bilinear);
        }
        let idx = |v| model.var_index(v).expect("declared variable");
        let mut cost = vec![0.0; model.n_vars()];
        for &(v, c) in &model.objective {
            cost[idx(v)] += c;
        }
        let rows = model
            .constraints
            .iter()
            .map(|c| LpRow {
                coefs: c.terms.iter().map(|&(v, a)| (idx(v), a)).collect(),
                sense: c.sense,
                rhs: c.rhs,
            })
            .collect();
        Ok(Self {
            cost,
            lower: model.vars.iter().map(|v| v.lb).collect(),
            upper: model.vars.iter().map(|v| v.ub).collect(),
            rows,
        })
    }

    pub fn n_cols(&self) -> usize {
        self.cost.len()
    }

    /// Copy of the problem with column `j` fixed to `value`.
    pub fn fix_variable(&self, j: usize, value: f64) -> Result<Self, LpError> {
        if j >= self.n_cols() || !(self.lower[j]..=self.upper[j]).contains(&value) {
            return Err(LpError::FixOutOfBounds { col: j, value });
        }
        let mut p = self.clone();
        p.lower[j] = value;
        p.upper[j] = value;
        Ok(p)
    }

    fn check(&self) -> Result<(), LpError> {
        let n = self.n_cols();
        for j in 0..n {
            let (l, u) = (self.lower[j], self.upper[j]);
            if !l.is_finite() || !u.is_finite() || l > u {
                return Err(LpError::ColumnBounds(j));
            }
        }
        for (row, r) in self.rows.iter().enumerate() {
            if let Some(&(col, _)) = r.coefs.iter().find(|c| c.0 >= n) {
                return Err(LpError::BadColumn { row, col });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LpConfig {
    pub feasibility_tol: f64,
    pub optimality_tol: f64,
    /// Pivot budget; `None` means `50 * (rows + columns)`.
    pub max_iterations: Option<usize>,
}

impl Default for LpConfig {
    fn default() -> Self {
        Self {
            feasibility_tol: 1e-7,
            optimality_tol: 1e-7,
            max_iterations: None,
        }
    }
}

impl LpConfig {
    pub(crate) fn limit(&self, rows: usize, cols: usize) -> usize {
        self.max_iterations.unwrap_or(50 * (rows + cols))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    IterationLimit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpResult {
    pub status: LpStatus,
    pub objective: f64,
    /// Column values; meaningful when the status is optimal.
    pub values: Vec<f64>,
    pub iterations: usize,
}

pub fn solve_lp(problem: &LpProblem, cfg: &LpConfig) -> Result<LpResult, LpError> {
    problem.check()?;
    let mut t = Tableau::new(problem, *cfg);
    let limit = cfg.limit(problem.rows.len(), problem.n_cols());
    let status = match t.solve(limit) {
        Outcome::Optimal => LpStatus::Optimal,
        Outcome::Infeasible => LpStatus::Infeasible,
        Outcome::IterationLimit | Outcome::Cutoff => LpStatus::IterationLimit,
    };
    Ok(LpResult {
        status,
        objective: t.objective(),
        values: t.structural_values(),
        iterations: t.iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(coefs: &[(usize, f64)], sense: Sense, rhs: f64) -> LpRow {
        LpRow {
            coefs: coefs.to_vec(),
            sense,
            rhs,
        }
    }

    fn lp(cost: &[f64], ub: f64, rows: Vec<LpRow>) -> LpProblem {
        LpProblem {
            cost: cost.to_vec(),
            lower: vec![0.0; cost.len()],
            upper: vec![ub; cost.len()],
            rows,
        }
    }

    #[test]
    fn textbook_maximization() {
        // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18 -> (2, 6), 36
        let p = lp(
            &[-3.0, -5.0],
            100.0,
            vec![
                row(&[(0, 1.0)], Sense::Le, 4.0),
                row(&[(1, 2.0)], Sense::Le, 12.0),
                row(&[(0, 3.0), (1, 2.0)], Sense::Le, 18.0),
            ],
        );
        let r = solve_lp(&p, &LpConfig::default()).unwrap();
        assert_eq!(r.status, LpStatus::Optimal);
        assert!((r.objective + 36.0).abs() < 1e-9);
        assert!((r.values[0] - 2.0).abs() < 1e-9 && (r.values[1] - 6.0).abs() < 1e-9);
    }

    #[test]
    fn equality_and_ge_rows_need_phase_one() {
        // min x + y, x + y >= 2, x - y = 1
        let p = lp(
            &[1.0, 1.0],
            10.0,
            vec![row(&[(0, 1.0), (1, 1.0)], Sense::Ge, 2.0), row(&[(0, 1.0), (1, -1.0)], Sense::Eq, 1.0)],
        );
        let r = solve_lp(&p, &LpConfig::default()).unwrap();
        assert_eq!(r.status, LpStatus::Optimal);
        assert!((r.objective - 2.0).abs() < 1e-9);
        assert!((r.values[0] - 1.5).abs() < 1e-9);
    }

    #[test]
    fn detects_infeasibility() {
        let p = lp(
            &[1.0],
            1.0,
            vec![row(&[(0, 1.0)], Sense::Ge, 2.0)],
        );
        assert_eq!(solve_lp(&p, &LpConfig::default()).unwrap().status, LpStatus::Infeasible);
    }

    #[test]
    fn upper_bounds_flip_without_pivots() {
        let p = lp(&[-1.0, -2.0, -3.0], 1.0, vec![row(&[(0, 1.0), (1, 1.0), (2, 1.0)], Sense::Le, 10.0)]);
        let r = solve_lp(&p, &LpConfig::default()).unwrap();
        assert!((r.objective + 6.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_assignment_terminates() {
        // 6x6 assignment with all-equal costs is massively degenerate
        let k = 6;
        let mut rows = Vec::new();
        for i in 0..k {
            rows.push(row(&(0..k).map(|j| (i * k + j, 1.0)).collect::<Vec<_>>(), Sense::Eq, 1.0));
            rows.push(row(&(0..k).map(|j| (j * k + i, 1.0)).collect::<Vec<_>>(), Sense::Eq, 1.0));
        }
        let cost: Vec<f64> = (0..k * k).map(|c| ((c * 7) % 5) as f64).collect();
        let r = solve_lp(&lp(&cost, 1.0, rows), &LpConfig::default()).unwrap();
        assert_eq!(r.status, LpStatus::Optimal);
        // brute force over permutations
        let mut best = f64::INFINITY;
        let mut perm: Vec<usize> = (0..k).collect();
        permute(&mut perm, 0, &mut |p| {
            best = best.min(p.iter().enumerate().map(|(i, &j)| cost[i * k + j]).sum());
        });
        assert!((r.objective - best).abs() < 1e-9);
    }

    fn permute(p: &mut Vec<usize>, at: usize, f: &mut impl FnMut(&[usize])) {
        if at == p.len() {
            f(p);
            return;
        }
        for k in at..p.len() {
            p.swap(at, k);
            permute(p, at + 1, f);
            p.swap(at, k);
        }
    }

    #[test]
    fn bound_only_problem() {
        let p = LpProblem {
            cost: vec![1.0],
            lower: vec![1.0],
            upper: vec![2.0],
            rows: vec![],
        };
        let r = solve_lp(&p, &LpConfig::default()).unwrap();
        assert_eq!((r.status, r.objective), (LpStatus::Optimal, 1.0));
    }

    #[test]
    fn fixing_never_improves() {
        let p = lp(&[1.0, 1.0], 1.0, vec![row(&[(0, 1.0), (1, 1.0)], Sense::Ge, 1.0)]);
        let cfg = LpConfig::default();
        let base = solve_lp(&p, &cfg).unwrap().objective;
        assert!((base - 1.0).abs() < 1e-12);
        let zero = solve_lp(&p.fix_variable(0, 0.0).unwrap(), &cfg).unwrap().objective;
        let one = solve_lp(&p.fix_variable(0, 1.0).unwrap(), &cfg).unwrap().objective;
        assert!(zero.min(one) >= base - 1e-7);
        assert_eq!(p.lower[0], 0.0);
        assert!(matches!(p.fix_variable(0, 1.5), Err(LpError::FixOutOfBounds { .. })));
    }

    #[test]
    fn rejects_free_columns_and_bad_rows() {
        let mut p = lp(&[1.0], 1.0, vec![]);
        p.upper[0] = f64::INFINITY;
        assert_eq!(solve_lp(&p, &LpConfig::default()), Err(LpError::ColumnBounds(0)));
        let p = lp(&[1.0], 1.0, vec![row(&[(3, 1.0)], Sense::Le, 1.0)]);
        assert_eq!(solve_lp(&p, &LpConfig::default()), Err(LpError::BadColumn { row: 0, col: 3 }));
    }

    #[test]
    fn iteration_limit_is_reported() {
        let p = lp(
            &[-3.0, -5.0],
            100.0,
            vec![row(&[(0, 1.0)], Sense::Le, 4.0), row(&[(0, 3.0), (1, 2.0)], Sense::Le, 18.0)],
        );
        let cfg = LpConfig {
            max_iterations: Some(0),
            ..LpConfig::default()
        };
        assert_eq!(solve_lp(&p, &cfg).unwrap().status, LpStatus::IterationLimit);
    }

    #[test]
    fn dual_reoptimization_after_bound_change_and_cut() {
        let p = lp(
            &[-3.0, -5.0],
            100.0,
            vec![
                row(&[(0, 1.0)], Sense::Le, 4.0),
                row(&[(1, 2.0)], Sense::Le, 12.0),
                row(&[(0, 3.0), (1, 2.0)], Sense::Le, 18.0),
            ],
        );
        let cfg = LpConfig::default();
        let mut t = Tableau::new(&p, cfg);
        assert_eq!(t.solve(1000), Outcome::Optimal);
        t.set_bounds(1, 0.0, 5.0);
        assert_eq!(t.reoptimize(1000), Outcome::Optimal);
        // y = 5, x = 8/3
        assert!((t.objective() + 33.0).abs() < 1e-9);
        t.add_row(&[(0, 1.0), (1, 1.0)], Sense::Le, 7.0);
        assert_eq!(t.reoptimize(1000), Outcome::Optimal);
        let x = t.structural_values();
        assert!(x[0] + x[1] <= 7.0 + 1e-9);
        assert!((t.objective() + 31.0).abs() < 1e-9, "{}", t.objective());
        tableau::check_invariants(&t);

        let snap = t.snapshot();
        let obj = t.objective();
        t.rebuild(&snap);
        assert!((t.objective() - obj).abs() < 1e-9);
        assert_eq!(t.reoptimize(1000), Outcome::Optimal);
        assert!((t.objective() - obj).abs() < 1e-9);
    }
}
