//! Dense bounded-variable simplex tableau.
//!
//! Every row `a x (+) s = b` gets a slack column whose bounds encode the
//! row sense (`<=`: `[0, inf)`, `>=`: `(-inf, 0]`, `=`: `[0, 0]`). Rows are
//! scaled so their largest structural coefficient has magnitude one. The
//! tableau keeps `B^-1 [A | I]`, the transformed right-hand side and the
//! reduced costs of the phase-2 objective.
//!
//! The primal method minimizes the sum of bound infeasibilities while any
//! basic variable is out of bounds and the true objective afterwards, so it
//! can start from any basis. The dual method reoptimizes after bound changes
//! or added rows when the current basis is dual feasible.

use super::{LpConfig, LpProblem};
use crate::model::Sense;

/// Result of a simplex run on the tableau.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Outcome {
    Optimal,
    Infeasible,
    IterationLimit,
    /// The dual objective passed the cutoff, so the optimum would too.
    Cutoff,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum ColState {
    Basic,
    Lower,
    Upper,
}

/// Basis description that survives tableau rebuilds.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct BasisSnapshot {
    pub basic: Vec<usize>,
    pub state: Vec<ColState>,
}

#[derive(Debug, Clone)]
pub(crate) struct Tableau {
    n_struct: usize,
    // scaled original rows, structural part only
    orig_rows: Vec<Vec<(usize, f64)>>,
    orig_rhs: Vec<f64>,

    rows: Vec<Vec<f64>>,
    rhs: Vec<f64>,
    beta: Vec<f64>,
    basis: Vec<usize>,
    state: Vec<ColState>,
    lb: Vec<f64>,
    ub: Vec<f64>,
    cost: Vec<f64>,
    d: Vec<f64>,
    // structural column j holds x_j / col_scale[j]
    col_scale: Vec<f64>,
    cfg: LpConfig,
    cutoff: f64,
    pub iterations: usize,
    since_refresh: usize,
}

const PIVOT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Phase {
    One,
    Two,
}

impl Tableau {
    pub fn new(problem: &LpProblem, cfg: LpConfig) -> Self {
        let n = problem.cost.len();
        let m = problem.rows.len();
        let col_scale = column_scales(problem);
        let mut orig_rows = Vec::with_capacity(m);
        let mut orig_rhs = Vec::with_capacity(m);
        let mut lb: Vec<f64> = problem.lower.iter().zip(&col_scale).map(|(v, s)| v / s).collect();
        let mut ub: Vec<f64> = problem.upper.iter().zip(&col_scale).map(|(v, s)| v / s).collect();
        for row in &problem.rows {
            let coefs: Vec<(usize, f64)> = row.coefs.iter().map(|&(j, a)| (j, a * col_scale[j])).collect();
            let (coefs, rhs) = scaled(&coefs, row.rhs);
            orig_rows.push(coefs);
            orig_rhs.push(rhs);
            let (l, u) = slack_bounds(row.sense);
            lb.push(l);
            ub.push(u);
        }
        let mut cost: Vec<f64> = problem.cost.iter().zip(&col_scale).map(|(c, s)| c * s).collect();
        cost.resize(n + m, 0.0);
        let mut state = Vec::with_capacity(n + m);
        for j in 0..n {
            // start each structural at the bound its cost prefers
            state.push(if cost[j] < 0.0 { ColState::Upper } else { ColState::Lower });
        }
        state.extend(std::iter::repeat_n(ColState::Basic, m));
        let mut t = Self {
            n_struct: n,
            orig_rows,
            orig_rhs,
            rows: Vec::new(),
            rhs: Vec::new(),
            beta: vec![0.0; m],
            basis: (n..n + m).collect(),
            state,
            lb,
            ub,
            cost,
            d: Vec::new(),
            col_scale,
            cfg,
            cutoff: f64::INFINITY,
            iterations: 0,
            since_refresh: 0,
        };
        t.reset_rows();
        t.recompute_beta();
        t.recompute_d();
        t
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.cost.len()
    }

    fn reset_rows(&mut self) {
        let m = self.orig_rows.len();
        let ncols = self.n_struct + m;
        self.rows = self
            .orig_rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut dense = vec![0.0; ncols];
                for &(j, a) in r {
                    dense[j] = a;
                }
                dense[self.n_struct + i] = 1.0;
                dense
            })
            .collect();
        self.rhs = self.orig_rhs.clone();
        self.basis = (self.n_struct..self.n_struct + m).collect();
        self.beta.resize(m, 0.0);
    }

    #[inline]
    fn nonbasic_value(&self, j: usize) -> f64 {
        match self.state[j] {
            ColState::Lower => self.lb[j],
            ColState::Upper => self.ub[j],
            ColState::Basic => unreachable!("basic column has no bound value"),
        }
    }

    fn recompute_beta(&mut self) {
        let nonbasic: Vec<(usize, f64)> = (0..self.n_cols())
            .filter(|&j| self.state[j] != ColState::Basic)
            .map(|j| (j, self.nonbasic_value(j)))
            .filter(|&(_, v)| v != 0.0)
            .collect();
        for (i, row) in self.rows.iter().enumerate() {
            self.beta[i] = self.rhs[i] - nonbasic.iter().map(|&(j, v)| row[j] * v).sum::<f64>();
        }
        self.since_refresh = 0;
    }

    fn recompute_d(&mut self) {
        self.d = self.cost.clone();
        for (i, row) in self.rows.iter().enumerate() {
            let cb = self.cost[self.basis[i]];
            if cb != 0.0 {
                for (dj, &a) in self.d.iter_mut().zip(row) {
                    *dj -= cb * a;
                }
            }
        }
        for &b in &self.basis {
            self.d[b] = 0.0;
        }
    }

    fn phase_one_d(&self) -> Vec<f64> {
        let tol = self.cfg.feasibility_tol;
        let mut d = vec![0.0; self.n_cols()];
        for (i, row) in self.rows.iter().enumerate() {
            let b = self.basis[i];
            let cb = if self.beta[i] < self.lb[b] - tol {
                -1.0
            } else if self.beta[i] > self.ub[b] + tol {
                1.0
            } else {
                continue;
            };
            for (dj, &a) in d.iter_mut().zip(row) {
                *dj -= cb * a;
            }
        }
        for &b in &self.basis {
            d[b] = 0.0;
        }
        d
    }

    fn infeasibility(&self, i: usize) -> f64 {
        let b = self.basis[i];
        (self.lb[b] - self.beta[i]).max(self.beta[i] - self.ub[b]).max(0.0)
    }

    fn max_infeasibility(&self) -> f64 {
        (0..self.n_rows()).map(|i| self.infeasibility(i)).fold(0.0, f64::max)
    }

    fn pivot(&mut self, r: usize, q: usize) {
        let piv = self.rows[r][q];
        let inv = 1.0 / piv;
        {
            let prow = &mut self.rows[r];
            for v in prow.iter_mut() {
                *v *= inv;
            }
            prow[q] = 1.0;
        }
        self.rhs[r] *= inv;
        let prow = std::mem::take(&mut self.rows[r]);
        let nz: Vec<usize> = (0..prow.len()).filter(|&k| prow[k] != 0.0).collect();
        let prhs = self.rhs[r];
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[q];
            if f == 0.0 {
                continue;
            }
            for &k in &nz {
                row[k] -= f * prow[k];
            }
            row[q] = 0.0;
            self.rhs[i] -= f * prhs;
        }
        let f = self.d[q];
        if f != 0.0 {
            for &k in &nz {
                self.d[k] -= f * prow[k];
            }
            self.d[q] = 0.0;
        }
        self.rows[r] = prow;
        self.basis[r] = q;
        self.state[q] = ColState::Basic;
        self.iterations += 1;
        self.since_refresh += 1;
    }

    fn entering_ok(&self, j: usize, dj: f64) -> bool {
        let tol = self.cfg.optimality_tol;
        match self.state[j] {
            ColState::Basic => false,
            _ if self.lb[j] == self.ub[j] => false,
            ColState::Lower => dj < -tol,
            ColState::Upper => dj > tol,
        }
    }

    /// Primal simplex from the current basis.
    pub fn primal(&mut self, limit: usize) -> Outcome {
        let tol = self.cfg.feasibility_tol;
        let m = self.n_rows();
        let mut stall = 0usize;
        let mut bland = false;
        let mut phase = None;
        let mut refactored = false;
        let mut record = f64::INFINITY;
        loop {
            if self.since_refresh >= 100 {
                self.recompute_beta();
            }
            let infeasible = self.max_infeasibility() > tol;
            let now = if infeasible { Phase::One } else { Phase::Two };
            let d1;
            let d: &[f64] = if now == Phase::One {
                d1 = self.phase_one_d();
                &d1
            } else {
                if phase != Some(Phase::Two) {
                    self.recompute_d();
                }
                &self.d
            };
            if phase != Some(now) {
                stall = 0;
                bland = false;
                refactored = false;
                record = f64::INFINITY;
            }
            phase = Some(now);

            let mut q = None;
            let mut best = 0.0;
            for j in 0..self.n_cols() {
                if self.entering_ok(j, d[j]) {
                    if bland {
                        q = Some(j);
                        break;
                    }
                    if d[j].abs() > best {
                        best = d[j].abs();
                        q = Some(j);
                    }
                }
            }
            let Some(q) = q else {
                return if infeasible { Outcome::Infeasible } else { Outcome::Optimal };
            };
            if self.iterations >= limit {
                return Outcome::IterationLimit;
            }

            let dir = if self.state[q] == ColState::Lower { 1.0 } else { -1.0 };
            let range = self.ub[q] - self.lb[q];
            // (row, exact limit, limit with bounds relaxed by tol, target state)
            let mut cands: Vec<(usize, f64, f64, ColState)> = Vec::new();
            for i in 0..m {
                let a = self.rows[i][q];
                if a.abs() <= PIVOT_TOL {
                    continue;
                }
                let rate = -dir * a;
                let b = self.basis[i];
                let (beta, lo, hi) = (self.beta[i], self.lb[b], self.ub[b]);
                let (to, gap) = if beta < lo - tol {
                    if rate <= 0.0 {
                        continue;
                    }
                    (ColState::Lower, lo - beta)
                } else if beta > hi + tol {
                    if rate >= 0.0 {
                        continue;
                    }
                    (ColState::Upper, beta - hi)
                } else if rate < 0.0 {
                    if lo == f64::NEG_INFINITY {
                        continue;
                    }
                    (ColState::Lower, beta - lo)
                } else {
                    if hi == f64::INFINITY {
                        continue;
                    }
                    (ColState::Upper, hi - beta)
                };
                let r = rate.abs();
                cands.push((i, gap.max(0.0) / r, (gap + 0.1 * tol).max(0.0) / r, to));
            }
            let mut step = range;
            let mut leave: Option<(usize, ColState)> = None;
            if bland {
                for &(i, exact, _, to) in &cands {
                    let better = match leave {
                        None => exact < step,
                        Some((r, _)) => {
                            exact < step - 1e-12 || (exact <= step + 1e-12 && self.basis[i] < self.basis[r])
                        }
                    };
                    if better {
                        step = exact;
                        leave = Some((i, to));
                    }
                }
            } else {
                let relaxed = cands.iter().map(|c| c.2).fold(f64::INFINITY, f64::min);
                if relaxed < range {
                    let mut mag = 0.0;
                    for &(i, exact, _, to) in &cands {
                        let a = self.rows[i][q].abs();
                        if exact <= relaxed && a > mag {
                            mag = a;
                            step = exact;
                            leave = Some((i, to));
                        }
                    }
                }
            }
            if step == f64::INFINITY {
                // unreachable with finite column bounds
                return Outcome::Infeasible;
            }

            let measure = if infeasible {
                (0..m).map(|i| self.infeasibility(i)).sum::<f64>()
            } else {
                self.objective()
            };
            if record.is_infinite() || measure < record - 1e-9 * (1.0 + record.abs()) {
                record = measure;
                stall = 0;
            } else {
                stall += 1;
                if stall == 2 * m && !refactored {
                    // round-off can hold the method at a noise-level
                    // infeasibility; a fresh factorization clears it
                    refactored = true;
                    let snap = self.snapshot();
                    self.rebuild(&snap);
                    continue;
                }
                if stall > 4 * m {
                    bland = true;
                }
            }

            for i in 0..m {
                let a = self.rows[i][q];
                if a != 0.0 {
                    self.beta[i] -= dir * a * step;
                }
            }
            match leave {
                None => {
                    self.state[q] = if self.state[q] == ColState::Lower {
                        ColState::Upper
                    } else {
                        ColState::Lower
                    };
                    self.iterations += 1;
                }
                Some((r, to)) => {
                    let entering_value = self.nonbasic_value(q) + dir * step;
                    let leaving = self.basis[r];
                    self.pivot(r, q);
                    self.state[leaving] = to;
                    self.beta[r] = entering_value;
                }
            }
        }
    }

    /// Dual simplex from a dual feasible basis.
    pub fn dual(&mut self, limit: usize) -> Outcome {
        let tol = self.cfg.feasibility_tol;
        let m = self.n_rows();
        let mut stall = 0usize;
        let mut bland = false;
        loop {
            if self.since_refresh >= 100 {
                self.recompute_beta();
            }
            let mut r = None;
            let mut worst = tol;
            for i in 0..m {
                let inf = self.infeasibility(i);
                if inf > tol {
                    if bland {
                        if r.is_none_or(|k: usize| self.basis[i] < self.basis[k]) {
                            r = Some(i);
                        }
                    } else if inf > worst {
                        worst = inf;
                        r = Some(i);
                    }
                }
            }
            let Some(r) = r else {
                return Outcome::Optimal;
            };
            if self.iterations >= limit {
                return Outcome::IterationLimit;
            }
            if self.cutoff.is_finite() && self.objective() > self.cutoff {
                return Outcome::Cutoff;
            }
            let leaving = self.basis[r];
            let below = self.beta[r] < self.lb[leaving];
            let target = if below { self.lb[leaving] } else { self.ub[leaving] };
            let row = &self.rows[r];
            let opt_tol = self.cfg.optimality_tol;
            // (column, exact ratio, ratio with reduced cost relaxed by tol)
            let mut cands: Vec<(usize, f64, f64)> = Vec::new();
            for j in 0..self.n_cols() {
                let st = self.state[j];
                if st == ColState::Basic || self.lb[j] == self.ub[j] {
                    continue;
                }
                let a = row[j];
                if a.abs() <= PIVOT_TOL {
                    continue;
                }
                let eligible = match (below, st) {
                    (true, ColState::Lower) => a < 0.0,
                    (true, ColState::Upper) => a > 0.0,
                    (false, ColState::Lower) => a > 0.0,
                    (false, ColState::Upper) => a < 0.0,
                    _ => false,
                };
                if !eligible {
                    continue;
                }
                let dj = match st {
                    ColState::Lower => self.d[j],
                    _ => -self.d[j],
                };
                cands.push((j, dj.max(0.0) / a.abs(), (dj + 0.1 * opt_tol).max(0.0) / a.abs()));
            }
            let mut q = None;
            let mut best_ratio = f64::INFINITY;
            if bland {
                for &(j, ratio, _) in &cands {
                    if ratio < best_ratio - 1e-12 {
                        best_ratio = ratio;
                        q = Some(j);
                    }
                }
            } else {
                let relaxed = cands.iter().map(|c| c.2).fold(f64::INFINITY, f64::min);
                let mut mag = 0.0;
                for &(j, ratio, _) in &cands {
                    if ratio <= relaxed && row[j].abs() > mag {
                        mag = row[j].abs();
                        best_ratio = ratio;
                        q = Some(j);
                    }
                }
            }
            let Some(q) = q else {
                return Outcome::Infeasible;
            };
            if best_ratio <= 1e-12 {
                stall += 1;
                if stall > 3 * m {
                    bland = true;
                }
            } else {
                stall = 0;
                bland = false;
            }
            let a_rq = self.rows[r][q];
            let delta = (self.beta[r] - target) / a_rq;
            for i in 0..m {
                let a = self.rows[i][q];
                if a != 0.0 {
                    self.beta[i] -= a * delta;
                }
            }
            let entering_value = self.nonbasic_value(q) + delta;
            self.pivot(r, q);
            self.state[leaving] = if below { ColState::Lower } else { ColState::Upper };
            self.beta[r] = entering_value;
        }
    }

    pub fn is_dual_feasible(&self) -> bool {
        let tol = self.cfg.optimality_tol;
        (0..self.n_cols()).all(|j| match self.state[j] {
            ColState::Basic => true,
            _ if self.lb[j] == self.ub[j] => true,
            ColState::Lower => self.d[j] >= -tol,
            ColState::Upper => self.d[j] <= tol,
        })
    }

    /// Reoptimizes after bound changes or added rows.
    pub fn reoptimize(&mut self, limit: usize) -> Outcome {
        self.recompute_beta();
        let mut status = if self.is_dual_feasible() {
            self.dual(limit)
        } else {
            self.primal(limit)
        };
        if status == Outcome::Optimal && !self.is_dual_feasible() {
            status = self.primal(limit);
        }
        self.finish(status, limit)
    }

    /// Solves from the current basis with the primal method.
    pub fn solve(&mut self, limit: usize) -> Outcome {
        let status = self.primal(limit);
        self.finish(status, limit)
    }

    /// Guards against accumulated round-off: a solution whose residuals on
    /// the original rows are too large, or an infeasibility verdict, is
    /// rechecked from a freshly factored tableau.
    fn finish(&mut self, status: Outcome, limit: usize) -> Outcome {
        match status {
            Outcome::IterationLimit | Outcome::Cutoff => status,
            Outcome::Optimal if self.residual() <= 10.0 * self.cfg.feasibility_tol => status,
            _ => {
                let snap = self.snapshot();
                self.rebuild(&snap);
                self.primal(limit)
            }
        }
    }

    /// Largest violation of an original (scaled) row or column bound.
    pub fn residual(&self) -> f64 {
        let x = self.values();
        let mut worst: f64 = 0.0;
        for (i, row) in self.orig_rows.iter().enumerate() {
            let s = self.n_struct + i;
            let lhs: f64 = row.iter().map(|&(j, a)| a * x[j]).sum::<f64>() + x[s];
            worst = worst.max((lhs - self.orig_rhs[i]).abs());
        }
        for j in 0..self.n_cols() {
            worst = worst.max(self.lb[j] - x[j]).max(x[j] - self.ub[j]);
        }
        worst
    }

    /// Values of every column (structural and slack).
    pub fn values(&self) -> Vec<f64> {
        let mut x = vec![0.0; self.n_cols()];
        for j in 0..self.n_cols() {
            if self.state[j] != ColState::Basic {
                x[j] = self.nonbasic_value(j);
            }
        }
        for (i, &b) in self.basis.iter().enumerate() {
            x[b] = self.beta[i];
        }
        x
    }

    pub fn structural_values(&self) -> Vec<f64> {
        let mut x = self.values();
        x.truncate(self.n_struct);
        for (v, s) in x.iter_mut().zip(&self.col_scale) {
            *v *= s;
        }
        x
    }

    pub fn objective(&self) -> f64 {
        let x = self.values();
        (0..self.n_struct).map(|j| self.cost[j] * x[j]).sum()
    }

    /// Reduced cost of structural column `j` in unscaled units.
    pub fn reduced_cost(&self, j: usize) -> f64 {
        self.d[j] / self.col_scale[j]
    }

    pub fn state(&self, j: usize) -> ColState {
        self.state[j]
    }

    /// Changes a structural column's bounds. A nonbasic column is placed at
    /// the bound its reduced cost favours, which keeps the basis dual
    /// feasible.
    pub fn set_bounds(&mut self, j: usize, lb: f64, ub: f64) {
        assert!(j < self.n_struct);
        self.lb[j] = lb / self.col_scale[j];
        self.ub[j] = ub / self.col_scale[j];
        if self.state[j] != ColState::Basic {
            self.state[j] = if lb == ub || self.d[j] >= 0.0 { ColState::Lower } else { ColState::Upper };
        }
    }

    /// The dual method stops with [`Outcome::Cutoff`] once its objective
    /// exceeds this value.
    pub fn set_cutoff(&mut self, cutoff: f64) {
        self.cutoff = cutoff;
    }

    pub fn snapshot(&self) -> BasisSnapshot {
        BasisSnapshot {
            basic: self.basis.clone(),
            state: self.state.clone(),
        }
    }

    /// Refactors the tableau so that `snap`'s columns are basic. Rows added
    /// after the snapshot keep their slack basic. Columns that cannot be
    /// pivoted in (singular basis) are left nonbasic.
    pub fn rebuild(&mut self, snap: &BasisSnapshot) {
        self.reset_rows();
        let m = self.n_rows();
        let ncols = self.n_cols();
        for j in 0..ncols {
            self.state[j] = if j >= self.n_struct && j - self.n_struct < m {
                ColState::Basic
            } else {
                ColState::Lower
            };
        }
        let want: Vec<bool> = {
            let mut w = vec![false; ncols];
            for &b in &snap.basic {
                w[b] = true;
            }
            // new rows keep their slacks
            for i in snap.basic.len()..m {
                w[self.n_struct + i] = true;
            }
            w
        };
        let mut locked = vec![false; m];
        for i in 0..m {
            if want[self.n_struct + i] {
                locked[i] = true;
            }
        }
        let pending: Vec<usize> = (0..self.n_struct).filter(|&j| want[j]).collect();
        for &c in &pending {
            let mut best = None;
            let mut mag = PIVOT_TOL * 10.0;
            for i in 0..m {
                if !locked[i] && self.rows[i][c].abs() > mag {
                    mag = self.rows[i][c].abs();
                    best = Some(i);
                }
            }
            if let Some(r) = best {
                let leaving = self.basis[r];
                self.pivot(r, c);
                self.state[leaving] = ColState::Lower;
                locked[r] = true;
            }
        }
        for j in 0..ncols {
            if self.state[j] != ColState::Basic {
                let prior = snap.state.get(j).copied().unwrap_or(ColState::Lower);
                let st = match prior {
                    ColState::Upper if self.ub[j].is_finite() => ColState::Upper,
                    ColState::Basic | ColState::Lower | ColState::Upper => {
                        if self.lb[j].is_finite() {
                            ColState::Lower
                        } else {
                            ColState::Upper
                        }
                    }
                };
                self.state[j] = st;
            }
        }
        self.recompute_beta();
        self.recompute_d();
    }

    /// Appends a row; its slack enters the basis.
    pub fn add_row(&mut self, coefs: &[(usize, f64)], sense: Sense, rhs: f64) {
        let coefs: Vec<(usize, f64)> = coefs.iter().map(|&(j, a)| (j, a * self.col_scale[j])).collect();
        let (coefs, rhs) = scaled(&coefs, rhs);
        let ncols = self.n_cols();
        for row in &mut self.rows {
            row.push(0.0);
        }
        let (l, u) = slack_bounds(sense);
        self.lb.push(l);
        self.ub.push(u);
        self.cost.push(0.0);
        self.d.push(0.0);
        self.state.push(ColState::Basic);

        let mut dense = vec![0.0; ncols + 1];
        for &(j, a) in &coefs {
            dense[j] = a;
        }
        dense[ncols] = 1.0;
        let mut r = rhs;
        for (i, row) in self.rows.iter().enumerate() {
            let f = dense[self.basis[i]];
            if f != 0.0 {
                for (v, &a) in dense.iter_mut().zip(row) {
                    *v -= f * a;
                }
                r -= f * self.rhs[i];
            }
        }
        for &b in &self.basis {
            dense[b] = 0.0;
        }
        dense[ncols] = 1.0;
        self.rows.push(dense);
        self.rhs.push(r);
        self.basis.push(ncols);
        self.beta.push(0.0);
        self.orig_rows.push(coefs);
        self.orig_rhs.push(rhs);
        self.recompute_beta();
    }
}

fn slack_bounds(sense: Sense) -> (f64, f64) {
    match sense {
        Sense::Le => (0.0, f64::INFINITY),
        Sense::Ge => (f64::NEG_INFINITY, 0.0),
        Sense::Eq => (0.0, 0.0),
    }
}

/// Geometric-mean column factors from a few alternating row/column
/// passes, rounded to powers of two.
fn column_scales(problem: &LpProblem) -> Vec<f64> {
    let n = problem.cost.len();
    let mut col = vec![1.0; n];
    let mut row = vec![1.0; problem.rows.len()];
    for _ in 0..4 {
        let mut lo = vec![f64::INFINITY; n];
        let mut hi = vec![0.0f64; n];
        for (r, rs) in problem.rows.iter().zip(&row) {
            for &(j, a) in &r.coefs {
                let v = a.abs() * rs;
                if v > 0.0 {
                    lo[j] = lo[j].min(v);
                    hi[j] = hi[j].max(v);
                }
            }
        }
        for j in 0..n {
            if hi[j] > 0.0 {
                col[j] = 1.0 / (lo[j] * hi[j]).sqrt();
            }
        }
        for (r, rs) in problem.rows.iter().zip(row.iter_mut()) {
            let (mut l, mut h) = (f64::INFINITY, 0.0f64);
            for &(j, a) in &r.coefs {
                let v = a.abs() * col[j];
                if v > 0.0 {
                    l = l.min(v);
                    h = h.max(v);
                }
            }
            if h > 0.0 {
                *rs = 1.0 / (l * h).sqrt();
            }
        }
    }
    col.iter().map(|&c| 2f64.powi(c.log2().round() as i32)).collect()
}

fn scaled(coefs: &[(usize, f64)], rhs: f64) -> (Vec<(usize, f64)>, f64) {
    let max = coefs.iter().map(|c| c.1.abs()).fold(0.0, f64::max);
    if max == 0.0 {
        return (coefs.to_vec(), rhs);
    }
    let s = 1.0 / max;
    (coefs.iter().map(|&(j, a)| (j, a * s)).collect(), rhs * s)
}

#[cfg(test)]
pub(crate) fn check_invariants(t: &Tableau) {
    for (i, &b) in t.basis.iter().enumerate() {
        assert_eq!(t.state[b], ColState::Basic);
        assert!((t.rows[i][b] - 1.0).abs() < 1e-9);
    }
}
