use std::collections::HashSet;
use std::time::Instant;

use super::relax::Compact;
use super::{
    gap_percent, separate_dfj, BranchRule, Event, NodeSelection, SolveConfig, SolveReport, SolveStatus, SolverError,
};
use crate::heuristics::warm_start;
use crate::instance::Instance;
use crate::lp::{ColState, LpConfig, Outcome, Tableau};
use crate::model::{build_milp, edges, evaluate_tour, validate_successors, Tour};

const INTEGRALITY_TOL: f64 = 1e-6;
const DIVE_EVERY: usize = 10;
const REFACTOR_EVERY: usize = 200;
const ROOT_CUT_ROUNDS: usize = 50;
const NODE_CUT_ROUNDS: usize = 5;

struct Node {
    id: u64,
    depth: usize,
    bound: f64,
    fixes: Vec<(usize, bool)>,
    /// Branching decision that created the node: column, direction, the
    /// parent's value of the column and the parent's LP objective.
    origin: Option<(usize, bool, f64, f64)>,
}

struct RootInfo {
    objective: f64,
    reduced: Vec<f64>,
    state: Vec<ColState>,
}

struct Search<'a> {
    inst: &'a Instance,
    cfg: &'a SolveConfig,
    compact: Compact,
    tab: Tableau,
    lp_limit: usize,
    start: Instant,
    global: Vec<(f64, f64)>,
    current: Vec<(f64, f64)>,
    incumbent: Option<(Tour, f64)>,
    open: Vec<Node>,
    next_id: u64,
    expansions: usize,
    nodes: usize,
    pruned_min: f64,
    reported_bound: f64,
    root_bound: Option<f64>,
    root: Option<RootInfo>,
    cut_sets: HashSet<Vec<bool>>,
    cuts: usize,
    pseudo: Vec<[(f64, usize); 2]>,
    events: Vec<Event>,
    integral: Vec<Vec<usize>>,
}

pub(super) fn run(inst: &Instance, cfg: &SolveConfig) -> Result<SolveReport, SolverError> {
    let model = build_milp(inst, cfg.variant).expect("linear variant");
    let compact = Compact::new(inst, &model);
    let lp_cfg = LpConfig::default();
    let tab = Tableau::new(&compact.problem, lp_cfg);
    let m = compact.n_edges();
    let mut s = Search {
        inst,
        cfg,
        lp_limit: 0,
        tab,
        start: Instant::now(),
        global: vec![(0.0, 1.0); m],
        current: vec![(0.0, 1.0); m],
        incumbent: None,
        open: Vec::new(),
        next_id: 0,
        expansions: 0,
        nodes: 0,
        pruned_min: f64::INFINITY,
        reported_bound: 0.0,
        root_bound: None,
        root: None,
        cut_sets: HashSet::new(),
        cuts: 0,
        pseudo: vec![[(0.0, 0); 2]; m],
        events: Vec::new(),
        integral: Vec::new(),
        compact,
    };
    if cfg.warm_start {
        let (tour, cost) = warm_start(inst);
        s.offer(tour, cost);
    }
    s.push(Node {
        id: 0,
        depth: 0,
        bound: 0.0,
        fixes: Vec::new(),
        origin: None,
    });
    let status = s.search()?;
    Ok(s.report(status))
}

impl Search<'_> {
    fn elapsed(&self) -> f64 {
        self.start.elapsed().as_secs_f64()
    }

    fn cutoff(&self) -> f64 {
        match &self.incumbent {
            Some((_, c)) => c - self.cfg.gap_tolerance * c.abs(),
            None => f64::INFINITY,
        }
    }

    fn push(&mut self, mut node: Node) {
        node.id = self.next_id;
        self.next_id += 1;
        self.open.push(node);
    }

    /// Lower bound over the whole tree, never above the incumbent and
    /// never below an earlier report.
    fn best_bound(&self) -> f64 {
        let open = self.open.iter().map(|n| n.bound).fold(f64::INFINITY, f64::min);
        let mut b = open.min(self.pruned_min);
        if let Some((_, c)) = &self.incumbent {
            b = b.min(*c);
        }
        if b == f64::INFINITY {
            b = self.reported_bound;
        }
        b.max(self.reported_bound)
    }

    fn log(&mut self) {
        self.events.push(Event {
            elapsed: self.elapsed(),
            nodes: self.nodes,
            bound: self.reported_bound,
            incumbent: self.incumbent.as_ref().map(|t| t.1),
        });
    }

    fn offer(&mut self, tour: Tour, cost: f64) {
        if self.incumbent.as_ref().is_none_or(|(_, c)| cost < *c) {
            self.incumbent = Some((tour, cost));
            self.fix_by_reduced_cost();
            self.log();
        }
    }

    fn select(&mut self) -> Node {
        self.expansions += 1;
        let dive = self.cfg.node_selection == NodeSelection::DepthFirst || self.expansions.is_multiple_of(DIVE_EVERY);
        let key = |n: &Node| {
            if dive {
                (-(n.depth as f64), -(n.id as f64))
            } else {
                (n.bound, -(n.depth as f64))
            }
        };
        let mut best = 0;
        for k in 1..self.open.len() {
            let (a, b) = (key(&self.open[k]), key(&self.open[best]));
            if a.0 < b.0 || (a.0 == b.0 && (a.1 < b.1 || (a.1 == b.1 && self.open[k].id < self.open[best].id))) {
                best = k;
            }
        }
        self.open.swap_remove(best)
    }

    fn search(&mut self) -> Result<SolveStatus, SolverError> {
        loop {
            let bound = self.best_bound();
            if bound > self.reported_bound || self.events.is_empty() {
                self.reported_bound = bound;
                self.log();
            }
            if self.open.is_empty() {
                return Ok(if self.incumbent.is_some() {
                    SolveStatus::Optimal
                } else {
                    SolveStatus::Infeasible
                });
            }
            if self.nodes > 0 && self.start.elapsed() >= self.cfg.time_limit {
                return Ok(SolveStatus::FeasibleTimeLimit);
            }
            if self.nodes >= self.cfg.max_nodes {
                return Ok(SolveStatus::NodeLimit);
            }
            let node = self.select();
            if node.bound >= self.cutoff() {
                self.pruned_min = self.pruned_min.min(node.bound);
                continue;
            }
            self.evaluate(node)?;
        }
    }

    fn apply_bounds(&mut self, node: &Node) {
        let mut want = self.global.clone();
        for &(col, up) in &node.fixes {
            let v = if up { 1.0 } else { 0.0 };
            want[col] = (v, v);
        }
        for (col, (&w, cur)) in want.iter().zip(self.current.iter_mut()).enumerate() {
            if w != *cur {
                self.tab.set_bounds(col, w.0, w.1);
                *cur = w;
            }
        }
    }

    /// Reoptimizes the node LP; `None` when the node is closed (infeasible
    /// or above the cutoff).
    fn reoptimize(&mut self, node: &Node, fresh: bool) -> Result<Option<f64>, SolverError> {
        self.tab.set_cutoff(self.cutoff());
        let outcome = if fresh {
            self.tab.solve(self.lp_limit)
        } else {
            self.tab.reoptimize(self.lp_limit)
        };
        match outcome {
            Outcome::Optimal => Ok(Some(self.tab.objective())),
            Outcome::Infeasible => Ok(None),
            Outcome::Cutoff => {
                let b = self.tab.objective().max(node.bound);
                self.pruned_min = self.pruned_min.min(b);
                Ok(None)
            }
            Outcome::IterationLimit => {
                let snap = self.tab.snapshot();
                self.tab.rebuild(&snap);
                match self.tab.solve(self.lp_limit * 4) {
                    Outcome::Optimal => Ok(Some(self.tab.objective())),
                    Outcome::Infeasible => Ok(None),
                    _ => Err(SolverError::Config("relaxation did not converge".into())),
                }
            }
        }
    }

    fn edge_values(&self) -> Vec<f64> {
        let mut x = self.tab.structural_values();
        x.truncate(self.compact.n_edges());
        x
    }

    fn evaluate(&mut self, node: Node) -> Result<(), SolverError> {
        let root = self.nodes == 0;
        self.nodes += 1;
        if self.nodes.is_multiple_of(REFACTOR_EVERY) {
            let snap = self.tab.snapshot();
            self.tab.rebuild(&snap);
        }
        self.lp_limit = self.tab.iterations + LpConfig::default().limit(self.tab.n_rows(), self.tab.n_cols());
        self.apply_bounds(&node);
        let Some(mut z) = self.reoptimize(&node, root)? else {
            return Ok(());
        };
        if root {
            self.root_bound = Some(z);
        }
        if let Some((col, up, value, parent_z)) = node.origin {
            let unit = if up { 1.0 - value } else { value };
            if unit > 1e-9 {
                let slot = &mut self.pseudo[col][up as usize];
                slot.0 += (z - parent_z).max(0.0) / unit;
                slot.1 += 1;
            }
        }

        if self.cfg.variant.lazy_dfj() {
            let mut rounds = 0;
            loop {
                let x = self.edge_values();
                let integral = fractional(&x).is_empty();
                let limit = if root { ROOT_CUT_ROUNDS } else { NODE_CUT_ROUNDS };
                if !integral && rounds >= limit {
                    break;
                }
                let mut added = 0;
                for cut in separate_dfj(&x, self.inst) {
                    let set = cut_set(&cut, self.inst.len());
                    if self.cut_sets.insert(set) {
                        let row = self.compact.translate(&cut).expect("cut has edge terms");
                        self.tab.add_row(&row.coefs, row.sense, row.rhs);
                        added += 1;
                    }
                }
                if added == 0 {
                    break;
                }
                self.cuts += added;
                rounds += 1;
                self.lp_limit = self.tab.iterations + LpConfig::default().limit(self.tab.n_rows(), self.tab.n_cols());
                let Some(nz) = self.reoptimize(&node, false)? else {
                    return Ok(());
                };
                z = nz;
            }
        }

        let bound = z.max(node.bound);
        if root {
            self.root = Some(RootInfo {
                objective: z,
                reduced: (0..self.compact.n_edges()).map(|j| self.tab.reduced_cost(j)).collect(),
                state: (0..self.compact.n_edges()).map(|j| self.tab.state(j)).collect(),
            });
            self.fix_by_reduced_cost();
        }
        if bound >= self.cutoff() {
            self.pruned_min = self.pruned_min.min(bound);
            return Ok(());
        }

        let x = self.edge_values();
        let frac = fractional(&x);
        if frac.is_empty() {
            let n = self.inst.len();
            let mut next = vec![usize::MAX; n];
            for (i, j) in edges(n) {
                if x[self.compact.x_col(i, j)] > 0.5 {
                    next[i] = j;
                }
            }
            self.integral.push(next.clone());
            let order = validate_successors(&next, self.inst.depot()).map_err(SolverError::Subtour)?;
            let (tour, cost) = evaluate_tour(self.inst, &order).expect("validated order");
            self.pruned_min = self.pruned_min.min(bound);
            self.offer(tour, cost);
            return Ok(());
        }

        let col = self.branch_column(&x, &frac);
        for up in [false, true] {
            let mut fixes = node.fixes.clone();
            fixes.push((col, up));
            self.push(Node {
                id: 0,
                depth: node.depth + 1,
                bound,
                fixes,
                origin: Some((col, up, x[col], z)),
            });
        }
        Ok(())
    }

    fn branch_column(&self, x: &[f64], frac: &[usize]) -> usize {
        let most_fractional = |cands: &mut dyn Iterator<Item = usize>| {
            let mut best: Option<usize> = None;
            for j in cands {
                if best.is_none_or(|b| (x[j] - 0.5).abs() < (x[b] - 0.5).abs()) {
                    best = Some(j);
                }
            }
            best
        };
        if self.cfg.branch_rule == BranchRule::PseudoFirst {
            let observed = |j: usize| self.pseudo[j][0].1 > 0 && self.pseudo[j][1].1 > 0;
            if let Some(j) = most_fractional(&mut frac.iter().copied().filter(|&j| !observed(j))) {
                return j;
            }
            let score = |j: usize| {
                let down = self.pseudo[j][0].0 / self.pseudo[j][0].1 as f64 * x[j];
                let up = self.pseudo[j][1].0 / self.pseudo[j][1].1 as f64 * (1.0 - x[j]);
                down.max(1e-6) * up.max(1e-6)
            };
            let mut best = frac[0];
            for &j in &frac[1..] {
                if score(j) > score(best) {
                    best = j;
                }
            }
            return best;
        }
        most_fractional(&mut frac.iter().copied()).expect("fractional column exists")
    }

    /// Tightens global edge bounds using the root reduced costs: an edge
    /// whose switch would push the root bound past the cutoff keeps its
    /// root value.
    fn fix_by_reduced_cost(&mut self) {
        let cutoff = self.cutoff();
        let Some(root) = &self.root else { return };
        for (j, g) in self.global.iter_mut().enumerate() {
            if g.0 == g.1 {
                continue;
            }
            let d = root.reduced[j];
            match root.state[j] {
                ColState::Lower if root.objective + d > cutoff + 1e-9 => *g = (0.0, 0.0),
                ColState::Upper if root.objective - d > cutoff + 1e-9 => *g = (1.0, 1.0),
                _ => {}
            }
        }
    }

    fn report(mut self, status: SolveStatus) -> SolveReport {
        let bound = self.best_bound();
        if bound != self.reported_bound {
            self.reported_bound = bound;
            self.log();
        }
        let (incumbent, incumbent_cost) = match self.incumbent.take() {
            Some((t, c)) => (Some(t), Some(c)),
            None => (None, None),
        };
        SolveReport {
            status,
            gap_percent: incumbent_cost.and_then(|c| gap_percent(c, bound).ok()),
            incumbent,
            incumbent_cost,
            best_bound: bound,
            root_bound: self.root_bound,
            nodes_explored: self.nodes,
            cuts_added: self.cuts,
            lp_iterations: self.tab.iterations,
            wall_time: self.elapsed(),
            events: self.events,
            integral_successors: self.integral,
        }
    }
}

fn fractional(x: &[f64]) -> Vec<usize> {
    (0..x.len())
        .filter(|&j| x[j] > INTEGRALITY_TOL && x[j] < 1.0 - INTEGRALITY_TOL)
        .collect()
}

fn cut_set(cut: &crate::model::LinearConstraint, n: usize) -> Vec<bool> {
    let mut side = vec![false; n];
    for &(v, _) in &cut.terms {
        if let crate::model::VarId::X(i, _) = v {
            side[i] = true;
        }
    }
    side
}

#[cfg(test)]
mod tests {
    use super::super::solve;
    use super::*;
    use crate::instance::random_instance;
    use crate::model::ModelVariant;

    fn brute(inst: &Instance) -> f64 {
        let mut order: Vec<usize> = inst.targets().collect();
        let mut best = f64::INFINITY;
        permute(&mut order, 0, &mut |o| best = best.min(evaluate_tour(inst, o).unwrap().1));
        best
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
    fn single_target_is_one_node() {
        let inst = random_instance(1, 2.0, 3);
        let r = solve(&inst, &SolveConfig::default()).unwrap();
        assert_eq!(r.status, SolveStatus::Optimal);
        assert_eq!(r.nodes_explored, 1);
        let (m, m1, d) = (inst.unladen(), inst.mass(0), inst.d(1, 0));
        let want = 0.1 * ((m + m1) * d + m * d);
        assert!((r.incumbent_cost.unwrap() - want).abs() < 1e-9);
    }

    #[test]
    fn variants_agree_with_enumeration() {
        for seed in 0..6 {
            for gamma in [0.0, 2.0, 10.0] {
                let inst = random_instance(5, gamma, seed);
                let want = brute(&inst);
                for variant in [ModelVariant::CoreMilp, ModelVariant::Baseline1Milp, ModelVariant::Baseline2MilpDfj] {
                    for warm_start in [false, true] {
                        let cfg = SolveConfig {
                            variant,
                            warm_start,
                            ..SolveConfig::default()
                        };
                        let r = solve(&inst, &cfg).unwrap();
                        assert_eq!(r.status, SolveStatus::Optimal);
                        let got = r.incumbent_cost.unwrap();
                        assert!((got - want).abs() < 1e-6, "{variant} seed {seed} gamma {gamma}: {got} vs {want}");
                        assert!(r.best_bound <= got + 1e-7);
                        assert!(r.root_bound.unwrap() <= want + 1e-7);
                    }
                }
            }
        }
    }

    #[test]
    fn pseudo_cost_and_depth_first_agree() {
        let inst = random_instance(6, 5.0, 21);
        let want = brute(&inst);
        for (node_selection, branch_rule) in [
            (NodeSelection::DepthFirst, BranchRule::MostFractional),
            (NodeSelection::BestBound, BranchRule::PseudoFirst),
        ] {
            let cfg = SolveConfig {
                node_selection,
                branch_rule,
                warm_start: false,
                ..SolveConfig::default()
            };
            let r = solve(&inst, &cfg).unwrap();
            assert!((r.incumbent_cost.unwrap() - want).abs() < 1e-6);
        }
    }

    #[test]
    fn events_are_monotone() {
        let inst = random_instance(7, 2.0, 4);
        let r = solve(&inst, &SolveConfig::default()).unwrap();
        for w in r.events.windows(2) {
            assert!(w[1].bound >= w[0].bound);
            if let (Some(a), Some(b)) = (w[0].incumbent, w[1].incumbent) {
                assert!(b <= a);
            }
        }
    }

    #[test]
    fn node_limit_keeps_incumbent() {
        let inst = random_instance(8, 2.0, 4);
        let cfg = SolveConfig {
            max_nodes: 1,
            ..SolveConfig::default()
        };
        let r = solve(&inst, &cfg).unwrap();
        assert!(matches!(r.status, SolveStatus::NodeLimit | SolveStatus::Optimal));
        assert!(r.incumbent_cost.is_some());
        assert!(r.best_bound <= r.incumbent_cost.unwrap() + 1e-7);
    }

    #[test]
    fn deterministic_outcome() {
        let inst = random_instance(7, 3.0, 8);
        let a = solve(&inst, &SolveConfig::default()).unwrap();
        let b = solve(&inst, &SolveConfig::default()).unwrap();
        assert_eq!(a.outcome(), b.outcome());
    }
}
