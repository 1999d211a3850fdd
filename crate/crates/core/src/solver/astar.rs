use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};
use std::time::Instant;

use super::{gap_percent, Event, SolveConfig, SolveReport, SolveStatus, SolverError};
use crate::instance::Instance;
use crate::model::evaluate_tour;

/// Open-list entry; `done` marks a closed tour ending at `last`.
struct Entry {
    f: f64,
    g: f64,
    mask: u64,
    last: usize,
    done: bool,
    seq: u64,
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    /// Reversed so the max-heap pops the smallest `f`, then the largest `g`,
    /// then the oldest entry.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .f
            .total_cmp(&self.f)
            .then(self.g.total_cmp(&other.g))
            .then(other.seq.cmp(&self.seq))
    }
}

/// Prim's algorithm on the complete graph over `nodes`.
fn mst_length(inst: &Instance, nodes: &[usize]) -> f64 {
    let k = nodes.len();
    if k < 2 {
        return 0.0;
    }
    let mut in_tree = vec![false; k];
    let mut best = vec![f64::INFINITY; k];
    best[0] = 0.0;
    let mut total = 0.0;
    for _ in 0..k {
        let mut u = usize::MAX;
        for v in 0..k {
            if !in_tree[v] && (u == usize::MAX || best[v] < best[u]) {
                u = v;
            }
        }
        in_tree[u] = true;
        total += best[u];
        for v in 0..k {
            if !in_tree[v] {
                best[v] = best[v].min(inst.d(nodes[u], nodes[v]));
            }
        }
    }
    total
}

/// Remaining-cost estimate after delivering the targets whose positions in
/// `inst.targets()` are set in `delivered`, standing at `last`.
pub fn astar_heuristic(inst: &Instance, delivered: u64, last: usize) -> f64 {
    let weight = inst.alpha() * inst.unladen();
    if weight == 0.0 {
        return 0.0;
    }
    let depot = inst.depot();
    let mut nodes = vec![last];
    if last != depot {
        nodes.push(depot);
    }
    nodes.extend(inst.targets().enumerate().filter(|&(k, _)| delivered & (1 << k) == 0).map(|(_, t)| t));
    weight * mst_length(inst, &nodes)
}

type Parents = HashMap<(u64, usize), (u64, usize)>;

fn reconstruct(parent: &Parents, mask: u64, last: usize, depot: usize) -> Vec<usize> {
    let mut order = Vec::new();
    let (mut m, mut l) = (mask, last);
    while l != depot {
        order.push(l);
        (m, l) = parent[&(m, l)];
    }
    order.reverse();
    order
}

/// Best-first search over delivery prefixes. The cost so far is exact; the
/// estimate `alpha * M * MST(current, unvisited, depot)` never overstates
/// the remaining cost because every remaining leg is flown with at least
/// the unladen mass.
pub fn astar_search(inst: &Instance, cfg: &SolveConfig) -> Result<SolveReport, SolverError> {
    cfg.check()?;
    let start = Instant::now();
    let targets: Vec<usize> = inst.targets().collect();
    let n = targets.len();
    if n > 63 {
        return Err(SolverError::Config("tree search supports at most 63 targets".into()));
    }
    let full: u64 = (1u64 << n) - 1;
    let depot = inst.depot();
    let alpha = inst.alpha();

    let heuristic = |mask: u64, last: usize| astar_heuristic(inst, mask, last);

    let mut best_g: HashMap<(u64, usize), f64> = HashMap::new();
    let mut parent: Parents = HashMap::new();
    let mut open = BinaryHeap::new();
    let mut seq = 0u64;
    open.push(Entry {
        f: heuristic(0, depot),
        g: 0.0,
        mask: 0,
        last: depot,
        done: false,
        seq,
    });
    best_g.insert((0, depot), 0.0);
    let mut expanded = 0usize;
    let mut bound: f64 = 0.0;
    let mut solution = None;

    let status = loop {
        let Some(e) = open.pop() else {
            break SolveStatus::Infeasible;
        };
        bound = bound.max(e.f);
        if e.done {
            solution = Some(reconstruct(&parent, full, e.last, depot));
            break SolveStatus::Optimal;
        }
        if best_g.get(&(e.mask, e.last)).is_some_and(|&g| e.g > g) {
            continue;
        }
        if expanded >= cfg.max_nodes {
            break SolveStatus::NodeLimit;
        }
        if expanded.is_multiple_of(1024) && start.elapsed() >= cfg.time_limit {
            break SolveStatus::FeasibleTimeLimit;
        }
        expanded += 1;
        let delivered: f64 = (0..n).filter(|&k| e.mask & (1 << k) != 0).map(|k| inst.mass(targets[k])).sum();
        let mass = inst.laden() - delivered;
        if e.mask == full {
            let g = e.g + alpha * inst.unladen() * inst.d(e.last, depot);
            seq += 1;
            open.push(Entry {
                f: g,
                g,
                mask: full,
                last: e.last,
                done: true,
                seq,
            });
            continue;
        }
        for k in 0..n {
            if e.mask & (1 << k) != 0 {
                continue;
            }
            let t = targets[k];
            let mask = e.mask | (1 << k);
            let g = e.g + alpha * mass * inst.d(e.last, t);
            if best_g.get(&(mask, t)).is_some_and(|&old| old <= g) {
                continue;
            }
            best_g.insert((mask, t), g);
            parent.insert((mask, t), (e.mask, e.last));
            seq += 1;
            open.push(Entry {
                f: g + heuristic(mask, t),
                g,
                mask,
                last: t,
                done: false,
                seq,
            });
        }
        if open.len() > cfg.max_open {
            break SolveStatus::NodeLimit;
        }
    };

    let tour = solution.map(|order| evaluate_tour(inst, &order).expect("search builds permutations"));
    let cost = tour.as_ref().map(|t| t.1);
    if let Some(c) = cost {
        bound = c;
    }
    let events = vec![Event {
        elapsed: start.elapsed().as_secs_f64(),
        nodes: expanded,
        bound,
        incumbent: cost,
    }];
    Ok(SolveReport {
        status,
        gap_percent: cost.and_then(|c| gap_percent(c, bound).ok()),
        incumbent: tour.map(|t| t.0),
        incumbent_cost: cost,
        best_bound: bound,
        root_bound: None,
        nodes_explored: expanded,
        cuts_added: 0,
        lp_iterations: 0,
        wall_time: start.elapsed().as_secs_f64(),
        events,
        integral_successors: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::random_instance;

    #[test]
    fn single_target() {
        let inst = random_instance(1, 3.0, 2);
        let r = astar_search(&inst, &SolveConfig::default()).unwrap();
        assert_eq!(r.status, SolveStatus::Optimal);
        assert_eq!(r.incumbent.unwrap().order(), &[0]);
    }

    #[test]
    fn mst_of_unit_square() {
        let inst = crate::instance::make_instance(
            crate::instance::NodeSet::new(
                "sq",
                vec![(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)],
                crate::instance::Metric::EuclidExact,
            )
            .unwrap(),
            None,
            &[0.5, 0.5, 0.5],
            1.0,
            0.1,
        )
        .unwrap();
        assert!((mst_length(&inst, &[0, 1, 2, 3]) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn memory_guard() {
        let inst = random_instance(8, 2.0, 2);
        let cfg = SolveConfig {
            max_open: 3,
            ..SolveConfig::default()
        };
        assert_eq!(astar_search(&inst, &cfg).unwrap().status, SolveStatus::NodeLimit);
    }
}
