use std::collections::VecDeque;

use crate::instance::Instance;
use crate::model::{dfj_cut, edge_index, LinearConstraint};

/// Edmonds-Karp maximum flow on a dense capacity matrix. Returns the flow
/// value and the source side of a minimum cut.
pub fn max_flow(cap: &[Vec<f64>], source: usize, sink: usize) -> (f64, Vec<bool>) {
    let n = cap.len();
    let mut residual: Vec<Vec<f64>> = cap.to_vec();
    let mut flow = 0.0;
    loop {
        let mut parent = vec![usize::MAX; n];
        parent[source] = source;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for v in 0..n {
                if parent[v] == usize::MAX && residual[u][v] > 1e-12 {
                    parent[v] = u;
                    queue.push_back(v);
                }
            }
        }
        if parent[sink] == usize::MAX {
            let side = parent.iter().map(|&p| p != usize::MAX).collect();
            return (flow, side);
        }
        let mut push = f64::INFINITY;
        let mut v = sink;
        while v != source {
            let u = parent[v];
            push = push.min(residual[u][v]);
            v = u;
        }
        let mut v = sink;
        while v != source {
            let u = parent[v];
            residual[u][v] -= push;
            residual[v][u] += push;
            v = u;
        }
        flow += push;
    }
}

/// Subtour cuts violated by an edge solution given in edge order. For each
/// target the depot-to-target maximum flow is computed; a flow below one
/// yields the cut for the minimum cut's source side. Repeated sets are
/// reported once.
pub fn separate_dfj(x: &[f64], inst: &Instance) -> Vec<LinearConstraint> {
    let n = inst.len();
    let depot = inst.depot();
    let mut cap = vec![vec![0.0; n]; n];
    for (i, row) in cap.iter_mut().enumerate() {
        for (j, c) in row.iter_mut().enumerate() {
            if i != j {
                *c = x[edge_index(n, i, j)].clamp(0.0, 1.0);
            }
        }
    }
    let mut seen: Vec<Vec<bool>> = Vec::new();
    let mut cuts = Vec::new();
    for t in inst.targets() {
        let (flow, side) = max_flow(&cap, depot, t);
        if flow < 1.0 - 1e-6 && !seen.contains(&side) {
            cuts.push(dfj_cut(&side, depot).expect("source side holds the depot, not the sink"));
            seen.push(side);
        }
    }
    cuts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::random_instance;
    use crate::model::{Sense, VarId};

    fn point(n: usize, arcs: &[(usize, usize, f64)]) -> Vec<f64> {
        let mut x = vec![0.0; n * (n - 1)];
        for &(i, j, v) in arcs {
            x[edge_index(n, i, j)] = v;
        }
        x
    }

    fn lhs(cut: &LinearConstraint, n: usize, x: &[f64]) -> f64 {
        cut.activity(|v| match v {
            VarId::X(i, j) => x[edge_index(n, i, j)],
            _ => unreachable!(),
        })
    }

    #[test]
    fn tour_has_no_cuts() {
        let inst = random_instance(4, 1.0, 3);
        let x = point(5, &[(4, 0, 1.0), (0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 4, 1.0)]);
        assert!(separate_dfj(&x, &inst).is_empty());
    }

    #[test]
    fn two_cycles_give_depot_side_cut() {
        let inst = random_instance(4, 1.0, 3);
        let x = point(5, &[(4, 0, 1.0), (0, 1, 1.0), (1, 4, 1.0), (2, 3, 1.0), (3, 2, 1.0)]);
        let cuts = separate_dfj(&x, &inst);
        assert_eq!(cuts.len(), 1);
        let want = dfj_cut(&[true, true, false, false, true], 4).unwrap();
        assert_eq!(cuts[0], want);
        assert_eq!(lhs(&cuts[0], 5, &x), 0.0);
    }

    /// Independent max-flow check: the minimum over all depot-side sets of
    /// the capacity leaving the set.
    fn min_cut_by_enumeration(cap: &[Vec<f64>], s: usize, t: usize) -> f64 {
        let n = cap.len();
        let mut best = f64::INFINITY;
        for mask in 0u32..(1 << n) {
            if mask & (1 << s) == 0 || mask & (1 << t) != 0 {
                continue;
            }
            let mut c = 0.0;
            for i in 0..n {
                for j in 0..n {
                    if mask & (1 << i) != 0 && mask & (1 << j) == 0 {
                        c += cap[i][j];
                    }
                }
            }
            best = f64::min(best, c);
        }
        best
    }

    #[test]
    fn fractional_two_cycle_example() {
        // 0.75 * (subtours d-a-b and p-q-r) + 0.25 * (tour d-p-q-r-a-b);
        // every degree is one and only 0.25 leaves the depot cycle
        let inst = random_instance(5, 1.0, 3);
        let d = inst.depot();
        let (a, b, p, q, r) = (0, 1, 2, 3, 4);
        let arcs = [
            (d, a, 0.75),
            (a, b, 1.0),
            (b, d, 1.0),
            (d, p, 0.25),
            (p, q, 1.0),
            (q, r, 1.0),
            (r, p, 0.75),
            (r, a, 0.25),
        ];
        let x = point(6, &arcs);
        let mut cap = vec![vec![0.0; 6]; 6];
        for &(i, j, v) in &arcs {
            cap[i][j] = v;
        }
        for v in 0..6 {
            let out: f64 = (0..6).map(|w| cap[v][w]).sum();
            let inc: f64 = (0..6).map(|w| cap[w][v]).sum();
            assert!((out - 1.0).abs() < 1e-12 && (inc - 1.0).abs() < 1e-12);
        }
        for t in [p, q, r] {
            let (flow, _) = max_flow(&cap, d, t);
            assert!((flow - 0.25).abs() < 1e-12);
            assert!((min_cut_by_enumeration(&cap, d, t) - 0.25).abs() < 1e-12);
        }
        for t in [a, b] {
            assert!((max_flow(&cap, d, t).0 - 1.0).abs() < 1e-12);
        }
        let cuts = separate_dfj(&x, &inst);
        assert_eq!(cuts.len(), 1);
        let c = &cuts[0];
        assert_eq!(c.sense, Sense::Ge);
        assert!((c.rhs - lhs(c, 6, &x) - 0.75).abs() < 1e-12);
        let mut side = vec![false; 6];
        for v in [d, a, b] {
            side[v] = true;
        }
        assert_eq!(*c, dfj_cut(&side, d).unwrap());
    }

    #[test]
    fn flows_agree_with_enumeration_on_random_capacities() {
        let mut s = crate::rng::Stream::new(11);
        for _ in 0..30 {
            let n = 6;
            let cap: Vec<Vec<f64>> = (0..n)
                .map(|i| (0..n).map(|j| if i == j || s.unit() < 0.4 { 0.0 } else { s.unit() }).collect())
                .collect();
            let (flow, side) = max_flow(&cap, 0, n - 1);
            assert!((flow - min_cut_by_enumeration(&cap, 0, n - 1)).abs() < 1e-9);
            assert!(side[0] && !side[n - 1]);
        }
    }
}
