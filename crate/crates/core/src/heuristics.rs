//! Distance-based warm starts.

use crate::instance::{DistanceMatrix, Instance};
use crate::model::{evaluate_tour, Tour};

/// Greedy cycle from `start`: always move to the closest unvisited node,
/// smallest id on ties. Returns every node once, `start` first.
pub fn nearest_neighbor(dist: &DistanceMatrix, start: usize) -> Vec<usize> {
    let n = dist.len();
    let mut seen = vec![false; n];
    let mut seq = Vec::with_capacity(n);
    let mut cur = start;
    seen[cur] = true;
    seq.push(cur);
    while seq.len() < n {
        let mut best = None;
        for j in 0..n {
            if seen[j] {
                continue;
            }
            if best.is_none_or(|b: usize| dist.get(cur, j) < dist.get(cur, b)) {
                best = Some(j);
            }
        }
        cur = best.expect("unvisited node remains");
        seen[cur] = true;
        seq.push(cur);
    }
    seq
}

/// Total length of the closed cycle through `seq`.
pub fn cycle_length(seq: &[usize], dist: &DistanceMatrix) -> f64 {
    (0..seq.len()).map(|k| dist.get(seq[k], seq[(k + 1) % seq.len()])).sum()
}

/// First-improvement 2-opt on cycle length. The first element stays in
/// place; scan order is `i` ascending, then `j` ascending.
pub fn two_opt(seq: &[usize], dist: &DistanceMatrix) -> Vec<usize> {
    let mut s = seq.to_vec();
    let n = s.len();
    if n < 4 {
        return s;
    }
    let d = |a: usize, b: usize| dist.get(a, b);
    'restart: loop {
        for i in 0..n - 2 {
            for j in i + 2..n {
                let (a, b) = (s[i], s[i + 1]);
                let (c, e) = (s[j], s[(j + 1) % n]);
                if e == a {
                    continue;
                }
                let delta = d(a, c) + d(b, e) - d(a, b) - d(c, e);
                if delta < -1e-10 {
                    s[i + 1..=j].reverse();
                    continue 'restart;
                }
            }
        }
        return s;
    }
}

/// Nearest neighbour plus 2-opt from the depot, then the cheaper of the
/// two orientations under the load-dependent cost.
pub fn warm_start(inst: &Instance) -> (Tour, f64) {
    let seq = two_opt(&nearest_neighbor(inst.dist(), inst.depot()), inst.dist());
    let forward: Vec<usize> = seq[1..].to_vec();
    let backward: Vec<usize> = forward.iter().rev().copied().collect();
    let a = evaluate_tour(inst, &forward).expect("heuristic order is a permutation");
    let b = evaluate_tour(inst, &backward).expect("heuristic order is a permutation");
    if b.1 < a.1 {
        b
    } else {
        a
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{make_instance, random_instance, Metric, NodeSet};

    fn matrix(coords: &[(f64, f64)]) -> DistanceMatrix {
        DistanceMatrix::from_fn(coords.len(), |i, j| {
            let (a, b) = (coords[i], coords[j]);
            ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt()
        })
    }

    #[test]
    fn collinear_nodes_in_order() {
        let d = matrix(&[(0.0, 0.0), (2.0, 0.0), (1.0, 0.0)]);
        assert_eq!(nearest_neighbor(&d, 0), vec![0, 2, 1]);
    }

    #[test]
    fn ties_go_to_smaller_id() {
        let d = matrix(&[(0.0, 0.0), (1.0, 0.0), (-1.0, 0.0), (0.0, 1.0)]);
        assert_eq!(nearest_neighbor(&d, 0)[1], 1);
    }

    #[test]
    fn crossing_removed_on_square() {
        let d = matrix(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]);
        let crossing = vec![0, 2, 1, 3];
        let fixed = two_opt(&crossing, &d);
        let before = 2.0 + 2.0 * 2f64.sqrt();
        assert!((cycle_length(&crossing, &d) - before).abs() < 1e-12);
        assert!((cycle_length(&fixed, &d) - 4.0).abs() < 1e-12);
        assert_eq!(fixed[0], 0);
    }

    #[test]
    fn triangle_unchanged() {
        let d = matrix(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]);
        assert_eq!(two_opt(&[0, 1, 2], &d), vec![0, 1, 2]);
    }

    #[test]
    fn two_opt_never_lengthens() {
        for seed in 0..20 {
            let inst = random_instance(9, 2.0, seed);
            let nn = nearest_neighbor(inst.dist(), inst.depot());
            let mut sorted = nn.clone();
            sorted.sort_unstable();
            assert_eq!(sorted, (0..inst.len()).collect::<Vec<_>>());
            let opt = two_opt(&nn, inst.dist());
            assert!(cycle_length(&opt, inst.dist()) <= cycle_length(&nn, inst.dist()) + 1e-9);
        }
    }

    #[test]
    fn heavy_package_goes_first_on_short_leg() {
        // depot at the origin, target 0 close, target 1 far
        let nodes = NodeSet::new("w", vec![(1.0, 0.0), (0.0, 3.0), (0.0, 0.0)], Metric::EuclidExact).unwrap();
        let inst = make_instance(nodes, None, &[1.0, 0.1], 1.0, 0.1).unwrap();
        let (tour, cost) = warm_start(&inst);
        let (_, other) = evaluate_tour(&inst, &[1, 0]).unwrap();
        assert_eq!(tour.order(), &[0, 1]);
        assert!(cost < other);
    }
}
