//! Exact reference solvers independent of the LP machinery.

use thiserror::Error;

use crate::instance::Instance;
use crate::model::{evaluate_tour, validate_successors, Tour};
use crate::solver::SolveReport;

pub const BRUTE_FORCE_MAX: usize = 10;
pub const HELD_KARP_MAX: usize = 20;

#[derive(Debug, Error, PartialEq)]
pub enum OracleError {
    #[error("{oracle} handles at most {max} targets, instance has {n}")]
    TooLarge { oracle: &'static str, max: usize, n: usize },
}

/// Evaluates every visiting order in lexicographic order and keeps the
/// first cheapest one.
pub fn brute_force(inst: &Instance) -> Result<(Tour, f64), OracleError> {
    let n = inst.n_targets();
    if n > BRUTE_FORCE_MAX {
        return Err(OracleError::TooLarge {
            oracle: "brute force",
            max: BRUTE_FORCE_MAX,
            n,
        });
    }
    let mut order: Vec<usize> = inst.targets().collect();
    let mut best: Option<(Tour, f64)> = None;
    loop {
        let (tour, cost) = evaluate_tour(inst, &order).expect("permutation of targets");
        if best.as_ref().is_none_or(|b| cost < b.1) {
            best = Some((tour, cost));
        }
        if !next_permutation(&mut order) {
            break;
        }
    }
    Ok(best.expect("at least one order"))
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("pivot has a successor");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Dynamic program over (delivered set, last target). The mass on board
/// depends only on the delivered set, so the state is exact. Ties keep the
/// smallest predecessor, then the smallest final target.
pub fn held_karp(inst: &Instance) -> Result<(Tour, f64), OracleError> {
    let n = inst.n_targets();
    if n > HELD_KARP_MAX {
        return Err(OracleError::TooLarge {
            oracle: "Held-Karp",
            max: HELD_KARP_MAX,
            n,
        });
    }
    let t: Vec<usize> = inst.targets().collect();
    let depot = inst.depot();
    let alpha = inst.alpha();
    let states = 1usize << n;
    let mut delivered = vec![0.0; states];
    for s in 1..states {
        let low = s.trailing_zeros() as usize;
        delivered[s] = delivered[s & (s - 1)] + inst.mass(t[low]);
    }
    let mut cost = vec![f64::INFINITY; states * n];
    let mut parent = vec![u8::MAX; states * n];
    for k in 0..n {
        cost[(1 << k) * n + k] = alpha * inst.laden() * inst.d(depot, t[k]);
    }
    for s in 1..states {
        let mass = inst.laden() - delivered[s];
        for last in 0..n {
            if s & (1 << last) == 0 {
                continue;
            }
            let here = cost[s * n + last];
            if here == f64::INFINITY {
                continue;
            }
            for k in 0..n {
                if s & (1 << k) != 0 {
                    continue;
                }
                let next = s | (1 << k);
                let c = here + alpha * mass * inst.d(t[last], t[k]);
                let slot = next * n + k;
                if c < cost[slot] {
                    cost[slot] = c;
                    parent[slot] = last as u8;
                }
            }
        }
    }
    let full = states - 1;
    let mut best = (f64::INFINITY, 0);
    for last in 0..n {
        let c = cost[full * n + last] + alpha * inst.unladen() * inst.d(t[last], depot);
        if c < best.0 {
            best = (c, last);
        }
    }
    let mut order = Vec::with_capacity(n);
    let (mut s, mut last) = (full, best.1);
    loop {
        order.push(t[last]);
        let p = parent[s * n + last];
        s &= !(1 << last);
        if p == u8::MAX {
            break;
        }
        last = p as usize;
    }
    order.reverse();
    Ok(evaluate_tour(inst, &order).expect("reconstructed permutation"))
}

/// Outcome of [`verify_solution`]; empty `failures` means it passed.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Verdict {
    pub failures: Vec<String>,
}

impl Verdict {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Recomputes the incumbent's cost and checks the tour and the bound.
pub fn verify_solution(inst: &Instance, report: &SolveReport) -> Verdict {
    let mut v = Verdict::default();
    let (Some(tour), Some(claimed)) = (&report.incumbent, report.incumbent_cost) else {
        v.failures.push("no incumbent".into());
        return v;
    };
    let shape_ok = tour.sequence.len() == inst.len() + 1
        && tour.sequence.first() == Some(&inst.depot())
        && tour.sequence.last() == Some(&inst.depot())
        && validate_successors(&tour.successors(), inst.depot()).is_ok();
    if !shape_ok {
        v.failures.push("invalid tour".into());
        return v;
    }
    match evaluate_tour(inst, tour.order()) {
        Ok((_, cost)) => {
            if (cost - claimed).abs() > 1e-7 {
                v.failures.push(format!("cost mismatch: reported {claimed}, recomputed {cost}"));
            }
            if report.best_bound > cost + 1e-7 {
                v.failures.push(format!("bound exceeds incumbent: {} > {cost}", report.best_bound));
            }
        }
        Err(e) => v.failures.push(format!("invalid tour: {e}")),
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{make_instance, random_instance, Metric, NodeSet};
    use crate::solver::{solve, SolveConfig};

    #[test]
    fn single_target_oracles_agree() {
        let inst = random_instance(1, 3.0, 5);
        let (a, ca) = brute_force(&inst).unwrap();
        let (b, cb) = held_karp(&inst).unwrap();
        assert_eq!(a, b);
        assert_eq!(ca, cb);
    }

    #[test]
    fn two_targets_by_hand() {
        let inst = random_instance(2, 2.0, 6);
        let (m, m1, m2) = (inst.unladen(), inst.mass(0), inst.mass(1));
        let d = |a, b| inst.d(a, b);
        let fwd = 0.1 * ((m + m1 + m2) * d(2, 0) + (m + m2) * d(0, 1) + m * d(1, 2));
        let rev = 0.1 * ((m + m1 + m2) * d(2, 1) + (m + m1) * d(1, 0) + m * d(0, 2));
        let (_, c) = brute_force(&inst).unwrap();
        assert!((c - fwd.min(rev)).abs() < 1e-12);
    }

    #[test]
    fn symmetric_tie_picks_lexicographic_order() {
        // square with the depot at a corner and equal masses, zero unladen
        // mass: both orientations cost the same
        let nodes = NodeSet::new(
            "sym",
            vec![(1.0, 0.0), (1.0, 1.0), (0.0, 1.0), (0.0, 0.0)],
            Metric::EuclidExact,
        )
        .unwrap();
        let inst = make_instance(nodes, None, &[0.5, 0.5, 0.5], 0.0, 0.1).unwrap();
        let (tour, cost) = brute_force(&inst).unwrap();
        let (_, rev) = evaluate_tour(&inst, &[2, 1, 0]).unwrap();
        assert_eq!(tour.order(), &[0, 1, 2]);
        assert!((cost - rev).abs() < 1e-12);
    }

    #[test]
    fn held_karp_matches_brute_force() {
        for seed in 0..30 {
            let n = 4 + (seed as usize % 5);
            let gamma = [0.0, 1.0, 2.0, 5.0, 10.0][seed as usize % 5];
            let inst = random_instance(n, gamma, seed);
            let (_, a) = brute_force(&inst).unwrap();
            let (_, b) = held_karp(&inst).unwrap();
            assert!((a - b).abs() < 1e-9, "seed {seed}: {a} vs {b}");
        }
    }

    #[test]
    fn hazmat_return_is_free() {
        let inst = random_instance(6, 0.0, 2);
        let (tour, cost) = held_karp(&inst).unwrap();
        let legs: Vec<(usize, usize)> = tour.legs().collect();
        let open_path: f64 = legs[..legs.len() - 1]
            .iter()
            .zip(&tour.masses)
            .map(|(&(a, b), m)| 0.1 * m * inst.d(a, b))
            .sum();
        assert!((cost - open_path).abs() < 1e-12);
        assert_eq!(*tour.masses.last().unwrap(), 0.0);
    }

    #[test]
    fn guards() {
        let inst = random_instance(11, 1.0, 1);
        assert!(matches!(brute_force(&inst), Err(OracleError::TooLarge { max: 10, .. })));
        let inst = random_instance(21, 1.0, 1);
        assert!(matches!(held_karp(&inst), Err(OracleError::TooLarge { max: 20, .. })));
    }

    #[test]
    fn verdicts() {
        let inst = random_instance(5, 2.0, 3);
        let mut r = solve(&inst, &SolveConfig::default()).unwrap();
        assert!(verify_solution(&inst, &r).passed());
        let good = r.clone();
        r.incumbent_cost = Some(r.incumbent_cost.unwrap() + 1.0);
        assert!(verify_solution(&inst, &r).failures[0].starts_with("cost mismatch"));
        let mut r = good;
        r.best_bound = r.incumbent_cost.unwrap() + 1.0;
        assert!(verify_solution(&inst, &r).failures[0].starts_with("bound exceeds incumbent"));
    }
}
