use super::{LinearModel, ModelError, VarId};
use crate::instance::Instance;

/// Depot-rooted closed tour with the vehicle mass on departure from each
/// position.
#[derive(Debug, Clone, PartialEq)]
pub struct Tour {
    /// Node indices; starts and ends at the depot.
    pub sequence: Vec<usize>,
    /// `masses[k]` is the mass when leaving `sequence[k]`.
    pub masses: Vec<f64>,
}

impl Tour {
    /// Targets in visiting order.
    pub fn order(&self) -> &[usize] {
        &self.sequence[1..self.sequence.len() - 1]
    }

    pub fn legs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.sequence.windows(2).map(|w| (w[0], w[1]))
    }

    /// Successor of each node.
    pub fn successors(&self) -> Vec<usize> {
        let mut next = vec![usize::MAX; self.sequence.len() - 1];
        for (a, b) in self.legs() {
            next[a] = b;
        }
        next
    }

    pub fn distance(&self, inst: &Instance) -> f64 {
        self.legs().map(|(a, b)| inst.d(a, b)).sum()
    }
}

/// Builds the tour for a visiting order and returns its load-dependent cost
/// `alpha * sum(departure mass * distance)`. The final leg into the depot is
/// flown at the unladen mass.
pub fn evaluate_tour(inst: &Instance, order: &[usize]) -> Result<(Tour, f64), ModelError> {
    check_order(inst, order)?;
    let depot = inst.depot();
    let mut sequence = Vec::with_capacity(order.len() + 2);
    let mut masses = Vec::with_capacity(order.len() + 1);
    sequence.push(depot);
    let mut mass = inst.laden();
    let mut cost = 0.0;
    let mut prev = depot;
    for &t in order {
        masses.push(mass);
        cost += mass * inst.d(prev, t);
        mass -= inst.mass(t);
        sequence.push(t);
        prev = t;
    }
    masses.push(inst.unladen());
    cost += inst.unladen() * inst.d(prev, depot);
    sequence.push(depot);
    Ok((Tour { sequence, masses }, inst.alpha() * cost))
}

fn check_order(inst: &Instance, order: &[usize]) -> Result<(), ModelError> {
    let mut seen = vec![false; inst.len()];
    for &t in order {
        if t >= inst.len() || t == inst.depot() {
            return Err(ModelError::BadSequence(format!("{} is not a target", t + 1)));
        }
        if std::mem::replace(&mut seen[t], true) {
            return Err(ModelError::BadSequence(format!("target {} repeated", t + 1)));
        }
    }
    if order.len() != inst.n_targets() {
        return Err(ModelError::BadSequence(format!(
            "{} of {} targets visited",
            order.len(),
            inst.n_targets()
        )));
    }
    Ok(())
}

/// Checks that a successor map is a single cycle through every node and
/// returns the target order starting after `depot`.
pub fn validate_successors(next: &[usize], depot: usize) -> Result<Vec<usize>, ModelError> {
    let n = next.len();
    let mut order = Vec::with_capacity(n.saturating_sub(1));
    let mut seen = vec![false; n];
    let mut cur = depot;
    for _ in 0..n {
        if cur >= n || seen[cur] {
            break;
        }
        seen[cur] = true;
        if cur != depot {
            order.push(cur);
        }
        cur = next[cur];
    }
    if cur != depot || order.len() + 1 != n {
        return Err(ModelError::BadSequence(format!(
            "successor map is not a single tour through the depot ({} of {n} nodes reached)",
            order.len() + 1
        )));
    }
    Ok(order)
}

/// The model point induced by a tour: `x` marks tour legs, `zeta`/`eta`
/// carry the tail/head masses on those legs, `M_t` the mass after each drop.
pub fn tour_point(model: &LinearModel, inst: &Instance, tour: &Tour) -> Vec<f64> {
    let n = inst.len();
    let mut on = vec![false; n * n];
    let mut mass_after = vec![inst.laden(); n];
    for (k, (a, b)) in tour.legs().enumerate() {
        on[a * n + b] = true;
        if let Some(&m) = tour.masses.get(k + 1) {
            mass_after[b] = m;
        }
    }
    let mass_at = |v: usize| if v == inst.depot() { inst.laden() } else { mass_after[v] };
    // arriving at the depot the vehicle is unladen
    let head_mass = |v: usize| if v == inst.depot() { inst.unladen() } else { mass_after[v] };
    model
        .vars
        .iter()
        .map(|v| match v.id {
            VarId::X(i, j) => on[i * n + j] as u8 as f64,
            VarId::Zeta(i, j) => {
                if on[i * n + j] {
                    mass_at(i)
                } else {
                    0.0
                }
            }
            VarId::Eta(i, j) => {
                if on[i * n + j] {
                    head_mass(j)
                } else {
                    0.0
                }
            }
            VarId::Mass(t) => mass_after[t],
        })
        .collect()
}
