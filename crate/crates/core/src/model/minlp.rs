use super::{edges, LinearConstraint, LinearModel, ModelVariant, Sense, Tag, VarId};
use crate::instance::Instance;

/// Vertex-mass formulation with a bilinear objective `alpha * M_i * d_ij * x_ij`.
///
/// The depot's departure mass is the constant laden mass, so depot edges
/// contribute linear objective terms and constants on the right-hand side.
/// The absolute-value drop rule `|M_i - M_j - m_j x_ij| <= Mbar (1 - x_ij)`
/// is written as its two linear sides.
pub fn build_minlp(inst: &Instance) -> LinearModel {
    let n = inst.len();
    let depot = inst.depot();
    let laden = inst.laden();
    let total = inst.package_total();
    let alpha = inst.alpha();

    let mut model = LinearModel::new(inst.name(), ModelVariant::Minlp);
    for (i, j) in edges(n) {
        model.add_var(VarId::X(i, j), 0.0, 1.0, true);
    }
    for t in inst.targets() {
        model.add_var(VarId::Mass(t), inst.unladen(), laden, false);
    }
    for (i, j) in edges(n) {
        let c = alpha * inst.d(i, j);
        if c == 0.0 {
            continue;
        }
        if i == depot {
            model.objective.push((VarId::X(i, j), c * laden));
        } else {
            model.bilinear.push((VarId::Mass(i), VarId::X(i, j), c));
        }
    }

    let others = |v: usize| (0..n).filter(move |&u| u != v);
    for i in 0..n {
        model.push(LinearConstraint::new(
            others(i).map(|j| (VarId::X(i, j), 1.0)),
            Sense::Eq,
            1.0,
            Tag::DegreeOut,
        ));
    }
    for j in 0..n {
        model.push(LinearConstraint::new(
            others(j).map(|i| (VarId::X(i, j), 1.0)),
            Sense::Eq,
            1.0,
            Tag::DegreeIn,
        ));
    }
    for (i, j) in edges(n).filter(|&(_, j)| j != depot) {
        let m_j = inst.mass(j);
        let x = VarId::X(i, j);
        // M_i - M_j + (Mbar - m_j) x <= Mbar
        let mut upper = vec![(VarId::Mass(j), -1.0), (x, total - m_j)];
        // -M_i + M_j + (Mbar + m_j) x <= Mbar
        let mut lower = vec![(VarId::Mass(j), 1.0), (x, total + m_j)];
        let (mut rhs_up, mut rhs_lo) = (total, total);
        if i == depot {
            rhs_up -= laden;
            rhs_lo += laden;
        } else {
            upper.insert(0, (VarId::Mass(i), 1.0));
            lower.insert(0, (VarId::Mass(i), -1.0));
        }
        model.push(LinearConstraint::new(upper, Sense::Le, rhs_up, Tag::DropUpper));
        model.push(LinearConstraint::new(lower, Sense::Le, rhs_lo, Tag::DropLower));
    }
    model
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::random_instance;

    #[test]
    fn single_target_model() {
        let inst = random_instance(1, 2.0, 4);
        let m = build_minlp(&inst);
        let ids: Vec<VarId> = m.vars.iter().map(|v| v.id).collect();
        // depot is node 1, the target node 0
        assert_eq!(ids, vec![VarId::X(0, 1), VarId::X(1, 0), VarId::Mass(0)]);
        assert_eq!(m.vars[2].lb, inst.unladen());
        assert_eq!(m.vars[2].ub, inst.laden());
        assert_eq!(m.bilinear.len(), 1);
        assert_eq!(m.objective.len(), 1);
    }

    #[test]
    fn drop_rows_force_mass_difference_on_selected_edges() {
        let inst = random_instance(3, 2.0, 8);
        let m = build_minlp(&inst);
        let (i, j) = (0, 1);
        let rows: Vec<&LinearConstraint> = m
            .constraints
            .iter()
            .filter(|c| {
                c.tag != Tag::DegreeIn
                    && c.tag != Tag::DegreeOut
                    && c.terms.iter().any(|t| t.0 == VarId::X(i, j))
            })
            .collect();
        assert_eq!(rows.len(), 2);
        let value = |mi: f64, mj: f64, x: f64| {
            move |v: VarId| match v {
                VarId::Mass(k) if k == i => mi,
                VarId::Mass(_) => mj,
                _ => x,
            }
        };
        let m_j = inst.mass(j);
        let base = inst.unladen() + 0.5 * inst.package_total();
        // x = 1: only M_i - M_j = m_j is feasible
        assert!(rows.iter().all(|r| r.violation(value(base + m_j, base, 1.0)) < 1e-12));
        assert!(rows.iter().any(|r| r.violation(value(base + m_j + 0.01, base, 1.0)) > 0.0));
        // x = 0: any difference up to Mbar
        let total = inst.package_total();
        assert!(rows.iter().all(|r| r.violation(value(base + total, base, 0.0)) < 1e-12));
        assert!(rows.iter().all(|r| r.violation(value(base - total, base, 0.0)) < 1e-12));
        assert!(rows.iter().any(|r| r.violation(value(base + total + 0.01, base, 0.0)) > 0.0));
    }
}
