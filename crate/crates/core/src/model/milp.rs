//! Edge-mass MILP.
//!
//! Each vertex mass `M_i` of the bilinear formulation is replaced by two
//! edge variables, `zeta_ij = M_i x_ij` and `eta_ij = M_j x_ij`. The
//! objective becomes linear in `zeta` and the mass-drop rule becomes the
//! linear identity `zeta_ij - eta_ij = m_j x_ij`. Because mass strictly
//! decreases along any edge into a target, no cycle avoiding the depot can
//! satisfy the drop and balance rows, so the model needs no subtour cuts.

use super::{edges, LinearConstraint, LinearModel, ModelError, ModelVariant, Sense, Tag, VarId};
use crate::instance::Instance;

pub fn build_milp(inst: &Instance, variant: ModelVariant) -> Result<LinearModel, ModelError> {
    if variant == ModelVariant::Minlp {
        return Err(ModelError::NoLinearModel(variant));
    }
    let n = inst.len();
    let depot = inst.depot();
    let unladen = inst.unladen();
    let laden = inst.laden();
    let alpha = inst.alpha();

    let mut model = LinearModel::new(inst.name(), variant);
    for (i, j) in edges(n) {
        model.add_var(VarId::X(i, j), 0.0, 1.0, true);
    }
    for (i, j) in edges(n) {
        model.add_var(VarId::Zeta(i, j), 0.0, laden, false);
    }
    for (i, j) in edges(n) {
        model.add_var(VarId::Eta(i, j), 0.0, laden, false);
    }
    model.objective = edges(n)
        .map(|(i, j)| (VarId::Zeta(i, j), alpha * inst.d(i, j)))
        .filter(|t| t.1 != 0.0)
        .collect();

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
    for t in inst.targets() {
        model.push(LinearConstraint::new(
            [(VarId::Zeta(depot, t), 1.0), (VarId::X(depot, t), -laden)],
            Sense::Eq,
            0.0,
            Tag::DepotLaden,
        ));
    }
    for t in inst.targets() {
        model.push(LinearConstraint::new(
            [(VarId::Eta(t, depot), 1.0), (VarId::X(t, depot), -unladen)],
            Sense::Eq,
            0.0,
            Tag::DepotUnladen,
        ));
    }
    for (i, j) in edges(n).filter(|&(_, j)| j != depot) {
        model.push(LinearConstraint::new(
            [
                (VarId::Zeta(i, j), 1.0),
                (VarId::Eta(i, j), -1.0),
                (VarId::X(i, j), -inst.mass(j)),
            ],
            Sense::Eq,
            0.0,
            Tag::MassDrop,
        ));
    }
    for j in inst.targets() {
        let incoming = others(j).map(|i| (VarId::Eta(i, j), 1.0));
        let outgoing = others(j).map(|k| (VarId::Zeta(j, k), -1.0));
        model.push(LinearConstraint::new(
            incoming.chain(outgoing),
            Sense::Eq,
            0.0,
            Tag::MassBalance,
        ));
    }
    for (i, j) in edges(n) {
        let x = VarId::X(i, j);
        for (v, lo, hi) in [
            (VarId::Zeta(i, j), Tag::ZetaLower, Tag::ZetaUpper),
            (VarId::Eta(i, j), Tag::EtaLower, Tag::EtaUpper),
        ] {
            model.push(LinearConstraint::new([(v, 1.0), (x, -unladen)], Sense::Ge, 0.0, lo));
            model.push(LinearConstraint::new([(v, 1.0), (x, -laden)], Sense::Le, 0.0, hi));
        }
    }

    if variant != ModelVariant::CoreMilp {
        push_link_rows(inst, &mut model);
    }
    Ok(model)
}

/// Rows linking each edge's mass variable to the vertex mass recovered by
/// summing over the vertex's outgoing (zeta) or incoming (eta) edges. They
/// are implied at integrality.
fn push_link_rows(inst: &Instance, model: &mut LinearModel) {
    let n = inst.len();
    let unladen = inst.unladen();
    let laden = inst.laden();
    for (i, j) in edges(n) {
        let x = VarId::X(i, j);
        let out_sum = || (0..n).filter(move |&k| k != i).map(move |k| (VarId::Zeta(i, k), -1.0));
        let in_sum = || (0..n).filter(move |&l| l != j).map(move |l| (VarId::Eta(l, j), -1.0));
        model.push(LinearConstraint::new(
            std::iter::once((VarId::Zeta(i, j), 1.0))
                .chain(out_sum())
                .chain([(x, -unladen)]),
            Sense::Le,
            -unladen,
            Tag::ZetaLinkUpper,
        ));
        model.push(LinearConstraint::new(
            std::iter::once((VarId::Zeta(i, j), 1.0))
                .chain(out_sum())
                .chain([(x, -laden)]),
            Sense::Ge,
            -laden,
            Tag::ZetaLinkLower,
        ));
        model.push(LinearConstraint::new(
            std::iter::once((VarId::Eta(i, j), 1.0))
                .chain(in_sum())
                .chain([(x, -unladen)]),
            Sense::Le,
            -unladen,
            Tag::EtaLinkUpper,
        ));
        model.push(LinearConstraint::new(
            std::iter::once((VarId::Eta(i, j), 1.0))
                .chain(in_sum())
                .chain([(x, -laden)]),
            Sense::Ge,
            -laden,
            Tag::EtaLinkLower,
        ));
    }
}

/// `sum of x over edges leaving the set >= 1` for a node set containing the
/// depot and missing at least one node. `in_set` is indexed by node.
pub fn dfj_cut(in_set: &[bool], depot: usize) -> Result<LinearConstraint, ModelError> {
    let n = in_set.len();
    if depot >= n || !in_set[depot] || in_set.iter().all(|&b| b) {
        return Err(ModelError::BadCutSet);
    }
    let terms = (0..n)
        .filter(|&i| in_set[i])
        .flat_map(|i| (0..n).filter(|&j| !in_set[j]).map(move |j| (VarId::X(i, j), 1.0)));
    Ok(LinearConstraint::new(terms, Sense::Ge, 1.0, Tag::Dfj))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::random_instance;

    #[test]
    fn two_target_row_counts() {
        let inst = random_instance(2, 5.0, 1);
        let core = build_milp(&inst, ModelVariant::CoreMilp).unwrap();
        assert_eq!(core.n_vars(), 18);
        assert_eq!(core.vars.iter().filter(|v| v.integer).count(), 6);
        assert_eq!(core.count_tag(Tag::DegreeOut) + core.count_tag(Tag::DegreeIn), 6);
        assert_eq!(core.count_tag(Tag::DepotLaden) + core.count_tag(Tag::DepotUnladen), 4);
        assert_eq!(core.count_tag(Tag::MassDrop), 4);
        assert_eq!(core.count_tag(Tag::MassBalance), 2);
        assert_eq!(core.constraints.len(), 40);

        let b1 = build_milp(&inst, ModelVariant::Baseline1Milp).unwrap();
        assert_eq!(b1.constraints.len(), 64);
        assert_eq!(b1.constraints[..40], core.constraints[..]);
        let b2 = build_milp(&inst, ModelVariant::Baseline2MilpDfj).unwrap();
        assert_eq!(b2.constraints, b1.constraints);
        assert!(b2.variant.lazy_dfj() && !b1.variant.lazy_dfj());
    }

    #[test]
    fn hazmat_return_fixing_is_zero() {
        let inst = random_instance(3, 0.0, 2);
        let core = build_milp(&inst, ModelVariant::CoreMilp).unwrap();
        for c in core.constraints.iter().filter(|c| c.tag == Tag::DepotUnladen) {
            assert_eq!(c.terms.len(), 1);
            assert!(matches!(c.terms[0].0, VarId::Eta(_, d) if d == inst.depot()));
            assert_eq!(c.rhs, 0.0);
        }
    }

    #[test]
    fn minlp_variant_has_no_linear_model() {
        let inst = random_instance(2, 1.0, 1);
        assert_eq!(
            build_milp(&inst, ModelVariant::Minlp),
            Err(ModelError::NoLinearModel(ModelVariant::Minlp))
        );
    }

    #[test]
    fn dfj_cut_sets() {
        // N = 3, depot is node 0.
        let c = dfj_cut(&[true, false, false], 0).unwrap();
        assert_eq!(c.terms, vec![(VarId::X(0, 1), 1.0), (VarId::X(0, 2), 1.0)]);
        assert_eq!((c.sense, c.rhs, c.tag), (Sense::Ge, 1.0, Tag::Dfj));

        let c = dfj_cut(&[true, true, false, false], 0).unwrap();
        let vars: Vec<VarId> = c.terms.iter().map(|t| t.0).collect();
        assert_eq!(vars, vec![VarId::X(0, 2), VarId::X(0, 3), VarId::X(1, 2), VarId::X(1, 3)]);

        assert_eq!(dfj_cut(&[true, true, true], 0), Err(ModelError::BadCutSet));
        assert_eq!(dfj_cut(&[false, true, false], 0), Err(ModelError::BadCutSet));
    }
}
