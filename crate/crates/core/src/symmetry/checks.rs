use serde::{Deserialize, Serialize};

use crate::model::{att_table, evaluate, Assignment, Compiled, PredicateStructure};
use crate::syntax::{Formula, IndVar, Var};

use super::group::Group;
use super::model::{
    act_on_assignment, is_closed_under, materialize, symmetry_subgroup, PermutationModel,
};
use super::perm::Permutation;
use super::SymmetryError;

/// Outcome of checking valuation invariance and equivariance of `Att` for
/// one permutation, formula and assignment.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivarianceReport {
    pub applicable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub value: bool,
    pub value_permuted: bool,
    /// `Att[F; xs; f]^π` and `Att[F; xs; f^π]` as bitstrings.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub att_image: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub att_permuted: Option<String>,
}

impl EquivarianceReport {
    pub fn valuation_invariant(&self) -> bool {
        self.value == self.value_permuted
    }

    pub fn att_equivariant(&self) -> bool {
        self.att_image == self.att_permuted
    }

    /// Vacuously true when the hypotheses fail.
    pub fn holds(&self) -> bool {
        !self.applicable || (self.valuation_invariant() && self.att_equivariant())
    }
}

/// Compares `Σ_f(F)` with `Σ_{f^π}(F)` and `Att[F; xs; f]^π` with
/// `Att[F; xs; f^π]`. The hypotheses are that every image under `π` of a
/// domain element is again in the domain and that `f` takes values in the
/// domains.
pub fn check_equivariance(
    s: &PredicateStructure,
    p: &Permutation,
    formula: &Formula,
    xs: &[IndVar],
    f: &Assignment,
) -> Result<EquivarianceReport, SymmetryError> {
    if p.degree() != s.size() {
        return Err(SymmetryError::DegreeMismatch {
            expected: s.size(),
            got: p.degree(),
        });
    }
    let f = materialize(s, f, formula.free_vars())?;
    let mut reason = None;
    if !is_closed_under(s, p) {
        reason = Some("the structure is not closed under the permutation".to_string());
    } else if let Err(e) = f.check_membership(s) {
        reason = Some(format!("assignment outside the structure: {e}"));
    }
    let (fp, _) = act_on_assignment(p, &f, s);
    let value = evaluate(s, &f, formula)?;
    let value_permuted = evaluate(s, &fp, formula)?;
    let (att_image, att_permuted) = if xs.is_empty() {
        (None, None)
    } else {
        let c = Compiled::new(s, formula)?;
        let a = att_table(&c, xs, &f)?;
        let b = att_table(&c, xs, &fp)?;
        (
            Some(a.image(p.images()).to_bitstring()),
            Some(b.to_bitstring()),
        )
    };
    Ok(EquivarianceReport {
        applicable: reason.is_none(),
        reason,
        value,
        value_permuted,
        att_image,
        att_permuted,
    })
}

/// Which member of the filter bounds the symmetries of a predicate
/// parameter.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HkChoice {
    /// `sym_G(α_k)` itself, the largest admissible choice.
    #[default]
    SymmetrySubgroup,
    /// The least member of the filter.
    FilterCore,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParameterBound {
    pub var: String,
    pub choice: HkChoice,
    pub order: usize,
}

/// Outcome of checking `sym_G(Att[F; xs; f]) ⊇ G_1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilizerReport {
    pub applicable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub predicate_bounds: Vec<ParameterBound>,
    /// Labels of the individuals named by individual parameters.
    pub support: Vec<String>,
    pub g1_order: usize,
    pub g1_in_filter: bool,
    pub sym_order: usize,
    pub holds: bool,
}

/// Forms `G_1 = H_1 ∩ … ∩ H_r ∩ G(P)` from the parameters of `F` (predicate
/// parameters bounded as `choice` says, `P` the values of the individual
/// parameters) and checks that it fixes the defined table.
pub fn check_stabilizer_bound(
    m: &PermutationModel,
    formula: &Formula,
    xs: &[IndVar],
    f: &Assignment,
    choice: HkChoice,
) -> Result<StabilizerReport, SymmetryError> {
    let s = &m.structure;
    let params: Vec<Var> = formula
        .free_vars()
        .into_iter()
        .filter(|v| !matches!(v, Var::Ind(x) if xs.contains(x)))
        .collect();
    let f = materialize(s, f, params.iter().copied())?;
    let mut reason = f
        .check_membership(s)
        .err()
        .map(|e| format!("assignment outside the structure: {e}"));
    let mut g1: Group = m.group.clone();
    let mut bounds = Vec::new();
    let mut support = Vec::new();
    for v in &params {
        match v {
            Var::Pred(a) => {
                let t = f.explicit_pred(*a).expect("materialised");
                let sym = symmetry_subgroup(&m.group, t);
                let hk = match choice {
                    HkChoice::SymmetrySubgroup => sym,
                    HkChoice::FilterCore => m.filter.core().clone(),
                };
                if !m.filter.contains(&hk) && reason.is_none() {
                    reason = Some(format!("no member of the filter bounds {a}"));
                }
                bounds.push(ParameterBound {
                    var: a.to_string(),
                    choice,
                    order: hk.order(),
                });
                g1 = g1.intersection(&hk);
            }
            Var::Ind(x) => support.push(f.ind(*x)),
        }
    }
    support.sort_unstable();
    support.dedup();
    g1 = g1.intersection(&m.group.pointwise_stabilizer(&support));
    let c = Compiled::new(s, formula)?;
    let t = att_table(&c, xs, &f)?;
    let sym = symmetry_subgroup(&m.group, &t);
    Ok(StabilizerReport {
        applicable: reason.is_none(),
        reason,
        predicate_bounds: bounds,
        support: support
            .iter()
            .map(|&i| s.individuals()[i].clone())
            .collect(),
        g1_order: g1.order(),
        g1_in_filter: m.filter.contains(&g1),
        sym_order: sym.order(),
        holds: g1.is_subgroup_of(&sym),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Table;
    use crate::symmetry::{build_permutation_model, FilterSpec};
    use crate::syntax::{parse, pv, x};

    fn a4() -> PermutationModel {
        build_permutation_model(
            PredicateStructure::numbered(4),
            Group::symmetric(4),
            &FilterSpec::PrincipalNormal(vec![Group::alternating(4)]),
            2,
            1 << 20,
        )
        .unwrap()
    }

    #[test]
    fn equivariance_on_closed_model() {
        let m = a4();
        let h = parse("ex x2 . (A1^2 x1 x2 & ~(x1 = x2))").unwrap();
        let mut f = Assignment::new();
        f.set_pred(pv(1, 2), m.structure.domain(2).unwrap()[1].clone());
        for p in m.group.elements() {
            let r = check_equivariance(&m.structure, p, &h, &[x(1)], &f).unwrap();
            assert!(r.applicable, "{r:?}");
            assert!(r.holds(), "{r:?}");
        }
    }

    #[test]
    fn equivariance_detects_unclosed_structure() {
        let s = PredicateStructure::new(
            PredicateStructure::numbered(2),
            vec![(1, vec![Table::from_bitstring(1, 2, "10").unwrap()])],
        )
        .unwrap();
        let p = Permutation::from_cycles(2, &[vec![0, 1]]).unwrap();
        let h = parse("ex A1^1 . A1^1 x1").unwrap();
        let r = check_equivariance(&s, &p, &h, &[x(1)], &Assignment::new()).unwrap();
        assert!(!r.applicable);
        // the conclusion genuinely fails here: the defined set is {1}, but
        // its image {2} is not what F defines
        assert!(!r.att_equivariant());
    }

    #[test]
    fn stabilizer_bound_with_individual_parameter() {
        let m = a4();
        let h = parse("x1 = x2").unwrap();
        let f = Assignment::new().with_ind(x(2), 2);
        let r = check_stabilizer_bound(&m, &h, &[x(1)], &f, HkChoice::default()).unwrap();
        assert!(r.applicable);
        assert_eq!(r.support, ["3"]);
        assert_eq!(r.g1_order, 6);
        assert!(!r.g1_in_filter);
        assert!(r.holds);
        assert_eq!(r.sym_order, 6);
    }

    #[test]
    fn stabilizer_bound_with_predicate_parameter() {
        let m = a4();
        let h = parse("all x2 . (A0^2 x1 x2 -> x1 = x2)").unwrap();
        let diag = m.structure.domain(2).unwrap()[1].clone();
        let f = Assignment::new().with_pred(pv(0, 2), diag);
        for choice in [HkChoice::SymmetrySubgroup, HkChoice::FilterCore] {
            let r = check_stabilizer_bound(&m, &h, &[x(1)], &f, choice).unwrap();
            assert!(r.applicable && r.holds && r.g1_in_filter, "{r:?}");
        }
    }
}
