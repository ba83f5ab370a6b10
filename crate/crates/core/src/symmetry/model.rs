use crate::model::{row_count, Assignment, ModelError, PredicateStructure, Table};
use crate::par;
use crate::syntax::{PredVar, Var};

use super::filter::{Filter, FilterSpec};
use super::group::Group;
use super::perm::Permutation;
use super::SymmetryError;

/// Largest number of candidate tables scanned per arity.
pub const MAX_ENUMERATED: u64 = 1 << 26;

const CHUNK: u64 = 1 << 12;

/// `α^π`.
pub fn act_on_predicate(p: &Permutation, t: &Table) -> Table {
    t.image(p.images())
}

/// `f^π` on the explicit entries of `f`, together with the predicate
/// variables whose image left the domain of `s`.
pub fn act_on_assignment(
    p: &Permutation,
    f: &Assignment,
    s: &PredicateStructure,
) -> (Assignment, Vec<PredVar>) {
    let mut out = Assignment::new();
    let mut outside = Vec::new();
    for (x, v) in f.ind_entries() {
        out.set_ind(x, p.apply(v));
    }
    for (a, t) in f.pred_entries() {
        let img = act_on_predicate(p, t);
        if !s.contains(&img) {
            outside.push(a);
        }
        out.set_pred(a, img);
    }
    (out, outside)
}

/// Copy of `f` with every variable in `vars` given an explicit value, so
/// that acting on it is well defined.
pub fn materialize(
    s: &PredicateStructure,
    f: &Assignment,
    vars: impl IntoIterator<Item = Var>,
) -> Result<Assignment, ModelError> {
    let mut out = f.clone();
    for v in vars {
        match v {
            Var::Ind(x) => out.set_ind(x, f.ind(x)),
            Var::Pred(a) => {
                let t = f.pred(s, a).ok_or(ModelError::ArityUnavailable(a.arity))?;
                out.set_pred(a, t.clone());
            }
        }
    }
    Ok(out)
}

/// `sym_G(α) = {π ∈ G : α^π = α}`.
pub fn symmetry_subgroup(g: &Group, t: &Table) -> Group {
    g.subgroup_where(|p| act_on_predicate(p, t) == *t)
}

/// Whether every domain of `s` is mapped into itself by `p`.
pub fn is_closed_under(s: &PredicateStructure, p: &Permutation) -> bool {
    s.domains()
        .values()
        .flatten()
        .all(|t| s.contains(&act_on_predicate(p, t)))
}

/// `Σ(I, G, F)` truncated at `max_arity`.
#[derive(Clone, Debug)]
pub struct PermutationModel {
    pub structure: PredicateStructure,
    pub group: Group,
    pub filter: Filter,
}

/// Builds `J_n = {α : sym_G(α) ∈ F}` for `n = 1..=max_arity` by scanning
/// every table over the individuals.
pub fn build_permutation_model(
    labels: Vec<String>,
    group: Group,
    spec: &FilterSpec,
    max_arity: u32,
    cap_tables: usize,
) -> Result<PermutationModel, SymmetryError> {
    let k = labels.len();
    if group.degree() != k {
        return Err(SymmetryError::DegreeMismatch {
            expected: k,
            got: group.degree(),
        });
    }
    let filter = Filter::resolve(spec, &group)?;
    let mut domains = Vec::new();
    for n in 1..=max_arity {
        let total = row_count(k as u32, n)
            .filter(|&r| r < 63)
            .map(|r| 1u64 << r)
            .filter(|&c| c <= MAX_ENUMERATED)
            .ok_or_else(|| ModelError::CapExceeded {
                what: format!("candidate tables of arity {n} over {k} individuals"),
                cap: MAX_ENUMERATED as usize,
            })?;
        let chunks = total.div_ceil(CHUNK) as usize;
        let found: Vec<Vec<Table>> = par::map_range(chunks, |c| {
            let lo = c as u64 * CHUNK;
            let hi = (lo + CHUNK).min(total);
            (lo..hi)
                .map(|code| Table::from_code(n, k as u32, code).expect("bounded rows"))
                .filter(|t| filter.admits(|p| act_on_predicate(p, t) == *t))
                .collect()
        });
        let tables: Vec<Table> = found.into_iter().flatten().collect();
        if tables.len() > cap_tables {
            return Err(ModelError::CapExceeded {
                what: format!("domain J{n}"),
                cap: cap_tables,
            }
            .into());
        }
        domains.push((n, tables));
    }
    Ok(PermutationModel {
        structure: PredicateStructure::new(labels, domains)?,
        group,
        filter,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a4_model(max_arity: u32) -> PermutationModel {
        build_permutation_model(
            PredicateStructure::numbered(4),
            Group::symmetric(4),
            &FilterSpec::PrincipalNormal(vec![Group::alternating(4)]),
            max_arity,
            1 << 20,
        )
        .unwrap()
    }

    #[test]
    fn a4_domains() {
        let m = a4_model(2);
        let j1: Vec<String> = m
            .structure
            .domain(1)
            .unwrap()
            .iter()
            .map(Table::to_bitstring)
            .collect();
        assert_eq!(j1, ["0000", "1111"]);
        // A4 is 2-transitive on ordered pairs of distinct points, so the
        // invariant binary relations are unions of diagonal and off-diagonal.
        assert_eq!(m.structure.domain(2).unwrap().len(), 4);
        for p in m.group.elements() {
            assert!(is_closed_under(&m.structure, p));
        }
    }

    #[test]
    fn fast_membership_matches_definition() {
        let m = a4_model(2);
        for n in 1..=2u32 {
            let rows = row_count(4, n).unwrap();
            for code in (0..1u64 << rows).step_by(97) {
                let t = Table::from_code(n, 4, code).unwrap();
                let literal = m.filter.contains(&symmetry_subgroup(&m.group, &t));
                assert_eq!(literal, m.structure.contains(&t), "{}", t.to_bitstring());
            }
        }
    }

    #[test]
    fn finite_supports_is_standard() {
        let m = build_permutation_model(
            PredicateStructure::numbered(3),
            Group::symmetric(3),
            &FilterSpec::FiniteSupports,
            2,
            1 << 20,
        )
        .unwrap();
        assert!(m.structure.is_standard());
        assert!(m.filter.is_degenerate());
    }

    #[test]
    fn assignment_action() {
        let m = a4_model(2);
        let s = PredicateStructure::standard(PredicateStructure::numbered(4), 1, 16).unwrap();
        let p = Permutation::from_cycles(4, &[vec![0, 1]]).unwrap();
        let mut f = Assignment::new();
        f.set_ind(crate::syntax::x(1), 0);
        f.set_pred(
            crate::syntax::pv(0, 1),
            Table::from_bitstring(1, 4, "1000").unwrap(),
        );
        let (g, outside) = act_on_assignment(&p, &f, &s);
        assert!(outside.is_empty());
        assert_eq!(g.ind(crate::syntax::x(1)), 1);
        assert_eq!(
            g.explicit_pred(crate::syntax::pv(0, 1))
                .unwrap()
                .to_bitstring(),
            "0100"
        );
        let (_, outside) = act_on_assignment(&p, &f, &m.structure);
        assert_eq!(outside, vec![crate::syntax::pv(0, 1)]);
    }
}
