use std::collections::{BTreeMap, BTreeSet};

use crate::model::{evaluate, Assignment, PredicateStructure, Table};
use crate::syntax::{derivation, Formula, Var};

use super::atom::{Atom, AtomSupply};
use super::eval::Binding;
use super::predicate::{Kernel, MAX_ARITY};
use super::types::patterns;
use super::FraenkelError;

/// A finite predicate structure standing in for the basic Fraenkel model at
/// one stratum: the named atoms plus `fresh` further atoms, with the
/// restrictions of every predicate supported by at most `strat` of them.
#[derive(Clone, Debug)]
pub struct Truncation {
    pub atoms: Vec<Atom>,
    pub fresh: usize,
    pub structure: PredicateStructure,
    pub assignment: Assignment,
}

/// Number of fresh atoms that makes the truncation agree with the symbolic
/// valuation: one per individual quantifier, `strat` per predicate
/// quantifier, and enough to separate types of the largest arity.
pub fn truncation_size(f: &Formula, binding: &Binding, strat: usize) -> usize {
    let arity = binding
        .preds
        .keys()
        .map(|a| a.arity)
        .chain([f.max_arity()])
        .max()
        .unwrap_or(0) as usize;
    f.individual_quantifier_count() + strat * f.predicate_quantifier_count() + arity
}

pub fn truncate(
    f: &Formula,
    binding: &Binding,
    strat: usize,
    cap_tables: usize,
) -> Result<Truncation, FraenkelError> {
    derivation(f).map_err(|e| FraenkelError::IllFormed(e.to_string()))?;
    for v in f.free_vars() {
        let bound = match v {
            Var::Ind(x) => binding.inds.contains_key(&x),
            Var::Pred(a) => binding.preds.get(&a).is_some_and(|p| p.arity() == a.arity),
        };
        if !bound {
            return Err(FraenkelError::Unbound(v));
        }
    }
    let named: Vec<Atom> = binding.atoms().into_iter().collect();
    let fresh = truncation_size(f, binding, strat).max(usize::from(named.is_empty()));
    let mut atoms = named.clone();
    atoms.extend(AtomSupply::avoiding(&named).take(fresh));
    let size = atoms.len();
    let index = |a: &Atom| named.binary_search(a).expect("named");

    let mut quantified = BTreeSet::new();
    let mut mentioned = BTreeSet::new();
    f.visit(&mut |g| {
        if let Formula::Quant(_, Var::Pred(a), _) = g {
            quantified.insert(a.arity);
        }
    });
    for v in f.all_vars() {
        if let Var::Pred(a) = v {
            mentioned.insert(a.arity);
        }
    }

    let restrict = |k: &Kernel| -> Result<Table, FraenkelError> {
        Ok(
            Table::from_fn(k.arity as u32, size as u32, |t| k.denotes(t))
                .map_err(crate::model::ModelError::from)?,
        )
    };

    let mut assignment = Assignment::new();
    for (x, a) in &binding.inds {
        assignment.set_ind(*x, index(a));
    }
    let mut domains: BTreeMap<u32, BTreeSet<Table>> = BTreeMap::new();
    for (a, p) in &binding.preds {
        let t = restrict(&p.kernel(&index))?;
        domains.entry(a.arity).or_default().insert(t.clone());
        assignment.set_pred(*a, t);
    }
    for &n in &quantified {
        let set = domains.entry(n).or_default();
        let nu = n as usize;
        if nu > MAX_ARITY {
            return Err(FraenkelError::ArityTooLarge(n));
        }
        let mut budget = cap_tables;
        for q in 0..=strat.min(size) {
            let pats = patterns(nu, q);
            let per = if pats.len() < 63 {
                1usize << pats.len()
            } else {
                usize::MAX
            };
            let total = binom(size, q).saturating_mul(per);
            if total > budget {
                return Err(FraenkelError::CapExceeded {
                    what: format!("truncated domain of arity {n} over {size} atoms"),
                    cap: cap_tables as u64,
                });
            }
            budget -= total;
            for support in subsets(size, q) {
                for mask in 0..per as u64 {
                    set.insert(restrict(&Kernel::from_mask(
                        nu,
                        support.clone(),
                        &pats,
                        mask,
                    ))?);
                }
            }
        }
    }
    for &n in &mentioned {
        domains.entry(n).or_default();
    }
    let domains: Vec<(u32, Vec<Table>)> = domains
        .into_iter()
        .map(|(n, set)| {
            let mut v: Vec<Table> = set.into_iter().collect();
            if v.is_empty() {
                v.push(Table::empty(n, size as u32).expect("small table"));
            }
            (n, v)
        })
        .collect();
    let labels = atoms.iter().map(|a| a.to_string()).collect();
    let structure = PredicateStructure::new(labels, domains)?;
    Ok(Truncation {
        atoms,
        fresh,
        structure,
        assignment,
    })
}

/// Evaluates `f` in its truncation.
pub fn truncation_evaluate(
    f: &Formula,
    binding: &Binding,
    strat: usize,
    cap_tables: usize,
) -> Result<bool, FraenkelError> {
    let t = truncate(f, binding, strat, cap_tables)?;
    Ok(evaluate(&t.structure, &t.assignment, f)?)
}

fn binom(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Increasing `k`-subsets of `0..n`.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fraenkel::{symbolic_evaluate, SymbolicPredicate};
    use crate::syntax::{parse, pv, x};

    #[test]
    fn sizes() {
        let f = parse("all x1 . ex A1^2 . A1^2 x1 x1").unwrap();
        assert_eq!(truncation_size(&f, &Binding::new(), 2), 1 + 2 + 2);
        assert_eq!(subsets(4, 2).len(), 6);
        assert_eq!(binom(5, 2), 10);
    }

    #[test]
    fn agrees_with_symbolic_on_examples() {
        let p = Atom::new("p").unwrap();
        let b = Binding::new()
            .with_ind(x(1), p.clone())
            .with_pred(pv(0, 1), SymbolicPredicate::indicator(p));
        for (src, strat) in [
            ("ex x2 . (~(x2 = x1) & ~(A0^1 x2))", 0),
            ("ex A1^1 . (A1^1 x1 & ~(A1^1 = A0^1))", 0),
            ("ex A1^1 . (A1^1 x1 & ~(A1^1 = A0^1))", 1),
            (
                "all x2 . ex A1^1 . (A1^1 x2 & all x3 . (A1^1 x3 -> x3 = x2))",
                1,
            ),
            (
                "all x2 . ex A1^1 . (A1^1 x2 & all x3 . (A1^1 x3 -> x3 = x2))",
                0,
            ),
        ] {
            let f = parse(src).unwrap();
            let sym = symbolic_evaluate(&f, &b, strat).unwrap().value;
            assert_eq!(
                truncation_evaluate(&f, &b, strat, 1 << 20).unwrap(),
                sym,
                "{src} at {strat}"
            );
        }
    }
}
