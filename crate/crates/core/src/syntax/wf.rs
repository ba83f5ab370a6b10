//! Well-formedness as a derivation: an AST is a formula exactly when a tree
//! of formation rules (atomic, connective, quantifier over an individual,
//! quantifier over a predicate) builds it.

use std::collections::BTreeSet;

use thiserror::Error;

use super::subst::Fresh;
use super::{Connective, Formula, IndVar, PredVar, Quantifier, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WellFormednessError {
    #[error("{pred} applied to {got} arguments")]
    Arity { pred: PredVar, got: usize },
    #[error("predicate variable {0} has arity 0")]
    ZeroArity(PredVar),
    #[error("equality between {0} and {1} of different arities")]
    MixedEquality(PredVar, PredVar),
    #[error("{0} is quantified but does not occur only free in the body")]
    Rebinding(Var),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rule {
    Atomic,
    Negation,
    Binary(Connective),
    IndividualQuantifier(Quantifier),
    PredicateQuantifier(Quantifier),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub rule: Rule,
    pub premises: Vec<Derivation>,
}

impl Derivation {
    /// Rebuilds the conclusion from the rule tree and the leaves of `f`;
    /// used to confirm that the derivation really produces `f`.
    pub fn conclusion_matches(&self, f: &Formula) -> bool {
        match (self.rule, f) {
            (Rule::Atomic, Formula::Atom(..) | Formula::EqInd(..) | Formula::EqPred(..)) => {
                self.premises.is_empty()
            }
            (Rule::Negation, Formula::Not(g)) => {
                self.premises.len() == 1 && self.premises[0].conclusion_matches(g)
            }
            (Rule::Binary(c), Formula::Bin(d, l, r)) => {
                c == *d
                    && self.premises.len() == 2
                    && self.premises[0].conclusion_matches(l)
                    && self.premises[1].conclusion_matches(r)
            }
            (Rule::IndividualQuantifier(q), Formula::Quant(p, v @ Var::Ind(_), g))
            | (Rule::PredicateQuantifier(q), Formula::Quant(p, v @ Var::Pred(_), g)) => {
                q == *p
                    && self.premises.len() == 1
                    && self.premises[0].conclusion_matches(g)
                    && g.occurs_only_free(*v)
            }
            _ => false,
        }
    }

    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(Derivation::size).sum::<usize>()
    }
}

/// Reconstructs the formation derivation of `f`, or reports the first rule
/// that cannot apply.
pub fn derivation(f: &Formula) -> Result<Derivation, WellFormednessError> {
    let leaf = Derivation {
        rule: Rule::Atomic,
        premises: Vec::new(),
    };
    match f {
        Formula::Atom(a, args) => {
            if a.arity == 0 {
                return Err(WellFormednessError::ZeroArity(*a));
            }
            if args.len() != a.arity as usize {
                return Err(WellFormednessError::Arity {
                    pred: *a,
                    got: args.len(),
                });
            }
            Ok(leaf)
        }
        Formula::EqInd(..) => Ok(leaf),
        Formula::EqPred(a, b) => {
            if a.arity == 0 {
                return Err(WellFormednessError::ZeroArity(*a));
            }
            if a.arity != b.arity {
                return Err(WellFormednessError::MixedEquality(*a, *b));
            }
            Ok(leaf)
        }
        Formula::Not(g) => Ok(Derivation {
            rule: Rule::Negation,
            premises: vec![derivation(g)?],
        }),
        Formula::Bin(c, l, r) => Ok(Derivation {
            rule: Rule::Binary(*c),
            premises: vec![derivation(l)?, derivation(r)?],
        }),
        Formula::Quant(q, v, body) => {
            let inner = derivation(body)?;
            if let Var::Pred(p) = v {
                if p.arity == 0 {
                    return Err(WellFormednessError::ZeroArity(*p));
                }
            }
            if !body.occurs_only_free(*v) {
                return Err(WellFormednessError::Rebinding(*v));
            }
            let rule = match v {
                Var::Ind(_) => Rule::IndividualQuantifier(*q),
                Var::Pred(_) => Rule::PredicateQuantifier(*q),
            };
            Ok(Derivation {
                rule,
                premises: vec![inner],
            })
        }
    }
}

/// Alpha-renames quantifiers that rebind a variable already bound by an
/// enclosing quantifier, producing a well-formed formula with the same
/// meaning. Well-formed input is returned unchanged.
pub fn normalize_rename(f: &Formula) -> Formula {
    let mut fresh = Fresh::avoiding([f]);
    let mut enclosing = BTreeSet::new();
    go(f, &mut enclosing, &mut fresh)
}

fn go(f: &Formula, enclosing: &mut BTreeSet<Var>, fresh: &mut Fresh) -> Formula {
    match f {
        Formula::Not(g) => Formula::not(go(g, enclosing, fresh)),
        Formula::Bin(c, l, r) => {
            let l = go(l, enclosing, fresh);
            Formula::bin(*c, l, go(r, enclosing, fresh))
        }
        Formula::Quant(q, v, body) => {
            let (v2, body) = if enclosing.contains(v) {
                let to = match v {
                    Var::Ind(_) => Var::Ind(fresh.ind()),
                    Var::Pred(p) => Var::Pred(fresh.pred(p.arity)),
                };
                (to, rename_free(body, *v, to))
            } else {
                (*v, (**body).clone())
            };
            let inserted = enclosing.insert(v2);
            let out = Formula::Quant(*q, v2, Box::new(go(&body, enclosing, fresh)));
            if inserted {
                enclosing.remove(&v2);
            }
            out
        }
        leaf => leaf.clone(),
    }
}

/// Replaces the free occurrences of `from` by `to`; `to` must not be bound in `f`.
pub(crate) fn rename_free(f: &Formula, from: Var, to: Var) -> Formula {
    let ind = |x: &IndVar| match (from, to) {
        (Var::Ind(a), Var::Ind(b)) if a == *x => b,
        _ => *x,
    };
    let pred = |p: &PredVar| match (from, to) {
        (Var::Pred(a), Var::Pred(b)) if a == *p => b,
        _ => *p,
    };
    match f {
        Formula::Atom(a, args) => Formula::Atom(pred(a), args.iter().map(ind).collect()),
        Formula::EqInd(x, y) => Formula::EqInd(ind(x), ind(y)),
        Formula::EqPred(a, b) => Formula::EqPred(pred(a), pred(b)),
        Formula::Not(g) => Formula::not(rename_free(g, from, to)),
        Formula::Bin(c, l, r) => {
            Formula::bin(*c, rename_free(l, from, to), rename_free(r, from, to))
        }
        Formula::Quant(q, v, body) if *v == from => Formula::Quant(*q, *v, body.clone()),
        Formula::Quant(q, v, body) => Formula::Quant(*q, *v, Box::new(rename_free(body, from, to))),
    }
}
