use serde::{Deserialize, Serialize};

use crate::schemas::OrderKind;

use super::atom::{Atom, AtomSupply};
use super::predicate::{Kernel, SymbolicPredicate};
use super::FraenkelError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrderAxiom {
    Totality,
    Antisymmetry,
    Transitivity,
    Irreflexivity,
    Reflexivity,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderFailure {
    pub axiom: OrderAxiom,
    /// Atoms at which the axiom fails, in argument order.
    pub witness: Vec<Atom>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum OrderVerdict {
    LinearOrder,
    Fails(OrderFailure),
}

impl OrderVerdict {
    pub fn is_linear_order(&self) -> bool {
        matches!(self, OrderVerdict::LinearOrder)
    }
}

/// Decides whether `t` is a linear order of all atoms. The axioms are
/// universal in at most three variables, so the support plus three fresh
/// atoms realise every relevant configuration. Fresh atoms are tried first.
pub fn is_linear_order(
    t: &SymbolicPredicate,
    kind: OrderKind,
) -> Result<OrderVerdict, FraenkelError> {
    if t.arity() != 2 {
        return Err(FraenkelError::NotBinary);
    }
    let names: Vec<Atom> = t.support().to_vec();
    let q = names.len();
    let k = t.kernel(&|a: &Atom| names.binary_search(a).expect("own support"));
    let universe = fresh_first_universe(q);
    Ok(match first_failure(&k, &universe, kind) {
        None => OrderVerdict::LinearOrder,
        Some((axiom, idx)) => {
            let fresh = AtomSupply::avoiding(&names).take(3);
            let witness = idx
                .iter()
                .map(|&i| {
                    if i < q {
                        names[i].clone()
                    } else {
                        fresh[i - q].clone()
                    }
                })
                .collect();
            OrderVerdict::Fails(OrderFailure { axiom, witness })
        }
    })
}

/// Three fresh indices above `q`, then the support indices `0..q`.
pub(crate) fn fresh_first_universe(q: usize) -> Vec<usize> {
    (q..q + 3).chain(0..q).collect()
}

pub(crate) fn first_failure(
    k: &Kernel,
    universe: &[usize],
    kind: OrderKind,
) -> Option<(OrderAxiom, Vec<usize>)> {
    let t = |a: usize, b: usize| k.denotes(&[a, b]);
    let reflexive = kind == OrderKind::Reflexive;
    for &a in universe {
        for &b in universe {
            if (reflexive || a != b) && !t(a, b) && !t(b, a) {
                return Some((OrderAxiom::Totality, vec![a, b]));
            }
        }
    }
    for &a in universe {
        for &b in universe {
            if a != b && t(a, b) && t(b, a) {
                return Some((OrderAxiom::Antisymmetry, vec![a, b]));
            }
        }
    }
    for &a in universe {
        for &b in universe {
            if !t(a, b) {
                continue;
            }
            for &c in universe {
                if t(b, c) && !t(a, c) {
                    return Some((OrderAxiom::Transitivity, vec![a, b, c]));
                }
            }
        }
    }
    for &a in universe {
        if reflexive && !t(a, a) {
            return Some((OrderAxiom::Reflexivity, vec![a]));
        }
        if !reflexive && t(a, a) {
            return Some((OrderAxiom::Irreflexivity, vec![a]));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fraenkel::types::Pos;

    fn at(s: &str) -> Atom {
        Atom::new(s).unwrap()
    }

    #[test]
    fn p_first_then_diagonal_fails_totality_on_fresh_atoms() {
        let p = at("p");
        let t = SymbolicPredicate::from_types(2, [p.clone()], |ty| {
            ty.positions()[0] == Pos::Atom(p.clone()) || ty.positions()[0] == ty.positions()[1]
        });
        let v = is_linear_order(&t, OrderKind::Strict).unwrap();
        let OrderVerdict::Fails(f) = v else {
            panic!("{v:?}")
        };
        assert_eq!(f.axiom, OrderAxiom::Totality);
        assert!(f.witness.iter().all(|a| a.name().starts_with("fresh")));
        assert_ne!(f.witness[0], f.witness[1]);
    }

    #[test]
    fn basic_relations() {
        let fails = |t: &SymbolicPredicate, kind| match is_linear_order(t, kind).unwrap() {
            OrderVerdict::Fails(f) => f.axiom,
            OrderVerdict::LinearOrder => panic!("not an order"),
        };
        assert_eq!(
            fails(&SymbolicPredicate::empty(2), OrderKind::Strict),
            OrderAxiom::Totality
        );
        assert_eq!(
            fails(&SymbolicPredicate::full(2), OrderKind::Strict),
            OrderAxiom::Antisymmetry
        );
        assert_eq!(
            fails(&SymbolicPredicate::equality(), OrderKind::Reflexive),
            OrderAxiom::Totality
        );
        assert!(matches!(
            is_linear_order(&SymbolicPredicate::empty(1), OrderKind::Strict),
            Err(FraenkelError::NotBinary)
        ));
    }

    #[test]
    fn finite_orders_are_detected_on_indices() {
        // a strict order on a three-element universe is accepted by the
        // index-level check
        let pats = crate::fraenkel::types::patterns(2, 3);
        let order = |a: usize, b: usize| a < b;
        let mut mask = 0u64;
        for (i, p) in pats.iter().enumerate() {
            if p.iter().all(|&d| d < 3) && order(p[0], p[1]) {
                mask |= 1 << i;
            }
        }
        let k = Kernel::from_mask(2, vec![0, 1, 2], &pats, mask);
        assert_eq!(first_failure(&k, &[0, 1, 2], OrderKind::Strict), None);
        assert!(first_failure(&k, &fresh_first_universe(3), OrderKind::Strict).is_some());
    }
}
