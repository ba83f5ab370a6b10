//! Shared test helpers: an independent naive evaluator and random inputs.
#![allow(dead_code)]

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::Rng;

use henkin::fraenkel::{Atom, Binding, SymbolicPredicate};
use henkin::model::{Assignment, PredicateStructure, Table};
use henkin::syntax::{Connective, Formula, IndVar, PredVar, Quantifier, Var};

/// Tables as bitstrings in row-major lexicographic tuple order.
struct Naive<'a> {
    k: usize,
    labels: &'a [String],
    domains: HashMap<u32, Vec<String>>,
}

fn row_index(k: usize, tuple: &[usize]) -> usize {
    let mut r = 0;
    for &t in tuple {
        r = r * k + t;
    }
    r
}

impl Naive<'_> {
    fn eval(
        &self,
        f: &Formula,
        ind: &mut HashMap<IndVar, usize>,
        pred: &mut HashMap<PredVar, String>,
    ) -> bool {
        match f {
            Formula::Atom(a, args) => {
                let tuple: Vec<usize> = args.iter().map(|x| *ind.get(x).unwrap_or(&0)).collect();
                let bits = pred
                    .get(a)
                    .cloned()
                    .unwrap_or_else(|| self.domains[&a.arity][0].clone());
                bits.as_bytes()[row_index(self.k, &tuple)] == b'1'
            }
            Formula::EqInd(a, b) => ind.get(a).unwrap_or(&0) == ind.get(b).unwrap_or(&0),
            Formula::EqPred(a, b) => {
                let least = |v: &PredVar| self.domains[&v.arity][0].clone();
                let l = pred.get(a).cloned().unwrap_or_else(|| least(a));
                let r = pred.get(b).cloned().unwrap_or_else(|| least(b));
                l == r
            }
            Formula::Not(g) => !self.eval(g, ind, pred),
            Formula::Bin(c, l, r) => {
                let l = self.eval(l, ind, pred);
                let r = self.eval(r, ind, pred);
                match c {
                    Connective::And => l && r,
                    Connective::Or => l || r,
                    Connective::Implies => !l || r,
                    Connective::Iff => l == r,
                }
            }
            Formula::Quant(q, Var::Ind(x), body) => {
                let saved = ind.get(x).copied();
                let mut values = Vec::new();
                for v in 0..self.labels.len() {
                    ind.insert(*x, v);
                    values.push(self.eval(body, ind, pred));
                }
                match saved {
                    Some(v) => ind.insert(*x, v),
                    None => ind.remove(x),
                };
                match q {
                    Quantifier::All => values.iter().all(|b| *b),
                    Quantifier::Ex => values.iter().any(|b| *b),
                }
            }
            Formula::Quant(q, Var::Pred(a), body) => {
                let saved = pred.get(a).cloned();
                let mut values = Vec::new();
                for t in &self.domains[&a.arity] {
                    pred.insert(*a, t.clone());
                    values.push(self.eval(body, ind, pred));
                }
                match saved {
                    Some(t) => pred.insert(*a, t),
                    None => pred.remove(a),
                };
                match q {
                    Quantifier::All => values.iter().all(|b| *b),
                    Quantifier::Ex => values.iter().any(|b| *b),
                }
            }
        }
    }
}

/// Evaluates by direct recursion over the definitions, with no compilation,
/// short-circuiting or shared code with the library evaluator.
pub fn naive_eval(s: &PredicateStructure, f: &Assignment, formula: &Formula) -> bool {
    let naive = Naive {
        k: s.size(),
        labels: s.individuals(),
        domains: s
            .domains()
            .iter()
            .map(|(n, d)| (*n, d.iter().map(Table::to_bitstring).collect()))
            .collect(),
    };
    let mut ind: HashMap<IndVar, usize> = f.ind_entries().collect();
    let mut pred: HashMap<PredVar, String> = f
        .pred_entries()
        .map(|(a, t)| (a, t.to_bitstring()))
        .collect();
    naive.eval(formula, &mut ind, &mut pred)
}

fn random_bits(rng: &mut impl Rng, len: usize) -> String {
    (0..len)
        .map(|_| if rng.gen_bool(0.5) { '1' } else { '0' })
        .collect()
}

/// A structure over `k` individuals with 1 to 4 random tables per arity.
pub fn random_structure(rng: &mut impl Rng, k: usize, max_arity: u32) -> PredicateStructure {
    let labels = PredicateStructure::numbered(k);
    let mut domains = Vec::new();
    for n in 1..=max_arity {
        let rows = k.pow(n);
        let count = rng.gen_range(1..=4);
        let tables = (0..count)
            .map(|_| Table::from_bitstring(n, k as u32, &random_bits(rng, rows)).unwrap())
            .collect();
        domains.push((n, tables));
    }
    PredicateStructure::new(labels, domains).unwrap()
}

/// Values for the free variables of `formula` drawn from the structure.
pub fn random_assignment(
    rng: &mut impl Rng,
    s: &PredicateStructure,
    formula: &Formula,
) -> Assignment {
    let mut f = Assignment::new();
    for v in formula.free_vars() {
        match v {
            Var::Ind(x) => f.set_ind(x, rng.gen_range(0..s.size())),
            Var::Pred(a) => f.set_pred(a, s.domain(a.arity).unwrap().choose(rng).unwrap().clone()),
        }
    }
    f
}

pub fn atom(name: &str) -> Atom {
    Atom::new(name).unwrap()
}

/// A random symbolic predicate with support drawn from `pool`.
pub fn random_symbolic(rng: &mut impl Rng, arity: u32, pool: &[Atom]) -> SymbolicPredicate {
    let support: Vec<Atom> = pool.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
    let types = henkin::fraenkel::all_types(arity, &support);
    let keep: Vec<_> = types.into_iter().filter(|_| rng.gen_bool(0.5)).collect();
    SymbolicPredicate::new(arity, support, keep).unwrap()
}

/// Values for the free variables of `formula`: atoms and predicates over
/// the pool.
pub fn random_binding(rng: &mut impl Rng, formula: &Formula, pool: &[Atom]) -> Binding {
    let mut b = Binding::new();
    for v in formula.free_vars() {
        match v {
            Var::Ind(x) => {
                b.inds.insert(x, pool.choose(rng).unwrap().clone());
            }
            Var::Pred(a) => {
                b.preds.insert(a, random_symbolic(rng, a.arity, pool));
            }
        }
    }
    b
}
