use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::rc::Rc;

use serde::{Deserialize, Serialize};

use crate::syntax::{derivation, Formula, IndVar, PredVar, Quantifier, Var};

use super::atom::Atom;
use super::predicate::{FinitePermutation, Kernel, PredicateDoc, SymbolicPredicate};
use super::types::patterns;
use super::FraenkelError;

/// Values of free variables: atoms and symbolic predicates.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Binding {
    pub inds: BTreeMap<IndVar, Atom>,
    pub preds: BTreeMap<PredVar, SymbolicPredicate>,
}

/// Serialised binding: variable token to atom name or predicate document.
pub type BindingDoc = BTreeMap<String, BindingValue>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BindingValue {
    Atom(String),
    Pred(PredicateDoc),
}

impl Binding {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_ind(mut self, x: IndVar, a: Atom) -> Self {
        self.inds.insert(x, a);
        self
    }

    pub fn with_pred(mut self, a: PredVar, p: SymbolicPredicate) -> Self {
        self.preds.insert(a, p);
        self
    }

    /// Atoms named by individual values or predicate supports.
    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out: BTreeSet<Atom> = self.inds.values().cloned().collect();
        for p in self.preds.values() {
            out.extend(p.support().iter().cloned());
        }
        out
    }

    pub fn apply_permutation(&self, pi: &FinitePermutation) -> Binding {
        Binding {
            inds: self.inds.iter().map(|(x, a)| (*x, pi.apply(a))).collect(),
            preds: self
                .preds
                .iter()
                .map(|(v, p)| (*v, p.apply_permutation(pi)))
                .collect(),
        }
    }

    pub fn from_doc(doc: &BindingDoc) -> Result<Self, FraenkelError> {
        let mut b = Binding::new();
        for (k, v) in doc {
            let var: Var = k.parse().map_err(FraenkelError::Binding)?;
            match (var, v) {
                (Var::Ind(x), BindingValue::Atom(a)) => {
                    b.inds.insert(x, Atom::new(a.as_str())?);
                }
                (Var::Pred(a), BindingValue::Pred(d)) => {
                    let p = SymbolicPredicate::try_from(d.clone())?;
                    if p.arity() != a.arity {
                        return Err(FraenkelError::SortMismatch(var));
                    }
                    b.preds.insert(a, p);
                }
                _ => return Err(FraenkelError::SortMismatch(var)),
            }
        }
        Ok(b)
    }

    pub fn to_doc(&self) -> BindingDoc {
        let mut doc = BindingDoc::new();
        for (x, a) in &self.inds {
            doc.insert(x.to_string(), BindingValue::Atom(a.to_string()));
        }
        for (v, p) in &self.preds {
            doc.insert(v.to_string(), BindingValue::Pred(p.clone().into()));
        }
        doc
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EvalCaps {
    /// Total symbolic predicates enumerated by predicate quantifiers.
    pub max_predicates: u64,
    /// Largest number of equality types a quantified predicate may range
    /// over (the enumeration is `2^types` per support).
    pub max_types: usize,
    /// Largest working universe of atoms.
    pub max_atoms: usize,
}

impl Default for EvalCaps {
    fn default() -> Self {
        EvalCaps {
            max_predicates: 5_000_000,
            max_types: 24,
            max_atoms: 24,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolicValue {
    pub value: bool,
    /// Set when a predicate quantifier occurs, so that the value is the
    /// truth at `stratum` only.
    pub stratified: bool,
    pub stratum: usize,
    pub enumerated: u64,
}

/// Truth of `f` in the basic Fraenkel model under `binding`, with predicate
/// quantifiers ranging over predicates with a support of at most `strat`
/// atoms.
pub fn symbolic_evaluate(
    f: &Formula,
    binding: &Binding,
    strat: usize,
) -> Result<SymbolicValue, FraenkelError> {
    symbolic_evaluate_with(f, binding, strat, EvalCaps::default())
}

pub fn symbolic_evaluate_with(
    f: &Formula,
    binding: &Binding,
    strat: usize,
    caps: EvalCaps,
) -> Result<SymbolicValue, FraenkelError> {
    derivation(f).map_err(|e| FraenkelError::IllFormed(e.to_string()))?;
    for v in f.free_vars() {
        let bound = match v {
            Var::Ind(x) => binding.inds.contains_key(&x),
            Var::Pred(a) => binding.preds.contains_key(&a),
        };
        if !bound {
            return Err(FraenkelError::Unbound(v));
        }
    }
    for (a, p) in &binding.preds {
        if p.arity() != a.arity {
            return Err(FraenkelError::SortMismatch(Var::Pred(*a)));
        }
    }
    let names: Vec<Atom> = binding.atoms().into_iter().collect();
    let index = |a: &Atom| names.binary_search(a).expect("collected");
    let mut env = Env::default();
    for (x, a) in &binding.inds {
        env.ind.insert(*x, index(a));
    }
    for (v, p) in &binding.preds {
        env.pred.insert(*v, Rc::new(p.kernel(&index)));
    }
    let mut ev = Evaluator::new(strat, caps);
    let value = ev.eval(f, &mut env, names.len())?;
    Ok(SymbolicValue {
        value,
        stratified: f.contains_predicate_quantifier(),
        stratum: strat,
        enumerated: ev.enumerated,
    })
}

#[derive(Default, Clone)]
pub(crate) struct Env {
    pub ind: HashMap<IndVar, usize>,
    pub pred: HashMap<PredVar, Rc<Kernel>>,
}

pub(crate) struct Evaluator {
    strat: usize,
    caps: EvalCaps,
    pub enumerated: u64,
    pats: HashMap<(usize, usize), Rc<Vec<Vec<usize>>>>,
}

impl Evaluator {
    pub fn new(strat: usize, caps: EvalCaps) -> Self {
        Evaluator {
            strat,
            caps,
            enumerated: 0,
            pats: HashMap::new(),
        }
    }

    fn patterns(&mut self, n: usize, q: usize) -> Rc<Vec<Vec<usize>>> {
        self.pats
            .entry((n, q))
            .or_insert_with(|| Rc::new(patterns(n, q)))
            .clone()
    }

    /// `u` is the size of the working universe `0..u`; every index at or
    /// above it stands for an atom not yet mentioned.
    pub fn eval(&mut self, f: &Formula, env: &mut Env, u: usize) -> Result<bool, FraenkelError> {
        if u > self.caps.max_atoms {
            return Err(FraenkelError::CapExceeded {
                what: "atoms in the working universe".into(),
                cap: self.caps.max_atoms as u64,
            });
        }
        Ok(match f {
            Formula::Atom(a, args) => {
                let tuple: Vec<usize> = args.iter().map(|x| env.ind[x]).collect();
                env.pred[a].denotes(&tuple)
            }
            Formula::EqInd(x, y) => env.ind[x] == env.ind[y],
            Formula::EqPred(a, b) => env.pred[a].same_denotation(&env.pred[b]),
            Formula::Not(g) => !self.eval(g, env, u)?,
            Formula::Bin(c, l, r) => {
                let l = self.eval(l, env, u)?;
                // short-circuit where the connective allows
                match (c, l) {
                    (crate::syntax::Connective::And, false) => false,
                    (crate::syntax::Connective::Or, true) => true,
                    (crate::syntax::Connective::Implies, false) => true,
                    _ => c.apply(l, self.eval(r, env, u)?),
                }
            }
            Formula::Quant(q, Var::Ind(x), body) => {
                let want = *q == Quantifier::Ex;
                let saved = env.ind.get(x).copied();
                let mut result = !want;
                for v in 0..=u {
                    env.ind.insert(*x, v);
                    if self.eval(body, env, u.max(v + 1))? == want {
                        result = want;
                        break;
                    }
                }
                restore(&mut env.ind, *x, saved);
                result
            }
            Formula::Quant(q, Var::Pred(a), body) => {
                let want = *q == Quantifier::Ex;
                let saved = env.pred.get(a).cloned();
                let result = self.pred_quant(*a, body, env, u, want)?;
                restore(&mut env.pred, *a, saved);
                result
            }
        })
    }

    fn pred_quant(
        &mut self,
        a: PredVar,
        body: &Formula,
        env: &mut Env,
        u: usize,
        want: bool,
    ) -> Result<bool, FraenkelError> {
        let n = a.arity as usize;
        let s = self.strat;
        if u >= 64 {
            return Err(FraenkelError::CapExceeded {
                what: "atoms in the working universe".into(),
                cap: 63,
            });
        }
        for k_new in 0..=s {
            for old in 0u64..1 << u {
                if old.count_ones() as usize + k_new > s {
                    continue;
                }
                let mut support: Vec<usize> = (0..u).filter(|i| old >> i & 1 == 1).collect();
                support.extend(u..u + k_new);
                let pats = self.patterns(n, support.len());
                if pats.len() > self.caps.max_types || pats.len() >= 64 {
                    return Err(FraenkelError::TooManyTypes {
                        arity: a.arity,
                        support: support.len(),
                        types: pats.len(),
                    });
                }
                for mask in 0u64..1 << pats.len() {
                    self.enumerated += 1;
                    if self.enumerated > self.caps.max_predicates {
                        return Err(FraenkelError::CapExceeded {
                            what: "symbolic predicates enumerated".into(),
                            cap: self.caps.max_predicates,
                        });
                    }
                    let k = Kernel::from_mask(n, support.clone(), &pats, mask);
                    env.pred.insert(a, Rc::new(k));
                    if self.eval(body, env, u + k_new)? == want {
                        return Ok(want);
                    }
                }
            }
        }
        Ok(!want)
    }
}

fn restore<K: std::hash::Hash + Eq, V>(map: &mut HashMap<K, V>, k: K, saved: Option<V>) {
    match saved {
        Some(v) => {
            map.insert(k, v);
        }
        None => {
            map.remove(&k);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse, pv, x};

    fn at(s: &str) -> Atom {
        Atom::new(s).unwrap()
    }

    #[test]
    fn examples() {
        let b = Binding::new().with_pred(pv(0, 1), SymbolicPredicate::indicator(at("p")));
        let r = symbolic_evaluate(&parse("ex x1 . A0^1 x1").unwrap(), &b, 0).unwrap();
        assert!(r.value && !r.stratified);

        let b = Binding::new().with_pred(pv(1, 2), SymbolicPredicate::equality());
        let f = parse("all x1 . all x2 . (A1^2 x1 x2 -> A1^2 x2 x1)").unwrap();
        assert!(symbolic_evaluate(&f, &b, 0).unwrap().value);

        let f = parse("all x1 . ex x2 . ~(x1 = x2)").unwrap();
        assert!(symbolic_evaluate(&f, &Binding::new(), 0).unwrap().value);
        let f = parse("ex x1 . all x2 . x1 = x2").unwrap();
        assert!(!symbolic_evaluate(&f, &Binding::new(), 0).unwrap().value);
    }

    #[test]
    fn stratification() {
        // a singleton needs one support atom
        let f = parse("ex A1^1 . ex x1 . (A1^1 x1 & all x2 . (A1^1 x2 -> x2 = x1))").unwrap();
        let r0 = symbolic_evaluate(&f, &Binding::new(), 0).unwrap();
        assert!(r0.stratified && !r0.value);
        assert!(symbolic_evaluate(&f, &Binding::new(), 1).unwrap().value);
        // no unary predicate separates two fresh atoms at stratum 0
        let g =
            parse("all x1 . all x2 . (~(x1 = x2) -> ex A1^1 . (A1^1 x1 & ~(A1^1 x2)))").unwrap();
        assert!(!symbolic_evaluate(&g, &Binding::new(), 0).unwrap().value);
        assert!(symbolic_evaluate(&g, &Binding::new(), 1).unwrap().value);
    }

    #[test]
    fn equality_of_predicates() {
        let b = Binding::new()
            .with_pred(pv(0, 2), SymbolicPredicate::equality())
            .with_pred(pv(1, 2), SymbolicPredicate::equality().widen([at("p")]));
        assert!(
            symbolic_evaluate(&parse("A0^2 = A1^2").unwrap(), &b, 0)
                .unwrap()
                .value
        );
        let f = parse("ex A2^2 . (A2^2 = A0^2)").unwrap();
        assert!(symbolic_evaluate(&f, &b, 0).unwrap().value);
    }

    #[test]
    fn unbound_and_sorts() {
        let f = parse("A0^1 x1").unwrap();
        assert!(matches!(
            symbolic_evaluate(&f, &Binding::new(), 0),
            Err(FraenkelError::Unbound(_))
        ));
        let b = Binding::new()
            .with_ind(x(1), at("p"))
            .with_pred(pv(0, 1), SymbolicPredicate::equality());
        assert!(matches!(
            symbolic_evaluate(&f, &b, 0),
            Err(FraenkelError::SortMismatch(_))
        ));
    }

    #[test]
    fn doc_round_trip() {
        let b = Binding::new()
            .with_ind(x(1), at("p"))
            .with_pred(pv(0, 1), SymbolicPredicate::indicator(at("q")));
        let json = serde_json::to_string(&b.to_doc()).unwrap();
        let doc: BindingDoc = serde_json::from_str(&json).unwrap();
        assert_eq!(Binding::from_doc(&doc).unwrap(), b);
    }
}
