//! The valuation `Σ_f(F)` under Henkin semantics, the definability operator
//! and comprehension checks.

use crate::syntax::{Connective, Formula, IndVar, PredVar, Quantifier, Var};

use super::assignment::Assignment;
use super::structure::PredicateStructure;
use super::table::Table;
use super::ModelError;

#[derive(Debug)]
enum Node {
    Atom(usize, Vec<usize>),
    EqInd(usize, usize),
    EqPred(usize, usize),
    Not(Box<Node>),
    Bin(Connective, Box<Node>, Box<Node>),
    QInd(Quantifier, usize, Box<Node>),
    QPred(Quantifier, usize, u32, Box<Node>),
}

/// A formula with its variables resolved to slots, ready to be evaluated
/// repeatedly over one structure.
#[derive(Debug)]
pub struct Compiled<'s> {
    s: &'s PredicateStructure,
    root: Node,
    ind_vars: Vec<IndVar>,
    pred_vars: Vec<PredVar>,
}

/// Slot values for one evaluation.
#[derive(Clone, Debug)]
pub struct Env<'a> {
    ind: Vec<usize>,
    pred: Vec<&'a Table>,
}

impl<'s> Compiled<'s> {
    pub fn new(s: &'s PredicateStructure, f: &Formula) -> Result<Self, ModelError> {
        let mut ind_vars = Vec::new();
        let mut pred_vars = Vec::new();
        let root = compile(s, f, &mut ind_vars, &mut pred_vars)?;
        Ok(Compiled {
            s,
            root,
            ind_vars,
            pred_vars,
        })
    }

    pub fn ind_slot(&self, x: IndVar) -> Option<usize> {
        self.ind_vars.iter().position(|v| *v == x)
    }

    pub fn pred_slot(&self, a: PredVar) -> Option<usize> {
        self.pred_vars.iter().position(|v| *v == a)
    }

    /// Slot values taken from `f`, with the documented defaults.
    pub fn env<'a>(&self, f: &'a Assignment) -> Result<Env<'a>, ModelError>
    where
        's: 'a,
    {
        f.check_shape(self.s)?;
        let pred = self
            .pred_vars
            .iter()
            .map(|a| {
                f.pred(self.s, *a)
                    .ok_or(ModelError::ArityUnavailable(a.arity))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Env {
            ind: self.ind_vars.iter().map(|x| f.ind(*x)).collect(),
            pred,
        })
    }

    pub fn eval(&self, f: &Assignment) -> Result<bool, ModelError> {
        let mut env = self.env(f)?;
        Ok(self.eval_env(&mut env))
    }

    pub fn eval_env<'a>(&self, env: &mut Env<'a>) -> bool
    where
        's: 'a,
    {
        let k = self.s.size();
        eval_node(self.s, &self.root, env, k)
    }
}

impl<'a> Env<'a> {
    pub fn set_ind(&mut self, slot: usize, v: usize) {
        self.ind[slot] = v;
    }

    pub fn set_pred(&mut self, slot: usize, t: &'a Table) {
        self.pred[slot] = t;
    }
}

fn slot<T: PartialEq + Copy>(vars: &mut Vec<T>, v: T) -> usize {
    match vars.iter().position(|w| *w == v) {
        Some(i) => i,
        None => {
            vars.push(v);
            vars.len() - 1
        }
    }
}

fn compile(
    s: &PredicateStructure,
    f: &Formula,
    inds: &mut Vec<IndVar>,
    preds: &mut Vec<PredVar>,
) -> Result<Node, ModelError> {
    Ok(match f {
        Formula::Atom(a, args) => {
            if args.len() != a.arity as usize {
                return Err(ModelError::IllFormed(format!(
                    "{a} applied to {} arguments",
                    args.len()
                )));
            }
            let p = slot(preds, *a);
            Node::Atom(p, args.iter().map(|x| slot(inds, *x)).collect())
        }
        Formula::EqInd(x, y) => Node::EqInd(slot(inds, *x), slot(inds, *y)),
        Formula::EqPred(a, b) => {
            if a.arity != b.arity {
                return Err(ModelError::IllFormed(format!("{a} = {b}")));
            }
            Node::EqPred(slot(preds, *a), slot(preds, *b))
        }
        Formula::Not(g) => Node::Not(Box::new(compile(s, g, inds, preds)?)),
        Formula::Bin(c, l, r) => Node::Bin(
            *c,
            Box::new(compile(s, l, inds, preds)?),
            Box::new(compile(s, r, inds, preds)?),
        ),
        Formula::Quant(q, Var::Ind(x), body) => {
            let i = slot(inds, *x);
            Node::QInd(*q, i, Box::new(compile(s, body, inds, preds)?))
        }
        Formula::Quant(q, Var::Pred(a), body) => {
            if s.domain(a.arity).is_none() {
                return Err(ModelError::ArityUnavailable(a.arity));
            }
            let i = slot(preds, *a);
            Node::QPred(*q, i, a.arity, Box::new(compile(s, body, inds, preds)?))
        }
    })
}

fn eval_node<'a>(s: &'a PredicateStructure, n: &Node, env: &mut Env<'a>, k: usize) -> bool {
    match n {
        Node::Atom(p, args) => {
            let r = args.iter().fold(0, |acc, &i| acc * k + env.ind[i]);
            env.pred[*p].row(r)
        }
        Node::EqInd(a, b) => env.ind[*a] == env.ind[*b],
        Node::EqPred(a, b) => env.pred[*a] == env.pred[*b],
        Node::Not(g) => !eval_node(s, g, env, k),
        Node::Bin(c, l, r) => {
            let a = eval_node(s, l, env, k);
            match (c, a) {
                (Connective::And, false) => false,
                (Connective::Or, true) => true,
                (Connective::Implies, false) => true,
                _ => c.apply(a, eval_node(s, r, env, k)),
            }
        }
        Node::QInd(q, i, body) => {
            let saved = env.ind[*i];
            let want = *q == Quantifier::Ex;
            let mut result = !want;
            for v in 0..k {
                env.ind[*i] = v;
                if eval_node(s, body, env, k) == want {
                    result = want;
                    break;
                }
            }
            env.ind[*i] = saved;
            result
        }
        Node::QPred(q, i, arity, body) => {
            let saved = env.pred[*i];
            let want = *q == Quantifier::Ex;
            let mut result = !want;
            for t in s.domain(*arity).expect("checked at compile time") {
                env.pred[*i] = t;
                if eval_node(s, body, env, k) == want {
                    result = want;
                    break;
                }
            }
            env.pred[*i] = saved;
            result
        }
    }
}

/// `Σ_f(F)`: individual quantifiers range over `J0`, predicate quantifiers
/// over the structure's `J_n`, and predicate equality is table equality.
pub fn evaluate(
    s: &PredicateStructure,
    f: &Assignment,
    formula: &Formula,
) -> Result<bool, ModelError> {
    Compiled::new(s, formula)?.eval(f)
}

/// A predicate defined by a formula, a list of distinguished variables and
/// an assignment for the remaining free variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefinedPredicate {
    pub table: Table,
    pub formula: Formula,
    pub vars: Vec<IndVar>,
    pub assignment: Assignment,
}

impl DefinedPredicate {
    /// Re-evaluates every row from the provenance.
    pub fn verify(&self, s: &PredicateStructure) -> Result<bool, ModelError> {
        let c = Compiled::new(s, &self.formula)?;
        let mut tuple = vec![0; self.vars.len()];
        for r in 0..self.table.rows() {
            self.table.decode_into(r, &mut tuple);
            let mut g = self.assignment.clone();
            for (x, v) in self.vars.iter().zip(&tuple) {
                g.set_ind(*x, *v);
            }
            if c.eval(&g)? != self.table.row(r) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn check_att_vars(formula: &Formula, xs: &[IndVar]) -> Result<(), ModelError> {
    if xs.is_empty() {
        return Err(ModelError::ZeroArity);
    }
    let bound = formula.bound_vars();
    for (i, x) in xs.iter().enumerate() {
        if xs[..i].contains(x) {
            return Err(ModelError::RepeatedVariable(*x));
        }
        if bound.contains(&Var::Ind(*x)) {
            return Err(ModelError::NotFreeOnly(*x));
        }
    }
    Ok(())
}

/// Table of `ξ ↦ Σ_{f<xs/ξ>}(F)` using an already compiled formula.
pub fn att_table(c: &Compiled<'_>, xs: &[IndVar], f: &Assignment) -> Result<Table, ModelError> {
    let mut env = c.env(f)?;
    let slots: Vec<Option<usize>> = xs.iter().map(|x| c.ind_slot(*x)).collect();
    let k = c.s.size() as u32;
    Ok(Table::from_fn(xs.len() as u32, k, |tuple| {
        for (s, v) in slots.iter().zip(tuple) {
            if let Some(s) = s {
                env.set_ind(*s, *v);
            }
        }
        c.eval_env(&mut env)
    })?)
}

/// `Att_Σ[F; xs; f]`.
pub fn att(
    s: &PredicateStructure,
    formula: &Formula,
    xs: &[IndVar],
    f: &Assignment,
) -> Result<DefinedPredicate, ModelError> {
    check_att_vars(formula, xs)?;
    let c = Compiled::new(s, formula)?;
    Ok(DefinedPredicate {
        table: att_table(&c, xs, f)?,
        formula: formula.clone(),
        vars: xs.to_vec(),
        assignment: f.clone(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Comprehension {
    Holds(Table),
    /// The defined table is missing from `J_n`.
    Counterexample(Table),
}

impl Comprehension {
    pub fn holds(&self) -> bool {
        matches!(self, Comprehension::Holds(_))
    }

    pub fn table(&self) -> &Table {
        match self {
            Comprehension::Holds(t) | Comprehension::Counterexample(t) => t,
        }
    }
}

/// Whether `ex A . all xs . (A xs <-> F)` is true under `f`, i.e. whether
/// the defined table belongs to `J_n`.
pub fn check_comprehension(
    s: &PredicateStructure,
    formula: &Formula,
    xs: &[IndVar],
    f: &Assignment,
) -> Result<Comprehension, ModelError> {
    let n = xs.len() as u32;
    if s.domain(n).is_none() {
        return Err(ModelError::ArityUnavailable(n.max(1)));
    }
    let d = att(s, formula, xs, f)?;
    Ok(if s.contains(&d.table) {
        Comprehension::Holds(d.table)
    } else {
        Comprehension::Counterexample(d.table)
    })
}

/// Which free variables besides the distinguished ones may act as
/// parameters when checking comprehension over all assignments.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParameterPolicy {
    /// Individual and predicate parameters.
    Full,
    /// Predicate parameters only; formulas with a free individual variable
    /// outside the distinguished tuple are rejected.
    PredicatesOnly,
}

/// Every assignment of `vars` into the structure (individuals over `J0`,
/// predicates over `J_n`), in odometer order starting from `base`.
pub fn assignments(
    s: &PredicateStructure,
    vars: &[Var],
    base: &Assignment,
) -> Result<Vec<Assignment>, ModelError> {
    let mut radices = Vec::with_capacity(vars.len());
    for v in vars {
        radices.push(match v {
            Var::Ind(_) => s.size(),
            Var::Pred(a) => s
                .domain(a.arity)
                .ok_or(ModelError::ArityUnavailable(a.arity))?
                .len(),
        });
    }
    let mut out = Vec::new();
    let mut digits = vec![0usize; vars.len()];
    loop {
        let mut f = base.clone();
        for (v, d) in vars.iter().zip(&digits) {
            match v {
                Var::Ind(x) => f.set_ind(*x, *d),
                Var::Pred(a) => f.set_pred(*a, s.domain(a.arity).unwrap()[*d].clone()),
            }
        }
        out.push(f);
        let mut i = 0;
        loop {
            if i == digits.len() {
                return Ok(out);
            }
            digits[i] += 1;
            if digits[i] < radices[i] {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

/// Checks comprehension for `F` under every assignment of its parameters.
/// Returns the first failing assignment with the missing table.
pub fn check_comprehension_all(
    s: &PredicateStructure,
    formula: &Formula,
    xs: &[IndVar],
    policy: ParameterPolicy,
) -> Result<Option<(Assignment, Table)>, ModelError> {
    check_att_vars(formula, xs)?;
    let n = xs.len() as u32;
    if s.domain(n).is_none() {
        return Err(ModelError::ArityUnavailable(n));
    }
    let params: Vec<Var> = formula
        .free_vars()
        .into_iter()
        .filter(|v| !matches!(v, Var::Ind(x) if xs.contains(x)))
        .collect();
    if policy == ParameterPolicy::PredicatesOnly {
        if let Some(Var::Ind(x)) = params.iter().find(|v| matches!(v, Var::Ind(_))) {
            return Err(ModelError::IndividualParameter(*x));
        }
    }
    let c = Compiled::new(s, formula)?;
    for f in assignments(s, &params, &Assignment::new())? {
        let t = att_table(&c, xs, &f)?;
        if !s.contains(&t) {
            return Ok(Some((f, t)));
        }
    }
    Ok(None)
}
