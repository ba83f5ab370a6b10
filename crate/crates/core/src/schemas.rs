//! Constructors for the choice, well-ordering and comprehension families,
//! and an exhaustive checker over finite structures.
//!
//! Variable numbering is fixed so built formulas are byte-stable:
//!
//! | family | variables |
//! |---|---|
//! | `choice`, `choice-h` | `x = x1..xn`, `y = x(n+1)..x(n+m)`, `D = A1^m`, `S = A2^(n+m)` |
//! | `ac`, `ac-star` | as above with `A = A1^n`, `R = A1^(n+m)`, `S = A2^(n+m)`; the second tuple of `ac-star` is `x(n+m+1)..x(2n+m)` |
//! | `choice-star` | `y = x1..xm`, `C = A1^m`, `C1 = A2^m`, `C2 = A3^m`, `D = A4^m` |
//! | `comprehension` | `x = x1..xn`, `A0^n` |
//! | `wo1`, `lo`, `wo` | `T = A1^2`, `A = A1^1`, `x1, x2, x3` |
//!
//! Copies introduced by `ex!!` are numbered above every variable already in
//! use. A template binder that also occurs in `H` is renamed above both.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{assignments, evaluate, Assignment, ModelError, PredicateStructure};
use crate::syntax::{
    exists_unique, instantiate_schema, tuple_eq, x, Connective, Formula, Fresh, IndVar, PredVar,
    Quantifier, Schema, SchemaError, SchemaSlot, Substituent, Template, Var,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Choice,
    ChoiceH,
    Ac,
    AcStar,
    ChoiceStar,
    Comprehension,
    Wo1,
    Lo,
    Wo,
}

impl Family {
    pub const ALL: [Family; 9] = [
        Family::Choice,
        Family::ChoiceH,
        Family::Ac,
        Family::AcStar,
        Family::ChoiceStar,
        Family::Comprehension,
        Family::Wo1,
        Family::Lo,
        Family::Wo,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Choice => "choice",
            Family::ChoiceH => "choice-h",
            Family::Ac => "ac",
            Family::AcStar => "ac-star",
            Family::ChoiceStar => "choice-star",
            Family::Comprehension => "comprehension",
            Family::Wo1 => "wo1",
            Family::Lo => "lo",
            Family::Wo => "wo",
        }
    }

    /// Whether the family takes a formula `H`.
    pub fn has_payload(self) -> bool {
        matches!(
            self,
            Family::Choice | Family::ChoiceH | Family::ChoiceStar | Family::Comprehension
        )
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| format!("unknown schema {s:?}"))
    }
}

/// Reading of `lo(T)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrderKind {
    /// Irreflexive, transitive, total on distinct pairs.
    #[default]
    Strict,
    /// Reflexive, antisymmetric, transitive, total.
    Reflexive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemaId {
    pub family: Family,
    pub n: u32,
    pub m: u32,
    pub payload: Option<Formula>,
    pub order: OrderKind,
}

impl SchemaId {
    fn new(family: Family, n: u32, m: u32, payload: Option<Formula>) -> Self {
        SchemaId {
            family,
            n,
            m,
            payload,
            order: OrderKind::Strict,
        }
    }

    pub fn choice(n: u32, m: u32, h: Formula) -> Self {
        Self::new(Family::Choice, n, m, Some(h))
    }

    pub fn choice_h(n: u32, m: u32, h: Formula) -> Self {
        Self::new(Family::ChoiceH, n, m, Some(h))
    }

    pub fn ac(n: u32, m: u32) -> Self {
        Self::new(Family::Ac, n, m, None)
    }

    pub fn ac_star(n: u32, m: u32) -> Self {
        Self::new(Family::AcStar, n, m, None)
    }

    pub fn choice_star(m: u32, h: Formula) -> Self {
        Self::new(Family::ChoiceStar, 0, m, Some(h))
    }

    pub fn comprehension(n: u32, h: Formula) -> Self {
        Self::new(Family::Comprehension, n, 0, Some(h))
    }

    pub fn wo1() -> Self {
        Self::new(Family::Wo1, 0, 0, None)
    }

    pub fn lo() -> Self {
        Self::new(Family::Lo, 0, 0, None)
    }

    pub fn wo() -> Self {
        Self::new(Family::Wo, 0, 0, None)
    }

    pub fn with_order(mut self, order: OrderKind) -> Self {
        self.order = order;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error("{0} needs a formula H")]
    MissingPayload(Family),
    #[error("{0} takes no formula H")]
    UnexpectedPayload(Family),
    #[error("{family} needs {which} >= 1")]
    ZeroArity { family: Family, which: &'static str },
    #[error("H must not mention {0} free")]
    ReservedFree(PredVar),
    #[error(transparent)]
    Schema(#[from] SchemaError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error("the structure has no domain of arity {0}, which the schema quantifies over")]
    ArityShortfall(u32),
    #[error(transparent)]
    Model(#[from] ModelError),
}

fn inds(from: u32, count: u32) -> Vec<IndVar> {
    (from..from + count).map(x).collect()
}

fn atom(a: PredVar, parts: &[&[IndVar]]) -> Formula {
    Formula::atom(a, parts.iter().flat_map(|p| p.iter().copied()))
}

fn fresh_for(parts: &[&Formula]) -> Fresh {
    Fresh::avoiding(parts.iter().copied())
}

fn quant(q: Quantifier, vars: &[IndVar], body: Formula) -> Formula {
    Formula::quantify(q, vars.iter().copied(), body)
}

/// The formula for `id`.
pub fn build(id: &SchemaId) -> Result<Formula, BuildError> {
    let fam = id.family;
    match (&id.payload, fam.has_payload()) {
        (None, true) => return Err(BuildError::MissingPayload(fam)),
        (Some(_), false) => return Err(BuildError::UnexpectedPayload(fam)),
        _ => {}
    }
    let need = |v: u32, which| {
        if v == 0 {
            Err(BuildError::ZeroArity { family: fam, which })
        } else {
            Ok(())
        }
    };
    match fam {
        Family::Choice | Family::ChoiceH | Family::Ac | Family::AcStar => {
            need(id.n, "n")?;
            need(id.m, "m")?;
        }
        Family::ChoiceStar => need(id.m, "m")?,
        Family::Comprehension => need(id.n, "n")?,
        _ => {}
    }
    let h = id.payload.as_ref();
    Ok(match fam {
        Family::Choice => choice(id.n, id.m, h.unwrap(), false)?,
        Family::ChoiceH => choice(id.n, id.m, h.unwrap(), true)?,
        Family::Ac => ac(id.n, id.m, false),
        Family::AcStar => ac(id.n, id.m, true),
        Family::ChoiceStar => choice_star(id.m, h.unwrap())?,
        Family::Comprehension => comprehension(id.n, h.unwrap())?,
        Family::Lo => lo(id.order),
        Family::Wo => wo(id.order),
        Family::Wo1 => Formula::exists(t_var(), wo(id.order)),
    })
}

fn choice(n: u32, m: u32, h: &Formula, lowered_to_h: bool) -> Result<Formula, BuildError> {
    let xs = inds(1, n);
    let ys = inds(n + 1, m);
    let d = PredVar::new(1, m);
    let s = PredVar::new(2, n + m);
    let mut signature: std::collections::BTreeSet<Var> = xs.iter().map(|v| Var::Ind(*v)).collect();
    signature.insert(Var::Pred(d));
    let slot = SchemaSlot {
        name: "H".into(),
        signature,
        parameters: false,
    };
    let antecedent = Template::quantify(
        Quantifier::All,
        xs.iter().copied(),
        Template::quantify(Quantifier::Ex, [d], Template::slot(Vec::new())),
    );
    let inner = if lowered_to_h {
        let graph = quant(
            Quantifier::All,
            &ys,
            Formula::iff(atom(d, &[&ys]), atom(s, &[&xs, &ys])),
        );
        Template::quantify(
            Quantifier::Ex,
            [d],
            Template::bin(
                Connective::And,
                Template::Leaf(graph),
                Template::slot(Vec::new()),
            ),
        )
    } else {
        Template::slot(vec![(
            Var::Pred(d),
            Substituent::Lambda {
                pred: s,
                prefix: xs.clone(),
            },
        )])
    };
    let consequent = Template::quantify(
        Quantifier::Ex,
        [s],
        Template::quantify(Quantifier::All, xs.iter().copied(), inner),
    );
    let schema = Schema {
        name: if lowered_to_h { "choice-h" } else { "choice" }.into(),
        slot,
        template: Template::bin(Connective::Implies, antecedent, consequent),
    };
    Ok(instantiate_schema(&schema, h)?)
}

fn ac(n: u32, m: u32, star: bool) -> Formula {
    let xs = inds(1, n);
    let ys = inds(n + 1, m);
    let a = PredVar::new(1, n);
    let r = PredVar::new(1, n + m);
    let s = PredVar::new(2, n + m);
    let domain = quant(
        Quantifier::All,
        &xs,
        Formula::iff(
            atom(a, &[&xs]),
            quant(Quantifier::Ex, &ys, atom(r, &[&xs, &ys])),
        ),
    );
    let pick = Formula::and(atom(r, &[&xs, &ys]), atom(s, &[&xs, &ys]));
    let xs2 = inds(n + m + 1, n);
    let mut fresh = fresh_for(&[&pick]);
    fresh.reserve(Var::Ind(x(2 * n + m)));
    let conclusion = quant(
        Quantifier::All,
        &xs,
        Formula::implies(atom(a, &[&xs]), exists_unique(&ys, &pick, &mut fresh)),
    );
    let hypothesis = if star {
        let distinct = Formula::not(tuple_eq(&xs, &xs2).expect("n >= 1"));
        let disjoint = Formula::not(quant(
            Quantifier::Ex,
            &ys,
            Formula::and(atom(r, &[&xs, &ys]), atom(r, &[&xs2, &ys])),
        ));
        let pairwise = quant(
            Quantifier::All,
            &xs,
            quant(
                Quantifier::All,
                &xs2,
                Formula::implies(
                    Formula::and(Formula::and(atom(a, &[&xs]), atom(a, &[&xs2])), distinct),
                    disjoint,
                ),
            ),
        );
        Formula::and(domain, pairwise)
    } else {
        domain
    };
    let body = Formula::exists(s, Formula::implies(hypothesis, conclusion));
    Formula::forall(a, Formula::forall(r, body))
}

fn choice_star(m: u32, h: &Formula) -> Result<Formula, BuildError> {
    let ys = inds(1, m);
    let c = PredVar::new(1, m);
    let c1 = PredVar::new(2, m);
    let c2 = PredVar::new(3, m);
    let d = PredVar::new(4, m);
    let slot = SchemaSlot {
        name: "H".into(),
        signature: [Var::Pred(c)].into(),
        parameters: false,
    };
    let h_of = |p: PredVar| {
        if p == c {
            Template::slot(Vec::new())
        } else {
            Template::slot(vec![(Var::Pred(c), Substituent::Var(Var::Pred(p)))])
        }
    };
    let nonempty = Template::quantify(
        Quantifier::All,
        [c],
        Template::bin(
            Connective::Implies,
            h_of(c),
            Template::Leaf(quant(Quantifier::Ex, &ys, atom(c, &[&ys]))),
        ),
    );
    let disjoint = Template::quantify(
        Quantifier::All,
        [c1, c2],
        Template::bin(
            Connective::Implies,
            Template::bin(
                Connective::And,
                Template::bin(Connective::And, h_of(c1), h_of(c2)),
                Template::Leaf(Formula::not(Formula::EqPred(c1, c2))),
            ),
            Template::Leaf(Formula::not(quant(
                Quantifier::Ex,
                &ys,
                Formula::and(atom(c1, &[&ys]), atom(c2, &[&ys])),
            ))),
        ),
    );
    let pick = Formula::and(atom(c, &[&ys]), atom(d, &[&ys]));
    let mut fresh = fresh_for(&[&pick, h]);
    let selector = Template::quantify(
        Quantifier::Ex,
        [d],
        Template::quantify(
            Quantifier::All,
            [c],
            Template::bin(
                Connective::Implies,
                h_of(c),
                Template::Leaf(exists_unique(&ys, &pick, &mut fresh)),
            ),
        ),
    );
    let schema = Schema {
        name: "choice-star".into(),
        slot,
        template: Template::bin(
            Connective::Implies,
            Template::bin(Connective::And, nonempty, disjoint),
            selector,
        ),
    };
    Ok(instantiate_schema(&schema, h)?)
}

fn comprehension(n: u32, h: &Formula) -> Result<Formula, BuildError> {
    let xs = inds(1, n);
    let a = PredVar::new(0, n);
    if h.free_vars().contains(&Var::Pred(a)) {
        return Err(BuildError::ReservedFree(a));
    }
    let slot = SchemaSlot {
        name: "H".into(),
        signature: xs.iter().map(|v| Var::Ind(*v)).collect(),
        parameters: true,
    };
    let body = Template::quantify(
        Quantifier::All,
        xs.iter().copied(),
        Template::bin(
            Connective::Iff,
            Template::Leaf(atom(a, &[&xs])),
            Template::slot(Vec::new()),
        ),
    );
    let schema = Schema {
        name: "comprehension".into(),
        slot,
        template: Template::quantify(Quantifier::Ex, [a], body),
    };
    Ok(instantiate_schema(&schema, h)?)
}

fn t_var() -> PredVar {
    PredVar::new(1, 2)
}

/// `lo(T)` with `T = A1^2` free.
pub fn lo(kind: OrderKind) -> Formula {
    let t = t_var();
    let (a, b, c) = (x(1), x(2), x(3));
    let r = |u, v| Formula::atom(t, [u, v]);
    let transitive = quant(
        Quantifier::All,
        &[a, b, c],
        Formula::implies(Formula::and(r(a, b), r(b, c)), r(a, c)),
    );
    match kind {
        OrderKind::Strict => Formula::conjunction([
            Formula::forall(a, Formula::not(r(a, a))),
            transitive,
            quant(
                Quantifier::All,
                &[a, b],
                Formula::implies(
                    Formula::not(Formula::EqInd(a, b)),
                    Formula::or(r(a, b), r(b, a)),
                ),
            ),
        ]),
        OrderKind::Reflexive => Formula::conjunction([
            Formula::forall(a, r(a, a)),
            quant(
                Quantifier::All,
                &[a, b],
                Formula::implies(Formula::and(r(a, b), r(b, a)), Formula::EqInd(a, b)),
            ),
            transitive,
            quant(Quantifier::All, &[a, b], Formula::or(r(a, b), r(b, a))),
        ]),
    }
    .expect("nonempty")
}

/// `wo(T)`: `lo(T)` and every nonempty `A` has a least element.
pub fn wo(kind: OrderKind) -> Formula {
    let t = t_var();
    let a = PredVar::new(1, 1);
    let (u, v) = (x(1), x(2));
    let least = Formula::exists(
        u,
        Formula::and(
            Formula::atom(a, [u]),
            Formula::forall(
                v,
                Formula::implies(
                    Formula::atom(a, [v]),
                    Formula::or(Formula::atom(t, [u, v]), Formula::EqInd(u, v)),
                ),
            ),
        ),
    );
    let every = Formula::forall(
        a,
        Formula::implies(Formula::exists(u, Formula::atom(a, [u])), least),
    );
    Formula::and(lo(kind), every)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    /// Values for the free variables and the leading universal quantifiers
    /// under which the formula is false.
    Counterexample(Assignment),
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }
}

/// Evaluates `formula` under every assignment of its free variables. The
/// leading universal quantifiers are opened so that a failure reports their
/// values too.
pub fn check_formula(s: &PredicateStructure, formula: &Formula) -> Result<Verdict, CheckError> {
    let mut arity_missing = None;
    formula.visit(&mut |g| {
        let a = match g {
            Formula::Atom(a, _) => Some(*a),
            Formula::Quant(_, Var::Pred(a), _) => Some(*a),
            _ => None,
        };
        if let Some(a) = a {
            if s.domain(a.arity).is_none() && arity_missing.is_none() {
                arity_missing = Some(a.arity);
            }
        }
    });
    if let Some(n) = arity_missing {
        return Err(CheckError::ArityShortfall(n));
    }
    let mut vars: Vec<Var> = formula.free_vars().into_iter().collect();
    let mut body = formula;
    while let Formula::Quant(Quantifier::All, v, inner) = body {
        vars.push(*v);
        body = inner;
    }
    for f in assignments(s, &vars, &Assignment::new())? {
        if !evaluate(s, &f, body)? {
            return Ok(Verdict::Counterexample(f));
        }
    }
    Ok(Verdict::Holds)
}

/// `check_formula(s, build(id))`.
pub fn check_schema(s: &PredicateStructure, id: &SchemaId) -> Result<Verdict, CheckError> {
    check_formula(s, &build(id)?)
}
