//! Fresh-variable supply, the `ex!!` abbreviation, and capture-safe
//! instantiation of formula templates with one schematic slot.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::wf::derivation;
use super::{Connective, Formula, IndVar, PredVar, Quantifier, Var};

/// Deterministic supply of variables above a watermark.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fresh {
    next_ind: u32,
    next_pred: u32,
}

impl Fresh {
    pub fn above(next_ind: u32, next_pred: u32) -> Self {
        Fresh {
            next_ind,
            next_pred,
        }
    }

    /// A supply whose variables occur in none of `formulas`.
    pub fn avoiding<'a>(formulas: impl IntoIterator<Item = &'a Formula>) -> Self {
        let mut f = Fresh::above(0, 0);
        for g in formulas {
            for v in g.all_vars() {
                f.reserve(v);
            }
        }
        f
    }

    /// Ensures `v` will never be handed out.
    pub fn reserve(&mut self, v: Var) {
        match v {
            Var::Ind(IndVar(i)) => self.next_ind = self.next_ind.max(i + 1),
            Var::Pred(p) => self.next_pred = self.next_pred.max(p.index + 1),
        }
    }

    pub fn ind(&mut self) -> IndVar {
        let v = IndVar(self.next_ind);
        self.next_ind += 1;
        v
    }

    pub fn inds(&mut self, k: usize) -> Vec<IndVar> {
        (0..k).map(|_| self.ind()).collect()
    }

    pub fn pred(&mut self, arity: u32) -> PredVar {
        let v = PredVar::new(self.next_pred, arity);
        self.next_pred += 1;
        v
    }
}

/// Componentwise equality of two tuples; the empty tuple gives `None`.
pub fn tuple_eq(a: &[IndVar], b: &[IndVar]) -> Option<Formula> {
    Formula::conjunction(a.iter().zip(b).map(|(x, y)| Formula::EqInd(*x, *y)))
}

/// `ex!! xs . h`, i.e. `ex xs . h & all xs1 . all xs2 . (h(xs1) & h(xs2) -> xs1 = xs2)`.
/// The variables `xs` must occur only free in `h`; the copies are drawn from
/// `fresh`.
pub fn exists_unique(xs: &[IndVar], h: &Formula, fresh: &mut Fresh) -> Formula {
    let xs1 = fresh.inds(xs.len());
    let xs2 = fresh.inds(xs.len());
    let copy = |to: &[IndVar]| {
        let map: BTreeMap<Var, Var> = xs
            .iter()
            .zip(to)
            .map(|(a, b)| (Var::Ind(*a), Var::Ind(*b)))
            .collect();
        h.rename_all(&|v| map.get(&v).copied().unwrap_or(v))
    };
    let Some(eq) = tuple_eq(&xs1, &xs2) else {
        return h.clone();
    };
    let existence = Formula::quantify(Quantifier::Ex, xs.iter().copied(), h.clone());
    let body = Formula::implies(Formula::and(copy(&xs1), copy(&xs2)), eq);
    let uniqueness = Formula::quantify(Quantifier::All, xs1.iter().chain(&xs2).copied(), body);
    Formula::and(existence, uniqueness)
}

/// What a signature variable of the slot is replaced by.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Substituent {
    Var(Var),
    /// `λ zs . S prefix zs` for a predicate variable of arity `|zs|`, lowered
    /// by β-reduction: atoms `D zs` become `S prefix zs`, and `D = B` becomes
    /// `all ws . (S prefix ws <-> B ws)` with fresh `ws`.
    Lambda {
        pred: PredVar,
        prefix: Vec<IndVar>,
    },
}

/// One occurrence of the slot inside a template, with the substitution to
/// apply to the payload's free signature variables there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlotUse {
    pub subst: Vec<(Var, Substituent)>,
}

impl SlotUse {
    pub fn identity() -> Self {
        SlotUse { subst: Vec::new() }
    }
}

/// A placeholder for a formula whose free variables lie in `signature`,
/// or additionally any parameter variable when `parameters` is set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemaSlot {
    pub name: String,
    pub signature: BTreeSet<Var>,
    pub parameters: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Template {
    /// Slot-free material.
    Leaf(Formula),
    Slot(SlotUse),
    Not(Box<Template>),
    Bin(Connective, Box<Template>, Box<Template>),
    Quant(Quantifier, Var, Box<Template>),
}

impl Template {
    pub fn slot(subst: Vec<(Var, Substituent)>) -> Self {
        Template::Slot(SlotUse { subst })
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(t: Template) -> Self {
        Template::Not(Box::new(t))
    }

    pub fn bin(c: Connective, l: Template, r: Template) -> Self {
        Template::Bin(c, Box::new(l), Box::new(r))
    }

    pub fn quantify<V: Into<Var>>(
        q: Quantifier,
        vars: impl IntoIterator<Item = V>,
        body: Template,
    ) -> Self {
        let vars: Vec<Var> = vars.into_iter().map(Into::into).collect();
        vars.into_iter()
            .rev()
            .fold(body, |acc, v| Template::Quant(q, v, Box::new(acc)))
    }

    fn binders(&self, out: &mut BTreeSet<Var>) {
        match self {
            Template::Leaf(f) => out.extend(f.bound_vars()),
            Template::Slot(_) => {}
            Template::Not(t) => t.binders(out),
            Template::Bin(_, l, r) => {
                l.binders(out);
                r.binders(out);
            }
            Template::Quant(_, v, t) => {
                out.insert(*v);
                t.binders(out);
            }
        }
    }

    fn all_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Template::Leaf(f) => out.extend(f.all_vars()),
            Template::Slot(u) => {
                for (v, s) in &u.subst {
                    out.insert(*v);
                    match s {
                        Substituent::Var(t) => {
                            out.insert(*t);
                        }
                        Substituent::Lambda { pred, prefix } => {
                            out.insert(Var::Pred(*pred));
                            out.extend(prefix.iter().map(|x| Var::Ind(*x)));
                        }
                    }
                }
            }
            Template::Not(t) => t.all_vars(out),
            Template::Bin(_, l, r) => {
                l.all_vars(out);
                r.all_vars(out);
            }
            Template::Quant(_, v, t) => {
                out.insert(*v);
                t.all_vars(out);
            }
        }
    }

    fn rename(&self, map: &BTreeMap<Var, Var>) -> Template {
        let m = |v: Var| map.get(&v).copied().unwrap_or(v);
        match self {
            Template::Leaf(f) => Template::Leaf(f.rename_all(&m)),
            Template::Slot(u) => Template::Slot(SlotUse {
                subst: u
                    .subst
                    .iter()
                    .map(|(v, s)| {
                        let s = match s {
                            Substituent::Var(t) => Substituent::Var(m(*t)),
                            Substituent::Lambda { pred, prefix } => Substituent::Lambda {
                                pred: as_pred(m(Var::Pred(*pred))),
                                prefix: prefix.iter().map(|x| as_ind(m(Var::Ind(*x)))).collect(),
                            },
                        };
                        (*v, s)
                    })
                    .collect(),
            }),
            Template::Not(t) => Template::not(t.rename(map)),
            Template::Bin(c, l, r) => Template::bin(*c, l.rename(map), r.rename(map)),
            Template::Quant(q, v, t) => Template::Quant(*q, m(*v), Box::new(t.rename(map))),
        }
    }
}

fn as_pred(v: Var) -> PredVar {
    match v {
        Var::Pred(p) => p,
        Var::Ind(x) => panic!("expected a predicate variable, got {x}"),
    }
}

fn as_ind(v: Var) -> IndVar {
    match v {
        Var::Ind(x) => x,
        Var::Pred(p) => panic!("expected an individual variable, got {p}"),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Schema {
    pub name: String,
    pub slot: SchemaSlot,
    pub template: Template,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemaError {
    #[error("slot {slot}: free variable {var} is outside the declared signature")]
    Signature { slot: String, var: Var },
    #[error("slot {slot}: signature variable {var} is bound inside the payload")]
    BoundSignature { slot: String, var: Var },
    #[error("slot {slot}: substituting into the payload would capture {var}")]
    Capture { slot: String, var: Var },
    #[error("substituent for {var} has the wrong sort")]
    Sort { var: Var },
    #[error("instantiated formula is not well formed: {0}")]
    IllFormed(String),
}

/// Fills every slot occurrence of `schema` with `h`. Template-bound variables
/// that also occur in `h` (other than the signature variables themselves) are
/// renamed to fresh ones first, so no occurrence in `h` can be captured.
pub fn instantiate_schema(schema: &Schema, h: &Formula) -> Result<Formula, SchemaError> {
    let slot = &schema.slot;
    for v in h.free_vars() {
        if !slot.parameters && !slot.signature.contains(&v) {
            return Err(SchemaError::Signature {
                slot: slot.name.clone(),
                var: v,
            });
        }
    }
    let h_bound = h.bound_vars();
    if let Some(v) = slot.signature.iter().find(|v| h_bound.contains(v)) {
        return Err(SchemaError::BoundSignature {
            slot: slot.name.clone(),
            var: *v,
        });
    }

    let h_vars = h.all_vars();
    let mut fresh = Fresh::avoiding([h]);
    let mut tvars = BTreeSet::new();
    schema.template.all_vars(&mut tvars);
    for v in &tvars {
        fresh.reserve(*v);
    }
    let mut binders = BTreeSet::new();
    schema.template.binders(&mut binders);
    let mut rename = BTreeMap::new();
    for b in binders {
        if h_vars.contains(&b) && !slot.signature.contains(&b) {
            let to = match b {
                Var::Ind(_) => Var::Ind(fresh.ind()),
                Var::Pred(p) => Var::Pred(fresh.pred(p.arity)),
            };
            rename.insert(b, to);
        }
    }
    let template = schema.template.rename(&rename);
    let out = fill(&template, h, slot, &mut fresh)?;
    derivation(&out).map_err(|e| SchemaError::IllFormed(e.to_string()))?;
    Ok(out)
}

fn fill(
    t: &Template,
    h: &Formula,
    slot: &SchemaSlot,
    fresh: &mut Fresh,
) -> Result<Formula, SchemaError> {
    Ok(match t {
        Template::Leaf(f) => f.clone(),
        Template::Slot(u) => substitute(h, u, slot, fresh)?,
        Template::Not(t) => Formula::not(fill(t, h, slot, fresh)?),
        Template::Bin(c, l, r) => {
            Formula::bin(*c, fill(l, h, slot, fresh)?, fill(r, h, slot, fresh)?)
        }
        Template::Quant(q, v, t) => Formula::Quant(*q, *v, Box::new(fill(t, h, slot, fresh)?)),
    })
}

/// Simultaneous substitution for free variables of `h`, which must not be
/// bound in `h` (checked by the caller).
fn substitute(
    h: &Formula,
    u: &SlotUse,
    slot: &SchemaSlot,
    fresh: &mut Fresh,
) -> Result<Formula, SchemaError> {
    let bound = h.bound_vars();
    let capture = |var: Var| SchemaError::Capture {
        slot: slot.name.clone(),
        var,
    };
    let mut map: BTreeMap<Var, &Substituent> = BTreeMap::new();
    for (v, s) in &u.subst {
        match (v, s) {
            (Var::Ind(_), Substituent::Var(Var::Ind(_))) => {}
            (Var::Pred(a), Substituent::Var(Var::Pred(b))) if a.arity == b.arity => {}
            (Var::Pred(a), Substituent::Lambda { pred, prefix })
                if pred.arity as usize == prefix.len() + a.arity as usize => {}
            _ => return Err(SchemaError::Sort { var: *v }),
        }
        match s {
            Substituent::Var(t) if bound.contains(t) => return Err(capture(*t)),
            Substituent::Lambda { pred, prefix } => {
                if bound.contains(&Var::Pred(*pred)) {
                    return Err(capture(Var::Pred(*pred)));
                }
                if let Some(x) = prefix.iter().find(|x| bound.contains(&Var::Ind(**x))) {
                    return Err(capture(Var::Ind(*x)));
                }
            }
            _ => {}
        }
        map.insert(*v, s);
    }
    Ok(apply(h, &map, fresh))
}

fn apply(f: &Formula, map: &BTreeMap<Var, &Substituent>, fresh: &mut Fresh) -> Formula {
    let ind = |x: &IndVar| match map.get(&Var::Ind(*x)) {
        Some(Substituent::Var(Var::Ind(y))) => *y,
        _ => *x,
    };
    let pred_target = |a: &PredVar| map.get(&Var::Pred(*a)).copied();
    match f {
        Formula::Atom(a, args) => {
            let args: Vec<IndVar> = args.iter().map(ind).collect();
            match pred_target(a) {
                Some(Substituent::Var(Var::Pred(b))) => Formula::Atom(*b, args),
                Some(Substituent::Lambda { pred, prefix }) => {
                    Formula::Atom(*pred, prefix.iter().copied().chain(args).collect())
                }
                _ => Formula::Atom(*a, args),
            }
        }
        Formula::EqInd(x, y) => Formula::EqInd(ind(x), ind(y)),
        Formula::EqPred(a, b) => {
            let lambda = |p: &PredVar| match pred_target(p) {
                Some(Substituent::Lambda { pred, prefix }) => Some((*pred, prefix.clone())),
                _ => None,
            };
            let plain = |p: &PredVar| match pred_target(p) {
                Some(Substituent::Var(Var::Pred(q))) => *q,
                _ => *p,
            };
            match (lambda(a), lambda(b)) {
                (None, None) => Formula::EqPred(plain(a), plain(b)),
                (la, lb) => {
                    let ws = fresh.inds(a.arity as usize);
                    let side = |l: Option<(PredVar, Vec<IndVar>)>, p: &PredVar| match l {
                        Some((s, prefix)) => {
                            Formula::Atom(s, prefix.into_iter().chain(ws.iter().copied()).collect())
                        }
                        None => Formula::Atom(plain(p), ws.clone()),
                    };
                    let body = Formula::iff(side(la, a), side(lb, b));
                    Formula::quantify(Quantifier::All, ws.iter().copied(), body)
                }
            }
        }
        Formula::Not(g) => Formula::not(apply(g, map, fresh)),
        Formula::Bin(c, l, r) => {
            let l = apply(l, map, fresh);
            Formula::bin(*c, l, apply(r, map, fresh))
        }
        Formula::Quant(q, v, body) => Formula::Quant(*q, *v, Box::new(apply(body, map, fresh))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse, pv, x};

    fn comprehension_1() -> Schema {
        Schema {
            name: "comprehension".into(),
            slot: SchemaSlot {
                name: "H".into(),
                signature: [Var::Ind(x(1))].into_iter().collect(),
                parameters: true,
            },
            template: Template::Quant(
                Quantifier::Ex,
                Var::Pred(pv(0, 1)),
                Box::new(Template::Quant(
                    Quantifier::All,
                    Var::Ind(x(1)),
                    Box::new(Template::bin(
                        Connective::Iff,
                        Template::Leaf(Formula::atom(pv(0, 1), [x(1)])),
                        Template::slot(vec![]),
                    )),
                )),
            ),
        }
    }

    #[test]
    fn comprehension_instance() {
        let f = instantiate_schema(&comprehension_1(), &parse("x1 = x1").unwrap()).unwrap();
        assert_eq!(f.to_string(), "ex A0^1 . all x1 . (A0^1 x1 <-> x1 = x1)");
    }

    #[test]
    fn clashing_template_binder_is_renamed() {
        let h = parse("ex A0^1 . A0^1 x1").unwrap();
        let f = instantiate_schema(&comprehension_1(), &h).unwrap();
        assert_eq!(
            f.to_string(),
            "ex A1^1 . all x1 . (A1^1 x1 <-> ex A0^1 . A0^1 x1)"
        );
    }

    #[test]
    fn closed_slot_rejects_parameters() {
        let mut s = comprehension_1();
        s.slot.parameters = false;
        let err = instantiate_schema(&s, &parse("x1 = x2").unwrap()).unwrap_err();
        assert_eq!(
            err,
            SchemaError::Signature {
                slot: "H".into(),
                var: Var::Ind(x(2))
            }
        );
    }

    #[test]
    fn bound_signature_variable_rejected() {
        let err = instantiate_schema(&comprehension_1(), &parse("all x1 . x1 = x1").unwrap())
            .unwrap_err();
        assert!(matches!(err, SchemaError::BoundSignature { .. }));
    }

    #[test]
    fn lambda_lowering() {
        let d = pv(1, 1);
        let s = pv(2, 2);
        let schema = Schema {
            name: "t".into(),
            slot: SchemaSlot {
                name: "H".into(),
                signature: [Var::Ind(x(1)), Var::Pred(d)].into_iter().collect(),
                parameters: false,
            },
            template: Template::quantify(
                Quantifier::All,
                [x(1)],
                Template::slot(vec![(
                    Var::Pred(d),
                    Substituent::Lambda {
                        pred: s,
                        prefix: vec![x(1)],
                    },
                )]),
            ),
        };
        let h = parse("A1^1 x1 & ex A3^1 . A3^1 = A1^1").unwrap();
        let f = instantiate_schema(&schema, &h).unwrap();
        assert_eq!(
            f.to_string(),
            "all x1 . (A2^2 x1 x1 & ex A3^1 . all x2 . (A3^1 x2 <-> A2^2 x1 x2))"
        );
    }

    #[test]
    fn exists_unique_over_pairs() {
        let h = parse("A0^2 x1 x2").unwrap();
        let mut fresh = Fresh::avoiding([&h]);
        let f = exists_unique(&[x(1), x(2)], &h, &mut fresh);
        let expected = parse(
            "(ex x1 . ex x2 . A0^2 x1 x2) & all x3 . all x4 . all x5 . all x6 . \
             (A0^2 x3 x4 & A0^2 x5 x6 -> x3 = x5 & x4 = x6)",
        )
        .unwrap();
        assert_eq!(f, expected);
    }
}
