//! The many-sorted second-order language: individual variables of sort 0,
//! predicate variables of sort `n >= 1`, atoms, equalities, connectives and
//! quantifiers over both sorts.

mod parse;
mod print;
mod subst;
mod wf;

use std::collections::BTreeSet;
use std::fmt;

pub use parse::{parse, ParseError};
pub use subst::{
    exists_unique, instantiate_schema, tuple_eq, Fresh, Schema, SchemaError, SchemaSlot, SlotUse,
    Substituent, Template,
};
pub use wf::{derivation, normalize_rename, Derivation, Rule, WellFormednessError};

/// Individual variable `x<index>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndVar(pub u32);

/// Predicate variable `A<index>^<arity>`; variables with the same index but
/// different arities are distinct.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PredVar {
    pub index: u32,
    pub arity: u32,
}

impl PredVar {
    pub fn new(index: u32, arity: u32) -> Self {
        PredVar { index, arity }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    Ind(IndVar),
    Pred(PredVar),
}

impl Var {
    /// Sort of the variable: 0 for individuals, the arity for predicates.
    pub fn sort(&self) -> u32 {
        match self {
            Var::Ind(_) => 0,
            Var::Pred(p) => p.arity,
        }
    }
}

impl From<IndVar> for Var {
    fn from(x: IndVar) -> Self {
        Var::Ind(x)
    }
}

impl From<PredVar> for Var {
    fn from(a: PredVar) -> Self {
        Var::Pred(a)
    }
}

impl fmt::Display for IndVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

impl fmt::Display for PredVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A{}^{}", self.index, self.arity)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::Ind(x) => x.fmt(f),
            Var::Pred(a) => a.fmt(f),
        }
    }
}

impl std::str::FromStr for Var {
    type Err = String;

    /// Parses a single variable token (`x3`, `A1^2`).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || format!("not a variable: {s:?}");
        if let Some(rest) = s.strip_prefix('x') {
            return parse_index(rest)
                .map(|i| Var::Ind(IndVar(i)))
                .ok_or_else(bad);
        }
        if let Some(rest) = s.strip_prefix('A') {
            let (index, arity) = rest.split_once('^').ok_or_else(bad)?;
            let index = parse_index(index).ok_or_else(bad)?;
            let arity = parse_index(arity).ok_or_else(bad)?;
            if arity == 0 {
                return Err(format!("predicate variable {s:?} must have arity >= 1"));
            }
            return Ok(Var::Pred(PredVar::new(index, arity)));
        }
        Err(bad())
    }
}

fn parse_index(s: &str) -> Option<u32> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Connective {
    And,
    Or,
    Implies,
    Iff,
}

impl Connective {
    pub const ALL: [Connective; 4] = [
        Connective::And,
        Connective::Or,
        Connective::Implies,
        Connective::Iff,
    ];

    pub fn apply(self, a: bool, b: bool) -> bool {
        match self {
            Connective::And => a && b,
            Connective::Or => a || b,
            Connective::Implies => !a || b,
            Connective::Iff => a == b,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Connective::And => "&",
            Connective::Or => "|",
            Connective::Implies => "->",
            Connective::Iff => "<->",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Quantifier {
    All,
    Ex,
}

impl Quantifier {
    pub fn keyword(self) -> &'static str {
        match self {
            Quantifier::All => "all",
            Quantifier::Ex => "ex",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    /// `A x1 ... xn`, the application of a predicate variable.
    Atom(PredVar, Vec<IndVar>),
    EqInd(IndVar, IndVar),
    EqPred(PredVar, PredVar),
    Not(Box<Formula>),
    Bin(Connective, Box<Formula>, Box<Formula>),
    Quant(Quantifier, Var, Box<Formula>),
}

impl Formula {
    pub fn atom(a: PredVar, args: impl IntoIterator<Item = IndVar>) -> Self {
        Formula::Atom(a, args.into_iter().collect())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn bin(c: Connective, l: Formula, r: Formula) -> Self {
        Formula::Bin(c, Box::new(l), Box::new(r))
    }

    pub fn and(l: Formula, r: Formula) -> Self {
        Formula::bin(Connective::And, l, r)
    }

    pub fn or(l: Formula, r: Formula) -> Self {
        Formula::bin(Connective::Or, l, r)
    }

    pub fn implies(l: Formula, r: Formula) -> Self {
        Formula::bin(Connective::Implies, l, r)
    }

    pub fn iff(l: Formula, r: Formula) -> Self {
        Formula::bin(Connective::Iff, l, r)
    }

    pub fn forall(v: impl Into<Var>, body: Formula) -> Self {
        Formula::Quant(Quantifier::All, v.into(), Box::new(body))
    }

    pub fn exists(v: impl Into<Var>, body: Formula) -> Self {
        Formula::Quant(Quantifier::Ex, v.into(), Box::new(body))
    }

    /// `Q v1 Q v2 ... body`, outermost first.
    pub fn quantify<V: Into<Var>>(
        q: Quantifier,
        vars: impl IntoIterator<Item = V>,
        body: Formula,
    ) -> Self {
        let vars: Vec<Var> = vars.into_iter().map(Into::into).collect();
        vars.into_iter()
            .rev()
            .fold(body, |acc, v| Formula::Quant(q, v, Box::new(acc)))
    }

    /// Left-nested conjunction; `None` for an empty list.
    pub fn conjunction(parts: impl IntoIterator<Item = Formula>) -> Option<Self> {
        parts.into_iter().reduce(Formula::and)
    }

    /// Atoms have depth 0; every connective or quantifier adds one.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Atom(..) | Formula::EqInd(..) | Formula::EqPred(..) => 0,
            Formula::Not(f) | Formula::Quant(_, _, f) => 1 + f.depth(),
            Formula::Bin(_, l, r) => 1 + l.depth().max(r.depth()),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(..) | Formula::EqInd(..) | Formula::EqPred(..) => 1,
            Formula::Not(f) | Formula::Quant(_, _, f) => 1 + f.size(),
            Formula::Bin(_, l, r) => 1 + l.size() + r.size(),
        }
    }

    /// Variables with at least one free occurrence.
    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        let mut bound = Vec::new();
        self.collect_free(&mut bound, &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
        let mut add = |v: Var, bound: &Vec<Var>| {
            if !bound.contains(&v) {
                out.insert(v);
            }
        };
        match self {
            Formula::Atom(a, args) => {
                add(Var::Pred(*a), bound);
                for x in args {
                    add(Var::Ind(*x), bound);
                }
            }
            Formula::EqInd(x, y) => {
                add(Var::Ind(*x), bound);
                add(Var::Ind(*y), bound);
            }
            Formula::EqPred(a, b) => {
                add(Var::Pred(*a), bound);
                add(Var::Pred(*b), bound);
            }
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::Bin(_, l, r) => {
                l.collect_free(bound, out);
                r.collect_free(bound, out);
            }
            Formula::Quant(_, v, body) => {
                bound.push(*v);
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Variables bound by some quantifier inside the formula.
    pub fn bound_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Quant(_, v, _) = f {
                out.insert(*v);
            }
        });
        out
    }

    /// Every variable occurring anywhere, bound or free.
    pub fn all_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            Formula::Atom(a, args) => {
                out.insert(Var::Pred(*a));
                out.extend(args.iter().map(|x| Var::Ind(*x)));
            }
            Formula::EqInd(x, y) => {
                out.insert(Var::Ind(*x));
                out.insert(Var::Ind(*y));
            }
            Formula::EqPred(a, b) => {
                out.insert(Var::Pred(*a));
                out.insert(Var::Pred(*b));
            }
            Formula::Quant(_, v, _) => {
                out.insert(*v);
            }
            _ => {}
        });
        out
    }

    /// True when `v` is not bound anywhere in the formula, i.e. every
    /// occurrence of `v` (if any) is free.
    pub fn occurs_only_free(&self, v: Var) -> bool {
        !self.bound_vars().contains(&v)
    }

    pub fn contains_predicate_quantifier(&self) -> bool {
        let mut found = false;
        self.visit(&mut |f| {
            if let Formula::Quant(_, Var::Pred(_), _) = f {
                found = true;
            }
        });
        found
    }

    /// Number of quantifier nodes binding individual variables.
    pub fn individual_quantifier_count(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |f| {
            if let Formula::Quant(_, Var::Ind(_), _) = f {
                n += 1;
            }
        });
        n
    }

    pub fn predicate_quantifier_count(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |f| {
            if let Formula::Quant(_, Var::Pred(_), _) = f {
                n += 1;
            }
        });
        n
    }

    /// Largest predicate arity mentioned, 0 when the formula is first-order
    /// in the pure-equality fragment.
    pub fn max_arity(&self) -> u32 {
        self.all_vars().iter().map(Var::sort).max().unwrap_or(0)
    }

    /// Pre-order traversal.
    pub fn visit(&self, f: &mut impl FnMut(&Formula)) {
        f(self);
        match self {
            Formula::Not(g) | Formula::Quant(_, _, g) => g.visit(f),
            Formula::Bin(_, l, r) => {
                l.visit(f);
                r.visit(f);
            }
            _ => {}
        }
    }

    /// Replaces every occurrence (free or bound) of each mapped variable.
    /// Only sound as a substitution when the targets do not occur in `self`.
    pub fn rename_all(&self, map: &dyn Fn(Var) -> Var) -> Formula {
        let ind = |x: &IndVar| match map(Var::Ind(*x)) {
            Var::Ind(y) => y,
            other => panic!("rename maps individual {x} to predicate {other}"),
        };
        let pred = |a: &PredVar| match map(Var::Pred(*a)) {
            Var::Pred(b) if b.arity == a.arity => b,
            other => panic!("rename maps {a} to {other} of a different sort"),
        };
        match self {
            Formula::Atom(a, args) => Formula::Atom(pred(a), args.iter().map(ind).collect()),
            Formula::EqInd(x, y) => Formula::EqInd(ind(x), ind(y)),
            Formula::EqPred(a, b) => Formula::EqPred(pred(a), pred(b)),
            Formula::Not(f) => Formula::not(f.rename_all(map)),
            Formula::Bin(c, l, r) => Formula::bin(*c, l.rename_all(map), r.rename_all(map)),
            Formula::Quant(q, v, body) => {
                Formula::Quant(*q, map(*v), Box::new(body.rename_all(map)))
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        print::write_formula(f, self)
    }
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

/// Canonical printed form; `parse(&print(f)) == Ok(f)` for well-formed `f`.
pub fn print(f: &Formula) -> String {
    f.to_string()
}

/// Shorthand used heavily in tests and schema construction.
pub fn x(i: u32) -> IndVar {
    IndVar(i)
}

pub fn pv(index: u32, arity: u32) -> PredVar {
    PredVar::new(index, arity)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_vars_examples() {
        let f = Formula::EqInd(x(1), x(2));
        assert_eq!(
            f.free_vars(),
            [Var::Ind(x(1)), Var::Ind(x(2))].into_iter().collect()
        );
        let g = Formula::forall(x(1), Formula::EqInd(x(1), x(2)));
        assert_eq!(g.free_vars(), [Var::Ind(x(2))].into_iter().collect());
        let h = Formula::exists(pv(0, 1), Formula::atom(pv(0, 1), [x(3)]));
        assert_eq!(h.free_vars(), [Var::Ind(x(3))].into_iter().collect());
    }

    #[test]
    fn var_tokens() {
        assert_eq!("x12".parse::<Var>(), Ok(Var::Ind(x(12))));
        assert_eq!("A3^2".parse::<Var>(), Ok(Var::Pred(pv(3, 2))));
        assert!("A3^0".parse::<Var>().is_err());
        assert!("A3".parse::<Var>().is_err());
        assert!("y1".parse::<Var>().is_err());
    }

    #[test]
    fn depth_counts_connectives_and_quantifiers() {
        let f: Formula = "ex A0^1 . all x1 . (A0^1 x1 <-> x1 = x1)".parse().unwrap();
        assert_eq!(f.depth(), 3);
        assert_eq!(f.size(), 5);
    }
}
