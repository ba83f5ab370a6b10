use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::atom::Atom;
use super::types::{classify, code, pattern_to_type, patterns, EqualityType, Pos};
use super::FraenkelError;

/// Largest arity of a symbolic predicate.
pub const MAX_ARITY: usize = 8;

/// Index-level predicate: atoms are indices and every index outside
/// `support` behaves as a fresh atom.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct Kernel {
    pub arity: usize,
    pub support: Vec<usize>,
    /// Indexed by type code in base `support.len() + arity`.
    pub accepted: Vec<bool>,
}

impl Kernel {
    pub fn base(&self) -> usize {
        self.support.len() + self.arity
    }

    /// Bit `i` of `mask` decides the `i`-th pattern.
    pub fn from_mask(arity: usize, support: Vec<usize>, pats: &[Vec<usize>], mask: u64) -> Kernel {
        let base = support.len() + arity;
        let mut accepted = vec![false; base.pow(arity as u32)];
        for (i, p) in pats.iter().enumerate() {
            if mask >> i & 1 == 1 {
                accepted[code(p, base)] = true;
            }
        }
        Kernel {
            arity,
            support,
            accepted,
        }
    }

    pub fn type_code(&self, tuple: &[usize]) -> usize {
        let q = self.support.len();
        let base = q + self.arity;
        let mut fresh = [usize::MAX; MAX_ARITY];
        let mut nf = 0;
        let mut c = 0;
        let mut mul = 1;
        for &v in tuple {
            let d = match self.support.iter().position(|&s| s == v) {
                Some(j) => j,
                None => match fresh[..nf].iter().position(|&f| f == v) {
                    Some(k) => q + k,
                    None => {
                        fresh[nf] = v;
                        nf += 1;
                        q + nf - 1
                    }
                },
            };
            c += d * mul;
            mul *= base;
        }
        c
    }

    pub fn denotes(&self, tuple: &[usize]) -> bool {
        self.accepted[self.type_code(tuple)]
    }

    fn max_index(&self) -> usize {
        self.support.iter().copied().max().map_or(0, |m| m + 1)
    }

    /// Same denotation, decided on representatives of every type over the
    /// union of the supports.
    pub fn same_denotation(&self, other: &Kernel) -> bool {
        if self.arity != other.arity {
            return false;
        }
        let mut atoms: Vec<usize> = self.support.iter().chain(&other.support).copied().collect();
        atoms.sort_unstable();
        atoms.dedup();
        let top = self.max_index().max(other.max_index());
        atoms.extend(top..top + self.arity);
        let mut tuple = vec![0; self.arity];
        for_each_tuple(&atoms, &mut tuple, 0, &mut |t| {
            self.denotes(t) == other.denotes(t)
        })
    }

    /// `α^π` where `π` maps the support through `map`.
    pub fn image(&self, map: impl Fn(usize) -> usize) -> Kernel {
        Kernel {
            arity: self.arity,
            support: self.support.iter().map(|&s| map(s)).collect(),
            accepted: self.accepted.clone(),
        }
    }

    /// The same predicate over `support`, assuming `support` supports it.
    pub fn resupport(&self, support: Vec<usize>) -> Kernel {
        let q = support.len();
        let top = self
            .max_index()
            .max(support.iter().copied().max().map_or(0, |m| m + 1));
        let pats = patterns(self.arity, q);
        let base = q + self.arity;
        let mut accepted = vec![false; base.pow(self.arity as u32)];
        for p in &pats {
            let rep: Vec<usize> = p
                .iter()
                .map(|&d| if d < q { support[d] } else { top + d - q })
                .collect();
            accepted[code(p, base)] = self.denotes(&rep);
        }
        Kernel {
            arity: self.arity,
            support,
            accepted,
        }
    }

    /// Whether the swap of support atom `p` with a fresh atom fixes the
    /// predicate, i.e. whether `p` can be dropped from the support.
    pub fn removable(&self, p: usize) -> bool {
        let q = self.max_index() + self.arity;
        let swapped = self.image(|s| if s == p { q } else { s });
        swapped.same_denotation(self)
    }

    pub fn minimal_support(&self) -> Kernel {
        let mut k = self.clone();
        let mut i = 0;
        while i < k.support.len() {
            let p = k.support[i];
            if k.removable(p) {
                let rest: Vec<usize> = k.support.iter().copied().filter(|&s| s != p).collect();
                k = k.resupport(rest);
            } else {
                i += 1;
            }
        }
        k
    }
}

/// Calls `f` on every tuple over `atoms` until it returns false.
pub(crate) fn for_each_tuple(
    atoms: &[usize],
    tuple: &mut [usize],
    i: usize,
    f: &mut impl FnMut(&[usize]) -> bool,
) -> bool {
    if i == tuple.len() {
        return f(tuple);
    }
    for &a in atoms {
        tuple[i] = a;
        if !for_each_tuple(atoms, tuple, i + 1, f) {
            return false;
        }
    }
    true
}

/// A finitely supported predicate on the atoms, given by a support and the
/// accepted equality types relative to it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PredicateDoc", into = "PredicateDoc")]
pub struct SymbolicPredicate {
    arity: u32,
    support: Vec<Atom>,
    accepted: BTreeSet<EqualityType>,
}

/// `{arity, support: [atom names], accepted: [type strings]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredicateDoc {
    pub arity: u32,
    pub support: Vec<String>,
    pub accepted: Vec<String>,
}

impl SymbolicPredicate {
    pub fn new(
        arity: u32,
        support: impl IntoIterator<Item = Atom>,
        accepted: impl IntoIterator<Item = EqualityType>,
    ) -> Result<Self, FraenkelError> {
        if arity == 0 {
            return Err(FraenkelError::ZeroArity);
        }
        if arity as usize > MAX_ARITY {
            return Err(FraenkelError::ArityTooLarge(arity));
        }
        let support: BTreeSet<Atom> = support.into_iter().collect();
        let accepted: BTreeSet<EqualityType> = accepted.into_iter().collect();
        for t in &accepted {
            if t.arity() != arity as usize {
                return Err(FraenkelError::TypeArity {
                    ty: t.to_string(),
                    arity,
                });
            }
            if let Some(a) = t.atoms().find(|a| !support.contains(*a)) {
                return Err(FraenkelError::NotInSupport(a.clone()));
            }
        }
        Ok(SymbolicPredicate {
            arity,
            support: support.into_iter().collect(),
            accepted,
        })
    }

    /// The predicate accepting exactly the types over `support` for which
    /// `keep` holds.
    pub fn from_types(
        arity: u32,
        support: impl IntoIterator<Item = Atom>,
        keep: impl Fn(&EqualityType) -> bool,
    ) -> Self {
        assert!(
            (1..=MAX_ARITY as u32).contains(&arity),
            "arity out of range"
        );
        let support: BTreeSet<Atom> = support.into_iter().collect();
        let support: Vec<Atom> = support.into_iter().collect();
        let accepted = all_types(arity, &support)
            .into_iter()
            .filter(|t| keep(t))
            .collect();
        SymbolicPredicate {
            arity,
            support,
            accepted,
        }
    }

    pub fn empty(arity: u32) -> Self {
        Self::from_types(arity, [], |_| false)
    }

    pub fn full(arity: u32) -> Self {
        Self::from_types(arity, [], |_| true)
    }

    /// The identity relation on atoms.
    pub fn equality() -> Self {
        Self::from_types(2, [], |t| t.0[0] == t.0[1])
    }

    /// `{p}` as a unary predicate.
    pub fn indicator(p: Atom) -> Self {
        Self::from_types(1, [p], |t| matches!(t.0[0], Pos::Atom(_)))
    }

    pub fn arity(&self) -> u32 {
        self.arity
    }

    pub fn support(&self) -> &[Atom] {
        &self.support
    }

    pub fn accepted(&self) -> &BTreeSet<EqualityType> {
        &self.accepted
    }

    pub fn denotes(&self, tuple: &[Atom]) -> bool {
        tuple.len() == self.arity as usize
            && self.accepted.contains(&classify(tuple, &self.support))
    }

    pub(crate) fn kernel(&self, index: &impl Fn(&Atom) -> usize) -> Kernel {
        let n = self.arity as usize;
        let q = self.support.len();
        let base = q + n;
        let mut accepted = vec![false; base.pow(n as u32)];
        for t in &self.accepted {
            let digits: Vec<usize> = t
                .0
                .iter()
                .map(|p| match p {
                    Pos::Atom(a) => self.support.iter().position(|s| s == a).expect("validated"),
                    Pos::Fresh(c) => q + *c as usize - 1,
                })
                .collect();
            accepted[code(&digits, base)] = true;
        }
        Kernel {
            arity: n,
            support: self.support.iter().map(index).collect(),
            accepted,
        }
    }

    pub(crate) fn from_kernel(k: &Kernel, names: &[Atom]) -> Self {
        let support: Vec<Atom> = k.support.iter().map(|&i| names[i].clone()).collect();
        let base = k.base();
        let accepted = patterns(k.arity, support.len())
            .into_iter()
            .filter(|p| k.accepted[code(p, base)])
            .map(|p| pattern_to_type(&p, &support))
            .collect();
        let mut support = support;
        support.sort();
        SymbolicPredicate {
            arity: k.arity as u32,
            support,
            accepted,
        }
    }

    /// Kernels of several predicates over one shared atom index, with the
    /// atom names in index order.
    pub(crate) fn kernels<'a>(
        preds: impl IntoIterator<Item = &'a SymbolicPredicate>,
    ) -> (Vec<Kernel>, Vec<Atom>) {
        let preds: Vec<&SymbolicPredicate> = preds.into_iter().collect();
        let names: Vec<Atom> = preds
            .iter()
            .flat_map(|p| p.support.iter().cloned())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let index = |a: &Atom| names.binary_search(a).expect("collected");
        (preds.iter().map(|p| p.kernel(&index)).collect(), names)
    }

    /// Whether both denote the same predicate.
    pub fn same_denotation(&self, other: &SymbolicPredicate) -> bool {
        let (ks, _) = Self::kernels([self, other]);
        ks[0].same_denotation(&ks[1])
    }

    /// The least support, found by dropping each atom whose swap with a
    /// fresh atom leaves the predicate unchanged.
    pub fn minimal_support(&self) -> Vec<Atom> {
        self.canonical().support
    }

    /// The same predicate over its least support.
    pub fn canonical(&self) -> SymbolicPredicate {
        let (ks, names) = Self::kernels([self]);
        Self::from_kernel(&ks[0].minimal_support(), &names)
    }

    /// The same predicate over a larger support.
    pub fn widen(&self, extra: impl IntoIterator<Item = Atom>) -> SymbolicPredicate {
        let mut names: BTreeSet<Atom> = self.support.iter().cloned().collect();
        names.extend(extra);
        let names: Vec<Atom> = names.into_iter().collect();
        let index = |a: &Atom| names.binary_search(a).expect("collected");
        let k = self.kernel(&index).resupport((0..names.len()).collect());
        Self::from_kernel(&k, &names)
    }

    /// `α^π` with `α^π(ξ) = α(π⁻¹(ξ))`.
    pub fn apply_permutation(&self, pi: &FinitePermutation) -> SymbolicPredicate {
        let rename = |a: &Atom| pi.apply(a);
        let support: Vec<Atom> = {
            let mut s: Vec<Atom> = self.support.iter().map(rename).collect();
            s.sort();
            s
        };
        let accepted = self
            .accepted
            .iter()
            .map(|t| {
                EqualityType(
                    t.0.iter()
                        .map(|p| match p {
                            Pos::Atom(a) => Pos::Atom(rename(a)),
                            f => f.clone(),
                        })
                        .collect(),
                )
            })
            .collect();
        SymbolicPredicate {
            arity: self.arity,
            support,
            accepted,
        }
    }

    /// Unary predicates only: the finite set denoted, or the finite
    /// complement when the denotation is cofinite.
    pub fn finite_or_cofinite(&self) -> Option<(bool, Vec<Atom>)> {
        if self.arity != 1 {
            return None;
        }
        let cofinite = self.accepted.contains(&EqualityType(vec![Pos::Fresh(1)]));
        let listed = self
            .support
            .iter()
            .filter(|a| self.denotes(std::slice::from_ref(a)) != cofinite)
            .cloned()
            .collect();
        Some((cofinite, listed))
    }
}

/// Every canonical type of the given arity over `support`.
pub fn all_types(arity: u32, support: &[Atom]) -> Vec<EqualityType> {
    patterns(arity as usize, support.len())
        .iter()
        .map(|p| pattern_to_type(p, support))
        .collect()
}

impl TryFrom<PredicateDoc> for SymbolicPredicate {
    type Error = FraenkelError;

    fn try_from(d: PredicateDoc) -> Result<Self, Self::Error> {
        let support = d
            .support
            .iter()
            .map(|s| Atom::new(s.as_str()))
            .collect::<Result<Vec<_>, _>>()?;
        let accepted = d
            .accepted
            .iter()
            .map(|s| EqualityType::parse(s))
            .collect::<Result<Vec<_>, _>>()?;
        SymbolicPredicate::new(d.arity, support, accepted)
    }
}

impl From<SymbolicPredicate> for PredicateDoc {
    fn from(p: SymbolicPredicate) -> Self {
        PredicateDoc {
            arity: p.arity,
            support: p.support.iter().map(|a| a.to_string()).collect(),
            accepted: p.accepted.iter().map(|t| t.to_string()).collect(),
        }
    }
}

/// A permutation of the atoms moving only finitely many.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FinitePermutation {
    map: BTreeMap<Atom, Atom>,
}

impl FinitePermutation {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn swap(a: Atom, b: Atom) -> Self {
        Self::from_cycles(vec![vec![a, b]]).expect("two atoms")
    }

    pub fn from_cycles(cycles: Vec<Vec<Atom>>) -> Result<Self, FraenkelError> {
        let mut map = BTreeMap::new();
        let mut seen = BTreeSet::new();
        for c in &cycles {
            for (i, a) in c.iter().enumerate() {
                if !seen.insert(a.clone()) {
                    return Err(FraenkelError::Permutation(format!("{a} repeated")));
                }
                let b = &c[(i + 1) % c.len()];
                if a != b {
                    map.insert(a.clone(), b.clone());
                }
            }
        }
        Ok(FinitePermutation { map })
    }

    /// Cycle notation over atom names, e.g. `(p q)(r s t)`.
    pub fn parse(text: &str) -> Result<Self, FraenkelError> {
        let bad = |m: &str| FraenkelError::Permutation(format!("{text:?}: {m}"));
        let mut cycles = Vec::new();
        let mut rest = text.trim();
        while !rest.is_empty() {
            let inner = rest.strip_prefix('(').ok_or_else(|| bad("expected '('"))?;
            let close = inner.find(')').ok_or_else(|| bad("missing ')'"))?;
            cycles.push(
                inner[..close]
                    .split_whitespace()
                    .map(Atom::new)
                    .collect::<Result<Vec<_>, _>>()?,
            );
            rest = inner[close + 1..].trim_start();
        }
        Self::from_cycles(cycles)
    }

    pub fn apply(&self, a: &Atom) -> Atom {
        self.map.get(a).cloned().unwrap_or_else(|| a.clone())
    }

    pub fn inverse(&self) -> Self {
        FinitePermutation {
            map: self
                .map
                .iter()
                .map(|(a, b)| (b.clone(), a.clone()))
                .collect(),
        }
    }

    /// Atoms moved.
    pub fn moved(&self) -> impl Iterator<Item = &Atom> {
        self.map.keys()
    }

    pub fn fixes_all<'a>(&self, atoms: impl IntoIterator<Item = &'a Atom>) -> bool {
        atoms.into_iter().all(|a| !self.map.contains_key(a))
    }
}
