//! Equality types of tuples relative to a finite support.

use std::fmt;

use super::atom::{is_fresh_class_label, Atom};
use super::FraenkelError;

/// One argument position of an equality type.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Pos {
    /// Fresh class, numbered from 1 in order of first occurrence.
    Fresh(u32),
    Atom(Atom),
}

/// The orbit of a tuple under the permutations fixing a support pointwise.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct EqualityType(pub(crate) Vec<Pos>);

impl EqualityType {
    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn positions(&self) -> &[Pos] {
        &self.0
    }

    fn is_canonical(&self) -> bool {
        let mut next = 1;
        for p in &self.0 {
            if let Pos::Fresh(c) = p {
                if *c > next {
                    return false;
                }
                if *c == next {
                    next += 1;
                }
            }
        }
        true
    }

    /// Atoms referenced by the type.
    pub fn atoms(&self) -> impl Iterator<Item = &Atom> {
        self.0.iter().filter_map(|p| match p {
            Pos::Atom(a) => Some(a),
            Pos::Fresh(_) => None,
        })
    }

    /// Parses `p,f1,f2`; the result must be canonical.
    pub fn parse(s: &str) -> Result<Self, FraenkelError> {
        let bad = || FraenkelError::TypeString(s.to_string());
        let mut out = Vec::new();
        for part in s.split(',') {
            let part = part.trim();
            if is_fresh_class_label(part) {
                let c: u32 = part[1..].parse().map_err(|_| bad())?;
                if c == 0 {
                    return Err(bad());
                }
                out.push(Pos::Fresh(c));
            } else {
                out.push(Pos::Atom(Atom::new(part).map_err(|_| bad())?));
            }
        }
        let t = EqualityType(out);
        if !t.is_canonical() {
            return Err(bad());
        }
        Ok(t)
    }
}

impl fmt::Display for EqualityType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            match p {
                Pos::Atom(a) => write!(f, "{a}")?,
                Pos::Fresh(c) => write!(f, "f{c}")?,
            }
        }
        Ok(())
    }
}

/// The equality type of `tuple` relative to `support`.
pub fn classify(tuple: &[Atom], support: &[Atom]) -> EqualityType {
    let mut fresh: Vec<&Atom> = Vec::new();
    EqualityType(
        tuple
            .iter()
            .map(|a| {
                if support.contains(a) {
                    Pos::Atom(a.clone())
                } else if let Some(i) = fresh.iter().position(|b| *b == a) {
                    Pos::Fresh(i as u32 + 1)
                } else {
                    fresh.push(a);
                    Pos::Fresh(fresh.len() as u32)
                }
            })
            .collect(),
    )
}

/// Digit patterns of every canonical type of arity `n` over a support of
/// size `q`: digit `j < q` is the `j`-th support atom, digit `q + c` the
/// fresh class `c` (from 0). Sorted by code.
pub fn patterns(n: usize, q: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, q: usize, cur: &mut Vec<usize>, classes: usize, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for d in 0..q + classes + 1 {
            cur.push(d);
            let grown = if d == q + classes {
                classes + 1
            } else {
                classes
            };
            go(n, q, cur, grown, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, q, &mut Vec::new(), 0, &mut out);
    out.sort_by_key(|p| code(p, q + n));
    out
}

/// Number of canonical types of arity `n` over a support of size `q`.
pub fn type_count(n: usize, q: usize) -> usize {
    patterns(n, q).len()
}

pub(crate) fn code(digits: &[usize], base: usize) -> usize {
    digits.iter().rev().fold(0, |acc, d| acc * base + d)
}

pub(crate) fn pattern_to_type(pattern: &[usize], support: &[Atom]) -> EqualityType {
    let q = support.len();
    EqualityType(
        pattern
            .iter()
            .map(|&d| {
                if d < q {
                    Pos::Atom(support[d].clone())
                } else {
                    Pos::Fresh((d - q) as u32 + 1)
                }
            })
            .collect(),
    )
}
