use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::FraenkelError;

/// A named atom. Names match `[a-z][a-z0-9]*`; names of the form `f<k>` are
/// reserved for fresh classes in type strings.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Atom(String);

impl Atom {
    pub fn new(name: impl Into<String>) -> Result<Self, FraenkelError> {
        let name = name.into();
        let mut chars = name.chars();
        let ok = matches!(chars.next(), Some('a'..='z'))
            && chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit());
        if !ok {
            return Err(FraenkelError::AtomName(name));
        }
        if is_fresh_class_label(&name) {
            return Err(FraenkelError::ReservedAtom(name));
        }
        Ok(Atom(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

pub(crate) fn is_fresh_class_label(s: &str) -> bool {
    s.strip_prefix('f')
        .is_some_and(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()))
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for Atom {
    type Err = FraenkelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Atom::new(s)
    }
}

impl TryFrom<String> for Atom {
    type Error = FraenkelError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        Atom::new(s)
    }
}

impl From<Atom> for String {
    fn from(a: Atom) -> String {
        a.0
    }
}

/// Deterministic fresh atoms `fresh1`, `fresh2`, ... skipping names already
/// in use.
#[derive(Clone, Debug, Default)]
pub struct AtomSupply {
    used: BTreeSet<Atom>,
    next: usize,
}

impl AtomSupply {
    pub fn avoiding<'a>(atoms: impl IntoIterator<Item = &'a Atom>) -> Self {
        AtomSupply {
            used: atoms.into_iter().cloned().collect(),
            next: 1,
        }
    }

    pub fn fresh(&mut self) -> Atom {
        loop {
            let a = Atom(format!("fresh{}", self.next));
            self.next += 1;
            if self.used.insert(a.clone()) {
                return a;
            }
        }
    }

    pub fn take(&mut self, k: usize) -> Vec<Atom> {
        (0..k).map(|_| self.fresh()).collect()
    }
}

/// `p1, ..., pk`.
pub fn numbered_atoms(k: usize) -> Vec<Atom> {
    (1..=k).map(|i| Atom(format!("p{i}"))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names() {
        assert!(Atom::new("p").is_ok());
        assert!(Atom::new("a12").is_ok());
        assert!(Atom::new("fresh3").is_ok());
        assert!(Atom::new("f").is_ok());
        assert!(Atom::new("f2").is_err());
        assert!(Atom::new("P").is_err());
        assert!(Atom::new("1a").is_err());
        assert!(Atom::new("").is_err());
    }

    #[test]
    fn supply_skips_used() {
        let used = [Atom::new("fresh1").unwrap()];
        let mut s = AtomSupply::avoiding(&used);
        assert_eq!(
            s.take(2),
            [Atom::new("fresh2").unwrap(), Atom::new("fresh3").unwrap()]
        );
    }
}
