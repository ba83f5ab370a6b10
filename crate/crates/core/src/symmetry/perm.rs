use std::fmt;

use super::SymmetryError;

/// A bijection of `0..degree`, stored as its image array.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation((0..degree).collect())
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self, SymmetryError> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || std::mem::replace(&mut seen[i], true) {
                return Err(SymmetryError::NotBijection(format!("{images:?}")));
            }
        }
        Ok(Permutation(images))
    }

    /// Product of the given cycles (each a list of points).
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self, SymmetryError> {
        let mut images: Vec<usize> = (0..degree).collect();
        let mut used = vec![false; degree];
        for c in cycles {
            for (j, &p) in c.iter().enumerate() {
                if p >= degree || std::mem::replace(&mut used[p], true) {
                    return Err(SymmetryError::NotBijection(format!("cycles {cycles:?}")));
                }
                images[p] = c[(j + 1) % c.len()];
            }
        }
        Ok(Permutation(images))
    }

    /// Parses cycle notation such as `(1 2)(3 4)` over the given labels;
    /// `()` or an empty string is the identity.
    pub fn parse_cycles(text: &str, labels: &[String]) -> Result<Self, SymmetryError> {
        let bad = |msg: &str| SymmetryError::CycleSyntax(format!("{text:?}: {msg}"));
        let mut cycles = Vec::new();
        let mut rest = text.trim();
        while !rest.is_empty() {
            let inner = rest.strip_prefix('(').ok_or_else(|| bad("expected '('"))?;
            let close = inner.find(')').ok_or_else(|| bad("missing ')'"))?;
            let body = &inner[..close];
            if body.contains('(') {
                return Err(bad("nested '('"));
            }
            let points = body
                .split_whitespace()
                .map(|tok| {
                    labels
                        .iter()
                        .position(|l| l == tok)
                        .ok_or_else(|| bad(&format!("unknown individual {tok:?}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            cycles.push(points);
            rest = inner[close + 1..].trim_start();
        }
        Permutation::from_cycles(labels.len(), &cycles)
    }

    /// Disjoint cycles of length at least two, each starting at its least
    /// point, ordered by that point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for start in 0..self.0.len() {
            if seen[start] || self.0[start] == start {
                continue;
            }
            let mut c = vec![start];
            seen[start] = true;
            let mut p = self.0[start];
            while p != start {
                seen[p] = true;
                c.push(p);
                p = self.0[p];
            }
            out.push(c);
        }
        out
    }

    pub fn to_cycles(&self, labels: &[String]) -> String {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return "()".into();
        }
        cycles
            .iter()
            .map(|c| {
                let names: Vec<&str> = c.iter().map(|&p| labels[p].as_str()).collect();
                format!("({})", names.join(" "))
            })
            .collect()
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Permutation(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn fixes(&self, i: usize) -> bool {
        self.0[i] == i
    }

    pub fn is_even(&self) -> bool {
        self.cycles().iter().map(|c| c.len() - 1).sum::<usize>() % 2 == 0
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = (1..=self.0.len()).map(|i| i.to_string()).collect();
        write!(f, "{}", self.to_cycles(&labels))
    }
}
