use std::collections::BTreeSet;

use super::perm::Permutation;
use super::SymmetryError;

/// Default cap on materialised group orders.
pub const DEFAULT_MAX_ORDER: usize = 10_000;

/// A finite permutation group, materialised as a sorted element list.
/// Equality compares elements, not generators.
#[derive(Clone, Debug)]
pub struct Group {
    degree: usize,
    generators: Vec<Permutation>,
    elements: Vec<Permutation>,
}

impl PartialEq for Group {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.elements == other.elements
    }
}

impl Eq for Group {}

impl Group {
    /// Closure of `generators` under composition.
    pub fn generate(
        degree: usize,
        generators: Vec<Permutation>,
        max_order: usize,
    ) -> Result<Self, SymmetryError> {
        for g in &generators {
            if g.degree() != degree {
                return Err(SymmetryError::DegreeMismatch {
                    expected: degree,
                    got: g.degree(),
                });
            }
        }
        let mut seen: BTreeSet<Permutation> = BTreeSet::new();
        let id = Permutation::identity(degree);
        seen.insert(id.clone());
        let mut frontier = vec![id];
        while let Some(e) = frontier.pop() {
            for g in &generators {
                let h = g.compose(&e);
                if seen.insert(h.clone()) {
                    if seen.len() > max_order {
                        return Err(SymmetryError::OrderCap(max_order));
                    }
                    frontier.push(h);
                }
            }
        }
        Ok(Group {
            degree,
            generators,
            elements: seen.into_iter().collect(),
        })
    }

    fn from_sorted(degree: usize, elements: Vec<Permutation>) -> Self {
        let generators = greedy_generators(degree, &elements);
        Group {
            degree,
            generators,
            elements,
        }
    }

    pub fn trivial(degree: usize) -> Self {
        Group {
            degree,
            generators: Vec::new(),
            elements: vec![Permutation::identity(degree)],
        }
    }

    pub fn symmetric(degree: usize) -> Self {
        let mut gens = Vec::new();
        if degree >= 2 {
            gens.push(Permutation::from_cycles(degree, &[vec![0, 1]]).unwrap());
            gens.push(Permutation::from_cycles(degree, &[(0..degree).collect()]).unwrap());
        }
        Group::generate(degree, gens, usize::MAX).expect("symmetric group")
    }

    /// Generated by the 3-cycles `(0 1 i)`.
    pub fn alternating(degree: usize) -> Self {
        let gens = (2..degree)
            .map(|i| Permutation::from_cycles(degree, &[vec![0, 1, i]]).unwrap())
            .collect();
        Group::generate(degree, gens, usize::MAX).expect("alternating group")
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.elements.binary_search(p).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &Group) -> bool {
        self.degree == other.degree && self.elements.iter().all(|e| other.contains(e))
    }

    /// The elements satisfying `keep`; the caller guarantees they form a
    /// subgroup.
    pub fn subgroup_where(&self, keep: impl Fn(&Permutation) -> bool) -> Group {
        let elements = self.elements.iter().filter(|e| keep(e)).cloned().collect();
        Group::from_sorted(self.degree, elements)
    }

    pub fn intersection(&self, other: &Group) -> Group {
        self.subgroup_where(|e| other.contains(e))
    }

    /// `p · self · p⁻¹`.
    pub fn conjugate(&self, p: &Permutation) -> Group {
        let inv = p.inverse();
        let mut elements: Vec<Permutation> = self
            .elements
            .iter()
            .map(|e| p.compose(e).compose(&inv))
            .collect();
        elements.sort();
        Group::from_sorted(self.degree, elements)
    }

    /// `G(P)`: the elements fixing every point of `points`.
    pub fn pointwise_stabilizer(&self, points: &[usize]) -> Group {
        self.subgroup_where(|e| points.iter().all(|&p| e.fixes(p)))
    }

    /// The largest subgroup of `self` contained in every `self`-conjugate of
    /// `k`, i.e. the normal core of `k` in `self`.
    pub fn normal_core(&self, k: &Group) -> Group {
        let mut n = k.intersection(self);
        loop {
            let before = n.order();
            for g in &self.generators {
                n = n.intersection(&n.conjugate(g));
            }
            if n.order() == before {
                return n;
            }
        }
    }

    pub fn is_normal_in(&self, g: &Group) -> bool {
        self.is_subgroup_of(g) && g.generators.iter().all(|p| self.conjugate(p) == *self)
    }
}

fn greedy_generators(degree: usize, elements: &[Permutation]) -> Vec<Permutation> {
    let mut gens: Vec<Permutation> = Vec::new();
    let mut span = Group::trivial(degree);
    for e in elements {
        if !span.contains(e) {
            gens.push(e.clone());
            span = Group::generate(degree, gens.clone(), usize::MAX).expect("uncapped");
        }
    }
    gens
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classical_orders() {
        assert_eq!(Group::symmetric(3).order(), 6);
        assert_eq!(Group::symmetric(4).order(), 24);
        assert_eq!(Group::alternating(4).order(), 12);
        assert_eq!(Group::symmetric(1).order(), 1);
        assert!(Group::alternating(4)
            .elements()
            .iter()
            .all(Permutation::is_even));
    }

    #[test]
    fn order_cap() {
        let s5 = Group::symmetric(5);
        assert!(Group::generate(5, s5.generators().to_vec(), 100).is_err());
    }

    #[test]
    fn stabilizers() {
        let s3 = Group::symmetric(3);
        assert_eq!(s3.pointwise_stabilizer(&[]).order(), 6);
        assert_eq!(s3.pointwise_stabilizer(&[0]).order(), 2);
        assert_eq!(s3.pointwise_stabilizer(&[0, 1, 2]).order(), 1);
    }

    #[test]
    fn normality() {
        let s4 = Group::symmetric(4);
        let a4 = Group::alternating(4);
        assert!(a4.is_normal_in(&s4));
        assert_eq!(s4.normal_core(&a4), a4);
        // the core of a point stabiliser in S4 is trivial
        let stab = s4.pointwise_stabilizer(&[0]);
        assert!(!stab.is_normal_in(&s4));
        assert_eq!(s4.normal_core(&stab).order(), 1);
    }

    #[test]
    fn filtered_subgroups_regenerate() {
        let s4 = Group::symmetric(4);
        let even = s4.subgroup_where(Permutation::is_even);
        assert_eq!(even, Group::alternating(4).subgroup_where(|_| true));
        let regen = Group::generate(4, even.generators().to_vec(), usize::MAX).unwrap();
        assert_eq!(regen.elements(), even.elements());
    }
}
