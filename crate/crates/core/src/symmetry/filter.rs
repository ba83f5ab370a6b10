use serde::{Deserialize, Serialize};

use super::group::Group;
use super::perm::Permutation;
use super::SymmetryError;

/// A normal filter of subgroups of `G`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FilterSpec {
    /// `F0`: supergroups of some `G(P)` with `P` finite.
    FiniteSupports,
    /// Supergroups of the normal core of the intersection of the given
    /// subgroups.
    PrincipalNormal(Vec<Group>),
    /// Every subgroup.
    All,
}

/// A resolved filter: `H ∈ F` iff `H ⊇ core`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Filter {
    kind: FilterKind,
    core: Group,
    degenerate: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FilterKind {
    FiniteSupports,
    PrincipalNormal,
    All,
}

impl Filter {
    pub fn resolve(spec: &FilterSpec, g: &Group) -> Result<Filter, SymmetryError> {
        let trivial = Group::trivial(g.degree());
        Ok(match spec {
            // Over finitely many individuals G(I) is trivial, so every
            // subgroup is in F0.
            FilterSpec::FiniteSupports => Filter {
                kind: FilterKind::FiniteSupports,
                core: trivial,
                degenerate: true,
            },
            FilterSpec::All => Filter {
                kind: FilterKind::All,
                core: trivial,
                degenerate: false,
            },
            FilterSpec::PrincipalNormal(gens) => {
                let mut k = g.clone();
                for h in gens {
                    if !h.is_subgroup_of(g) {
                        return Err(SymmetryError::NotSubgroup);
                    }
                    k = k.intersection(h);
                }
                Filter {
                    kind: FilterKind::PrincipalNormal,
                    core: g.normal_core(&k),
                    degenerate: false,
                }
            }
        })
    }

    pub fn kind(&self) -> FilterKind {
        self.kind
    }

    /// The least member.
    pub fn core(&self) -> &Group {
        &self.core
    }

    /// True when the filter holds every subgroup because of the finite
    /// individual set.
    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    pub fn contains(&self, h: &Group) -> bool {
        self.core.is_subgroup_of(h)
    }

    /// Membership test for `sym_G(x)` given only an invariance predicate,
    /// without materialising the subgroup.
    pub fn admits(&self, invariant_under: impl Fn(&Permutation) -> bool) -> bool {
        self.core.generators().iter().all(invariant_under)
    }
}

/// Serialised group: generators in cycle notation over individual labels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupDoc {
    pub generators: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilterDoc {
    pub kind: FilterKind,
    /// Subgroups for `principal-normal`, each given by generators.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub generators: Vec<GroupDoc>,
}

impl GroupDoc {
    pub fn resolve(&self, labels: &[String], max_order: usize) -> Result<Group, SymmetryError> {
        let gens = self
            .generators
            .iter()
            .map(|c| Permutation::parse_cycles(c, labels))
            .collect::<Result<Vec<_>, _>>()?;
        Group::generate(labels.len(), gens, max_order)
    }

    pub fn of(g: &Group, labels: &[String]) -> GroupDoc {
        GroupDoc {
            generators: g.generators().iter().map(|p| p.to_cycles(labels)).collect(),
        }
    }
}

impl FilterDoc {
    pub fn resolve(
        &self,
        labels: &[String],
        max_order: usize,
    ) -> Result<FilterSpec, SymmetryError> {
        Ok(match self.kind {
            FilterKind::FiniteSupports => FilterSpec::FiniteSupports,
            FilterKind::All => FilterSpec::All,
            FilterKind::PrincipalNormal => {
                if self.generators.is_empty() {
                    return Err(SymmetryError::Doc(
                        "principal-normal needs at least one generating subgroup".into(),
                    ));
                }
                FilterSpec::PrincipalNormal(
                    self.generators
                        .iter()
                        .map(|d| d.resolve(labels, max_order))
                        .collect::<Result<_, _>>()?,
                )
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nums(k: usize) -> Vec<String> {
        (1..=k).map(|i| i.to_string()).collect()
    }

    #[test]
    fn principal_normal_a4() {
        let s4 = Group::symmetric(4);
        let f = Filter::resolve(
            &FilterSpec::PrincipalNormal(vec![Group::alternating(4)]),
            &s4,
        )
        .unwrap();
        assert_eq!(f.core().order(), 12);
        assert!(f.contains(&s4));
        assert!(f.contains(&Group::alternating(4)));
        let fix12 = s4.pointwise_stabilizer(&[0, 1]);
        assert_eq!(fix12.order(), 2);
        assert!(!f.contains(&fix12));
    }

    #[test]
    fn non_normal_generator_uses_core() {
        let s3 = Group::symmetric(3);
        let stab = s3.pointwise_stabilizer(&[0]);
        let f = Filter::resolve(&FilterSpec::PrincipalNormal(vec![stab]), &s3).unwrap();
        assert_eq!(f.core().order(), 1);
        assert!(f.contains(&Group::trivial(3)));
    }

    #[test]
    fn degenerate_kinds() {
        let s3 = Group::symmetric(3);
        let fs = Filter::resolve(&FilterSpec::FiniteSupports, &s3).unwrap();
        assert!(fs.is_degenerate());
        assert!(fs.contains(&Group::trivial(3)));
        let all = Filter::resolve(&FilterSpec::All, &s3).unwrap();
        assert!(!all.is_degenerate());
        assert!(all.contains(&Group::trivial(3)));
    }

    #[test]
    fn rejects_foreign_subgroup() {
        let a3 = Group::alternating(3);
        let s3 = Group::symmetric(3);
        let spec = FilterSpec::PrincipalNormal(vec![s3]);
        assert!(matches!(
            Filter::resolve(&spec, &a3),
            Err(SymmetryError::NotSubgroup)
        ));
    }

    #[test]
    fn docs_round_trip() {
        let l = nums(4);
        let json =
            r#"{"kind":"principal-normal","generators":[{"generators":["(1 2 3)","(2 3 4)"]}]}"#;
        let doc: FilterDoc = serde_json::from_str(json).unwrap();
        let FilterSpec::PrincipalNormal(gs) = doc.resolve(&l, 100).unwrap() else {
            panic!("kind")
        };
        assert_eq!(gs[0].order(), 12);
        let back = GroupDoc::of(&gs[0], &l);
        assert_eq!(back.resolve(&l, 100).unwrap(), gs[0]);
        let fs: FilterDoc = serde_json::from_str(r#"{"kind":"finite-supports"}"#).unwrap();
        assert_eq!(fs.resolve(&l, 100).unwrap(), FilterSpec::FiniteSupports);
    }
}
