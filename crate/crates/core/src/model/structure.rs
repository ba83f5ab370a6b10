use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::table::{Table, TableError};
use super::ModelError;

/// Individuals `J0` (by label) and one predicate domain `J_n` per listed
/// arity, each a sorted set of distinct tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PredicateStructure {
    individuals: Vec<String>,
    domains: BTreeMap<u32, Vec<Table>>,
}

/// Default cap on the number of individuals.
pub const DEFAULT_MAX_INDIVIDUALS: usize = 6;

impl PredicateStructure {
    /// Validates and normalises: labels distinct and nonempty, domains
    /// nonempty, tables of the right shape; duplicate tables are merged.
    pub fn new(
        individuals: Vec<String>,
        domains: impl IntoIterator<Item = (u32, Vec<Table>)>,
    ) -> Result<Self, ModelError> {
        if individuals.is_empty() {
            return Err(ModelError::NoIndividuals);
        }
        let distinct: BTreeSet<&String> = individuals.iter().collect();
        if distinct.len() != individuals.len() {
            return Err(ModelError::DuplicateLabel);
        }
        let k = individuals.len() as u32;
        let mut out = BTreeMap::new();
        for (arity, tables) in domains {
            if arity == 0 {
                return Err(ModelError::ZeroArity);
            }
            if tables.is_empty() {
                return Err(ModelError::EmptyDomain(arity));
            }
            let mut set = BTreeSet::new();
            for t in tables {
                if t.arity() != arity || t.universe() != k {
                    return Err(ModelError::TableShape {
                        arity,
                        expected_universe: k,
                    });
                }
                set.insert(t);
            }
            if out.insert(arity, set.into_iter().collect()).is_some() {
                return Err(ModelError::DuplicateDomain(arity));
            }
        }
        Ok(PredicateStructure {
            individuals,
            domains: out,
        })
    }

    /// The standard structure: every domain up to `max_arity` holds all
    /// tables. Fails when some domain would exceed `cap_tables`.
    pub fn standard(
        individuals: Vec<String>,
        max_arity: u32,
        cap_tables: usize,
    ) -> Result<Self, ModelError> {
        let k = individuals.len() as u32;
        let mut domains = Vec::new();
        for n in 1..=max_arity {
            let rows = super::table::row_count(k, n).filter(|&r| r < 63);
            let count = rows.map(|r| 1usize << r).filter(|&c| c <= cap_tables);
            let (Some(rows), Some(count)) = (rows, count) else {
                return Err(ModelError::CapExceeded {
                    what: format!("standard domain J{n} over {k} individuals"),
                    cap: cap_tables,
                });
            };
            let tables = (0..count as u64)
                .map(|c| Table::from_code(n, k, c))
                .collect::<Result<Vec<_>, _>>()?;
            debug_assert_eq!(tables.len(), 1 << rows);
            domains.push((n, tables));
        }
        PredicateStructure::new(individuals, domains)
    }

    /// Individuals labelled `"1"`, `"2"`, ...
    pub fn numbered(k: usize) -> Vec<String> {
        (1..=k).map(|i| i.to_string()).collect()
    }

    pub fn individuals(&self) -> &[String] {
        &self.individuals
    }

    pub fn size(&self) -> usize {
        self.individuals.len()
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.individuals.iter().position(|l| l == label)
    }

    pub fn domain(&self, arity: u32) -> Option<&[Table]> {
        self.domains.get(&arity).map(Vec::as_slice)
    }

    pub fn domains(&self) -> &BTreeMap<u32, Vec<Table>> {
        &self.domains
    }

    pub fn max_arity(&self) -> u32 {
        self.domains.keys().copied().max().unwrap_or(0)
    }

    pub fn contains(&self, t: &Table) -> bool {
        self.domain(t.arity())
            .is_some_and(|d| d.binary_search(t).is_ok())
    }

    /// True when every listed domain holds all tables of its arity.
    pub fn is_standard(&self) -> bool {
        let k = self.size() as u32;
        self.domains.iter().all(|(&n, d)| {
            super::table::row_count(k, n)
                .filter(|&r| r < 63)
                .is_some_and(|r| d.len() == 1usize << r)
        })
    }

    /// Adds tables, returning how many were new.
    pub fn extend(&mut self, arity: u32, tables: impl IntoIterator<Item = Table>) -> usize {
        let dom = self.domains.entry(arity).or_default();
        let mut set: BTreeSet<Table> = std::mem::take(dom).into_iter().collect();
        let before = set.len();
        set.extend(tables);
        let added = set.len() - before;
        *dom = set.into_iter().collect();
        added
    }

    /// True when each domain of `self` is contained in the same domain of `other`.
    pub fn is_substructure_of(&self, other: &PredicateStructure) -> bool {
        self.individuals == other.individuals
            && self
                .domains
                .values()
                .all(|d| d.iter().all(|t| other.contains(t)))
    }

    pub fn to_doc(&self) -> StructureDoc {
        StructureDoc {
            individuals: self.individuals.clone(),
            domains: self
                .domains
                .iter()
                .map(|(&n, d)| (n, d.iter().map(Table::to_bitstring).collect()))
                .collect(),
        }
    }

    pub fn from_doc(doc: &StructureDoc) -> Result<Self, ModelError> {
        let k = doc.individuals.len() as u32;
        let mut domains = Vec::new();
        for (&n, bits) in &doc.domains {
            let tables = bits
                .iter()
                .map(|b| Table::from_bitstring(n, k, b))
                .collect::<Result<Vec<_>, TableError>>()?;
            domains.push((n, tables));
        }
        PredicateStructure::new(doc.individuals.clone(), domains)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("structure serialises")
    }

    pub fn from_json(text: &str) -> Result<Self, ModelError> {
        let doc: StructureDoc =
            serde_json::from_str(text).map_err(|e| ModelError::Json(e.to_string()))?;
        PredicateStructure::from_doc(&doc)
    }
}

/// On-disk form. Unknown fields (such as a group or filter description)
/// are ignored here.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureDoc {
    pub individuals: Vec<String>,
    #[serde(default)]
    pub domains: BTreeMap<u32, Vec<String>>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(s: &[&str]) -> Vec<String> {
        s.iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn standard_domains_are_complete() {
        let s = PredicateStructure::standard(labels(&["a", "b"]), 2, 1 << 16).unwrap();
        assert_eq!(s.domain(1).unwrap().len(), 4);
        assert_eq!(s.domain(2).unwrap().len(), 16);
        assert!(s.is_standard());
        assert!(
            PredicateStructure::standard(labels(&["a", "b", "c", "d", "e"]), 2, 1 << 16).is_err()
        );
    }

    #[test]
    fn validation() {
        assert_eq!(
            PredicateStructure::new(vec![], []),
            Err(ModelError::NoIndividuals)
        );
        assert_eq!(
            PredicateStructure::new(labels(&["a", "a"]), []),
            Err(ModelError::DuplicateLabel)
        );
        assert_eq!(
            PredicateStructure::new(labels(&["a"]), [(1, vec![])]),
            Err(ModelError::EmptyDomain(1))
        );
        let wrong = Table::full(1, 3).unwrap();
        assert!(PredicateStructure::new(labels(&["a", "b"]), [(1, vec![wrong])]).is_err());
    }

    #[test]
    fn duplicate_tables_merge() {
        let t = Table::full(1, 2).unwrap();
        let s = PredicateStructure::new(labels(&["a", "b"]), [(1, vec![t.clone(), t])]).unwrap();
        assert_eq!(s.domain(1).unwrap().len(), 1);
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"individuals": ["a", "b"], "domains": {"1": ["10", "11"], "2": ["1111"]}}"#;
        let s = PredicateStructure::from_json(text).unwrap();
        assert_eq!(s.domain(2).unwrap()[0].to_bitstring(), "1111");
        assert_eq!(PredicateStructure::from_json(&s.to_json()).unwrap(), s);
        let bad = r#"{"individuals": ["a", "b"], "domains": {"1": ["102"]}}"#;
        assert!(PredicateStructure::from_json(bad).is_err());
    }
}
