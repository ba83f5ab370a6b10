use std::fmt;

use thiserror::Error;

/// A total n-ary predicate over individuals `0..universe`, stored row-major
/// with tuples in lexicographic order. Rows are packed most-significant-bit
/// first, so the derived ordering is the lexicographic order of the
/// bitstrings (`"0" < "1"`), which makes the all-false table the least.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Table {
    arity: u32,
    universe: u32,
    words: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    #[error("bitstring has length {got}, expected {expected}")]
    Length { got: usize, expected: usize },
    #[error("bitstring contains {0:?}; only '0' and '1' are allowed")]
    Character(char),
    #[error("table over {universe}^{arity} rows exceeds the supported size")]
    TooLarge { universe: u32, arity: u32 },
}

/// Largest row count a table may have.
pub const MAX_ROWS: usize = 1 << 24;

pub fn row_count(universe: u32, arity: u32) -> Option<usize> {
    let mut rows: usize = 1;
    for _ in 0..arity {
        rows = rows.checked_mul(universe as usize)?;
        if rows > MAX_ROWS {
            return None;
        }
    }
    Some(rows)
}

impl Table {
    pub fn empty(arity: u32, universe: u32) -> Result<Self, TableError> {
        let rows = row_count(universe, arity).ok_or(TableError::TooLarge { universe, arity })?;
        Ok(Table {
            arity,
            universe,
            words: vec![0; rows.div_ceil(64)],
        })
    }

    pub fn full(arity: u32, universe: u32) -> Result<Self, TableError> {
        let mut t = Table::empty(arity, universe)?;
        for r in 0..t.rows() {
            t.set_row(r, true);
        }
        Ok(t)
    }

    pub fn from_fn(
        arity: u32,
        universe: u32,
        mut f: impl FnMut(&[usize]) -> bool,
    ) -> Result<Self, TableError> {
        let mut t = Table::empty(arity, universe)?;
        let mut tuple = vec![0usize; arity as usize];
        for r in 0..t.rows() {
            t.decode_into(r, &mut tuple);
            if f(&tuple) {
                t.set_row(r, true);
            }
        }
        Ok(t)
    }

    /// The table whose rows are the low `rows` bits of `code`, row 0 being
    /// the most significant of those bits. Enumerating `code` upwards walks
    /// the tables in lexicographic order.
    pub fn from_code(arity: u32, universe: u32, code: u64) -> Result<Self, TableError> {
        let mut t = Table::empty(arity, universe)?;
        let rows = t.rows();
        assert!(rows <= 64, "from_code needs at most 64 rows");
        for r in 0..rows {
            if code >> (rows - 1 - r) & 1 == 1 {
                t.set_row(r, true);
            }
        }
        Ok(t)
    }

    pub fn arity(&self) -> u32 {
        self.arity
    }

    pub fn universe(&self) -> u32 {
        self.universe
    }

    pub fn rows(&self) -> usize {
        (self.universe as usize).pow(self.arity)
    }

    pub fn row(&self, r: usize) -> bool {
        self.words[r / 64] >> (63 - r % 64) & 1 == 1
    }

    pub fn set_row(&mut self, r: usize, v: bool) {
        let mask = 1u64 << (63 - r % 64);
        if v {
            self.words[r / 64] |= mask;
        } else {
            self.words[r / 64] &= !mask;
        }
    }

    pub fn encode(&self, tuple: &[usize]) -> usize {
        debug_assert_eq!(tuple.len(), self.arity as usize);
        tuple
            .iter()
            .fold(0, |acc, &i| acc * self.universe as usize + i)
    }

    pub fn decode_into(&self, mut r: usize, out: &mut [usize]) {
        let k = self.universe as usize;
        for slot in out.iter_mut().rev() {
            *slot = r % k;
            r /= k;
        }
    }

    pub fn get(&self, tuple: &[usize]) -> bool {
        self.row(self.encode(tuple))
    }

    pub fn count_true(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn complement(&self) -> Table {
        let mut t = self.clone();
        for r in 0..t.rows() {
            t.set_row(r, !self.row(r));
        }
        t
    }

    /// The image `{ (p(x1),...,p(xn)) : (x1,...,xn) in self }` under a
    /// bijection `p` of the individuals.
    pub fn image(&self, p: &[usize]) -> Table {
        debug_assert_eq!(p.len(), self.universe as usize);
        let mut out = Table {
            arity: self.arity,
            universe: self.universe,
            words: vec![0; self.words.len()],
        };
        let mut tuple = vec![0usize; self.arity as usize];
        for r in 0..self.rows() {
            if self.row(r) {
                self.decode_into(r, &mut tuple);
                for v in tuple.iter_mut() {
                    *v = p[*v];
                }
                out.set_row(out.encode(&tuple), true);
            }
        }
        out
    }

    pub fn to_bitstring(&self) -> String {
        (0..self.rows())
            .map(|r| if self.row(r) { '1' } else { '0' })
            .collect()
    }

    pub fn from_bitstring(arity: u32, universe: u32, s: &str) -> Result<Self, TableError> {
        let mut t = Table::empty(arity, universe)?;
        let expected = t.rows();
        if s.len() != expected {
            return Err(TableError::Length {
                got: s.chars().count(),
                expected,
            });
        }
        for (r, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => t.set_row(r, true),
                other => return Err(TableError::Character(other)),
            }
        }
        Ok(t)
    }
}

impl fmt::Debug for Table {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Table{}[{}]", self.arity, self.to_bitstring())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bitstring_round_trip_and_order() {
        let a = Table::from_bitstring(1, 3, "010").unwrap();
        assert_eq!(a.to_bitstring(), "010");
        assert!(a.get(&[1]) && !a.get(&[0]));
        let b = Table::from_bitstring(1, 3, "100").unwrap();
        assert!(a < b);
        assert!(Table::empty(1, 3).unwrap() < a);
        assert_eq!(
            Table::from_bitstring(1, 3, "01"),
            Err(TableError::Length {
                got: 2,
                expected: 3
            })
        );
    }

    #[test]
    fn row_major_lexicographic_tuples() {
        // rows of a binary table over {0,1}: (0,0) (0,1) (1,0) (1,1)
        let t = Table::from_bitstring(2, 2, "0100").unwrap();
        assert!(t.get(&[0, 1]));
        assert!(!t.get(&[1, 0]));
        let eq = Table::from_fn(2, 3, |t| t[0] == t[1]).unwrap();
        assert_eq!(eq.to_bitstring(), "100010001");
    }

    #[test]
    fn codes_follow_lexicographic_order() {
        let tables: Vec<Table> = (0..16)
            .map(|c| Table::from_code(2, 2, c).unwrap())
            .collect();
        assert!(tables.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(tables[1].to_bitstring(), "0001");
    }

    #[test]
    fn wide_tables_span_words() {
        let t = Table::from_fn(3, 5, |t| t.iter().sum::<usize>() % 3 == 0).unwrap();
        let s = t.to_bitstring();
        assert_eq!(s.len(), 125);
        assert_eq!(Table::from_bitstring(3, 5, &s).unwrap(), t);
    }

    #[test]
    fn image_under_swap() {
        let one = Table::from_bitstring(1, 3, "100").unwrap();
        assert_eq!(one.image(&[1, 0, 2]).to_bitstring(), "010");
    }
}
