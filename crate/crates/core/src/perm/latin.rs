use serde::{Deserialize, Serialize};

use super::{PermGroup, Permutation};
use crate::error::{Error, Result};

/// Latin square with 0-based symbols. Row `a` read as a one-line permutation
/// is `s_a`, so `entries[a][j] = s_a(j)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LatinSquare {
    order: usize,
    entries: Vec<Vec<u32>>,
}

impl LatinSquare {
    pub fn new(entries: Vec<Vec<u32>>) -> Result<Self> {
        let order = entries.len();
        let sq = Self { order, entries };
        sq.validate()?;
        Ok(sq)
    }

    /// From 1-based rows such as `[[1,2,3,4],[2,1,4,3],..]`.
    pub fn from_one_based(rows: &[Vec<u32>]) -> Result<Self> {
        let entries = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|&x| {
                        x.checked_sub(1)
                            .ok_or_else(|| Error::invalid("latin square symbols start at 1"))
                    })
                    .collect::<Result<Vec<u32>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(entries)
    }

    /// Square whose rows are the given permutations.
    pub fn from_tuple(tuple: &[Permutation]) -> Result<Self> {
        Self::new(tuple.iter().map(|s| s.images().to_vec()).collect())
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.order;
        let is_perm = |it: &mut dyn Iterator<Item = u32>| {
            let mut seen = vec![false; n];
            let mut len = 0;
            for x in it {
                let x = x as usize;
                if x >= n || seen[x] {
                    return false;
                }
                seen[x] = true;
                len += 1;
            }
            len == n
        };
        for (a, row) in self.entries.iter().enumerate() {
            if !is_perm(&mut row.iter().copied()) {
                return Err(Error::invalid(format!("row {} is not a permutation", a + 1)));
            }
        }
        for j in 0..n {
            if !is_perm(&mut self.entries.iter().map(|r| r[j])) {
                return Err(Error::invalid(format!("column {} is not a permutation", j + 1)));
            }
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn entries(&self) -> &[Vec<u32>] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> usize {
        self.entries[row][col] as usize
    }

    pub fn rows(&self) -> Vec<Permutation> {
        self.entries
            .iter()
            .map(|r| Permutation::new(r.clone()).expect("validated row"))
            .collect()
    }

    pub fn to_one_based(&self) -> Vec<Vec<u32>> {
        self.entries
            .iter()
            .map(|r| r.iter().map(|x| x + 1).collect())
            .collect()
    }

    /// Reduced form: columns permuted so the first row is the identity, then
    /// rows sorted by their first entry.
    pub fn normalize(&self) -> LatinSquare {
        let first = &self.entries[0];
        let mut cols: Vec<usize> = vec![0; self.order];
        for (j, &x) in first.iter().enumerate() {
            cols[x as usize] = j;
        }
        let mut rows: Vec<Vec<u32>> = self
            .entries
            .iter()
            .map(|r| cols.iter().map(|&j| r[j]).collect())
            .collect();
        rows.sort_by_key(|r| r[0]);
        LatinSquare {
            order: self.order,
            entries: rows,
        }
    }

    /// Fails on the first row that is not an element of `g`.
    pub fn check_rows_in(&self, g: &PermGroup) -> Result<()> {
        for (a, s) in self.rows().iter().enumerate() {
            if !g.contains(s) {
                return Err(Error::RowNotInGroup { row: a + 1 });
            }
        }
        Ok(())
    }
}
