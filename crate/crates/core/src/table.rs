//! `D[A,B,C]` tables for 2-max maps on a fixed domain size.

use std::collections::BTreeMap;

use crate::count::{count_by_inclusion_exclusion, Count, RecursionMemo};
use crate::error::CountError;
use crate::function::Profile;

/// Counts for every feasible `(A, B)` at size `n`, with `C = n - A - B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable {
    n: usize,
    cells: BTreeMap<(usize, usize), Count>,
}

impl CountTable {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, a: usize, b: usize) -> Option<&Count> {
        self.cells.get(&(a, b))
    }

    /// Cells keyed by `(A, B)`.
    pub fn cells(&self) -> &BTreeMap<(usize, usize), Count> {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Column headers `A = 0, 2, ...`.
    pub fn collision_columns(&self) -> Vec<usize> {
        (0..=self.n).step_by(2).collect()
    }

    /// Rows indexed by `B`, columns by `A`; `None` where `A + B > n`.
    pub fn rows(&self) -> Vec<(usize, Vec<Option<&Count>>)> {
        let columns = self.collision_columns();
        (0..=self.n)
            .map(|b| (b, columns.iter().map(|&a| self.get(a, b)).collect()))
            .collect()
    }
}

/// Builds the table for size `n` with the first recursion and cross-checks
/// every cell against inclusion-exclusion.
pub fn derangement_table(n: usize) -> Result<CountTable, CountError> {
    derangement_table_with(n, &mut RecursionMemo::new())
}

pub fn derangement_table_with(n: usize, memo: &mut RecursionMemo) -> Result<CountTable, CountError> {
    // Smaller sizes first, so the memo already holds every cell the recursion
    // reaches into.
    for m in 0..n {
        for p in Profile::all_with_size(m) {
            memo.recursion1(p);
        }
    }
    let mut cells = BTreeMap::new();
    for p in Profile::all_with_size(n) {
        let value = memo.recursion1(p);
        let check = count_by_inclusion_exclusion(&p.multiplicities());
        if value != check {
            return Err(CountError::MethodDisagreement(format!(
                "D{p}: recursion gives {value}, inclusion-exclusion gives {check}"
            )));
        }
        cells.insert((p.a, p.b), value);
    }
    Ok(CountTable { n, cells })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::count::{classical_derangement_count, factorial};

    fn cell(t: &CountTable, a: usize, b: usize) -> u64 {
        t.get(a, b).unwrap().try_into().unwrap()
    }

    #[test]
    fn small_table() {
        let t = derangement_table(2).unwrap();
        assert_eq!(cell(&t, 0, 2), 1);
        assert_eq!(cell(&t, 2, 0), 0);
        assert_eq!(cell(&t, 0, 0), 2);
        assert_eq!(cell(&t, 0, 1), 1);
        assert_eq!(t.len(), 4);
    }

    #[test]
    fn empty_domain() {
        let t = derangement_table(0).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(cell(&t, 0, 0), 1);
    }

    #[test]
    fn corner_cells() {
        for n in 0..=15 {
            let t = derangement_table(n).unwrap();
            assert_eq!(t.get(0, n).unwrap(), &classical_derangement_count(n));
            assert_eq!(t.get(0, 0).unwrap(), &factorial(n));
        }
    }

    #[test]
    fn rows_follow_printed_orientation() {
        let t = derangement_table(4).unwrap();
        let rows = t.rows();
        assert_eq!(rows.len(), 5);
        assert_eq!(t.collision_columns(), vec![0, 2, 4]);
        let b1: Vec<Option<u64>> = rows[1].1.iter().map(|c| c.map(|c| c.try_into().unwrap())).collect();
        assert_eq!(b1, vec![Some(18), Some(10), None]);
    }
}
