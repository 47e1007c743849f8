//! Sparse row echelon forms over exact complex rationals.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::scalar::Cq;

pub type SparseRow = BTreeMap<usize, Cq>;

/// Rows kept in echelon form keyed by their leading column, with leading
/// coefficient one.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    pivots: BTreeMap<usize, SparseRow>,
}

fn axpy(row: &mut SparseRow, factor: &Cq, other: &SparseRow) {
    for (c, v) in other {
        let e = row.entry(*c).or_insert_with(Cq::zero);
        *e -= factor * v;
        if e.is_zero() {
            row.remove(c);
        }
    }
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduce `row` against the current pivots.
    pub fn reduce(&self, mut row: SparseRow) -> SparseRow {
        let mut cursor = 0usize;
        loop {
            let hit = row.range(cursor..).find(|(c, _)| self.pivots.contains_key(c)).map(|(c, v)| (*c, v.clone()));
            let Some((c, v)) = hit else { break };
            axpy(&mut row, &v, &self.pivots[&c]);
            cursor = c + 1;
        }
        row
    }

    /// Insert a row; returns whether the rank grew.
    pub fn insert(&mut self, row: SparseRow) -> bool {
        let mut row = self.reduce(row);
        let Some((&lead, v)) = row.iter().next() else { return false };
        let inv = Cq::one() / v;
        for x in row.values_mut() {
            *x *= &inv;
        }
        self.pivots.insert(lead, row);
        true
    }

    /// Basis of the null space in `ncols` unknowns, from the reduced form.
    pub fn null_space(&self, ncols: usize) -> Vec<SparseRow> {
        // Back-substitute to reach reduced row echelon form.
        let cols: Vec<usize> = self.pivots.keys().rev().copied().collect();
        let mut rref: BTreeMap<usize, SparseRow> = BTreeMap::new();
        for c in cols {
            let mut row = self.pivots[&c].clone();
            let others: Vec<(usize, Cq)> =
                row.iter().filter(|(k, _)| **k != c && rref.contains_key(k)).map(|(k, v)| (*k, v.clone())).collect();
            for (k, v) in others {
                axpy(&mut row, &v, &rref[&k]);
            }
            rref.insert(c, row);
        }
        let mut out = Vec::new();
        for free in (0..ncols).filter(|c| !rref.contains_key(c)) {
            let mut v = SparseRow::new();
            v.insert(free, Cq::one());
            for (p, row) in &rref {
                if let Some(x) = row.get(&free) {
                    v.insert(*p, -x.clone());
                }
            }
            out.push(v);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cq_int;

    fn row(v: &[(usize, i64)]) -> SparseRow {
        v.iter().map(|&(c, x)| (c, cq_int(x))).collect()
    }

    #[test]
    fn rank_and_kernel() {
        let mut e = Echelon::new();
        assert!(e.insert(row(&[(0, 1), (1, 2), (2, 3)])));
        assert!(e.insert(row(&[(1, 1), (2, 1)])));
        assert!(!e.insert(row(&[(0, 1), (1, 3), (2, 4)])));
        assert_eq!(e.rank(), 2);
        let ns = e.null_space(3);
        assert_eq!(ns.len(), 1);
        let v = &ns[0];
        let dot = |r: &SparseRow| r.iter().fold(Cq::zero(), |acc, (c, x)| acc + x * v.get(c).cloned().unwrap_or_else(Cq::zero));
        assert!(dot(&row(&[(0, 1), (1, 2), (2, 3)])).is_zero());
        assert!(dot(&row(&[(1, 1), (2, 1)])).is_zero());
    }
}
