//! Dense exact linear algebra over the rationals.

use num_traits::{One, Zero};

use crate::arith::Rat;

/// Reduced row echelon form of a set of rows.
#[derive(Clone, Debug)]
pub struct Rref {
    pub rows: Vec<Vec<Rat>>,
    pub pivots: Vec<usize>,
    pub ncols: usize,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `v` modulo the row space; the result vanishes on every pivot
    /// column.
    pub fn reduce(&self, v: &mut [Rat]) {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let f = v[p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x -= &f * r;
                }
            }
        }
    }
}

/// Gauss-Jordan elimination, pivots chosen left to right.
pub fn rref(mut rows: Vec<Vec<Rat>>, ncols: usize) -> Rref {
    rows.retain(|r| r.iter().any(|x| !x.is_zero()));
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        if !inv.is_one() {
            for x in rows[r].iter_mut() {
                if !x.is_zero() {
                    *x = &*x * &inv;
                }
            }
        }
        let (head, tail) = rows.split_at_mut(r);
        let (pivot_row, rest) = tail.split_first_mut().expect("pivot row");
        for other in head.iter_mut().chain(rest.iter_mut()) {
            if other[c].is_zero() {
                continue;
            }
            let f = other[c].clone();
            for (x, y) in other.iter_mut().zip(pivot_row.iter()) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    Rref { rows, pivots, ncols }
}

/// Solves `sum_j x_j * columns[j] = target` exactly.
///
/// Returns `None` when the system is inconsistent or the columns are
/// linearly dependent (non-unique solution).
pub fn solve_unique(columns: &[Vec<Rat>], target: &[Rat]) -> Option<Vec<Rat>> {
    let m = target.len();
    let n = columns.len();
    let rows: Vec<Vec<Rat>> = (0..m)
        .map(|i| {
            let mut row: Vec<Rat> = columns.iter().map(|c| c[i].clone()).collect();
            row.push(target[i].clone());
            row
        })
        .collect();
    let red = rref(rows, n + 1);
    if red.pivots.contains(&n) || red.rank() != n {
        return None;
    }
    let mut x = vec![Rat::zero(); n];
    for (row, &p) in red.rows.iter().zip(&red.pivots) {
        x[p] = row[n].clone();
    }
    Some(x)
}
