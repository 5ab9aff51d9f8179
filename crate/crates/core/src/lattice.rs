//! Integer matrices: saturated kernels, Smith invariants, determinants and
//! unimodular inverses over `BigInt`.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{Int, Rat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    nrows: usize,
    ncols: usize,
    rows: Vec<Vec<Int>>,
}

impl IntMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        IntMatrix {
            nrows,
            ncols,
            rows: vec![vec![Int::zero(); ncols]; nrows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.rows[i][i] = Int::one();
        }
        m
    }

    /// Builds a matrix from rows; `ncols` is needed when there are no rows.
    pub fn from_rows(rows: Vec<Vec<Int>>, ncols: usize) -> Self {
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged integer matrix");
        IntMatrix {
            nrows: rows.len(),
            ncols,
            rows,
        }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let ncols = rows.first().map_or(0, |r| r.len());
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&v| Int::from(v)).collect())
            .collect();
        Self::from_rows(rows, ncols)
    }

    /// Matrix whose columns are the given vectors, each of length `nrows`.
    pub fn from_columns(cols: &[Vec<Int>], nrows: usize) -> Self {
        let mut m = Self::zeros(nrows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), nrows);
            for i in 0..nrows {
                m.rows[i][j] = c[i].clone();
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[Vec<Int>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &[Int] {
        &self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> &Int {
        &self.rows[i][j]
    }

    pub fn column(&self, j: usize) -> Vec<Int> {
        self.rows.iter().map(|r| r[j].clone()).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.ncols, self.nrows);
        for i in 0..self.nrows {
            for j in 0..self.ncols {
                t.rows[j][i] = self.rows[i][j].clone();
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[Int]) -> Vec<Int> {
        assert_eq!(v.len(), self.ncols);
        self.rows
            .iter()
            .map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.ncols, other.nrows);
        let mut out = IntMatrix::zeros(self.nrows, other.ncols);
        for i in 0..self.nrows {
            for k in 0..self.ncols {
                if self.rows[i][k].is_zero() {
                    continue;
                }
                for j in 0..other.ncols {
                    out.rows[i][j] += &self.rows[i][k] * &other.rows[k][j];
                }
            }
        }
        out
    }

    fn col_axpy(&mut self, dst: usize, src: usize, q: &Int) {
        for r in self.rows.iter_mut() {
            let t = &r[src] * q;
            r[dst] -= t;
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for r in self.rows.iter_mut() {
                r.swap(a, b);
            }
        }
    }

    /// Column echelon reduction by unimodular column operations.
    ///
    /// Returns `(h, v, rank)` with `self * v = h`, `v` unimodular and the
    /// columns `rank..` of `h` identically zero.
    pub fn column_echelon(&self) -> (IntMatrix, IntMatrix, usize) {
        let mut h = self.clone();
        let mut v = IntMatrix::identity(self.ncols);
        let mut pivot = 0;
        for row in 0..self.nrows {
            if pivot == self.ncols {
                break;
            }
            loop {
                // smallest nonzero entry of this row among the free columns
                let best = (pivot..self.ncols)
                    .filter(|&j| !h.rows[row][j].is_zero())
                    .min_by(|&a, &b| h.rows[row][a].abs().cmp(&h.rows[row][b].abs()));
                let Some(best) = best else { break };
                h.swap_cols(pivot, best);
                v.swap_cols(pivot, best);
                let p = h.rows[row][pivot].clone();
                let mut done = true;
                for j in pivot + 1..self.ncols {
                    if h.rows[row][j].is_zero() {
                        continue;
                    }
                    let q = h.rows[row][j].div_floor(&p);
                    h.col_axpy(j, pivot, &q);
                    v.col_axpy(j, pivot, &q);
                    if !h.rows[row][j].is_zero() {
                        done = false;
                    }
                }
                if done {
                    pivot += 1;
                    break;
                }
            }
        }
        (h, v, pivot)
    }

    /// Smith invariant factors (the nonzero diagonal entries, positive, each
    /// dividing the next).
    pub fn smith_invariants(&self) -> Vec<Int> {
        let mut a = self.rows.clone();
        let (m, n) = (self.nrows, self.ncols);
        let mut out = Vec::new();
        let mut t = 0;
        while t < m.min(n) {
            // locate the smallest nonzero entry in the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if !a[i][j].is_zero()
                        && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else { break };
            a.swap(t, bi);
            for row in a.iter_mut() {
                row.swap(t, bj);
            }
            let mut clean = true;
            let p = a[t][t].clone();
            for i in t + 1..m {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&p);
                for j in t..n {
                    let s = &a[t][j] * &q;
                    a[i][j] -= s;
                }
                if !a[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..n {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&p);
                for row in a.iter_mut().skip(t) {
                    let s = &row[t] * &q;
                    row[j] -= s;
                }
                if !a[t][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // the pivot must divide the whole trailing block
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !a[i][j].is_multiple_of(&p)));
            if let Some(i) = bad {
                for j in t..n {
                    let s = a[i][j].clone();
                    a[t][j] += s;
                }
                continue;
            }
            out.push(p.abs());
            t += 1;
        }
        out
    }

    pub fn rank(&self) -> usize {
        self.column_echelon().2
    }

    /// Determinant of a square matrix (fraction-free Bareiss elimination).
    pub fn determinant(&self) -> Int {
        assert_eq!(self.nrows, self.ncols, "determinant of non-square matrix");
        let n = self.nrows;
        if n == 0 {
            return Int::one();
        }
        let mut a = self.rows.clone();
        let mut sign = Int::one();
        let mut prev = Int::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                let Some(swap) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                    return Int::zero();
                };
                a.swap(k, swap);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = num / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * a[n - 1][n - 1].clone()
    }

    /// Exact inverse of a unimodular matrix; `None` if the determinant is not ±1.
    pub fn unimodular_inverse(&self) -> Option<IntMatrix> {
        let n = self.nrows;
        if n != self.ncols || !self.determinant().abs().is_one() {
            return None;
        }
        let mut aug: Vec<Vec<Rat>> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut row: Vec<Rat> = r.iter().map(|x| Rat::from_integer(x.clone())).collect();
                row.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
                row
            })
            .collect();
        for c in 0..n {
            let p = (c..n).find(|&i| !aug[i][c].is_zero())?;
            aug.swap(c, p);
            let inv = aug[c][c].recip();
            for x in aug[c].iter_mut() {
                *x = &*x * &inv;
            }
            for i in 0..n {
                if i != c && !aug[i][c].is_zero() {
                    let f = aug[i][c].clone();
                    for j in 0..2 * n {
                        let s = &aug[c][j] * &f;
                        aug[i][j] -= s;
                    }
                }
            }
        }
        let rows = aug
            .into_iter()
            .map(|r| r[n..].iter().map(|x| x.to_integer()).collect())
            .collect();
        Some(IntMatrix::from_rows(rows, n))
    }
}

/// Saturated basis of the integer kernel `{v : m v = 0}`.
///
/// The returned vectors span the full kernel lattice, not a finite-index
/// sublattice: they are columns of a unimodular transformation.
pub fn integer_kernel(m: &IntMatrix) -> Vec<Vec<Int>> {
    let (_, v, rank) = m.column_echelon();
    (rank..m.ncols()).map(|j| v.column(j)).collect()
}

/// Surjective integer map `Z^d -> Z^(d - rank)` whose kernel is the
/// saturation of the span of `generators` (vectors in `Z^d`).
pub fn quotient_map(generators: &[Vec<Int>], d: usize) -> IntMatrix {
    let a = IntMatrix::from_rows(generators.to_vec(), d);
    let rows = integer_kernel(&a);
    IntMatrix::from_rows(rows, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;

    fn brute_nullspace_dim(m: &IntMatrix) -> usize {
        m.ncols() - m.rank()
    }

    #[test]
    fn kernel_of_projective_plane_rays() {
        let m = IntMatrix::from_i64(&[&[1, 0, -1], &[0, 1, -1]]);
        let k = integer_kernel(&m);
        assert_eq!(k.len(), 1);
        let v = &k[0];
        let sign = if v[0] < int(0) { int(-1) } else { int(1) };
        let v: Vec<Int> = v.iter().map(|x| x * &sign).collect();
        assert_eq!(v, vec![int(1), int(1), int(1)]);
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        let m = IntMatrix::identity(2);
        assert!(integer_kernel(&m).is_empty());
    }

    #[test]
    fn kernel_of_p1xp1_spans_both_relations() {
        // rays (1,0),(-1,0),(0,1),(0,-1)
        let m = IntMatrix::from_i64(&[&[1, -1, 0, 0], &[0, 0, 1, -1]]);
        let k = integer_kernel(&m);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(m.mul_vec(v).iter().all(|x| x.is_zero()));
        }
        // same lattice as {(1,1,0,0),(0,0,1,1)}: change of basis is unimodular
        let kmat = IntMatrix::from_rows(vec![k[0][..].to_vec(), k[1][..].to_vec()], 4);
        let sub = IntMatrix::from_rows(
            vec![
                vec![kmat.get(0, 0).clone(), kmat.get(0, 2).clone()],
                vec![kmat.get(1, 0).clone(), kmat.get(1, 2).clone()],
            ],
            2,
        );
        assert!(sub.determinant().abs().is_one());
    }

    #[test]
    fn kernel_is_saturated() {
        // 2x + 4y = 0 has kernel generated by (2,-1), not (4,-2)
        let m = IntMatrix::from_i64(&[&[2, 4]]);
        let k = integer_kernel(&m);
        assert_eq!(k.len(), 1);
        assert_eq!(crate::arith::gcd_of(&k[0]), int(1));
        assert_eq!(brute_nullspace_dim(&m), 1);
    }

    #[test]
    fn smith_of_diagonal_like_matrix() {
        let m = IntMatrix::from_i64(&[&[2, 0], &[0, 3]]);
        assert_eq!(m.smith_invariants(), vec![int(1), int(6)]);
        let m = IntMatrix::from_i64(&[&[1, 1, 1, 0, 0], &[0, 0, 0, 1, 1]]);
        assert_eq!(m.smith_invariants(), vec![int(1), int(1)]);
        let m = IntMatrix::from_i64(&[&[2, 4, 6]]);
        assert_eq!(m.smith_invariants(), vec![int(2)]);
    }

    #[test]
    fn determinant_and_inverse() {
        let m = IntMatrix::from_i64(&[&[1, 0, 0], &[0, 1, 0], &[-1, -1, -1]]);
        assert_eq!(m.determinant(), int(-1));
        let inv = m.unimodular_inverse().unwrap();
        assert_eq!(m.mul(&inv), IntMatrix::identity(3));
        let m = IntMatrix::from_i64(&[&[2, 0], &[0, 1]]);
        assert!(m.unimodular_inverse().is_none());
    }

    #[test]
    fn quotient_map_kills_generators() {
        let gens = vec![vec![int(1), int(1), int(1), int(0)], vec![int(0), int(0), int(0), int(1)]];
        let q = quotient_map(&gens, 4);
        assert_eq!(q.nrows(), 2);
        for g in &gens {
            assert!(q.mul_vec(g).iter().all(|x| x.is_zero()));
        }
        assert_eq!(q.smith_invariants(), vec![int(1), int(1)]);
    }
}
