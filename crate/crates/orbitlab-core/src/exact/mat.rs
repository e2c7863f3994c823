//! Exact dense matrices over a `Scalar` field.
//!
//! Elimination is done twice over: a fraction-free (Bareiss) pass on
//! integralized rows for rank — this keeps intermediate entries as minors and
//! controls coefficient growth — and a plain field Gauss–Jordan pass where
//! reduced output is wanted (kernel bases, solving). Both are exact.

use super::Scalar;
use crate::exact::Rational;
use num_traits::{Signed, Zero};
use std::fmt;

#[derive(Clone, PartialEq)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type QMat = Mat<Rational>;
pub type GMat = Mat<super::Gaussian>;

impl<T: Scalar> fmt::Debug for Mat<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].render()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl<T: Scalar> std::ops::Index<(usize, usize)> for Mat<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T: Scalar> std::ops::IndexMut<(usize, usize)> for Mat<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Scalar> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(cols: Vec<Vec<T>>, ambient: usize) -> Self {
        let c = cols.len();
        let mut m = Self::zeros(ambient, c);
        for (j, v) in cols.iter().enumerate() {
            assert_eq!(v.len(), ambient, "column length mismatch");
            for i in 0..ambient {
                m[(i, j)] = v[i].clone();
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> Vec<T> {
        (0..self.cols).map(|j| self[(i, j)].clone()).collect()
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mul");
        let mut m = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = a.clone() * other[(k, j)].clone();
                    m[(i, j)] = m[(i, j)].clone() + t;
                }
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in mul_vec");
        (0..self.rows)
            .map(|i| {
                let mut s = T::zero();
                for j in 0..self.cols {
                    if !self[(i, j)].is_zero() && !v[j].is_zero() {
                        s = s + self[(i, j)].clone() * v[j].clone();
                    }
                }
                s
            })
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut m = self.clone();
        for i in 0..self.rows * self.cols {
            m.data[i] = m.data[i].clone() + other.data[i].clone();
        }
        m
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut m = self.clone();
        for i in 0..self.rows * self.cols {
            m.data[i] = m.data[i].clone() - other.data[i].clone();
        }
        m
    }

    pub fn scale(&self, c: &T) -> Self {
        let mut m = self.clone();
        for x in m.data.iter_mut() {
            *x = x.clone() * c.clone();
        }
        m
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Rank by fraction-free Bareiss elimination on integralized rows.
    pub fn rank(&self) -> usize {
        let mut a: Vec<Vec<T>> = (0..self.rows)
            .map(|i| T::integralize_row(&self.row(i)))
            .collect();
        let (m, n) = (self.rows, self.cols);
        let mut rank = 0;
        let mut prev = T::one();
        let mut col = 0;
        while rank < m && col < n {
            let pivot = (rank..m).find(|&i| !a[i][col].is_zero());
            let Some(p) = pivot else {
                col += 1;
                continue;
            };
            a.swap(rank, p);
            for i in rank + 1..m {
                for j in col + 1..n {
                    let t = a[rank][col].clone() * a[i][j].clone()
                        - a[i][col].clone() * a[rank][j].clone();
                    // Exact division: Bareiss intermediates are minors.
                    a[i][j] = t / prev.clone();
                }
                a[i][col] = T::zero();
            }
            prev = a[rank][col].clone();
            rank += 1;
            col += 1;
        }
        rank
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..a.cols {
            if r == a.rows {
                break;
            }
            let Some(p) = (r..a.rows).find(|&i| !a[(i, c)].is_zero()) else {
                continue;
            };
            for j in 0..a.cols {
                let t = a[(r, j)].clone();
                a[(r, j)] = a[(p, j)].clone();
                a[(p, j)] = t;
            }
            let inv = T::one() / a[(r, c)].clone();
            for j in 0..a.cols {
                a[(r, j)] = a[(r, j)].clone() * inv.clone();
            }
            for i in 0..a.rows {
                if i != r && !a[(i, c)].is_zero() {
                    let f = a[(i, c)].clone();
                    for j in 0..a.cols {
                        let t = f.clone() * a[(r, j)].clone();
                        a[(i, j)] = a[(i, j)].clone() - t;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (a, pivots)
    }

    /// Exact basis of the null space, in reduced form (free variables set to
    /// one, one vector per free column).
    pub fn kernel(&self) -> Vec<Vec<T>> {
        let (r, pivots) = self.rref();
        let mut basis = Vec::new();
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![T::zero(); self.cols];
            v[free] = T::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = T::zero() - r[(row, free)].clone();
            }
            basis.push(v);
        }
        basis
    }

    /// One exact solution of self * x = rhs, if consistent.
    pub fn solve(&self, rhs: &[T]) -> Option<Vec<T>> {
        assert_eq!(self.rows, rhs.len(), "rhs length mismatch");
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = rhs[i].clone();
        }
        let (r, pivots) = aug.rref();
        // Inconsistent if a pivot landed in the rhs column.
        if pivots.iter().any(|&c| c == self.cols) {
            return None;
        }
        let mut x = vec![T::zero(); self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = r[(row, self.cols)].clone();
        }
        Some(x)
    }

    /// Inverse of a square matrix, if invertible.
    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols, "inverse of non-square matrix");
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = T::one();
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = r[(i, n + j)].clone();
            }
        }
        Some(inv)
    }
}

/// Repeated exact solving against a fixed coefficient matrix: the reduction
/// is computed once and replayed on each right-hand side.
pub struct LinearSolver<T> {
    transform: Mat<T>,
    pivots: Vec<usize>,
    cols: usize,
}

impl<T: Scalar> LinearSolver<T> {
    pub fn new(a: &Mat<T>) -> Self {
        let rows = a.nrows();
        let mut aug = Mat::zeros(rows, a.ncols() + rows);
        for i in 0..rows {
            for j in 0..a.ncols() {
                aug[(i, j)] = a[(i, j)].clone();
            }
            aug[(i, a.ncols() + i)] = T::one();
        }
        // Gauss-Jordan restricted to the first block; the identity block
        // records the row transform.
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..a.ncols() {
            if r == rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| !aug[(i, c)].is_zero()) else {
                continue;
            };
            for j in 0..aug.ncols() {
                let t = aug[(r, j)].clone();
                aug[(r, j)] = aug[(p, j)].clone();
                aug[(p, j)] = t;
            }
            let inv = T::one() / aug[(r, c)].clone();
            for j in 0..aug.ncols() {
                aug[(r, j)] = aug[(r, j)].clone() * inv.clone();
            }
            for i in 0..rows {
                if i != r && !aug[(i, c)].is_zero() {
                    let f = aug[(i, c)].clone();
                    for j in 0..aug.ncols() {
                        let t = f.clone() * aug[(r, j)].clone();
                        aug[(i, j)] = aug[(i, j)].clone() - t;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        let mut transform = Mat::zeros(rows, rows);
        for i in 0..rows {
            for j in 0..rows {
                transform[(i, j)] = aug[(i, a.ncols() + j)].clone();
            }
        }
        LinearSolver {
            transform,
            pivots,
            cols: a.ncols(),
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// One solution of A x = b, or None if inconsistent.
    pub fn solve(&self, b: &[T]) -> Option<Vec<T>> {
        let c = self.transform.mul_vec(b);
        for i in self.pivots.len()..c.len() {
            if !c[i].is_zero() {
                return None;
            }
        }
        let mut x = vec![T::zero(); self.cols];
        for (row, &pc) in self.pivots.iter().enumerate() {
            x[pc] = c[row].clone();
        }
        Some(x)
    }

    /// Whether b lies in the column span of A.
    pub fn in_span(&self, b: &[T]) -> bool {
        self.solve(b).is_some()
    }
}

/// Signature (n_plus, n_minus, n_zero) of a symmetric rational matrix,
/// computed by exact symmetric congruence reduction with diagonal pivoting
/// and the hyperbolic-pair fix for all-zero diagonals. No eigenvalues, no
/// floating point.
pub fn symmetric_signature(g: &QMat) -> (usize, usize, usize) {
    assert_eq!(g.nrows(), g.ncols(), "signature of non-square matrix");
    let n = g.nrows();
    for i in 0..n {
        for j in 0..i {
            assert_eq!(g[(i, j)], g[(j, i)], "signature of non-symmetric matrix");
        }
    }
    let mut m = g.clone();
    let mut active: Vec<usize> = (0..n).collect();
    let mut pos = 0usize;
    let mut neg = 0usize;
    while !active.is_empty() {
        if let Some(&i) = active.iter().find(|&&i| !m[(i, i)].is_zero()) {
            if m[(i, i)].is_positive() {
                pos += 1;
            } else {
                neg += 1;
            }
            let others: Vec<usize> = active.iter().copied().filter(|&k| k != i).collect();
            let d = m[(i, i)].clone();
            for &j in &others {
                if m[(j, i)].is_zero() {
                    continue;
                }
                let f = &m[(j, i)] / &d;
                for &k in &others {
                    let t = &f * &m[(i, k)];
                    m[(j, k)] = &m[(j, k)] - &t;
                }
                m[(j, i)] = Rational::zero();
                m[(i, j)] = Rational::zero();
            }
            active = others;
        } else {
            // All active diagonal entries vanish; hunt an off-diagonal one.
            let mut pair = None;
            'outer: for (a, &i) in active.iter().enumerate() {
                for &j in active.iter().skip(a + 1) {
                    if !m[(i, j)].is_zero() {
                        pair = Some((i, j));
                        break 'outer;
                    }
                }
            }
            let Some((i, j)) = pair else {
                // Fully zero block.
                return (pos, neg, n - pos - neg);
            };
            // Congruence by "row i += row j" makes m[i][i] = 2 m[i][j] != 0.
            for &k in &active {
                let t = m[(j, k)].clone();
                m[(i, k)] = &m[(i, k)] + &t;
            }
            for &k in &active {
                let t = m[(k, j)].clone();
                m[(k, i)] = &m[(k, i)] + &t;
            }
        }
    }
    (pos, neg, n - pos - neg)
}

/// Convenience: rational matrix from i64 rows.
pub fn qmat(rows: &[&[i64]]) -> QMat {
    Mat::from_rows(
        rows.iter()
            .map(|r| r.iter().map(|&x| super::rint(x)).collect())
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rint};

    #[test]
    fn rank_of_dependent_rows() {
        // Second row is a multiple of the first.
        let m = qmat(&[&[1, 2], &[2, 4]]);
        assert_eq!(m.rank(), 1);
        assert_eq!(Mat::<Rational>::identity(3).rank(), 3);
        assert_eq!(QMat::zeros(2, 5).rank(), 0);
    }

    #[test]
    fn rank_with_fractions() {
        let m = Mat::from_rows(vec![
            vec![rat(1, 2), rat(1, 3)],
            vec![rat(3, 2), rint(1)],
            vec![rint(0), rat(1, 7)],
        ]);
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn kernel_of_rank_one_matrix() {
        let m = qmat(&[&[1, 1], &[1, 1]]);
        let k = m.kernel();
        assert_eq!(k.len(), 1);
        // Kernel spanned by (1, -1).
        let v = &k[0];
        assert!((v[0].clone() + v[1].clone()).is_zero());
        assert!(!v[0].is_zero());
    }

    #[test]
    fn kernel_respects_rank_nullity() {
        let m = qmat(&[&[1, 2, 3], &[4, 5, 6]]);
        assert_eq!(m.rank() + m.kernel().len(), 3);
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let m = qmat(&[&[1, 1], &[0, 1]]);
        let x = m.solve(&[rint(3), rint(1)]).unwrap();
        assert_eq!(x, vec![rint(2), rint(1)]);
        let sing = qmat(&[&[1, 1], &[2, 2]]);
        assert!(sing.solve(&[rint(1), rint(3)]).is_none());
        assert!(sing.solve(&[rint(1), rint(2)]).is_some());
    }

    #[test]
    fn inverse_round_trip() {
        let m = qmat(&[&[2, 1], &[1, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Mat::identity(2));
        assert!(qmat(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn linear_solver_matches_direct_solve() {
        let m = qmat(&[&[1, 2, 0], &[0, 1, 1]]);
        let s = LinearSolver::new(&m);
        let b = vec![rint(5), rint(2)];
        let x = s.solve(&b).unwrap();
        assert_eq!(m.mul_vec(&x), b);
        assert_eq!(s.rank(), 2);
    }

    #[test]
    fn gaussian_rank_and_kernel() {
        use crate::exact::{gaussian, gi, greal};
        // Rows (1, i) and (i, -1) are dependent over Q(i).
        let m: GMat = Mat::from_rows(vec![
            vec![greal(rint(1)), gi()],
            vec![gi(), greal(rint(-1))],
        ]);
        assert_eq!(m.rank(), 1);
        let k = m.kernel();
        assert_eq!(k.len(), 1);
        let v = &k[0];
        let z = v[0].clone() * greal(rint(1)) + v[1].clone() * gi();
        assert!(z.is_zero());
        let _ = gaussian(rint(1), rint(2));
    }

    #[test]
    fn signature_of_diagonal_and_hyperbolic() {
        let d = qmat(&[&[2, 0, 0], &[0, -3, 0], &[0, 0, 0]]);
        assert_eq!(symmetric_signature(&d), (1, 1, 1));
        // Hyperbolic plane: signature (1, 1).
        let h = qmat(&[&[0, 1], &[1, 0]]);
        assert_eq!(symmetric_signature(&h), (1, 1, 0));
        // Dense negative definite example.
        let nd = qmat(&[&[-2, 1], &[1, -2]]);
        assert_eq!(symmetric_signature(&nd), (0, 2, 0));
    }
}
