//! Dense exact matrices over a [`FieldSpec`], with the kernel/image/solve
//! machinery every homological computation here reduces to.
//!
//! Everything is Gaussian elimination over exact scalars. Matrices are tiny
//! (module dimensions stay well under a hundred), so no sparse or fraction-free
//! tricks are needed.

use crate::field::{FieldSpec, Scalar};
use std::fmt;

#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    field: FieldSpec,
    entries: Vec<Scalar>, // row-major
}

impl Mat {
    pub fn zero(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            field,
            entries: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Mat::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: FieldSpec, rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            entries.extend(row);
        }
        Mat {
            rows: r,
            cols: c,
            field,
            entries,
        }
    }

    pub fn from_fn(
        field: FieldSpec,
        rows: usize,
        cols: usize,
        f: impl Fn(usize, usize) -> Scalar,
    ) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Mat {
            rows,
            cols,
            field,
            entries,
        }
    }

    /// Builds a matrix of small integers, handy in tests and constructions.
    pub fn from_ints(field: FieldSpec, rows: &[&[i64]]) -> Self {
        Mat::from_rows(
            field,
            rows.iter()
                .map(|r| r.iter().map(|&n| field.from_int(n)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.field, self.cols, self.rows, |i, j| {
            self.get(j, i).clone()
        })
    }

    pub fn mul(&self, rhs: &Mat) -> Mat {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = Mat::zero(self.field, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let term = a * rhs.get(k, j);
                    if !term.is_zero() {
                        let cur = out.get(i, j) + &term;
                        out.set(i, j, cur);
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Mat::from_fn(self.field, self.rows, self.cols, |i, j| {
            self.get(i, j) + rhs.get(i, j)
        })
    }

    pub fn sub(&self, rhs: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Mat::from_fn(self.field, self.rows, self.cols, |i, j| {
            self.get(i, j) - rhs.get(i, j)
        })
    }

    pub fn neg(&self) -> Mat {
        Mat::from_fn(self.field, self.rows, self.cols, |i, j| -self.get(i, j))
    }

    pub fn scale(&self, s: &Scalar) -> Mat {
        Mat::from_fn(self.field, self.rows, self.cols, |i, j| self.get(i, j) * s)
    }

    /// Horizontal concatenation `[self | rhs]`.
    pub fn hstack(&self, rhs: &Mat) -> Mat {
        assert_eq!(self.rows, rhs.rows);
        Mat::from_fn(self.field, self.rows, self.cols + rhs.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                rhs.get(i, j - self.cols).clone()
            }
        })
    }

    /// Vertical concatenation.
    pub fn vstack(&self, rhs: &Mat) -> Mat {
        assert_eq!(self.cols, rhs.cols);
        Mat::from_fn(self.field, self.rows + rhs.rows, self.cols, |i, j| {
            if i < self.rows {
                self.get(i, j).clone()
            } else {
                rhs.get(i - self.rows, j).clone()
            }
        })
    }

    pub fn hstack_all(field: FieldSpec, rows: usize, mats: &[Mat]) -> Mat {
        let mut acc = Mat::zero(field, rows, 0);
        for m in mats {
            acc = acc.hstack(m);
        }
        acc
    }

    pub fn vstack_all(field: FieldSpec, cols: usize, mats: &[Mat]) -> Mat {
        let mut acc = Mat::zero(field, 0, cols);
        for m in mats {
            acc = acc.vstack(m);
        }
        acc
    }

    pub fn block_diag(field: FieldSpec, blocks: &[Mat]) -> Mat {
        let rows = blocks.iter().map(Mat::rows).sum();
        let cols = blocks.iter().map(Mat::cols).sum();
        let mut out = Mat::zero(field, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.set(r0 + i, c0 + j, b.get(i, j).clone());
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn submatrix_cols(&self, cols: &[usize]) -> Mat {
        Mat::from_fn(self.field, self.rows, cols.len(), |i, j| {
            self.get(i, cols[j]).clone()
        })
    }

    /// Reduced row echelon form; returns (rref, pivot columns).
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(pr) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(row, pr);
            let inv = m.get(row, col).inv().expect("pivot nonzero");
            for j in col..m.cols {
                let v = m.get(row, j) * &inv;
                m.set(row, j, v);
            }
            for r in 0..m.rows {
                if r != row && !m.get(r, col).is_zero() {
                    let factor = m.get(r, col).clone();
                    for j in col..m.cols {
                        let v = m.get(r, j) - &(&factor * m.get(row, j));
                        m.set(r, j, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right null space, returned as columns. `self * out = 0`.
    pub fn kernel(&self) -> Mat {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Mat::zero(self.field, self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            out.set(fc, k, self.field.one());
            for (prow, &pc) in pivots.iter().enumerate() {
                out.set(pc, k, -r.get(prow, fc));
            }
        }
        out
    }

    /// Basis of the column space, returned as columns of the original matrix.
    pub fn column_space(&self) -> Mat {
        let (_, pivots) = self.rref();
        self.submatrix_cols(&pivots)
    }

    /// Basis of the left null space as rows: `out * self = 0`, full row rank.
    /// The rows present the cokernel of `self` as a quotient projection.
    pub fn left_kernel(&self) -> Mat {
        self.transpose().kernel().transpose()
    }

    /// Solves `self * X = rhs` column by column; `None` if inconsistent.
    pub fn solve(&self, rhs: &Mat) -> Option<Mat> {
        assert_eq!(self.rows, rhs.rows, "solve shape mismatch");
        let aug = self.hstack(rhs);
        let (r, pivots) = aug.rref();
        // Any pivot in the rhs block marks an inconsistent column.
        if pivots.iter().any(|&c| c >= self.cols) {
            return None;
        }
        let mut x = Mat::zero(self.field, self.cols, rhs.cols);
        for (prow, &pc) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x.set(pc, j, r.get(prow, self.cols + j).clone());
            }
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Mat> {
        if self.rows != self.cols {
            return None;
        }
        let x = self.solve(&Mat::identity(self.field, self.rows))?;
        if self.mul(&x) == Mat::identity(self.field, self.rows) {
            Some(x)
        } else {
            None
        }
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    /// Stacks all entries into one column vector (row-major order).
    pub fn vectorize(&self) -> Vec<Scalar> {
        self.entries.clone()
    }

    /// Kronecker product: index `(i1*rows(b)+i2, j1*cols(b)+j2)` carries
    /// `a[i1,j1] * b[i2,j2]`.
    pub fn kron(&self, b: &Mat) -> Mat {
        Mat::from_fn(
            self.field,
            self.rows * b.rows,
            self.cols * b.cols,
            |i, j| self.get(i / b.rows, j / b.cols) * b.get(i % b.rows, j % b.cols),
        )
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const Q: FieldSpec = FieldSpec::Rationals;

    #[test]
    fn rref_and_rank() {
        let m = Mat::from_ints(Q, &[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(m.rank(), 2);
        let k = m.kernel();
        assert_eq!(k.cols(), 1);
        assert!(m.mul(&k).is_zero());
    }

    #[test]
    fn solve_consistent_and_not() {
        let a = Mat::from_ints(Q, &[&[1, 1], &[0, 1]]);
        let b = Mat::from_ints(Q, &[&[3], &[1]]);
        let x = a.solve(&b).unwrap();
        assert_eq!(a.mul(&x), b);

        let singular = Mat::from_ints(Q, &[&[1, 1], &[1, 1]]);
        let bad = Mat::from_ints(Q, &[&[0], &[1]]);
        assert!(singular.solve(&bad).is_none());
    }

    #[test]
    fn inverse_round_trip() {
        let a = Mat::from_ints(Q, &[&[2, 1], &[1, 1]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Mat::identity(Q, 2));
        let sing = Mat::from_ints(Q, &[&[1, 2], &[2, 4]]);
        assert!(sing.inverse().is_none());
    }

    #[test]
    fn empty_shapes() {
        let a = Mat::zero(Q, 0, 3);
        assert_eq!(a.rank(), 0);
        assert_eq!(a.kernel().cols(), 3);
        let b = Mat::zero(Q, 3, 0);
        assert_eq!(b.kernel().cols(), 0);
        assert_eq!(b.left_kernel().rows(), 3);
        let x = a.solve(&Mat::zero(Q, 0, 2)).unwrap();
        assert_eq!((x.rows(), x.cols()), (3, 2));
    }

    #[test]
    fn left_kernel_presents_cokernel() {
        let a = Mat::from_ints(Q, &[&[1, 0], &[0, 0], &[2, 0]]);
        let lk = a.left_kernel();
        assert_eq!(lk.rows(), 2); // cokernel dimension 3 - rank 1
        assert!(lk.mul(&a).is_zero());
        assert_eq!(lk.rank(), 2);
    }

    fn small_mat() -> impl Strategy<Value = Mat> {
        (1usize..4, 1usize..4).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-3i64..4, r * c).prop_map(move |vals| {
                Mat::from_fn(Q, r, c, |i, j| Q.from_int(vals[i * c + j]))
            })
        })
    }

    proptest! {
        #[test]
        fn rank_nullity(m in small_mat()) {
            let k = m.kernel();
            prop_assert_eq!(m.rank() + k.cols(), m.cols());
            prop_assert!(m.mul(&k).is_zero());
            prop_assert_eq!(k.rank(), k.cols());
        }

        #[test]
        fn column_space_spans(m in small_mat()) {
            let cs = m.column_space();
            prop_assert_eq!(cs.rank(), m.rank());
            // every original column solvable from the basis
            prop_assert!(cs.solve(&m).is_some());
        }
    }
}
