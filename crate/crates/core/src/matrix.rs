//! Dense matrices over an exact field, with the rank/kernel/solve
//! machinery the rest of the crate is built on.
//!
//! Shape errors are bugs, not user errors, so they panic. Input
//! validation with recoverable errors happens where documents are parsed.

use crate::field::Field;
use crate::poly::Poly;
use std::fmt;

#[derive(Clone, PartialEq)]
pub struct Matrix<K: Field> {
    ctx: K::Ctx,
    rows: usize,
    cols: usize,
    entries: Vec<K>, // row-major
}

impl<K: Field> fmt::Debug for Matrix<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                write!(f, "{} ", self.at(r, c))?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl<K: Field> Matrix<K> {
    pub fn zero(ctx: K::Ctx, rows: usize, cols: usize) -> Self {
        Matrix {
            ctx,
            rows,
            cols,
            entries: vec![K::zero(ctx); rows * cols],
        }
    }

    pub fn identity(ctx: K::Ctx, n: usize) -> Self {
        let mut m = Self::zero(ctx, n, n);
        for i in 0..n {
            *m.at_mut(i, i) = K::one(ctx);
        }
        m
    }

    pub fn scalar(ctx: K::Ctx, n: usize, value: K) -> Self {
        let mut m = Self::zero(ctx, n, n);
        for i in 0..n {
            *m.at_mut(i, i) = value.clone();
        }
        m
    }

    pub fn from_fn(ctx: K::Ctx, rows: usize, cols: usize, f: impl Fn(usize, usize) -> K) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        Matrix {
            ctx,
            rows,
            cols,
            entries,
        }
    }

    pub fn from_rows(ctx: K::Ctx, rows: Vec<Vec<K>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        for row in &rows {
            assert_eq!(row.len(), c, "ragged rows");
        }
        Matrix {
            ctx,
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    /// Integer literal matrix, convenient in tests and fixtures.
    pub fn from_i64(ctx: K::Ctx, rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        Self::from_fn(ctx, r, c, |i, j| K::from_i64(ctx, rows[i][j]))
    }

    pub fn ctx(&self) -> K::Ctx {
        self.ctx
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &K {
        assert!(r < self.rows && c < self.cols, "index out of range");
        &self.entries[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut K {
        assert!(r < self.rows && c < self.cols, "index out of range");
        &mut self.entries[r * self.cols + c]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.ctx, self.cols, self.rows, |r, c| self.at(c, r).clone())
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        Self::from_fn(self.ctx, self.rows, self.cols, |r, c| {
            self.at(r, c).add(rhs.at(r, c))
        })
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        Self::from_fn(self.ctx, self.rows, self.cols, |r, c| {
            self.at(r, c).sub(rhs.at(r, c))
        })
    }

    pub fn neg(&self) -> Self {
        Self::from_fn(self.ctx, self.rows, self.cols, |r, c| self.at(r, c).neg())
    }

    pub fn scale(&self, k: &K) -> Self {
        Self::from_fn(self.ctx, self.rows, self.cols, |r, c| self.at(r, c).mul(k))
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in product");
        let mut out = Self::zero(self.ctx, self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let b = rhs.at(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.at(r, c).add(&a.mul(b));
                    *out.at_mut(r, c) = cur;
                }
            }
        }
        out
    }

    /// Apply to a column vector given as a slice.
    pub fn apply(&self, v: &[K]) -> Vec<K> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                let mut acc = K::zero(self.ctx);
                for c in 0..self.cols {
                    if !v[c].is_zero() && !self.at(r, c).is_zero() {
                        acc = acc.add(&self.at(r, c).mul(&v[c]));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn column(&self, c: usize) -> Vec<K> {
        (0..self.rows).map(|r| self.at(r, c).clone()).collect()
    }

    pub fn hstack(&self, rhs: &Self) -> Self {
        assert_eq!(self.rows, rhs.rows, "hstack row mismatch");
        Self::from_fn(self.ctx, self.rows, self.cols + rhs.cols, |r, c| {
            if c < self.cols {
                self.at(r, c).clone()
            } else {
                rhs.at(r, c - self.cols).clone()
            }
        })
    }

    pub fn vstack(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.cols, "vstack col mismatch");
        Self::from_fn(self.ctx, self.rows + rhs.rows, self.cols, |r, c| {
            if r < self.rows {
                self.at(r, c).clone()
            } else {
                rhs.at(r - self.rows, c).clone()
            }
        })
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, rhs: &Self) -> Self {
        Self::from_fn(
            self.ctx,
            self.rows + rhs.rows,
            self.cols + rhs.cols,
            |r, c| {
                if r < self.rows && c < self.cols {
                    self.at(r, c).clone()
                } else if r >= self.rows && c >= self.cols {
                    rhs.at(r - self.rows, c - self.cols).clone()
                } else {
                    K::zero(self.ctx)
                }
            },
        )
    }

    /// Assemble from a grid of blocks; `row_dims`/`col_dims` fix the shape
    /// so zero blocks can be passed as `None`.
    pub fn from_blocks(
        ctx: K::Ctx,
        row_dims: &[usize],
        col_dims: &[usize],
        block: impl Fn(usize, usize) -> Option<Matrix<K>>,
    ) -> Self {
        let rows: usize = row_dims.iter().sum();
        let cols: usize = col_dims.iter().sum();
        let mut out = Self::zero(ctx, rows, cols);
        let mut roff = 0;
        for (bi, &rd) in row_dims.iter().enumerate() {
            let mut coff = 0;
            for (bj, &cd) in col_dims.iter().enumerate() {
                if let Some(b) = block(bi, bj) {
                    assert_eq!((b.rows, b.cols), (rd, cd), "block shape mismatch");
                    for r in 0..rd {
                        for c in 0..cd {
                            *out.at_mut(roff + r, coff + c) = b.at(r, c).clone();
                        }
                    }
                }
                coff += cd;
            }
            roff += rd;
        }
        out
    }

    pub fn kronecker(&self, rhs: &Self) -> Self {
        Self::from_fn(
            self.ctx,
            self.rows * rhs.rows,
            self.cols * rhs.cols,
            |r, c| {
                let (r1, r2) = (r / rhs.rows, r % rhs.rows);
                let (c1, c2) = (c / rhs.cols, c % rhs.cols);
                self.at(r1, c1).mul(rhs.at(r2, c2))
            },
        )
    }

    /// Reduced row echelon form, returning the pivot columns.
    pub fn rref(&self) -> (Matrix<K>, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| !m.at(i, c).is_zero()) else {
                continue;
            };
            if pr != r {
                for cc in 0..m.cols {
                    let tmp = m.at(pr, cc).clone();
                    *m.at_mut(pr, cc) = m.at(r, cc).clone();
                    *m.at_mut(r, cc) = tmp;
                }
            }
            let inv = m.at(r, c).inv().expect("pivot nonzero");
            for cc in 0..m.cols {
                let v = m.at(r, cc).mul(&inv);
                *m.at_mut(r, cc) = v;
            }
            for rr in 0..m.rows {
                if rr != r && !m.at(rr, c).is_zero() {
                    let factor = m.at(rr, c).clone();
                    for cc in 0..m.cols {
                        let v = m.at(rr, cc).sub(&factor.mul(m.at(r, cc)));
                        *m.at_mut(rr, cc) = v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the null space, returned as the columns of a matrix.
    pub fn kernel_basis(&self) -> Matrix<K> {
        let (red, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Matrix::zero(self.ctx, self.cols, free.len());
        for (j, &fc) in free.iter().enumerate() {
            *out.at_mut(fc, j) = K::one(self.ctx);
            for (i, &pc) in pivots.iter().enumerate() {
                *out.at_mut(pc, j) = red.at(i, fc).neg();
            }
        }
        out
    }

    /// Basis of the column space: the pivot columns of the original matrix.
    pub fn image_basis(&self) -> Matrix<K> {
        let (_, pivots) = self.rref();
        Matrix::from_fn(self.ctx, self.rows, pivots.len(), |r, j| {
            self.at(r, pivots[j]).clone()
        })
    }

    /// Solve `self * X = B` for all columns of `B` at once. `None` if any
    /// column is inconsistent.
    pub fn solve(&self, b: &Matrix<K>) -> Option<Matrix<K>> {
        assert_eq!(self.rows, b.rows, "solve shape mismatch");
        let aug = self.hstack(b);
        let (red, pivots) = aug.rref();
        // Inconsistent iff some pivot lies in the B-part.
        if pivots.iter().any(|&c| c >= self.cols) {
            return None;
        }
        let mut x = Matrix::zero(self.ctx, self.cols, b.cols);
        for (i, &pc) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                *x.at_mut(pc, j) = red.at(i, self.cols + j).clone();
            }
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Matrix<K>> {
        if self.rows != self.cols {
            return None;
        }
        let x = self.solve(&Matrix::identity(self.ctx, self.rows))?;
        if self.mul(&x) == Matrix::identity(self.ctx, self.rows) {
            Some(x)
        } else {
            None
        }
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    pub fn trace(&self) -> K {
        assert_eq!(self.rows, self.cols, "trace of non-square");
        let mut acc = K::zero(self.ctx);
        for i in 0..self.rows {
            acc = acc.add(self.at(i, i));
        }
        acc
    }

    /// Characteristic polynomial det(tI - A) via Hessenberg reduction,
    /// valid over any exact field.
    pub fn char_poly(&self) -> Poly<K> {
        assert_eq!(self.rows, self.cols, "char_poly of non-square");
        let n = self.rows;
        let ctx = self.ctx;
        let mut h = self.clone();
        // Reduce to upper Hessenberg by similarity; swaps are applied to
        // both rows and columns so the spectrum is unchanged.
        for c in 0..n.saturating_sub(2) {
            let Some(pr) = (c + 1..n).find(|&r| !h.at(r, c).is_zero()) else {
                continue;
            };
            if pr != c + 1 {
                h.swap_rows(pr, c + 1);
                h.swap_cols(pr, c + 1);
            }
            let inv = h.at(c + 1, c).inv().expect("nonzero pivot");
            for r in c + 2..n {
                if h.at(r, c).is_zero() {
                    continue;
                }
                let factor = h.at(r, c).mul(&inv);
                // row_r -= factor * row_{c+1}; col_{c+1} += factor * col_r
                for cc in 0..n {
                    let v = h.at(r, cc).sub(&factor.mul(h.at(c + 1, cc)));
                    *h.at_mut(r, cc) = v;
                }
                for rr in 0..n {
                    let v = h.at(rr, c + 1).add(&factor.mul(h.at(rr, r)));
                    *h.at_mut(rr, c + 1) = v;
                }
            }
        }
        // Leading-minor recurrence for det(tI - H), H upper Hessenberg.
        let one = Poly::constant(ctx, K::one(ctx));
        let mut p: Vec<Poly<K>> = vec![one];
        for k in 1..=n {
            let t_minus = Poly::from_coeffs(ctx, vec![h.at(k - 1, k - 1).neg(), K::one(ctx)]);
            let mut acc = t_minus.mul(&p[k - 1]);
            let mut subprod = K::one(ctx);
            for m in (1..k).rev() {
                // product of subdiagonal entries h[m..k-1][m-1..k-2]
                subprod = subprod.mul(h.at(m, m - 1));
                if subprod.is_zero() {
                    break;
                }
                let coeff = h.at(m - 1, k - 1).mul(&subprod);
                if coeff.is_zero() {
                    continue;
                }
                acc = acc.sub(&p[m - 1].scale(&coeff));
            }
            p.push(acc);
        }
        p.pop().unwrap()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for c in 0..self.cols {
            let tmp = self.at(a, c).clone();
            *self.at_mut(a, c) = self.at(b, c).clone();
            *self.at_mut(b, c) = tmp;
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for r in 0..self.rows {
            let tmp = self.at(r, a).clone();
            *self.at_mut(r, a) = self.at(r, b).clone();
            *self.at_mut(r, b) = tmp;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Fp, Rat};

    fn m(rows: &[&[i64]]) -> Matrix<Rat> {
        Matrix::from_i64((), rows)
    }

    #[test]
    fn rank_kernel_image() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(a.rank(), 2);
        let k = a.kernel_basis();
        assert_eq!(k.cols(), 1);
        assert!(a.mul(&k).is_zero());
        let im = a.image_basis();
        assert_eq!(im.cols(), 2);
    }

    #[test]
    fn solve_and_inverse() {
        let a = m(&[&[2, 1], &[1, 1]]);
        let b = m(&[&[3], &[2]]);
        let x = a.solve(&b).unwrap();
        assert_eq!(a.mul(&x), b);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity((), 2));

        let sing = m(&[&[1, 2], &[2, 4]]);
        assert!(sing.inverse().is_none());
        assert!(sing.solve(&m(&[&[1], &[0]])).is_none());
    }

    #[test]
    fn kernel_over_prime_field() {
        let a: Matrix<Fp> = Matrix::from_i64(5, &[&[1, 2], &[3, 6]]);
        // second row = 3 * first over F_5
        assert_eq!(a.rank(), 1);
        let k = a.kernel_basis();
        assert!(a.mul(&k).is_zero());
        assert_eq!(k.cols(), 1);
    }

    #[test]
    fn empty_shapes() {
        let a = Matrix::<Rat>::zero((), 0, 3);
        assert_eq!(a.kernel_basis().cols(), 3);
        let b = Matrix::<Rat>::zero((), 3, 0);
        assert_eq!(b.kernel_basis().cols(), 0);
        assert_eq!(b.rank(), 0);
    }

    #[test]
    fn char_poly_matches_hand_expansion() {
        // det(tI - [[2,1],[0,3]]) = (t-2)(t-3) = t^2 - 5t + 6
        let a = m(&[&[2, 1], &[0, 3]]);
        let p = a.char_poly();
        assert_eq!(p, Poly::from_i64((), &[6, -5, 1]));

        // companion matrix of t^3 - t - 1
        let c = m(&[&[0, 0, 1], &[1, 0, 1], &[0, 1, 0]]);
        assert_eq!(c.char_poly(), Poly::from_i64((), &[-1, -1, 0, 1]));
    }

    #[test]
    fn char_poly_needs_pivot_search() {
        let a = m(&[&[0, 0, 1], &[0, 0, 1], &[1, 1, 0]]);
        let p = a.char_poly();
        // eigenvalues: 0 and ±sqrt(2): t(t^2-2)
        assert_eq!(p, Poly::from_i64((), &[0, -2, 0, 1]));
    }

    #[test]
    fn kronecker_product() {
        let a = m(&[&[1, 2]]);
        let b = m(&[&[3], &[4]]);
        let k = a.kronecker(&b);
        assert_eq!(k, m(&[&[3, 6], &[4, 8]]));
    }
}
