//! Block linear systems in matrix unknowns.
//!
//! Equations have the shape  sum_i  M_i . X_{v_i} . N_i  =  RHS,
//! which covers chain-map conditions, homotopy equations and commuting
//! constraints. Unknowns are flattened row-major and the whole system is
//! solved exactly in one pass.

use crate::field::Field;
use crate::matrix::Matrix;

pub struct BlockSystem<K: Field> {
    ctx: K::Ctx,
    shapes: Vec<(usize, usize)>,
    offsets: Vec<usize>,
    total: usize,
    rows: Vec<Matrix<K>>, // coefficient rows, one matrix block of width `total` per equation
    rhs: Vec<Matrix<K>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Var(usize);

pub struct Equation<K: Field> {
    rows: usize,
    cols: usize,
    coeff: Matrix<K>,
    rhs: Matrix<K>,
}

impl<K: Field> BlockSystem<K> {
    pub fn new(ctx: K::Ctx) -> Self {
        BlockSystem {
            ctx,
            shapes: vec![],
            offsets: vec![],
            total: 0,
            rows: vec![],
            rhs: vec![],
        }
    }

    /// Declare a matrix unknown of the given shape.
    pub fn var(&mut self, rows: usize, cols: usize) -> Var {
        self.shapes.push((rows, cols));
        self.offsets.push(self.total);
        self.total += rows * cols;
        Var(self.shapes.len() - 1)
    }

    /// Start an equation with target shape `rows x cols` and the given
    /// right-hand side.
    pub fn equation(&mut self, rhs: Matrix<K>) -> Equation<K> {
        Equation {
            rows: rhs.rows(),
            cols: rhs.cols(),
            coeff: Matrix::zero(self.ctx, rhs.rows() * rhs.cols(), self.total),
            rhs,
        }
    }

    /// Add the term `left . X_var . right` to an equation.
    pub fn add_term(
        &self,
        eq: &mut Equation<K>,
        var: Var,
        left: &Matrix<K>,
        right: &Matrix<K>,
    ) {
        let (vr, vc) = self.shapes[var.0];
        assert_eq!(left.cols(), vr, "left factor width");
        assert_eq!(right.rows(), vc, "right factor height");
        assert_eq!(left.rows(), eq.rows, "term lands in equation rows");
        assert_eq!(right.cols(), eq.cols, "term lands in equation cols");
        if vr == 0 || vc == 0 || eq.rows == 0 || eq.cols == 0 {
            return;
        }
        // row-major vec: vec(L X R) = (L kron R^T) vec(X)
        let block = left.kronecker(&right.transpose());
        let off = self.offsets[var.0];
        for r in 0..block.rows() {
            for c in 0..block.cols() {
                let v = eq.coeff.at(r, off + c).add(block.at(r, c));
                *eq.coeff.at_mut(r, off + c) = v;
            }
        }
    }

    pub fn push(&mut self, eq: Equation<K>) {
        let mut rhs_vec = Matrix::zero(self.ctx, eq.rows * eq.cols, 1);
        for r in 0..eq.rows {
            for c in 0..eq.cols {
                *rhs_vec.at_mut(r * eq.cols + c, 0) = eq.rhs.at(r, c).clone();
            }
        }
        self.rows.push(eq.coeff);
        self.rhs.push(rhs_vec);
    }

    /// Solve; on success return each unknown as a matrix.
    pub fn solve(&self) -> Option<Vec<Matrix<K>>> {
        let height: usize = self.rows.iter().map(|m| m.rows()).sum();
        let mut coeff = Matrix::zero(self.ctx, height, self.total);
        let mut rhs = Matrix::zero(self.ctx, height, 1);
        let mut off = 0;
        for (block, b) in self.rows.iter().zip(&self.rhs) {
            for r in 0..block.rows() {
                for c in 0..self.total {
                    *coeff.at_mut(off + r, c) = block.at(r, c).clone();
                }
                *rhs.at_mut(off + r, 0) = b.at(r, 0).clone();
            }
            off += block.rows();
        }
        let sol = coeff.solve(&rhs)?;
        Some(
            self.shapes
                .iter()
                .zip(&self.offsets)
                .map(|(&(r, c), &o)| {
                    Matrix::from_fn(self.ctx, r, c, |i, j| sol.at(o + i * c + j, 0).clone())
                })
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rat;

    #[test]
    fn solves_sylvester_style_equation() {
        // find X with A X = B
        let a = Matrix::<Rat>::from_i64((), &[&[2, 0], &[0, 3]]);
        let b = Matrix::<Rat>::from_i64((), &[&[4, 2], &[9, 3]]);
        let mut sys = BlockSystem::new(());
        let x = sys.var(2, 2);
        let mut eq = sys.equation(b.clone());
        sys.add_term(&mut eq, x, &a, &Matrix::identity((), 2));
        sys.push(eq);
        let sol = sys.solve().unwrap();
        assert_eq!(a.mul(&sol[0]), b);
    }

    #[test]
    fn reports_infeasible() {
        // 0 * X = nonzero
        let mut sys = BlockSystem::new(());
        let x = sys.var(1, 1);
        let mut eq = sys.equation(Matrix::<Rat>::from_i64((), &[&[1]]));
        sys.add_term(&mut eq, x, &Matrix::zero((), 1, 1), &Matrix::identity((), 1));
        sys.push(eq);
        assert!(sys.solve().is_none());
    }
}
