//! Tensor and Hom complexes with their sign conventions, and the
//! degreewise linear dual.
//!
//! Hom differential: [df]^p = d_A . f^p + (-1)^{n+1} f^{p+1} . d_B for
//! f of total degree n; tensor differential carries the Koszul sign
//! (-1)^p on the second factor.

use crate::complex::{ChainMap, Complex};
use crate::field::Field;
use crate::matrix::Matrix;
use std::collections::BTreeMap;

/// Total complex of A^p (x) B^q. Basis of degree i is blocks by ascending
/// p, each block row-major (a-index major, b-index minor).
pub fn tensor<K: Field>(a: &Complex<K>, b: &Complex<K>) -> Complex<K> {
    let ctx = a.ctx();
    if a.is_zero_complex() || b.is_zero_complex() {
        return Complex::zero(ctx);
    }
    let lo = a.lo() + b.lo();
    let hi = a.hi() + b.hi();
    let block_dims = |i: i32| -> Vec<(i32, usize)> {
        (a.lo()..=a.hi())
            .map(|p| (p, a.dim(p) * b.dim(i - p)))
            .collect()
    };
    let dims: Vec<usize> = (lo..=hi)
        .map(|i| block_dims(i).iter().map(|x| x.1).sum())
        .collect();
    let diffs: Vec<Matrix<K>> = (lo..hi)
        .map(|i| {
            let src = block_dims(i);
            let tgt = block_dims(i + 1);
            let src_d: Vec<usize> = src.iter().map(|x| x.1).collect();
            let tgt_d: Vec<usize> = tgt.iter().map(|x| x.1).collect();
            Matrix::from_blocks(ctx, &tgt_d, &src_d, |bi, bj| {
                let (p_t, _) = tgt[bi];
                let (p_s, _) = src[bj];
                let q_s = i - p_s;
                if p_t == p_s + 1 && a.dim(p_s) > 0 && b.dim(q_s) > 0 && a.dim(p_t) > 0 {
                    // d_A (x) id
                    Some(a.d(p_s).kronecker(&Matrix::identity(ctx, b.dim(q_s))))
                } else if p_t == p_s && a.dim(p_s) > 0 && b.dim(q_s) > 0 && b.dim(q_s + 1) > 0 {
                    // (-1)^p id (x) d_B
                    let block = Matrix::identity(ctx, a.dim(p_s)).kronecker(&b.d(q_s));
                    Some(if p_s.rem_euclid(2) == 0 {
                        block
                    } else {
                        block.neg()
                    })
                } else {
                    None
                }
            })
        })
        .collect();
    Complex::new(ctx, lo, dims, diffs).expect("tensor differential squares to zero")
}

/// Hom^n(B, A) = prod_p Hom(B^p, A^{n+p}); each factor is flattened
/// row-major, blocks ordered by ascending p.
pub fn hom_complex<K: Field>(b: &Complex<K>, a: &Complex<K>) -> Complex<K> {
    let ctx = a.ctx();
    if a.is_zero_complex() || b.is_zero_complex() {
        return Complex::zero(ctx);
    }
    let lo = a.lo() - b.hi();
    let hi = a.hi() - b.lo();
    let block_dims = |n: i32| -> Vec<(i32, usize)> {
        (b.lo()..=b.hi())
            .map(|p| (p, a.dim(n + p) * b.dim(p)))
            .collect()
    };
    let dims: Vec<usize> = (lo..=hi)
        .map(|n| block_dims(n).iter().map(|x| x.1).sum())
        .collect();
    let diffs: Vec<Matrix<K>> = (lo..hi)
        .map(|n| {
            let src = block_dims(n);
            let tgt = block_dims(n + 1);
            let src_d: Vec<usize> = src.iter().map(|x| x.1).collect();
            let tgt_d: Vec<usize> = tgt.iter().map(|x| x.1).collect();
            // An element f^p in Hom(B^p, A^{n+p}) is a matrix X, flattened
            // row-major: entry (r, c) at index r*cols + c.
            // Post-composition X -> d_A X has matrix d_A (x) I_{B^p}^T ...
            // with row-major flattening: vec(dX) = (d (x) I) vec(X) where
            // vec is row-major and (M (x) N) acts as X -> M X N^T.
            Matrix::from_blocks(ctx, &tgt_d, &src_d, |bi, bj| {
                let (p_t, _) = tgt[bi];
                let (p_s, _) = src[bj];
                if p_t == p_s {
                    // f^p -> d_A^{n+p} . f^p : vec(dX) = (d (x) I) vec X
                    let rows_a = a.dim(n + p_s);
                    let cols_b = b.dim(p_s);
                    if rows_a == 0 || cols_b == 0 || a.dim(n + p_s + 1) == 0 {
                        return None;
                    }
                    Some(a.d(n + p_s).kronecker(&Matrix::identity(ctx, cols_b)))
                } else if p_t == p_s - 1 {
                    // f^p -> (-1)^{n+1} f^p . d_B^{p-1} :
                    // vec(X d) = (I (x) d^T) vec X
                    let rows_a = a.dim(n + p_s);
                    if rows_a == 0 || b.dim(p_s) == 0 || b.dim(p_t) == 0 {
                        return None;
                    }
                    let block =
                        Matrix::identity(ctx, rows_a).kronecker(&b.d(p_t).transpose());
                    Some(if (n + 1).rem_euclid(2) == 0 {
                        block
                    } else {
                        block.neg()
                    })
                } else {
                    None
                }
            })
        })
        .collect();
    Complex::new(ctx, lo, dims, diffs).expect("hom differential squares to zero")
}

/// Degreewise linear dual: Hom(A, k in degree 0).
pub fn dual_complex<K: Field>(a: &Complex<K>) -> Complex<K> {
    hom_complex(a, &Complex::point(a.ctx(), 1, 0))
}

/// Contravariant functoriality of the dual: a map A -> B dualizes to
/// plain transposes D(B) -> D(A).
pub fn dual_map<K: Field>(f: &ChainMap<K>) -> ChainMap<K> {
    let da = dual_complex(f.source());
    let db = dual_complex(f.target());
    let mut comps = BTreeMap::new();
    for n in db.support() {
        comps.insert(n, f.comp(-n).transpose());
    }
    ChainMap::new(db, da, comps).expect("dual map commutes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rat;

    fn sample() -> Complex<Rat> {
        Complex::new(
            (),
            -1,
            vec![1, 2, 1],
            vec![
                Matrix::from_i64((), &[&[1], &[0]]),
                Matrix::from_i64((), &[&[0, 1]]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn tensor_unit() {
        let a = sample();
        let unit = Complex::point((), 1, 0);
        assert_eq!(tensor(&a, &unit), a);
        assert_eq!(tensor(&unit, &a), a);
    }

    #[test]
    fn tensor_dims_convolve() {
        let a = sample();
        let b = sample();
        let t = tensor(&a, &b);
        for i in t.lo()..=t.hi() {
            let expect: usize = (a.lo()..=a.hi()).map(|p| a.dim(p) * b.dim(i - p)).sum();
            assert_eq!(t.dim(i), expect);
        }
    }

    #[test]
    fn hom_point_complexes() {
        let k0 = Complex::<Rat>::point((), 1, 0);
        let h = hom_complex(&k0, &k0);
        assert_eq!(h, k0);
    }

    #[test]
    fn hom_shift_identity_dims() {
        let a = sample();
        let b = sample().shift(1);
        for k in -2..=2 {
            let lhs = hom_complex(&b, &a.shift(k));
            let rhs = hom_complex(&b, &a).shift(k);
            for n in -6..=6 {
                assert_eq!(lhs.dim(n), rhs.dim(n), "k={k} n={n}");
                assert_eq!(
                    lhs.cohomology(n).dim,
                    rhs.cohomology(n).dim,
                    "H: k={k} n={n}"
                );
            }
        }
    }

    #[test]
    fn dual_of_shift() {
        // D(A[n]) and (DA)[-n] agree up to an alternating rescaling of
        // degrees; dimensions and cohomology match on the nose.
        let a = sample();
        for n in -2..=2 {
            let lhs = dual_complex(&a.shift(n));
            let rhs = dual_complex(&a).shift(-n);
            for k in -4..=4 {
                assert_eq!(lhs.dim(k), rhs.dim(k), "n={n} k={k}");
                assert_eq!(
                    lhs.cohomology(k).dim,
                    rhs.cohomology(k).dim,
                    "H: n={n} k={k}"
                );
            }
        }
    }

    #[test]
    fn dual_map_transposes() {
        let a = sample();
        let f = ChainMap::identity(&a);
        let df = dual_map(&f);
        assert!(df.is_quasi_iso());
    }
}
