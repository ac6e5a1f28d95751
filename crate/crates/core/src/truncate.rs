//! Ordinary truncation functors and their image variants.
//!
//! `truncate_below(A, p)` keeps cohomology in degrees <= p (kernel form),
//! `truncate_above(A, p)` keeps degrees >= p (cokernel form). Both come
//! with their canonical comparison maps. The tilde variants put the image
//! of the boundary differential at the cut instead; they are
//! quasi-isomorphic to the plain ones.

use crate::complex::{ChainMap, Complex};
use crate::field::Field;
use crate::matrix::Matrix;
use std::collections::BTreeMap;

/// tau_{<= p}: ... -> A^{p-1} -> ker d^p -> 0, with the inclusion into A.
pub fn truncate_below<K: Field>(a: &Complex<K>, p: i32) -> (Complex<K>, ChainMap<K>) {
    let ctx = a.ctx();
    if a.is_zero_complex() || p < a.lo() {
        let z = Complex::zero(ctx);
        return (z.clone(), ChainMap::zero(z, a.clone()));
    }
    if p >= a.hi() {
        return (a.clone(), ChainMap::identity(a));
    }
    let kernel = a.d(p).kernel_basis();
    let lo = a.lo();
    let mut dims: Vec<usize> = (lo..p).map(|k| a.dim(k)).collect();
    dims.push(kernel.cols());
    let mut diffs: Vec<Matrix<K>> = (lo..p - 1).map(|k| a.d(k)).collect();
    if p > lo {
        // d^{p-1} lands in ker d^p; rewrite it in the kernel basis.
        let lifted = kernel
            .solve(&a.d(p - 1))
            .expect("image of d^{p-1} lies in ker d^p");
        diffs.push(lifted);
    }
    let truncated = Complex::new(ctx, lo, dims, diffs).expect("truncation is a complex");
    let mut comps = BTreeMap::new();
    for k in lo..p {
        comps.insert(k, Matrix::identity(ctx, a.dim(k)));
    }
    comps.insert(p, kernel);
    let include = ChainMap::new(truncated.clone(), a.clone(), comps)
        .expect("truncation inclusion commutes");
    (truncated, include)
}

/// tau_{>= p}: 0 -> coker d^{p-1} -> A^{p+1} -> ..., with the projection
/// from A.
pub fn truncate_above<K: Field>(a: &Complex<K>, p: i32) -> (Complex<K>, ChainMap<K>) {
    let ctx = a.ctx();
    if a.is_zero_complex() || p > a.hi() {
        let z = Complex::zero(ctx);
        return (z.clone(), ChainMap::zero(a.clone(), z));
    }
    if p <= a.lo() {
        return (a.clone(), ChainMap::identity(a));
    }
    // Extend a basis of im d^{p-1} by standard vectors; the added columns
    // represent the cokernel.
    let image = a.d(p - 1).image_basis();
    let full = image.hstack(&Matrix::identity(ctx, a.dim(p)));
    let (_, pivots) = full.rref();
    let extra: Vec<usize> = pivots
        .iter()
        .filter(|&&c| c >= image.cols())
        .map(|&c| c - image.cols())
        .collect();
    let complement = Matrix::from_fn(ctx, a.dim(p), extra.len(), |r, j| {
        if r == extra[j] {
            K::one(ctx)
        } else {
            K::zero(ctx)
        }
    });
    // Projection: coordinates in [image | complement], keep the tail.
    let basis = image.hstack(&complement);
    let coords = basis
        .solve(&Matrix::identity(ctx, a.dim(p)))
        .expect("extended to a basis");
    let project_p = Matrix::from_fn(ctx, extra.len(), a.dim(p), |r, c| {
        coords.at(image.cols() + r, c).clone()
    });

    let hi = a.hi();
    let mut dims = vec![extra.len()];
    dims.extend((p + 1..=hi).map(|k| a.dim(k)));
    let mut diffs: Vec<Matrix<K>> = Vec::new();
    if p < hi {
        // induced d: coker -> A^{p+1}, evaluate d^p on the complement reps
        diffs.push(a.d(p).mul(&complement));
        diffs.extend((p + 1..hi).map(|k| a.d(k)));
    }
    let truncated = Complex::new(ctx, p, dims, diffs).expect("truncation is a complex");
    let mut comps = BTreeMap::new();
    comps.insert(p, project_p);
    for k in p + 1..=hi {
        comps.insert(k, Matrix::identity(ctx, a.dim(k)));
    }
    let project =
        ChainMap::new(a.clone(), truncated.clone(), comps).expect("truncation projection commutes");
    (truncated, project)
}

/// Image variant of tau_{<= p}: ... -> A^p -> im d^p -> 0, a subcomplex
/// of A quasi-isomorphic to the kernel form.
pub fn truncate_below_image<K: Field>(a: &Complex<K>, p: i32) -> (Complex<K>, ChainMap<K>) {
    let ctx = a.ctx();
    if a.is_zero_complex() || p < a.lo() {
        let z = Complex::zero(ctx);
        return (z.clone(), ChainMap::zero(z, a.clone()));
    }
    if p >= a.hi() {
        return (a.clone(), ChainMap::identity(a));
    }
    let image = a.d(p).image_basis();
    let lo = a.lo();
    let mut dims: Vec<usize> = (lo..=p).map(|k| a.dim(k)).collect();
    dims.push(image.cols());
    let mut diffs: Vec<Matrix<K>> = (lo..p).map(|k| a.d(k)).collect();
    let into_image = image.solve(&a.d(p)).expect("d^p factors through its image");
    diffs.push(into_image);
    let truncated = Complex::new(ctx, lo, dims, diffs).expect("truncation is a complex");
    let mut comps = BTreeMap::new();
    for k in lo..=p {
        comps.insert(k, Matrix::identity(ctx, a.dim(k)));
    }
    comps.insert(p + 1, image);
    let include =
        ChainMap::new(truncated.clone(), a.clone(), comps).expect("inclusion commutes");
    (truncated, include)
}

/// Image variant of tau_{>= p}: 0 -> im d^{p-1} -> A^p -> ..., receiving a
/// projection-style map from A (d^{p-1} onto the image part).
pub fn truncate_above_image<K: Field>(a: &Complex<K>, p: i32) -> (Complex<K>, ChainMap<K>) {
    let ctx = a.ctx();
    if a.is_zero_complex() || p > a.hi() {
        let z = Complex::zero(ctx);
        return (z.clone(), ChainMap::zero(a.clone(), z));
    }
    if p <= a.lo() {
        return (a.clone(), ChainMap::identity(a));
    }
    let image = a.d(p - 1).image_basis();
    let hi = a.hi();
    let mut dims = vec![image.cols()];
    dims.extend((p..=hi).map(|k| a.dim(k)));
    let mut diffs: Vec<Matrix<K>> = vec![image.clone()];
    diffs.extend((p..hi).map(|k| a.d(k)));
    let truncated = Complex::new(ctx, p - 1, dims, diffs).expect("truncation is a complex");
    let into_image = image
        .solve(&a.d(p - 1))
        .expect("d^{p-1} factors through its image");
    let mut comps = BTreeMap::new();
    comps.insert(p - 1, into_image);
    for k in p..=hi {
        comps.insert(k, Matrix::identity(ctx, a.dim(k)));
    }
    let project =
        ChainMap::new(a.clone(), truncated.clone(), comps).expect("projection commutes");
    (truncated, project)
}

/// Cohomology of the ordinary t-structure in degree n, as a complex
/// concentrated in degree 0.
pub fn t_cohomology<K: Field>(a: &Complex<K>, n: i32) -> Complex<K> {
    let (below, _) = truncate_below(a, n);
    let (both, _) = truncate_above(&below, n);
    both.shift(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rat;

    fn staircase() -> Complex<Rat> {
        // degrees -1..2, H^-1 = 1, H^0 = 1, H^1 = 0, H^2 = 1
        let d0 = Matrix::from_i64((), &[&[0, 0]]);
        let dm1 = Matrix::from_i64((), &[&[0], &[0]]);
        let d1 = Matrix::from_i64((), &[&[0]]);
        Complex::new((), -1, vec![1, 2, 1, 1], vec![dm1, d0, d1]).unwrap()
    }

    #[test]
    fn truncations_cut_cohomology() {
        let a = Complex::<Rat>::new(
            (),
            0,
            vec![2, 1],
            vec![Matrix::from_i64((), &[&[1, 0]])],
        )
        .unwrap();
        let (t, incl) = truncate_below(&a, 0);
        assert_eq!(t.cohomology(0).dim, a.cohomology(0).dim);
        assert_eq!(t.cohomology(1).dim, 0);
        assert_eq!(incl.source(), &t);

        let (u, proj) = truncate_above(&a, 1);
        assert_eq!(u.cohomology(1).dim, a.cohomology(1).dim);
        assert_eq!(u.cohomology(0).dim, 0);
        assert_eq!(proj.target(), &u);
    }

    #[test]
    fn identity_cases() {
        let a = staircase();
        let (t, _) = truncate_below(&a, 5);
        assert_eq!(t, a);
        let (u, _) = truncate_above(&a, -5);
        assert_eq!(u, a);
    }

    #[test]
    fn opposite_cuts_annihilate() {
        let a = staircase();
        let (up, _) = truncate_above(&a, 1);
        let (both, _) = truncate_below(&up, 0);
        assert!(both.is_zero_complex());
    }

    #[test]
    fn stalk_formula() {
        let a = staircase();
        for p in -2..=3 {
            let (t, _) = truncate_below(&a, p);
            for k in -2..=3 {
                let expect = if k <= p { a.cohomology(k).dim } else { 0 };
                assert_eq!(t.cohomology(k).dim, expect, "p={p} k={k}");
            }
        }
    }

    #[test]
    fn image_variants_quasi_isomorphic() {
        let a = staircase();
        for p in -2..=3 {
            let (t, incl_t) = truncate_below(&a, p);
            let (tt, incl_tt) = truncate_below_image(&a, p);
            for k in -2..=3 {
                assert_eq!(t.cohomology(k).dim, tt.cohomology(k).dim, "p={p} k={k}");
            }
            // both include into a; compare induced images
            assert_eq!(incl_tt.source(), &tt);
            assert_eq!(incl_t.source(), &t);

            let (u, _) = truncate_above(&a, p);
            let (uu, to_uu) = truncate_above_image(&a, p);
            for k in -2..=3 {
                assert_eq!(u.cohomology(k).dim, uu.cohomology(k).dim, "p={p} k={k}");
            }
            assert_eq!(to_uu.target(), &uu);
        }
    }

    #[test]
    fn t_cohomology_is_concentrated() {
        let a = staircase();
        for n in -2..=3 {
            let h = t_cohomology(&a, n);
            assert!(h.is_zero_complex() || (h.lo() == 0 && h.hi() == 0));
            assert_eq!(h.dim(0), a.cohomology(n).dim, "n={n}");
        }
    }

    #[test]
    fn nested_cuts_compose() {
        let a = staircase();
        let (t1, _) = truncate_below(&a, 1);
        let (t2, _) = truncate_below(&t1, 0);
        let (direct, _) = truncate_below(&a, 0);
        assert_eq!(t2, direct);
    }
}
