//! The octahedron on a composable pair: cones of f, of beta, and of
//! beta . f fit into four distinguished triangles whose squares commute
//! strictly in the cone model.

use crate::complex::{mapping_cone, ChainMap, Complex, Triangle};
use crate::field::Field;
use crate::matrix::Matrix;
use std::collections::BTreeMap;

pub struct Octahedron<K: Field> {
    /// cone(beta . f)
    pub m: Complex<K>,
    pub base: Triangle<K>,      // A -> B -> cone(f)
    pub upper: Triangle<K>,     // B -> E -> cone(beta)
    pub composite: Triangle<K>, // A -> E -> M
    pub bridge: Triangle<K>,    // cone(f) -> M -> cone(beta) -> cone(f)[1]
    /// Whether every square of the comparison diagram commutes strictly.
    pub strict: bool,
}

pub fn octahedron<K: Field>(f: &ChainMap<K>, beta: &ChainMap<K>) -> Octahedron<K> {
    assert!(
        beta.source() == f.target(),
        "octahedron needs composable maps"
    );
    let a = f.source();
    let b = f.target();
    let e = beta.target();
    let ctx = a.ctx();

    let (c, base) = mapping_cone(f);
    let (ff, upper) = mapping_cone(beta);
    let bf = beta.compose(f);
    let (m, composite) = mapping_cone(&bf);

    // sigma: cone(f) -> M, (a, b) -> (a, beta b)
    let sigma = {
        let comps: BTreeMap<i32, Matrix<K>> = m
            .support()
            .chain(c.support())
            .map(|k| {
                (
                    k,
                    Matrix::from_blocks(
                        ctx,
                        &[a.dim(k + 1), e.dim(k)],
                        &[a.dim(k + 1), b.dim(k)],
                        |bi, bj| match (bi, bj) {
                            (0, 0) => Some(Matrix::identity(ctx, a.dim(k + 1))),
                            (1, 1) => Some(beta.comp(k)),
                            _ => None,
                        },
                    ),
                )
            })
            .collect();
        ChainMap::new(c.clone(), m.clone(), comps).expect("sigma commutes")
    };
    // nu: M -> cone(beta), (a, e) -> (f a, e)
    let nu = {
        let comps: BTreeMap<i32, Matrix<K>> = m
            .support()
            .chain(ff.support())
            .map(|k| {
                (
                    k,
                    Matrix::from_blocks(
                        ctx,
                        &[b.dim(k + 1), e.dim(k)],
                        &[a.dim(k + 1), e.dim(k)],
                        |bi, bj| match (bi, bj) {
                            (0, 0) => Some(f.comp(k + 1)),
                            (1, 1) => Some(Matrix::identity(ctx, e.dim(k))),
                            _ => None,
                        },
                    ),
                )
            })
            .collect();
        ChainMap::new(m.clone(), ff.clone(), comps).expect("nu commutes")
    };
    // wrap: cone(beta) -> cone(f)[1], (b, e) -> (0, b)
    let wrap = {
        let c1 = c.shift(1);
        let comps: BTreeMap<i32, Matrix<K>> = ff
            .support()
            .chain(c1.support())
            .map(|k| {
                (
                    k,
                    Matrix::from_blocks(
                        ctx,
                        &[a.dim(k + 2), b.dim(k + 1)],
                        &[b.dim(k + 1), e.dim(k)],
                        |bi, bj| match (bi, bj) {
                            (1, 0) => Some(Matrix::identity(ctx, b.dim(k + 1))),
                            _ => None,
                        },
                    ),
                )
            })
            .collect();
        ChainMap::new(ff.clone(), c1, comps).expect("wrap commutes")
    };
    let bridge = Triangle::from_parts(sigma.clone(), nu.clone(), wrap);

    // Strict commutations of the comparison diagram.
    let strict = {
        let tau = composite.g();
        let gamma = upper.g();
        let omega = composite.h();
        let delta = upper.h();
        let h = base.h();
        let s1 = tau.compose(beta) == sigma.compose(base.g());
        let s2 = nu.compose(tau) == gamma.clone();
        let s3 = omega.compose(&sigma) == h.clone();
        let s4 = delta.compose(&nu) == f.shift(1).compose(omega);
        s1 && s2 && s3 && s4
    };

    Octahedron {
        m,
        base,
        upper,
        composite,
        bridge,
        strict,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rat;

    fn sample_maps() -> (ChainMap<Rat>, ChainMap<Rat>) {
        let a = Complex::<Rat>::new(
            (),
            0,
            vec![1, 1],
            vec![Matrix::from_i64((), &[&[0]])],
        )
        .unwrap();
        let b = Complex::<Rat>::point((), 1, 0);
        let e = Complex::<Rat>::point((), 1, 1);
        let f = ChainMap::new(
            a.clone(),
            b.clone(),
            [(0, Matrix::from_i64((), &[&[1]]))].into(),
        )
        .unwrap();
        let beta = ChainMap::zero(b, e);
        (f, beta)
    }

    #[test]
    fn four_triangles_are_exact_and_strict() {
        let (f, beta) = sample_maps();
        let oct = octahedron(&f, &beta);
        assert!(oct.strict);
        assert!(oct.base.les_is_exact());
        assert!(oct.upper.les_is_exact());
        assert!(oct.composite.les_is_exact());
        assert!(oct.bridge.les_is_exact());
    }

    #[test]
    fn beta_identity_degenerates() {
        let (f, _) = sample_maps();
        let oct = octahedron(&f, &ChainMap::identity(f.target()));
        // M = cone(id . f) = cone(f)
        let (c, _) = mapping_cone(&f);
        assert_eq!(oct.m, c);
        // cone(id) acyclic
        assert!(oct.upper.c().is_acyclic());
    }

    #[test]
    fn f_identity_gives_cone_of_beta() {
        let (_, beta) = sample_maps();
        let oct = octahedron(&ChainMap::identity(beta.source()), &beta);
        let (c, _) = mapping_cone(&beta);
        assert_eq!(oct.m, c);
    }
}
