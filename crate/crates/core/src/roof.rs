//! Chain homotopies and roofs.
//!
//! A morphism in the derived category is a roof: a span whose backward
//! leg is a quasi-isomorphism. Composition pulls back over the middle
//! object. The naive degreewise pullback only preserves
//! quasi-isomorphisms along surjections, so before pulling back we
//! replace the incoming roof by an equivalent one whose backward leg is
//! surjective (absorbing an acyclic cylinder summand).

use crate::complex::{mapping_cone, ChainMap, Complex, ComplexError};
use crate::field::Field;
use crate::linsys::BlockSystem;
use crate::matrix::Matrix;
use std::collections::BTreeMap;

/// A homotopy between two maps A -> B: components H^k : A^k -> B^{k-1}.
#[derive(Clone, Debug)]
pub struct Homotopy<K: Field> {
    pub comps: BTreeMap<i32, Matrix<K>>,
}

/// Solve f - g = dH + Hd exactly; `None` when no homotopy exists.
pub fn homotopy_between<K: Field>(f: &ChainMap<K>, g: &ChainMap<K>) -> Option<Homotopy<K>> {
    assert!(
        f.source() == g.source() && f.target() == g.target(),
        "homotopy requires equal endpoints"
    );
    let a = f.source();
    let b = f.target();
    let ctx = a.ctx();
    let lo = a.lo().min(b.lo()) - 1;
    let hi = a.hi().max(b.hi()) + 1;
    let mut sys = BlockSystem::new(ctx);
    let vars: BTreeMap<i32, _> = (lo..=hi)
        .map(|k| (k, sys.var(b.dim(k - 1), a.dim(k))))
        .collect();
    for k in lo..=hi {
        let rhs = f.comp(k).sub(&g.comp(k));
        let mut eq = sys.equation(rhs);
        sys.add_term(&mut eq, vars[&k], &b.d(k - 1), &Matrix::identity(ctx, a.dim(k)));
        if let Some(next) = vars.get(&(k + 1)) {
            sys.add_term(&mut eq, *next, &Matrix::identity(ctx, b.dim(k)), &a.d(k));
        }
        sys.push(eq);
    }
    let sol = sys.solve()?;
    let comps = vars
        .keys()
        .zip(sol)
        .map(|(&k, m)| (k, m))
        .collect();
    Some(Homotopy { comps })
}

/// The acyclic cylinder cone(id_A)[-1] with its surjective
/// quasi-isomorphism onto A.
pub fn acyclic_cylinder<K: Field>(a: &Complex<K>) -> (Complex<K>, ChainMap<K>) {
    let ctx = a.ctx();
    let (cone_id, _) = mapping_cone(&ChainMap::identity(a));
    let cyl = cone_id.shift(-1);
    // cyl^k = A^k (+) A^{k-1}; project onto the first summand.
    let comps = cyl
        .support()
        .map(|k| {
            (
                k,
                Matrix::from_blocks(ctx, &[a.dim(k)], &[a.dim(k), a.dim(k - 1)], |_, bj| {
                    if bj == 0 {
                        Some(Matrix::identity(ctx, a.dim(k)))
                    } else {
                        None
                    }
                }),
            )
        })
        .collect();
    let q = ChainMap::new(cyl.clone(), a.clone(), comps).expect("cylinder projection commutes");
    (cyl, q)
}

/// The degreewise kernel of a chain map, as a subcomplex with its
/// inclusion.
pub fn kernel_subcomplex<K: Field>(f: &ChainMap<K>) -> (Complex<K>, ChainMap<K>) {
    let c = f.source();
    let ctx = c.ctx();
    if c.is_zero_complex() {
        return (c.clone(), ChainMap::identity(c));
    }
    let lo = c.lo();
    let hi = c.hi();
    let kernels: Vec<Matrix<K>> = (lo..=hi).map(|k| f.comp(k).kernel_basis()).collect();
    let dims: Vec<usize> = kernels.iter().map(|k| k.cols()).collect();
    let diffs: Vec<Matrix<K>> = (lo..hi)
        .map(|k| {
            let i = (k - lo) as usize;
            kernels[i + 1]
                .solve(&c.d(k).mul(&kernels[i]))
                .expect("differential preserves the kernel")
        })
        .collect();
    let sub = Complex::new(ctx, lo, dims, diffs).expect("kernel subcomplex");
    let comps = (lo..=hi)
        .map(|k| (k, kernels[(k - lo) as usize].clone()))
        .collect();
    let include = ChainMap::new(sub.clone(), c.clone(), comps).expect("kernel inclusion commutes");
    (sub, include)
}

/// A roof source <=(left)= apex =(right)=> target representing a
/// derived-category morphism source -> target.
#[derive(Clone, Debug)]
pub struct Roof<K: Field> {
    left: ChainMap<K>,
    right: ChainMap<K>,
}

impl<K: Field> Roof<K> {
    pub fn new(left: ChainMap<K>, right: ChainMap<K>) -> Result<Self, ComplexError> {
        if left.source() != right.source() {
            return Err(ComplexError::IncompatibleEndpoints);
        }
        if !left.is_quasi_iso() {
            return Err(ComplexError::NotQuasiIso);
        }
        Ok(Roof { left, right })
    }

    /// The roof of an honest chain map (apex = source, backward leg id).
    pub fn from_map(f: &ChainMap<K>) -> Self {
        Roof {
            left: ChainMap::identity(f.source()),
            right: f.clone(),
        }
    }

    pub fn identity(a: &Complex<K>) -> Self {
        Self::from_map(&ChainMap::identity(a))
    }

    pub fn apex(&self) -> &Complex<K> {
        self.left.source()
    }

    pub fn source(&self) -> &Complex<K> {
        self.left.target()
    }

    pub fn target(&self) -> &Complex<K> {
        self.right.target()
    }

    pub fn left(&self) -> &ChainMap<K> {
        &self.left
    }

    pub fn right(&self) -> &ChainMap<K> {
        &self.right
    }

    /// Equivalent roof whose backward leg is degreewise surjective.
    pub fn surjectivize(&self) -> Roof<K> {
        let a = self.source();
        let ctx = a.ctx();
        let (cyl, q) = acyclic_cylinder(a);
        let apex = self.apex().direct_sum(&cyl);
        let block = |m1: &ChainMap<K>, m2: Option<&ChainMap<K>>, tgt: &Complex<K>| {
            let comps: BTreeMap<i32, Matrix<K>> = apex
                .support()
                .map(|k| {
                    let left = m1.comp(k);
                    let right = match m2 {
                        Some(m) => m.comp(k),
                        None => Matrix::zero(ctx, tgt.dim(k), cyl.dim(k)),
                    };
                    (k, left.hstack(&right))
                })
                .collect();
            ChainMap::new(apex.clone(), tgt.clone(), comps).expect("sum map commutes")
        };
        let left = block(&self.left, Some(&q), a);
        let right = block(&self.right, None, self.target());
        Roof { left, right }
    }

    /// Composition by pullback over the shared middle object.
    pub fn compose(&self, then: &Roof<K>) -> Result<Roof<K>, ComplexError> {
        if self.target() != then.source() {
            return Err(ComplexError::IncompatibleEndpoints);
        }
        let mid = self.target();
        let ctx = mid.ctx();
        let second = then.surjectivize();
        let c1 = self.apex();
        let c2 = second.apex();
        let sum = c1.direct_sum(c2);
        // (x, y) -> g1(x) - f2(y) into the middle complex
        let comps: BTreeMap<i32, Matrix<K>> = sum
            .support()
            .map(|k| {
                (
                    k,
                    self.right.comp(k).hstack(&second.left().comp(k).neg()),
                )
            })
            .collect();
        let difference = ChainMap::new(sum.clone(), mid.clone(), comps).expect("difference map");
        let (_pullback, include) = kernel_subcomplex(&difference);
        let proj = |first: bool| {
            let comps: BTreeMap<i32, Matrix<K>> = sum
                .support()
                .map(|k| {
                    let m = Matrix::from_blocks(
                        ctx,
                        &[if first { c1.dim(k) } else { c2.dim(k) }],
                        &[c1.dim(k), c2.dim(k)],
                        |_, bj| {
                            if (bj == 0) == first {
                                Some(Matrix::identity(
                                    ctx,
                                    if first { c1.dim(k) } else { c2.dim(k) },
                                ))
                            } else {
                                None
                            }
                        },
                    );
                    (k, m)
                })
                .collect();
            ChainMap::new(
                sum.clone(),
                if first { c1.clone() } else { c2.clone() },
                comps,
            )
            .expect("projection commutes")
        };
        let pi1 = proj(true).compose(&include);
        let pi2 = proj(false).compose(&include);
        let left = self.left.compose(&pi1);
        let right = second.right().compose(&pi2);
        Roof::new(left, right)
    }

    /// Single-span equivalence: a map between the apexes, in either
    /// direction, commuting with both legs up to chain homotopy.
    pub fn equivalent(&self, other: &Roof<K>) -> bool {
        assert!(
            self.source() == other.source() && self.target() == other.target(),
            "roof equivalence needs equal endpoints"
        );
        span_exists(self, other) || span_exists(other, self)
    }
}

/// Search for phi: apex(r1) -> apex(r2) with
/// left2 . phi ~ left1 and right2 . phi ~ right1.
fn span_exists<K: Field>(r1: &Roof<K>, r2: &Roof<K>) -> bool {
    let c1 = r1.apex();
    let c2 = r2.apex();
    let a = r1.source();
    let b = r1.target();
    let ctx = c1.ctx();
    let lo = c1.lo().min(c2.lo()).min(a.lo()).min(b.lo()) - 1;
    let hi = c1.hi().max(c2.hi()).max(a.hi()).max(b.hi()) + 1;
    let mut sys = BlockSystem::new(ctx);
    let phi: BTreeMap<i32, _> = (lo..=hi)
        .map(|k| (k, sys.var(c2.dim(k), c1.dim(k))))
        .collect();
    let hf: BTreeMap<i32, _> = (lo..=hi)
        .map(|k| (k, sys.var(a.dim(k - 1), c1.dim(k))))
        .collect();
    let hg: BTreeMap<i32, _> = (lo..=hi)
        .map(|k| (k, sys.var(b.dim(k - 1), c1.dim(k))))
        .collect();
    for k in lo..=hi {
        // chain map: d phi^k - phi^{k+1} d = 0
        let mut eq = sys.equation(Matrix::zero(ctx, c2.dim(k + 1), c1.dim(k)));
        sys.add_term(&mut eq, phi[&k], &c2.d(k), &Matrix::identity(ctx, c1.dim(k)));
        if let Some(next) = phi.get(&(k + 1)) {
            let m = Matrix::identity(ctx, c2.dim(k + 1));
            sys.add_term(&mut eq, *next, &m.neg(), &c1.d(k));
        }
        sys.push(eq);
        // left2 . phi - (d Hf + Hf d) = left1
        let mut eq = sys.equation(r1.left().comp(k));
        sys.add_term(
            &mut eq,
            phi[&k],
            &r2.left().comp(k),
            &Matrix::identity(ctx, c1.dim(k)),
        );
        sys.add_term(
            &mut eq,
            hf[&k],
            &a.d(k - 1).neg(),
            &Matrix::identity(ctx, c1.dim(k)),
        );
        if let Some(next) = hf.get(&(k + 1)) {
            let m = Matrix::identity(ctx, a.dim(k));
            sys.add_term(&mut eq, *next, &m.neg(), &c1.d(k));
        }
        sys.push(eq);
        // right2 . phi - (d Hg + Hg d) = right1
        let mut eq = sys.equation(r1.right().comp(k));
        sys.add_term(
            &mut eq,
            phi[&k],
            &r2.right().comp(k),
            &Matrix::identity(ctx, c1.dim(k)),
        );
        sys.add_term(
            &mut eq,
            hg[&k],
            &b.d(k - 1).neg(),
            &Matrix::identity(ctx, c1.dim(k)),
        );
        if let Some(next) = hg.get(&(k + 1)) {
            let m = Matrix::identity(ctx, b.dim(k));
            sys.add_term(&mut eq, *next, &m.neg(), &c1.d(k));
        }
        sys.push(eq);
    }
    sys.solve().is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rat;

    #[test]
    fn equal_maps_have_zero_homotopy() {
        let a = Complex::<Rat>::point((), 2, 0);
        let f = ChainMap::identity(&a);
        let h = homotopy_between(&f, &f).unwrap();
        assert!(h.comps.values().all(|m| m.is_zero()));
    }

    #[test]
    fn identity_on_contractible_is_null_homotopic() {
        let a = Complex::<Rat>::point((), 1, 0);
        let (cone_id, _) = mapping_cone(&ChainMap::identity(&a));
        let id = ChainMap::identity(&cone_id);
        let zero = ChainMap::zero(cone_id.clone(), cone_id.clone());
        assert!(homotopy_between(&id, &zero).is_some());
    }

    #[test]
    fn identity_on_point_is_not_null_homotopic() {
        let a = Complex::<Rat>::point((), 1, 0);
        let id = ChainMap::identity(&a);
        let zero = ChainMap::zero(a.clone(), a.clone());
        assert!(homotopy_between(&id, &zero).is_none());
    }

    #[test]
    fn cylinder_is_acyclic_and_surjects() {
        let a = Complex::<Rat>::new(
            (),
            0,
            vec![1, 1],
            vec![Matrix::from_i64((), &[&[0]])],
        )
        .unwrap();
        let (cyl, q) = acyclic_cylinder(&a);
        assert!(cyl.is_acyclic());
        for k in 0..=1 {
            assert_eq!(q.comp(k).rank(), a.dim(k));
        }
    }

    #[test]
    fn compose_with_identity_roof() {
        let a = Complex::<Rat>::new(
            (),
            0,
            vec![1, 1],
            vec![Matrix::from_i64((), &[&[0]])],
        )
        .unwrap();
        let r = Roof::identity(&a);
        let c = r.compose(&r).unwrap();
        assert!(c.equivalent(&r));
    }

    #[test]
    fn pullback_of_identity_legs() {
        // pullback of k --id--> k <--id-- k has dimension 1 per degree
        let a = Complex::<Rat>::point((), 1, 0);
        let id = Roof::identity(&a);
        let composed = id.compose(&id).unwrap();
        // apex = {(x, y, z...) : x = y} inside a + (a + cyl)
        assert_eq!(composed.apex().cohomology(0).dim, 1);
        assert!(composed.left().is_quasi_iso());
    }
}
