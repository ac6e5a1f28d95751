//! Bounded cochain complexes of finite-dimensional vector spaces, strict
//! chain maps, mapping cones and distinguished triangles.
//!
//! Conventions, fixed once for the whole crate:
//!   * shift:  (A[n])^k = A^{k+n},  d_{A[n]}^k = (-1)^n d_A^{k+n};
//!     a shifted chain map picks up no sign;
//!   * cone:   cone(f)^k = A^{k+1} (+) B^k,  d(a,b) = (-da, fa + db);
//!   * turning a triangle negates the map that wraps around.

use crate::field::Field;
use crate::matrix::Matrix;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum ComplexError {
    #[error("differential does not square to zero between degrees {0} and {1}")]
    DifferentialSquare(i32, i32),
    #[error("differential at degree {0} has shape {1}x{2}, expected {3}x{4}")]
    DifferentialShape(i32, usize, usize, usize, usize),
    #[error("chain map does not commute with differentials at degree {0}")]
    NotChainMap(i32),
    #[error("component at degree {0} has shape {1}x{2}, expected {3}x{4}")]
    ComponentShape(i32, usize, usize, usize, usize),
    #[error("the backward leg of a roof must be a quasi-isomorphism")]
    NotQuasiIso,
    #[error("roof endpoints are incompatible")]
    IncompatibleEndpoints,
}

/// A bounded complex. Zero outside the stored window; the stored window
/// is trimmed so that equality of values is equality of complexes.
#[derive(Clone, PartialEq)]
pub struct Complex<K: Field> {
    ctx: K::Ctx,
    lo: i32,
    dims: Vec<usize>,
    /// diffs[i] : dims[i+1] x dims[i]; the last differential (into the
    /// zero space above the window) is implicit.
    diffs: Vec<Matrix<K>>,
}

impl<K: Field> fmt::Debug for Complex<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Complex[")?;
        for (i, d) in self.dims.iter().enumerate() {
            write!(f, " {}:{}", self.lo + i as i32, d)?;
        }
        write!(f, " ]")
    }
}

impl<K: Field> Complex<K> {
    pub fn new(
        ctx: K::Ctx,
        lo: i32,
        dims: Vec<usize>,
        diffs: Vec<Matrix<K>>,
    ) -> Result<Self, ComplexError> {
        assert_eq!(
            diffs.len(),
            dims.len().saturating_sub(1),
            "expected one differential between consecutive stored degrees"
        );
        for (i, d) in diffs.iter().enumerate() {
            if d.rows() != dims[i + 1] || d.cols() != dims[i] {
                return Err(ComplexError::DifferentialShape(
                    lo + i as i32,
                    d.rows(),
                    d.cols(),
                    dims[i + 1],
                    dims[i],
                ));
            }
        }
        for i in 0..diffs.len().saturating_sub(1) {
            if !diffs[i + 1].mul(&diffs[i]).is_zero() {
                return Err(ComplexError::DifferentialSquare(
                    lo + i as i32,
                    lo + i as i32 + 2,
                ));
            }
        }
        let mut c = Complex {
            ctx,
            lo,
            dims,
            diffs,
        };
        c.trim();
        Ok(c)
    }

    fn trim(&mut self) {
        while self.dims.first() == Some(&0) {
            self.dims.remove(0);
            if !self.diffs.is_empty() {
                self.diffs.remove(0);
            }
            self.lo += 1;
        }
        while self.dims.last() == Some(&0) {
            self.dims.pop();
            self.diffs.pop();
        }
        if self.dims.is_empty() {
            self.lo = 0;
        }
    }

    pub fn zero(ctx: K::Ctx) -> Self {
        Complex {
            ctx,
            lo: 0,
            dims: vec![],
            diffs: vec![],
        }
    }

    /// k^n concentrated in one degree.
    pub fn point(ctx: K::Ctx, n: usize, degree: i32) -> Self {
        Complex::new(ctx, degree, vec![n], vec![]).expect("valid")
    }

    pub fn ctx(&self) -> K::Ctx {
        self.ctx
    }

    pub fn is_zero_complex(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn lo(&self) -> i32 {
        self.lo
    }

    pub fn hi(&self) -> i32 {
        self.lo + self.dims.len() as i32 - 1
    }

    /// Degrees where the complex may be nonzero.
    pub fn support(&self) -> impl Iterator<Item = i32> {
        self.lo..=if self.dims.is_empty() {
            self.lo - 1
        } else {
            self.hi()
        }
    }

    pub fn dim(&self, k: i32) -> usize {
        if self.dims.is_empty() || k < self.lo || k > self.hi() {
            0
        } else {
            self.dims[(k - self.lo) as usize]
        }
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn d(&self, k: i32) -> Matrix<K> {
        if !self.dims.is_empty() && k >= self.lo && k < self.hi() {
            self.diffs[(k - self.lo) as usize].clone()
        } else {
            Matrix::zero(self.ctx, self.dim(k + 1), self.dim(k))
        }
    }

    pub fn shift(&self, n: i32) -> Self {
        if self.dims.is_empty() {
            return self.clone();
        }
        let diffs = self
            .diffs
            .iter()
            .map(|d| if n % 2 == 0 { d.clone() } else { d.neg() })
            .collect();
        Complex {
            ctx: self.ctx,
            lo: self.lo - n,
            dims: self.dims.clone(),
            diffs,
        }
    }

    pub fn direct_sum(&self, rhs: &Self) -> Self {
        if self.dims.is_empty() {
            return rhs.clone();
        }
        if rhs.dims.is_empty() {
            return self.clone();
        }
        let lo = self.lo.min(rhs.lo);
        let hi = self.hi().max(rhs.hi());
        let dims: Vec<usize> = (lo..=hi).map(|k| self.dim(k) + rhs.dim(k)).collect();
        let diffs: Vec<Matrix<K>> = (lo..hi)
            .map(|k| self.d(k).direct_sum(&rhs.d(k)))
            .collect();
        Complex::new(self.ctx, lo, dims, diffs).expect("direct sum is a complex")
    }

    /// Cohomology in one degree, with an explicit basis of representative
    /// cocycles (columns).
    pub fn cohomology(&self, p: i32) -> Cohomology<K> {
        let d_out = self.d(p);
        let d_in = self.d(p - 1);
        let cycles = d_out.kernel_basis();
        let boundaries = d_in.image_basis();
        // Extend the boundary basis to a basis of the cycle space; the
        // added columns represent cohomology classes.
        let stacked = boundaries.hstack(&cycles);
        let (_, pivots) = stacked.rref();
        let reps: Vec<usize> = pivots
            .iter()
            .filter(|&&c| c >= boundaries.cols())
            .map(|&c| c - boundaries.cols())
            .collect();
        let basis = Matrix::from_fn(self.ctx, self.dim(p), reps.len(), |r, j| {
            cycles.at(r, reps[j]).clone()
        });
        Cohomology {
            dim: reps.len(),
            basis,
            boundaries,
        }
    }

    pub fn cohomology_dims(&self) -> BTreeMap<i32, usize> {
        let mut out = BTreeMap::new();
        for k in self.support() {
            let d = self.cohomology(k).dim;
            if d > 0 {
                out.insert(k, d);
            }
        }
        out
    }

    pub fn is_acyclic(&self) -> bool {
        self.cohomology_dims().is_empty()
    }

    /// Alternating sum of dimensions; equals the alternating sum of
    /// cohomology dimensions.
    pub fn euler_char(&self) -> i64 {
        self.support()
            .map(|k| {
                let d = self.dim(k) as i64;
                if k.rem_euclid(2) == 0 {
                    d
                } else {
                    -d
                }
            })
            .sum()
    }
}

/// Cohomology of one degree: dimension, representative cocycles, and a
/// basis of the coboundary space (used to take coordinates of classes).
pub struct Cohomology<K: Field> {
    pub dim: usize,
    pub basis: Matrix<K>,
    boundaries: Matrix<K>,
}

impl<K: Field> Cohomology<K> {
    /// Coordinates of the classes of the given cocycles (columns) in this
    /// basis. Panics if a column is not a cocycle of the right space.
    pub fn class_coordinates(&self, cocycles: &Matrix<K>) -> Matrix<K> {
        let system = self.boundaries.hstack(&self.basis);
        let sol = system
            .solve(cocycles)
            .expect("cocycle lies in boundaries + representatives");
        Matrix::from_fn(cocycles.ctx(), self.dim, cocycles.cols(), |r, c| {
            sol.at(self.boundaries.cols() + r, c).clone()
        })
    }
}

/// A strict map of complexes, commuting with the differentials on the nose.
#[derive(Clone, PartialEq)]
pub struct ChainMap<K: Field> {
    source: Complex<K>,
    target: Complex<K>,
    lo: i32,
    comps: Vec<Matrix<K>>,
}

impl<K: Field> fmt::Debug for ChainMap<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ChainMap {:?} -> {:?}", self.source, self.target)
    }
}

impl<K: Field> ChainMap<K> {
    pub fn new(
        source: Complex<K>,
        target: Complex<K>,
        comps: BTreeMap<i32, Matrix<K>>,
    ) -> Result<Self, ComplexError> {
        let lo = source.lo.min(target.lo);
        let hi = source.hi().max(target.hi());
        let mut stored = Vec::new();
        for k in lo..=hi {
            let m = comps
                .get(&k)
                .cloned()
                .unwrap_or_else(|| Matrix::zero(source.ctx, target.dim(k), source.dim(k)));
            if m.rows() != target.dim(k) || m.cols() != source.dim(k) {
                return Err(ComplexError::ComponentShape(
                    k,
                    m.rows(),
                    m.cols(),
                    target.dim(k),
                    source.dim(k),
                ));
            }
            stored.push(m);
        }
        let map = ChainMap {
            source,
            target,
            lo,
            comps: stored,
        };
        for k in lo..=hi {
            let left = map.target.d(k).mul(&map.comp(k));
            let right = map.comp(k + 1).mul(&map.source.d(k));
            if left != right {
                return Err(ComplexError::NotChainMap(k));
            }
        }
        Ok(map)
    }

    pub fn zero(source: Complex<K>, target: Complex<K>) -> Self {
        ChainMap::new(source, target, BTreeMap::new()).expect("zero map commutes")
    }

    pub fn identity(a: &Complex<K>) -> Self {
        let comps = a
            .support()
            .map(|k| (k, Matrix::identity(a.ctx, a.dim(k))))
            .collect();
        ChainMap::new(a.clone(), a.clone(), comps).expect("identity commutes")
    }

    pub fn source(&self) -> &Complex<K> {
        &self.source
    }

    pub fn target(&self) -> &Complex<K> {
        &self.target
    }

    pub fn comp(&self, k: i32) -> Matrix<K> {
        let idx = k - self.lo;
        if idx >= 0 && (idx as usize) < self.comps.len() {
            self.comps[idx as usize].clone()
        } else {
            Matrix::zero(self.source.ctx, self.target.dim(k), self.source.dim(k))
        }
    }

    /// Shifted map; components reindex with no sign.
    pub fn shift(&self, n: i32) -> Self {
        let src = self.source.shift(n);
        let tgt = self.target.shift(n);
        let comps = src
            .support()
            .map(|k| (k, self.comp(k + n)))
            .collect();
        ChainMap::new(src, tgt, comps).expect("shifted map commutes")
    }

    pub fn compose(&self, inner: &ChainMap<K>) -> Self {
        assert!(
            inner.target == self.source,
            "composition endpoint mismatch"
        );
        let comps = inner
            .source
            .support()
            .chain(self.target.support())
            .map(|k| (k, self.comp(k).mul(&inner.comp(k))))
            .collect();
        ChainMap::new(inner.source.clone(), self.target.clone(), comps)
            .expect("composite commutes")
    }

    pub fn add(&self, rhs: &ChainMap<K>) -> Self {
        assert!(self.source == rhs.source && self.target == rhs.target);
        let comps = self
            .source
            .support()
            .chain(self.target.support())
            .map(|k| (k, self.comp(k).add(&rhs.comp(k))))
            .collect();
        ChainMap::new(self.source.clone(), self.target.clone(), comps).expect("sum commutes")
    }

    pub fn sub(&self, rhs: &ChainMap<K>) -> Self {
        assert!(self.source == rhs.source && self.target == rhs.target);
        let comps = self
            .source
            .support()
            .chain(self.target.support())
            .map(|k| (k, self.comp(k).sub(&rhs.comp(k))))
            .collect();
        ChainMap::new(self.source.clone(), self.target.clone(), comps).expect("diff commutes")
    }

    pub fn neg(&self) -> Self {
        let comps = self
            .source
            .support()
            .map(|k| (k, self.comp(k).neg()))
            .collect();
        ChainMap::new(self.source.clone(), self.target.clone(), comps).expect("neg commutes")
    }

    /// Matrix of the induced map H^p(source) -> H^p(target) in the
    /// computed representative bases.
    pub fn induced_on_cohomology(&self, p: i32) -> Matrix<K> {
        let hs = self.source.cohomology(p);
        let ht = self.target.cohomology(p);
        let mapped = self.comp(p).mul(&hs.basis);
        ht.class_coordinates(&mapped)
    }

    pub fn is_quasi_iso(&self) -> bool {
        let lo = self.source.lo.min(self.target.lo);
        let hi = self.source.hi().max(self.target.hi());
        for p in lo..=hi {
            let m = self.induced_on_cohomology(p);
            if m.rows() != m.cols() || !m.is_invertible() {
                return false;
            }
        }
        true
    }
}

/// The mapping cone of `f`, together with the canonical distinguished
/// triangle `A -> B -> cone(f) -> A[1]`.
pub fn mapping_cone<K: Field>(f: &ChainMap<K>) -> (Complex<K>, Triangle<K>) {
    let a = f.source();
    let b = f.target();
    let ctx = a.ctx();
    let lo = (a.lo() - 1).min(b.lo());
    let hi = (a.hi() - 1).max(b.hi());
    let dims: Vec<usize> = (lo..=hi).map(|k| a.dim(k + 1) + b.dim(k)).collect();
    let diffs: Vec<Matrix<K>> = (lo..hi)
        .map(|k| {
            Matrix::from_blocks(
                ctx,
                &[a.dim(k + 2), b.dim(k + 1)],
                &[a.dim(k + 1), b.dim(k)],
                |bi, bj| match (bi, bj) {
                    (0, 0) => Some(a.d(k + 1).neg()),
                    (1, 0) => Some(f.comp(k + 1)),
                    (1, 1) => Some(b.d(k)),
                    _ => None,
                },
            )
        })
        .collect();
    let m = Complex::new(ctx, lo, dims, diffs).expect("cone differential squares to zero");

    let include = {
        let comps = m
            .support()
            .map(|k| {
                (
                    k,
                    Matrix::from_blocks(ctx, &[a.dim(k + 1), b.dim(k)], &[b.dim(k)], |bi, _| {
                        if bi == 1 {
                            Some(Matrix::identity(ctx, b.dim(k)))
                        } else {
                            None
                        }
                    }),
                )
            })
            .collect();
        ChainMap::new(b.clone(), m.clone(), comps).expect("cone inclusion commutes")
    };
    let project = {
        let a1 = a.shift(1);
        let comps = m
            .support()
            .map(|k| {
                (
                    k,
                    Matrix::from_blocks(ctx, &[a.dim(k + 1)], &[a.dim(k + 1), b.dim(k)], |_, bj| {
                        if bj == 0 {
                            Some(Matrix::identity(ctx, a.dim(k + 1)))
                        } else {
                            None
                        }
                    }),
                )
            })
            .collect();
        ChainMap::new(m.clone(), a1, comps).expect("cone projection commutes")
    };
    let triangle = Triangle {
        f: f.clone(),
        g: include,
        h: project,
    };
    (m, triangle)
}

/// A distinguished triangle `a -> b -> c -> a[1]`. Values of this type
/// are only produced by `mapping_cone`, `Triangle::turn` and the
/// octahedron, which is how distinguished status is tracked.
#[derive(Clone)]
pub struct Triangle<K: Field> {
    f: ChainMap<K>,
    g: ChainMap<K>,
    h: ChainMap<K>,
}

impl<K: Field> Triangle<K> {
    pub fn a(&self) -> &Complex<K> {
        self.f.source()
    }

    pub fn b(&self) -> &Complex<K> {
        self.f.target()
    }

    pub fn c(&self) -> &Complex<K> {
        self.g.target()
    }

    pub fn f(&self) -> &ChainMap<K> {
        &self.f
    }

    pub fn g(&self) -> &ChainMap<K> {
        &self.g
    }

    pub fn h(&self) -> &ChainMap<K> {
        &self.h
    }

    pub(crate) fn from_parts(f: ChainMap<K>, g: ChainMap<K>, h: ChainMap<K>) -> Self {
        assert!(g.source() == f.target(), "triangle maps must chain");
        assert!(h.source() == g.target(), "triangle maps must chain");
        assert!(h.target() == &f.source().shift(1), "h must land in a[1]");
        Triangle { f, g, h }
    }

    /// Turn: `b -> c -> a[1] -> b[1]`, negating the wrapped map.
    pub fn turn(&self) -> Triangle<K> {
        Triangle {
            f: self.g.clone(),
            g: self.h.clone(),
            h: self.f.shift(1).neg(),
        }
    }

    /// Exactness of the long exact cohomology sequence at every joint,
    /// by exact rank counting: composites vanish on cohomology and
    /// image dimensions equal kernel dimensions.
    pub fn les_is_exact(&self) -> bool {
        let lo = self.a().lo().min(self.b().lo()).min(self.c().lo()) - 1;
        let hi = self.a().hi().max(self.b().hi()).max(self.c().hi()) + 1;
        for p in lo..=hi {
            let m1 = self.f.induced_on_cohomology(p);
            let m2 = self.g.induced_on_cohomology(p);
            let m3 = self.h.induced_on_cohomology(p);
            let m1_next = self.f.shift(1).induced_on_cohomology(p);
            // joints: at H^p(b), at H^p(c), at H^p(a[1]) = H^{p+1}(a)
            if !exact_pair(&m1, &m2) || !exact_pair(&m2, &m3) || !exact_pair(&m3, &m1_next) {
                return false;
            }
        }
        true
    }

    pub fn cohomology_dim_table(&self) -> Vec<(i32, usize, usize, usize)> {
        let lo = self.a().lo().min(self.b().lo()).min(self.c().lo());
        let hi = self.a().hi().max(self.b().hi()).max(self.c().hi());
        (lo..=hi)
            .map(|p| {
                (
                    p,
                    self.a().cohomology(p).dim,
                    self.b().cohomology(p).dim,
                    self.c().cohomology(p).dim,
                )
            })
            .collect()
    }
}

/// im(first) == ker(second), tested exactly.
pub fn exact_pair<K: Field>(first: &Matrix<K>, second: &Matrix<K>) -> bool {
    assert_eq!(second.cols(), first.rows(), "maps do not chain");
    if !second.mul(first).is_zero() {
        return false;
    }
    first.rank() == second.cols() - second.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rat;

    fn two_term(lambda: i64) -> Complex<Rat> {
        // k --lambda--> k in degrees 0,1
        Complex::new(
            (),
            0,
            vec![1, 1],
            vec![Matrix::from_i64((), &[&[lambda]])],
        )
        .unwrap()
    }

    #[test]
    fn d_squared_validated() {
        let bad = Complex::<Rat>::new(
            (),
            0,
            vec![1, 1, 1],
            vec![
                Matrix::from_i64((), &[&[1]]),
                Matrix::from_i64((), &[&[1]]),
            ],
        );
        assert!(matches!(bad, Err(ComplexError::DifferentialSquare(_, _))));
    }

    #[test]
    fn shift_conventions() {
        let a = two_term(3);
        assert_eq!(a.shift(0), a);
        assert_eq!(a.shift(1).shift(-1), a);
        let s = a.shift(1);
        assert_eq!(s.dim(-1), 1);
        assert_eq!(s.d(-1), Matrix::from_i64((), &[&[-3]]));
        let pt = Complex::<Rat>::point((), 1, 0);
        assert_eq!(pt.shift(2).lo(), -2);
    }

    #[test]
    fn cohomology_of_exact_and_zero_d() {
        let exact = two_term(1);
        assert!(exact.is_acyclic());

        let zero_d = Complex::<Rat>::new((), 0, vec![2, 1], vec![Matrix::zero((), 1, 2)]).unwrap();
        assert_eq!(zero_d.cohomology(0).dim, 2);
        assert_eq!(zero_d.cohomology(1).dim, 1);

        // k^2 --[1 0]--> k in degrees 0,1: H^0 = 1, H^1 = 0
        let a = Complex::<Rat>::new((), 0, vec![2, 1], vec![Matrix::from_i64((), &[&[1, 0]])]).unwrap();
        assert_eq!(a.cohomology(0).dim, 1);
        assert_eq!(a.cohomology(1).dim, 0);
    }

    #[test]
    fn cone_of_identity_and_zero() {
        let a = two_term(0);
        let (m, t) = mapping_cone(&ChainMap::identity(&a));
        assert!(m.is_acyclic());
        assert!(t.les_is_exact());

        let b = Complex::<Rat>::point((), 2, 0);
        let z = ChainMap::zero(a.clone(), b.clone());
        let (m0, _) = mapping_cone(&z);
        assert_eq!(m0, a.shift(1).direct_sum(&b));
    }

    #[test]
    fn cone_of_invertible_scalar_is_acyclic() {
        let a = Complex::<Rat>::point((), 1, 0);
        let f = ChainMap::new(
            a.clone(),
            a.clone(),
            [(0, Matrix::from_i64((), &[&[2]]))].into(),
        )
        .unwrap();
        let (m, _) = mapping_cone(&f);
        assert!(m.is_acyclic());
        assert!(f.is_quasi_iso());
    }

    #[test]
    fn turn_preserves_les() {
        let a = two_term(0);
        let b = Complex::<Rat>::point((), 1, 0);
        let f = ChainMap::zero(a.clone(), b.clone());
        let (_, t) = mapping_cone(&f);
        assert!(t.les_is_exact());
        let t1 = t.turn();
        assert!(t1.les_is_exact());
        let t4 = t1.turn().turn().turn();
        assert!(t4.les_is_exact());
    }

    #[test]
    fn quasi_iso_detection() {
        let a = two_term(0);
        assert!(ChainMap::identity(&a).is_quasi_iso());
        assert!(!ChainMap::zero(a.clone(), a.clone()).is_quasi_iso());
    }

    #[test]
    fn induced_map_coordinates() {
        // A = k in degree 0; B = [k -> k^2] with d = (1,0)^T, H^0(B) = 0
        let a = Complex::<Rat>::point((), 1, 0);
        let b = Complex::new(
            (),
            0,
            vec![1, 2],
            vec![Matrix::from_i64((), &[&[1], &[0]])],
        )
        .unwrap();
        assert_eq!(b.cohomology(0).dim, 0);
        assert_eq!(b.cohomology(1).dim, 1);
        let f = ChainMap::zero(a, b);
        assert_eq!(f.induced_on_cohomology(0).cols(), 1);
        assert_eq!(f.induced_on_cohomology(0).rows(), 0);
    }
}
