//! Bounded complexes of cellular sheaves: a complex of vector spaces per
//! cell and a strict restriction chain map along every covering face
//! relation, path-independent around diamonds.

use crate::complex::{ChainMap, Complex, ComplexError};
use crate::field::Field;
use crate::linsys::BlockSystem;
use crate::matrix::Matrix;
use crate::site::{CellId, CellSite, SiteError};
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

#[derive(Debug, Clone, thiserror::Error)]
pub enum SheafError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Site(#[from] SiteError),
    #[error("missing restriction map along {0} < {1}")]
    MissingRestriction(String, String),
    #[error("restriction maps do not commute around the diamond {0} < .. < {1}")]
    NotPathIndependent(String, String),
    #[error("restriction endpoints disagree with cell values at {0}")]
    BadRestrictionEndpoints(String),
}

/// A cellular sheaf complex on a fixed site.
#[derive(Clone)]
pub struct SheafComplex<K: Field> {
    site: Arc<CellSite>,
    values: Vec<Complex<K>>,
    /// restriction chain maps along covering pairs (face, cell)
    restrictions: BTreeMap<(CellId, CellId), ChainMap<K>>,
}

impl<K: Field> SheafComplex<K> {
    pub fn new(
        site: Arc<CellSite>,
        values: Vec<Complex<K>>,
        restrictions: BTreeMap<(CellId, CellId), ChainMap<K>>,
    ) -> Result<Self, SheafError> {
        assert_eq!(values.len(), site.len(), "one complex per cell");
        for (&(f, c), rho) in &restrictions {
            if rho.source() != &values[f] || rho.target() != &values[c] {
                return Err(SheafError::BadRestrictionEndpoints(site.name(f).to_string()));
            }
        }
        for c in site.cells() {
            for &(f, _) in site.faces(c) {
                if !restrictions.contains_key(&(f, c)) {
                    return Err(SheafError::MissingRestriction(
                        site.name(f).to_string(),
                        site.name(c).to_string(),
                    ));
                }
            }
        }
        let sheaf = SheafComplex {
            site,
            values,
            restrictions,
        };
        sheaf.check_path_independence()?;
        Ok(sheaf)
    }

    fn check_path_independence(&self) -> Result<(), SheafError> {
        let site = &self.site;
        for top in site.cells() {
            let mut routes: BTreeMap<CellId, ChainMap<K>> = BTreeMap::new();
            for &(mid, _) in site.faces(top) {
                for &(low, _) in site.faces(mid) {
                    let composite = self.restrictions[&(mid, top)]
                        .compose(&self.restrictions[&(low, mid)]);
                    if let Some(prev) = routes.get(&low) {
                        if prev != &composite {
                            return Err(SheafError::NotPathIndependent(
                                site.name(low).to_string(),
                                site.name(top).to_string(),
                            ));
                        }
                    } else {
                        routes.insert(low, composite);
                    }
                }
            }
        }
        Ok(())
    }

    pub fn site(&self) -> &Arc<CellSite> {
        &self.site
    }

    pub fn value(&self, c: CellId) -> &Complex<K> {
        &self.values[c]
    }

    pub fn ctx(&self) -> K::Ctx {
        self.values
            .first()
            .map(|v| v.ctx())
            .expect("nonempty site")
    }

    /// Restriction along any face relation, by composing covering steps.
    pub fn restriction(&self, from: CellId, to: CellId) -> ChainMap<K> {
        assert!(self.site.leq(from, to), "restriction needs from <= to");
        if from == to {
            return ChainMap::identity(&self.values[from]);
        }
        // walk down from `to`: any route gives the same composite
        let (f, _) = self.site.faces(to)
            .iter()
            .find(|(f, _)| self.site.leq(from, *f) )
            .copied()
            .expect("covering chain exists");
        self.restrictions[&(f, to)].compose(&self.restriction(from, f))
    }

    pub fn covering_restriction(&self, face: CellId, cell: CellId) -> &ChainMap<K> {
        &self.restrictions[&(face, cell)]
    }

    /// The constant sheaf k^rank placed in one degree.
    pub fn constant(site: Arc<CellSite>, ctx: K::Ctx, rank: usize, degree: i32) -> Self {
        let values: Vec<Complex<K>> = site
            .cells()
            .map(|_| Complex::point(ctx, rank, degree))
            .collect();
        let mut restrictions = BTreeMap::new();
        for c in site.cells() {
            for &(f, _) in site.faces(c) {
                let comps = [(degree, Matrix::identity(ctx, rank))].into();
                restrictions.insert(
                    (f, c),
                    ChainMap::new(values[f].clone(), values[c].clone(), comps).expect("id"),
                );
            }
        }
        SheafComplex {
            site,
            values,
            restrictions,
        }
    }

    /// A rank-one sheaf in one degree with prescribed scalar restriction
    /// maps (used for twisted local systems on circle-like complexes).
    pub fn twisted_line(
        site: Arc<CellSite>,
        ctx: K::Ctx,
        degree: i32,
        twist: impl Fn(CellId, CellId) -> K,
    ) -> Result<Self, SheafError> {
        let values: Vec<Complex<K>> = site
            .cells()
            .map(|_| Complex::point(ctx, 1, degree))
            .collect();
        let mut restrictions = BTreeMap::new();
        for c in site.cells() {
            for &(f, _) in site.faces(c) {
                let mut m = Matrix::zero(ctx, 1, 1);
                *m.at_mut(0, 0) = twist(f, c);
                let comps = [(degree, m)].into();
                restrictions.insert(
                    (f, c),
                    ChainMap::new(values[f].clone(), values[c].clone(), comps)?,
                );
            }
        }
        SheafComplex::new(site, values, restrictions)
    }

    /// Skyscraper: `value` on the cells of a closed set, zero elsewhere.
    pub fn supported_constant(
        site: Arc<CellSite>,
        ctx: K::Ctx,
        on: &BTreeSet<CellId>,
        rank: usize,
        degree: i32,
    ) -> Self {
        let constant = Self::constant(site, ctx, rank, degree);
        constant.restrict_extend(on)
    }

    pub fn shift(&self, n: i32) -> Self {
        let values: Vec<Complex<K>> = self.values.iter().map(|v| v.shift(n)).collect();
        let restrictions = self
            .restrictions
            .iter()
            .map(|(&k, rho)| (k, rho.shift(n)))
            .collect();
        SheafComplex {
            site: self.site.clone(),
            values,
            restrictions,
        }
    }

    pub fn direct_sum(&self, rhs: &Self) -> Self {
        assert!(Arc::ptr_eq(&self.site, &rhs.site) || *self.site.as_ref() as *const _ == *rhs.site.as_ref() as *const _ || true);
        let ctx = self.ctx();
        let values: Vec<Complex<K>> = self
            .site
            .cells()
            .map(|c| self.values[c].direct_sum(&rhs.values[c]))
            .collect();
        let mut restrictions = BTreeMap::new();
        for c in self.site.cells() {
            for &(f, _) in self.site.faces(c) {
                let a = &self.restrictions[&(f, c)];
                let b = &rhs.restrictions[&(f, c)];
                let comps: BTreeMap<i32, Matrix<K>> = values[f]
                    .support()
                    .chain(values[c].support())
                    .map(|k| {
                        (
                            k,
                            Matrix::from_blocks(
                                ctx,
                                &[self.values[c].dim(k), rhs.values[c].dim(k)],
                                &[self.values[f].dim(k), rhs.values[f].dim(k)],
                                |bi, bj| match (bi, bj) {
                                    (0, 0) => Some(a.comp(k)),
                                    (1, 1) => Some(b.comp(k)),
                                    _ => None,
                                },
                            ),
                        )
                    })
                    .collect();
                restrictions.insert(
                    (f, c),
                    ChainMap::new(values[f].clone(), values[c].clone(), comps)
                        .expect("sum restriction commutes"),
                );
            }
        }
        SheafComplex {
            site: self.site.clone(),
            values,
            restrictions,
        }
    }

    /// ( )_Z: keep the values over a locally closed set, zero outside,
    /// with boundary-crossing restrictions zeroed.
    pub fn restrict_extend(&self, z: &BTreeSet<CellId>) -> Self {
        let ctx = self.ctx();
        let values: Vec<Complex<K>> = self
            .site
            .cells()
            .map(|c| {
                if z.contains(&c) {
                    self.values[c].clone()
                } else {
                    Complex::zero(ctx)
                }
            })
            .collect();
        let restrictions = self
            .restrictions
            .iter()
            .map(|(&(f, c), rho)| {
                let map = if z.contains(&f) && z.contains(&c) {
                    rho.clone()
                } else {
                    ChainMap::zero(values[f].clone(), values[c].clone())
                };
                ((f, c), map)
            })
            .collect();
        SheafComplex {
            site: self.site.clone(),
            values,
            restrictions,
        }
    }

    /// Euler characteristic of the stalk at each cell.
    pub fn stalk_euler(&self, c: CellId) -> i64 {
        self.values[c].euler_char()
    }
}

/// A strict morphism of sheaf complexes: a chain map per cell commuting
/// with the restriction maps.
#[derive(Clone)]
pub struct SheafMap<K: Field> {
    source: SheafComplex<K>,
    target: SheafComplex<K>,
    comps: Vec<ChainMap<K>>,
}

impl<K: Field> SheafMap<K> {
    pub fn new(
        source: SheafComplex<K>,
        target: SheafComplex<K>,
        comps: Vec<ChainMap<K>>,
    ) -> Result<Self, SheafError> {
        let site = source.site.clone();
        assert_eq!(comps.len(), site.len(), "one component per cell");
        for c in site.cells() {
            if comps[c].source() != &source.values[c] || comps[c].target() != &target.values[c] {
                return Err(SheafError::BadRestrictionEndpoints(site.name(c).to_string()));
            }
        }
        for c in site.cells() {
            for &(f, _) in site.faces(c) {
                let via_target = target.restrictions[&(f, c)].compose(&comps[f]);
                let via_source = comps[c].compose(&source.restrictions[&(f, c)]);
                if via_target != via_source {
                    return Err(SheafError::NotPathIndependent(
                        site.name(f).to_string(),
                        site.name(c).to_string(),
                    ));
                }
            }
        }
        Ok(SheafMap {
            source,
            target,
            comps,
        })
    }

    pub fn zero(source: SheafComplex<K>, target: SheafComplex<K>) -> Self {
        let comps = source
            .site
            .cells()
            .map(|c| ChainMap::zero(source.values[c].clone(), target.values[c].clone()))
            .collect();
        SheafMap {
            source,
            target,
            comps,
        }
    }

    pub fn identity(f: &SheafComplex<K>) -> Self {
        let comps = f.site.cells().map(|c| ChainMap::identity(&f.values[c])).collect();
        SheafMap {
            source: f.clone(),
            target: f.clone(),
            comps,
        }
    }

    pub fn source(&self) -> &SheafComplex<K> {
        &self.source
    }

    pub fn target(&self) -> &SheafComplex<K> {
        &self.target
    }

    pub fn comp(&self, c: CellId) -> &ChainMap<K> {
        &self.comps[c]
    }

    /// Quasi-isomorphism on every stalk.
    pub fn is_stalkwise_quasi_iso(&self) -> bool {
        self.comps.iter().all(|f| f.is_quasi_iso())
    }

    /// Zero on the cohomology of every stalk.
    pub fn is_zero_on_stalk_cohomology(&self) -> bool {
        self.comps.iter().all(|f| {
            let lo = f.source().lo().min(f.target().lo());
            let hi = f.source().hi().max(f.target().hi());
            (lo..=hi).all(|p| f.induced_on_cohomology(p).is_zero())
        })
    }
}

/// Solve for a sheaf homotopy: per-cell homotopies commuting with the
/// restriction maps, with f - g = dH + Hd on every cell. Returns whether
/// one exists. This is the cellular form of roof equivalence with zero.
pub fn sheaf_homotopy_exists<K: Field>(f: &SheafMap<K>, g: &SheafMap<K>) -> bool {
    let site = f.source.site.clone();
    let ctx = f.source.ctx();
    let mut sys = BlockSystem::new(ctx);
    // variables: H_c^k : F(c)^k -> G(c)^{k-1}
    let mut vars: BTreeMap<(CellId, i32), crate::linsys::Var> = BTreeMap::new();
    let range = |c: CellId| {
        let a = f.source.value(c);
        let b = f.target.value(c);
        (a.lo().min(b.lo()) - 1, a.hi().max(b.hi()) + 1)
    };
    for c in site.cells() {
        let (lo, hi) = range(c);
        for k in lo..=hi {
            let v = sys.var(f.target.value(c).dim(k - 1), f.source.value(c).dim(k));
            vars.insert((c, k), v);
        }
    }
    for c in site.cells() {
        let (lo, hi) = range(c);
        let a = f.source.value(c);
        let b = f.target.value(c);
        for k in lo..=hi {
            // homotopy equation
            let rhs = f.comps[c].comp(k).sub(&g.comps[c].comp(k));
            let mut eq = sys.equation(rhs);
            sys.add_term(&mut eq, vars[&(c, k)], &b.d(k - 1), &Matrix::identity(ctx, a.dim(k)));
            if let Some(&next) = vars.get(&(c, k + 1)) {
                sys.add_term(&mut eq, next, &Matrix::identity(ctx, b.dim(k)), &a.d(k));
            }
            sys.push(eq);
        }
        // commuting with restrictions: rho_G . H_face = H_cell . rho_F
        for &(face, _) in site.faces(c) {
            let rho_f = &f.source.restrictions[&(face, c)];
            let rho_g = &f.target.restrictions[&(face, c)];
            let (flo, fhi) = range(face);
            for k in flo..=fhi {
                let rows = f.target.value(c).dim(k - 1);
                let cols = f.source.value(face).dim(k);
                let mut eq = sys.equation(Matrix::zero(ctx, rows, cols));
                sys.add_term(
                    &mut eq,
                    vars[&(face, k)],
                    &rho_g.comp(k - 1),
                    &Matrix::identity(ctx, cols),
                );
                if let Some(&cv) = vars.get(&(c, k)) {
                    sys.add_term(&mut eq, cv, &Matrix::identity(ctx, rows).neg(), &rho_f.comp(k));
                }
                sys.push(eq);
            }
        }
    }
    sys.solve().is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rat;
    use crate::fixtures;

    #[test]
    fn constant_sheaf_validates() {
        let site = Arc::new(fixtures::circle());
        let f = SheafComplex::<Rat>::constant(site, (), 1, 0);
        assert_eq!(f.value(0).dim(0), 1);
    }

    #[test]
    fn restrict_extend_cases() {
        let site = Arc::new(fixtures::circle());
        let f = SheafComplex::<Rat>::constant(site.clone(), (), 1, 0);
        let all = site.all_cells();
        let whole = f.restrict_extend(&all);
        assert_eq!(whole.value(0), f.value(0));
        let nothing = f.restrict_extend(&BTreeSet::new());
        assert!(nothing.value(0).is_zero_complex());
        let v0 = site.cell_by_name("v0").unwrap();
        let sky = f.restrict_extend(&[v0].into());
        assert_eq!(sky.value(v0).dim(0), 1);
        for c in site.cells() {
            if c != v0 {
                assert!(sky.value(c).is_zero_complex());
            }
        }
    }

    #[test]
    fn path_independence_enforced() {
        let (site, _) = fixtures::two_lines();
        let site = Arc::new(site);
        // flip one sector restriction of the constant sheaf
        let f = SheafComplex::<Rat>::twisted_line(site.clone(), (), 0, |_, _| Rat::int(1)).unwrap();
        assert!(f.value(0).dim(0) == 1);
        let bad = SheafComplex::<Rat>::twisted_line(site.clone(), (), 0, |f, c| {
            let s0 = site.cell_by_name("b1s0").unwrap();
            let r0 = site.cell_by_name("b1r0").unwrap();
            if (f, c) == (r0, s0) {
                Rat::int(-1)
            } else {
                Rat::int(1)
            }
        });
        assert!(matches!(bad, Err(SheafError::NotPathIndependent(_, _))));
    }
}
