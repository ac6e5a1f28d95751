//! Finite regular cell complexes presented by signed face posets, with
//! stratifications.
//!
//! A site is a list of cells with real dimensions and signed incidence
//! numbers [tau : sigma] for each covering face pair sigma <. tau. Open
//! sets are up-closed cell sets (unions of open stars), closed sets are
//! down-closed.

use std::collections::{BTreeMap, BTreeSet};

pub type CellId = usize;

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum SiteError {
    #[error("incidence references unknown cell {0:?}")]
    UnknownCell(String),
    #[error("covering face {face} must have dimension one less than {cell}")]
    NotCovering { face: String, cell: String },
    #[error("incidence sign for ({face}, {cell}) must be nonzero")]
    ZeroSign { face: String, cell: String },
    #[error("duplicate incidence pair ({face}, {cell})")]
    DuplicateIncidence { face: String, cell: String },
    #[error("boundary of boundary fails over the pair ({low}, {high})")]
    BoundarySquare { low: String, high: String },
    #[error("duplicate cell name {0:?}")]
    DuplicateCell(String),
    #[error("cell {cell} belongs to no stratum")]
    UnstratifiedCell { cell: String },
    #[error("stratum {stratum} has a cell {cell} of real dimension {dim}, exceeding 2 * {cx_dim}")]
    StratumDimension {
        stratum: String,
        cell: String,
        dim: usize,
        cx_dim: u32,
    },
    #[error("frontier condition fails: closure of stratum {stratum} meets stratum {other} only partially")]
    Frontier { stratum: String, other: String },
    #[error("closure of stratum {stratum} reaches stratum {other} of no smaller dimension")]
    FrontierDimension { stratum: String, other: String },
    #[error("cell set is not up-closed: contains {low} but not {high}")]
    NotOpen { low: String, high: String },
    #[error("cell set is not down-closed: contains {high} but not {low}")]
    NotClosed { low: String, high: String },
    #[error("cell set is not locally closed at {mid}")]
    NotLocallyClosed { mid: String },
    #[error("unknown stratum {0:?}")]
    UnknownStratum(String),
}

#[derive(Debug, Clone)]
pub struct CellSite {
    names: Vec<String>,
    dims: Vec<usize>,
    /// covering incidences: for each cell, its codimension-one faces with
    /// the sign [cell : face]
    faces: Vec<Vec<(CellId, i64)>>,
    /// inverse: for each cell, cells covering it with the sign
    cofaces: Vec<Vec<(CellId, i64)>>,
    /// full face relation sigma <= tau as down-sets per cell
    below: Vec<BTreeSet<CellId>>,
}

impl CellSite {
    pub fn new(
        cells: Vec<(String, usize)>,
        incidences: Vec<(String, String, i64)>,
    ) -> Result<Self, SiteError> {
        let mut index = BTreeMap::new();
        for (i, (name, _)) in cells.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(SiteError::DuplicateCell(name.clone()));
            }
        }
        let names: Vec<String> = cells.iter().map(|c| c.0.clone()).collect();
        let dims: Vec<usize> = cells.iter().map(|c| c.1).collect();
        let n = names.len();
        let mut faces = vec![Vec::new(); n];
        let mut cofaces = vec![Vec::new(); n];
        let mut seen = BTreeSet::new();
        for (face, cell, sign) in incidences {
            let fi = *index
                .get(&face)
                .ok_or_else(|| SiteError::UnknownCell(face.clone()))?;
            let ci = *index
                .get(&cell)
                .ok_or_else(|| SiteError::UnknownCell(cell.clone()))?;
            if dims[fi] + 1 != dims[ci] {
                return Err(SiteError::NotCovering { face, cell });
            }
            if sign == 0 {
                return Err(SiteError::ZeroSign { face, cell });
            }
            if !seen.insert((fi, ci)) {
                return Err(SiteError::DuplicateIncidence { face, cell });
            }
            faces[ci].push((fi, sign));
            cofaces[fi].push((ci, sign));
        }
        for f in faces.iter_mut().chain(cofaces.iter_mut()) {
            f.sort();
        }
        // boundary-of-boundary: over every codimension-two pair the signed
        // count of two-step paths vanishes
        for top in 0..n {
            let mut totals: BTreeMap<CellId, i64> = BTreeMap::new();
            for &(mid, s1) in &faces[top] {
                for &(low, s2) in &faces[mid] {
                    *totals.entry(low).or_insert(0) += s1 * s2;
                }
            }
            for (low, total) in totals {
                if total != 0 {
                    return Err(SiteError::BoundarySquare {
                        low: names[low].clone(),
                        high: names[top].clone(),
                    });
                }
            }
        }
        // transitive closure of the face relation
        let mut below: Vec<BTreeSet<CellId>> = vec![BTreeSet::new(); n];
        let mut order: Vec<CellId> = (0..n).collect();
        order.sort_by_key(|&c| dims[c]);
        for &c in &order {
            let mut set = BTreeSet::new();
            set.insert(c);
            for &(f, _) in &faces[c] {
                set.extend(below[f].iter().copied());
            }
            below[c] = set;
        }
        Ok(CellSite {
            names,
            dims,
            faces,
            cofaces,
            below,
        })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn cells(&self) -> impl Iterator<Item = CellId> {
        0..self.names.len()
    }

    pub fn name(&self, c: CellId) -> &str {
        &self.names[c]
    }

    pub fn cell_by_name(&self, name: &str) -> Option<CellId> {
        self.names.iter().position(|n| n == name)
    }

    pub fn dim(&self, c: CellId) -> usize {
        self.dims[c]
    }

    pub fn top_dim(&self) -> usize {
        self.dims.iter().copied().max().unwrap_or(0)
    }

    /// Codimension-one faces with signs [c : face].
    pub fn faces(&self, c: CellId) -> &[(CellId, i64)] {
        &self.faces[c]
    }

    /// Cells covering c, with signs [coface : c].
    pub fn cofaces(&self, c: CellId) -> &[(CellId, i64)] {
        &self.cofaces[c]
    }

    pub fn leq(&self, lower: CellId, upper: CellId) -> bool {
        self.below[upper].contains(&lower)
    }

    /// Open star: all cells having c as a face (including c).
    pub fn star(&self, c: CellId) -> BTreeSet<CellId> {
        self.cells().filter(|&t| self.leq(c, t)).collect()
    }

    /// Downward closure of a cell set.
    pub fn closure(&self, set: &BTreeSet<CellId>) -> BTreeSet<CellId> {
        let mut out = BTreeSet::new();
        for &c in set {
            out.extend(self.below[c].iter().copied());
        }
        out
    }

    /// Smallest open set containing the given cells.
    pub fn up_closure(&self, set: &BTreeSet<CellId>) -> BTreeSet<CellId> {
        let mut out = BTreeSet::new();
        for &c in set {
            out.extend(self.star(c));
        }
        out
    }

    pub fn check_open(&self, set: &BTreeSet<CellId>) -> Result<(), SiteError> {
        for &c in set {
            for &(t, _) in self.cofaces(c) {
                if !set.contains(&t) {
                    return Err(SiteError::NotOpen {
                        low: self.names[c].clone(),
                        high: self.names[t].clone(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn check_closed(&self, set: &BTreeSet<CellId>) -> Result<(), SiteError> {
        for &c in set {
            for &(f, _) in self.faces(c) {
                if !set.contains(&f) {
                    return Err(SiteError::NotClosed {
                        low: self.names[f].clone(),
                        high: self.names[c].clone(),
                    });
                }
            }
        }
        Ok(())
    }

    /// Locally closed = intersection of an open and a closed set =
    /// convex in the face order.
    pub fn check_locally_closed(&self, set: &BTreeSet<CellId>) -> Result<(), SiteError> {
        for &low in set {
            for &high in set {
                if !self.leq(low, high) {
                    continue;
                }
                for mid in self.cells() {
                    if self.leq(low, mid) && self.leq(mid, high) && !set.contains(&mid) {
                        return Err(SiteError::NotLocallyClosed {
                            mid: self.names[mid].clone(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn complement(&self, set: &BTreeSet<CellId>) -> BTreeSet<CellId> {
        self.cells().filter(|c| !set.contains(c)).collect()
    }

    pub fn all_cells(&self) -> BTreeSet<CellId> {
        self.cells().collect()
    }

    /// All nonempty chains sigma_0 < ... < sigma_l inside the given set,
    /// grouped by length l.
    pub fn chains_in(&self, set: &BTreeSet<CellId>) -> Vec<Vec<Vec<CellId>>> {
        let cells: Vec<CellId> = set.iter().copied().collect();
        let mut by_len: Vec<Vec<Vec<CellId>>> = vec![cells.iter().map(|&c| vec![c]).collect()];
        loop {
            let last = by_len.last().unwrap();
            let mut next = Vec::new();
            for chain in last {
                let top = *chain.last().unwrap();
                for &c in &cells {
                    if c != top && self.leq(top, c) {
                        let mut ext = chain.clone();
                        ext.push(c);
                        next.push(ext);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            by_len.push(next);
        }
        by_len
    }
}

/// A partition of the cells into named strata with declared complex
/// dimensions.
#[derive(Debug, Clone)]
pub struct Stratification {
    stratum_names: Vec<String>,
    cx_dims: Vec<u32>,
    assignment: Vec<usize>, // cell -> stratum index
}

impl Stratification {
    pub fn new(
        site: &CellSite,
        strata: Vec<(String, u32)>,
        assignment_by_name: &BTreeMap<String, String>,
    ) -> Result<Self, SiteError> {
        let mut stratum_index = BTreeMap::new();
        for (i, (name, _)) in strata.iter().enumerate() {
            if stratum_index.insert(name.clone(), i).is_some() {
                return Err(SiteError::DuplicateCell(name.clone()));
            }
        }
        let mut assignment = vec![usize::MAX; site.len()];
        for c in site.cells() {
            let sname = assignment_by_name
                .get(site.name(c))
                .ok_or_else(|| SiteError::UnstratifiedCell {
                    cell: site.name(c).to_string(),
                })?;
            let si = *stratum_index
                .get(sname)
                .ok_or_else(|| SiteError::UnknownStratum(sname.clone()))?;
            assignment[c] = si;
        }
        let strat = Stratification {
            stratum_names: strata.iter().map(|s| s.0.clone()).collect(),
            cx_dims: strata.iter().map(|s| s.1).collect(),
            assignment,
        };
        strat.validate(site)?;
        Ok(strat)
    }

    /// One stratum holding everything, declared dimension ceil(top/2).
    pub fn single(site: &CellSite, name: &str) -> Self {
        let cx = ((site.top_dim() + 1) / 2) as u32;
        Stratification {
            stratum_names: vec![name.to_string()],
            cx_dims: vec![cx],
            assignment: vec![0; site.len()],
        }
    }

    fn validate(&self, site: &CellSite) -> Result<(), SiteError> {
        for c in site.cells() {
            let s = self.assignment[c];
            if site.dim(c) > 2 * self.cx_dims[s] as usize {
                return Err(SiteError::StratumDimension {
                    stratum: self.stratum_names[s].clone(),
                    cell: site.name(c).to_string(),
                    dim: site.dim(c),
                    cx_dim: self.cx_dims[s],
                });
            }
        }
        // frontier: the closure of each stratum is a union of strata, and
        // strictly lower-dimensional strata at that
        for s in 0..self.stratum_names.len() {
            let cells: BTreeSet<CellId> = site
                .cells()
                .filter(|&c| self.assignment[c] == s)
                .collect();
            let closure = site.closure(&cells);
            for other in 0..self.stratum_names.len() {
                if other == s {
                    continue;
                }
                let other_cells: Vec<CellId> = site
                    .cells()
                    .filter(|&c| self.assignment[c] == other)
                    .collect();
                let inside = other_cells.iter().filter(|c| closure.contains(c)).count();
                if inside == 0 {
                    continue;
                }
                if inside != other_cells.len() {
                    return Err(SiteError::Frontier {
                        stratum: self.stratum_names[s].clone(),
                        other: self.stratum_names[other].clone(),
                    });
                }
                if self.cx_dims[other] >= self.cx_dims[s] {
                    return Err(SiteError::FrontierDimension {
                        stratum: self.stratum_names[s].clone(),
                        other: self.stratum_names[other].clone(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn strata(&self) -> impl Iterator<Item = usize> {
        0..self.stratum_names.len()
    }

    pub fn stratum_name(&self, s: usize) -> &str {
        &self.stratum_names[s]
    }

    pub fn cx_dim(&self, s: usize) -> u32 {
        self.cx_dims[s]
    }

    pub fn stratum_of(&self, c: CellId) -> usize {
        self.assignment[c]
    }

    pub fn cx_dim_of_cell(&self, c: CellId) -> u32 {
        self.cx_dims[self.assignment[c]]
    }

    pub fn cells_of(&self, site: &CellSite, s: usize) -> BTreeSet<CellId> {
        site.cells().filter(|&c| self.assignment[c] == s).collect()
    }

    /// Declared complex dimension of the whole site.
    pub fn total_cx_dim(&self) -> u32 {
        self.cx_dims.iter().copied().max().unwrap_or(0)
    }

    /// Complex dimension of a cell set; `None` for the empty set.
    pub fn cx_dim_of_set(&self, set: &BTreeSet<CellId>) -> Option<u32> {
        set.iter().map(|&c| self.cx_dim_of_cell(c)).max()
    }

    /// Union of strata of complex dimension <= k ("the k-skeleton" of the
    /// stratification).
    pub fn skeleton(&self, site: &CellSite, k: i64) -> BTreeSet<CellId> {
        site.cells()
            .filter(|&c| (self.cx_dim_of_cell(c) as i64) <= k)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn circle_site_is_valid() {
        let site = fixtures::circle();
        assert_eq!(site.len(), 4);
        let v0 = site.cell_by_name("v0").unwrap();
        assert_eq!(site.star(v0).len(), 3);
    }

    #[test]
    fn broken_incidence_is_rejected() {
        // square face with both routes agreeing in sign: d.d != 0
        let r = CellSite::new(
            vec![
                ("v".into(), 0),
                ("e1".into(), 1),
                ("e2".into(), 1),
                ("f".into(), 2),
            ],
            vec![
                ("v".into(), "e1".into(), 1),
                ("v".into(), "e2".into(), 1),
                ("e1".into(), "f".into(), 1),
                ("e2".into(), "f".into(), -1),
            ],
        );
        assert!(r.is_ok());
        let r = CellSite::new(
            vec![
                ("v".into(), 0),
                ("e1".into(), 1),
                ("e2".into(), 1),
                ("f".into(), 2),
            ],
            vec![
                ("v".into(), "e1".into(), 1),
                ("v".into(), "e2".into(), 1),
                ("e1".into(), "f".into(), 1),
                ("e2".into(), "f".into(), 1),
            ],
        );
        assert!(matches!(r, Err(SiteError::BoundarySquare { .. })));
    }

    #[test]
    fn open_and_closed_sets() {
        let site = fixtures::circle();
        let v0 = site.cell_by_name("v0").unwrap();
        let star = site.star(v0);
        assert!(site.check_open(&star).is_ok());
        assert!(site.check_closed(&star).is_err());
        let pt: BTreeSet<_> = [v0].into();
        assert!(site.check_closed(&pt).is_ok());
        assert!(site.check_locally_closed(&pt).is_ok());
    }

    #[test]
    fn chains_of_circle() {
        let site = fixtures::circle();
        let chains = site.chains_in(&site.all_cells());
        assert_eq!(chains[0].len(), 4);
        assert_eq!(chains[1].len(), 4); // v < e incidences
        assert_eq!(chains.len(), 2);
    }

    #[test]
    fn two_lines_stratification_valid() {
        let (site, strat) = fixtures::two_lines();
        assert_eq!(site.len(), 17);
        assert_eq!(strat.total_cx_dim(), 1);
        let center = site.cell_by_name("x").unwrap();
        assert_eq!(strat.cx_dim_of_cell(center), 0);
    }
}
