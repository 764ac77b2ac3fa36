//! Finite polyhedral skeletons `(S, π)` with model labels.
//!
//! Each cell is a bounded polytope in its own coordinates with an injective
//! affine map `π` to `t*`. An incidence identifies a face of one cell with
//! the face of another cell that has the same image under `π`.

mod compat;
mod homology;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactla::{qmat, Int, Rational};
use crate::model::{ModelError, ModelLabel};
use crate::polyhedra::{face_lattice, HPolyhedron, PolyError, VPolyhedron};
use crate::serde_util;

pub use compat::{
    check_delta_compat, check_rho_compat, check_rho_compat_with, checkpoints, CheckpointRecord, CompatKind,
    CompatReport, ConeWitness, TruncationChoice,
};
pub use homology::{betti, Betti};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SkeletonError {
    #[error("pi is not injective on cell {0}")]
    NonInjectivePi(usize),
    #[error("label of cell {0} is not tall")]
    LabelNotTall(usize),
    #[error("label of cell {0} is not exceptional")]
    LabelNotExceptional(usize),
    #[error("incidence {0} does not match the pi images")]
    IncidenceMismatch(usize),
    #[error("cell {0}: {1}")]
    InvalidCell(usize, String),
    #[error("cells of dimension {0} are not supported")]
    DimensionTooLarge(usize),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SkeletonCell {
    pub carrier: HPolyhedron,
    /// Rows of the linear part of `π`.
    #[serde(with = "serde_util::int_vecs")]
    pub pi_linear: Vec<Vec<Int>>,
    #[serde(with = "serde_util::rational_vec")]
    pub pi_offset: Vec<Rational>,
    pub label: ModelLabel,
}

impl SkeletonCell {
    /// A cell given directly in `t*` coordinates (`π` the identity).
    pub fn embedded(carrier: HPolyhedron, label: ModelLabel) -> Self {
        let n = carrier.dim();
        let pi_linear = (0..n)
            .map(|i| (0..n).map(|j| Int::from((i == j) as i64)).collect())
            .collect();
        SkeletonCell {
            carrier,
            pi_linear,
            pi_offset: vec![Rational::zero(); n],
            label,
        }
    }

    fn pi_matrix(&self) -> Vec<Vec<Rational>> {
        self.pi_linear
            .iter()
            .map(|r| r.iter().map(|x| Rational::from_integer(x.clone())).collect())
            .collect()
    }

    pub fn apply_pi(&self, x: &[Rational]) -> Vec<Rational> {
        self.pi_linear
            .iter()
            .zip(&self.pi_offset)
            .map(|(r, o)| crate::exactla::dot_mixed(r, x) + o)
            .collect()
    }

    /// `π(carrier)` as a polytope in `t*`.
    pub fn image(&self) -> Result<HPolyhedron, PolyError> {
        let v = self.carrier.to_v()?;
        if !v.is_bounded() {
            return Err(PolyError::Unbounded);
        }
        let n = self.pi_offset.len();
        if v.is_empty() {
            return Ok(HPolyhedron::empty(n));
        }
        VPolyhedron::from_points(n, v.points.iter().map(|p| self.apply_pi(p)).collect()).to_h()
    }

    /// The unique `x` in the carrier with `π(x) = α`, if any.
    pub fn preimage(&self, alpha: &[Rational]) -> Option<Vec<Rational>> {
        let b: Vec<Rational> = alpha.iter().zip(&self.pi_offset).map(|(a, o)| a - o).collect();
        let x = qmat::solve_cols(&self.pi_matrix(), self.carrier.dim(), &b)?;
        self.carrier.contains(&x).then_some(x)
    }
}

/// `face` (indices of tight inequalities of `cell`'s carrier) is identified
/// through `π` with the face of `target` that has the same image.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Incidence {
    pub cell: usize,
    pub face: Vec<usize>,
    pub target: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SkeletonComplex {
    pub cells: Vec<SkeletonCell>,
    #[serde(default)]
    pub incidences: Vec<Incidence>,
    /// Closed sets removed from the base: the skeleton lives over their
    /// complement and no checks are made there.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub excluded: Vec<HPolyhedron>,
}

/// A point of `π^{-1}(α)`, reported in the smallest cell containing it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberPoint {
    pub cell: usize,
    #[serde(with = "serde_util::rational_vec")]
    pub point: Vec<Rational>,
    pub label: ModelLabel,
}

fn face_polyhedron(carrier: &HPolyhedron, face: &[usize]) -> HPolyhedron {
    let mut eqs = carrier.eqs().to_vec();
    eqs.extend(face.iter().map(|&i| carrier.ineqs()[i].clone()));
    HPolyhedron::new(carrier.dim(), carrier.ineqs().to_vec(), eqs)
}

fn image_of(cell: &SkeletonCell, p: &HPolyhedron) -> Result<HPolyhedron, PolyError> {
    let v = p.to_v()?;
    let n = cell.pi_offset.len();
    if v.is_empty() {
        return Ok(HPolyhedron::empty(n));
    }
    VPolyhedron::from_points(n, v.points.iter().map(|x| cell.apply_pi(x)).collect()).to_h()
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        let p = self.0[x];
        if p == x {
            return x;
        }
        let r = self.find(p);
        self.0[x] = r;
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a.max(b)] = a.min(b);
        }
    }
}

impl SkeletonComplex {
    pub fn empty() -> Self {
        Self::default()
    }

    /// `dim t*`, if there is at least one cell.
    pub fn rank(&self) -> Option<usize> {
        self.cells.first().map(|c| c.label.torus_rank())
    }

    pub fn is_excluded(&self, alpha: &[Rational]) -> bool {
        self.excluded.iter().any(|e| e.contains(alpha))
    }

    pub fn validate(&self) -> Result<(), SkeletonError> {
        let n = self.rank();
        for (i, c) in self.cells.iter().enumerate() {
            let bad = |m: &str| SkeletonError::InvalidCell(i, m.to_string());
            let d = c.carrier.dim();
            if Some(c.label.torus_rank()) != n || c.pi_linear.len() != c.label.torus_rank() || c.pi_offset.len() != c.label.torus_rank() {
                return Err(bad("pi has the wrong number of rows"));
            }
            if c.pi_linear.iter().any(|r| r.len() != d) {
                return Err(bad("pi rows must match the carrier dimension"));
            }
            let v = c.carrier.to_v()?;
            if v.is_empty() {
                return Err(bad("empty carrier"));
            }
            if !v.is_bounded() {
                return Err(bad("unbounded carrier"));
            }
            let dirs: Vec<Vec<Rational>> = v.points[1..]
                .iter()
                .map(|p| p.iter().zip(&v.points[0]).map(|(a, b)| a - b).collect())
                .collect();
            let pi = c.pi_matrix();
            let images: Vec<Vec<Rational>> = dirs.iter().map(|x| qmat::mul_vec(&pi, x)).collect();
            if qmat::rank(&images) != qmat::rank(&dirs) {
                return Err(SkeletonError::NonInjectivePi(i));
            }
            if !c.label.is_tall()? {
                return Err(SkeletonError::LabelNotTall(i));
            }
            if !c.label.is_center_exceptional()? {
                return Err(SkeletonError::LabelNotExceptional(i));
            }
        }
        for (k, inc) in self.incidences.iter().enumerate() {
            let mismatch = SkeletonError::IncidenceMismatch(k);
            let (Some(a), Some(b)) = (self.cells.get(inc.cell), self.cells.get(inc.target)) else {
                return Err(mismatch);
            };
            if inc.face.iter().any(|&f| f >= a.carrier.ineqs().len()) {
                return Err(mismatch);
            }
            let face = face_polyhedron(&a.carrier, &inc.face);
            if face.is_empty() {
                return Err(mismatch);
            }
            let im = image_of(a, &face)?;
            let (_, target_faces) = face_lattice(&b.carrier)?;
            let mut found = false;
            for g in target_faces {
                if image_of(b, &face_polyhedron(&b.carrier, &g.active_inequalities))?.same_set(&im)? {
                    found = true;
                    break;
                }
            }
            if !found {
                return Err(mismatch);
            }
        }
        Ok(())
    }

    /// `π^{-1}(α)` with identified points merged, sorted by cell.
    pub fn fiber(&self, alpha: &[Rational]) -> Vec<FiberPoint> {
        if self.rank() != Some(alpha.len()) {
            return Vec::new();
        }
        let entries: Vec<(usize, Vec<Rational>)> = self
            .cells
            .iter()
            .enumerate()
            .filter_map(|(i, c)| c.preimage(alpha).map(|x| (i, x)))
            .collect();
        let mut uf = UnionFind::new(entries.len());
        for inc in &self.incidences {
            let carrier = &self.cells[inc.cell].carrier;
            for (a, (ca, xa)) in entries.iter().enumerate() {
                if *ca != inc.cell || !inc.face.iter().all(|&f| carrier.ineqs()[f].slack(xa).is_zero()) {
                    continue;
                }
                for (b, (cb, _)) in entries.iter().enumerate() {
                    if *cb == inc.target {
                        uf.union(a, b);
                    }
                }
            }
        }
        let dims: Vec<usize> = entries
            .iter()
            .map(|(c, _)| {
                self.cells[*c]
                    .carrier
                    .affine_dim()
                    .ok()
                    .flatten()
                    .unwrap_or(usize::MAX)
            })
            .collect();
        let mut best: std::collections::BTreeMap<usize, usize> = std::collections::BTreeMap::new();
        for e in 0..entries.len() {
            let r = uf.find(e);
            let cur = best.entry(r).or_insert(e);
            if (dims[e], entries[e].0) < (dims[*cur], entries[*cur].0) {
                *cur = e;
            }
        }
        let mut out: Vec<FiberPoint> = best
            .values()
            .map(|&e| FiberPoint {
                cell: entries[e].0,
                point: entries[e].1.clone(),
                label: self.cells[entries[e].0].label.clone(),
            })
            .collect();
        out.sort_by_key(|p| p.cell);
        out
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::exactla::{rat_vec, ratio};
    use crate::polyhedra::Ineq;

    pub(crate) fn segment(lo: &[i64], hi: &[i64]) -> HPolyhedron {
        VPolyhedron::from_points(lo.len(), vec![rat_vec(lo), rat_vec(hi)]).to_h().unwrap()
    }

    pub(crate) fn point(p: &[i64]) -> HPolyhedron {
        VPolyhedron::from_points(p.len(), vec![rat_vec(p)]).to_h().unwrap()
    }

    fn edge_label(axis: usize) -> ModelLabel {
        let mut v = vec![0i64; 2];
        v[axis] = 1;
        ModelLabel::from_i64(2, &[&v], &[&[-1], &[1]]).unwrap()
    }

    fn corner_label() -> ModelLabel {
        ModelLabel::from_i64(2, &[&[1, 0], &[0, 1]], &[&[-1, 0], &[0, -1], &[1, 1]]).unwrap()
    }

    /// Two edges of the square meeting at (1, 1), given in a 1-dimensional
    /// parametrisation, glued through the corner cell.
    fn corner() -> SkeletonComplex {
        let horizontal = SkeletonCell {
            carrier: HPolyhedron::cuboid(&rat_vec(&[-1]), &rat_vec(&[1])),
            pi_linear: vec![vec![Int::from(1)], vec![Int::from(0)]],
            pi_offset: rat_vec(&[0, 1]),
            label: edge_label(1),
        };
        let vertical = SkeletonCell::embedded(segment(&[1, -1], &[1, 1]), edge_label(0));
        let c = SkeletonCell::embedded(point(&[1, 1]), corner_label());
        let hi_end = horizontal
            .carrier
            .ineqs()
            .iter()
            .position(|q| q == &Ineq::from_i64(&[-1], -1))
            .unwrap();
        let v_end = vertical.carrier.active_at(&rat_vec(&[1, 1]));
        SkeletonComplex {
            cells: vec![horizontal, vertical, c],
            incidences: vec![
                Incidence { cell: 0, face: vec![hi_end], target: 2 },
                Incidence { cell: 1, face: v_end, target: 2 },
            ],
            excluded: vec![],
        }
    }

    #[test]
    fn validation() {
        assert!(SkeletonComplex::empty().validate().is_ok());
        assert!(corner().validate().is_ok());
        let short = SkeletonComplex {
            cells: vec![SkeletonCell::embedded(
                segment(&[1, -1], &[1, 1]),
                ModelLabel::from_i64(2, &[&[1, 0]], &[&[1], &[1]]).unwrap(),
            )],
            ..Default::default()
        };
        assert_eq!(short.validate(), Err(SkeletonError::LabelNotTall(0)));
        let fixed = SkeletonComplex {
            cells: vec![SkeletonCell::embedded(
                segment(&[1, -1], &[1, 1]),
                ModelLabel::from_i64(2, &[&[1, 0]], &[&[1], &[0]]).unwrap(),
            )],
            ..Default::default()
        };
        assert_eq!(fixed.validate(), Err(SkeletonError::LabelNotExceptional(0)));
        let mut flat = corner();
        flat.cells[0].pi_linear = vec![vec![Int::from(0)], vec![Int::from(0)]];
        assert_eq!(flat.validate(), Err(SkeletonError::NonInjectivePi(0)));
        let mut wrong = corner();
        wrong.incidences[0].face = vec![1 - wrong.incidences[0].face[0]];
        assert_eq!(wrong.validate(), Err(SkeletonError::IncidenceMismatch(0)));
    }

    #[test]
    fn fibers_merge_identified_points() {
        let s = corner();
        let f = s.fiber(&rat_vec(&[1, 1]));
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].cell, 2);
        let f = s.fiber(&[ratio(1, 2), rat_vec(&[1])[0].clone()]);
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].point, vec![ratio(1, 2)]);
        assert!(s.fiber(&rat_vec(&[0, 0])).is_empty());
        // without the gluing the corner is seen three times
        let mut loose = corner();
        loose.incidences.clear();
        assert_eq!(loose.fiber(&rat_vec(&[1, 1])).len(), 3);
    }

    #[test]
    fn json_round_trip() {
        let s = corner();
        let text = serde_json::to_string(&s).unwrap();
        let back: SkeletonComplex = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
        assert!(!text.contains("excluded"));
        let empty: SkeletonComplex = serde_json::from_str(r#"{"cells":[]}"#).unwrap();
        assert!(empty.cells.is_empty());
    }
}
