//! Exact rational convex polyhedra.
//!
//! An [`HPolyhedron`] is `{x : a·x ≥ b for ineqs, a·x = b for eqs}` with
//! primitive integer normals. The V-side keeps minimal points, primitive
//! rays and a lineality lattice.

mod cones;
mod dd;
mod faces;
mod projection;
mod volume;

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactla::{
    content, dot_mixed, kernel_basis, primitive_integer_direction, qmat, to_rational_vec, Int,
    IntMatrix, LatticeBasis, Rational,
};
use crate::serde_util;

pub use cones::{
    cone_equal, delzant_vertex_report, is_delzant_cone, is_delzant_polytope, tangent_cone,
    VertexConeReport,
};
pub use faces::{face_lattice, Face};
pub use projection::{project_drop_last, Projection};
pub use volume::{simplex_volume, triangulate, volume};

/// Largest ambient dimension accepted by the double description routines.
pub const MAX_DIM: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("dimension {0} exceeds the supported maximum of 8")]
    DimensionTooLarge(usize),
    #[error("point is not in the polyhedron")]
    PointNotInPolyhedron,
    #[error("polyhedron is not a cone with the given apex")]
    NotACone,
    #[error("cones have different apex sets")]
    ApexMismatch,
    #[error("polyhedron is unbounded")]
    Unbounded,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// `a·x ≥ b` (or `a·x = b` when stored as an equation).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Ineq {
    #[serde(with = "serde_util::int_vec")]
    pub a: Vec<Int>,
    #[serde(with = "serde_util::rational")]
    pub b: Rational,
}

impl Ineq {
    /// Scales by a positive factor so that the normal is primitive. `None` for
    /// a zero normal.
    pub fn new(a: Vec<Int>, b: Rational) -> Option<Self> {
        let g = content(&a);
        if g.is_zero() {
            return None;
        }
        if g.is_one() {
            return Some(Ineq { a, b });
        }
        let b = b / Rational::from_integer(g.clone());
        Some(Ineq {
            a: a.into_iter().map(|x| x / &g).collect(),
            b,
        })
    }

    /// From a rational normal, scaled positively to a primitive integer one.
    pub fn from_rational(a: &[Rational], b: Rational) -> Option<Self> {
        let (ints, f) = primitive_integer_direction(a);
        if ints.iter().all(Zero::is_zero) {
            return None;
        }
        Some(Ineq { a: ints, b: b * f })
    }

    pub fn from_i64(a: &[i64], b: i64) -> Self {
        Ineq::new(a.iter().map(|&x| Int::from(x)).collect(), Rational::from_integer(b.into()))
            .expect("zero normal")
    }

    /// `a·x − b`.
    pub fn slack(&self, x: &[Rational]) -> Rational {
        dot_mixed(&self.a, x) - &self.b
    }

    pub fn negated(&self) -> Ineq {
        Ineq {
            a: self.a.iter().map(|x| -x).collect(),
            b: -self.b.clone(),
        }
    }

    /// Sign-normalised copy (first nonzero entry positive), for equations.
    fn oriented(self) -> Ineq {
        match self.a.iter().find(|x| !x.is_zero()) {
            Some(x) if x.is_negative() => self.negated(),
            _ => self,
        }
    }
}

impl fmt::Debug for Ineq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a: Vec<String> = self.a.iter().map(ToString::to_string).collect();
        write!(f, "[{}]·x ≥ {}", a.join(","), self.b)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawHPolyhedron {
    dim: usize,
    #[serde(default)]
    ineqs: Vec<Ineq>,
    #[serde(default)]
    eqs: Vec<Ineq>,
}

/// Closed convex polyhedron in H-representation.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawHPolyhedron")]
pub struct HPolyhedron {
    dim: usize,
    ineqs: Vec<Ineq>,
    eqs: Vec<Ineq>,
}

impl TryFrom<RawHPolyhedron> for HPolyhedron {
    type Error = String;
    fn try_from(r: RawHPolyhedron) -> Result<Self, String> {
        for c in r.ineqs.iter().chain(&r.eqs) {
            if c.a.len() != r.dim {
                return Err(format!(
                    "constraint has {} coefficients but dim is {}",
                    c.a.len(),
                    r.dim
                ));
            }
        }
        Ok(HPolyhedron::new(r.dim, r.ineqs, r.eqs))
    }
}

impl fmt::Debug for HPolyhedron {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HPolyhedron")
            .field("dim", &self.dim)
            .field("ineqs", &self.ineqs)
            .field("eqs", &self.eqs)
            .finish()
    }
}

impl HPolyhedron {
    /// Normalises normals to be primitive, drops duplicate and trivially
    /// true rows. A trivially false row makes the result empty.
    pub fn new(dim: usize, ineqs: Vec<Ineq>, eqs: Vec<Ineq>) -> Self {
        let mut seen = BTreeSet::new();
        let mut out_i = Vec::new();
        let mut empty = false;
        for c in ineqs {
            assert_eq!(c.a.len(), dim, "constraint width mismatch");
            match Ineq::new(c.a, c.b.clone()) {
                Some(c) => {
                    if seen.insert(c.clone()) {
                        out_i.push(c);
                    }
                }
                None => empty |= c.b.is_positive(),
            }
        }
        let mut seen = BTreeSet::new();
        let mut out_e = Vec::new();
        for c in eqs {
            assert_eq!(c.a.len(), dim, "constraint width mismatch");
            match Ineq::new(c.a, c.b.clone()) {
                Some(c) => {
                    let c = c.oriented();
                    if seen.insert(c.clone()) {
                        out_e.push(c);
                    }
                }
                None => empty |= !c.b.is_zero(),
            }
        }
        if empty {
            return Self::empty(dim);
        }
        HPolyhedron {
            dim,
            ineqs: out_i,
            eqs: out_e,
        }
    }

    /// All of `R^dim`.
    pub fn whole(dim: usize) -> Self {
        HPolyhedron {
            dim,
            ineqs: Vec::new(),
            eqs: Vec::new(),
        }
    }

    /// A canonical empty polyhedron (`x₀ ≥ 1`, `x₀ ≤ 0`).
    pub fn empty(dim: usize) -> Self {
        assert!(dim > 0, "no empty polyhedron representation in dimension 0");
        let mut e = vec![Int::zero(); dim];
        e[0] = Int::one();
        let up = Ineq {
            a: e.clone(),
            b: Rational::one(),
        };
        HPolyhedron {
            dim,
            ineqs: vec![up.clone(), Ineq { a: e, b: Rational::zero() }.negated()],
            eqs: Vec::new(),
        }
    }

    /// Axis-parallel box `lo ≤ x ≤ hi`.
    pub fn cuboid(lo: &[Rational], hi: &[Rational]) -> Self {
        let n = lo.len();
        let mut ineqs = Vec::new();
        for i in 0..n {
            let mut e = vec![Int::zero(); n];
            e[i] = Int::one();
            ineqs.push(Ineq { a: e.clone(), b: lo[i].clone() });
            ineqs.push(Ineq { a: e, b: hi[i].clone() }.negated());
        }
        HPolyhedron::new(n, ineqs, Vec::new())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ineqs(&self) -> &[Ineq] {
        &self.ineqs
    }

    pub fn eqs(&self) -> &[Ineq] {
        &self.eqs
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        self.ineqs.iter().all(|c| !c.slack(x).is_negative())
            && self.eqs.iter().all(|c| c.slack(x).is_zero())
    }

    /// Indices of inequalities tight at `x`.
    pub fn active_at(&self, x: &[Rational]) -> Vec<usize> {
        (0..self.ineqs.len())
            .filter(|&i| self.ineqs[i].slack(x).is_zero())
            .collect()
    }

    pub fn intersect(&self, other: &HPolyhedron) -> HPolyhedron {
        assert_eq!(self.dim, other.dim);
        let mut ineqs = self.ineqs.clone();
        ineqs.extend(other.ineqs.iter().cloned());
        let mut eqs = self.eqs.clone();
        eqs.extend(other.eqs.iter().cloned());
        HPolyhedron::new(self.dim, ineqs, eqs)
    }

    pub fn with_ineqs(&self, extra: impl IntoIterator<Item = Ineq>) -> HPolyhedron {
        let mut ineqs = self.ineqs.clone();
        ineqs.extend(extra);
        HPolyhedron::new(self.dim, ineqs, self.eqs.clone())
    }

    /// Double description conversion.
    pub fn to_v(&self) -> Result<VPolyhedron, PolyError> {
        dd::h_to_v(self)
    }

    pub fn is_empty(&self) -> bool {
        self.to_v().map(|v| v.is_empty()).unwrap_or(false)
    }

    pub fn is_bounded(&self) -> Result<bool, PolyError> {
        Ok(self.to_v()?.is_bounded())
    }

    /// Dimension of the affine hull; `None` when empty.
    pub fn affine_dim(&self) -> Result<Option<usize>, PolyError> {
        Ok(self.to_v()?.affine_dim())
    }

    /// Irredundant H-representation of the same set (implicit equations
    /// become equations).
    pub fn minimize(&self) -> Result<HPolyhedron, PolyError> {
        self.to_v()?.to_h()
    }

    /// Set equality, decided by mutual containment of generators.
    pub fn same_set(&self, other: &HPolyhedron) -> Result<bool, PolyError> {
        let a = self.to_v()?;
        let b = other.to_v()?;
        Ok(a.is_subset_of(other) && b.is_subset_of(self))
    }

    /// Whether `self ⊂ other`.
    pub fn is_subset_of(&self, other: &HPolyhedron) -> Result<bool, PolyError> {
        Ok(self.to_v()?.is_subset_of(other))
    }

    /// Preimage `{y : m y + offset ∈ self}` under an integral affine map.
    pub fn preimage(&self, m: &IntMatrix, offset: &[Rational]) -> HPolyhedron {
        assert_eq!(m.rows(), self.dim);
        let pull = |c: &Ineq| -> Option<Ineq> {
            let a: Vec<Int> = (0..m.cols())
                .map(|j| (0..m.rows()).map(|i| &c.a[i] * &m[(i, j)]).sum())
                .collect();
            let b = &c.b - dot_mixed(&c.a, offset);
            if a.iter().all(Zero::is_zero) {
                return None;
            }
            Ineq::new(a, b)
        };
        let mut empty = false;
        let mut ineqs = Vec::new();
        for c in &self.ineqs {
            match pull(c) {
                Some(p) => ineqs.push(p),
                None => empty |= (&c.b - dot_mixed(&c.a, offset)).is_positive(),
            }
        }
        let mut eqs = Vec::new();
        for c in &self.eqs {
            match pull(c) {
                Some(p) => eqs.push(p),
                None => empty |= !(&c.b - dot_mixed(&c.a, offset)).is_zero(),
            }
        }
        if empty {
            return HPolyhedron::empty(m.cols());
        }
        HPolyhedron::new(m.cols(), ineqs, eqs)
    }
}

/// Minkowski–Weyl data: `conv(points) + cone(rays) + span(lineality)`.
///
/// `points` holds one point per minimal face, projected onto the orthogonal
/// complement of the lineality space; they are the vertices exactly when the
/// polyhedron is pointed. An empty `points` list means the empty set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VPolyhedron {
    pub dim: usize,
    pub points: Vec<Vec<Rational>>,
    pub rays: Vec<Vec<Int>>,
    pub lineality: LatticeBasis,
}

impl VPolyhedron {
    /// A polytope from a finite point set (the points need not be extreme).
    pub fn from_points(dim: usize, points: Vec<Vec<Rational>>) -> Self {
        VPolyhedron {
            dim,
            points,
            rays: Vec::new(),
            lineality: LatticeBasis::new(IntMatrix::zeros(dim, 0)).expect("empty basis"),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn is_pointed(&self) -> bool {
        self.lineality.rank() == 0
    }

    pub fn is_bounded(&self) -> bool {
        self.rays.is_empty() && self.is_pointed()
    }

    /// True vertices; empty for non-pointed polyhedra.
    pub fn vertices(&self) -> &[Vec<Rational>] {
        if self.is_pointed() {
            &self.points
        } else {
            &[]
        }
    }

    pub fn affine_dim(&self) -> Option<usize> {
        let p0 = self.points.first()?;
        let mut rows: Vec<Vec<Rational>> = self.points[1..]
            .iter()
            .map(|p| p.iter().zip(p0).map(|(a, b)| a - b).collect())
            .collect();
        rows.extend(self.rays.iter().map(|r| to_rational_vec(r)));
        rows.extend(
            self.lineality
                .generators()
                .col_vecs()
                .iter()
                .map(|l| to_rational_vec(l)),
        );
        Some(qmat::rank(&rows))
    }

    pub fn is_subset_of(&self, h: &HPolyhedron) -> bool {
        let dir_ok = |v: &[Int], strict_eq: bool| {
            h.ineqs.iter().all(|c| {
                let s = crate::exactla::dot_int(&c.a, v);
                if strict_eq {
                    s.is_zero()
                } else {
                    !s.is_negative()
                }
            }) && h.eqs.iter().all(|c| crate::exactla::dot_int(&c.a, v).is_zero())
        };
        self.points.iter().all(|p| h.contains(p))
            && self.rays.iter().all(|r| dir_ok(r, false))
            && self
                .lineality
                .generators()
                .col_vecs()
                .iter()
                .all(|l| dir_ok(l, true))
    }

    /// Irredundant H-representation.
    pub fn to_h(&self) -> Result<HPolyhedron, PolyError> {
        dd::v_to_h(self)
    }

    /// Lineality space basis recomputed as the saturated kernel of `normals`.
    pub(crate) fn lineality_from_normals(dim: usize, normals: &[Vec<Int>]) -> LatticeBasis {
        if normals.is_empty() {
            return LatticeBasis::standard(dim);
        }
        kernel_basis(&IntMatrix::from_rows(dim, normals))
    }
}
