//! Continuous piecewise affine functions on polyhedral complexes.
//!
//! Cells are closed; on shared faces adjacent cells agree, so evaluation may
//! use any cell containing the point.

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactla::{dot, dot_mixed, to_rational_vec, Int, LatticeBasis, Rational};
use crate::polyhedra::{triangulate, HPolyhedron, PolyError, VPolyhedron};
use crate::serde_util;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PwError {
    #[error("point is outside the domain")]
    OutsideDomain,
    #[error("domains do not overlap in a set of full dimension")]
    EmptyIntersection,
    #[error("function is not affine on any neighbourhood of the point")]
    NotAffineNearPoint,
    #[error("slope does not pair integrally with the lattice")]
    SlopeNotIntegral,
    #[error("domains differ")]
    DomainMismatch,
    #[error("domain is unbounded")]
    Unbounded,
    #[error("cells {0} and {1} disagree on their common face")]
    Discontinuous(usize, usize),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// `x ↦ slope·x + constant` on `carrier`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AffineCell {
    pub carrier: HPolyhedron,
    #[serde(with = "serde_util::rational_vec")]
    pub slope: Vec<Rational>,
    #[serde(rename = "const", with = "serde_util::rational")]
    pub constant: Rational,
}

impl AffineCell {
    pub fn value(&self, x: &[Rational]) -> Rational {
        dot(&self.slope, x) + &self.constant
    }

    fn same_affine(&self, o: &AffineCell) -> bool {
        self.slope == o.slope && self.constant == o.constant
    }
}

/// Integral affine germ `x ↦ ⟨x, A⟩ + B`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AffineGerm {
    #[serde(with = "serde_util::rational_vec")]
    pub slope: Vec<Rational>,
    /// Values of the slope on the lattice generators.
    #[serde(with = "serde_util::int_vec")]
    pub lattice_values: Vec<Int>,
    #[serde(rename = "const", with = "serde_util::rational")]
    pub constant: Rational,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPwFn {
    dim: usize,
    cells: Vec<AffineCell>,
    #[serde(default)]
    domain: Option<HPolyhedron>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawPwFn")]
pub struct PiecewiseAffineFn {
    dim: usize,
    cells: Vec<AffineCell>,
    domain: HPolyhedron,
}

impl TryFrom<RawPwFn> for PiecewiseAffineFn {
    type Error = String;
    fn try_from(r: RawPwFn) -> Result<Self, String> {
        for c in &r.cells {
            if c.carrier.dim() != r.dim || c.slope.len() != r.dim {
                return Err(format!("cell does not live in dimension {}", r.dim));
            }
        }
        match r.domain {
            Some(d) if d.dim() == r.dim => Ok(PiecewiseAffineFn::new(r.dim, r.cells, d)),
            Some(_) => Err("domain dimension mismatch".into()),
            None => PiecewiseAffineFn::from_cells(r.dim, r.cells).map_err(|e| e.to_string()),
        }
    }
}

impl PiecewiseAffineFn {
    pub fn new(dim: usize, cells: Vec<AffineCell>, domain: HPolyhedron) -> Self {
        PiecewiseAffineFn { dim, cells, domain }
    }

    /// Takes the domain to be the convex hull of the carriers.
    pub fn from_cells(dim: usize, cells: Vec<AffineCell>) -> Result<Self, PwError> {
        let mut points = Vec::new();
        let mut rays = Vec::new();
        for c in &cells {
            let v = c.carrier.to_v()?;
            points.extend(v.points.iter().cloned());
            rays.extend(v.rays.iter().cloned());
            for l in v.lineality.generators().col_vecs() {
                rays.push(l.iter().map(|x| -x).collect());
                rays.push(l);
            }
        }
        let hull = VPolyhedron {
            dim,
            points,
            rays,
            lineality: LatticeBasis::new(crate::exactla::IntMatrix::zeros(dim, 0)).expect("empty"),
        };
        let domain = if hull.is_empty() {
            HPolyhedron::empty(dim)
        } else {
            hull.to_h()?
        };
        Ok(PiecewiseAffineFn { dim, cells, domain })
    }

    pub fn affine(domain: HPolyhedron, slope: Vec<Rational>, constant: Rational) -> Self {
        let dim = domain.dim();
        PiecewiseAffineFn {
            dim,
            cells: vec![AffineCell {
                carrier: domain.clone(),
                slope,
                constant,
            }],
            domain,
        }
    }

    pub fn constant(domain: HPolyhedron, c: Rational) -> Self {
        let n = domain.dim();
        Self::affine(domain, vec![Rational::zero(); n], c)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cells(&self) -> &[AffineCell] {
        &self.cells
    }

    pub fn domain(&self) -> &HPolyhedron {
        &self.domain
    }

    pub fn eval(&self, x: &[Rational]) -> Result<Rational, PwError> {
        if x.len() != self.dim || !self.domain.contains(x) {
            return Err(PwError::OutsideDomain);
        }
        self.cells
            .iter()
            .find(|c| c.carrier.contains(x))
            .map(|c| c.value(x))
            .ok_or(PwError::OutsideDomain)
    }

    /// The cells whose carriers contain `x`.
    pub fn restrict_near(&self, x: &[Rational]) -> Result<Self, PwError> {
        if !self.domain.contains(x) {
            return Err(PwError::OutsideDomain);
        }
        let cells: Vec<AffineCell> = self
            .cells
            .iter()
            .filter(|c| c.carrier.contains(x))
            .cloned()
            .collect();
        if cells.is_empty() {
            return Err(PwError::OutsideDomain);
        }
        Ok(PiecewiseAffineFn {
            dim: self.dim,
            cells,
            domain: self.domain.clone(),
        })
    }

    /// Every pair of cells agrees on the intersection of their carriers.
    pub fn check_continuity(&self) -> Result<(), PwError> {
        for i in 0..self.cells.len() {
            for j in i + 1..self.cells.len() {
                let (a, b) = (&self.cells[i], &self.cells[j]);
                let v = a.carrier.intersect(&b.carrier).to_v()?;
                let ds: Vec<Rational> = a.slope.iter().zip(&b.slope).map(|(x, y)| x - y).collect();
                let ok = v.points.iter().all(|p| a.value(p) == b.value(p))
                    && v.rays.iter().all(|r| dot(&ds, &to_rational_vec(r)).is_zero())
                    && v.lineality
                        .generators()
                        .col_vecs()
                        .iter()
                        .all(|l| dot(&ds, &to_rational_vec(l)).is_zero());
                if !ok {
                    return Err(PwError::Discontinuous(i, j));
                }
            }
        }
        Ok(())
    }

    /// Restriction to `d ∩ domain`.
    pub fn restrict_to(&self, d: &HPolyhedron) -> Result<Self, PwError> {
        let one = Rational::from_integer(1.into());
        combine(self, &Self::constant(d.clone(), Rational::zero()), &one, &Rational::zero())
    }

    fn scaled(&self, c: &Rational) -> Vec<AffineCell> {
        self.cells
            .iter()
            .map(|cell| AffineCell {
                carrier: cell.carrier.clone(),
                slope: cell.slope.iter().map(|s| s * c).collect(),
                constant: &cell.constant * c,
            })
            .collect()
    }
}

/// `cf·f + cg·g` on the common refinement, restricted to the intersection of
/// the domains. Intersections of lower dimension are discarded.
pub fn combine(
    f: &PiecewiseAffineFn,
    g: &PiecewiseAffineFn,
    cf: &Rational,
    cg: &Rational,
) -> Result<PiecewiseAffineFn, PwError> {
    if f.dim != g.dim {
        return Err(PwError::Poly(PolyError::DimensionMismatch {
            expected: f.dim,
            got: g.dim,
        }));
    }
    let domain = f.domain.intersect(&g.domain);
    let Some(target) = domain.affine_dim()? else {
        return Err(PwError::EmptyIntersection);
    };
    let fs = f.scaled(cf);
    let gs = g.scaled(cg);
    let mut cells = Vec::new();
    for a in &fs {
        for b in &gs {
            let inter = a.carrier.intersect(&b.carrier).intersect(&domain);
            let v = inter.to_v()?;
            if v.affine_dim() != Some(target) {
                continue;
            }
            cells.push(AffineCell {
                carrier: v.to_h()?,
                slope: a.slope.iter().zip(&b.slope).map(|(x, y)| x + y).collect(),
                constant: &a.constant + &b.constant,
            });
        }
    }
    if cells.is_empty() {
        return Err(PwError::EmptyIntersection);
    }
    Ok(PiecewiseAffineFn {
        dim: f.dim,
        cells,
        domain,
    })
}

/// Sum of several functions on the intersection of their domains.
pub fn sum(fs: &[PiecewiseAffineFn]) -> Result<PiecewiseAffineFn, PwError> {
    let one = Rational::from_integer(1.into());
    let mut it = fs.iter();
    let first = it.next().expect("at least one summand").clone();
    it.try_fold(first, |acc, f| combine(&acc, f, &one, &one))
}

/// The germ of `f` at `alpha` if it is integral affine on a neighbourhood of
/// `alpha` in the domain.
pub fn is_integral_affine_near(
    f: &PiecewiseAffineFn,
    alpha: &[Rational],
    lattice: &LatticeBasis,
) -> Result<AffineGerm, PwError> {
    let near = f.restrict_near(alpha)?;
    let first = &near.cells[0];
    if near.cells.iter().any(|c| !c.same_affine(first)) {
        return Err(PwError::NotAffineNearPoint);
    }
    let mut values = Vec::new();
    for g in lattice.generators().col_vecs() {
        let v = dot_mixed(&g, &first.slope);
        if !v.is_integer() {
            return Err(PwError::SlopeNotIntegral);
        }
        values.push(v.to_integer());
    }
    Ok(AffineGerm {
        slope: first.slope.clone(),
        lattice_values: values,
        constant: first.constant.clone(),
    })
}

/// Equality on every full-dimensional piece of the common refinement.
pub fn ae_equal(f: &PiecewiseAffineFn, g: &PiecewiseAffineFn) -> Result<bool, PwError> {
    if f.dim != g.dim || !f.domain.same_set(&g.domain)? {
        return Err(PwError::DomainMismatch);
    }
    let one = Rational::from_integer(1.into());
    let d = match combine(f, g, &one, &-one.clone()) {
        Ok(d) => d,
        Err(PwError::EmptyIntersection) => return Ok(true),
        Err(e) => return Err(e),
    };
    Ok(d.cells
        .iter()
        .all(|c| c.constant.is_zero() && c.slope.iter().all(Zero::is_zero)))
}

/// Exact integral over the domain.
pub fn integrate(f: &PiecewiseAffineFn) -> Result<Rational, PwError> {
    let mut total = Rational::zero();
    for c in &f.cells {
        if c.carrier.affine_dim()? != Some(f.dim) {
            continue;
        }
        let simplices = match triangulate(&c.carrier) {
            Ok(s) => s,
            Err(PolyError::Unbounded) => return Err(PwError::Unbounded),
            Err(e) => return Err(e.into()),
        };
        for s in simplices {
            let vol = crate::polyhedra::simplex_volume(&s);
            let k = Rational::from_integer((s.len() as i64).into());
            let avg = s.iter().map(|p| c.value(p)).fold(Rational::zero(), |a, b| a + b) / k;
            total += vol * avg;
        }
    }
    Ok(total)
}
