use num_traits::{Signed, Zero};
use serde::Serialize;

use super::{HPolyhedron, Ineq, PolyError};
use crate::exactla::{
    complete_to_basis, kernel_basis, primitive_part, qmat, unimodular_inverse, Int, IntMatrix,
    LatticeBasis, Rational,
};
use crate::serde_util;

/// Germ of `p` at `x`: the cone cut out by the inequalities tight at `x`.
pub fn tangent_cone(p: &HPolyhedron, x: &[Rational]) -> Result<HPolyhedron, PolyError> {
    if x.len() != p.dim() {
        return Err(PolyError::DimensionMismatch {
            expected: p.dim(),
            got: x.len(),
        });
    }
    if !p.contains(x) {
        return Err(PolyError::PointNotInPolyhedron);
    }
    let active = p.active_at(x).into_iter().map(|i| p.ineqs()[i].clone()).collect();
    Ok(HPolyhedron::new(p.dim(), active, p.eqs().to_vec()))
}

/// The affine subspace on which every constraint is tight, as the system
/// rows `(a, b)`.
fn apex_system(c: &HPolyhedron) -> (qmat::QMatrix, Vec<Rational>) {
    let rows = c.ineqs().iter().chain(c.eqs());
    let m = rows.clone().map(|r| crate::exactla::to_rational_vec(&r.a)).collect();
    let b = rows.map(|r| r.b.clone()).collect();
    (m, b)
}

fn minimized_cone(c: &HPolyhedron) -> Result<HPolyhedron, PolyError> {
    let m = c.minimize()?;
    if m.is_empty() {
        return Err(PolyError::NotACone);
    }
    let (a, b) = apex_system(&m);
    if qmat::solve_cols(&a, m.dim(), &b).is_none() {
        return Err(PolyError::NotACone);
    }
    Ok(m)
}

/// Set equality of two affine cones that share an apex.
pub fn cone_equal(c1: &HPolyhedron, c2: &HPolyhedron) -> Result<bool, PolyError> {
    if c1.dim() != c2.dim() {
        return Err(PolyError::DimensionMismatch {
            expected: c1.dim(),
            got: c2.dim(),
        });
    }
    let m1 = minimized_cone(c1)?;
    let m2 = minimized_cone(c2)?;
    let (mut a, mut b) = apex_system(&m1);
    let (a2, b2) = apex_system(&m2);
    a.extend(a2);
    b.extend(b2);
    if qmat::solve_cols(&a, c1.dim(), &b).is_none() {
        return Err(PolyError::ApexMismatch);
    }
    Ok(m1.is_subset_of(&m2)? && m2.is_subset_of(&m1)?)
}

/// Whether `c` is `apex + A(R₊^k × R^{n−k})` for a matrix `A` whose columns
/// form a basis of `lattice`.
pub fn is_delzant_cone(
    c: &HPolyhedron,
    apex: &[Rational],
    lattice: &LatticeBasis,
) -> Result<bool, PolyError> {
    let n = c.dim();
    if apex.len() != n {
        return Err(PolyError::DimensionMismatch { expected: n, got: apex.len() });
    }
    if lattice.ambient_rank() != n || lattice.rank() != n {
        return Err(PolyError::DimensionMismatch {
            expected: n,
            got: lattice.rank(),
        });
    }
    let m = c.minimize()?;
    if m.is_empty() {
        return Err(PolyError::NotACone);
    }
    if m.ineqs().iter().chain(m.eqs()).any(|r| !r.slack(apex).is_zero()) {
        return Err(PolyError::NotACone);
    }
    if !m.eqs().is_empty() {
        return Ok(false);
    }
    // normals in lattice coordinates: x = B y
    let b = lattice.generators();
    let normals: Vec<Vec<Int>> = m
        .ineqs()
        .iter()
        .map(|r| primitive_part(&IntMatrix::from_rows(n, std::slice::from_ref(&r.a)).mul(b).row(0)))
        .collect();
    let cone = HPolyhedron::new(
        n,
        normals.iter().map(|a| Ineq::new(a.clone(), Rational::zero()).expect("nonzero")).collect(),
        Vec::new(),
    );
    let v = cone.to_v()?;
    if v.affine_dim() != Some(n) {
        return Ok(false);
    }
    let lin = if normals.is_empty() {
        LatticeBasis::standard(n)
    } else {
        kernel_basis(&IntMatrix::from_rows(n, &normals))
    };
    let k = lin.rank();
    if v.rays.len() != n - k {
        return Ok(false);
    }
    if k == n {
        return Ok(true);
    }
    let full = complete_to_basis(lin.generators()).expect("kernel lattice is saturated");
    let inv = unimodular_inverse(&full);
    let quotient: Vec<Vec<Int>> = v
        .rays
        .iter()
        .map(|r| primitive_part(&inv.mul_vec(r)[k..]))
        .collect();
    let q = IntMatrix::from_cols(n - k, &quotient);
    Ok(q.det().abs() == Int::from(1))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexConeReport {
    #[serde(with = "serde_util::rational_vec")]
    pub vertex: Vec<Rational>,
    pub delzant: bool,
    /// Primitive edge directions leaving the vertex.
    #[serde(with = "serde_util::int_vecs")]
    pub edges: Vec<Vec<Int>>,
}

/// Per-vertex Delzant diagnostics of a polytope.
pub fn delzant_vertex_report(
    p: &HPolyhedron,
    lattice: &LatticeBasis,
) -> Result<Vec<VertexConeReport>, PolyError> {
    let v = p.to_v()?;
    if !v.is_bounded() {
        return Err(PolyError::Unbounded);
    }
    let mut out = Vec::new();
    for x in &v.points {
        let tc = tangent_cone(p, x)?;
        let delzant = is_delzant_cone(&tc, x, lattice)?;
        let shifted = HPolyhedron::new(
            p.dim(),
            tc.ineqs()
                .iter()
                .map(|r| Ineq { a: r.a.clone(), b: Rational::zero() })
                .collect(),
            tc.eqs()
                .iter()
                .map(|r| Ineq { a: r.a.clone(), b: Rational::zero() })
                .collect(),
        );
        let edges = shifted.to_v()?.rays;
        out.push(VertexConeReport {
            vertex: x.clone(),
            delzant,
            edges,
        });
    }
    Ok(out)
}

/// Every vertex cone is Delzant. Empty polytopes are not Delzant.
pub fn is_delzant_polytope(p: &HPolyhedron, lattice: &LatticeBasis) -> Result<bool, PolyError> {
    let r = delzant_vertex_report(p, lattice)?;
    Ok(!r.is_empty() && r.iter().all(|v| v.delzant))
}
