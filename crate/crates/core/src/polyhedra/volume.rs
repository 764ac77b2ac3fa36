use std::collections::HashMap;

use num_traits::{One, Signed, Zero};

use super::{face_lattice, Face, HPolyhedron, PolyError};
use crate::exactla::{qmat, Int, Rational};

/// `|det(v₁ − v₀, …, v_d − v₀)| / d!` for `d + 1` points in `R^d`.
pub fn simplex_volume(vs: &[Vec<Rational>]) -> Rational {
    let d = vs.len() - 1;
    let m: qmat::QMatrix = vs[1..]
        .iter()
        .map(|v| v.iter().zip(&vs[0]).map(|(a, b)| a - b).collect())
        .collect();
    let fact = (1..=d).fold(Int::one(), |a, k| a * Int::from(k));
    qmat::det(&m).abs() / Rational::from_integer(fact)
}

fn cone_triangulation(
    faces: &[Face],
    idx: usize,
    memo: &mut HashMap<usize, Vec<Vec<usize>>>,
) -> Vec<Vec<usize>> {
    if let Some(t) = memo.get(&idx) {
        return t.clone();
    }
    let f = &faces[idx];
    let out = if f.dim == 0 {
        vec![vec![f.vertex_ids[0]]]
    } else {
        let v0 = f.vertex_ids[0];
        let mut out = Vec::new();
        for (gi, g) in faces.iter().enumerate() {
            if g.dim + 1 != f.dim || g.vertex_ids.binary_search(&v0).is_ok() || !f.contains_face(g) {
                continue;
            }
            for s in cone_triangulation(faces, gi, memo) {
                let mut t = Vec::with_capacity(s.len() + 1);
                t.push(v0);
                t.extend(s);
                out.push(t);
            }
        }
        out
    };
    memo.insert(idx, out.clone());
    out
}

/// Triangulation of a polytope into simplices of its own dimension, by
/// coning from the first vertex of each face.
pub fn triangulate(p: &HPolyhedron) -> Result<Vec<Vec<Vec<Rational>>>, PolyError> {
    let (v, faces) = face_lattice(p)?;
    if !v.is_bounded() {
        return Err(PolyError::Unbounded);
    }
    let Some(top) = faces.iter().position(|f| f.dim == faces.last().map_or(0, |l| l.dim)) else {
        return Ok(Vec::new());
    };
    let mut memo = HashMap::new();
    Ok(cone_triangulation(&faces, top, &mut memo)
        .into_iter()
        .map(|s| s.into_iter().map(|i| v.points[i].clone()).collect())
        .collect())
}

/// Lebesgue volume in `R^dim` (zero for lower-dimensional sets).
pub fn volume(p: &HPolyhedron) -> Result<Rational, PolyError> {
    let v = p.to_v()?;
    if !v.is_bounded() {
        return Err(PolyError::Unbounded);
    }
    if v.affine_dim() != Some(p.dim()) {
        return Ok(Rational::zero());
    }
    Ok(triangulate(p)?
        .iter()
        .map(|s| simplex_volume(s))
        .fold(Rational::zero(), |a, b| a + b))
}
