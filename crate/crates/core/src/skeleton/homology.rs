use std::collections::BTreeMap;

use serde::Serialize;

use super::{SkeletonComplex, SkeletonError, UnionFind};
use crate::exactla::{qmat, Rational};
use crate::polyhedra::{face_lattice, Face};

/// Betti numbers `b0`, `b1` over `Q` and `b2` over `GF(2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Betti {
    pub b0: usize,
    pub b1: usize,
    pub b2_mod2: usize,
}

struct Atom {
    cell: usize,
    face: Face,
    /// Sorted images of the face's vertices.
    key: Vec<Vec<Rational>>,
}

fn rank_gf2(rows: &[Vec<bool>]) -> usize {
    let mut m: Vec<Vec<bool>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| m[i][c]) else {
            continue;
        };
        m.swap(r, p);
        for i in 0..m.len() {
            if i != r && m[i][c] {
                let pivot = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(&pivot) {
                    *x ^= *y;
                }
            }
        }
        r += 1;
    }
    r
}

/// Cellular homology of the complex whose cells are the faces of all
/// carriers, modulo the identifications given by the incidences.
pub fn betti(s: &SkeletonComplex) -> Result<Betti, SkeletonError> {
    let mut atoms: Vec<Atom> = Vec::new();
    let mut first_atom = Vec::with_capacity(s.cells.len());
    for (ci, c) in s.cells.iter().enumerate() {
        let (v, faces) = face_lattice(&c.carrier)?;
        if let Some(f) = faces.iter().find(|f| f.dim > 2) {
            return Err(SkeletonError::DimensionTooLarge(f.dim));
        }
        let imgs: Vec<Vec<Rational>> = v.points.iter().map(|p| c.apply_pi(p)).collect();
        first_atom.push(atoms.len());
        for face in faces {
            let mut key: Vec<Vec<Rational>> = face.vertex_ids.iter().map(|&i| imgs[i].clone()).collect();
            key.sort();
            atoms.push(Atom { cell: ci, face, key });
        }
    }
    let mut uf = UnionFind::new(atoms.len());
    for inc in &s.incidences {
        let src: Vec<usize> = (0..atoms.len())
            .filter(|&a| atoms[a].cell == inc.cell && inc.face.iter().all(|f| atoms[a].face.active_inequalities.contains(f)))
            .collect();
        for &a in &src {
            for b in (0..atoms.len()).filter(|&b| atoms[b].cell == inc.target) {
                if atoms[a].key == atoms[b].key {
                    uf.union(a, b);
                }
            }
        }
    }
    // classes by dimension, indexed densely
    let mut class_of = vec![0usize; atoms.len()];
    let mut index: [BTreeMap<usize, usize>; 3] = Default::default();
    for a in 0..atoms.len() {
        let r = uf.find(a);
        let d = atoms[a].face.dim;
        let next = index[d].len();
        class_of[a] = *index[d].entry(r).or_insert(next);
    }
    let (nv, ne, nf) = (index[0].len(), index[1].len(), index[2].len());

    // edge orientations: low vertex class to high vertex class
    let sub = |a: usize, d: usize| -> Vec<usize> {
        let atom = &atoms[a];
        let start = first_atom[atom.cell];
        (start..atoms.len())
            .take_while(|&b| atoms[b].cell == atom.cell)
            .filter(|&b| atoms[b].face.dim == d && atom.face.contains_face(&atoms[b].face))
            .collect()
    };
    let mut edge_ends: Vec<Option<(usize, usize)>> = vec![None; ne];
    let mut d1: Vec<Vec<Rational>> = vec![vec![Rational::from_integer(0.into()); ne]; nv];
    for a in (0..atoms.len()).filter(|&a| atoms[a].face.dim == 1) {
        let e = class_of[a];
        if edge_ends[e].is_some() {
            continue;
        }
        let vs: Vec<usize> = sub(a, 0).iter().map(|&b| class_of[b]).collect();
        let (lo, hi) = (vs[0].min(vs[1]), vs[0].max(vs[1]));
        edge_ends[e] = Some((lo, hi));
        if lo != hi {
            d1[lo][e] -= Rational::from_integer(1.into());
            d1[hi][e] += Rational::from_integer(1.into());
        }
    }
    let mut d2: Vec<Vec<Rational>> = vec![vec![Rational::from_integer(0.into()); nf]; ne];
    let mut d2_mod2: Vec<Vec<bool>> = vec![vec![false; nf]; ne];
    let mut done = vec![false; nf];
    for a in (0..atoms.len()).filter(|&a| atoms[a].face.dim == 2) {
        let f = class_of[a];
        if done[f] {
            continue;
        }
        done[f] = true;
        // walk the polygon boundary within the carrier
        let edges: Vec<(usize, [usize; 2])> = sub(a, 1)
            .into_iter()
            .map(|b| {
                let vs = sub(b, 0);
                (b, [vs[0], vs[1]])
            })
            .collect();
        let mut used = vec![false; edges.len()];
        let mut at = edges[0].1[0];
        for _ in 0..edges.len() {
            let Some(k) = (0..edges.len()).find(|&k| !used[k] && edges[k].1.contains(&at)) else {
                break;
            };
            used[k] = true;
            let (b, [u, v]) = edges[k];
            let next = if u == at { v } else { u };
            let e = class_of[b];
            let (lo, _) = edge_ends[e].expect("edge oriented");
            let sign = if class_of[at] == lo { 1 } else { -1 };
            d2[e][f] += Rational::from_integer(sign.into());
            d2_mod2[e][f] ^= true;
            at = next;
        }
    }
    let r1 = qmat::rank(&d1);
    let r2 = qmat::rank(&d2);
    let r2_mod2 = rank_gf2(&d2_mod2);
    Ok(Betti {
        b0: nv - r1,
        b1: ne - r1 - r2,
        b2_mod2: nf - r2_mod2,
    })
}
