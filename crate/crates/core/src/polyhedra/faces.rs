use std::collections::{BTreeSet, VecDeque};

use num_traits::Zero;

use super::{HPolyhedron, PolyError, VPolyhedron};
use crate::exactla::{dot_int, qmat, to_rational_vec, Rational};

/// A nonempty face, described by the generators of the V-representation
/// it contains.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    /// Indices into the polyhedron's inequalities that are tight on the face.
    pub active_inequalities: Vec<usize>,
    pub dim: usize,
    pub relint_point: Vec<Rational>,
    /// Indices into `VPolyhedron::points`.
    pub vertex_ids: Vec<usize>,
    /// Indices into `VPolyhedron::rays`.
    pub ray_ids: Vec<usize>,
}

impl Face {
    pub fn contains_face(&self, other: &Face) -> bool {
        other.vertex_ids.iter().all(|v| self.vertex_ids.binary_search(v).is_ok())
            && other.ray_ids.iter().all(|r| self.ray_ids.binary_search(r).is_ok())
    }
}

/// All nonempty faces, sorted by dimension, together with the V-representation
/// their indices refer to.
pub fn face_lattice(p: &HPolyhedron) -> Result<(VPolyhedron, Vec<Face>), PolyError> {
    let v = p.to_v()?;
    if v.is_empty() {
        return Ok((v, Vec::new()));
    }
    let ineqs = p.ineqs();
    let inc_pts: Vec<BTreeSet<usize>> = ineqs
        .iter()
        .map(|c| (0..v.points.len()).filter(|&i| c.slack(&v.points[i]).is_zero()).collect())
        .collect();
    let inc_rays: Vec<BTreeSet<usize>> = ineqs
        .iter()
        .map(|c| (0..v.rays.len()).filter(|&i| dot_int(&c.a, &v.rays[i]).is_zero()).collect())
        .collect();

    let make = |pts: BTreeSet<usize>, rays: BTreeSet<usize>| -> Face {
        let active: Vec<usize> = (0..ineqs.len())
            .filter(|&i| pts.is_subset(&inc_pts[i]) && rays.is_subset(&inc_rays[i]))
            .collect();
        let p0 = &v.points[*pts.iter().next().expect("face has a point")];
        let mut rows: Vec<Vec<Rational>> = pts
            .iter()
            .skip(1)
            .map(|&i| v.points[i].iter().zip(p0).map(|(a, b)| a - b).collect())
            .collect();
        rows.extend(rays.iter().map(|&r| to_rational_vec(&v.rays[r])));
        rows.extend(v.lineality.generators().col_vecs().iter().map(|l| to_rational_vec(l)));
        let dim = qmat::rank(&rows);
        let k = Rational::from_integer((pts.len() as i64).into());
        let mut relint = vec![Rational::zero(); v.dim];
        for &i in &pts {
            for (x, y) in relint.iter_mut().zip(&v.points[i]) {
                *x += y / &k;
            }
        }
        for &r in &rays {
            for (x, y) in relint.iter_mut().zip(&v.rays[r]) {
                *x += Rational::from_integer(y.clone());
            }
        }
        Face {
            active_inequalities: active,
            dim,
            relint_point: relint,
            vertex_ids: pts.into_iter().collect(),
            ray_ids: rays.into_iter().collect(),
        }
    };

    let all_pts: BTreeSet<usize> = (0..v.points.len()).collect();
    let all_rays: BTreeSet<usize> = (0..v.rays.len()).collect();
    let mut seen = BTreeSet::new();
    seen.insert((all_pts.clone(), all_rays.clone()));
    let mut faces = vec![make(all_pts, all_rays)];
    let mut queue = VecDeque::from([0usize]);
    while let Some(fi) = queue.pop_front() {
        let f = faces[fi].clone();
        let fp: BTreeSet<usize> = f.vertex_ids.iter().copied().collect();
        let fr: BTreeSet<usize> = f.ray_ids.iter().copied().collect();
        for i in 0..ineqs.len() {
            if f.active_inequalities.binary_search(&i).is_ok() {
                continue;
            }
            let gp: BTreeSet<usize> = fp.intersection(&inc_pts[i]).copied().collect();
            if gp.is_empty() {
                continue;
            }
            let gr: BTreeSet<usize> = fr.intersection(&inc_rays[i]).copied().collect();
            if seen.insert((gp.clone(), gr.clone())) {
                faces.push(make(gp, gr));
                queue.push_back(faces.len() - 1);
            }
        }
    }
    faces.sort_by(|a, b| {
        (a.dim, &a.vertex_ids, &a.ray_ids).cmp(&(b.dim, &b.vertex_ids, &b.ray_ids))
    });
    Ok((v, faces))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::rat_vec;
    use crate::polyhedra::Ineq;

    fn count_by_dim(faces: &[Face]) -> Vec<usize> {
        let top = faces.iter().map(|f| f.dim).max().unwrap_or(0);
        (0..=top).map(|d| faces.iter().filter(|f| f.dim == d).count()).collect()
    }

    #[test]
    fn square_and_segment() {
        let sq = HPolyhedron::cuboid(&rat_vec(&[0, 0]), &rat_vec(&[1, 1]));
        let (_, faces) = face_lattice(&sq).unwrap();
        assert_eq!(count_by_dim(&faces), vec![4, 4, 1]);
        let seg = HPolyhedron::cuboid(&rat_vec(&[0]), &rat_vec(&[1]));
        assert_eq!(face_lattice(&seg).unwrap().1.len(), 3);
    }

    #[test]
    fn relint_points_are_strict() {
        let sq = HPolyhedron::cuboid(&rat_vec(&[0, 0]), &rat_vec(&[2, 3]));
        let (_, faces) = face_lattice(&sq).unwrap();
        for f in &faces {
            for (i, c) in sq.ineqs().iter().enumerate() {
                let s = c.slack(&f.relint_point);
                if f.active_inequalities.contains(&i) {
                    assert!(s.is_zero());
                } else {
                    assert!(s > Rational::zero());
                }
            }
        }
    }

    #[test]
    fn six_d_euler() {
        let rows = [
            ([1, 0, 0], -3),
            ([-1, 0, 0], -3),
            ([0, 1, 0], -2),
            ([0, -1, 0], -2),
            ([0, 0, 1], 1),
            ([0, 0, -1], -4),
            ([-1, 0, 1], 0),
            ([1, 0, 1], 0),
            ([0, -1, 1], 0),
            ([0, 1, 1], 0),
        ];
        let p = HPolyhedron::new(3, rows.iter().map(|(a, b)| Ineq::from_i64(a, *b)).collect(), vec![]);
        let (_, faces) = face_lattice(&p).unwrap();
        let c = count_by_dim(&faces);
        assert_eq!(c[0] as i64 - c[1] as i64 + c[2] as i64, 2);
        assert_eq!(c, vec![16, 24, 10, 1]);
    }

    #[test]
    fn quadrant_with_rays() {
        let q = HPolyhedron::new(2, vec![Ineq::from_i64(&[1, 0], 0), Ineq::from_i64(&[0, 1], 0)], vec![]);
        let (_, faces) = face_lattice(&q).unwrap();
        assert_eq!(count_by_dim(&faces), vec![1, 2, 1]);
    }
}
