//! Complexity-one spaces obtained from a toric manifold by forgetting the
//! last coordinate circle.
//!
//! `T` is the subtorus of the first `n − 1` circles, so the moment map is the
//! toric one followed by `(x₁, …, x_n) ↦ (x₁, …, x_{n−1})`.

mod random;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactla::{
    equation_sublattice, extends_to_lattice_basis, kernel_basis, primitive_integer_direction, qmat, snf, Int,
    IntMatrix, LatticeBasis, Rational,
};
use crate::model::{ComplexityOneModel, ModelError, ModelLabel};
use crate::polyhedra::{face_lattice, is_delzant_polytope, project_drop_last, Face, HPolyhedron, PolyError, VPolyhedron};
use crate::pwaffine::PiecewiseAffineFn;
use crate::skeleton::{Incidence, SkeletonCell, SkeletonComplex};

pub use random::random_delzant_polytope;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProjectionError {
    #[error("polytope is not Delzant")]
    NotDelzant,
    #[error("polytope is not full-dimensional and bounded")]
    NotFullDimensional,
    #[error("the projection is not tall")]
    NotTall(Box<ComplexityOneBundle>),
    #[error("stabilizer of face {face:?} meets T in {components} components")]
    DisconnectedStabilizer { face: Vec<usize>, components: Int },
    #[error("only the standard lattice is supported")]
    UnsupportedLattice,
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Classification data of the projected space.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexityOneBundle {
    pub delta: HPolyhedron,
    pub tall: bool,
    pub skeleton: SkeletonComplex,
    pub rho: PiecewiseAffineFn,
    pub genus: usize,
}

fn to_int_rows(vs: Vec<Vec<Rational>>) -> Vec<Vec<Int>> {
    vs.iter().map(|v| primitive_integer_direction(v).0).collect()
}

/// Integer basis of `Z^n ∩ TF`, as columns.
fn tangent_lattice(p: &HPolyhedron, f: &Face) -> IntMatrix {
    let n = p.dim();
    let rows: Vec<Vec<Int>> = f.active_inequalities.iter().map(|&i| p.ineqs()[i].a.clone()).collect();
    kernel_basis(&IntMatrix::from_rows(n, &rows)).generators().clone()
}

/// `Z^n ∩ TF^⊥`, as columns.
fn annihilator_lattice(p: &HPolyhedron, f: &Face) -> IntMatrix {
    let n = p.dim();
    let normals = f.active_inequalities.iter().map(|&i| crate::exactla::to_rational_vec(&p.ineqs()[i].a)).collect();
    let tf = to_int_rows(qmat::nullspace(&normals, n));
    kernel_basis(&IntMatrix::from_rows(n, &tf)).generators().clone()
}

/// The active normals at `f` are independent, as many as its codimension,
/// and part of a basis of `Z^n`.
fn locally_delzant(p: &HPolyhedron, f: &Face) -> bool {
    let n = p.dim();
    let cols: Vec<Vec<Int>> = f.active_inequalities.iter().map(|&i| p.ineqs()[i].a.clone()).collect();
    if cols.len() + f.dim != n {
        return false;
    }
    let m = IntMatrix::from_cols(n, &cols);
    m.rank() == cols.len() && extends_to_lattice_basis(&m, &LatticeBasis::standard(n)).unwrap_or(false)
}

fn check_lattice(n: usize, lattice: &LatticeBasis) -> Result<(), ProjectionError> {
    if lattice.ambient_rank() != n || lattice.rank() != n || !lattice.generators().is_unimodular() {
        return Err(ProjectionError::UnsupportedLattice);
    }
    Ok(())
}

/// `π(Z^n ∩ TF) ≠ Z^{n−1}`.
pub fn is_exceptional_face(p: &HPolyhedron, f: &Face) -> bool {
    let n = p.dim();
    let tf = tangent_lattice(p, f);
    let rows: Vec<usize> = (0..n - 1).collect();
    let s = snf(&tf.select_rows(&rows));
    !(s.rank() == n - 1 && s.invariant_factors().iter().all(One::is_one))
}

/// Local model at the orbits over the relative interior of `f`.
pub fn face_model(p: &HPolyhedron, f: &Face, lattice: &LatticeBasis) -> Result<ComplexityOneModel, ProjectionError> {
    let n = p.dim();
    check_lattice(n, lattice)?;
    if n == 0 {
        return Err(ProjectionError::NotFullDimensional);
    }
    if !locally_delzant(p, f) {
        return Err(ProjectionError::NotDelzant);
    }
    let hx = annihilator_lattice(p, f);
    let last = hx.row(n - 1);
    let d = last.iter().fold(Int::zero(), |g, x| num_integer::Integer::gcd(&g, x));
    if d > Int::one() {
        return Err(ProjectionError::DisconnectedStabilizer {
            face: f.active_inequalities.clone(),
            components: d,
        });
    }
    let mut e = IntMatrix::zeros(1, n);
    e[(0, n - 1)] = Int::one();
    let h = equation_sublattice(&e, &LatticeBasis::new(hx).expect("kernel bases are independent"));
    let basis = h.generators().col_vecs();
    let normals: Vec<Vec<Rational>> = f
        .active_inequalities
        .iter()
        .map(|&i| crate::exactla::to_rational_vec(&p.ineqs()[i].a))
        .collect();
    let u = qmat::transpose(&normals, n);
    // coefficients of each basis vector of h in the active normals
    let coeffs: Vec<Vec<Rational>> = basis
        .iter()
        .map(|b| qmat::solve_cols(&u, normals.len(), &crate::exactla::to_rational_vec(b)).expect("h lies in the normal span"))
        .collect();
    let hdim = basis.len();
    let mut weights: Vec<Vec<Int>> = (0..normals.len())
        .map(|i| coeffs.iter().map(|c| c[i].to_integer()).collect())
        .collect();
    while weights.len() < hdim + 1 {
        weights.push(vec![Int::zero(); hdim]);
    }
    let subtorus = basis.iter().map(|b| b[..n - 1].to_vec()).collect();
    let label = ModelLabel::new(n - 1, subtorus, weights)?;
    Ok(label.at(f.relint_point[..n - 1].to_vec())?)
}

/// Strict construction: `p` must be a Delzant polytope.
pub fn build_projection(p: &HPolyhedron, lattice: &LatticeBasis) -> Result<ComplexityOneBundle, ProjectionError> {
    build(p, lattice, false)
}

/// Like [`build_projection`], but faces that are not locally Delzant are
/// allowed as long as they project into the boundary of the image; their
/// projections become excluded sets of the skeleton.
pub fn build_projection_relaxed(
    p: &HPolyhedron,
    lattice: &LatticeBasis,
) -> Result<ComplexityOneBundle, ProjectionError> {
    build(p, lattice, true)
}

fn project_points(v: &VPolyhedron, ids: &[usize]) -> HPolyhedron {
    let n = v.dim;
    let pts = ids.iter().map(|&i| v.points[i][..n - 1].to_vec()).collect();
    VPolyhedron::from_points(n - 1, pts).to_h().expect("small polytope")
}

fn build(p: &HPolyhedron, lattice: &LatticeBasis, relaxed: bool) -> Result<ComplexityOneBundle, ProjectionError> {
    let n = p.dim();
    check_lattice(n, lattice)?;
    if n < 2 {
        return Err(ProjectionError::NotFullDimensional);
    }
    let q = p.minimize()?;
    let (v, faces) = face_lattice(&q)?;
    if !q.eqs().is_empty() || v.is_empty() || !v.is_bounded() {
        return Err(ProjectionError::NotFullDimensional);
    }
    if !relaxed && !is_delzant_polytope(&q, lattice)? {
        return Err(ProjectionError::NotDelzant);
    }
    let pr = project_drop_last(&q)?;
    let delta = pr.image.minimize()?;
    let interior = |f: &Face| {
        let x = &f.relint_point[..n - 1];
        delta.ineqs().iter().all(|c| c.slack(x).is_positive())
    };

    let smooth: Vec<bool> = faces.iter().map(|f| locally_delzant(&q, f)).collect();
    let mut excluded = Vec::new();
    for (i, f) in faces.iter().enumerate() {
        if smooth[i] {
            continue;
        }
        if interior(f) {
            return Err(ProjectionError::NotDelzant);
        }
        // keep only maximal non-smooth faces
        let maximal = !faces
            .iter()
            .enumerate()
            .any(|(j, g)| j != i && !smooth[j] && g.dim > f.dim && g.contains_face(f));
        if maximal {
            excluded.push(project_points(&v, &f.vertex_ids));
        }
    }

    let tall = faces.iter().filter(|f| f.dim == 0).all(|f| {
        let signs = f.active_inequalities.iter().map(|&i| q.ineqs()[i].a[n - 1].signum());
        let (mut up, mut down) = (false, false);
        for s in signs {
            up |= s.is_negative();
            down |= s.is_positive();
        }
        !(up && down)
    });

    let exceptional: Vec<usize> = (0..faces.len())
        .filter(|&i| smooth[i] && interior(&faces[i]) && is_exceptional_face(&q, &faces[i]))
        .collect();
    let members: Vec<usize> = (0..faces.len())
        .filter(|&i| smooth[i] && exceptional.iter().any(|&e| faces[e].contains_face(&faces[i])))
        .collect();

    let mut cells = Vec::with_capacity(members.len());
    for &i in &members {
        let f = &faces[i];
        let model = face_model(&q, f, lattice)?;
        cells.push(SkeletonCell::embedded(project_points(&v, &f.vertex_ids), model.label().clone()));
    }
    let mut incidences = Vec::new();
    for (a, &i) in members.iter().enumerate() {
        for (b, &j) in members.iter().enumerate() {
            if i == j || !faces[i].contains_face(&faces[j]) {
                continue;
            }
            let x = &faces[j].relint_point[..n - 1];
            incidences.push(Incidence {
                cell: a,
                face: cells[a].carrier.active_at(x),
                target: b,
            });
        }
    }
    let bundle = ComplexityOneBundle {
        delta,
        tall,
        skeleton: SkeletonComplex {
            cells,
            incidences,
            excluded,
        },
        rho: pr.fiber_length,
        genus: 0,
    };
    if tall {
        Ok(bundle)
    } else {
        Err(ProjectionError::NotTall(Box::new(bundle)))
    }
}
