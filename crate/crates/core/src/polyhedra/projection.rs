use num_traits::{Signed, Zero};

use super::{face_lattice, Face, HPolyhedron, Ineq, PolyError, VPolyhedron};
use crate::exactla::Rational;
use crate::pwaffine::{AffineCell, PiecewiseAffineFn};

/// Result of projecting along the last coordinate.
#[derive(Clone, Debug)]
pub struct Projection {
    pub image: HPolyhedron,
    /// Faces on which the last coordinate is maximal in its fiber.
    pub ceiling: Vec<Face>,
    /// Faces on which the last coordinate is minimal in its fiber.
    pub floor: Vec<Face>,
    /// Length of the fiber over each point of the image.
    pub fiber_length: PiecewiseAffineFn,
}

/// `(b − a'·x') / a_n` as an affine function of `x'`.
fn envelope_piece(c: &Ineq) -> (Vec<Rational>, Rational) {
    let n = c.a.len();
    let an = Rational::from_integer(c.a[n - 1].clone());
    let slope = c.a[..n - 1]
        .iter()
        .map(|x| -Rational::from_integer(x.clone()) / &an)
        .collect();
    (slope, &c.b / &an)
}

/// `f ≤ g` as an inequality `(g − f)·x ≥ f₀ − g₀`; `Err(())` when infeasible.
fn le(f: &(Vec<Rational>, Rational), g: &(Vec<Rational>, Rational)) -> Result<Option<Ineq>, ()> {
    let a: Vec<Rational> = g.0.iter().zip(&f.0).map(|(x, y)| x - y).collect();
    let b = &f.1 - &g.1;
    match Ineq::from_rational(&a, b.clone()) {
        Some(c) => Ok(Some(c)),
        None if b.is_positive() => Err(()),
        None => Ok(None),
    }
}

/// Coordinate projection `R^n → R^{n−1}` forgetting the last coordinate.
pub fn project_drop_last(p: &HPolyhedron) -> Result<Projection, PolyError> {
    let n = p.dim();
    assert!(n >= 1, "cannot project a 0-dimensional polyhedron");
    let (v, faces) = face_lattice(p)?;
    if !v.is_bounded() {
        return Err(PolyError::Unbounded);
    }
    let image = VPolyhedron::from_points(
        n - 1,
        v.points.iter().map(|x| x[..n - 1].to_vec()).collect(),
    )
    .to_h()?;

    let vertical_eq = p.eqs().iter().any(|c| !c.a[n - 1].is_zero());
    let is_ceiling = |i: &usize| p.ineqs()[*i].a[n - 1].is_negative();
    let is_floor = |i: &usize| p.ineqs()[*i].a[n - 1].is_positive();
    let ceiling = faces
        .iter()
        .filter(|f| vertical_eq || f.active_inequalities.iter().any(is_ceiling))
        .cloned()
        .collect();
    let floor = faces
        .iter()
        .filter(|f| vertical_eq || f.active_inequalities.iter().any(is_floor))
        .cloned()
        .collect();

    let fiber_length = if vertical_eq || v.is_empty() {
        PiecewiseAffineFn::constant(image.clone(), Rational::zero())
    } else {
        let q = p.minimize()?;
        let ups: Vec<_> = q.ineqs().iter().filter(|c| c.a[n - 1].is_negative()).map(envelope_piece).collect();
        let downs: Vec<_> = q.ineqs().iter().filter(|c| c.a[n - 1].is_positive()).map(envelope_piece).collect();
        let target = image.affine_dim()?;
        let mut cells = Vec::new();
        for (i, u) in ups.iter().enumerate() {
            'pair: for (j, l) in downs.iter().enumerate() {
                let mut extra = Vec::new();
                // u is the lowest ceiling, l the highest floor
                for (k, w) in ups.iter().enumerate() {
                    if k != i {
                        match le(u, w) {
                            Ok(c) => extra.extend(c),
                            Err(()) => continue 'pair,
                        }
                    }
                }
                for (k, w) in downs.iter().enumerate() {
                    if k != j {
                        match le(w, l) {
                            Ok(c) => extra.extend(c),
                            Err(()) => continue 'pair,
                        }
                    }
                }
                let cell = image.with_ineqs(extra);
                let cv = cell.to_v()?;
                if cv.affine_dim() != target {
                    continue;
                }
                cells.push(AffineCell {
                    carrier: cv.to_h()?,
                    slope: u.0.iter().zip(&l.0).map(|(a, b)| a - b).collect(),
                    constant: &u.1 - &l.1,
                });
            }
        }
        PiecewiseAffineFn::new(n - 1, cells, image.clone())
    };
    Ok(Projection {
        image,
        ceiling,
        floor,
        fiber_length,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::{rat, rat_vec, ratio};
    use crate::pwaffine::integrate;

    #[test]
    fn cube_fibers() {
        let cube = HPolyhedron::cuboid(&rat_vec(&[0, 0, 0]), &rat_vec(&[1, 1, 1]));
        let pr = project_drop_last(&cube).unwrap();
        assert!(pr.image.same_set(&HPolyhedron::cuboid(&rat_vec(&[0, 0]), &rat_vec(&[1, 1]))).unwrap());
        for x in [rat_vec(&[0, 0]), vec![ratio(1, 3), ratio(1, 2)]] {
            assert_eq!(pr.fiber_length.eval(&x).unwrap(), rat(1));
        }
        assert_eq!(integrate(&pr.fiber_length).unwrap(), rat(1));
    }

    #[test]
    fn simplex_fibers() {
        let s = VPolyhedron::from_points(
            3,
            vec![rat_vec(&[0, 0, 0]), rat_vec(&[1, 0, 0]), rat_vec(&[0, 1, 0]), rat_vec(&[0, 0, 1])],
        )
        .to_h()
        .unwrap();
        let pr = project_drop_last(&s).unwrap();
        for (x, y) in [(0, 0), (1, 0), (0, 1)] {
            let x = rat_vec(&[x, y]);
            assert_eq!(pr.fiber_length.eval(&x).unwrap(), rat(1) - &x[0] - &x[1]);
        }
        assert_eq!(pr.fiber_length.eval(&[ratio(1, 4), ratio(1, 4)]).unwrap(), ratio(1, 2));
        // the slanted facet is a ceiling and meets the floor along the boundary
        assert!(pr.ceiling.iter().any(|c| pr.floor.contains(c)));
    }
}
