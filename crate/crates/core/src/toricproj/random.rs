use rand::seq::SliceRandom;
use rand::Rng;

use crate::exactla::{dot_mixed, Int, IntMatrix, LatticeBasis, Rational};
use crate::polyhedra::{face_lattice, is_delzant_polytope, HPolyhedron, Ineq};

/// Product of unimodular simplices and intervals, each scaled by `k`.
fn product(rng: &mut impl Rng, n: usize) -> Vec<Ineq> {
    let mut out = Vec::new();
    let mut start = 0;
    while start < n {
        let d = rng.gen_range(1..=n - start);
        let k = rng.gen_range(2i64..=3);
        let unit = |i: usize, s: i64| {
            let mut a = vec![0i64; n];
            a[i] = s;
            a
        };
        for i in start..start + d {
            out.push(Ineq::from_i64(&unit(i, 1), 0));
        }
        if d == 1 {
            out.push(Ineq::from_i64(&unit(start, -1), -k));
        } else {
            let mut a = vec![0i64; n];
            for x in &mut a[start..start + d] {
                *x = -1;
            }
            out.push(Ineq::from_i64(&a, -k));
        }
        start += d;
    }
    out
}

/// A few random elementary row operations.
fn unimodular(rng: &mut impl Rng, n: usize) -> IntMatrix {
    let mut m = IntMatrix::identity(n);
    for _ in 0..rng.gen_range(0..=3) {
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let s = Int::from(if rng.gen_bool(0.5) { 1 } else { -1 });
        for c in 0..n {
            let v = &m[(j, c)] * &s;
            m[(i, c)] += v;
        }
    }
    m
}

/// Random Delzant polytope in `R^n`: a product of scaled simplices and
/// intervals, transformed by a unimodular map and an integer translation,
/// with up to two vertices cut off at unit depth.
pub fn random_delzant_polytope<R: Rng>(rng: &mut R, n: usize) -> HPolyhedron {
    assert!(n >= 2, "need at least two dimensions");
    let ineqs = product(rng, n);
    // the polytope {y : M(y − t) ∈ P}
    let m = unimodular(rng, n);
    let t: Vec<Rational> = (0..n).map(|_| Rational::from_integer(rng.gen_range(-2i64..=2).into())).collect();
    let moved: Vec<Ineq> = ineqs
        .iter()
        .map(|c| {
            let a = m.transpose().mul_vec(&c.a);
            let b = &c.b + dot_mixed(&a, &t);
            Ineq::new(a, b).expect("unimodular images are nonzero")
        })
        .collect();
    let mut p = HPolyhedron::new(n, moved, vec![]);
    let lattice = LatticeBasis::standard(n);
    for _ in 0..rng.gen_range(0..=2) {
        let (v, faces) = face_lattice(&p).expect("small polytope");
        let verts: Vec<_> = faces.iter().filter(|f| f.dim == 0).collect();
        let f = verts.choose(rng).expect("polytopes have vertices");
        let mut a = vec![Int::from(0); n];
        for &i in &f.active_inequalities {
            for (x, y) in a.iter_mut().zip(&p.ineqs()[i].a) {
                *x += y;
            }
        }
        let x = &v.points[f.vertex_ids[0]];
        let b = dot_mixed(&a, x) + Rational::from_integer(1.into());
        let cut = p.with_ineqs(Ineq::new(a, b));
        let cut = cut.minimize().expect("small polytope");
        if is_delzant_polytope(&cut, &lattice).unwrap_or(false) && cut.ineqs().len() == p.ineqs().len() + 1 {
            p = cut;
        }
    }
    p.minimize().expect("small polytope")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn generated_polytopes_are_delzant() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for n in [2, 3, 3, 3, 4] {
            let p = random_delzant_polytope(&mut rng, n);
            assert!(is_delzant_polytope(&p, &LatticeBasis::standard(n)).unwrap());
        }
    }
}
