//! Double description method on homogenised cones.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{HPolyhedron, Ineq, PolyError, VPolyhedron, MAX_DIM};
use crate::exactla::{dot_int, primitive_integer_direction, primitive_part, qmat, Int, IntMatrix, LatticeBasis, Rational};

#[derive(Clone, Debug)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64).max(1)])
    }

    fn with_prefix(n: usize, k: usize) -> Self {
        let mut b = Bits::new(n);
        for i in 0..k {
            b.set(i);
        }
        b
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn and(&self, o: &Bits) -> Bits {
        Bits(self.0.iter().zip(&o.0).map(|(a, b)| a & b).collect())
    }

    fn contains(&self, o: &Bits) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a & b == *b)
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
}

/// Generators of `{y : e·y = 0 for e in eqs, h·y ≥ 0 for h in ineqs}`.
pub(crate) struct Cone {
    pub rays: Vec<Vec<Int>>,
    pub lines: Vec<Vec<Int>>,
}

fn integer_basis(vs: Vec<Vec<Rational>>) -> Vec<Vec<Int>> {
    vs.iter().map(|v| primitive_integer_direction(v).0).collect()
}

fn combo(a: &Int, x: &[Int], b: &Int, y: &[Int]) -> Vec<Int> {
    let v: Vec<Int> = x.iter().zip(y).map(|(p, q)| a * p - b * q).collect();
    primitive_part(&v)
}

pub(crate) fn dd_cone(dim: usize, eqs: &[Vec<Int>], ineqs: &[Vec<Int>]) -> Cone {
    let eq_rows: Vec<Vec<Rational>> = eqs.iter().map(|e| crate::exactla::to_rational_vec(e)).collect();
    let mut lines = integer_basis(qmat::nullspace(&eq_rows, dim));
    let span = lines.len();
    let nbits = ineqs.len();
    let mut rays: Vec<(Vec<Int>, Bits)> = Vec::new();

    for (k, h) in ineqs.iter().enumerate() {
        if let Some(pi) = lines.iter().position(|l| !dot_int(h, l).is_zero()) {
            let mut p = lines.remove(pi);
            let mut hp = dot_int(h, &p);
            if hp.is_negative() {
                p = p.iter().map(|x| -x).collect();
                hp = -hp;
            }
            for l in lines.iter_mut() {
                let hl = dot_int(h, l);
                if !hl.is_zero() {
                    *l = combo(&hp, l, &hl, &p);
                }
            }
            for (r, z) in rays.iter_mut() {
                let hr = dot_int(h, r);
                if !hr.is_zero() {
                    *r = combo(&hp, r, &hr, &p);
                }
                z.set(k);
            }
            rays.push((p, Bits::with_prefix(nbits, k)));
            continue;
        }

        let vals: Vec<Int> = rays.iter().map(|(r, _)| dot_int(h, r)).collect();
        if !vals.iter().any(Signed::is_negative) {
            for ((_, z), v) in rays.iter_mut().zip(&vals) {
                if v.is_zero() {
                    z.set(k);
                }
            }
            continue;
        }
        let need = (span - lines.len()).saturating_sub(2);
        let mut next: Vec<(Vec<Int>, Bits)> = Vec::new();
        for (i, (r, z)) in rays.iter().enumerate() {
            if vals[i].is_positive() {
                next.push((r.clone(), z.clone()));
            } else if vals[i].is_zero() {
                let mut z = z.clone();
                z.set(k);
                next.push((r.clone(), z));
            }
        }
        for (pi, (rp, zp)) in rays.iter().enumerate() {
            if !vals[pi].is_positive() {
                continue;
            }
            for (ni, (rn, zn)) in rays.iter().enumerate() {
                if !vals[ni].is_negative() {
                    continue;
                }
                let common = zp.and(zn);
                if common.count() < need {
                    continue;
                }
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(i, (_, z))| i == pi || i == ni || !z.contains(&common));
                if !adjacent {
                    continue;
                }
                // vp > 0 > vn, so both coefficients are positive
                let v = combo(&vals[pi], rn, &vals[ni], rp);
                let mut z = common;
                z.set(k);
                next.push((v, z));
            }
        }
        rays = next;
    }
    let mut out: Vec<Vec<Int>> = rays.into_iter().map(|(r, _)| r).collect();
    out.sort();
    out.dedup();
    Cone { rays: out, lines }
}

/// Orthogonal projection onto the complement of the lineality space.
struct OrthoProjector {
    basis: Vec<Vec<Rational>>,
    gram_inv: qmat::QMatrix,
}

impl OrthoProjector {
    fn new(lin: &LatticeBasis) -> Self {
        let basis: Vec<Vec<Rational>> = lin
            .generators()
            .col_vecs()
            .iter()
            .map(|c| crate::exactla::to_rational_vec(c))
            .collect();
        let gram: qmat::QMatrix = basis
            .iter()
            .map(|a| basis.iter().map(|b| crate::exactla::dot(a, b)).collect())
            .collect();
        let gram_inv = if basis.is_empty() {
            Vec::new()
        } else {
            qmat::inverse(&gram).expect("lineality basis is independent")
        };
        OrthoProjector { basis, gram_inv }
    }

    fn apply(&self, x: &[Rational]) -> Vec<Rational> {
        if self.basis.is_empty() {
            return x.to_vec();
        }
        let c: Vec<Rational> = self.basis.iter().map(|b| crate::exactla::dot(b, x)).collect();
        let coef = qmat::mul_vec(&self.gram_inv, &c);
        let mut out = x.to_vec();
        for (b, t) in self.basis.iter().zip(&coef) {
            for (o, bi) in out.iter_mut().zip(b) {
                *o -= t * bi;
            }
        }
        out
    }
}

fn homogenise(c: &Ineq) -> Vec<Int> {
    let den = c.b.denom().clone();
    let mut v: Vec<Int> = c.a.iter().map(|x| x * &den).collect();
    v.push(-c.b.numer().clone());
    v
}

pub(crate) fn h_to_v(p: &HPolyhedron) -> Result<VPolyhedron, PolyError> {
    let d = p.dim();
    if d > MAX_DIM {
        return Err(PolyError::DimensionTooLarge(d));
    }
    let eqs: Vec<Vec<Int>> = p.eqs().iter().map(homogenise).collect();
    let mut ineqs: Vec<Vec<Int>> = p.ineqs().iter().map(homogenise).collect();
    let mut t = vec![Int::zero(); d + 1];
    t[d] = Int::one();
    ineqs.push(t);
    let cone = dd_cone(d + 1, &eqs, &ineqs);

    let normals: Vec<Vec<Int>> = p.ineqs().iter().chain(p.eqs()).map(|c| c.a.clone()).collect();
    let lineality = VPolyhedron::lineality_from_normals(d, &normals);
    let proj = OrthoProjector::new(&lineality);

    let mut points = Vec::new();
    let mut rays = Vec::new();
    for r in &cone.rays {
        let x = crate::exactla::to_rational_vec(&r[..d]);
        if r[d].is_positive() {
            let t = Rational::from_integer(r[d].clone());
            let pt: Vec<Rational> = x.iter().map(|xi| xi / &t).collect();
            points.push(proj.apply(&pt));
        } else {
            let (ray, _) = primitive_integer_direction(&proj.apply(&x));
            if !ray.iter().all(Zero::is_zero) {
                rays.push(ray);
            }
        }
    }
    if points.is_empty() {
        return Ok(VPolyhedron {
            dim: d,
            points,
            rays: Vec::new(),
            lineality: LatticeBasis::new(IntMatrix::zeros(d, 0)).expect("empty basis"),
        });
    }
    points.sort();
    points.dedup();
    rays.sort();
    rays.dedup();
    Ok(VPolyhedron {
        dim: d,
        points,
        rays,
        lineality,
    })
}

pub(crate) fn v_to_h(v: &VPolyhedron) -> Result<HPolyhedron, PolyError> {
    let d = v.dim;
    if d > MAX_DIM {
        return Err(PolyError::DimensionTooLarge(d));
    }
    if v.is_empty() {
        return Ok(HPolyhedron::empty(d));
    }
    let mut gens: Vec<Vec<Int>> = Vec::new();
    for p in &v.points {
        let den = p.iter().fold(Int::one(), |l, x| l.lcm(x.denom()));
        let mut g: Vec<Int> = p.iter().map(|x| (x * Rational::from_integer(den.clone())).to_integer()).collect();
        g.push(den);
        gens.push(g);
    }
    for r in &v.rays {
        let mut g = r.clone();
        g.push(Int::zero());
        gens.push(g);
    }
    let line_eqs: Vec<Vec<Int>> = v
        .lineality
        .generators()
        .col_vecs()
        .into_iter()
        .map(|mut l| {
            l.push(Int::zero());
            l
        })
        .collect();
    let polar = dd_cone(d + 1, &line_eqs, &gens);

    // a polar ray whose normal part lies in the span of the polar lines is
    // the facet t ≥ 0 of the homogenisation
    let line_normals: qmat::QMatrix = polar
        .lines
        .iter()
        .map(|l| crate::exactla::to_rational_vec(&l[..d]))
        .collect();
    let line_normals = qmat::transpose(&line_normals, d);
    let mut ineqs = Vec::new();
    for y in &polar.rays {
        let a = y[..d].to_vec();
        if a.iter().all(Zero::is_zero)
            || qmat::solve_cols(&line_normals, polar.lines.len(), &crate::exactla::to_rational_vec(&a)).is_some()
        {
            continue;
        }
        if let Some(c) = Ineq::new(a, -Rational::from_integer(y[d].clone())) {
            ineqs.push(c);
        }
    }
    // canonical equations from the reduced echelon form of the polar lines
    let mut rows: qmat::QMatrix = polar.lines.iter().map(|l| crate::exactla::to_rational_vec(l)).collect();
    let piv = qmat::rref(&mut rows);
    let mut eqs = Vec::new();
    for row in rows.iter().take(piv.len()) {
        let (ints, _) = primitive_integer_direction(row);
        if let Some(c) = Ineq::new(ints[..d].to_vec(), -Rational::from_integer(ints[d].clone())) {
            eqs.push(c);
        }
    }
    ineqs.sort();
    Ok(HPolyhedron::new(d, ineqs, eqs))
}
