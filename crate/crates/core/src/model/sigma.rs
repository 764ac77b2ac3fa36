use num_traits::{Signed, Zero};
use serde::Serialize;

use super::{ComplexityOneModel, GLattices, ModelError, TruncationSpec};
use crate::exactla::{dot, dot_int, dot_mixed, qmat, Int, Rational};
use crate::polyhedra::{HPolyhedron, Ineq};
use crate::pwaffine::{AffineCell, PiecewiseAffineFn, PwError};
use crate::serde_util;

/// One linear piece of `σ`: on `carrier`, `σ(β) = linear·β + offset` in
/// `g*` coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SigmaCell {
    /// The orthant facet `{s_index = 0}` this piece lands on.
    pub index: usize,
    pub carrier: HPolyhedron,
    #[serde(with = "serde_util::rational_vecs")]
    pub linear: Vec<Vec<Rational>>,
    #[serde(with = "serde_util::rational_vec")]
    pub offset: Vec<Rational>,
}

impl SigmaCell {
    pub fn apply(&self, beta: &[Rational]) -> Vec<Rational> {
        self.linear
            .iter()
            .zip(&self.offset)
            .map(|(row, o)| dot(row, beta) + o)
            .collect()
    }
}

/// The section `σ` for the complementary circle `j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SigmaSection {
    #[serde(with = "serde_util::int_vec")]
    pub j: Vec<Int>,
    pub domain: HPolyhedron,
    pub cells: Vec<SigmaCell>,
}

impl SigmaSection {
    pub fn eval(&self, beta: &[Rational]) -> Result<Vec<Rational>, PwError> {
        self.cells
            .iter()
            .find(|c| c.carrier.contains(beta))
            .map(|c| c.apply(beta))
            .ok_or(PwError::OutsideDomain)
    }

    /// Every pair of pieces agrees on the intersection of their carriers.
    pub fn check_continuity(&self) -> Result<(), PwError> {
        for i in 0..self.cells.len() {
            for j in i + 1..self.cells.len() {
                let (a, b) = (&self.cells[i], &self.cells[j]);
                let v = a.carrier.intersect(&b.carrier).to_v()?;
                let along = |d: &[Int]| {
                    let d: Vec<Rational> = d.iter().map(|x| Rational::from_integer(x.clone())).collect();
                    a.linear.iter().zip(&b.linear).all(|(ra, rb)| dot(ra, &d) == dot(rb, &d))
                };
                let ok = v.points.iter().all(|p| a.apply(p) == b.apply(p))
                    && v.rays.iter().all(|r| along(r))
                    && v.lineality.generators().col_vecs().iter().all(|l| along(l));
                if !ok {
                    return Err(PwError::Discontinuous(i, j));
                }
            }
        }
        Ok(())
    }
}

/// `R·Bᵀ` with `R = Wᵀ(WWᵀ)⁻¹`: a linear solution `s` of `χ^*(s) = i_H^*(β)`.
fn lift_matrix(m: &ComplexityOneModel) -> Vec<Vec<Rational>> {
    let label = m.label();
    let n = label.torus_rank();
    let h = label.subtorus_rank();
    if h == 0 {
        return vec![vec![Rational::zero(); n]];
    }
    let w = label.weight_matrix().to_rational();
    let wt = qmat::transpose(&w, h + 1);
    let gram = qmat::mul(&w, &wt);
    let r = qmat::mul(&wt, &qmat::inverse(&gram).expect("weights have full rank"));
    let bt = label.subtorus_matrix().transpose().to_rational();
    qmat::mul(&r, &bt)
}

pub(crate) fn sigma_section(m: &ComplexityOneModel, j: Option<&[Int]>) -> Result<SigmaSection, ModelError> {
    let lat = m.g_lattices()?;
    let j = match j {
        Some(j) => checked_circle(&lat, j)?,
        None => lat.complementary_circle()?,
    };
    let n = m.label().torus_rank();
    let h = m.label().subtorus_rank();
    let xi = m.defining_exponents()?;
    let xi_q: Vec<Rational> = xi.iter().map(|x| Rational::from_integer(x.clone())).collect();
    let domain = m.moment_cone()?;
    let alpha = m.base_point();
    let p = lift_matrix(m);

    // ambient representative of j
    let mut jv = vec![Int::zero(); n + h + 1];
    for (e, c) in lat.g_basis().iter().zip(&j) {
        for (x, y) in jv.iter_mut().zip(e) {
            *x += y * c;
        }
    }
    let (jg, js) = jv.split_at(n);
    let s0a = qmat::mul_vec(&p, alpha);
    let tc = -(dot_mixed(jg, alpha) + dot_mixed(js, &s0a));
    let sc: Vec<Rational> = s0a.iter().zip(&xi_q).map(|(a, x)| a + &tc * x).collect();

    let pos: Vec<usize> = (0..=h).filter(|&k| xi[k].is_positive()).collect();
    // f_k(β) = (P_k·β − sc_k)/ξ_k
    let f = |k: usize| -> (Vec<Rational>, Rational) {
        (p[k].iter().map(|x| x / &xi_q[k]).collect(), -&sc[k] / &xi_q[k])
    };
    let mut cells = Vec::new();
    for &k in &pos {
        let fk = f(k);
        let mut extra = Vec::new();
        let mut feasible = true;
        for &m2 in &pos {
            if m2 == k {
                continue;
            }
            let fm = f(m2);
            let a: Vec<Rational> = fm.0.iter().zip(&fk.0).map(|(x, y)| x - y).collect();
            let b = &fk.1 - &fm.1;
            match Ineq::from_rational(&a, b.clone()) {
                Some(c) => extra.push(c),
                None if b.is_positive() => feasible = false,
                None => {}
            }
        }
        if !feasible {
            continue;
        }
        let carrier = domain.with_ineqs(extra);
        if carrier.affine_dim()? != Some(n) {
            continue;
        }
        // ambient σ = (β, Pβ − f_k(β) ξ)
        let mut lin_amb: Vec<Vec<Rational>> = (0..n)
            .map(|i| (0..n).map(|c| Rational::from_integer(Int::from((i == c) as i64))).collect())
            .collect();
        let mut off_amb = vec![Rational::zero(); n];
        for r in 0..=h {
            lin_amb.push(p[r].iter().zip(&fk.0).map(|(a, b)| a - b * &xi_q[r]).collect());
            off_amb.push(-&fk.1 * &xi_q[r]);
        }
        let linear = lat
            .g_basis()
            .iter()
            .map(|e| {
                (0..n)
                    .map(|c| {
                        e.iter()
                            .zip(&lin_amb)
                            .fold(Rational::zero(), |acc, (x, row)| acc + Rational::from_integer(x.clone()) * &row[c])
                    })
                    .collect()
            })
            .collect();
        let offset = lat.gstar_coords(&off_amb);
        cells.push(SigmaCell {
            index: k,
            carrier: carrier.minimize()?,
            linear,
            offset,
        });
    }
    Ok(SigmaSection { j, domain, cells })
}

fn checked_circle(lat: &GLattices, j: &[Int]) -> Result<Vec<Int>, ModelError> {
    if j.len() != lat.xi().len() {
        return Err(ModelError::InvalidModel(format!("j must have length {}", lat.xi().len())));
    }
    if dot_int(lat.xi(), j) != Int::from(1) {
        return Err(ModelError::NotComplementary);
    }
    Ok(j.to_vec())
}

pub(crate) fn dh_truncation(m: &ComplexityOneModel, spec: &TruncationSpec) -> Result<PiecewiseAffineFn, ModelError> {
    m.defining_exponents()?;
    if !spec.kappa.is_positive() {
        return Err(ModelError::NonPositiveKappa);
    }
    let sigma = sigma_section(m, Some(&spec.j))?;
    let n = m.label().torus_rank();
    let cells = sigma
        .cells
        .iter()
        .map(|c| {
            let slope = (0..n).map(|i| -dot_mixed(&spec.j, &c.linear.iter().map(|r| r[i].clone()).collect::<Vec<_>>())).collect();
            AffineCell {
                carrier: c.carrier.clone(),
                slope,
                constant: &spec.kappa - dot_mixed(&spec.j, &c.offset),
            }
        })
        .collect();
    Ok(PiecewiseAffineFn::new(n, cells, sigma.domain))
}

impl ComplexityOneModel {
    /// `σ` normalised against the given complementary circle.
    pub fn sigma_section_for(&self, j: &[Int]) -> Result<SigmaSection, ModelError> {
        sigma_section(self, Some(j))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::{int_vec, rat, rat_vec, ratio, LatticeBasis};
    use crate::model::random_tall_model;
    use crate::model::tests::{circle_model, six_d_vertex};
    use crate::pwaffine::{combine, is_integral_affine_near};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn spec(j: &[i64], kappa: i64) -> TruncationSpec {
        TruncationSpec { j: int_vec(j), kappa: rat(kappa) }
    }

    #[test]
    fn circle_sigma() {
        let s = circle_model().sigma_section().unwrap();
        assert_eq!(s.eval(&rat_vec(&[3])).unwrap(), rat_vec(&[3, 0]));
        assert_eq!(s.eval(&rat_vec(&[-2])).unwrap(), rat_vec(&[0, 2]));
        assert_eq!(s.eval(&rat_vec(&[0])).unwrap(), rat_vec(&[0, 0]));
    }

    #[test]
    fn circle_truncation() {
        let rho = circle_model().dh_truncation(&spec(&[1, 0], 1)).unwrap();
        for (b, v) in [(rat(-2), rat(1)), (rat(-1), rat(1)), (rat(0), rat(1)), (ratio(1, 2), ratio(1, 2)), (rat(1), rat(0))] {
            assert_eq!(rho.eval(&[b]).unwrap(), v);
        }
        let rho2 = circle_model().dh_truncation(&spec(&[0, 1], 1)).unwrap();
        let one = rat(1);
        let d = combine(&rho, &rho2, &one, &-one.clone()).unwrap();
        for b in [-3, -1, 0, 2, 5] {
            assert_eq!(d.eval(&[rat(b)]).unwrap(), rat(-b));
        }
        assert_eq!(circle_model().dh_truncation(&spec(&[1, 0], 0)), Err(ModelError::NonPositiveKappa));
        assert_eq!(circle_model().dh_truncation(&spec(&[1, 1], 1)), Err(ModelError::NotComplementary));
    }

    #[test]
    fn vertex_truncation_is_kinked() {
        let m = six_d_vertex();
        let j = m.complementary_circle().unwrap();
        let rho = m.dh_truncation(&TruncationSpec { j, kappa: rat(1) }).unwrap();
        assert_eq!(rho.eval(&rat_vec(&[1, 1])).unwrap(), rat(1));
        assert_eq!(rho.cells().len(), 3);
        assert!(is_integral_affine_near(&rho, &rat_vec(&[1, 1]), &LatticeBasis::standard(2)).is_err());
    }

    fn random_point_in(c: &HPolyhedron, alpha: &[Rational], rng: &mut impl Rng) -> Vec<Rational> {
        let v = c.to_v().unwrap();
        let mut x = alpha.to_vec();
        for r in v.rays.iter().chain(v.lineality.generators().col_vecs().iter()) {
            let t = ratio(rng.gen_range(-3i64..=12), rng.gen_range(1i64..=4));
            let t = if v.rays.contains(r) { t.abs() } else { t };
            for (xi, ri) in x.iter_mut().zip(r) {
                *xi += &t * Rational::from_integer(ri.clone());
            }
        }
        x
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn section_identities(seed in any::<u64>()) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let m = random_tall_model(&mut rng, 4);
            let lat = m.g_lattices().unwrap();
            let s = m.sigma_section().unwrap();
            let alpha = m.base_point();
            prop_assert_eq!(dot(&s.eval(alpha).unwrap(), &s.j.iter().map(|x| Rational::from_integer(x.clone())).collect::<Vec<_>>()), Rational::zero());
            let xi: Vec<Rational> = lat.xi().iter().map(|x| Rational::from_integer(x.clone())).collect();
            prop_assert!(s.check_continuity().is_ok());
            for _ in 0..6 {
                let b = random_point_in(&s.domain, alpha, &mut rng);
                let sig = s.eval(&b).unwrap();
                for t in [-1i64, 0, 2] {
                    let shifted: Vec<Rational> = sig.iter().zip(&xi).map(|(a, x)| a + rat(t) * x).collect();
                    prop_assert_eq!(lat.i_t_star(&shifted), b.clone());
                }
                for c in &s.cells {
                    if c.carrier.contains(&b) {
                        prop_assert_eq!(c.apply(&b), sig.clone());
                    }
                }
            }
        }

        #[test]
        fn truncations_differ_by_integral_affine(seed in any::<u64>()) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let m = random_tall_model(&mut rng, 3);
            let lat = m.g_lattices().unwrap();
            let j = lat.complementary_circle().unwrap();
            let n = m.label().torus_rank();
            let v: Vec<Int> = (0..n).map(|_| Int::from(rng.gen_range(-2i64..=2))).collect();
            let j2: Vec<Int> = j.iter().zip(lat.i_t(&v)).map(|(a, b)| a + b).collect();
            let rho = m.dh_truncation(&TruncationSpec { j, kappa: rat(1) }).unwrap();
            let rho2 = m.dh_truncation(&TruncationSpec { j: j2, kappa: rat(2) }).unwrap();
            let one = rat(1);
            let d = combine(&rho, &rho2, &one, &-one.clone()).unwrap();
            let germ = is_integral_affine_near(&d, m.base_point(), &LatticeBasis::standard(n)).unwrap();
            let expect: Vec<Rational> = v.iter().map(|x| Rational::from_integer(x.clone())).collect();
            prop_assert_eq!(germ.slope, expect);
        }
    }
}
