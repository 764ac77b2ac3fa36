use serde::Serialize;

use super::{ModelError, ModelLabel};
use crate::exactla::{
    complete_to_basis, kernel_basis, solve_pairing_one, unimodular_inverse, Int, IntMatrix, LatticeBasis,
    LatticeError, Rational,
};
use crate::serde_util;

/// The lattices of `G = T ×_H (S¹)^{h+1}`.
///
/// `g*_Z` sits inside `Z^n × Z^{h+1}` as the pairs `(γ, s)` with
/// `i_H^*(γ) = χ^*(s)`. Its basis `Q` is canonical; `g_basis` is a dual basis
/// `E` lifted to integer vectors, so coordinates with respect to `Q` and `E`
/// pair by the dot product.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GLattices {
    #[serde(skip)]
    torus_rank: usize,
    /// Columns of `Q`, each in `Z^n × Z^{h+1}`.
    #[serde(rename = "gstar_basis", with = "serde_util::int_vecs")]
    gstar: Vec<Vec<Int>>,
    #[serde(rename = "g_basis", with = "serde_util::int_vecs")]
    g: Vec<Vec<Int>>,
    /// The defining character in `g*_Z` coordinates.
    #[serde(with = "serde_util::int_vec")]
    xi: Vec<Int>,
    /// Rows: images of the standard basis of `Z^n` in `g_Z` coordinates.
    #[serde(rename = "i_t", with = "serde_util::int_vecs")]
    i_t: Vec<Vec<Int>>,
}

impl GLattices {
    pub(crate) fn of(label: &ModelLabel) -> Result<Self, ModelError> {
        let xi = label.defining_exponents()?;
        let n = label.torus_rank();
        let h = label.subtorus_rank();
        let w = label.weight_matrix();
        let bt = label.subtorus_matrix().transpose();
        // (s, γ) order so that the canonical basis is expressed in s first
        let mut m = IntMatrix::zeros(h, h + 1 + n);
        for i in 0..h {
            for k in 0..=h {
                m[(i, k)] = -w[(i, k)].clone();
            }
            for c in 0..n {
                m[(i, h + 1 + c)] = bt[(i, c)].clone();
            }
        }
        let ker = kernel_basis(&m);
        let perm: Vec<usize> = (h + 1..h + 1 + n).chain(0..=h).collect();
        let q = ker.generators().select_rows(&perm);
        let full = complete_to_basis(&q).expect("kernels are saturated");
        let inv = unimodular_inverse(&full);
        let e: Vec<Vec<Int>> = (0..=n).map(|k| inv.row(k)).collect();

        let mut lifted = vec![Int::from(0); n];
        lifted.extend(xi.iter().cloned());
        let xi_coords = e.iter().map(|ek| crate::exactla::dot_int(ek, &lifted)).collect();
        let i_t = (0..n).map(|c| (0..=n).map(|k| q[(c, k)].clone()).collect()).collect();
        Ok(GLattices {
            torus_rank: n,
            gstar: q.col_vecs(),
            g: e,
            xi: xi_coords,
            i_t,
        })
    }

    pub fn gstar_basis(&self) -> &[Vec<Int>] {
        &self.gstar
    }

    pub fn g_basis(&self) -> &[Vec<Int>] {
        &self.g
    }

    pub fn xi(&self) -> &[Int] {
        &self.xi
    }

    /// `i_T(v)` in `g_Z` coordinates.
    pub fn i_t(&self, v: &[Int]) -> Vec<Int> {
        let mut out = vec![Int::from(0); self.torus_rank + 1];
        for (row, x) in self.i_t.iter().zip(v) {
            for (o, r) in out.iter_mut().zip(row) {
                *o += r * x;
            }
        }
        out
    }

    /// `i_T^*` applied to a point given in `g*` coordinates.
    pub fn i_t_star(&self, c: &[Rational]) -> Vec<Rational> {
        self.i_t.iter().map(|row| crate::exactla::dot_mixed(row, c)).collect()
    }

    /// `g*` coordinates of a point `(γ, s)` of `g*`.
    pub fn gstar_coords(&self, v: &[Rational]) -> Vec<Rational> {
        self.g.iter().map(|e| crate::exactla::dot_mixed(e, v)).collect()
    }

    /// Deterministic `j ∈ g_Z` with `<ξ, j> = 1`.
    pub fn complementary_circle(&self) -> Result<Vec<Int>, LatticeError> {
        solve_pairing_one(&self.xi, &LatticeBasis::standard(self.xi.len()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::{dot_int, int_vec};
    use crate::model::tests::{circle_model, six_d_vertex};
    use crate::model::random_tall_model;
    use proptest::prelude::*;
    use rand::SeedableRng;

    #[test]
    fn circle_lattices() {
        let g = circle_model().g_lattices().unwrap();
        assert_eq!(g.gstar_basis(), &[int_vec(&[1, 1, 0]), int_vec(&[-1, 0, 1])]);
        assert_eq!(g.xi(), int_vec(&[1, 1]).as_slice());
        assert_eq!(g.i_t(&int_vec(&[1])), int_vec(&[1, -1]));
        assert_eq!(g.complementary_circle().unwrap(), int_vec(&[1, 0]));
    }

    #[test]
    fn trivial_subtorus() {
        let m = crate::model::ModelLabel::from_i64(2, &[], &[&[]]).unwrap();
        let g = GLattices::of(&m).unwrap();
        assert_eq!(g.gstar_basis().len(), 3);
        assert_eq!(dot_int(g.xi(), &g.complementary_circle().unwrap()), Int::from(1));
    }

    #[test]
    fn vertex_lattices() {
        let g = six_d_vertex().g_lattices().unwrap();
        assert_eq!(g.gstar_basis().len(), 3);
        let j = g.complementary_circle().unwrap();
        assert_eq!(dot_int(g.xi(), &j), Int::from(1));
    }

    proptest! {
        #[test]
        fn dual_bases(seed in any::<u64>()) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let m = random_tall_model(&mut rng, 4);
            let g = m.g_lattices().unwrap();
            let n = m.label().torus_rank();
            for (a, q) in g.gstar_basis().iter().enumerate() {
                for (b, e) in g.g_basis().iter().enumerate() {
                    prop_assert_eq!(dot_int(q, e), Int::from((a == b) as i64));
                }
                // every basis vector satisfies i_H^*(γ) = χ^*(s)
                let bt = m.label().subtorus_matrix().transpose();
                let w = m.label().weight_matrix();
                prop_assert_eq!(bt.mul_vec(&q[..n]), w.mul_vec(&q[n..]));
            }
            let j = g.complementary_circle().unwrap();
            prop_assert_eq!(dot_int(g.xi(), &j), Int::from(1));
            // i_T^* ∘ (coords of (γ, s)) recovers γ
            for q in g.gstar_basis() {
                let v: Vec<Rational> = q.iter().map(|x| Rational::from_integer(x.clone())).collect();
                let c = g.gstar_coords(&v);
                prop_assert_eq!(g.i_t_star(&c), v[..n].to_vec());
            }
        }
    }
}
