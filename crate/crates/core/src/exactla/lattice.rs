use num_traits::{One, Zero};

use super::{hnf, qmat, snf, Int, IntMatrix, LatticeBasis, LatticeError};

/// Result of [`saturate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Saturation {
    pub basis: LatticeBasis,
    /// `[saturation : input]`.
    pub index: Int,
}

/// True when the columns are independent and span a saturated sublattice.
pub(crate) fn is_saturated(gens: &IntMatrix) -> bool {
    let f = snf(gens).invariant_factors();
    f.len() == gens.cols() && f.iter().all(One::is_one)
}

/// Inverse of a unimodular integer matrix.
pub fn unimodular_inverse(m: &IntMatrix) -> IntMatrix {
    let inv = qmat::inverse(&m.to_rational()).expect("matrix is not invertible");
    let n = m.rows();
    let mut out = IntMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            assert!(inv[i][j].is_integer(), "matrix is not unimodular");
            out[(i, j)] = inv[i][j].to_integer();
        }
    }
    out
}

/// Nonzero columns of the column HNF; a canonical basis of the column lattice.
pub(crate) fn canonical_columns(m: &IntMatrix) -> IntMatrix {
    let h = hnf(m);
    let keep: Vec<usize> = (0..h.pivots.len()).collect();
    h.h.select_cols(&keep)
}

/// Basis of the saturated kernel `{x in Z^cols : m x = 0}`.
pub fn kernel_basis(m: &IntMatrix) -> LatticeBasis {
    let r = hnf(m);
    let free: Vec<usize> = (r.pivots.len()..m.cols()).collect();
    let k = r.u.select_cols(&free);
    LatticeBasis::new_unchecked(canonical_columns(&k), true)
}

/// The saturation `span_Q(b) ∩ Z^n` together with the index of `b` in it.
pub fn saturate(b: &LatticeBasis) -> Saturation {
    let g = b.generators();
    let s = snf(g);
    let factors = s.invariant_factors();
    let r = factors.len();
    let uinv = unimodular_inverse(&s.u);
    let first: Vec<usize> = (0..r).collect();
    let basis = canonical_columns(&uinv.select_cols(&first));
    let index = factors.iter().fold(Int::one(), |a, d| a * d);
    Saturation {
        basis: LatticeBasis::new_unchecked(basis, true),
        index,
    }
}

/// Completes a saturated basis `b` (columns) of a sublattice of `Z^n` to a
/// unimodular matrix `[b | c]`. `None` if `b` is not saturated.
pub fn complete_to_basis(b: &IntMatrix) -> Option<IntMatrix> {
    if !is_saturated(b) {
        return None;
    }
    let n = b.rows();
    let s = snf(b);
    let uinv = unimodular_inverse(&s.u);
    let rest: Vec<usize> = (b.cols()..n).collect();
    Some(b.hstack(&uinv.select_cols(&rest)))
}

/// Whether the columns of `vectors` are part of some basis of `lattice`.
pub fn extends_to_lattice_basis(
    vectors: &IntMatrix,
    lattice: &LatticeBasis,
) -> Result<bool, LatticeError> {
    if vectors.rows() != lattice.ambient_rank() {
        return Err(LatticeError::DimensionMismatch {
            expected: lattice.ambient_rank(),
            got: vectors.rows(),
        });
    }
    let mut coords = Vec::with_capacity(vectors.cols());
    for v in vectors.col_vecs() {
        coords.push(lattice.coords(&v).ok_or(LatticeError::VectorsNotInLattice)?);
    }
    if coords.is_empty() {
        return Ok(true);
    }
    let c = IntMatrix::from_cols(lattice.rank(), &coords);
    Ok(is_saturated(&c))
}

/// Finds `j` in `lattice` with `<xi, j> = 1`.
///
/// The choice is deterministic: the first column of the HNF transform of
/// the row of values of `xi` on the lattice basis.
pub fn solve_pairing_one(xi: &[Int], lattice: &LatticeBasis) -> Result<Vec<Int>, LatticeError> {
    if xi.len() != lattice.ambient_rank() {
        return Err(LatticeError::DimensionMismatch {
            expected: lattice.ambient_rank(),
            got: xi.len(),
        });
    }
    let row = IntMatrix::from_rows(xi.len(), &[xi.to_vec()]).mul(lattice.generators());
    if lattice.rank() == 0 {
        return Err(LatticeError::NotPrimitive(Int::zero()));
    }
    let r = hnf(&row);
    let g = r.h[(0, 0)].clone();
    if !g.is_one() {
        return Err(LatticeError::NotPrimitive(g));
    }
    Ok(lattice.generators().mul_vec(&r.u.col(0)))
}

/// `{v in ambient : m v = 0}`.
pub fn equation_sublattice(m: &IntMatrix, ambient: &LatticeBasis) -> LatticeBasis {
    assert_eq!(m.cols(), ambient.ambient_rank(), "equation width mismatch");
    let a = ambient.generators();
    let k = kernel_basis(&m.mul(a));
    let gens = a.mul(k.generators());
    let primitive = ambient.is_primitive() || is_saturated(&gens);
    LatticeBasis::new_unchecked(gens, primitive)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::int_vec;
    use num_traits::Signed;
    use proptest::prelude::*;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows.first().map_or(0, Vec::len), rows)
    }

    fn cols(n: usize, c: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_cols(n, c)
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel_basis(&m(&[vec![1, 1]])).generators(), &cols(2, &[vec![1, -1]]));
        assert_eq!(kernel_basis(&m(&[vec![2, -1]])).generators(), &cols(2, &[vec![1, 2]]));
        assert_eq!(kernel_basis(&IntMatrix::identity(2)).rank(), 0);
    }

    #[test]
    fn saturate_examples() {
        let s = saturate(&LatticeBasis::new(cols(2, &[vec![2, 0]])).unwrap());
        assert_eq!(s.basis.generators(), &cols(2, &[vec![1, 0]]));
        assert_eq!(s.index, Int::from(2));

        let s = saturate(&LatticeBasis::new(cols(2, &[vec![1, 1]])).unwrap());
        assert_eq!(s.basis.generators(), &cols(2, &[vec![1, 1]]));
        assert!(s.index.is_one());

        let s = saturate(&LatticeBasis::new(cols(2, &[vec![2, 2], vec![0, 4]])).unwrap());
        assert_eq!(s.basis.rank(), 2);
        assert!(s.basis.generators().is_unimodular());
        assert_eq!(s.index, Int::from(8));
    }

    /// Enumerates integer points of small norm in the rational span.
    fn brute_saturation_contains(b: &IntMatrix, bound: i64) -> Vec<Vec<Int>> {
        let n = b.rows();
        let q = b.transpose().to_rational();
        let basis = qmat::nullspace(&q, n);
        let mut out = Vec::new();
        let mut v = vec![-bound; n];
        loop {
            let iv = int_vec(&v);
            let qv = crate::exactla::to_rational_vec(&iv);
            if basis.iter().all(|w| crate::exactla::dot(w, &qv).is_zero()) {
                out.push(iv);
            }
            let mut i = 0;
            loop {
                if i == n {
                    return out;
                }
                v[i] += 1;
                if v[i] <= bound {
                    break;
                }
                v[i] = -bound;
                i += 1;
            }
        }
    }

    #[test]
    fn saturation_matches_enumeration() {
        for g in [cols(3, &[vec![2, 2, 0]]), cols(3, &[vec![2, 0, 2], vec![0, 3, 3]])] {
            let s = saturate(&LatticeBasis::new(g.clone()).unwrap());
            for v in brute_saturation_contains(&g, 3) {
                assert!(s.basis.contains(&v), "{v:?} missing");
            }
            for c in s.basis.generators().col_vecs() {
                let back = brute_saturation_contains(&g, 3);
                assert!(back.contains(&c));
            }
        }
    }

    #[test]
    fn extension_examples() {
        let z2 = LatticeBasis::standard(2);
        assert!(extends_to_lattice_basis(&cols(2, &[vec![1, 0]]), &z2).unwrap());
        assert!(!extends_to_lattice_basis(&cols(2, &[vec![1, 0], vec![1, 2]]), &z2).unwrap());
        assert!(extends_to_lattice_basis(&cols(2, &[vec![2, 1], vec![1, 1]]), &z2).unwrap());
        let even = LatticeBasis::new(cols(2, &[vec![2, 0], vec![0, 2]])).unwrap();
        assert_eq!(
            extends_to_lattice_basis(&cols(2, &[vec![1, 0]]), &even),
            Err(LatticeError::VectorsNotInLattice)
        );
        assert!(extends_to_lattice_basis(&cols(2, &[vec![2, 0]]), &even).unwrap());
    }

    #[test]
    fn pairing_examples() {
        let z2 = LatticeBasis::standard(2);
        assert_eq!(solve_pairing_one(&int_vec(&[1, 1]), &z2).unwrap(), int_vec(&[1, 0]));
        assert_eq!(
            solve_pairing_one(&int_vec(&[2, 4]), &z2),
            Err(LatticeError::NotPrimitive(Int::from(2)))
        );
        // 3*2 + 5*(-1) = 1
        assert_eq!(solve_pairing_one(&int_vec(&[3, 5]), &z2).unwrap(), int_vec(&[2, -1]));
    }

    #[test]
    fn equation_examples() {
        let z3 = LatticeBasis::standard(3);
        let l = equation_sublattice(&m(&[vec![1, -1, 1]]), &z3);
        assert_eq!(l.rank(), 2);
        assert!(l.is_primitive());
        for v in l.generators().col_vecs() {
            assert!((&v[0] - &v[1] + &v[2]).is_zero());
        }
        assert_eq!(equation_sublattice(&IntMatrix::zeros(1, 3), &z3).rank(), 3);
        assert_eq!(equation_sublattice(&IntMatrix::identity(3), &z3).rank(), 0);
    }

    #[test]
    fn completion_is_unimodular() {
        let b = cols(3, &[vec![1, 2, 3], vec![0, 1, 1]]);
        let c = complete_to_basis(&b).unwrap();
        assert!(c.is_unimodular());
        assert_eq!(c.select_cols(&[0, 1]), b);
        assert!(complete_to_basis(&cols(2, &[vec![2, 0]])).is_none());
    }

    fn small_matrix(max_r: usize, max_c: usize) -> impl Strategy<Value = IntMatrix> {
        (1..=max_r, 1..=max_c).prop_flat_map(|(r, c)| {
            prop::collection::vec(-6i64..=6, r * c).prop_map(move |d| {
                let rows: Vec<Vec<i64>> = d.chunks(c).map(<[i64]>::to_vec).collect();
                IntMatrix::from_rows(c, &rows)
            })
        })
    }

    fn unimodular(n: usize) -> impl Strategy<Value = IntMatrix> {
        prop::collection::vec((0..n, 0..n, -3i64..=3), 0..12).prop_map(move |ops| {
            let mut u = IntMatrix::identity(n);
            for (i, j, f) in ops {
                if i != j {
                    for k in 0..n {
                        let t = &u[(j, k)] * Int::from(f);
                        u[(i, k)] += t;
                    }
                }
            }
            u
        })
    }

    proptest! {
        #[test]
        fn hnf_transform_is_unimodular(a in small_matrix(4, 5)) {
            let r = hnf(&a);
            prop_assert!(r.u.is_unimodular());
            prop_assert_eq!(a.mul(&r.u), r.h.clone());
            for (k, &(i, j)) in r.pivots.iter().enumerate() {
                prop_assert!(r.h[(i, j)].is_positive());
                for jj in j + 1..a.cols() {
                    prop_assert!(r.h[(i, jj)].is_zero());
                }
                for &(_, jj) in &r.pivots[..k] {
                    prop_assert!(!r.h[(i, jj)].is_negative() && r.h[(i, jj)] < r.h[(i, j)]);
                }
            }
        }

        #[test]
        fn snf_divisibility(a in small_matrix(4, 4)) {
            let r = snf(&a);
            prop_assert!(r.u.is_unimodular() && r.v.is_unimodular());
            prop_assert_eq!(r.u.mul(&a).mul(&r.v), r.s.clone());
            let f = r.invariant_factors();
            for w in f.windows(2) {
                prop_assert!((&w[1] % &w[0]).is_zero());
            }
            prop_assert!(f.iter().all(|d| d.is_positive()));
        }

        #[test]
        fn snf_invariant_under_unimodular(
            (a, p, q) in (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| (
                prop::collection::vec(-5i64..=5, r * c).prop_map(move |d| {
                    let rows: Vec<Vec<i64>> = d.chunks(c).map(<[i64]>::to_vec).collect();
                    IntMatrix::from_rows(c, &rows)
                }),
                unimodular(r),
                unimodular(c),
            ))
        ) {
            let b = p.mul(&a).mul(&q);
            prop_assert_eq!(snf(&a).invariant_factors(), snf(&b).invariant_factors());
        }

        #[test]
        fn kernel_is_saturated(a in small_matrix(3, 5)) {
            let k = kernel_basis(&a);
            prop_assert_eq!(k.rank(), a.cols() - a.rank());
            for v in k.generators().col_vecs() {
                prop_assert!(a.mul_vec(&v).iter().all(Zero::is_zero));
            }
            let s = saturate(&k);
            prop_assert!(s.index.is_one());
            prop_assert!(is_saturated(k.generators()));
        }

        #[test]
        fn pairing_agrees_with_snf(v in prop::collection::vec(-9i64..=9, 1..6)) {
            let xi = int_vec(&v);
            let l = LatticeBasis::standard(xi.len());
            let row = IntMatrix::from_rows(xi.len(), std::slice::from_ref(&xi));
            let d = snf(&row).invariant_factors();
            match solve_pairing_one(&xi, &l) {
                Ok(j) => {
                    prop_assert!(crate::exactla::dot_int(&xi, &j).is_one());
                    prop_assert_eq!(d, vec![Int::one()]);
                }
                Err(LatticeError::NotPrimitive(_)) => prop_assert!(d != vec![Int::one()]),
                Err(e) => prop_assert!(false, "{e}"),
            }
        }
    }
}
