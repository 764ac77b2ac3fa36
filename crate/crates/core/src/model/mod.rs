//! Complexity-one local models `Y = T ×_H C^{h+1} × h⁰`.
//!
//! A model is a connected subtorus `H ⊂ T = R^n/Z^n`, given by generators
//! of its lattice `h_Z ⊂ Z^n`, together with `h + 1` integer weights on
//! `h_Z` and a base point `α ∈ t*`.

mod glattices;
mod sigma;

use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactla::{
    kernel_basis, snf, Int, IntMatrix, LatticeBasis, LatticeError, Rational,
};
use crate::polyhedra::{HPolyhedron, Ineq, PolyError, VPolyhedron};
use crate::pwaffine::PwError;
use crate::serde_util;

pub use glattices::GLattices;
pub use sigma::{SigmaCell, SigmaSection};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("subtorus lattice is not primitive (H would be disconnected)")]
    NonPrimitiveSubtorus,
    #[error("weights do not define a faithful action (invariant factors {0:?})")]
    NonFaithfulWeights(Vec<Int>),
    #[error("model is not tall")]
    NotTall,
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("truncation level must be positive")]
    NonPositiveKappa,
    #[error("complementary circle does not pair to 1 with the defining character")]
    NotComplementary,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Pw(#[from] PwError),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLabel {
    rank: usize,
    #[serde(with = "serde_util::int_vecs")]
    subtorus: Vec<Vec<Int>>,
    #[serde(with = "serde_util::int_vecs")]
    weights: Vec<Vec<Int>>,
}

/// A model without base point: the data `(H, η₀, …, η_h)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawLabel")]
pub struct ModelLabel {
    rank: usize,
    /// Generators of `h_Z`, each a vector in `Z^n`.
    #[serde(with = "serde_util::int_vecs")]
    subtorus: Vec<Vec<Int>>,
    /// `η_k` in the dual of the chosen basis of `h_Z`.
    #[serde(with = "serde_util::int_vecs")]
    weights: Vec<Vec<Int>>,
}

impl TryFrom<RawLabel> for ModelLabel {
    type Error = String;
    fn try_from(r: RawLabel) -> Result<Self, String> {
        ModelLabel::new(r.rank, r.subtorus, r.weights).map_err(|e| e.to_string())
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    rank: usize,
    #[serde(with = "serde_util::int_vecs")]
    subtorus: Vec<Vec<Int>>,
    #[serde(with = "serde_util::int_vecs")]
    weights: Vec<Vec<Int>>,
    #[serde(with = "serde_util::rational_vec")]
    base: Vec<Rational>,
}

/// A model based at `α`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawModel")]
pub struct ComplexityOneModel {
    #[serde(flatten)]
    label: ModelLabel,
    #[serde(with = "serde_util::rational_vec")]
    base: Vec<Rational>,
}

impl TryFrom<RawModel> for ComplexityOneModel {
    type Error = String;
    fn try_from(r: RawModel) -> Result<Self, String> {
        let label = ModelLabel::new(r.rank, r.subtorus, r.weights).map_err(|e| e.to_string())?;
        label.at(r.base).map_err(|e| e.to_string())
    }
}

/// Per-condition validity verdicts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidityReport {
    pub primitive_subtorus: bool,
    pub faithful_weights: bool,
    /// Invariant factors of the weight matrix.
    #[serde(with = "serde_util::int_vec")]
    pub weight_factors: Vec<Int>,
}

impl ValidityReport {
    pub fn is_valid(&self) -> bool {
        self.primitive_subtorus && self.faithful_weights
    }
}

impl ModelLabel {
    /// Checks shapes only; see [`ModelLabel::validate`] for the lattice conditions.
    pub fn new(rank: usize, subtorus: Vec<Vec<Int>>, weights: Vec<Vec<Int>>) -> Result<Self, ModelError> {
        let h = subtorus.len();
        if h > rank {
            return Err(ModelError::InvalidModel(format!("subtorus rank {h} exceeds torus rank {rank}")));
        }
        if subtorus.iter().any(|g| g.len() != rank) {
            return Err(ModelError::InvalidModel(format!("subtorus generators must have length {rank}")));
        }
        if weights.len() != h + 1 {
            return Err(ModelError::InvalidModel(format!("expected {} weights, got {}", h + 1, weights.len())));
        }
        if weights.iter().any(|w| w.len() != h) {
            return Err(ModelError::InvalidModel(format!("weights must have length {h}")));
        }
        Ok(ModelLabel { rank, subtorus, weights })
    }

    pub fn from_i64(rank: usize, subtorus: &[&[i64]], weights: &[&[i64]]) -> Result<Self, ModelError> {
        let conv = |v: &[&[i64]]| -> Vec<Vec<Int>> {
            v.iter().map(|r| r.iter().map(|&x| Int::from(x)).collect()).collect()
        };
        Self::new(rank, conv(subtorus), conv(weights))
    }

    pub fn at(&self, base: Vec<Rational>) -> Result<ComplexityOneModel, ModelError> {
        if base.len() != self.rank {
            return Err(ModelError::InvalidModel(format!("base point must have length {}", self.rank)));
        }
        Ok(ComplexityOneModel { label: self.clone(), base })
    }

    pub fn torus_rank(&self) -> usize {
        self.rank
    }

    /// `h = dim H`.
    pub fn subtorus_rank(&self) -> usize {
        self.subtorus.len()
    }

    pub fn subtorus_generators(&self) -> &[Vec<Int>] {
        &self.subtorus
    }

    pub fn weights(&self) -> &[Vec<Int>] {
        &self.weights
    }

    /// `B`: the `n × h` matrix of subtorus generators.
    pub fn subtorus_matrix(&self) -> IntMatrix {
        IntMatrix::from_cols(self.rank, &self.subtorus)
    }

    /// `W = χ^*`: the `h × (h+1)` matrix with columns `η_k`.
    pub fn weight_matrix(&self) -> IntMatrix {
        IntMatrix::from_cols(self.subtorus_rank(), &self.weights)
    }

    pub fn validity(&self) -> ValidityReport {
        let b = self.subtorus_matrix();
        let bf = snf(&b).invariant_factors();
        let primitive_subtorus = bf.len() == b.cols() && bf.iter().all(One::is_one);
        let w = self.weight_matrix();
        let wf = snf(&w).invariant_factors();
        let faithful_weights = wf.len() == self.subtorus_rank() && wf.iter().all(One::is_one);
        ValidityReport {
            primitive_subtorus,
            faithful_weights,
            weight_factors: wf,
        }
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let r = self.validity();
        if !r.primitive_subtorus {
            return Err(ModelError::NonPrimitiveSubtorus);
        }
        if !r.faithful_weights {
            return Err(ModelError::NonFaithfulWeights(r.weight_factors));
        }
        Ok(())
    }

    /// Primitive generator of the kernel of `W`, sign chosen so that its
    /// first nonzero entry is positive.
    fn weight_relation(&self) -> Vec<Int> {
        let k = kernel_basis(&self.weight_matrix());
        let mut v = k.generators().col(0);
        if v.iter().find(|x| !x.is_zero()).is_some_and(Signed::is_negative) {
            v = v.iter().map(|x| -x).collect();
        }
        v
    }

    pub fn is_tall(&self) -> Result<bool, ModelError> {
        self.validate()?;
        let v = self.weight_relation();
        Ok(v.iter().all(|x| !x.is_negative()) || v.iter().all(|x| !x.is_positive()))
    }

    /// The exponents `ξ` of the defining monomial: the primitive nonnegative
    /// relation `Σ ξ_k η_k = 0`.
    pub fn defining_exponents(&self) -> Result<Vec<Int>, ModelError> {
        self.validate()?;
        let v = self.weight_relation();
        if v.iter().all(|x| !x.is_negative()) {
            Ok(v)
        } else if v.iter().all(|x| !x.is_positive()) {
            Ok(v.iter().map(|x| -x).collect())
        } else {
            Err(ModelError::NotTall)
        }
    }

    /// `h ≥ 1` and no weight vanishes.
    pub fn is_center_exceptional(&self) -> Result<bool, ModelError> {
        self.validate()?;
        Ok(self.subtorus_rank() >= 1 && self.weights.iter().all(|w| w.iter().any(|x| !x.is_zero())))
    }

    /// `(i_H^*)^{-1}(cone(η₀, …, η_h))` based at `base`.
    pub fn moment_cone_at(&self, base: &[Rational]) -> Result<HPolyhedron, ModelError> {
        self.validate()?;
        let n = self.rank;
        let h = self.subtorus_rank();
        if h == 0 {
            return Ok(HPolyhedron::whole(n));
        }
        let rays: Vec<Vec<Int>> = self
            .weights
            .iter()
            .filter(|w| w.iter().any(|x| !x.is_zero()))
            .map(|w| crate::exactla::primitive_part(w))
            .collect();
        let cone = VPolyhedron {
            dim: h,
            points: vec![vec![Rational::zero(); h]],
            rays,
            lineality: LatticeBasis::new(IntMatrix::zeros(h, 0)).expect("empty basis"),
        }
        .to_h()?;
        let b = self.subtorus_matrix();
        let pull = |c: &Ineq| -> Option<Ineq> {
            let a = b.mul_vec(&c.a);
            let off = crate::exactla::dot_mixed(&a, base);
            Ineq::new(a, off)
        };
        let ineqs = cone.ineqs().iter().filter_map(pull).collect();
        let eqs = cone.eqs().iter().filter_map(pull).collect();
        Ok(HPolyhedron::new(n, ineqs, eqs))
    }
}

impl ComplexityOneModel {
    pub fn label(&self) -> &ModelLabel {
        &self.label
    }

    pub fn base_point(&self) -> &[Rational] {
        &self.base
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        self.label.validate()
    }

    pub fn is_tall(&self) -> Result<bool, ModelError> {
        self.label.is_tall()
    }

    pub fn defining_exponents(&self) -> Result<Vec<Int>, ModelError> {
        self.label.defining_exponents()
    }

    pub fn is_center_exceptional(&self) -> Result<bool, ModelError> {
        self.label.is_center_exceptional()
    }

    pub fn moment_cone(&self) -> Result<HPolyhedron, ModelError> {
        self.label.moment_cone_at(&self.base)
    }

    pub fn g_lattices(&self) -> Result<GLattices, ModelError> {
        GLattices::of(&self.label)
    }

    /// The deterministic complementary circle, in `g_Z` coordinates.
    pub fn complementary_circle(&self) -> Result<Vec<Int>, ModelError> {
        Ok(self.g_lattices()?.complementary_circle()?)
    }

    pub fn sigma_section(&self) -> Result<SigmaSection, ModelError> {
        sigma::sigma_section(self, None)
    }

    /// DH function `β ↦ κ − ⟨σ(β), j⟩` of the truncation `Y_{j,κ}`.
    pub fn dh_truncation(&self, spec: &TruncationSpec) -> Result<crate::pwaffine::PiecewiseAffineFn, ModelError> {
        sigma::dh_truncation(self, spec)
    }
}

/// A complementary circle `j` (in `g_Z` coordinates) and a level `κ > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TruncationSpec {
    #[serde(with = "serde_util::int_vec")]
    pub j: Vec<Int>,
    #[serde(with = "serde_util::rational")]
    pub kappa: Rational,
}

/// Random valid tall model with `n ≤ max_rank`, `h ≤ min(n, 3)`, weight
/// entries in `[−3, 3]` and a base point with small rational coordinates.
pub fn random_tall_model<R: Rng>(rng: &mut R, max_rank: usize) -> ComplexityOneModel {
    let n = rng.gen_range(1..=max_rank);
    let h = rng.gen_range(0..=n.min(3));
    loop {
        let subtorus: Vec<Vec<Int>> = (0..h)
            .map(|_| (0..n).map(|_| Int::from(rng.gen_range(-2i64..=2))).collect())
            .collect();
        let weights: Vec<Vec<Int>> = (0..=h)
            .map(|_| (0..h).map(|_| Int::from(rng.gen_range(-3i64..=3))).collect())
            .collect();
        let Ok(label) = ModelLabel::new(n, subtorus, weights) else {
            continue;
        };
        if label.validate().is_err() || !label.is_tall().unwrap_or(false) {
            continue;
        }
        let base = (0..n)
            .map(|_| Rational::new(rng.gen_range(-6i64..=6).into(), rng.gen_range(1i64..=3).into()))
            .collect();
        return label.at(base).expect("base has the right length");
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::{int_vec, rat_vec};
    use crate::polyhedra::is_delzant_cone;

    pub(crate) fn circle_model() -> ComplexityOneModel {
        ModelLabel::from_i64(1, &[&[1]], &[&[1], &[-1]]).unwrap().at(rat_vec(&[0])).unwrap()
    }

    pub(crate) fn six_d_vertex() -> ComplexityOneModel {
        ModelLabel::from_i64(2, &[&[1, 0], &[0, 1]], &[&[-1, 0], &[0, -1], &[1, 1]])
            .unwrap()
            .at(rat_vec(&[1, 1]))
            .unwrap()
    }

    #[test]
    fn validity() {
        assert!(circle_model().validate().is_ok());
        let bad = ModelLabel::from_i64(1, &[&[1]], &[&[2], &[-2]]).unwrap();
        assert_eq!(bad.validate(), Err(ModelError::NonFaithfulWeights(vec![Int::from(2)])));
        let disc = ModelLabel::from_i64(2, &[&[2, 0]], &[&[1], &[-1]]).unwrap();
        assert_eq!(disc.validate(), Err(ModelError::NonPrimitiveSubtorus));
        assert!(ModelLabel::from_i64(1, &[&[1]], &[&[1]]).is_err());
    }

    #[test]
    fn tallness_and_exponents() {
        assert!(circle_model().is_tall().unwrap());
        assert_eq!(circle_model().defining_exponents().unwrap(), int_vec(&[1, 1]));
        let short = ModelLabel::from_i64(1, &[&[1]], &[&[1], &[1]]).unwrap();
        assert!(!short.is_tall().unwrap());
        assert_eq!(short.defining_exponents(), Err(ModelError::NotTall));
        let m = ModelLabel::from_i64(1, &[&[1]], &[&[2], &[-1]]).unwrap();
        assert_eq!(m.defining_exponents().unwrap(), int_vec(&[1, 2]));
        let v = six_d_vertex();
        assert!(v.is_tall().unwrap());
        assert_eq!(v.defining_exponents().unwrap(), int_vec(&[1, 1, 1]));
    }

    #[test]
    fn exceptional_centers() {
        let fixed = ModelLabel::from_i64(1, &[&[1]], &[&[1], &[0]]).unwrap();
        assert!(!fixed.is_center_exceptional().unwrap());
        assert!(circle_model().is_center_exceptional().unwrap());
        let trivial = ModelLabel::from_i64(1, &[], &[&[]]).unwrap();
        assert!(!trivial.is_center_exceptional().unwrap());
        assert_eq!(trivial.defining_exponents().unwrap(), int_vec(&[1]));
    }

    #[test]
    fn moment_cones() {
        assert!(circle_model().moment_cone().unwrap().ineqs().is_empty());
        let half = ModelLabel::from_i64(2, &[&[1, 0]], &[&[1], &[0]]).unwrap().at(rat_vec(&[0, 0])).unwrap();
        let c = half.moment_cone().unwrap();
        assert_eq!(c.ineqs(), &[Ineq::from_i64(&[1, 0], 0)]);
        let v = six_d_vertex().moment_cone().unwrap();
        assert!(v.ineqs().is_empty() && v.eqs().is_empty());
        assert!(is_delzant_cone(&c, &rat_vec(&[0, 0]), &LatticeBasis::standard(2)).unwrap());
    }

    #[test]
    fn json_shapes() {
        let m = circle_model();
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"{"rank":1,"subtorus":[[1]],"weights":[[1],[-1]],"base":["0"]}"#);
        let back: ComplexityOneModel = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
        assert!(serde_json::from_str::<ComplexityOneModel>(
            r#"{"rank":1,"subtorus":[[1]],"weights":[[1],[-1]],"base":["0"],"x":1}"#
        )
        .is_err());
        assert!(serde_json::from_str::<ComplexityOneModel>(
            r#"{"rank":1,"subtorus":[[1]],"weights":[[1]],"base":["0"]}"#
        )
        .is_err());
    }
}
