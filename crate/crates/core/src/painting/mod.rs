//! Paintings up to equivalence, read through homology, and the comparison
//! of classification records.
//!
//! Supported skeleton types are those whose painting classes are determined
//! by homology: contractible skeletons, loops (any genus up to one) and
//! spheres (genus zero, by degree; positive genus has a single class).

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactla::Int;
use crate::polyhedra::{HPolyhedron, PolyError};
use crate::pwaffine::{ae_equal, PiecewiseAffineFn, PwError};
use crate::serde_util;
use crate::skeleton::{betti, Betti, SkeletonComplex, SkeletonError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PaintingError {
    #[error("unsupported skeleton topology {0:?} for genus {1}")]
    UnsupportedTopology(Betti, usize),
    #[error("the paintings have genus {0} and {1}")]
    GenusMismatch(usize, usize),
    #[error("invalid painting: {0}")]
    Invalid(String),
    #[error(transparent)]
    Skeleton(#[from] SkeletonError),
}

/// A painting, given by its effect on homology.
///
/// `h1_map` has `2g` rows (a symplectic basis of `H₁(Σ)`) and one column per
/// generator of `H₁(S)`. `degree` is the degree of a sphere-like skeleton.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PaintingData {
    pub genus: usize,
    #[serde(default, with = "serde_util::int_vecs")]
    pub h1_map: Vec<Vec<Int>>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_int")]
    pub degree: Option<Int>,
}

mod opt_int {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::exactla::Int;

    pub fn serialize<S: Serializer>(x: &Option<Int>, s: S) -> Result<S::Ok, S::Error> {
        match x {
            Some(v) => crate::serde_util::int::serialize(v, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Int>, D::Error> {
        #[derive(Deserialize)]
        struct W(#[serde(with = "crate::serde_util::int")] Int);
        Ok(Option::<W>::deserialize(d)?.map(|w| w.0))
    }
}

/// Canonical class of a painting.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(tag = "kind", content = "value")]
pub enum PaintingInvariant {
    /// All paintings are equivalent.
    Trivial,
    /// Divisibility of the image of the loop in `H₁(T²)`.
    Gcd(#[serde(with = "serde_util::int")] Int),
    Degree(#[serde(with = "serde_util::int")] Int),
}

/// Homotopy-relevant shape of a skeleton.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Topology {
    pub betti: Betti,
    /// Largest cell dimension, `None` for the empty skeleton.
    pub max_dim: Option<usize>,
}

impl Topology {
    pub fn of(s: &SkeletonComplex) -> Result<Self, PaintingError> {
        let mut max_dim = None;
        for c in &s.cells {
            let d = c.carrier.affine_dim().map_err(SkeletonError::from)?;
            max_dim = max_dim.max(d);
        }
        Ok(Topology { betti: betti(s)?, max_dim })
    }

    fn is_contractible(&self) -> bool {
        self.betti == (Betti { b0: 1, b1: 0, b2_mod2: 0 }) && self.max_dim <= Some(1)
    }

    fn is_loop(&self) -> bool {
        self.betti == (Betti { b0: 1, b1: 1, b2_mod2: 0 }) && self.max_dim <= Some(1)
    }

    fn is_sphere(&self) -> bool {
        self.betti == Betti { b0: 1, b1: 0, b2_mod2: 1 }
    }
}

pub fn painting_invariant(t: &Topology, p: &PaintingData) -> Result<PaintingInvariant, PaintingError> {
    let unsupported = || PaintingError::UnsupportedTopology(t.betti, p.genus);
    if t.max_dim.is_none() || t.is_contractible() {
        return Ok(PaintingInvariant::Trivial);
    }
    if t.is_loop() {
        return match p.genus {
            0 => Ok(PaintingInvariant::Trivial),
            1 => {
                if p.h1_map.len() != 2 || p.h1_map.iter().any(|r| r.len() != 1) {
                    return Err(PaintingError::Invalid("genus one needs a 2×1 h1_map".into()));
                }
                Ok(PaintingInvariant::Gcd(p.h1_map[0][0].gcd(&p.h1_map[1][0])))
            }
            _ => Err(unsupported()),
        };
    }
    if t.is_sphere() {
        if p.genus > 0 {
            return Ok(PaintingInvariant::Trivial);
        }
        return match &p.degree {
            Some(d) => Ok(PaintingInvariant::Degree(d.clone())),
            None => Err(PaintingError::Invalid("a sphere-like skeleton needs a degree".into())),
        };
    }
    Err(unsupported())
}

/// Equivalence of two paintings of the same skeleton.
pub fn equivalent(t: &Topology, p1: &PaintingData, p2: &PaintingData) -> Result<bool, PaintingError> {
    if p1.genus != p2.genus {
        return Err(PaintingError::GenusMismatch(p1.genus, p2.genus));
    }
    Ok(painting_invariant(t, p1)? == painting_invariant(t, p2)?)
}

/// `(Δ, ρ, g, painting)` together with the skeleton the painting lives on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassificationRecord {
    pub delta: HPolyhedron,
    pub rho: PiecewiseAffineFn,
    pub genus: usize,
    pub skeleton: SkeletonComplex,
    pub painting: PaintingData,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    IsomorphicData,
    NotIsomorphic,
    Indeterminate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RecordComparison {
    pub verdict: Verdict,
    pub delta_equal: bool,
    pub rho_equal: bool,
    pub genus_equal: bool,
    pub skeleton_equal: bool,
    /// `None` when undecided.
    pub paintings_equivalent: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Cells match one to one with equal labels and equal images.
pub fn skeletons_isomorphic(a: &SkeletonComplex, b: &SkeletonComplex) -> Result<bool, PolyError> {
    if a.cells.len() != b.cells.len() {
        return Ok(false);
    }
    let ia: Vec<HPolyhedron> = a.cells.iter().map(|c| c.image()).collect::<Result<_, _>>()?;
    let ib: Vec<HPolyhedron> = b.cells.iter().map(|c| c.image()).collect::<Result<_, _>>()?;
    let mut used = vec![false; b.cells.len()];
    for (i, c) in a.cells.iter().enumerate() {
        let mut hit = None;
        for (j, d) in b.cells.iter().enumerate() {
            if !used[j] && c.label == d.label && ia[i].same_set(&ib[j])? {
                hit = Some(j);
                break;
            }
        }
        match hit {
            Some(j) => used[j] = true,
            None => return Ok(false),
        }
    }
    Ok(true)
}

fn rho_equal(a: &PiecewiseAffineFn, b: &PiecewiseAffineFn) -> Result<bool, PwError> {
    if a.dim() != b.dim() {
        return Ok(false);
    }
    ae_equal(a, b)
}

/// Compares the invariants that classify tall complexity-one spaces.
pub fn compare_records(r1: &ClassificationRecord, r2: &ClassificationRecord) -> RecordComparison {
    let delta_equal = r1.delta.dim() == r2.delta.dim() && r1.delta.same_set(&r2.delta).unwrap_or(false);
    let rho_equal = delta_equal && rho_equal(&r1.rho, &r2.rho).unwrap_or(false);
    let genus_equal = r1.genus == r2.genus && r1.painting.genus == r2.painting.genus;
    let skeleton_equal = skeletons_isomorphic(&r1.skeleton, &r2.skeleton).unwrap_or(false);
    let mut note = None;
    let paintings_equivalent = if !(skeleton_equal && genus_equal) {
        Some(false)
    } else {
        match Topology::of(&r1.skeleton).and_then(|t| equivalent(&t, &r1.painting, &r2.painting)) {
            Ok(b) => Some(b),
            Err(e) => {
                note = Some(e.to_string());
                None
            }
        }
    };
    let data_equal = delta_equal && rho_equal && genus_equal && skeleton_equal;
    let verdict = match (data_equal, paintings_equivalent) {
        (false, _) | (true, Some(false)) => Verdict::NotIsomorphic,
        (true, Some(true)) => Verdict::IsomorphicData,
        (true, None) => Verdict::Indeterminate,
    };
    RecordComparison {
        verdict,
        delta_equal,
        rho_equal,
        genus_equal,
        skeleton_equal,
        paintings_equivalent,
        note,
    }
}

impl PaintingData {
    pub fn genus_zero() -> Self {
        Self::default()
    }

    /// Genus one, the loop sent to `p·a + q·b`.
    pub fn torus_loop(p: i64, q: i64) -> Self {
        PaintingData {
            genus: 1,
            h1_map: vec![vec![Int::from(p)], vec![Int::from(q)]],
            degree: None,
        }
    }

    pub fn sphere(degree: i64) -> Self {
        PaintingData {
            genus: 0,
            h1_map: Vec::new(),
            degree: Some(Int::from(degree)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::{rat, LatticeBasis};
    use crate::pwaffine::combine;
    use crate::toricproj::build_projection;
    use crate::toricproj::tests::six_d;
    use proptest::prelude::*;

    fn loop_topology() -> Topology {
        Topology {
            betti: Betti { b0: 1, b1: 1, b2_mod2: 0 },
            max_dim: Some(1),
        }
    }

    fn sphere_topology() -> Topology {
        Topology {
            betti: Betti { b0: 1, b1: 0, b2_mod2: 1 },
            max_dim: Some(2),
        }
    }

    fn gcd_of(p: i64, q: i64) -> PaintingInvariant {
        PaintingInvariant::Gcd(Int::from(p).gcd(&Int::from(q)))
    }

    #[test]
    fn invariants() {
        let t = loop_topology();
        assert_eq!(painting_invariant(&t, &PaintingData::torus_loop(2, 4)).unwrap(), gcd_of(2, 0));
        assert_eq!(painting_invariant(&t, &PaintingData::torus_loop(0, 0)).unwrap(), gcd_of(0, 0));
        assert_eq!(painting_invariant(&t, &PaintingData::genus_zero()).unwrap(), PaintingInvariant::Trivial);
        let s = sphere_topology();
        assert_eq!(painting_invariant(&s, &PaintingData::sphere(-3)).unwrap(), PaintingInvariant::Degree(Int::from(-3)));
        assert!(painting_invariant(&s, &PaintingData::genus_zero()).is_err());
        let bad = Topology {
            betti: Betti { b0: 1, b1: 2, b2_mod2: 0 },
            max_dim: Some(1),
        };
        assert!(matches!(
            painting_invariant(&bad, &PaintingData::torus_loop(1, 0)),
            Err(PaintingError::UnsupportedTopology(..))
        ));
        let mut g2 = PaintingData::torus_loop(1, 0);
        g2.genus = 2;
        assert!(painting_invariant(&t, &g2).is_err());
    }

    #[test]
    fn equivalences() {
        let t = loop_topology();
        assert!(equivalent(&t, &PaintingData::torus_loop(1, 2), &PaintingData::torus_loop(2, 1)).unwrap());
        assert!(!equivalent(&t, &PaintingData::torus_loop(1, 0), &PaintingData::torus_loop(2, 0)).unwrap());
        assert!(equivalent(&t, &PaintingData::genus_zero(), &PaintingData::genus_zero()).unwrap());
        assert!(equivalent(&t, &PaintingData::genus_zero(), &PaintingData::torus_loop(1, 0)).is_err());
        let s = sphere_topology();
        assert!(!equivalent(&s, &PaintingData::sphere(1), &PaintingData::sphere(-1)).unwrap());
    }

    #[test]
    fn json_shape() {
        let p = PaintingData::torus_loop(2, -4);
        let j = serde_json::to_string(&p).unwrap();
        assert_eq!(j, r#"{"genus":1,"h1_map":[[2],[-4]]}"#);
        let back: PaintingData = serde_json::from_str(r#"{"genus":0,"h1_map":[],"degree":5}"#).unwrap();
        assert_eq!(back, PaintingData::sphere(5));
        assert!(serde_json::from_str::<PaintingData>(r#"{"genus":0,"colour":1}"#).is_err());
    }

    fn six_d_record(painting: PaintingData) -> ClassificationRecord {
        let b = build_projection(&six_d(), &LatticeBasis::standard(3)).unwrap();
        ClassificationRecord {
            delta: b.delta,
            rho: b.rho,
            genus: painting.genus,
            skeleton: b.skeleton,
            painting,
        }
    }

    #[test]
    fn records() {
        let a = six_d_record(PaintingData::torus_loop(1, 0));
        assert_eq!(compare_records(&a, &a).verdict, Verdict::IsomorphicData);

        let mut shifted = a.clone();
        let one = crate::pwaffine::PiecewiseAffineFn::constant(a.delta.clone(), rat(1));
        shifted.rho = combine(&a.rho, &one, &rat(1), &rat(1)).unwrap();
        let c = compare_records(&a, &shifted);
        assert_eq!(c.verdict, Verdict::NotIsomorphic);
        assert!(!c.rho_equal && c.delta_equal);

        let b = six_d_record(PaintingData::torus_loop(2, 2));
        let c = compare_records(&a, &b);
        assert_eq!(c.verdict, Verdict::NotIsomorphic);
        assert_eq!(c.paintings_equivalent, Some(false));
        assert_eq!(compare_records(&a, &six_d_record(PaintingData::torus_loop(3, 5))).verdict, Verdict::IsomorphicData);

        let g0 = six_d_record(PaintingData::genus_zero());
        assert_eq!(compare_records(&g0, &g0.clone()).verdict, Verdict::IsomorphicData);
        assert_eq!(compare_records(&g0, &a).verdict, Verdict::NotIsomorphic);
    }

    fn apply_word(word: &[u8], mut v: (i64, i64)) -> (i64, i64) {
        for &w in word {
            v = match w {
                0 => (v.0 + v.1, v.1),
                1 => (v.0 - v.1, v.1),
                2 => (-v.1, v.0),
                _ => (v.1, -v.0),
            };
        }
        v
    }

    proptest! {
        #[test]
        fn sl2z_invariance(p in -20i64..20, q in -20i64..20, word in prop::collection::vec(0u8..4, 0..=6)) {
            let t = loop_topology();
            let (p2, q2) = apply_word(&word, (p, q));
            prop_assert_eq!(
                painting_invariant(&t, &PaintingData::torus_loop(p, q)).unwrap(),
                painting_invariant(&t, &PaintingData::torus_loop(p2, q2)).unwrap()
            );
        }

        #[test]
        fn equivalence_relation(v in prop::collection::vec((-6i64..6, -6i64..6), 3)) {
            let t = loop_topology();
            let ps: Vec<PaintingData> = v.iter().map(|&(p, q)| PaintingData::torus_loop(p, q)).collect();
            let e = |i: usize, j: usize| equivalent(&t, &ps[i], &ps[j]).unwrap();
            prop_assert!(e(0, 0));
            prop_assert_eq!(e(0, 1), e(1, 0));
            if e(0, 1) && e(1, 2) {
                prop_assert!(e(0, 2));
            }
        }
    }
}
