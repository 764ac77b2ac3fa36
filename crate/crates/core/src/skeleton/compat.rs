use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use super::{SkeletonComplex, SkeletonError};
use crate::exactla::{Int, LatticeBasis, Rational};
use crate::model::TruncationSpec;
use crate::polyhedra::{cone_equal, face_lattice, tangent_cone, HPolyhedron};
use crate::pwaffine::{combine, is_integral_affine_near, sum, AffineGerm, PiecewiseAffineFn};
use crate::serde_util;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CompatKind {
    Delta,
    Rho,
}

/// Tangent cone of `Δ` and moment cone of a fiber point that disagree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConeWitness {
    pub cell: usize,
    pub tangent_cone: HPolyhedron,
    pub moment_cone: HPolyhedron,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckpointRecord {
    #[serde(with = "serde_util::rational_vec")]
    pub point: Vec<Rational>,
    /// Cells of the (merged) fiber over the point.
    pub fiber: Vec<usize>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub germ: Option<AffineGerm>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<ConeWitness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl CheckpointRecord {
    fn new(point: Vec<Rational>, fiber: Vec<usize>) -> Self {
        CheckpointRecord {
            point,
            fiber,
            pass: true,
            germ: None,
            counterexample: None,
            reason: None,
        }
    }

    fn fail(mut self, reason: impl Into<String>) -> Self {
        self.pass = false;
        self.reason = Some(reason.into());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompatReport {
    pub kind: CompatKind,
    pub passed: bool,
    pub checkpoints: Vec<CheckpointRecord>,
}

impl CompatReport {
    fn from_records(kind: CompatKind, checkpoints: Vec<CheckpointRecord>) -> Self {
        CompatReport {
            kind,
            passed: checkpoints.iter().all(|c| c.pass),
            checkpoints,
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckpointRecord> {
        self.checkpoints.iter().filter(|c| !c.pass)
    }
}

/// Which truncation of each fiber model to subtract: level `kappa` and
/// complementary circle `j₀ + i_T(shift)`, `j₀` the deterministic one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncationChoice {
    pub kappa: Rational,
    pub shift: Vec<Int>,
}

impl Default for TruncationChoice {
    fn default() -> Self {
        TruncationChoice {
            kappa: Rational::from_integer(1.into()),
            shift: Vec::new(),
        }
    }
}

fn add_relints(p: &HPolyhedron, out: &mut BTreeSet<Vec<Rational>>) -> Result<(), SkeletonError> {
    if p.is_empty() {
        return Ok(());
    }
    let (_, faces) = face_lattice(p)?;
    out.extend(faces.into_iter().map(|f| f.relint_point));
    Ok(())
}

/// The finite set of points at which the germ conditions are decided: one
/// relative-interior point of every face of each cell image, of its
/// intersection with `Δ`, and (when `rho` is given) of pairwise
/// intersections of cell images and of `ρ` cells with `Δ` and cell images.
pub fn checkpoints(
    s: &SkeletonComplex,
    delta: &HPolyhedron,
    rho: Option<&PiecewiseAffineFn>,
) -> Result<Vec<Vec<Rational>>, SkeletonError> {
    let images = s
        .cells
        .iter()
        .map(|c| c.image())
        .collect::<Result<Vec<_>, _>>()?;
    let mut pieces: Vec<HPolyhedron> = Vec::new();
    for im in &images {
        pieces.push(im.clone());
        pieces.push(im.intersect(delta));
    }
    if let Some(rho) = rho {
        for i in 0..images.len() {
            for j in i + 1..images.len() {
                pieces.push(images[i].intersect(&images[j]).intersect(delta));
            }
        }
        for c in rho.cells() {
            let k = c.carrier.intersect(delta);
            for im in &images {
                pieces.push(k.intersect(im));
            }
            pieces.push(k);
        }
    }
    let found = pieces
        .par_iter()
        .map(|p| {
            let mut out = BTreeSet::new();
            add_relints(p, &mut out).map(|_| out)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let all: BTreeSet<Vec<Rational>> = found.into_iter().flatten().collect();
    Ok(all.into_iter().filter(|a| !s.is_excluded(a)).collect())
}

fn delta_at(s: &SkeletonComplex, delta: &HPolyhedron, alpha: Vec<Rational>) -> CheckpointRecord {
    let fiber = s.fiber(&alpha);
    let mut rec = CheckpointRecord::new(alpha, fiber.iter().map(|f| f.cell).collect());
    if fiber.is_empty() {
        return rec;
    }
    if !delta.contains(&rec.point) {
        return rec.fail("skeleton point outside delta");
    }
    let tc = match tangent_cone(delta, &rec.point) {
        Ok(tc) => tc,
        Err(e) => return rec.fail(e.to_string()),
    };
    for f in &fiber {
        let mc = match f.label.moment_cone_at(&rec.point) {
            Ok(mc) => mc,
            Err(e) => return rec.fail(e.to_string()),
        };
        match cone_equal(&tc, &mc) {
            Ok(true) => {}
            Ok(false) => {
                rec.counterexample = Some(ConeWitness {
                    cell: f.cell,
                    tangent_cone: tc,
                    moment_cone: mc,
                });
                return rec.fail("tangent cone differs from moment cone");
            }
            Err(e) => return rec.fail(e.to_string()),
        }
    }
    rec
}

/// Near every skeleton point `s`, `Δ` agrees with the moment cone `C_s`.
pub fn check_delta_compat(s: &SkeletonComplex, delta: &HPolyhedron) -> Result<CompatReport, SkeletonError> {
    let pts = checkpoints(s, delta, None)?;
    let recs = pts.into_par_iter().map(|a| delta_at(s, delta, a)).collect();
    Ok(CompatReport::from_records(CompatKind::Delta, recs))
}

fn truncation_near(
    label: &crate::model::ModelLabel,
    alpha: &[Rational],
    choice: &TruncationChoice,
) -> Result<PiecewiseAffineFn, String> {
    let m = label.at(alpha.to_vec()).map_err(|e| e.to_string())?;
    let lat = m.g_lattices().map_err(|e| e.to_string())?;
    let mut j = lat.complementary_circle().map_err(|e| e.to_string())?;
    if !choice.shift.is_empty() {
        for (a, b) in j.iter_mut().zip(lat.i_t(&choice.shift)) {
            *a += b;
        }
    }
    m.dh_truncation(&TruncationSpec {
        j,
        kappa: choice.kappa.clone(),
    })
    .map_err(|e| e.to_string())
}

fn rho_at(
    s: &SkeletonComplex,
    rho: &PiecewiseAffineFn,
    lattice: &LatticeBasis,
    choice: &TruncationChoice,
    alpha: Vec<Rational>,
) -> CheckpointRecord {
    let fiber = s.fiber(&alpha);
    let rec = CheckpointRecord::new(alpha, fiber.iter().map(|f| f.cell).collect());
    let local = match rho.restrict_near(&rec.point) {
        Ok(l) => l,
        Err(e) => return rec.fail(e.to_string()),
    };
    let f = if fiber.is_empty() {
        local
    } else {
        let mut parts = Vec::with_capacity(fiber.len());
        for p in &fiber {
            match truncation_near(&p.label, &rec.point, choice) {
                Ok(t) => parts.push(t),
                Err(e) => return rec.fail(e),
            }
        }
        let one = Rational::from_integer(1.into());
        match sum(&parts).and_then(|t| combine(&local, &t, &one, &-one.clone())) {
            Ok(f) => f,
            Err(e) => return rec.fail(e.to_string()),
        }
    };
    match is_integral_affine_near(&f, &rec.point, lattice) {
        Ok(g) => CheckpointRecord { germ: Some(g), ..rec },
        Err(e) => rec.fail(e.to_string()),
    }
}

/// `ρ − Σ_{s ∈ π^{-1}(α)} ρ_s` is integral affine near every checkpoint,
/// with `ρ_s` the truncation at level 1 by the deterministic circle.
pub fn check_rho_compat(
    s: &SkeletonComplex,
    delta: &HPolyhedron,
    rho: &PiecewiseAffineFn,
    lattice: &LatticeBasis,
) -> Result<CompatReport, SkeletonError> {
    check_rho_compat_with(s, delta, rho, lattice, &TruncationChoice::default())
}

pub fn check_rho_compat_with(
    s: &SkeletonComplex,
    delta: &HPolyhedron,
    rho: &PiecewiseAffineFn,
    lattice: &LatticeBasis,
    choice: &TruncationChoice,
) -> Result<CompatReport, SkeletonError> {
    let pts = checkpoints(s, delta, Some(rho))?;
    let recs = pts
        .into_par_iter()
        .filter(|a| delta.contains(a))
        .map(|a| rho_at(s, rho, lattice, choice, a))
        .collect();
    Ok(CompatReport::from_records(CompatKind::Rho, recs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::{rat, rat_vec, ratio};
    use crate::model::ModelLabel;
    use crate::polyhedra::Ineq;
    use crate::pwaffine::AffineCell;
    use crate::skeleton::tests::segment;
    use crate::skeleton::SkeletonCell;

    fn square() -> HPolyhedron {
        HPolyhedron::cuboid(&rat_vec(&[-3, -2]), &rat_vec(&[3, 2]))
    }

    #[test]
    fn empty_skeleton() {
        let s = SkeletonComplex::empty();
        assert!(check_delta_compat(&s, &square()).unwrap().passed);
        let rho = PiecewiseAffineFn::constant(square(), rat(1));
        let r = check_rho_compat(&s, &square(), &rho, &LatticeBasis::standard(2)).unwrap();
        assert!(r.passed);
        assert!(!r.checkpoints.is_empty());
    }

    #[test]
    fn half_plane_label_over_interior_fails() {
        let label = ModelLabel::from_i64(2, &[&[1, 0], &[0, 1]], &[&[1, 0], &[-1, 0], &[0, 1]]).unwrap();
        assert!(label.is_tall().unwrap());
        let s = SkeletonComplex {
            cells: vec![SkeletonCell::embedded(segment(&[0, 0], &[0, 0]), label)],
            ..Default::default()
        };
        let r = check_delta_compat(&s, &square()).unwrap();
        assert!(!r.passed);
        let w = r.failures().next().unwrap().counterexample.clone().unwrap();
        assert_eq!(w.tangent_cone, HPolyhedron::whole(2));
        assert!(!w.moment_cone.ineqs().is_empty());
        let edge = ModelLabel::from_i64(2, &[&[1, 0]], &[&[1], &[-1]]).unwrap();
        let ok = SkeletonComplex {
            cells: vec![SkeletonCell::embedded(segment(&[1, -1], &[1, 1]), edge)],
            ..Default::default()
        };
        assert!(check_delta_compat(&ok, &square()).unwrap().passed);
    }

    #[test]
    fn kink_without_skeleton_fails() {
        let d = square();
        let left = d.with_ineqs([Ineq::from_i64(&[-1, 0], 0)]);
        let right = d.with_ineqs([Ineq::from_i64(&[1, 0], 0)]);
        let rho = PiecewiseAffineFn::new(
            2,
            vec![
                AffineCell { carrier: left, slope: rat_vec(&[0, 0]), constant: rat(4) },
                AffineCell { carrier: right, slope: rat_vec(&[-1, 0]), constant: rat(4) },
            ],
            d.clone(),
        );
        let r = check_rho_compat(&SkeletonComplex::empty(), &d, &rho, &LatticeBasis::standard(2)).unwrap();
        assert!(!r.passed);
        assert!(r.failures().all(|c| c.point[0] == rat(0)));
        // a skeleton edge along the kink with the matching label repairs it
        let edge = ModelLabel::from_i64(2, &[&[1, 0]], &[&[-1], &[1]]).unwrap();
        let s = SkeletonComplex {
            cells: vec![SkeletonCell::embedded(segment(&[0, -2], &[0, 2]), edge)],
            ..Default::default()
        };
        let r = check_rho_compat(&s, &d, &rho, &LatticeBasis::standard(2)).unwrap();
        assert!(r.passed, "{:?}", r.failures().collect::<Vec<_>>());
        let r2 = check_rho_compat_with(
            &s,
            &d,
            &rho,
            &LatticeBasis::standard(2),
            &TruncationChoice { kappa: ratio(2, 1), shift: vec![Int::from(1), Int::from(-1)] },
        )
        .unwrap();
        assert!(r2.passed);
    }
}
