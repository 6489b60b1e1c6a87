//! Splitting numbers, splitting ratio, splitting dimension and splitting
//! prime of an F-split seminormal monoid algebra.
//!
//! Everything is read off the F-pure face `D_S`, the intersection of all
//! RUFs, and the half-open region `P = {x : 0 ≤ ⟨x, v_ρ⟩ < 1}`:
//! `a_e = #((1/q)M_{D_S} ∩ P ∩ D_S)` and the ratio is the volume of
//! `P ∩ D_S` measured against `M_{D_S}`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;
use thiserror::Error;

use crate::cartier::FaceUnionIdeal;
use crate::cone::FaceId;
use crate::frac::format_ratio;
use crate::linalg::{dot, IntVector, LinalgError};
use crate::monoid::SeminormalMonoid;
use crate::points::lattice_points_in_box;
use crate::polytope::box_polytope_volume;
use crate::prime::Prime;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantsError {
    #[error("k[S] is not F-split at p={prime}: p-face {face}")]
    NotFSplit { prime: u64, face: String },
    #[error("p^e does not fit in a machine integer")]
    Overflow,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

fn require_f_split(s: &SeminormalMonoid, p: Prime) -> Result<(), InvariantsError> {
    match s.classify(p).p_faces().first() {
        Some(&d) => Err(InvariantsError::NotFSplit { prime: p.get(), face: s.cone().face_label(d) }),
        None => Ok(()),
    }
}

/// The intersection of all RUFs, the cone included.
pub fn fpure_face(s: &SeminormalMonoid) -> FaceId {
    let cone = s.cone();
    s.rufs().iter().fold(cone.top(), |acc, &d| cone.meet(acc, d))
}

/// `a_e = #{w ∈ M_{D_S} : 0 ≤ ⟨w, v_ρ⟩ ≤ q - 1}`.
pub fn splitting_number(s: &SeminormalMonoid, p: Prime, e: u32) -> Result<u64, InvariantsError> {
    require_f_split(s, p)?;
    let q = p.power(e).ok_or(InvariantsError::Overflow)?;
    let d = fpure_face(s);
    let points = lattice_points_in_box(s.lattice(d), s.cone().dual_rays(), 0, q - 1)?;
    Ok(points.len() as u64)
}

/// Volume of `{x ∈ ⟨D⟩ : 0 ≤ ⟨x, v_ρ⟩ ≤ 1}` in coordinates of a basis of
/// `M ∩ ⟨D⟩`.
fn face_box_volume(s: &SeminormalMonoid, face: FaceId) -> BigRational {
    let f = &s.cone().faces()[face];
    let basis = f.lattice.basis();
    let functionals: Vec<IntVector> = s
        .cone()
        .dual_rays()
        .iter()
        .map(|v| basis.iter().map(|b| dot(b, v) as i64).collect::<IntVector>())
        .filter(|g| g.iter().any(|&x| x != 0))
        .collect();
    box_polytope_volume(&functionals, f.dim)
}

/// `r_F = Vol_{M ∩ ⟨D_S⟩}(P ∩ D_S) / [M ∩ ⟨D_S⟩ : M_{D_S}]`.
pub fn splitting_ratio(s: &SeminormalMonoid, p: Prime) -> Result<BigRational, InvariantsError> {
    require_f_split(s, p)?;
    let d = fpure_face(s);
    let index = s.quotient(d).index().ok_or(LinalgError::InfiniteQuotient)?;
    Ok(face_box_volume(s, d) / BigRational::from_integer(BigInt::from(index)))
}

pub fn splitting_dimension(s: &SeminormalMonoid, p: Prime) -> Result<usize, InvariantsError> {
    require_f_split(s, p)?;
    Ok(s.cone().faces()[fpure_face(s)].dim)
}

/// The splitting prime `I_{D_S}` with the generators of `S` off `D_S`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplittingPrime {
    pub ideal: FaceUnionIdeal,
    pub generators: Vec<IntVector>,
}

pub fn splitting_prime(s: &SeminormalMonoid, p: Prime) -> Result<SplittingPrime, InvariantsError> {
    require_f_split(s, p)?;
    let d = fpure_face(s);
    let mut generators: Vec<IntVector> =
        s.hilbert_basis().iter().filter(|g| !s.cone().face_contains(d, g)).cloned().collect();
    generators.sort();
    Ok(SplittingPrime { ideal: FaceUnionIdeal::new(s.cone(), [d]), generators })
}

/// F-signature of the normalization: the volume of `P` against `M`.
pub fn normalization_signature(s: &SeminormalMonoid) -> BigRational {
    face_box_volume(s, s.cone().top())
}

pub fn ratio_bound_check(s: &SeminormalMonoid, p: Prime) -> Result<bool, InvariantsError> {
    Ok(splitting_ratio(s, p)? <= normalization_signature(s))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvergenceRow {
    pub e: u32,
    pub a_e: u64,
    /// `a_e / p^{eδ}`.
    pub normalized: BigRational,
}

pub fn convergence_probe(s: &SeminormalMonoid, p: Prime, e_max: u32) -> Result<Vec<ConvergenceRow>, InvariantsError> {
    let delta = splitting_dimension(s, p)? as u32;
    (1..=e_max)
        .map(|e| {
            let a_e = splitting_number(s, p, e)?;
            let scale = BigInt::from(p.get()).pow(e * delta);
            let normalized = BigRational::new(BigInt::from(a_e), scale);
            Ok(ConvergenceRow { e, a_e, normalized })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FaceReport {
    pub key: Vec<usize>,
    pub label: String,
}

impl FaceReport {
    pub fn new(s: &SeminormalMonoid, face: FaceId) -> Self {
        FaceReport { key: s.cone().face_key(face).to_vec(), label: s.cone().face_label(face) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SplittingReport {
    pub prime: u64,
    pub f_split: bool,
    pub fpure_face: FaceReport,
    pub delta: usize,
    pub splitting_prime_generators: Vec<IntVector>,
    /// `e ↦ a_e`.
    pub a_e_table: BTreeMap<u32, u64>,
    /// `e ↦ a_e / p^{eδ}` as `num/den`.
    pub normalized: BTreeMap<u32, String>,
    pub ratio: String,
    pub normalization_signature: String,
}

pub fn splitting_report(s: &SeminormalMonoid, p: Prime, e_max: u32) -> Result<SplittingReport, InvariantsError> {
    let d = fpure_face(s);
    let rows = convergence_probe(s, p, e_max)?;
    Ok(SplittingReport {
        prime: p.get(),
        f_split: true,
        fpure_face: FaceReport::new(s, d),
        delta: splitting_dimension(s, p)?,
        splitting_prime_generators: splitting_prime(s, p)?.generators,
        a_e_table: rows.iter().map(|r| (r.e, r.a_e)).collect(),
        normalized: rows.iter().map(|r| (r.e, format_ratio(&r.normalized))).collect(),
        ratio: format_ratio(&splitting_ratio(s, p)?),
        normalization_signature: format_ratio(&normalization_signature(s)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn whitney() {
        let s = catalog::whitney();
        let x_axis = s.cone().face_by_zero_set(&[1]).unwrap();
        assert_eq!(fpure_face(&s), x_axis);
        assert_eq!(splitting_number(&s, p(3), 1).unwrap(), 2);
        assert_eq!(splitting_number(&s, p(3), 2).unwrap(), 5);
        assert_eq!(splitting_ratio(&s, p(3)).unwrap(), r(1, 2));
        assert_eq!(splitting_dimension(&s, p(3)).unwrap(), 1);
        assert_eq!(splitting_prime(&s, p(3)).unwrap().generators, vec![vec![0, 1], vec![1, 1]]);
        assert_eq!(normalization_signature(&s), r(1, 1));
        assert!(ratio_bound_check(&s, p(3)).unwrap());
        let table: Vec<BigRational> = convergence_probe(&s, p(3), 4).unwrap().into_iter().map(|r| r.normalized).collect();
        assert_eq!(table, vec![r(2, 3), r(5, 9), r(14, 27), r(41, 81)]);
        assert!(matches!(splitting_ratio(&s, p(2)), Err(InvariantsError::NotFSplit { prime: 2, .. })));
    }

    #[test]
    fn quadrant_and_family() {
        let q = catalog::quadrant();
        assert_eq!(fpure_face(&q), q.cone().top());
        assert_eq!(splitting_number(&q, p(3), 2).unwrap(), 81);
        assert_eq!(splitting_dimension(&q, p(5)).unwrap(), 2);
        assert!(splitting_prime(&q, p(5)).unwrap().generators.is_empty());
        for n in 2..=5 {
            let s = catalog::s_n(n);
            let prime = if n == 3 { p(5) } else { p(3) };
            assert_eq!(splitting_ratio(&s, prime).unwrap(), r(1, n));
            assert_eq!(normalization_signature(&s), r(1, 1));
        }
        let two = catalog::s_n(2);
        let a: Vec<u64> = convergence_probe(&two, p(3), 3).unwrap().iter().map(|r| r.a_e).collect();
        assert_eq!(a, vec![2, 5, 14]);
    }

    #[test]
    fn cube() {
        let s = catalog::cube();
        let d = fpure_face(&s);
        assert_eq!(s.cone().face_label(d), "⟨(0,0,1)⟩");
        assert_eq!(splitting_ratio(&s, p(3)).unwrap(), r(1, 1));
        assert_eq!(normalization_signature(&s), r(1, 1));
    }

    #[test]
    fn coordinate_face_dimensions() {
        for d in 1..=2 {
            let s = catalog::coordinate_face(3, d, 3);
            assert_eq!(splitting_dimension(&s, p(2)).unwrap(), d);
        }
    }
}
