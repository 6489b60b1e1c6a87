//! The maps `π_a : F^e_*R → R`, `x^u ↦ x^{a+u}` (zero when `a+u ∉ M`).
//!
//! [`HomChecker`] decides whether `π_a` is an `R`-linear map into `R` from
//! the face data of the monoid. [`Oracle`] decides the same question by
//! brute force from the defining containment `(a + (1/q)S) ∩ M ⊆ S`, which
//! makes it a useful independent check.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;
use std::fmt;

use thiserror::Error;

use crate::cone::FaceId;
use crate::frac::FracPoint;
use crate::linalg::{dot, p_torsion_exponent, prime_to_p_saturation, IntVector, LinalgError, Sublattice};
use crate::monoid::SeminormalMonoid;
use crate::points::{lattice_points_in_box, lattice_points_in_ranges};
use crate::prime::Prime;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrobError {
    #[error("level e={e} is below e_min={e_min}")]
    LevelTooSmall { e: u32, e_min: u32 },
    #[error("points live at different levels ({0} and {1})")]
    LevelMismatch(u32, u32),
    #[error("points use different primes ({0} and {1})")]
    PrimeMismatch(u64, u64),
    #[error("point has rank {found}, expected {expected}")]
    RankMismatch { expected: usize, found: usize },
    #[error("π_a is not a homomorphism for a = {0}")]
    NotAHom(String),
    #[error("p^e does not fit in a machine integer")]
    Overflow,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Strict,
    ConditionsOnly,
}

/// The first condition of the criterion that fails.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailingCondition {
    /// `⟨a, v_ρ⟩ ≤ -1` for this dual ray.
    Normalization { ray: usize },
    /// `a ∈ ⟨D⟩` but `a ∉ (1/q)M_D`, for `D` not a p-face.
    PSatFail { face: FaceId },
    /// `a ∈ (1/q)~M_D` for a p-face `D`.
    PUnsatFail { face: FaceId },
    /// `a ∉ ⟨D⟩` and `a` pairs non-positively with all of `D*`.
    StarFail { face: FaceId },
}

impl FailingCondition {
    pub fn code(&self) -> &'static str {
        match self {
            FailingCondition::Normalization { .. } => "Normalization",
            FailingCondition::PSatFail { .. } => "PSatFail",
            FailingCondition::PUnsatFail { .. } => "PUnsatFail",
            FailingCondition::StarFail { .. } => "StarFail",
        }
    }

    pub fn describe(&self, s: &SeminormalMonoid) -> String {
        match *self {
            FailingCondition::Normalization { ray } => {
                format!("Normalization({})", crate::linalg::format_vector(&s.cone().dual_rays()[ray]))
            }
            FailingCondition::PSatFail { face }
            | FailingCondition::PUnsatFail { face }
            | FailingCondition::StarFail { face } => format!("{}({})", self.code(), s.cone().face_label(face)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HomVerdict {
    pub failing_condition: Option<FailingCondition>,
}

impl HomVerdict {
    pub fn is_hom(&self) -> bool {
        self.failing_condition.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleVerdict {
    Refuted { witness: FracPoint },
    ConfirmedOnBox { radius: i64 },
}

impl OracleVerdict {
    pub fn is_refuted(&self) -> bool {
        matches!(self, OracleVerdict::Refuted { .. })
    }
}

impl fmt::Display for OracleVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleVerdict::Refuted { witness } => write!(f, "refuted: u={witness}"),
            OracleVerdict::ConfirmedOnBox { radius } => write!(f, "confirmed on box {radius}"),
        }
    }
}

/// `1 + max_D t_D` where `p^{t_D}` is the largest `p`-power order in
/// `(M ∩ ⟨D⟩)/M_D`.
pub fn e_min(s: &SeminormalMonoid, p: Prime) -> u32 {
    s.cone()
        .faces()
        .iter()
        .map(|f| p_torsion_exponent(s.quotient(f.id), p).expect("quotients are finite"))
        .max()
        .unwrap_or(0)
        + 1
}

struct RufData {
    face: FaceId,
    p_face: bool,
    /// `M_D`, or `~M_D` for a p-face.
    lattice: Sublattice,
}

/// The criterion precomputed for one monoid, prime and level.
pub struct HomChecker<'a> {
    s: &'a SeminormalMonoid,
    p: Prime,
    e: u32,
    q: i64,
    rufs: Vec<RufData>,
}

impl<'a> HomChecker<'a> {
    pub fn new(s: &'a SeminormalMonoid, p: Prime, e: u32, mode: Mode) -> Result<Self, FrobError> {
        let e_min = e_min(s, p);
        if mode == Mode::Strict && e < e_min {
            return Err(FrobError::LevelTooSmall { e, e_min });
        }
        let q = p.power(e).ok_or(FrobError::Overflow)?;
        let class = s.classify(p);
        let cone = s.cone();
        let p_faces = class.p_faces();
        let mut rufs = Vec::new();
        for &d in s.rufs() {
            if p_faces.iter().any(|&f| f != d && cone.is_subface(d, f)) {
                continue;
            }
            let p_face = class.faces[d].p_face;
            let lattice = if p_face {
                prime_to_p_saturation(&cone.faces()[d].lattice, s.lattice(d), p)?
            } else {
                s.lattice(d).clone()
            };
            rufs.push(RufData { face: d, p_face, lattice });
        }
        Ok(HomChecker { s, p, e, q, rufs })
    }

    pub fn level(&self) -> u32 {
        self.e
    }

    /// Conditions are checked in order: the dual rays, then the RUFs by
    /// increasing face id.
    pub fn check(&self, a: &FracPoint) -> Result<HomVerdict, FrobError> {
        let a = self.align(a)?;
        let na = a.numerator();
        let cone = self.s.cone();
        let fail = |c| Ok(HomVerdict { failing_condition: Some(c) });
        for (ray, v) in cone.dual_rays().iter().enumerate() {
            if dot(na, v) <= -(self.q as i128) {
                return fail(FailingCondition::Normalization { ray });
            }
        }
        for r in &self.rufs {
            let face = r.face;
            if cone.faces()[face].span_contains(na) {
                let inside = r.lattice.contains(na);
                if !r.p_face && !inside {
                    return fail(FailingCondition::PSatFail { face });
                }
                if r.p_face && inside {
                    return fail(FailingCondition::PUnsatFail { face });
                }
            } else if !cone.star_positive(face, na) {
                return fail(FailingCondition::StarFail { face });
            }
        }
        Ok(HomVerdict { failing_condition: None })
    }

    fn align(&self, a: &FracPoint) -> Result<FracPoint, FrobError> {
        check_point(self.s, self.p, a)?;
        a.at_level(self.e).ok_or(FrobError::LevelMismatch(a.level(), self.e))
    }

    /// All `a` with `π_a` a hom and `|⟨q·a, v_ρ⟩| ≤ radius` for every ray.
    pub fn hom_points(&self, radius: i64) -> Result<Vec<FracPoint>, FrobError> {
        let mut out = Vec::new();
        for na in height_box(self.s, -radius, radius)? {
            let a = FracPoint::new(na, self.e, self.p);
            if self.check(&a)?.is_hom() {
                out.push(a);
            }
        }
        Ok(out)
    }
}

fn check_point(s: &SeminormalMonoid, p: Prime, a: &FracPoint) -> Result<(), FrobError> {
    if a.prime() != p {
        return Err(FrobError::PrimeMismatch(a.prime().get(), p.get()));
    }
    if a.rank() != s.rank() {
        return Err(FrobError::RankMismatch { expected: s.rank(), found: a.rank() });
    }
    Ok(())
}

/// Integer points with all heights in `[lo, hi]`.
pub fn height_box(s: &SeminormalMonoid, lo: i64, hi: i64) -> Result<Vec<IntVector>, LinalgError> {
    lattice_points_in_box(&Sublattice::full(s.rank()), s.cone().dual_rays(), lo, hi)
}

/// Decides whether `π_a ∈ Hom(F^e_*R, R)`; `a` is brought to level `e`.
pub fn is_hom(s: &SeminormalMonoid, p: Prime, e: u32, a: &FracPoint, mode: Mode) -> Result<HomVerdict, FrobError> {
    HomChecker::new(s, p, e, mode)?.check(a)
}

/// The integer points `m = a + u` with `u ∈ (1/q)M` and
/// `0 ≤ ⟨u, v_ρ⟩ ≤ radius` for every dual ray, sorted lexicographically.
///
/// These are the candidate images `π_a(x^u)` over the height box; whether
/// `u ∈ (1/q)S` is left to the caller.
pub fn translates(s: &SeminormalMonoid, a: &FracPoint, radius: i64) -> Result<Vec<IntVector>, FrobError> {
    let ranges = translate_ranges(s, a, radius)?;
    Ok(lattice_points_in_ranges(&Sublattice::full(s.rank()), s.cone().dual_rays(), &ranges)?)
}

fn translate_ranges(s: &SeminormalMonoid, a: &FracPoint, radius: i64) -> Result<Vec<(i64, i64)>, FrobError> {
    let q = a.denominator() as i128;
    s.cone()
        .dual_rays()
        .iter()
        .map(|v| {
            let h = dot(a.numerator(), v);
            // ⌈h/q⌉ ≤ ⟨m, v⟩ ≤ ⌊h/q + radius⌋
            let lo = -((-h).div_euclid(q));
            let hi = (h + q * radius as i128).div_euclid(q);
            Ok((i64::try_from(lo).map_err(|_| FrobError::Overflow)?, i64::try_from(hi).map_err(|_| FrobError::Overflow)?))
        })
        .collect()
}

/// `u = m - a` at the level of `a`, returned as `q·u`.
fn scaled_difference(m: &[i64], a: &FracPoint) -> Option<IntVector> {
    let q = a.denominator();
    m.iter().zip(a.numerator()).map(|(&x, &y)| x.checked_mul(q)?.checked_sub(y)).collect()
}

/// Brute-force test of `(a + (1/q)S) ∩ M ⊆ S` over `u ∈ (1/q)S` with
/// `⟨u, v_ρ⟩ ≤ radius` for every dual ray.
///
/// Candidates `m = a + u ∈ M` are scanned in lexicographic order with
/// `u = 0` deferred to the end, so the reported witness is the least nonzero
/// one when any exists.
pub struct Oracle<'a> {
    s: &'a SeminormalMonoid,
    p: Prime,
    e: u32,
    radius: i64,
    cache: RefCell<HashMap<Vec<(i64, i64)>, Rc<Vec<IntVector>>>>,
}

impl<'a> Oracle<'a> {
    pub fn new(s: &'a SeminormalMonoid, p: Prime, e: u32, radius: i64) -> Result<Self, FrobError> {
        p.power(e).ok_or(FrobError::Overflow)?;
        Ok(Oracle { s, p, e, radius, cache: RefCell::new(HashMap::new()) })
    }

    pub fn verdict(&self, a: &FracPoint) -> Result<OracleVerdict, FrobError> {
        check_point(self.s, self.p, a)?;
        let a = a.at_level(self.e).ok_or(FrobError::LevelMismatch(a.level(), self.e))?;
        let ranges = translate_ranges(self.s, &a, self.radius)?;
        let cached = self.cache.borrow().get(&ranges).cloned();
        let candidates = match cached {
            Some(c) => c,
            None => {
                let pts = Rc::new(lattice_points_in_ranges(
                    &Sublattice::full(self.s.rank()),
                    self.s.cone().dual_rays(),
                    &ranges,
                )?);
                self.cache.borrow_mut().insert(ranges, pts.clone());
                pts
            }
        };
        let mut zero_witness = None;
        for m in candidates.iter() {
            if self.s.contains(m) {
                continue;
            }
            let Some(w) = scaled_difference(m, &a) else { return Err(FrobError::Overflow) };
            if !self.s.contains(&w) {
                continue;
            }
            let witness = FracPoint::new(w, self.e, self.p);
            if witness.is_zero() {
                zero_witness = Some(witness);
                continue;
            }
            return Ok(OracleVerdict::Refuted { witness });
        }
        Ok(match zero_witness {
            Some(witness) => OracleVerdict::Refuted { witness },
            None => OracleVerdict::ConfirmedOnBox { radius: self.radius },
        })
    }
}

pub fn is_hom_oracle(s: &SeminormalMonoid, p: Prime, e: u32, a: &FracPoint, radius: i64) -> Result<OracleVerdict, FrobError> {
    Oracle::new(s, p, e, radius)?.verdict(a)
}

/// `π_a(x^u)` as an exponent: `a + u` when it is integral.
pub fn apply_pi(a: &FracPoint, u: &FracPoint) -> Result<Option<IntVector>, FrobError> {
    if a.prime() != u.prime() {
        return Err(FrobError::PrimeMismatch(a.prime().get(), u.prime().get()));
    }
    if a.level() != u.level() {
        return Err(FrobError::LevelMismatch(a.level(), u.level()));
    }
    if a.rank() != u.rank() {
        return Err(FrobError::RankMismatch { expected: a.rank(), found: u.rank() });
    }
    let q = a.denominator();
    let sum: Option<IntVector> = a
        .numerator()
        .iter()
        .zip(u.numerator())
        .map(|(x, y)| {
            let s = x.checked_add(*y)?;
            (s % q == 0).then_some(s / q)
        })
        .collect();
    Ok(sum)
}

/// The index of `π_a · π_b = π_a ∘ F^{e1}_* π_b`, namely `a + b/p^{e1}` at
/// level `e1 + e2`.
pub fn compose(a: &FracPoint, b: &FracPoint) -> Result<FracPoint, FrobError> {
    if a.prime() != b.prime() {
        return Err(FrobError::PrimeMismatch(a.prime().get(), b.prime().get()));
    }
    if a.rank() != b.rank() {
        return Err(FrobError::RankMismatch { expected: a.rank(), found: b.rank() });
    }
    let p = a.prime();
    let scale = p.power(b.level()).ok_or(FrobError::Overflow)?;
    let numerator = a
        .numerator()
        .iter()
        .zip(b.numerator())
        .map(|(x, y)| x.checked_mul(scale).and_then(|v| v.checked_add(*y)))
        .collect::<Option<IntVector>>()
        .ok_or(FrobError::Overflow)?;
    p.power(a.level() + b.level()).ok_or(FrobError::Overflow)?;
    Ok(FracPoint::new(numerator, a.level() + b.level(), p))
}

/// Checks over the box that `π_a` never hits a monomial on a p-face.
pub fn image_misses_p_faces_check(
    s: &SeminormalMonoid,
    p: Prime,
    e: u32,
    a: &FracPoint,
    radius: i64,
) -> Result<bool, FrobError> {
    let checker = HomChecker::new(s, p, e, Mode::Strict)?;
    if !checker.check(a)?.is_hom() {
        return Err(FrobError::NotAHom(a.to_string()));
    }
    let a = checker.align(a)?;
    let p_faces = s.classify(p).p_faces();
    if p_faces.is_empty() {
        return Ok(true);
    }
    for m in translates(s, &a, radius)? {
        let u = scaled_difference(&m, &a).ok_or(FrobError::Overflow)?;
        if s.contains(&u) && p_faces.iter().any(|&d| s.cone().face_contains(d, &m)) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    fn pt(v: &[i64], e: u32, prime: u64) -> FracPoint {
        FracPoint::new(v.to_vec(), e, p(prime))
    }

    #[test]
    fn e_min_examples() {
        assert_eq!(e_min(&catalog::whitney(), p(3)), 1);
        assert_eq!(e_min(&catalog::fan_4(), p(2)), 3);
        assert_eq!(e_min(&catalog::whitney(), p(2)), 2);
    }

    #[test]
    fn whitney_criterion() {
        let s = catalog::whitney();
        let x_axis = s.cone().face_by_zero_set(&[1]).unwrap();
        let v = is_hom(&s, p(3), 1, &pt(&[0, 0], 1, 3), Mode::Strict).unwrap();
        assert!(v.is_hom());
        let v = is_hom(&s, p(3), 1, &pt(&[-1, 0], 1, 3), Mode::Strict).unwrap();
        assert_eq!(v.failing_condition, Some(FailingCondition::PSatFail { face: x_axis }));
        let o = is_hom_oracle(&s, p(3), 1, &pt(&[-1, 0], 1, 3), 12).unwrap();
        assert_eq!(o, OracleVerdict::Refuted { witness: pt(&[4, 0], 1, 3) });
        assert_eq!(o.to_string(), "refuted: u=(4/3,0)");
        let o = is_hom_oracle(&s, p(3), 1, &pt(&[2, 0], 1, 3), 12).unwrap();
        assert_eq!(o, OracleVerdict::ConfirmedOnBox { radius: 12 });
        assert!(is_hom(&s, p(3), 1, &pt(&[2, 0], 1, 3), Mode::Strict).unwrap().is_hom());
    }

    #[test]
    fn example_four_five_needs_large_level() {
        let s = catalog::fan_4();
        let a = pt(&[2, 0], 1, 2);
        assert!(is_hom(&s, p(2), 1, &a, Mode::ConditionsOnly).unwrap().is_hom());
        assert_eq!(
            is_hom(&s, p(2), 1, &a, Mode::Strict).unwrap_err(),
            FrobError::LevelTooSmall { e: 1, e_min: 3 }
        );
        let o = is_hom_oracle(&s, p(2), 1, &a, 8).unwrap();
        assert_eq!(o, OracleVerdict::Refuted { witness: pt(&[4, 0], 1, 2) });
    }

    #[test]
    fn apply_and_compose() {
        assert_eq!(apply_pi(&pt(&[1, 0], 1, 3), &pt(&[2, 0], 1, 3)).unwrap(), Some(vec![1, 0]));
        assert_eq!(apply_pi(&pt(&[1, 0], 1, 3), &pt(&[1, 0], 1, 3)).unwrap(), None);
        assert_eq!(apply_pi(&pt(&[0, 0], 1, 3), &pt(&[6, 3], 1, 3)).unwrap(), Some(vec![2, 1]));
        assert_eq!(apply_pi(&pt(&[0, 0], 1, 3), &pt(&[0, 0], 2, 3)).unwrap_err(), FrobError::LevelMismatch(1, 2));
        let c = compose(&pt(&[2, 0], 1, 3), &pt(&[2, 0], 1, 3)).unwrap();
        assert_eq!(c, pt(&[8, 0], 2, 3));
        assert_eq!(c.to_string(), "(8/9,0)");
        let b = pt(&[5, -1], 2, 3);
        assert_eq!(compose(&pt(&[0, 0], 1, 3), &b).unwrap(), pt(&[5, -1], 3, 3));
        assert_eq!(compose(&pt(&[2, 0], 1, 3), &pt(&[0, 0], 2, 3)).unwrap(), pt(&[18, 0], 3, 3));
    }

    #[test]
    fn composition_matches_application() {
        // π_a(F^{e1}_* π_b(x^u)) = π_c(x^u)
        let a = pt(&[2, 1], 1, 3);
        let b = pt(&[1, 2], 1, 3);
        let c = compose(&a, &b).unwrap();
        for x in 0..20 {
            for y in 0..20 {
                let u = pt(&[x, y], 2, 3);
                // F^{e1}_* π_b sends u to u + b/p^{e1} when that lies in (1/p^{e1})M
                let inner: Option<IntVector> = [x + b.numerator()[0], y + b.numerator()[1]]
                    .iter()
                    .map(|&v| (v % 3 == 0).then_some(v / 3))
                    .collect();
                let lhs = inner.and_then(|m| apply_pi(&a, &pt(&m, 1, 3)).unwrap());
                assert_eq!(lhs, apply_pi(&c, &u).unwrap(), "u=({x},{y})");
            }
        }
    }

    #[test]
    fn p_face_images() {
        let s = catalog::whitney();
        let checker = HomChecker::new(&s, p(2), 2, Mode::Strict).unwrap();
        let homs = checker.hom_points(6).unwrap();
        assert!(!homs.is_empty());
        for a in &homs {
            assert!(image_misses_p_faces_check(&s, p(2), 2, a, 16).unwrap());
        }
        let s = catalog::fan_4();
        let checker = HomChecker::new(&s, p(2), 3, Mode::Strict).unwrap();
        for a in checker.hom_points(6).unwrap() {
            assert!(image_misses_p_faces_check(&s, p(2), 3, &a, 16).unwrap());
        }
    }
}
