//! Monomial ideals `I_{D_1 ∪ … ∪ D_n} = ⟨x^u : u ∈ S \ (D_1 ∪ … ∪ D_n)⟩`
//! and the Cartier-fixed ones among them.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::cone::{FaceId, FaceLatticeCone};
use crate::frac::FracPoint;
use crate::frob::{self, FrobError, HomChecker, Mode};
use crate::linalg::{format_vector, IntVector};
use crate::monoid::SeminormalMonoid;
use crate::prime::Prime;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CartierError {
    #[error("{0} is not in the monoid")]
    NotInMonoid(String),
    #[error(transparent)]
    Frob(#[from] FrobError),
}

/// A face-union ideal, stored as the antichain of maximal faces in the
/// union. The empty antichain is the unit ideal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FaceUnionIdeal {
    faces: Vec<FaceId>,
}

impl FaceUnionIdeal {
    pub fn new(cone: &FaceLatticeCone, faces: impl IntoIterator<Item = FaceId>) -> Self {
        let all: BTreeSet<FaceId> = faces.into_iter().collect();
        let faces = all
            .iter()
            .copied()
            .filter(|&f| !all.iter().any(|&g| g != f && cone.is_subface(f, g)))
            .collect();
        FaceUnionIdeal { faces }
    }

    pub fn unit() -> Self {
        FaceUnionIdeal { faces: Vec::new() }
    }

    /// Maximal faces of the union, sorted by face id.
    pub fn faces(&self) -> &[FaceId] {
        &self.faces
    }

    pub fn is_unit(&self) -> bool {
        self.faces.is_empty()
    }

    /// `u ∈ D_1 ∪ … ∪ D_n`.
    pub fn union_contains(&self, cone: &FaceLatticeCone, u: &[i64]) -> bool {
        self.faces.iter().any(|&d| cone.face_contains(d, u))
    }

    /// Whether `x^u ∈ I` for `u ∈ S`.
    pub fn membership(&self, s: &SeminormalMonoid, u: &[i64]) -> Result<bool, CartierError> {
        if !s.contains(u) {
            return Err(CartierError::NotInMonoid(format_vector(u)));
        }
        Ok(!self.union_contains(s.cone(), u))
    }

    /// Every face contained in the union.
    pub fn down_set(&self, cone: &FaceLatticeCone) -> BTreeSet<FaceId> {
        (0..cone.faces().len())
            .filter(|&f| self.faces.iter().any(|&d| cone.is_subface(f, d)))
            .collect()
    }

    /// `self ⊆ other`, i.e. the union of `other` lies inside the union of `self`.
    pub fn is_subset_of(&self, other: &FaceUnionIdeal, cone: &FaceLatticeCone) -> bool {
        other.faces.iter().all(|&g| self.faces.iter().any(|&d| cone.is_subface(g, d)))
    }

    pub fn intersection(&self, other: &FaceUnionIdeal, cone: &FaceLatticeCone) -> FaceUnionIdeal {
        FaceUnionIdeal::new(cone, self.faces.iter().chain(&other.faces).copied())
    }

    pub fn sum(&self, other: &FaceUnionIdeal, cone: &FaceLatticeCone) -> FaceUnionIdeal {
        let meets: Vec<FaceId> = self
            .faces
            .iter()
            .flat_map(|&d| other.faces.iter().map(move |&g| (d, g)))
            .map(|(d, g)| cone.meet(d, g))
            .collect();
        FaceUnionIdeal::new(cone, meets)
    }

    pub fn keys(&self, cone: &FaceLatticeCone) -> Vec<Vec<usize>> {
        self.faces.iter().map(|&d| cone.face_key(d).to_vec()).collect()
    }

    pub fn label(&self, cone: &FaceLatticeCone) -> String {
        if self.is_unit() {
            return "R".to_string();
        }
        let parts: Vec<String> = self.faces.iter().map(|&d| cone.face_label(d)).collect();
        format!("I_{{{}}}", parts.join(" ∪ "))
    }
}

/// Serialized form used in reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdealReport {
    pub faces: Vec<Vec<usize>>,
    pub labels: Vec<String>,
    pub generators_bounded: Vec<IntVector>,
}

impl IdealReport {
    pub fn new(s: &SeminormalMonoid, ideal: &FaceUnionIdeal, height_bound: i64) -> IdealReport {
        IdealReport {
            faces: ideal.keys(s.cone()),
            labels: ideal.faces().iter().map(|&d| s.cone().face_label(d)).collect(),
            generators_bounded: generators_bounded(s, ideal, height_bound),
        }
    }
}

/// The faces obtained by intersecting one or more proper RUFs.
pub fn proper_ruf_meet_closure(s: &SeminormalMonoid) -> BTreeSet<FaceId> {
    let cone = s.cone();
    let top = cone.top();
    let mut closure: BTreeSet<FaceId> = s.rufs().iter().copied().filter(|&d| d != top).collect();
    loop {
        let mut added = false;
        let current: Vec<FaceId> = closure.iter().copied().collect();
        for (i, &a) in current.iter().enumerate() {
            for &b in &current[i + 1..] {
                added |= closure.insert(cone.meet(a, b));
            }
        }
        if !added {
            return closure;
        }
    }
}

/// The two conditions for `I_{D_1 ∪ … ∪ D_n}` to be fixed by the Cartier
/// algebra: every `D_i` is an intersection of proper RUFs, and every maximal
/// pRUF lies in the union.
pub fn is_fixed(s: &SeminormalMonoid, p: Prime, ideal: &FaceUnionIdeal) -> bool {
    let closure = proper_ruf_meet_closure(s);
    let cone = s.cone();
    ideal.faces().iter().all(|d| closure.contains(d))
        && s.classify(p)
            .maximal_p_rufs()
            .iter()
            .all(|&m| ideal.faces().iter().any(|&d| cone.is_subface(m, d)))
}

/// All nonzero fixed ideals, from the smallest (the test ideal) upwards:
/// sorted by decreasing size of the union, ties broken by face ids.
pub fn enumerate_fixed_ideals(s: &SeminormalMonoid, p: Prime) -> Vec<FaceUnionIdeal> {
    let cone = s.cone();
    let closure: Vec<FaceId> = proper_ruf_meet_closure(s).into_iter().collect();
    let mut found: BTreeSet<FaceUnionIdeal> = BTreeSet::new();
    let mut stack: Vec<(usize, Vec<FaceId>)> = vec![(0, Vec::new())];
    // antichains of the closure, built in index order
    while let Some((next, chosen)) = stack.pop() {
        let ideal = FaceUnionIdeal::new(cone, chosen.iter().copied());
        if is_fixed(s, p, &ideal) {
            found.insert(ideal);
        }
        for (i, &f) in closure.iter().enumerate().skip(next) {
            if chosen.iter().all(|&g| !cone.is_subface(f, g) && !cone.is_subface(g, f)) {
                let mut more = chosen.clone();
                more.push(f);
                stack.push((i + 1, more));
            }
        }
    }
    let mut out: Vec<FaceUnionIdeal> = found.into_iter().collect();
    out.sort_by_key(|i| (std::cmp::Reverse(i.down_set(cone).len()), i.faces().to_vec()));
    out
}

/// `τ(R)`: the ideal of the union of all proper RUFs.
pub fn test_ideal(s: &SeminormalMonoid) -> FaceUnionIdeal {
    let top = s.cone().top();
    FaceUnionIdeal::new(s.cone(), s.rufs().iter().copied().filter(|&d| d != top))
}

/// `σ(R)`: the ideal of the union of all pRUFs; the unit ideal when there
/// are none.
pub fn non_f_pure_ideal(s: &SeminormalMonoid, p: Prime) -> FaceUnionIdeal {
    FaceUnionIdeal::new(s.cone(), s.classify(p).p_rufs())
}

/// Minimal elements of `S \ ⋃D_i` under divisibility in `S`, among those
/// with all heights at most `height_bound`, sorted lexicographically.
///
/// For a single face this is a full generating set once the bound covers the
/// generators of `S`; for unions it is only as good as the bound.
pub fn generators_bounded(s: &SeminormalMonoid, ideal: &FaceUnionIdeal, height_bound: i64) -> Vec<IntVector> {
    let mut members: Vec<IntVector> = frob::height_box(s, 0, height_bound)
        .expect("height box")
        .into_iter()
        .filter(|u| s.contains(u) && !ideal.union_contains(s.cone(), u))
        .collect();
    members.sort_by_key(|u| (s.grade(u), u.clone()));
    let mut gens: Vec<IntVector> = Vec::new();
    for u in members {
        let divisible = gens.iter().any(|g| {
            let rest: IntVector = u.iter().zip(g).map(|(a, b)| a - b).collect();
            s.contains(&rest)
        });
        if !divisible {
            gens.push(u);
        }
    }
    gens.sort();
    gens
}

/// A hom `π_a` sending `x^u` with `u ∈ (1/q)I` outside `I`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompatibilityWitness {
    pub a: FracPoint,
    pub u: FracPoint,
    pub image: IntVector,
}

/// Checks `π_a(F^e_* I) ⊆ I` for all hom points `a` with `|⟨q·a, v_ρ⟩| ≤ radius`
/// and all `u ∈ (1/q)S` with `q·u ∈ I` and `⟨u, v_ρ⟩ ≤ radius`.
pub fn compatibility_probe(
    s: &SeminormalMonoid,
    p: Prime,
    ideal: &FaceUnionIdeal,
    e: u32,
    radius: i64,
) -> Result<Option<CompatibilityWitness>, CartierError> {
    let checker = HomChecker::new(s, p, e, Mode::Strict)?;
    let q = p.power(e).ok_or(FrobError::Overflow)?;
    for a in checker.hom_points(radius)? {
        for m in frob::translates(s, &a, radius)? {
            let w: IntVector = m.iter().zip(a.numerator()).map(|(x, y)| x * q - y).collect();
            if !s.contains(&w) || ideal.union_contains(s.cone(), &w) {
                continue;
            }
            if ideal.union_contains(s.cone(), &m) {
                let u = FracPoint::new(w, e, p);
                return Ok(Some(CompatibilityWitness { a, u, image: m }));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn whitney_ideals() {
        let s = catalog::whitney();
        let cone = s.cone();
        let x_axis = cone.face_by_zero_set(&[1]).unwrap();
        let y_axis = cone.face_by_zero_set(&[0]).unwrap();
        let tau = test_ideal(&s);
        assert_eq!(tau.faces(), &[x_axis]);
        assert!(tau.membership(&s, &[0, 1]).unwrap());
        assert!(!tau.membership(&s, &[2, 0]).unwrap());
        assert!(FaceUnionIdeal::unit().membership(&s, &[0, 0]).unwrap());
        assert!(matches!(tau.membership(&s, &[1, 0]), Err(CartierError::NotInMonoid(_))));
        assert_eq!(generators_bounded(&s, &tau, 4), vec![vec![0, 1], vec![1, 1]]);
        assert_eq!(generators_bounded(&s, &FaceUnionIdeal::unit(), 1), vec![vec![0, 0]]);

        let x = FaceUnionIdeal::new(cone, [x_axis]);
        let y = FaceUnionIdeal::new(cone, [y_axis]);
        assert!(is_fixed(&s, p(3), &x));
        assert!(!is_fixed(&s, p(3), &y));
        assert!(is_fixed(&s, p(2), &x));
        assert_eq!(enumerate_fixed_ideals(&s, p(3)), vec![x.clone(), FaceUnionIdeal::unit()]);
        assert_eq!(enumerate_fixed_ideals(&s, p(2)), vec![x.clone()]);
        assert!(non_f_pure_ideal(&s, p(3)).is_unit());
        assert_eq!(non_f_pure_ideal(&s, p(2)), x);
        assert_eq!(non_f_pure_ideal(&catalog::fan_4(), p(2)).faces(), &[x_axis]);

        assert_eq!(compatibility_probe(&s, p(3), &tau, 1, 9).unwrap(), None);
        assert_eq!(compatibility_probe(&s, p(2), &x, 2, 9).unwrap(), None);
        let w = compatibility_probe(&s, p(3), &y, 1, 9).unwrap().unwrap();
        assert!(cone.face_contains(y_axis, &w.image));
    }

    #[test]
    fn quadrant_and_cube() {
        let q = catalog::quadrant();
        assert!(test_ideal(&q).is_unit());
        assert_eq!(enumerate_fixed_ideals(&q, p(5)), vec![FaceUnionIdeal::unit()]);
        let cube = catalog::cube();
        let tau = test_ideal(&cube);
        assert_eq!(tau.faces().len(), 2);
        assert!(tau.faces().iter().all(|&d| cube.cone().faces()[d].dim == 2));
        let gens = generators_bounded(&cube, &tau, 3);
        assert!(gens.iter().all(|g| g[0] > 0 && g[1] > 0));
    }

    #[test]
    fn lattice_operations() {
        let cube = catalog::cube();
        let cone = cube.cone();
        let ideals = enumerate_fixed_ideals(&cube, p(3));
        let tau = test_ideal(&cube);
        assert_eq!(ideals[0], tau);
        for i in &ideals {
            for j in &ideals {
                assert!(is_fixed(&cube, p(3), &i.intersection(j, cone)));
                assert!(is_fixed(&cube, p(3), &i.sum(j, cone)));
                assert!(i.intersection(j, cone).is_subset_of(i, cone));
                assert!(i.is_subset_of(&i.sum(j, cone), cone));
            }
        }
    }
}
