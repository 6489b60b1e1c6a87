//! Seminormal affine monoids, described by a cone and a lattice per face.
//!
//! A seminormal monoid `S` is determined by its cone `C` and the lattices
//! `M_D = Z(S ∩ D)`: it is the union over all faces of `M_D ∩ relint(D)`.
//! That intensional description is the only one kept; generator lists are
//! converted on the way in.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::cone::{ConeError, FaceId, FaceLatticeCone};
use crate::frac::FracPoint;
use crate::linalg::{self, format_vector, quotient_invariants, IntVector, LinalgError, QuotientInvariants, Sublattice};
use crate::points::lattice_points_in_box;
use crate::prime::Prime;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MonoidError {
    #[error(transparent)]
    Cone(#[from] ConeError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("face vectors {0} do not lie in the cone")]
    UnknownFaceKey(String),
    #[error("face {0} is listed twice")]
    DuplicateFace(String),
    #[error("lattice for face {0} is not contained in the span of the face")]
    LatticeOutsideFace(String),
    #[error("lattice for face {0} has infinite index in M ∩ ⟨D⟩")]
    InfiniteIndex(String),
    #[error("lattice of {smaller} is not contained in the lattice of {larger}")]
    MonotonicityViolation { smaller: String, larger: String },
    #[error("the lattice of the whole cone must be the ambient lattice")]
    TopLatticeNotFull,
}

/// Per-face data for a fixed prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceClass {
    pub face: FaceId,
    pub relatively_saturated: bool,
    pub ruf: bool,
    /// `(M ∩ ⟨D⟩) / M_D`.
    pub quotient: QuotientInvariants,
    pub p_face: bool,
    pub p_ruf: bool,
    pub maximal_p_ruf: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceClassification {
    pub prime: Prime,
    pub faces: Vec<FaceClass>,
}

impl FaceClassification {
    fn select(&self, pred: impl Fn(&FaceClass) -> bool) -> Vec<FaceId> {
        self.faces.iter().filter(|c| pred(c)).map(|c| c.face).collect()
    }

    /// All RUFs, the cone itself included.
    pub fn rufs(&self) -> Vec<FaceId> {
        self.select(|c| c.ruf)
    }

    pub fn proper_rufs(&self) -> Vec<FaceId> {
        let top = self.faces.len() - 1;
        self.select(|c| c.ruf && c.face != top)
    }

    pub fn p_faces(&self) -> Vec<FaceId> {
        self.select(|c| c.p_face)
    }

    pub fn p_rufs(&self) -> Vec<FaceId> {
        self.select(|c| c.p_ruf)
    }

    pub fn maximal_p_rufs(&self) -> Vec<FaceId> {
        self.select(|c| c.maximal_p_ruf)
    }

    pub fn is_f_split(&self) -> bool {
        self.faces.iter().all(|c| !c.p_face)
    }
}

#[derive(Debug, Clone)]
pub struct SeminormalMonoid {
    cone: FaceLatticeCone,
    lattices: Vec<Sublattice>,
    quotients: Vec<QuotientInvariants>,
    ruf: Vec<bool>,
    rufs: Vec<FaceId>,
    hilbert_basis: Vec<IntVector>,
    embedding: Option<Vec<IntVector>>,
    warnings: Vec<String>,
}

impl SeminormalMonoid {
    /// Build from a cone and lattices on some faces.
    ///
    /// Each assignment names a face as the smallest face containing the given
    /// vectors (an empty list names `{0}`). Faces left unassigned receive the
    /// relatively saturated lattice `⋂_{D ⊊ D'} M_{D'} ∩ ⟨D⟩`.
    pub fn from_face_data(
        cone_generators: &[IntVector],
        assignments: &[(Vec<IntVector>, Vec<IntVector>)],
    ) -> Result<Self, MonoidError> {
        let cone = FaceLatticeCone::build(cone_generators)?;
        let n = cone.ambient_rank();
        let mut given = BTreeMap::new();
        for (face_rays, lattice_generators) in assignments {
            let face = locate_face(&cone, face_rays)?;
            let lattice = Sublattice::canonical_form(n, lattice_generators)?;
            if given.insert(face, lattice).is_some() {
                return Err(MonoidError::DuplicateFace(cone.face_label(face)));
            }
        }
        Self::assemble(cone, given, None, true)
    }

    /// The seminormalization of the monoid generated by `generators`.
    ///
    /// `M_D` is generated by the generators lying on `D`. When the generators
    /// span a proper sublattice of `Z^n`, coordinates are first changed to a
    /// basis of that sublattice; see [`Self::embedding`].
    pub fn from_generators(generators: &[IntVector]) -> Result<Self, MonoidError> {
        let first = generators.first().ok_or(ConeError::NoGenerators)?;
        let n0 = first.len();
        let span = Sublattice::canonical_form(n0, generators)?;
        let (gens, embedding) = if span == Sublattice::full(n0) {
            (generators.to_vec(), None)
        } else {
            let coords = generators
                .iter()
                .map(|g| linalg::from_big(&span.coordinates(g).expect("generator lies in its own span")))
                .collect::<Result<Vec<_>, _>>()?;
            (coords, Some(span.basis().to_vec()))
        };
        let cone = FaceLatticeCone::build(&gens)?;
        let n = cone.ambient_rank();
        let mut given = BTreeMap::new();
        for face in cone.faces() {
            let on_face: Vec<IntVector> = face.generators.iter().map(|&g| gens[g].clone()).collect();
            given.insert(face.id, Sublattice::canonical_form(n, &on_face)?);
        }
        Self::assemble(cone, given, embedding, false)
    }

    fn assemble(
        cone: FaceLatticeCone,
        given: BTreeMap<FaceId, Sublattice>,
        embedding: Option<Vec<IntVector>>,
        warn_saturated: bool,
    ) -> Result<Self, MonoidError> {
        let n = cone.ambient_rank();
        let top = cone.top();
        let mut lattices = vec![Sublattice::zero(n); cone.faces().len()];
        lattices[top] = Sublattice::full(n);
        if let Some(l) = given.get(&top) {
            if *l != lattices[top] {
                return Err(MonoidError::TopLatticeNotFull);
            }
        }
        // faces are sorted by dimension, so every strict superface comes later
        for face in cone.faces().iter().rev().skip(1) {
            let lattice = match given.get(&face.id) {
                Some(l) => {
                    if !l.is_subset_of(&face.lattice) {
                        return Err(MonoidError::LatticeOutsideFace(cone.face_label(face.id)));
                    }
                    if l.rank() != face.dim {
                        return Err(MonoidError::InfiniteIndex(cone.face_label(face.id)));
                    }
                    l.clone()
                }
                None => relative_saturation(&cone, &lattices, face.id)?,
            };
            lattices[face.id] = lattice;
        }
        for f in cone.faces() {
            for g in cone.strict_superfaces(f.id) {
                if !lattices[f.id].is_subset_of(&lattices[g]) {
                    return Err(MonoidError::MonotonicityViolation {
                        smaller: cone.face_label(f.id),
                        larger: cone.face_label(g),
                    });
                }
            }
        }

        let mut ruf = vec![false; lattices.len()];
        let mut warnings = Vec::new();
        for f in cone.faces() {
            ruf[f.id] = f.id == top || relative_saturation(&cone, &lattices, f.id)? != lattices[f.id];
            if warn_saturated && f.id != top && !ruf[f.id] && given.contains_key(&f.id) {
                warnings.push(format!(
                    "listed face {} is relatively saturated; its lattice is implied",
                    cone.face_label(f.id)
                ));
            }
        }
        let quotients = cone
            .faces()
            .iter()
            .map(|f| quotient_invariants(&f.lattice, &lattices[f.id]))
            .collect::<Result<Vec<_>, _>>()?;
        let rufs = (0..ruf.len()).filter(|&f| ruf[f]).collect();

        let mut monoid = SeminormalMonoid {
            cone,
            lattices,
            quotients,
            ruf,
            rufs,
            hilbert_basis: Vec::new(),
            embedding,
            warnings,
        };
        monoid.hilbert_basis = monoid.compute_hilbert_basis()?;
        Ok(monoid)
    }

    pub fn cone(&self) -> &FaceLatticeCone {
        &self.cone
    }

    pub fn rank(&self) -> usize {
        self.cone.ambient_rank()
    }

    /// `M_D`.
    pub fn lattice(&self, face: FaceId) -> &Sublattice {
        &self.lattices[face]
    }

    /// `(M ∩ ⟨D⟩) / M_D`.
    pub fn quotient(&self, face: FaceId) -> &QuotientInvariants {
        &self.quotients[face]
    }

    pub fn is_ruf(&self, face: FaceId) -> bool {
        self.ruf[face]
    }

    /// RUFs including the cone.
    pub fn rufs(&self) -> &[FaceId] {
        &self.rufs
    }

    /// Minimal generating set (irreducible elements) of `S`.
    pub fn hilbert_basis(&self) -> &[IntVector] {
        &self.hilbert_basis
    }

    /// Basis of the original lattice in which the generators were given, when
    /// coordinates had to be changed.
    pub fn embedding(&self) -> Option<&[IntVector]> {
        self.embedding.as_deref()
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// Membership via the RUF criterion: `u ∈ C` and `u ∈ M_D` for every RUF
    /// `D` containing `u`.
    pub fn contains(&self, u: &[i64]) -> bool {
        if u.len() != self.rank() || !self.cone.contains(u) {
            return false;
        }
        self.rufs
            .iter()
            .all(|&d| !self.cone.face_contains(d, u) || self.lattices[d].contains(u))
    }

    /// Membership straight from the definition: `u ∈ M_D` for the face `D`
    /// whose relative interior contains `u`.
    pub fn contains_by_definition(&self, u: &[i64]) -> bool {
        if u.len() != self.rank() {
            return false;
        }
        match self.cone.smallest_face_of(u) {
            Some(d) => self.lattices[d].contains(u),
            None => false,
        }
    }

    /// `u ∈ (1/q)S`, i.e. `q·u ∈ S`.
    pub fn contains_fractional(&self, u: &FracPoint) -> bool {
        self.contains(u.numerator())
    }

    pub fn classify(&self, p: Prime) -> FaceClassification {
        let top = self.cone.top();
        let mut faces: Vec<FaceClass> = self
            .cone
            .faces()
            .iter()
            .map(|f| {
                let quotient = self.quotients[f.id].clone();
                let p_face = quotient.invariant_factors.iter().any(|&d| d % p.get() == 0);
                FaceClass {
                    face: f.id,
                    relatively_saturated: f.id != top && !self.ruf[f.id],
                    ruf: self.ruf[f.id],
                    quotient,
                    p_face,
                    p_ruf: p_face && self.ruf[f.id],
                    maximal_p_ruf: false,
                }
            })
            .collect();
        let p_rufs: Vec<FaceId> = faces.iter().filter(|c| c.p_ruf).map(|c| c.face).collect();
        for c in faces.iter_mut().filter(|c| c.p_ruf) {
            c.maximal_p_ruf = !p_rufs.iter().any(|&g| g != c.face && self.cone.is_subface(c.face, g));
        }
        FaceClassification { prime: p, faces }
    }

    pub fn is_f_split(&self, p: Prime) -> bool {
        self.classify(p).is_f_split()
    }

    /// Compares `M_D` against `⋂_{D ⪯ D', D' RUF} M_{D'} ∩ ⟨D⟩`.
    pub fn lattice_formula_check(&self, face: FaceId) -> Result<bool, MonoidError> {
        let f = self.cone.face(face)?;
        let mut acc = f.lattice.clone();
        for &d in &self.rufs {
            if self.cone.is_subface(face, d) {
                acc = acc.intersect(&self.lattices[d])?;
            }
        }
        Ok(acc == self.lattices[face])
    }

    /// Structural equality: same cone and same lattice on every face.
    pub fn same_monoid(&self, other: &SeminormalMonoid) -> bool {
        if self.cone.dual_rays() != other.cone.dual_rays() || self.cone.rays() != other.cone.rays() {
            return false;
        }
        self.cone.faces().iter().all(|f| match other.cone.face_by_zero_set(&f.zero_set) {
            Some(g) => self.lattices[f.id] == other.lattices[g],
            None => false,
        })
    }

    /// Face data listing only the proper RUFs, keyed by their primitive rays;
    /// it rebuilds an equal monoid through [`Self::from_face_data`].
    pub fn normalized_face_data(&self) -> (Vec<IntVector>, Vec<(Vec<IntVector>, Vec<IntVector>)>) {
        let top = self.cone.top();
        let data = self
            .rufs
            .iter()
            .filter(|&&d| d != top)
            .map(|&d| {
                let rays = self.cone.faces()[d].rays.iter().map(|&r| self.cone.rays()[r].clone()).collect();
                (rays, self.lattices[d].basis().to_vec())
            })
            .collect();
        (self.cone.rays().to_vec(), data)
    }

    /// The minimal generator of `S` on each extremal ray.
    fn ray_generators(&self) -> Vec<IntVector> {
        self.cone
            .rays()
            .iter()
            .enumerate()
            .map(|(i, ray)| {
                let face = self.cone.faces().iter().find(|f| f.rays == [i]).expect("ray face");
                let g = self.lattices[face.id].basis()[0].clone();
                if self.cone.contains(&g) {
                    g
                } else {
                    debug_assert!(ray.iter().zip(&g).all(|(a, b)| a * b <= 0));
                    g.iter().map(|x| -x).collect()
                }
            })
            .collect()
    }

    // Every element of S is a nonnegative combination of the ray generators
    // r_i plus one element y ∈ M_D ∩ relint(D) with coefficients in [0, 2)
    // on a simplex of rays, so heights ≤ 2·max_ρ Σ_i ⟨r_i, v_ρ⟩ bound the
    // irreducibles.
    fn compute_hilbert_basis(&self) -> Result<Vec<IntVector>, MonoidError> {
        let rays = self.ray_generators();
        let bound = self
            .cone
            .dual_rays()
            .iter()
            .map(|v| rays.iter().map(|r| linalg::dot(r, v)).sum::<i128>())
            .max()
            .unwrap_or(0)
            * 2;
        let bound = i64::try_from(bound).map_err(|_| LinalgError::Overflow)?;
        let mut candidates: Vec<IntVector> =
            lattice_points_in_box(&Sublattice::full(self.rank()), self.cone.dual_rays(), 0, bound)?
                .into_iter()
                .filter(|u| u.iter().any(|&x| x != 0) && self.contains(u))
                .collect();
        candidates.sort_by_key(|u| (self.grade(u), u.clone()));
        let mut basis: Vec<IntVector> = Vec::new();
        for u in candidates {
            let reducible = basis.iter().any(|h| {
                let rest: IntVector = u.iter().zip(h).map(|(a, b)| a - b).collect();
                self.contains(&rest)
            });
            if !reducible {
                basis.push(u);
            }
        }
        basis.sort_by(|a, b| b.cmp(a));
        Ok(basis)
    }

    /// Sum of all heights; positive on `C \ {0}`.
    pub fn grade(&self, u: &[i64]) -> i128 {
        self.cone.heights(u).iter().sum()
    }
}

impl PartialEq for SeminormalMonoid {
    fn eq(&self, other: &Self) -> bool {
        self.same_monoid(other)
    }
}

/// `⋂_{D ⊊ D'} M_{D'} ∩ ⟨D⟩` (the whole `M ∩ ⟨D⟩` for the cone itself).
fn relative_saturation(cone: &FaceLatticeCone, lattices: &[Sublattice], face: FaceId) -> Result<Sublattice, LinalgError> {
    let mut acc = cone.faces()[face].lattice.clone();
    for g in cone.strict_superfaces(face) {
        acc = acc.intersect(&lattices[g])?;
    }
    Ok(acc)
}

fn locate_face(cone: &FaceLatticeCone, vectors: &[IntVector]) -> Result<FaceId, MonoidError> {
    let describe = || vectors.iter().map(|v| format_vector(v)).collect::<Vec<_>>().join(",");
    let mut face = cone.origin();
    for v in vectors {
        if v.len() != cone.ambient_rank() {
            return Err(LinalgError::RankMismatch { expected: cone.ambient_rank(), found: v.len() }.into());
        }
        let f = cone.smallest_face_of(v).ok_or_else(|| MonoidError::UnknownFaceKey(describe()))?;
        face = cone.join(face, f);
    }
    Ok(face)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn whitney_from_face_data_matches_generators() {
        let a = catalog::whitney();
        let b = SeminormalMonoid::from_generators(&[vec![2, 0], vec![0, 1], vec![1, 1]]).unwrap();
        assert!(a.same_monoid(&b));
        let x_axis = a.cone().face_by_zero_set(&[1]).unwrap();
        assert_eq!(a.lattice(x_axis).basis(), &[vec![2, 0]]);
        assert_eq!(a.hilbert_basis(), &[vec![2, 0], vec![1, 1], vec![0, 1]]);
    }

    #[test]
    fn normal_quadrant() {
        let q = SeminormalMonoid::from_face_data(&[vec![1, 0], vec![0, 1]], &[]).unwrap();
        assert_eq!(q.rufs(), &[q.cone().top()]);
        let b = SeminormalMonoid::from_generators(&[vec![1, 0], vec![0, 1]]).unwrap();
        assert!(q.same_monoid(&b));
    }

    #[test]
    fn cube_derives_edge_lattice() {
        let s = catalog::cube();
        let e3 = s.cone().faces().iter().find(|f| f.dim == 1 && f.lattice.contains(&[0, 0, 1])).unwrap().id;
        assert_eq!(s.lattice(e3).basis(), &[vec![0, 0, 1]]);
        assert!(!s.is_ruf(e3));
    }

    #[test]
    fn example_four_five_axis_lattice() {
        let s = SeminormalMonoid::from_generators(&[vec![4, 0], vec![0, 1], vec![1, 1], vec![2, 1], vec![3, 1]]).unwrap();
        let x_axis = s.cone().face_by_zero_set(&[1]).unwrap();
        assert_eq!(s.lattice(x_axis).basis(), &[vec![4, 0]]);
    }

    #[test]
    fn whitney_membership() {
        let s = catalog::whitney();
        assert!(!s.contains(&[3, 0]));
        assert!(s.contains(&[1, 1]));
        assert!(s.contains(&[0, 0]));
        let three = p(3);
        assert!(s.contains_fractional(&FracPoint::new(vec![2, 0], 1, three)));
        assert!(!s.contains_fractional(&FracPoint::new(vec![1, 0], 1, three)));
        assert!(s.contains_fractional(&FracPoint::zero(2, 1, three)));
    }

    #[test]
    fn whitney_picture_on_box() {
        let s = catalog::whitney();
        for x in 0..=6 {
            for y in 0..=6 {
                let expected = y >= 1 || x % 2 == 0;
                assert_eq!(s.contains(&[x, y]), expected, "({x},{y})");
            }
        }
    }

    #[test]
    fn whitney_classification() {
        let s = catalog::whitney();
        let x_axis = s.cone().face_by_zero_set(&[1]).unwrap();
        let c3 = s.classify(p(3));
        let mut rufs = c3.rufs();
        rufs.sort();
        assert_eq!(rufs, vec![x_axis, s.cone().top()]);
        assert!(c3.p_faces().is_empty());
        let c2 = s.classify(p(2));
        assert_eq!(c2.p_faces(), vec![x_axis]);
        assert_eq!(c2.maximal_p_rufs(), vec![x_axis]);
        assert!(s.is_f_split(p(3)));
        assert!(!s.is_f_split(p(2)));
        assert!(!catalog::fan_4().is_f_split(p(2)));
        let q = catalog::quadrant();
        for prime in [2, 3, 5] {
            let c = q.classify(p(prime));
            assert_eq!(c.rufs(), vec![q.cone().top()]);
            assert!(c.p_faces().is_empty());
        }
    }

    #[test]
    fn lattice_formula_examples() {
        let s = catalog::whitney();
        assert!(s.lattice_formula_check(s.cone().origin()).unwrap());
        assert!(s.lattice_formula_check(s.cone().face_by_zero_set(&[1]).unwrap()).unwrap());
        let cube = catalog::cube();
        for f in cube.cone().faces() {
            assert!(cube.lattice_formula_check(f.id).unwrap());
        }
    }

    #[test]
    fn rejects_inconsistent_data() {
        let quad = [vec![1, 0], vec![0, 1]];
        // x-axis lattice bigger than what the origin... monotonicity: C-lattice fixed, so use a plane
        let err = SeminormalMonoid::from_face_data(&quad, &[(vec![vec![1, 0]], vec![vec![1, 0], vec![0, 1]])]);
        assert_eq!(err.unwrap_err(), MonoidError::LatticeOutsideFace("⟨(1,0)⟩".into()));
        let err = SeminormalMonoid::from_face_data(&quad, &[(vec![vec![-1, 0]], vec![vec![2, 0]])]);
        assert!(matches!(err.unwrap_err(), MonoidError::UnknownFaceKey(_)));
        let err = SeminormalMonoid::from_face_data(&quad, &[(vec![vec![1, 1]], vec![vec![2, 0], vec![0, 1]])]);
        assert_eq!(err.unwrap_err(), MonoidError::TopLatticeNotFull);
        let err = SeminormalMonoid::from_face_data(&quad, &[(vec![vec![1, 0]], vec![])]);
        assert_eq!(err.unwrap_err(), MonoidError::InfiniteIndex("⟨(1,0)⟩".into()));
        let octant = [vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]];
        let err = SeminormalMonoid::from_face_data(
            &octant,
            &[
                (vec![vec![1, 0, 0], vec![0, 1, 0]], vec![vec![2, 0, 0], vec![0, 1, 0]]),
                (vec![vec![1, 0, 0]], vec![vec![1, 0, 0]]),
            ],
        );
        assert!(matches!(err.unwrap_err(), MonoidError::MonotonicityViolation { .. }));
        let err = SeminormalMonoid::from_generators(&[vec![1, 0], vec![-1, 0], vec![0, 1]]);
        assert_eq!(err.unwrap_err(), MonoidError::Cone(ConeError::NotPointed));
    }

    #[test]
    fn warns_on_redundant_listing() {
        let s = SeminormalMonoid::from_face_data(&[vec![1, 0], vec![0, 1]], &[(vec![vec![0, 1]], vec![vec![0, 1]])])
            .unwrap();
        assert_eq!(s.warnings().len(), 1);
    }

    #[test]
    fn reembeds_sparse_generators() {
        let s = SeminormalMonoid::from_generators(&[vec![2, 0], vec![0, 2]]).unwrap();
        assert_eq!(s.embedding().unwrap(), &[vec![2, 0], vec![0, 2]]);
        assert!(s.same_monoid(&catalog::quadrant()));
        let line = SeminormalMonoid::from_generators(&[vec![1, 1, 0], vec![2, 2, 0]]).unwrap();
        assert_eq!(line.rank(), 1);
    }

    #[test]
    fn seminormalization_adds_missing_axis_points() {
        let s = SeminormalMonoid::from_generators(&[vec![2, 0], vec![3, 0], vec![0, 1], vec![1, 1]]).unwrap();
        assert!(s.contains(&[1, 0]));
        assert_eq!(s.hilbert_basis(), &[vec![1, 0], vec![0, 1]]);
    }

    #[test]
    fn normalized_data_round_trips() {
        for s in [catalog::whitney(), catalog::cube(), catalog::fan_4()] {
            let (gens, data) = s.normalized_face_data();
            let t = SeminormalMonoid::from_face_data(&gens, &data).unwrap();
            assert!(s.same_monoid(&t));
            assert!(t.warnings().is_empty());
        }
    }
}
