//! Rational polyhedral cones: dual description, extremal rays and the full
//! face lattice.

mod double_description;

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::linalg::{self, dot, dot_rational, format_vector, IntVector, LinalgError, RatVector, Sublattice};

pub type FaceId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConeError {
    #[error("cone needs at least one generator")]
    NoGenerators,
    #[error("generator {0} is the zero vector")]
    ZeroGenerator(usize),
    #[error("generators do not span the ambient space")]
    NotFullDimensional,
    #[error("cone contains a line")]
    NotPointed,
    #[error("unknown face id {0}")]
    UnknownFace(FaceId),
    #[error("point is not in the cone")]
    NotInCone,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A face `D = C ∩ ⋂_{ρ ∈ zero_set} v_ρ^⊥`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub id: FaceId,
    /// Dual rays vanishing on `D`; these are also the extremal rays of
    /// `D* = σ ∩ D^⊥`.
    pub zero_set: Vec<usize>,
    /// Extremal rays of `C` lying on `D`.
    pub rays: Vec<usize>,
    /// Indices of the construction generators lying on `D`.
    pub generators: Vec<usize>,
    pub dim: usize,
    /// `M ∩ ⟨D⟩`.
    pub lattice: Sublattice,
    /// Integer basis of `⟨D⟩^⊥`.
    span_normals: Vec<IntVector>,
}

impl Face {
    pub fn span_contains(&self, v: &[i64]) -> bool {
        self.span_normals.iter().all(|w| dot(v, w) == 0)
    }

    pub fn span_contains_rational(&self, v: &[BigRational]) -> bool {
        self.span_normals.iter().all(|w| dot_rational(v, w).is_zero())
    }
}

/// A pointed, full-dimensional rational cone `C ⊆ R^n` with its dual cone
/// `σ` and face poset.
#[derive(Debug, Clone)]
pub struct FaceLatticeCone {
    ambient: usize,
    generators: Vec<IntVector>,
    rays: Vec<IntVector>,
    dual_rays: Vec<IntVector>,
    faces: Vec<Face>,
    by_zero_set: HashMap<Vec<usize>, FaceId>,
}

fn sort_desc(v: &mut [IntVector]) {
    v.sort_by(|a, b| b.cmp(a));
}

impl FaceLatticeCone {
    pub fn build(generators: &[IntVector]) -> Result<Self, ConeError> {
        let first = generators.first().ok_or(ConeError::NoGenerators)?;
        let n = first.len();
        for (i, g) in generators.iter().enumerate() {
            if g.len() != n {
                return Err(LinalgError::RankMismatch { expected: n, found: g.len() }.into());
            }
            if g.iter().all(|&x| x == 0) {
                return Err(ConeError::ZeroGenerator(i));
            }
        }
        if n == 0 || Sublattice::canonical_form(n, generators)?.rank() < n {
            return Err(ConeError::NotFullDimensional);
        }
        let gen_rows: Vec<_> = generators.iter().map(|g| linalg::to_big(g)).collect();
        let mut dual_rays = double_description::extreme_rays(&gen_rows, n)
            .iter()
            .map(|r| linalg::from_big(r))
            .collect::<Result<Vec<_>, _>>()?;
        if dual_rays.is_empty() || Sublattice::canonical_form(n, &dual_rays)?.rank() < n {
            return Err(ConeError::NotPointed);
        }
        sort_desc(&mut dual_rays);
        let dual_rows: Vec<_> = dual_rays.iter().map(|v| linalg::to_big(v)).collect();
        let mut rays = double_description::extreme_rays(&dual_rows, n)
            .iter()
            .map(|r| linalg::from_big(r))
            .collect::<Result<Vec<_>, _>>()?;
        sort_desc(&mut rays);

        let mut cone = FaceLatticeCone {
            ambient: n,
            generators: generators.to_vec(),
            rays,
            dual_rays,
            faces: Vec::new(),
            by_zero_set: HashMap::new(),
        };
        cone.enumerate_faces()?;
        Ok(cone)
    }

    fn rays_on(&self, zero_set: &[usize]) -> Vec<usize> {
        (0..self.rays.len())
            .filter(|&r| zero_set.iter().all(|&d| dot(&self.rays[r], &self.dual_rays[d]) == 0))
            .collect()
    }

    fn closure(&self, zero_set: &BTreeSet<usize>) -> Vec<usize> {
        let zs: Vec<usize> = zero_set.iter().copied().collect();
        let rays = self.rays_on(&zs);
        (0..self.dual_rays.len())
            .filter(|&d| rays.iter().all(|&r| dot(&self.rays[r], &self.dual_rays[d]) == 0))
            .collect()
    }

    fn enumerate_faces(&mut self) -> Result<(), ConeError> {
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut queue = VecDeque::new();
        let top = self.closure(&BTreeSet::new());
        seen.insert(top.clone());
        queue.push_back(top);
        while let Some(z) = queue.pop_front() {
            for d in 0..self.dual_rays.len() {
                if z.contains(&d) {
                    continue;
                }
                let mut bigger: BTreeSet<usize> = z.iter().copied().collect();
                bigger.insert(d);
                let c = self.closure(&bigger);
                if seen.insert(c.clone()) {
                    queue.push_back(c);
                }
            }
        }

        let mut faces = Vec::with_capacity(seen.len());
        for zero_set in seen {
            let rays = self.rays_on(&zero_set);
            let ray_vectors: Vec<IntVector> = rays.iter().map(|&r| self.rays[r].clone()).collect();
            let lattice = Sublattice::canonical_form(self.ambient, &ray_vectors)?.saturation()?;
            let span: Vec<RatVector> = lattice.basis().iter().map(|b| linalg::to_rational(b)).collect();
            let span_normals = linalg::normal_form::orthogonal_complement(&span, self.ambient)
                .iter()
                .map(|w| linalg::from_big(w))
                .collect::<Result<Vec<_>, _>>()?;
            let generators = (0..self.generators.len())
                .filter(|&g| zero_set.iter().all(|&d| dot(&self.generators[g], &self.dual_rays[d]) == 0))
                .collect();
            faces.push(Face {
                id: 0,
                dim: lattice.rank(),
                zero_set,
                rays,
                generators,
                lattice,
                span_normals,
            });
        }
        faces.sort_by(|a, b| (a.dim, &a.rays).cmp(&(b.dim, &b.rays)));
        for (i, f) in faces.iter_mut().enumerate() {
            f.id = i;
            self.by_zero_set.insert(f.zero_set.clone(), i);
        }
        self.faces = faces;
        Ok(())
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient
    }

    pub fn generators(&self) -> &[IntVector] {
        &self.generators
    }

    /// Primitive generators of the extremal rays of `C`.
    pub fn rays(&self) -> &[IntVector] {
        &self.rays
    }

    /// Primitive generators `v_ρ` of the extremal rays of the dual cone `σ`.
    pub fn dual_rays(&self) -> &[IntVector] {
        &self.dual_rays
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face(&self, id: FaceId) -> Result<&Face, ConeError> {
        self.faces.get(id).ok_or(ConeError::UnknownFace(id))
    }

    /// The cone itself.
    pub fn top(&self) -> FaceId {
        self.faces.len() - 1
    }

    /// The trivial face `{0}`.
    pub fn origin(&self) -> FaceId {
        0
    }

    pub fn face_by_zero_set(&self, zero_set: &[usize]) -> Option<FaceId> {
        self.by_zero_set.get(zero_set).copied()
    }

    /// The pairings `⟨u, v_ρ⟩` with every dual ray.
    pub fn heights(&self, u: &[i64]) -> Vec<i128> {
        self.dual_rays.iter().map(|v| dot(u, v)).collect()
    }

    pub fn contains(&self, u: &[i64]) -> bool {
        self.dual_rays.iter().all(|v| dot(u, v) >= 0)
    }

    pub fn face_contains(&self, face: FaceId, u: &[i64]) -> bool {
        self.contains(u) && self.faces[face].zero_set.iter().all(|&d| dot(u, &self.dual_rays[d]) == 0)
    }

    /// Smallest face containing the integer point `u`, or `None` when `u ∉ C`.
    pub fn smallest_face_of(&self, u: &[i64]) -> Option<FaceId> {
        let mut zero_set = Vec::new();
        for (d, v) in self.dual_rays.iter().enumerate() {
            match dot(u, v) {
                h if h < 0 => return None,
                0 => zero_set.push(d),
                _ => {}
            }
        }
        self.by_zero_set.get(&zero_set).copied()
    }

    pub fn smallest_face_containing(&self, u: &[BigRational]) -> Result<FaceId, ConeError> {
        let mut zero_set = Vec::new();
        for (d, v) in self.dual_rays.iter().enumerate() {
            let h = dot_rational(u, v);
            if h.is_negative() {
                return Err(ConeError::NotInCone);
            }
            if h.is_zero() {
                zero_set.push(d);
            }
        }
        Ok(self.by_zero_set[&zero_set])
    }

    /// `u ∈ relint(D)`: `u ∈ D` and `⟨u, v_ρ⟩ > 0` for the dual rays not in `D*`.
    pub fn relative_interior_contains(&self, face: FaceId, u: &[BigRational]) -> Result<bool, ConeError> {
        let f = self.face(face)?;
        Ok(self.dual_rays.iter().enumerate().all(|(d, v)| {
            let h = dot_rational(u, v);
            if f.zero_set.binary_search(&d).is_ok() {
                h.is_zero()
            } else {
                h.is_positive()
            }
        }))
    }

    /// Whether some `v ∈ D*` pairs positively with `a`. Checking the extremal
    /// rays of `D*` suffices since `D*` is their conic hull.
    pub fn star_has_positive_pairing(&self, face: FaceId, a: &[BigRational]) -> Result<bool, ConeError> {
        let f = self.face(face)?;
        Ok(f.zero_set.iter().any(|&d| dot_rational(a, &self.dual_rays[d]).is_positive()))
    }

    /// Integer variant of [`Self::star_has_positive_pairing`]; positive
    /// rescaling of `a` does not change the answer.
    pub fn star_positive(&self, face: FaceId, a: &[i64]) -> bool {
        self.faces[face].zero_set.iter().any(|&d| dot(a, &self.dual_rays[d]) > 0)
    }

    /// Extremal rays of `D* = σ ∩ D^⊥`, as indices into [`Self::dual_rays`].
    pub fn star_rays(&self, face: FaceId) -> &[usize] {
        &self.faces[face].zero_set
    }

    /// `a ⪯ b`.
    pub fn is_subface(&self, a: FaceId, b: FaceId) -> bool {
        let (za, zb) = (&self.faces[a].zero_set, &self.faces[b].zero_set);
        zb.iter().all(|d| za.binary_search(d).is_ok())
    }

    /// `a ∩ b`.
    pub fn meet(&self, a: FaceId, b: FaceId) -> FaceId {
        let z: BTreeSet<usize> = self.faces[a].zero_set.iter().chain(&self.faces[b].zero_set).copied().collect();
        self.by_zero_set[&self.closure(&z)]
    }

    /// The smallest face containing both `a` and `b`.
    pub fn join(&self, a: FaceId, b: FaceId) -> FaceId {
        let zb = &self.faces[b].zero_set;
        let z: Vec<usize> = self.faces[a].zero_set.iter().filter(|d| zb.binary_search(d).is_ok()).copied().collect();
        self.by_zero_set[&self.closure(&z.into_iter().collect())]
    }

    /// Faces strictly containing `face`.
    pub fn strict_superfaces(&self, face: FaceId) -> impl Iterator<Item = FaceId> + '_ {
        (0..self.faces.len()).filter(move |&f| f != face && self.is_subface(face, f))
    }

    /// Human-readable name: the primitive rays spanning the face.
    pub fn face_label(&self, face: FaceId) -> String {
        let f = &self.faces[face];
        if f.rays.is_empty() {
            return "{0}".to_string();
        }
        let parts: Vec<String> = f.rays.iter().map(|&r| format_vector(&self.rays[r])).collect();
        format!("⟨{}⟩", parts.join(","))
    }

    /// Stable key: sorted indices of the construction generators on the face.
    pub fn face_key(&self, face: FaceId) -> &[usize] {
        &self.faces[face].generators
    }

    pub fn face_by_key(&self, key: &[usize]) -> Option<FaceId> {
        self.faces.iter().position(|f| f.generators == key)
    }
}

impl fmt::Display for FaceLatticeCone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.rays.iter().map(|r| format_vector(r)).collect();
        write!(f, "cone({})", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::to_rational;

    fn quadrant() -> FaceLatticeCone {
        FaceLatticeCone::build(&[vec![1, 0], vec![0, 1]]).unwrap()
    }

    #[test]
    fn quadrant_faces() {
        let c = quadrant();
        assert_eq!(c.faces().len(), 4);
        assert_eq!(c.dual_rays(), &[vec![1, 0], vec![0, 1]]);
        assert_eq!(c.face(c.top()).unwrap().dim, 2);
        assert_eq!(c.face(c.origin()).unwrap().dim, 0);
    }

    #[test]
    fn octant_is_boolean() {
        let c = FaceLatticeCone::build(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
        assert_eq!(c.faces().len(), 8);
        let by_dim: Vec<usize> = (0..=3).map(|d| c.faces().iter().filter(|f| f.dim == d).count()).collect();
        assert_eq!(by_dim, vec![1, 3, 3, 1]);
    }

    #[test]
    fn skew_cone_dual_rays() {
        let c = FaceLatticeCone::build(&[vec![1, 0], vec![1, 2]]).unwrap();
        let mut d = c.dual_rays().to_vec();
        d.sort();
        assert_eq!(d, vec![vec![0, 1], vec![2, -1]]);
        for g in c.generators() {
            assert!(c.heights(g).iter().all(|&h| h >= 0));
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(FaceLatticeCone::build(&[vec![1, 0], vec![-1, 0], vec![0, 1]]).unwrap_err(), ConeError::NotPointed);
        assert_eq!(FaceLatticeCone::build(&[vec![1, 0]]).unwrap_err(), ConeError::NotFullDimensional);
        assert_eq!(FaceLatticeCone::build(&[vec![0, 0], vec![1, 1]]).unwrap_err(), ConeError::ZeroGenerator(0));
        assert_eq!(FaceLatticeCone::build(&[]).unwrap_err(), ConeError::NoGenerators);
    }

    #[test]
    fn relative_interiors() {
        let c = quadrant();
        let x_axis = c.face_by_key(&[0]).unwrap();
        assert!(c.relative_interior_contains(x_axis, &to_rational(&[1, 0])).unwrap());
        assert!(!c.relative_interior_contains(x_axis, &to_rational(&[0, 0])).unwrap());
        assert!(c.relative_interior_contains(c.top(), &to_rational(&[1, 1])).unwrap());
        assert_eq!(c.relative_interior_contains(99, &to_rational(&[1, 1])), Err(ConeError::UnknownFace(99)));
    }

    #[test]
    fn smallest_faces() {
        let c = quadrant();
        assert_eq!(c.smallest_face_containing(&to_rational(&[3, 0])).unwrap(), c.face_by_key(&[0]).unwrap());
        assert_eq!(c.smallest_face_containing(&to_rational(&[0, 0])).unwrap(), c.origin());
        assert_eq!(c.smallest_face_containing(&to_rational(&[2, 5])).unwrap(), c.top());
        assert_eq!(c.smallest_face_containing(&to_rational(&[-1, 5])), Err(ConeError::NotInCone));
    }

    #[test]
    fn star_pairings() {
        let c = quadrant();
        let x_axis = c.face_by_key(&[0]).unwrap();
        assert!(!c.star_has_positive_pairing(x_axis, &to_rational(&[5, -1])).unwrap());
        assert!(c.star_has_positive_pairing(x_axis, &to_rational(&[-1, 1])).unwrap());
        assert!(!c.star_has_positive_pairing(c.top(), &to_rational(&[7, 7])).unwrap());
    }

    #[test]
    fn labels_use_primitive_rays() {
        let c = FaceLatticeCone::build(&[vec![2, 0], vec![0, 1], vec![1, 1]]).unwrap();
        let x_axis = c.face_by_key(&[0]).unwrap();
        assert_eq!(c.face_label(x_axis), "⟨(1,0)⟩");
        assert_eq!(c.face_label(c.origin()), "{0}");
        assert_eq!(c.face_label(c.top()), "⟨(1,0),(0,1)⟩");
    }
}
