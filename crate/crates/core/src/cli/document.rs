use serde::{Deserialize, Serialize};

use crate::linalg::IntVector;
use crate::monoid::{MonoidError, SeminormalMonoid};

/// The JSON input format.
///
/// Either `monoid_generators`, or `cone_generators` with optional
/// `face_lattices` naming faces by vectors they contain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonoidDocument {
    pub rank: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prime: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub monoid_generators: Option<Vec<IntVector>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cone_generators: Option<Vec<IntVector>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub face_lattices: Option<Vec<FaceLattice>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FaceLattice {
    pub face_rays: Vec<IntVector>,
    pub lattice_generators: Vec<IntVector>,
}

impl MonoidDocument {
    pub fn parse(text: &str) -> Result<Self, String> {
        let doc: MonoidDocument = serde_json::from_str(text).map_err(|e| e.to_string())?;
        doc.check_shape()?;
        Ok(doc)
    }

    fn check_shape(&self) -> Result<(), String> {
        let vectors: Vec<&IntVector> = match (&self.monoid_generators, &self.cone_generators) {
            (Some(g), None) => {
                if self.face_lattices.is_some() {
                    return Err("face_lattices requires cone_generators".into());
                }
                g.iter().collect()
            }
            (None, Some(c)) => c
                .iter()
                .chain(self.face_lattices.iter().flatten().flat_map(|f| f.face_rays.iter().chain(&f.lattice_generators)))
                .collect(),
            _ => return Err("exactly one of monoid_generators and cone_generators is required".into()),
        };
        if let Some(v) = vectors.iter().find(|v| v.len() != self.rank) {
            return Err(format!("vector of length {} in a rank {} document", v.len(), self.rank));
        }
        Ok(())
    }

    pub fn build(&self) -> Result<SeminormalMonoid, MonoidError> {
        if let Some(g) = &self.monoid_generators {
            return SeminormalMonoid::from_generators(g);
        }
        let data: Vec<(Vec<IntVector>, Vec<IntVector>)> = self
            .face_lattices
            .iter()
            .flatten()
            .map(|f| (f.face_rays.clone(), f.lattice_generators.clone()))
            .collect();
        SeminormalMonoid::from_face_data(self.cone_generators.as_deref().unwrap_or_default(), &data)
    }

    /// The document listing the cone's rays and the proper RUFs only.
    pub fn normalized(s: &SeminormalMonoid, prime: Option<u64>) -> Self {
        let (rays, data) = s.normalized_face_data();
        MonoidDocument {
            rank: s.rank(),
            prime,
            monoid_generators: None,
            cone_generators: Some(rays),
            face_lattices: Some(
                data.into_iter()
                    .map(|(face_rays, lattice_generators)| FaceLattice { face_rays, lattice_generators })
                    .collect(),
            ),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_both_forms() {
        let a = MonoidDocument::parse(r#"{"rank":2,"prime":3,"monoid_generators":[[2,0],[0,1],[1,1]]}"#).unwrap();
        let b = MonoidDocument::parse(
            r#"{"rank":2,"cone_generators":[[1,0],[0,1]],"face_lattices":[{"face_rays":[[1,0]],"lattice_generators":[[2,0]]}]}"#,
        )
        .unwrap();
        assert_eq!(a.prime, Some(3));
        assert!(a.build().unwrap().same_monoid(&b.build().unwrap()));
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(MonoidDocument::parse(r#"{"rank":2}"#).is_err());
        assert!(MonoidDocument::parse(r#"{"rank":2,"monoid_generators":[[1,0,0]]}"#).is_err());
        assert!(MonoidDocument::parse(r#"{"rank":2,"monoid_generators":[[1,0]],"cone_generators":[[1,0]]}"#).is_err());
        assert!(MonoidDocument::parse(r#"{"rank":2,"monoid_generators":[[1,0]],"extra":1}"#).is_err());
        assert!(MonoidDocument::parse("not json").is_err());
    }
}
