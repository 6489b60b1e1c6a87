//! Named example monoids.

use crate::linalg::IntVector;
use crate::monoid::SeminormalMonoid;

fn unit(n: usize, i: usize) -> IntVector {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

fn build(cone: &[IntVector], data: &[(Vec<IntVector>, Vec<IntVector>)]) -> SeminormalMonoid {
    SeminormalMonoid::from_face_data(cone, data).expect("catalog monoid is valid")
}

fn quadrant_with(x_index: i64, y_index: i64) -> SeminormalMonoid {
    let mut data = Vec::new();
    if x_index > 1 {
        data.push((vec![vec![1, 0]], vec![vec![x_index, 0]]));
    }
    if y_index > 1 {
        data.push((vec![vec![0, 1]], vec![vec![0, y_index]]));
    }
    build(&[vec![1, 0], vec![0, 1]], &data)
}

/// `Z^2_{≥0}`.
pub fn quadrant() -> SeminormalMonoid {
    quadrant_with(1, 1)
}

/// Generated by `(2,0), (0,1), (1,1)`.
pub fn whitney() -> SeminormalMonoid {
    s_n(2)
}

/// The quadrant with the lattice `nZ` on the x-axis.
pub fn s_n(n: i64) -> SeminormalMonoid {
    quadrant_with(n, 1)
}

/// Generated by `(4,0), (0,1), (1,1), (2,1), (3,1)`.
pub fn fan_4() -> SeminormalMonoid {
    SeminormalMonoid::from_generators(&[vec![4, 0], vec![0, 1], vec![1, 1], vec![2, 1], vec![3, 1]])
        .expect("catalog monoid is valid")
}

/// The octant with `M = 2Ze2 + Ze3` on `⟨e2,e3⟩` and `2Ze1 + Ze3` on `⟨e1,e3⟩`.
pub fn cube() -> SeminormalMonoid {
    build(
        &[unit(3, 0), unit(3, 1), unit(3, 2)],
        &[
            (vec![unit(3, 1), unit(3, 2)], vec![vec![0, 2, 0], vec![0, 0, 1]]),
            (vec![unit(3, 0), unit(3, 2)], vec![vec![2, 0, 0], vec![0, 0, 1]]),
        ],
    )
}

/// `Z^n_{≥0}` with the lattice `mZ^d` on the face `⟨e_1, …, e_d⟩`.
pub fn coordinate_face(n: usize, d: usize, m: i64) -> SeminormalMonoid {
    let cone: Vec<IntVector> = (0..n).map(|i| unit(n, i)).collect();
    let face: Vec<IntVector> = (0..d).map(|i| unit(n, i)).collect();
    let lattice: Vec<IntVector> = face.iter().map(|v| v.iter().map(|x| x * m).collect()).collect();
    build(&cone, &[(face, lattice)])
}

/// Monoids of rank at most 3 whose face indices are at most 6. This
/// includes the named examples above, except `coordinate_face(3, 2, 3)` whose plane
/// has index 9.
pub fn test_corpus() -> Vec<(String, SeminormalMonoid)> {
    let octant: Vec<IntVector> = (0..3).map(|i| unit(3, i)).collect();
    let pyramid = vec![vec![1, 0, 1], vec![0, 1, 1], vec![-1, 0, 1], vec![0, -1, 1]];
    let skew = vec![vec![1, 0], vec![1, 2]];
    let mut corpus: Vec<(String, SeminormalMonoid)> = vec![
        ("whitney".into(), whitney()),
        ("fan4".into(), fan_4()),
        ("quadrant".into(), quadrant()),
        ("cube".into(), cube()),
    ];
    for n in 3..=6 {
        corpus.push((format!("s_{n}"), s_n(n)));
    }
    corpus.push(("coord_d1".into(), coordinate_face(3, 1, 3)));
    corpus.push(("half_line".into(), build(&[vec![1]], &[])));
    corpus.push(("axes_2_3".into(), quadrant_with(2, 3)));
    corpus.push(("axes_4_2".into(), quadrant_with(4, 2)));
    corpus.push(("skew".into(), build(&skew, &[])));
    corpus.push(("skew_ray".into(), build(&skew, &[(vec![vec![1, 0]], vec![vec![2, 0]])])));
    corpus.push(("skew_other_ray".into(), build(&skew, &[(vec![vec![1, 2]], vec![vec![3, 6]])])));
    corpus.push(("pyramid".into(), build(&pyramid, &[])));
    corpus.push((
        "pyramid_edge".into(),
        build(&pyramid, &[(vec![vec![1, 0, 1]], vec![vec![2, 0, 2]])]),
    ));
    corpus.push((
        "pyramid_facet".into(),
        build(&pyramid, &[(vec![vec![1, 0, 1], vec![0, 1, 1]], vec![vec![1, 0, 1], vec![0, 3, 3]])]),
    ));
    corpus.push(("octant_axis_6".into(), build(&octant, &[(vec![unit(3, 0)], vec![vec![6, 0, 0]])])));
    corpus.push((
        "octant_plane_axis".into(),
        build(
            &octant,
            &[
                (vec![unit(3, 0), unit(3, 1)], vec![vec![2, 0, 0], vec![0, 2, 0]]),
                (vec![unit(3, 2)], vec![vec![0, 0, 5]]),
            ],
        ),
    ));
    corpus.push((
        "octant_plane_5".into(),
        build(&octant, &[(vec![unit(3, 0), unit(3, 1)], vec![vec![5, 0, 0], vec![0, 1, 0]])]),
    ));
    corpus.push((
        "octant_checker".into(),
        build(
            &octant,
            &[
                (vec![unit(3, 0), unit(3, 1)], vec![vec![1, 1, 0], vec![0, 2, 0]]),
                (vec![unit(3, 0)], vec![vec![6, 0, 0]]),
            ],
        ),
    ));
    corpus
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_respects_limits() {
        let corpus = test_corpus();
        assert!(corpus.len() >= 20);
        for (name, s) in &corpus {
            assert!(s.rank() <= 3, "{name}");
            for f in s.cone().faces() {
                let index = s.quotient(f.id).index().unwrap();
                assert!(index <= 6, "{name}: index {index}");
            }
        }
    }
}
