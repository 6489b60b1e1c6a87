//! Exact volume of `{c ∈ R^d : 0 ≤ ⟨f, c⟩ ≤ 1 for every functional f}`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::linalg::normal_form;
use crate::linalg::IntVector;

type Point = Vec<BigRational>;

fn pairing(f: &[i64], c: &[BigRational]) -> BigRational {
    f.iter().zip(c).map(|(&a, x)| x * BigInt::from(a)).sum()
}

/// Vertices of the polytope, sorted lexicographically.
///
/// Every vertex is the solution of `d` linearly independent tight
/// hyperplanes `⟨f, c⟩ = 0` or `⟨f, c⟩ = 1`; all such solutions are tried and
/// the feasible ones kept.
pub fn vertices(functionals: &[IntVector], d: usize) -> Vec<Point> {
    if d == 0 {
        return vec![Vec::new()];
    }
    let hyperplanes: Vec<(usize, BigRational)> = (0..functionals.len())
        .flat_map(|i| [(i, BigRational::zero()), (i, BigRational::one())])
        .collect();
    let mut found: BTreeSet<Point> = BTreeSet::new();
    let mut pick: Vec<usize> = (0..d).collect();
    if hyperplanes.len() < d {
        return Vec::new();
    }
    loop {
        let fs: Vec<usize> = pick.iter().map(|&k| hyperplanes[k].0).collect();
        let distinct = fs.windows(2).all(|w| w[0] != w[1]);
        if distinct {
            // x·A = b with column j of A equal to functional j
            let a: Vec<Vec<BigRational>> = (0..d)
                .map(|row| fs.iter().map(|&i| BigRational::from_integer(functionals[i][row].into())).collect())
                .collect();
            let b: Vec<BigRational> = pick.iter().map(|&k| hyperplanes[k].1.clone()).collect();
            if let Some(c) = normal_form::solve_left(&a, &b) {
                let feasible = functionals.iter().all(|f| {
                    let h = pairing(f, &c);
                    !h.is_negative() && h <= BigRational::one()
                });
                if feasible {
                    found.insert(c);
                }
            }
        }
        if !next_combination(&mut pick, hyperplanes.len()) {
            break;
        }
    }
    found.into_iter().collect()
}

fn next_combination(pick: &mut [usize], n: usize) -> bool {
    let k = pick.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if pick[i] < n - k + i {
            pick[i] += 1;
            for j in i + 1..k {
                pick[j] = pick[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn affine_rank(points: &[&Point], d: usize) -> usize {
    if points.len() <= 1 {
        return 0;
    }
    let rows: Vec<Vec<BigRational>> =
        points[1..].iter().map(|p| p.iter().zip(points[0]).map(|(a, b)| a - b).collect()).collect();
    let integral: Vec<normal_form::Row> = rows.iter().map(|r| normal_form::clear_denominators(r)).collect();
    normal_form::rank(&integral, d)
}

/// Pulling triangulation: cone from the least vertex over the facets of the
/// face that avoid it, recursively.
fn triangulate(
    face: &[usize],
    dim: usize,
    verts: &[Point],
    tight: &[Vec<(usize, bool)>],
    d: usize,
    out: &mut Vec<Vec<usize>>,
) {
    if dim == 0 {
        out.push(vec![face[0]]);
        return;
    }
    let apex = face[0];
    let labels: BTreeSet<(usize, bool)> = face.iter().flat_map(|&v| tight[v].iter().copied()).collect();
    let mut facets: BTreeSet<Vec<usize>> = BTreeSet::new();
    for label in labels {
        let sub: Vec<usize> = face.iter().copied().filter(|&v| tight[v].contains(&label)).collect();
        if sub.len() == face.len() || sub.contains(&apex) {
            continue;
        }
        let pts: Vec<&Point> = sub.iter().map(|&v| &verts[v]).collect();
        if affine_rank(&pts, d) == dim - 1 {
            facets.insert(sub);
        }
    }
    for facet in facets {
        let mut simplices = Vec::new();
        triangulate(&facet, dim - 1, verts, tight, d, &mut simplices);
        for mut s in simplices {
            s.insert(0, apex);
            out.push(s);
        }
    }
}

/// Lebesgue volume of the polytope in the given coordinates (`1` when
/// `d = 0`). The functionals must have rank `d` so the polytope is bounded.
pub fn box_polytope_volume(functionals: &[IntVector], d: usize) -> BigRational {
    if d == 0 {
        return BigRational::one();
    }
    let verts = vertices(functionals, d);
    let tight: Vec<Vec<(usize, bool)>> = verts
        .iter()
        .map(|c| {
            functionals
                .iter()
                .enumerate()
                .flat_map(|(i, f)| {
                    let h = pairing(f, c);
                    let mut t = Vec::new();
                    if h.is_zero() {
                        t.push((i, false));
                    }
                    if h.is_one() {
                        t.push((i, true));
                    }
                    t
                })
                .collect()
        })
        .collect();
    let all: Vec<usize> = (0..verts.len()).collect();
    let mut simplices = Vec::new();
    triangulate(&all, d, &verts, &tight, d, &mut simplices);
    let factorial: BigInt = (1..=d).map(BigInt::from).product();
    let total: BigRational = simplices
        .iter()
        .map(|s| {
            let m: Vec<Vec<BigRational>> =
                s[1..].iter().map(|&v| verts[v].iter().zip(&verts[s[0]]).map(|(a, b)| a - b).collect()).collect();
            normal_form::determinant(&m).abs()
        })
        .sum();
    total / BigRational::from_integer(factorial)
}
