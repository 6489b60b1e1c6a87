//! Lattice points in height boxes `{x ∈ L : lo ≤ ⟨x, f⟩ ≤ hi for all f}`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use crate::linalg::normal_form::{self, Row};
use crate::linalg::{dot, IntVector, LinalgError, Sublattice};

/// All points of `lattice` whose pairings with every functional lie in
/// `[lo, hi]`, sorted lexicographically.
///
/// The functionals restricted to the lattice must have full rank, which
/// makes the box bounded; with pointed full-dimensional cones the dual rays
/// always qualify. Enumeration walks the values of `rank(lattice)` chosen
/// pairings and solves back for lattice coordinates.
pub fn lattice_points_in_box(
    lattice: &Sublattice,
    functionals: &[IntVector],
    lo: i64,
    hi: i64,
) -> Result<Vec<IntVector>, LinalgError> {
    lattice_points_in_ranges(lattice, functionals, &vec![(lo, hi); functionals.len()])
}

/// Like [`lattice_points_in_box`] with a separate range per functional.
pub fn lattice_points_in_ranges(
    lattice: &Sublattice,
    functionals: &[IntVector],
    ranges: &[(i64, i64)],
) -> Result<Vec<IntVector>, LinalgError> {
    let n = lattice.ambient_rank();
    let r = lattice.rank();
    if ranges.iter().any(|(lo, hi)| lo > hi) {
        return Ok(Vec::new());
    }
    if r == 0 {
        let zero = vec![0; n];
        return Ok(if ranges.iter().all(|&(lo, hi)| lo <= 0 && 0 <= hi) { vec![zero] } else { Vec::new() });
    }
    let basis = lattice.basis();
    let restricted: Vec<Row> = functionals
        .iter()
        .map(|f| basis.iter().map(|b| BigInt::from(dot(b, f))).collect())
        .collect();

    let mut chosen: Vec<Row> = Vec::new();
    let mut bounds: Vec<(i64, i64)> = Vec::new();
    for (f, &range) in restricted.iter().zip(ranges) {
        chosen.push(f.clone());
        if normal_form::rank(&chosen, r) < chosen.len() {
            chosen.pop();
        } else {
            bounds.push(range);
        }
        if chosen.len() == r {
            break;
        }
    }
    assert_eq!(chosen.len(), r, "functionals do not bound the lattice");

    // c·W = y with W[i][k] = chosen[k][i]
    let w: Vec<Vec<BigRational>> = (0..r)
        .map(|i| (0..r).map(|k| BigRational::from_integer(chosen[k][i].clone())).collect())
        .collect();
    let det = normal_form::determinant(&w).abs();
    let det_int = det.to_integer();
    // rows of D·W^{-1}: solve e_k = x·W for each k
    let mut adj: Vec<Vec<i128>> = Vec::with_capacity(r);
    for k in 0..r {
        let e: Vec<BigRational> = (0..r)
            .map(|j| BigRational::from_integer(BigInt::from(i64::from(j == k))))
            .collect();
        let row = normal_form::solve_left(&w, &e).expect("invertible");
        adj.push(
            row.iter()
                .map(|x| (x * &det).to_integer().to_i128().ok_or(LinalgError::Overflow))
                .collect::<Result<_, _>>()?,
        );
    }
    let d = det_int.to_i128().ok_or(LinalgError::Overflow)?;

    let mut out = Vec::new();
    let mut y: Vec<i64> = bounds.iter().map(|b| b.0).collect();
    loop {
        // c_i · D = Σ_k y_k · adj[k][i]
        let mut coords = Vec::with_capacity(r);
        let mut integral = true;
        for i in 0..r {
            let s: i128 = (0..r).map(|k| y[k] as i128 * adj[k][i]).sum();
            let (q, rem) = s.div_rem(&d);
            if rem != 0 {
                integral = false;
                break;
            }
            coords.push(q);
        }
        if integral {
            let mut x = vec![0i128; n];
            for (c, b) in coords.iter().zip(basis) {
                for (xi, &bi) in x.iter_mut().zip(b) {
                    *xi += c * bi as i128;
                }
            }
            if let Some(x) = x.iter().map(|&v| i64::try_from(v).ok()).collect::<Option<IntVector>>() {
                if functionals.iter().zip(ranges).all(|(f, &(lo, hi))| {
                    let h = dot(&x, f);
                    lo as i128 <= h && h <= hi as i128
                }) {
                    out.push(x);
                }
            }
        }
        // odometer
        let mut k = 0;
        loop {
            if k == r {
                out.sort();
                return Ok(out);
            }
            if y[k] < bounds[k].1 {
                y[k] += 1;
                break;
            }
            y[k] = bounds[k].0;
            k += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_square_counts() {
        let pts = lattice_points_in_box(&Sublattice::full(2), &[vec![1, 0], vec![0, 1]], 0, 2).unwrap();
        assert_eq!(pts.len(), 9);
        let even = Sublattice::canonical_form(2, &[vec![2, 0], vec![0, 1]]).unwrap();
        let pts = lattice_points_in_box(&even, &[vec![1, 0], vec![0, 1]], 0, 3).unwrap();
        assert_eq!(pts.len(), 2 * 4);
    }

    #[test]
    fn skew_functionals_match_brute_force() {
        let fs = vec![vec![0, 1], vec![2, -1]];
        let pts = lattice_points_in_box(&Sublattice::full(2), &fs, -3, 4).unwrap();
        let mut brute = Vec::new();
        for x in -20..=20 {
            for y in -20..=20 {
                let v = vec![x, y];
                if fs.iter().all(|f| (-3..=4).contains(&(dot(&v, f) as i64))) {
                    brute.push(v);
                }
            }
        }
        brute.sort();
        assert_eq!(pts, brute);
    }

    #[test]
    fn lower_rank_lattice() {
        let line = Sublattice::canonical_form(2, &[vec![3, 0]]).unwrap();
        let pts = lattice_points_in_box(&line, &[vec![1, 0], vec![0, 1]], 0, 8).unwrap();
        assert_eq!(pts, vec![vec![0, 0], vec![3, 0], vec![6, 0]]);
    }
}
