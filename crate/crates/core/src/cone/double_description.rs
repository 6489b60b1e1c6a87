//! Double description method for pointed polyhedral cones.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::linalg::normal_form::{self, Row};

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Extreme rays of `{x : ⟨a, x⟩ ≥ 0 for every row a}`.
///
/// The rows must have rank `n`, which makes the cone pointed. Rays come back
/// primitive and deduplicated, in no particular order.
pub(crate) fn extreme_rays(rows: &[Row], n: usize) -> Vec<Row> {
    assert_eq!(normal_form::rank(rows, n), n, "inequality system must have full rank");

    let mut basis_idx = Vec::with_capacity(n);
    let mut chosen: Vec<Row> = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        if basis_idx.len() == n {
            break;
        }
        chosen.push(r.clone());
        if normal_form::rank(&chosen, n) > basis_idx.len() {
            basis_idx.push(i);
        } else {
            chosen.pop();
        }
    }

    // A_B r_j = e_j, i.e. r_j^T A_B^T = e_j^T
    let a_b: Vec<Vec<BigRational>> = basis_idx
        .iter()
        .map(|&i| rows[i].iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect();
    let a_bt: Vec<Vec<BigRational>> = (0..n).map(|i| (0..n).map(|j| a_b[j][i].clone()).collect()).collect();

    let mut rays: Vec<(Row, BTreeSet<usize>)> = (0..n)
        .map(|j| {
            let e: Vec<BigRational> =
                (0..n).map(|k| if k == j { BigRational::one() } else { BigRational::zero() }).collect();
            let r = normal_form::solve_left(&a_bt, &e).expect("independent rows");
            let ray = normal_form::primitive(&normal_form::clear_denominators(&r));
            let tight = basis_idx.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &i)| i).collect();
            (ray, tight)
        })
        .collect();

    for (i, row) in rows.iter().enumerate() {
        if basis_idx.contains(&i) {
            continue;
        }
        let vals: Vec<BigInt> = rays.iter().map(|(r, _)| dot(row, r)).collect();
        let mut next: Vec<(Row, BTreeSet<usize>)> = Vec::new();
        for ((r, tight), v) in rays.iter().zip(&vals) {
            if v.is_positive() {
                next.push((r.clone(), tight.clone()));
            } else if v.is_zero() {
                let mut t = tight.clone();
                t.insert(i);
                next.push((r.clone(), t));
            }
        }
        for (pi, (pr, pt)) in rays.iter().enumerate() {
            if !vals[pi].is_positive() {
                continue;
            }
            for (ni, (nr, nt)) in rays.iter().enumerate() {
                if !vals[ni].is_negative() {
                    continue;
                }
                let common: BTreeSet<usize> = pt.intersection(nt).copied().collect();
                if n >= 2 && common.len() < n - 2 {
                    continue;
                }
                let common_rows: Vec<Row> = common.iter().map(|&k| rows[k].clone()).collect();
                if normal_form::rank(&common_rows, n) + 2 != n {
                    continue;
                }
                let vp = &vals[pi];
                let vn = -&vals[ni];
                let combined: Row = nr.iter().zip(pr).map(|(a, b)| vp * a + &vn * b).collect();
                let mut t = common;
                t.insert(i);
                next.push((normal_form::primitive(&combined), t));
            }
        }
        rays = next;
    }

    let mut out: Vec<Row> = rays.into_iter().map(|(r, _)| r).collect();
    out.sort();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(v: &[&[i64]]) -> Vec<Row> {
        v.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn quadrant_is_self_dual() {
        let mut r = extreme_rays(&rows(&[&[1, 0], &[0, 1]]), 2);
        r.sort();
        assert_eq!(r, rows(&[&[0, 1], &[1, 0]]));
    }

    #[test]
    fn square_pyramid_has_four_facets() {
        let g = rows(&[&[1, 0, 1], &[0, 1, 1], &[-1, 0, 1], &[0, -1, 1]]);
        let r = extreme_rays(&g, 3);
        assert_eq!(r.len(), 4);
        for ray in &r {
            let tight = g.iter().filter(|x| dot(x, ray).is_zero()).count();
            assert_eq!(tight, 2);
            assert!(g.iter().all(|x| !dot(x, ray).is_negative()));
        }
    }
}
