//! Dense integer normal forms over arbitrary-precision integers.
//!
//! Matrices are plain `Vec<Vec<BigInt>>` in row-major order. Everything here
//! is desk-scale: ranks stay below ten, so the textbook algorithms are used.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub(crate) type Row = Vec<BigInt>;

fn sub_multiple(rows: &mut [Row], target: usize, src: usize, factor: &BigInt) {
    let src_row = rows[src].clone();
    for (t, s) in rows[target].iter_mut().zip(src_row.iter()) {
        *t -= factor * s;
    }
}

/// Row-style Hermite normal form, pivoting only inside the first
/// `pivot_cols` columns.
///
/// Row operations act on whole rows, so extra columns to the right carry the
/// unimodular transform when the matrix is augmented with an identity block.
/// Pivots are positive and entries above each pivot are reduced into
/// `[0, pivot)`. Returns the rank; pivot rows come first.
pub(crate) fn hermite_rows(rows: &mut [Row], pivot_cols: usize) -> usize {
    let mut rank = 0;
    for col in 0..pivot_cols {
        if rank == rows.len() {
            break;
        }
        loop {
            let pick = (rank..rows.len())
                .filter(|&i| !rows[i][col].is_zero())
                .min_by(|&i, &j| rows[i][col].abs().cmp(&rows[j][col].abs()));
            let Some(i) = pick else { break };
            rows.swap(rank, i);
            let mut clean = true;
            for j in rank + 1..rows.len() {
                if rows[j][col].is_zero() {
                    continue;
                }
                let q = rows[j][col].div_floor(&rows[rank][col]);
                sub_multiple(rows, j, rank, &q);
                if !rows[j][col].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if rows[rank][col].is_zero() {
            continue;
        }
        if rows[rank][col].is_negative() {
            for x in rows[rank].iter_mut() {
                *x = -&*x;
            }
        }
        for i in 0..rank {
            let q = rows[i][col].div_floor(&rows[rank][col]);
            if !q.is_zero() {
                sub_multiple(rows, i, rank, &q);
            }
        }
        rank += 1;
    }
    rank
}

/// Basis of the integer left kernel `{x ∈ Z^m : x·A = 0}` of an `m × ncols`
/// matrix.
pub(crate) fn left_kernel(a: &[Row], ncols: usize) -> Vec<Row> {
    let m = a.len();
    let mut aug: Vec<Row> = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..m).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
            row
        })
        .collect();
    let rank = hermite_rows(&mut aug, ncols);
    aug[rank..].iter().map(|r| r[ncols..].to_vec()).collect()
}

/// Rank over the rationals.
pub(crate) fn rank(rows: &[Row], ncols: usize) -> usize {
    let mut copy = rows.to_vec();
    hermite_rows(&mut copy, ncols)
}

/// Diagonal of the Smith normal form (nonzero entries only, each positive,
/// forming a divisibility chain).
pub(crate) fn smith_diagonal(mut m: Vec<Row>, ncols: usize) -> Vec<BigInt> {
    let nrows = m.len();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < nrows && t < ncols {
        let pick = (t..nrows)
            .flat_map(|i| (t..ncols).map(move |j| (i, j)))
            .filter(|&(i, j)| !m[i][j].is_zero())
            .min_by(|&(a, b), &(c, d)| m[a][b].abs().cmp(&m[c][d].abs()));
        let Some((pi, pj)) = pick else { break };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut changed = false;
            for i in t + 1..nrows {
                if m[i][t].is_zero() {
                    continue;
                }
                let q = m[i][t].div_floor(&m[t][t]);
                sub_multiple(&mut m, i, t, &q);
                if !m[i][t].is_zero() {
                    changed = true;
                }
            }
            for j in t + 1..ncols {
                if m[t][j].is_zero() {
                    continue;
                }
                let q = m[t][j].div_floor(&m[t][t]);
                for row in m.iter_mut() {
                    let v = &q * &row[t];
                    row[j] -= v;
                }
                if !m[t][j].is_zero() {
                    changed = true;
                }
            }
            if !changed {
                // the pivot must divide the remaining block
                let bad = (t + 1..nrows)
                    .flat_map(|i| (t + 1..ncols).map(move |j| (i, j)))
                    .find(|&(i, j)| !m[i][j].is_multiple_of(&m[t][t]));
                match bad {
                    None => break,
                    Some((i, _)) => {
                        let src = m[i].clone();
                        for (x, s) in m[t].iter_mut().zip(src.iter()) {
                            *x += s;
                        }
                        continue;
                    }
                }
            }
            // move the smallest nonzero entry of row/column t to the pivot
            let pick = (t..nrows)
                .map(|i| (i, t))
                .chain((t + 1..ncols).map(|j| (t, j)))
                .filter(|&(i, j)| !m[i][j].is_zero())
                .min_by(|&(a, b), &(c, d)| m[a][b].abs().cmp(&m[c][d].abs()));
            if let Some((pi, pj)) = pick {
                m.swap(t, pi);
                for row in m.iter_mut() {
                    row.swap(t, pj);
                }
            }
        }
        diag.push(m[t][t].abs());
        t += 1;
    }
    diag
}

/// Integer rows spanning the rational orthogonal complement of `span`.
pub(crate) fn orthogonal_complement(span: &[Vec<BigRational>], n: usize) -> Vec<Row> {
    if span.is_empty() {
        return (0..n)
            .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect();
    }
    let integral: Vec<Row> = span.iter().map(|v| clear_denominators(v)).collect();
    // w with V·w = 0  <=>  w in the left kernel of V^T
    let transposed: Vec<Row> = (0..n).map(|j| integral.iter().map(|r| r[j].clone()).collect()).collect();
    left_kernel(&transposed, integral.len())
}

pub(crate) fn clear_denominators(v: &[BigRational]) -> Row {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect()
}

/// Divide by the gcd of the entries (zero vectors are returned unchanged).
pub(crate) fn primitive(v: &[BigInt]) -> Row {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() || g.is_one() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

/// Solve `x·A = b` over the rationals for square invertible `A`.
pub(crate) fn solve_left(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    // x·A = b  <=>  A^T x^T = b^T
    let n = a.len();
    let mut m: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> = (0..n).map(|j| a[j][i].clone()).collect();
            row.push(b[i].clone());
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&i| !m[i][col].is_zero())?;
        m.swap(col, piv);
        let inv = m[col][col].recip();
        for x in m[col].iter_mut() {
            *x *= &inv;
        }
        for i in 0..n {
            if i != col && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                let src = m[col].clone();
                for (x, s) in m[i].iter_mut().zip(src.iter()) {
                    *x -= &f * s;
                }
            }
        }
    }
    Some(m.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

/// Determinant by fraction-free elimination.
pub(crate) fn determinant(a: &[Vec<BigRational>]) -> BigRational {
    let n = a.len();
    let mut m = a.to_vec();
    let mut det = BigRational::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&i| !m[i][col].is_zero()) else {
            return BigRational::zero();
        };
        if piv != col {
            m.swap(col, piv);
            det = -det;
        }
        det *= &m[col][col];
        for i in col + 1..n {
            if m[i][col].is_zero() {
                continue;
            }
            let f = &m[i][col] / &m[col][col];
            let src = m[col].clone();
            for (x, s) in m[i].iter_mut().zip(src.iter()) {
                *x -= &f * s;
            }
        }
    }
    det
}
