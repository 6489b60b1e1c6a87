//! Exact integer lattice arithmetic.
//!
//! Vectors are stored as `i64` coordinates; every computation that can grow
//! intermediate values (normal forms, kernels, Smith forms) is carried out on
//! arbitrary-precision integers and converted back with an overflow check.
//! Nothing here touches floating point.

pub(crate) mod normal_form;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::prime::Prime;
use normal_form::Row;

/// A point of the ambient lattice `Z^n` (or of its dual).
pub type IntVector = Vec<i64>;
/// A point of `Q^n`; `BigRational` keeps every entry in lowest terms.
pub type RatVector = Vec<BigRational>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("rank mismatch: expected ambient rank {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("the smaller lattice is not contained in the larger one")]
    NotASublattice,
    #[error("the quotient group is infinite")]
    InfiniteQuotient,
    #[error("integer overflow converting an exact result to 64 bits")]
    Overflow,
}

pub(crate) fn to_big(v: &[i64]) -> Row {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub(crate) fn from_big(v: &[BigInt]) -> Result<IntVector, LinalgError> {
    v.iter().map(|x| x.to_i64().ok_or(LinalgError::Overflow)).collect()
}

pub fn to_rational(v: &[i64]) -> RatVector {
    v.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect()
}

/// Exact pairing `⟨u, v⟩` of integer vectors.
pub fn dot(u: &[i64], v: &[i64]) -> i128 {
    u.iter().zip(v).map(|(&a, &b)| a as i128 * b as i128).sum()
}

pub fn dot_rational(u: &[BigRational], v: &[i64]) -> BigRational {
    u.iter()
        .zip(v)
        .fold(BigRational::zero(), |acc, (a, &b)| acc + a * BigInt::from(b))
}

/// A sublattice of `Z^n`, stored in row-style Hermite normal form.
///
/// The basis rows have strictly increasing pivot columns, positive pivots,
/// and entries above each pivot reduced into `[0, pivot)`, so two equal
/// lattices have identical bases.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sublattice {
    ambient: usize,
    basis: Vec<IntVector>,
    pivots: Vec<usize>,
}

impl Sublattice {
    /// The lattice generated by `vectors` inside `Z^ambient`.
    pub fn canonical_form(ambient: usize, vectors: &[IntVector]) -> Result<Self, LinalgError> {
        let rows = vectors
            .iter()
            .map(|v| {
                check_len(ambient, v.len())?;
                Ok(to_big(v))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_big_rows(ambient, rows)
    }

    pub(crate) fn from_big_rows(ambient: usize, mut rows: Vec<Row>) -> Result<Self, LinalgError> {
        let rank = normal_form::hermite_rows(&mut rows, ambient);
        rows.truncate(rank);
        let basis = rows.iter().map(|r| from_big(r)).collect::<Result<Vec<_>, _>>()?;
        let pivots = basis
            .iter()
            .map(|r| r.iter().position(|&x| x != 0).expect("nonzero pivot row"))
            .collect();
        Ok(Sublattice { ambient, basis, pivots })
    }

    pub fn zero(ambient: usize) -> Self {
        Sublattice { ambient, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        let basis = (0..ambient)
            .map(|i| (0..ambient).map(|j| i64::from(i == j)).collect())
            .collect();
        Sublattice { ambient, basis, pivots: (0..ambient).collect() }
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[IntVector] {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    /// Integer coordinates of `v` in the canonical basis, if `v` is a member.
    pub fn coordinates(&self, v: &[i64]) -> Option<Vec<BigInt>> {
        let mut rest = to_big(v);
        let mut coords = Vec::with_capacity(self.rank());
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            if rest[..p].iter().any(|x| !x.is_zero()) {
                return None;
            }
            let (c, r) = rest[p].div_rem(&BigInt::from(row[p]));
            if !r.is_zero() {
                return None;
            }
            for (x, &b) in rest.iter_mut().zip(row) {
                *x -= &c * b;
            }
            coords.push(c);
        }
        rest.iter().all(Zero::is_zero).then_some(coords)
    }

    /// Membership test; `v` must have the ambient length.
    pub fn contains(&self, v: &[i64]) -> bool {
        debug_assert_eq!(v.len(), self.ambient);
        match self.contains_fast(v) {
            Some(answer) => answer,
            None => self.coordinates(v).is_some(),
        }
    }

    // Echelon back-substitution in i128; `None` signals overflow.
    fn contains_fast(&self, v: &[i64]) -> Option<bool> {
        let mut rest: Vec<i128> = v.iter().map(|&x| x as i128).collect();
        let mut start = 0;
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            if rest[start..p].iter().any(|&x| x != 0) {
                return Some(false);
            }
            let pivot = row[p] as i128;
            if rest[p] % pivot != 0 {
                return Some(false);
            }
            let c = rest[p] / pivot;
            for (x, &b) in rest.iter_mut().zip(row).skip(p) {
                *x = x.checked_sub(c.checked_mul(b as i128)?)?;
            }
            start = p + 1;
        }
        Some(rest[start..].iter().all(|&x| x == 0))
    }

    /// Checked membership.
    pub fn member(&self, v: &[i64]) -> Result<bool, LinalgError> {
        check_len(self.ambient, v.len())?;
        Ok(self.contains(v))
    }

    pub fn is_subset_of(&self, other: &Sublattice) -> bool {
        self.ambient == other.ambient && self.basis.iter().all(|b| other.contains(b))
    }

    pub fn sum(&self, other: &Sublattice) -> Result<Self, LinalgError> {
        check_len(self.ambient, other.ambient)?;
        let rows = self.basis.iter().chain(&other.basis).map(|v| to_big(v)).collect();
        Self::from_big_rows(self.ambient, rows)
    }

    pub fn scaled(&self, k: i64) -> Result<Self, LinalgError> {
        let rows = self
            .basis
            .iter()
            .map(|v| v.iter().map(|&x| BigInt::from(x) * k).collect())
            .collect();
        Self::from_big_rows(self.ambient, rows)
    }

    pub fn intersect(&self, other: &Sublattice) -> Result<Self, LinalgError> {
        check_len(self.ambient, other.ambient)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Sublattice::zero(self.ambient));
        }
        // x·B1 = y·B2  <=>  (x, y) in the left kernel of [B1; -B2]
        let stacked: Vec<Row> = self
            .basis
            .iter()
            .map(|v| to_big(v))
            .chain(other.basis.iter().map(|v| v.iter().map(|&x| BigInt::from(-x)).collect()))
            .collect();
        let kernel = normal_form::left_kernel(&stacked, self.ambient);
        let r1 = self.rank();
        let rows = kernel.iter().map(|k| combine(&k[..r1], &self.basis)).collect();
        Self::from_big_rows(self.ambient, rows)
    }

    /// `self ∩ span(span_basis)` where the span is taken over the rationals.
    pub fn intersect_with_span(&self, span_basis: &[RatVector]) -> Result<Self, LinalgError> {
        for v in span_basis {
            check_len(self.ambient, v.len())?;
        }
        if self.is_zero() {
            return Ok(self.clone());
        }
        let normals = normal_form::orthogonal_complement(span_basis, self.ambient);
        if normals.is_empty() {
            return Ok(self.clone());
        }
        // x·B·W^T = 0
        let images: Vec<Row> = self
            .basis
            .iter()
            .map(|b| {
                normals
                    .iter()
                    .map(|w| b.iter().zip(w).map(|(&x, y)| BigInt::from(x) * y).sum())
                    .collect()
            })
            .collect();
        let kernel = normal_form::left_kernel(&images, normals.len());
        let rows = kernel.iter().map(|k| combine(k, &self.basis)).collect();
        Self::from_big_rows(self.ambient, rows)
    }

    /// `Z^n ∩ span(self)`.
    pub fn saturation(&self) -> Result<Self, LinalgError> {
        let span: Vec<RatVector> = self.basis.iter().map(|b| to_rational(b)).collect();
        Sublattice::full(self.ambient).intersect_with_span(&span)
    }

    /// Whether `v` lies in the rational span of the lattice.
    pub fn span_contains(&self, v: &[i64]) -> bool {
        let mut rows: Vec<Row> = self.basis.iter().map(|b| to_big(b)).collect();
        rows.push(to_big(v));
        normal_form::rank(&rows, self.ambient) == self.rank()
    }
}

fn combine(coeffs: &[BigInt], basis: &[IntVector]) -> Row {
    let n = basis.first().map_or(0, Vec::len);
    let mut out = vec![BigInt::zero(); n];
    for (c, b) in coeffs.iter().zip(basis) {
        for (o, &x) in out.iter_mut().zip(b) {
            *o += c * x;
        }
    }
    out
}

fn check_len(expected: usize, found: usize) -> Result<(), LinalgError> {
    if expected != found {
        return Err(LinalgError::RankMismatch { expected, found });
    }
    Ok(())
}

impl fmt::Display for Sublattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.basis.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.basis.iter().map(|b| format!("Z{}", format_vector(b))).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

pub fn format_vector(v: &[i64]) -> String {
    let parts: Vec<String> = v.iter().map(i64::to_string).collect();
    format!("({})", parts.join(","))
}

/// Invariant-factor decomposition of a quotient of lattices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuotientInvariants {
    /// Torsion invariant factors `d_1 | d_2 | …`, all greater than one.
    pub invariant_factors: Vec<u64>,
    pub free_rank: usize,
}

impl QuotientInvariants {
    pub fn trivial() -> Self {
        QuotientInvariants { invariant_factors: Vec::new(), free_rank: 0 }
    }

    /// The order of the group when it is finite.
    pub fn index(&self) -> Option<u64> {
        if self.free_rank > 0 {
            return None;
        }
        self.invariant_factors.iter().try_fold(1u64, |acc, &d| acc.checked_mul(d))
    }

    pub fn exponent(&self) -> u64 {
        self.invariant_factors.last().copied().unwrap_or(1)
    }
}

impl fmt::Display for QuotientInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.invariant_factors.iter().map(|d| format!("Z/{d}")).collect();
        if self.free_rank > 0 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// The structure of `big / small` via Smith normal form.
pub fn quotient_invariants(big: &Sublattice, small: &Sublattice) -> Result<QuotientInvariants, LinalgError> {
    check_len(big.ambient, small.ambient)?;
    let coords = small
        .basis
        .iter()
        .map(|v| big.coordinates(v).ok_or(LinalgError::NotASublattice))
        .collect::<Result<Vec<_>, _>>()?;
    let diag = normal_form::smith_diagonal(coords, big.rank());
    let free_rank = big.rank() - diag.len();
    let invariant_factors = diag
        .iter()
        .filter(|d| !num_traits::One::is_one(*d))
        .map(|d| d.to_u64().ok_or(LinalgError::Overflow))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(QuotientInvariants { invariant_factors, free_rank })
}

/// Largest `t` such that `p^t` divides some invariant factor.
pub fn p_torsion_exponent(q: &QuotientInvariants, p: Prime) -> Result<u32, LinalgError> {
    if q.free_rank > 0 {
        return Err(LinalgError::InfiniteQuotient);
    }
    Ok(q.invariant_factors.iter().map(|&d| p.valuation(d)).max().unwrap_or(0))
}

/// `{x ∈ big : m·x ∈ small for some m coprime to p}`.
///
/// Computed as `small + p^T·big` where `p^T` is the `p`-part of the exponent
/// of `big/small`: in a Smith-adapted basis both sides are `⊕ gcd(d_i, p^T)Z`.
pub fn prime_to_p_saturation(big: &Sublattice, small: &Sublattice, p: Prime) -> Result<Sublattice, LinalgError> {
    let q = quotient_invariants(big, small)?;
    let t = p_torsion_exponent(&q, p)?;
    let pt = p.power(t).ok_or(LinalgError::Overflow)?;
    small.sum(&big.scaled(pt)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lat(n: usize, v: &[&[i64]]) -> Sublattice {
        Sublattice::canonical_form(n, &v.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn canonical_form_examples() {
        assert_eq!(lat(2, &[&[2, 0], &[4, 0]]).basis(), &[vec![2, 0]]);
        assert!(lat(2, &[]).is_zero());
        // brute force: both unit vectors are members
        let l = lat(2, &[&[2, 0], &[0, 1], &[1, 1]]);
        assert!(l.contains(&[1, 0]) && l.contains(&[0, 1]));
        assert_eq!(l, Sublattice::full(2));
    }

    #[test]
    fn canonical_form_rejects_wrong_length() {
        assert_eq!(
            Sublattice::canonical_form(2, &[vec![1, 2, 3]]),
            Err(LinalgError::RankMismatch { expected: 2, found: 3 })
        );
    }

    #[test]
    fn quotient_examples() {
        let z = lat(2, &[&[1, 0]]);
        let q = quotient_invariants(&z, &lat(2, &[&[2, 0]])).unwrap();
        assert_eq!(q.invariant_factors, vec![2]);
        assert_eq!(q.free_rank, 0);
        assert_eq!(quotient_invariants(&z, &z).unwrap(), QuotientInvariants::trivial());
        let q4 = quotient_invariants(&z, &lat(2, &[&[4, 0]])).unwrap();
        assert_eq!(q4.invariant_factors, vec![4]);
        assert_eq!(quotient_invariants(&lat(2, &[&[2, 0]]), &z), Err(LinalgError::NotASublattice));
        let inf = quotient_invariants(&Sublattice::full(2), &z).unwrap();
        assert_eq!(inf.free_rank, 1);
    }

    #[test]
    fn torsion_exponents() {
        let two = Prime::new(2).unwrap();
        let three = Prime::new(3).unwrap();
        let q4 = QuotientInvariants { invariant_factors: vec![4], free_rank: 0 };
        assert_eq!(p_torsion_exponent(&q4, two), Ok(2));
        let q2 = QuotientInvariants { invariant_factors: vec![2], free_rank: 0 };
        assert_eq!(p_torsion_exponent(&q2, three), Ok(0));
        let q612 = QuotientInvariants { invariant_factors: vec![6, 12], free_rank: 0 };
        assert_eq!(p_torsion_exponent(&q612, two), Ok(2));
        let inf = QuotientInvariants { invariant_factors: vec![], free_rank: 1 };
        assert_eq!(p_torsion_exponent(&inf, two), Err(LinalgError::InfiniteQuotient));
    }

    #[test]
    fn prime_to_p_saturation_examples() {
        let two = Prime::new(2).unwrap();
        let z = lat(1, &[&[1]]);
        assert_eq!(prime_to_p_saturation(&z, &lat(1, &[&[4]]), two).unwrap(), lat(1, &[&[4]]));
        assert_eq!(prime_to_p_saturation(&z, &z, two).unwrap(), z);
        // residues mod 6: x with 3x ∈ 6Z are the even ones
        let brute: Vec<i64> = (0..6).filter(|x| (3 * x) % 6 == 0).collect();
        assert_eq!(brute, vec![0, 2, 4]);
        assert_eq!(prime_to_p_saturation(&z, &lat(1, &[&[6]]), two).unwrap(), lat(1, &[&[2]]));
    }

    #[test]
    fn intersections() {
        // brute force over a box: points in both lattices
        let a = lat(2, &[&[2, 0], &[0, 1]]);
        let b = lat(2, &[&[1, 0]]);
        let c = a.intersect(&b).unwrap();
        for x in -6..=6 {
            for y in -6..=6 {
                assert_eq!(c.contains(&[x, y]), a.contains(&[x, y]) && b.contains(&[x, y]));
            }
        }
        assert_eq!(c, lat(2, &[&[2, 0]]));
        assert!(!lat(2, &[&[2, 0]]).contains(&[3, 0]));
        let s = Sublattice::full(2).intersect_with_span(&[to_rational(&[1, 0])]).unwrap();
        assert_eq!(s, lat(2, &[&[1, 0]]));
    }

    #[test]
    fn saturation_of_scaled_line() {
        assert_eq!(lat(2, &[&[2, 4]]).saturation().unwrap(), lat(2, &[&[1, 2]]));
    }
}
