use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::linalg::{IntVector, RatVector};
use crate::prime::Prime;

/// A point `numerator / p^level` of `(1/p^e)·Z^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FracPoint {
    numerator: IntVector,
    level: u32,
    prime: Prime,
}

impl FracPoint {
    pub fn new(numerator: IntVector, level: u32, prime: Prime) -> Self {
        FracPoint { numerator, level, prime }
    }

    pub fn zero(rank: usize, level: u32, prime: Prime) -> Self {
        FracPoint::new(vec![0; rank], level, prime)
    }

    /// The integer point `u` viewed at the given level.
    pub fn integral(u: &[i64], level: u32, prime: Prime) -> Option<Self> {
        let q = prime.power(level)?;
        let numerator = u.iter().map(|&x| x.checked_mul(q)).collect::<Option<_>>()?;
        Some(FracPoint::new(numerator, level, prime))
    }

    pub fn numerator(&self) -> &[i64] {
        &self.numerator
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn rank(&self) -> usize {
        self.numerator.len()
    }

    /// `q = p^level`.
    pub fn denominator(&self) -> i64 {
        self.prime.power(self.level).expect("level fits in i64")
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.iter().all(|&x| x == 0)
    }

    /// The same point expressed at level `e`, if it lies in `(1/p^e)Z^n`.
    pub fn at_level(&self, e: u32) -> Option<Self> {
        if e >= self.level {
            let scale = self.prime.power(e - self.level)?;
            let numerator = self.numerator.iter().map(|&x| x.checked_mul(scale)).collect::<Option<_>>()?;
            return Some(FracPoint::new(numerator, e, self.prime));
        }
        let scale = self.prime.power(self.level - e)?;
        if self.numerator.iter().any(|x| x % scale != 0) {
            return None;
        }
        Some(FracPoint::new(self.numerator.iter().map(|x| x / scale).collect(), e, self.prime))
    }

    /// `Some(u)` when the point is the integer vector `u`.
    pub fn as_integral(&self) -> Option<IntVector> {
        let q = self.denominator();
        self.numerator.iter().map(|&x| (x % q == 0).then_some(x / q)).collect()
    }

    pub fn to_rational(&self) -> RatVector {
        let q = BigInt::from(self.denominator());
        self.numerator.iter().map(|&x| BigRational::new(BigInt::from(x), q.clone())).collect()
    }
}

pub fn format_rational(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Always `num/den`, the form used in machine-readable reports.
pub fn format_ratio(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

impl fmt::Display for FracPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.to_rational().iter().map(format_rational).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl Serialize for FracPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let parts: Vec<String> = self.to_rational().iter().map(format_rational).collect();
        parts.serialize(s)
    }
}
