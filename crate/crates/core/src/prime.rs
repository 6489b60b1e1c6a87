use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("{0} is not a prime")]
pub struct NotPrime(pub u64);

/// The characteristic of the base field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self, NotPrime> {
        if p < 2 || (2..).take_while(|d| d * d <= p).any(|d| p % d == 0) {
            return Err(NotPrime(p));
        }
        Ok(Prime(p))
    }

    pub fn get(self) -> u64 {
        self.0
    }

    /// `p^e`, or `None` on overflow.
    pub fn power(self, e: u32) -> Option<i64> {
        i64::try_from(self.0).ok()?.checked_pow(e)
    }

    /// Largest `t` with `p^t | n` (`n` nonzero).
    pub fn valuation(self, mut n: u64) -> u32 {
        debug_assert!(n != 0);
        let mut t = 0;
        while n % self.0 == 0 {
            n /= self.0;
            t += 1;
        }
        t
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}
