//! Fundamental discriminants of quadratic fields.

use crate::error::Error;
use crate::Result;

/// A fundamental discriminant d: either d ≡ 1 (mod 4) squarefree, or
/// d = 4m with m ≡ 2, 3 (mod 4) squarefree; |d| > 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FundamentalDiscriminant(i64);

fn is_squarefree_trial(n: u64) -> bool {
    if n == 0 {
        return false;
    }
    let mut m = n;
    let mut d = 2u64;
    while d * d <= m {
        if m % d == 0 {
            m /= d;
            if m % d == 0 {
                return false;
            }
        }
        d += 1;
    }
    true
}

/// Whether d is a fundamental discriminant.
pub fn is_fundamental(d: i64) -> bool {
    if d == 0 || d == 1 {
        return false;
    }
    match d.rem_euclid(4) {
        1 => is_squarefree_trial(d.unsigned_abs()),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && is_squarefree_trial(m.unsigned_abs())
        }
        _ => false,
    }
}

impl FundamentalDiscriminant {
    pub fn new(d: i64) -> Result<Self> {
        if d == -1 || !is_fundamental(d) {
            return Err(Error::NotFundamental(d));
        }
        Ok(Self(d))
    }

    /// Wrap a value already known to be fundamental (e.g. produced by the
    /// family window sieve), skipping the trial-division recheck.
    pub(crate) fn new_unchecked(d: i64) -> Self {
        Self(d)
    }

    pub fn value(&self) -> i64 {
        self.0
    }

    pub fn sign(&self) -> i32 {
        if self.0 > 0 {
            1
        } else {
            -1
        }
    }

    pub fn abs(&self) -> u64 {
        self.0.unsigned_abs()
    }
}

impl std::fmt::Display for FundamentalDiscriminant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}
