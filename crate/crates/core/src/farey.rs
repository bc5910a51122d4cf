//! Farey sequences of order `m` and the open intervals between successive terms.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fraction::Fraction;

/// Euler's totient for `0..=n` by a linear sieve (`phi[0] = 0`).
pub fn totients(n: usize) -> Vec<u64> {
    let mut phi = vec![0u64; n + 1];
    let mut primes = Vec::new();
    if n >= 1 {
        phi[1] = 1;
    }
    for i in 2..=n {
        if phi[i] == 0 {
            phi[i] = i as u64 - 1;
            primes.push(i);
        }
        for &p in &primes {
            let ip = i * p;
            if ip > n {
                break;
            }
            if i % p == 0 {
                phi[ip] = phi[i] * p as u64;
                break;
            }
            phi[ip] = phi[i] * (p as u64 - 1);
        }
    }
    phi
}

/// `Σ_{k=1}^{m} φ(k)`.
pub fn totient_sum(m: usize) -> u64 {
    totients(m).iter().sum()
}

/// All reduced `p/q` with `0 <= p <= q <= m`, ascending.
///
/// Built with the next-term recurrence from two consecutive terms, so the cost
/// is linear in the output.
pub fn farey_sequence(m: usize) -> Result<Vec<Fraction>> {
    if m == 0 {
        return Err(Error::Domain("Farey order must be at least 1".into()));
    }
    let n = m as u64;
    let (mut a, mut b, mut c, mut d) = (0u64, 1u64, 1u64, n);
    let mut terms = Vec::with_capacity(totient_sum(m) as usize + 1);
    terms.push(Fraction::zero());
    while c <= n {
        let k = (n + b) / d;
        (a, b, c, d) = (c, d, k * c - a, k * d - b);
        terms.push(Fraction::new(a, b)?);
    }
    Ok(terms)
}

/// Open interval `(lo, hi)` between successive order-`m` Farey terms; `index`
/// is its 1-based position.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct FareyInterval {
    pub lo: Fraction,
    pub hi: Fraction,
    pub index: usize,
}

impl FareyInterval {
    /// Strict membership.
    pub fn contains(&self, x: &Fraction) -> bool {
        x.is_strictly_between(&self.lo, &self.hi)
    }

    /// Whether `other ⊆ self` as open intervals.
    pub fn contains_interval(&self, other: &FareyInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// Same endpoints, ignoring the index.
    pub fn same_span(&self, other: &FareyInterval) -> bool {
        self.lo == other.lo && self.hi == other.hi
    }

    /// The mediant of the endpoints, which lies strictly inside.
    pub fn mediant(&self) -> Fraction {
        mediant(self)
    }
}

impl fmt::Display for FareyInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.lo, self.hi)
    }
}

pub fn farey_intervals(m: usize) -> Result<Vec<FareyInterval>> {
    let terms = farey_sequence(m)?;
    Ok(terms
        .windows(2)
        .enumerate()
        .map(|(t, w)| FareyInterval {
            lo: w[0].clone(),
            hi: w[1].clone(),
            index: t + 1,
        })
        .collect())
}

pub fn mediant(interval: &FareyInterval) -> Fraction {
    Fraction::new(
        interval.lo.numer() + interval.hi.numer(),
        interval.lo.denom() + interval.hi.denom(),
    )
    .expect("positive denominators")
}
