//! Permutations of `[m] = {1, …, m}` in one-line notation, together with the
//! shift action and the maps that move between degrees.
//!
//! Text form: for `m <= 9` the values are written as concatenated digits
//! (`2413`); for larger degrees they are separated by spaces. Parsing accepts
//! either form, and commas as separators.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest degree accepted anywhere in the library.
pub const MAX_DEGREE: usize = 10_000;

/// Standard residue of `j` modulo `m`, in `0..m`.
pub fn mod_m(j: i64, m: usize) -> i64 {
    j.rem_euclid(m as i64)
}

/// Residue of `j` modulo `m` taken in `1..=m` (0 is replaced by `m`).
pub fn supermod_m(j: i64, m: usize) -> i64 {
    mod_m(j - 1, m) + 1
}

/// A bijection of `[m]` stored as `values[i - 1] = θ(i)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "PermRepr", into = "PermRepr")]
pub struct Permutation {
    values: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct PermRepr {
    m: usize,
    values: Vec<u32>,
}

impl TryFrom<PermRepr> for Permutation {
    type Error = Error;

    fn try_from(repr: PermRepr) -> Result<Self> {
        if repr.m != repr.values.len() {
            return Err(Error::InvalidPermutation {
                m: repr.m,
                reason: format!("{} values listed", repr.values.len()),
            });
        }
        Permutation::new(repr.values)
    }
}

impl From<Permutation> for PermRepr {
    fn from(p: Permutation) -> Self {
        PermRepr {
            m: p.degree(),
            values: p.values,
        }
    }
}

impl Permutation {
    /// Validates that `values` lists every element of `[m]` exactly once.
    pub fn new(values: Vec<u32>) -> Result<Self> {
        let m = values.len();
        if m == 0 {
            return Err(Error::InvalidPermutation {
                m,
                reason: "degree must be at least 1".into(),
            });
        }
        if m > MAX_DEGREE {
            return Err(Error::DegreeTooLarge(m));
        }
        let mut seen = vec![false; m + 1];
        for &v in &values {
            let idx = v as usize;
            if idx == 0 || idx > m {
                return Err(Error::InvalidPermutation {
                    m,
                    reason: format!("value {v} out of range"),
                });
            }
            if std::mem::replace(&mut seen[idx], true) {
                return Err(Error::InvalidPermutation {
                    m,
                    reason: format!("value {v} repeated"),
                });
            }
        }
        Ok(Permutation { values })
    }

    /// Caller guarantees `values` is a permutation of `[values.len()]`.
    pub(crate) fn from_vec_unchecked(values: Vec<u32>) -> Self {
        debug_assert!(Permutation::new(values.clone()).is_ok());
        Permutation { values }
    }

    pub fn identity(m: usize) -> Result<Self> {
        Permutation::new((1..=m as u32).collect())
    }

    /// The affine permutation `i ↦ supermod_m(a·i + b)`; requires `gcd(a, m) = 1`.
    pub fn affine(m: usize, a: i64, b: i64) -> Result<Self> {
        if m == 0 {
            return Err(Error::Domain("degree must be at least 1".into()));
        }
        if m > MAX_DEGREE {
            return Err(Error::DegreeTooLarge(m));
        }
        if a.gcd(&(m as i64)) != 1 {
            return Err(Error::NotInvertible { a, m });
        }
        let a = mod_m(a, m);
        let b = mod_m(b, m);
        let values = (1..=m as i64)
            .map(|i| supermod_m(a * i + b, m) as u32)
            .collect();
        Ok(Permutation::from_vec_unchecked(values))
    }

    pub fn degree(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    /// `θ(i)` for `i` in `1..=m`.
    pub fn at(&self, i: usize) -> u32 {
        self.values[i - 1]
    }

    pub fn first(&self) -> u32 {
        self.values[0]
    }

    pub fn last(&self) -> u32 {
        self.values[self.values.len() - 1]
    }

    /// `λ^k(θ) = supermod_m(θ(·) + k)`.
    pub fn shift(&self, k: i64) -> Permutation {
        let m = self.degree();
        let k = mod_m(k, m) as u32;
        let m = m as u32;
        // v + k lies in [1, 2m), so one conditional subtraction suffices
        let values = self
            .values
            .iter()
            .map(|&v| if v + k > m { v + k - m } else { v + k })
            .collect();
        Permutation { values }
    }

    /// The full orbit `⟨λ⟩·θ`, in order of shift amount `0..m`.
    pub fn orbit(&self) -> Vec<Permutation> {
        (0..self.degree() as i64).map(|k| self.shift(k)).collect()
    }

    /// Whether `other` is a shift of `self`.
    pub fn shift_equivalent(&self, other: &Permutation) -> Result<bool> {
        let m = self.degree();
        if m != other.degree() {
            return Err(Error::DegreeMismatch(m, other.degree()));
        }
        let k = mod_m(other.first() as i64 - self.first() as i64, m);
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .all(|(&a, &b)| mod_m(b as i64 - a as i64 - k, m) == 0))
    }

    /// The unique shift of `self` that fixes 1.
    pub fn gamma(&self) -> Permutation {
        self.shift(1 - self.first() as i64)
    }

    /// Drops the leading fixed point: `i ↦ θ(i + 1) − 1`. Requires `θ(1) = 1`.
    pub fn psi(&self) -> Result<Permutation> {
        if self.degree() < 2 {
            return Err(Error::Domain("psi needs degree at least 2".into()));
        }
        if self.first() != 1 {
            return Err(Error::Domain(format!("psi needs θ(1) = 1, got {self}")));
        }
        let values = self.values[1..].iter().map(|&v| v - 1).collect();
        Ok(Permutation { values })
    }

    /// Inverse of [`Permutation::psi`]: prepend 1 and raise every value by one.
    pub fn psi_inverse(&self) -> Result<Permutation> {
        let m = self.degree() + 1;
        if m > MAX_DEGREE {
            return Err(Error::DegreeTooLarge(m));
        }
        let mut values = Vec::with_capacity(m);
        values.push(1);
        values.extend(self.values.iter().map(|&v| v + 1));
        Ok(Permutation { values })
    }

    pub fn delta(&self) -> Result<Delta> {
        if self.degree() < 2 {
            return Err(Error::Domain("delta needs degree at least 2".into()));
        }
        let values = (1..self.degree())
            .map(|i| delta_at(&self.values, i))
            .collect();
        Ok(Delta { values })
    }

    /// Number of positions `j` with `θ(j) <= θ(j + 1)`.
    pub fn ascents(&self) -> usize {
        ascents(&self.values)
    }

    /// Residues of consecutive differences modulo `m`.
    pub fn cds(&self) -> CdsSet {
        let m = self.degree() as u32;
        let mut seen = vec![false; m as usize];
        for w in self.values.windows(2) {
            let d = if w[1] >= w[0] {
                w[1] - w[0]
            } else {
                w[1] + m - w[0]
            };
            seen[d as usize] = true;
        }
        let residues = (0..m).filter(|&r| seen[r as usize]).collect();
        CdsSet { residues }
    }

    pub fn inverse(&self) -> Permutation {
        let mut values = vec![0u32; self.degree()];
        for (pos, &v) in self.values.iter().enumerate() {
            values[v as usize - 1] = pos as u32 + 1;
        }
        Permutation { values }
    }
}

/// `θ(i+1) − θ(i) ≡ θ(1) − [θ(m) <= θ(i)] (mod m)` for every `i ∈ [m−1]`.
pub(crate) fn congruential_recurrence_holds(v: &[u32]) -> bool {
    let m = v.len();
    let (first, last) = (v[0] as i64, v[m - 1]);
    v.windows(2).all(|w| {
        let rhs = first - i64::from(last <= w[0]);
        mod_m(w[1] as i64 - w[0] as i64 - rhs, m) == 0
    })
}

/// `Δ_θ(i)` for `i` in `1..m`, evaluated on a raw one-line slice.
pub(crate) fn delta_at(v: &[u32], i: usize) -> i64 {
    let m = v.len() as i64;
    let (cur, next) = (v[i - 1], v[i]);
    let ind = |b: bool| b as i64;
    next as i64 - cur as i64 + ind(v[v.len() - 1] <= cur)
        - ind(v[0] <= next)
        - (m - 1) * ind(cur <= next)
}

pub(crate) fn ascents(v: &[u32]) -> usize {
    v.windows(2).filter(|w| w[0] <= w[1]).count()
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree() <= 9 {
            for v in &self.values {
                write!(f, "{v}")?;
            }
        } else {
            for (i, v) in self.values.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{v}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({self})")
    }
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let token = s.trim();
        let parse_err = |reason: String| Error::Parse {
            kind: "permutation",
            token: s.to_string(),
            reason,
        };
        let values: Vec<u32> = if token.contains(|c: char| c.is_whitespace() || c == ',') {
            token
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<u32>()
                        .map_err(|_| parse_err(format!("{t:?} is not a positive integer")))
                })
                .collect::<Result<_>>()?
        } else {
            token
                .chars()
                .map(|c| {
                    c.to_digit(10)
                        .ok_or_else(|| parse_err(format!("{c:?} is not a digit")))
                })
                .collect::<Result<_>>()?
        };
        Permutation::new(values).map_err(|e| parse_err(e.to_string()))
    }
}

/// The values `Δ_θ(1), …, Δ_θ(m − 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Delta {
    values: Vec<i64>,
}

impl Delta {
    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn is_constant(&self) -> bool {
        self.values.windows(2).all(|w| w[0] == w[1])
    }

    pub fn sum(&self) -> i64 {
        self.values.iter().sum()
    }
}

/// Congruential difference set `{ mod_m(θ(i+1) − θ(i)) : i ∈ [m−1] }`, sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CdsSet {
    residues: Vec<u32>,
}

impl CdsSet {
    pub fn residues(&self) -> &[u32] {
        &self.residues
    }

    pub fn len(&self) -> usize {
        self.residues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.residues.is_empty()
    }

    pub fn singleton(&self) -> Option<u32> {
        match self.residues[..] {
            [a] => Some(a),
            _ => None,
        }
    }

    /// `Some(a)` when the set is exactly `{a, a + 1}`.
    pub fn consecutive_pair(&self) -> Option<u32> {
        match self.residues[..] {
            [a, b] if b == a + 1 => Some(a),
            _ => None,
        }
    }
}
