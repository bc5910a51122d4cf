//! Sós permutations from a rational `α`, their inverses `τ_α`, the affine
//! layers `θ_{a,b}`, Sós's three-case recurrence, and the pairing of order-`m`
//! Farey intervals with inverse Sós permutations.
//!
//! All `α` arithmetic is exact: the fractional part `{iα}` of `α = p/q` is
//! handled through its numerator `(i·p) mod q`.

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::class::{Label, PermClass};
use crate::error::{Error, Result};
use crate::farey::{farey_intervals, FareyInterval};
use crate::fraction::Fraction;
use crate::perm::{Permutation, MAX_DEGREE};
use crate::report::Report;

fn check_degree(m: usize) -> Result<()> {
    match m {
        0 => Err(Error::Domain("degree must be at least 1".into())),
        m if m > MAX_DEGREE => Err(Error::DegreeTooLarge(m)),
        _ => Ok(()),
    }
}

fn check_unit_interval(alpha: &Fraction) -> Result<()> {
    if alpha > &Fraction::zero() && alpha < &Fraction::one() {
        Ok(())
    } else {
        Err(Error::Domain(format!("alpha = {alpha} is not in (0, 1)")))
    }
}

/// Numerators of `{iα}` for `i = 1..=m`. Rejects `α` whose multiples collide,
/// which happens exactly when the reduced denominator is below `m`. At
/// denominator `m` the last part is 0; that boundary case is accepted.
fn fractional_residues(m: usize, alpha: &Fraction) -> Result<Vec<BigInt>> {
    check_degree(m)?;
    check_unit_interval(alpha)?;
    if alpha.denom() < &BigInt::from(m) {
        return Err(Error::AlphaTooCoarse {
            m,
            alpha: alpha.to_string(),
        });
    }
    Ok((1..=m as i64).map(|i| alpha.frac_residue(i)).collect())
}

/// The permutation `σ_α` listing `1..=m` in increasing order of `{iα}`.
pub fn sos_from_alpha(m: usize, alpha: &Fraction) -> Result<Permutation> {
    let residues = fractional_residues(m, alpha)?;
    let mut order: Vec<u32> = (1..=m as u32).collect();
    order.sort_by(|&i, &j| residues[i as usize - 1].cmp(&residues[j as usize - 1]));
    Ok(Permutation::from_vec_unchecked(order))
}

/// `τ_α(i) = |{ j ∈ [m] : {jα} <= {iα} }|`, evaluated by direct counting.
pub fn tau_from_alpha(m: usize, alpha: &Fraction) -> Result<Permutation> {
    let residues = fractional_residues(m, alpha)?;
    let values = residues
        .iter()
        .map(|ri| residues.iter().filter(|rj| rj <= &ri).count() as u32)
        .collect();
    Ok(Permutation::from_vec_unchecked(values))
}

/// `τ_α` through the floor-sum closed form
/// `m(1 − ⌊iα⌋) + Σ_j ⌊jα⌋ + Σ_j ⌊(i − j)α⌋`.
///
/// Only defined for `α` off the order-`m` Farey sequence (denominator `> m`).
pub fn tau_explicit(m: usize, alpha: &Fraction) -> Result<Permutation> {
    check_degree(m)?;
    check_unit_interval(alpha)?;
    if alpha.denom() <= &BigInt::from(m) {
        return Err(Error::Domain(format!(
            "closed form needs alpha off the order-{m} Farey sequence, got {alpha}"
        )));
    }
    let mi = m as i64;
    let floor_sum: BigInt = (1..=mi).map(|j| alpha.floor_mul(j)).sum();
    let values = (1..=mi)
        .map(|i| {
            let cross: BigInt = (1..=mi).map(|j| alpha.floor_mul(i - j)).sum();
            let v: BigInt = BigInt::from(mi) * (1 - alpha.floor_mul(i)) + &floor_sum + cross;
            v.to_u32()
                .ok_or_else(|| Error::Invariant(format!("closed form gave {v} at i = {i}")))
        })
        .collect::<Result<Vec<u32>>>()?;
    Permutation::new(values)
        .map_err(|e| Error::Invariant(format!("closed form at alpha = {alpha}: {e}")))
}

/// `θ_{a,b}(i) = supermod_m(a·i + b)`.
pub fn theta_ab(m: usize, a: i64, b: i64) -> Result<Permutation> {
    Permutation::affine(m, a, b)
}

/// Sós's three-case recurrence
///
/// ```text
/// σ(i+1) = σ(i) + σ(1)          if σ(i) <= m − σ(1)
///               + σ(1) − σ(m)   if m − σ(1) < σ(i) < σ(m)
///               − σ(m)          if σ(m) <= σ(i)
/// ```
///
/// When the first and third conditions overlap (possible only for
/// non-Sós input) the first listed case is used.
pub fn satisfies_sos_recurrence(sigma: &Permutation) -> bool {
    let v = sigma.values();
    let m = v.len() as i64;
    let (first, last) = (v[0] as i64, v[v.len() - 1] as i64);
    v.windows(2).all(|w| {
        let cur = w[0] as i64;
        let step = if cur <= m - first {
            first
        } else if cur < last {
            first - last
        } else {
            -last
        };
        cur + step == w[1] as i64
    })
}

/// Which side of `a/m` to evaluate in [`tau_near_fraction`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Below,
    At,
    Above,
}

/// `1 / (2m²)`, inside the open bound `(0, 1/m²)`.
pub fn boundary_epsilon(m: usize) -> Fraction {
    Fraction::new(1, 2 * (m as u64) * (m as u64)).expect("nonzero")
}

/// `τ` evaluated at `a/m − ε`, `a/m`, or `a/m + ε` with `ε = 1/(2m²)`.
pub fn tau_near_fraction(m: usize, a: i64, side: Side) -> Result<Permutation> {
    check_degree(m)?;
    if a < 1 || a > m as i64 {
        return Err(Error::Domain(format!("a = {a} is not in [1, {m}]")));
    }
    if num_integer::gcd(a, m as i64) != 1 {
        return Err(Error::NotInvertible { a, m });
    }
    let centre = Fraction::new(a, m as i64)?;
    let alpha = match side {
        Side::Below => centre.sub(&boundary_epsilon(m)),
        Side::At => centre,
        Side::Above => centre.add(&boundary_epsilon(m)),
    };
    tau_from_alpha(m, &alpha)
}

/// Order-`m` Farey intervals paired with `τ_α` for `α` inside each interval.
#[derive(Debug, Clone, Serialize)]
pub struct SuranyiTable {
    m: usize,
    entries: Vec<(FareyInterval, Permutation)>,
}

impl SuranyiTable {
    pub fn degree(&self) -> usize {
        self.m
    }

    pub fn entries(&self) -> &[(FareyInterval, Permutation)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Permutation column in interval order.
    pub fn permutations(&self) -> impl Iterator<Item = &Permutation> {
        self.entries.iter().map(|(_, p)| p)
    }

    /// Inverse lookup `θ ↦ F_m[θ]`.
    pub fn interval_index(&self) -> HashMap<&Permutation, &FareyInterval> {
        self.entries.iter().map(|(iv, p)| (p, iv)).collect()
    }

    /// The permutation column as a canonically ordered `Sstar` class.
    pub fn to_class(&self) -> PermClass {
        PermClass::new(
            self.m,
            Some(Label::Sstar),
            self.permutations().cloned().collect(),
        )
        .expect("all entries share the table degree")
    }
}

/// Evaluates `τ` at the mediant of every order-`m` interval. Fails if two
/// intervals give the same permutation, which would mean a bug here.
pub fn suranyi_table(m: usize) -> Result<SuranyiTable> {
    check_degree(m)?;
    let intervals = farey_intervals(m)?;
    let entries = intervals
        .into_par_iter()
        .map(|iv| {
            let tau = tau_from_alpha(m, &iv.mediant())?;
            Ok((iv, tau))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut seen = HashSet::with_capacity(entries.len());
    for (iv, p) in &entries {
        if !seen.insert(p) {
            return Err(Error::Invariant(format!(
                "interval {iv} repeats permutation {p} at m = {m}"
            )));
        }
    }
    Ok(SuranyiTable { m, entries })
}

/// Parameters for [`verify_tau_identities`].
#[derive(Debug, Clone, Copy)]
pub struct TauCheckConfig {
    pub m_min: usize,
    pub m_max: usize,
    /// Random interior rationals per degree for the closed-form check.
    pub samples: usize,
    pub seed: u64,
}

impl Default for TauCheckConfig {
    fn default() -> Self {
        TauCheckConfig {
            m_min: 2,
            m_max: 30,
            samples: 200,
            seed: DEFAULT_SEED,
        }
    }
}

pub const DEFAULT_SEED: u64 = 0x5053_2025;

/// Reduced `p/q` in `(0, 1)` with `q` uniform in `(m, 4m]`.
pub fn random_interior_alpha(m: usize, rng: &mut impl Rng) -> Fraction {
    loop {
        let q = rng.gen_range(m as u64 + 1..=4 * m as u64);
        let p = rng.gen_range(1..q);
        if num_integer::gcd(p, q) == 1 {
            return Fraction::new(p, q).expect("q > 0");
        }
    }
}

/// Checks the `τ_α` identities over a range of degrees:
/// counting formula against inversion of `σ_α`, closed form against counting
/// formula on random interior rationals, first/last-term formulas, `Ψ∘Γ`
/// compatibility across degrees, and the behaviour around `a/m`.
pub fn verify_tau_identities(cfg: TauCheckConfig) -> Result<Report> {
    let mut report = Report::new("tau identities");
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for m in cfg.m_min.max(2)..=cfg.m_max {
        let table = suranyi_table(m)?;
        report.record(
            "Farey table is injective with sum-phi rows",
            Some(m),
            table.len() as u64 == crate::farey::totient_sum(m),
            format!("{} rows", table.len()),
        );

        let mut mismatches = 0;
        for (iv, tau) in table.entries() {
            let sigma = sos_from_alpha(m, &iv.mediant())?;
            if sigma.inverse() != *tau {
                mismatches += 1;
            }
        }
        report.record(
            "tau = inverse(sigma) at mediants",
            Some(m),
            mismatches == 0,
            format!("{mismatches} mismatches over {} intervals", table.len()),
        );

        let (mut closed, mut first, mut last) = (0, 0, 0);
        for _ in 0..cfg.samples {
            let alpha = random_interior_alpha(m, &mut rng);
            let tau = tau_from_alpha(m, &alpha)?;
            if tau_explicit(m, &alpha)? != tau {
                closed += 1;
            }
            let (f_ok, l_ok) = first_last_identities(m, &alpha, &tau);
            first += usize::from(!f_ok);
            last += usize::from(!l_ok);
        }
        report.record(
            "closed form = counting formula",
            Some(m),
            closed == 0,
            format!("{closed} mismatches over {} samples", cfg.samples),
        );
        report.record(
            "first/last term identities",
            Some(m),
            first == 0 && last == 0,
            format!("{first} first-term and {last} last-term mismatches"),
        );

        if m >= 3 {
            let mut bad = 0;
            for (iv, tau) in table.entries() {
                let down = tau.gamma().psi()?;
                if down != tau_from_alpha(m - 1, &iv.mediant())? {
                    bad += 1;
                }
            }
            report.record(
                "psi(gamma(tau^m)) = tau^(m-1) at mediants",
                Some(m),
                bad == 0,
                format!("{bad} mismatches"),
            );
        }

        let mut bad = Vec::new();
        for a in (1..=m as i64).filter(|&a| num_integer::gcd(a, m as i64) == 1) {
            let zero = theta_ab(m, a, 0)?;
            let one = theta_ab(m, a, 1)?;
            if tau_near_fraction(m, a, Side::Below)? != zero
                || tau_near_fraction(m, a, Side::At)? != one
                || tau_near_fraction(m, a, Side::Above)? != one
            {
                bad.push(a);
            }
        }
        report.record(
            "tau at a/m -/0/+ eps = theta_{a,0}/theta_{a,1}/theta_{a,1}",
            Some(m),
            bad.is_empty(),
            if bad.is_empty() {
                String::new()
            } else {
                format!("fails for a in {bad:?}")
            },
        );
    }
    Ok(report)
}

/// `τ_α(1) = 1 + ⌊mα⌋` and `τ_α(m) = 2m + 1 − (m+1)τ_α(1) + 2Σ_j ⌊jα⌋`.
pub fn first_last_identities(m: usize, alpha: &Fraction, tau: &Permutation) -> (bool, bool) {
    let mi = m as i64;
    let first = BigInt::from(1) + alpha.floor_mul(mi);
    let floor_sum: BigInt = (1..=mi).map(|j| alpha.floor_mul(j)).sum();
    let last = BigInt::from(2 * mi + 1) - BigInt::from(mi + 1) * BigInt::from(tau.first())
        + BigInt::from(2) * floor_sum;
    (
        first == BigInt::from(tau.first()),
        (last - BigInt::from(tau.last())).is_zero(),
    )
}
