//! Degree lifting: rebuilds the degree-`m` solutions of the congruential
//! recurrence from the degree-`(m−1)` ones using integer operations only.
//!
//! For each parent `π`, `θ_π = Ψ⁻¹(π)` prepends a fixed point. A singleton
//! difference set `{a}` yields the two affine children `θ_{a,0}`, `θ_{a,1}`;
//! a pair `{a, a+1}` yields the single child `θ_π + a`. The inverse direction
//! is [`project`], `Ψ ∘ Γ`.
//!
//! This module deliberately depends on nothing but [`crate::perm`] and
//! [`crate::class`]: no fractions, no Farey data.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::class::{Label, PermClass};
use crate::error::{Error, Result};
use crate::perm::{congruential_recurrence_holds, Permutation, MAX_DEGREE};

/// Records which affine layer a child of a branching parent came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum BranchTag {
    /// Only child of a non-branching parent.
    None,
    /// `θ_{a,0}`, drawn on the left.
    Zero,
    /// `θ_{a,1}`, drawn on the right.
    One,
}

impl BranchTag {
    pub fn superscript(self) -> Option<&'static str> {
        match self {
            BranchTag::None => None,
            BranchTag::Zero => Some("(0)"),
            BranchTag::One => Some("(1)"),
        }
    }
}

impl fmt::Display for BranchTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.superscript().unwrap_or(""))
    }
}

/// Children of one parent, in left-to-right order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fiber {
    pub parent: Permutation,
    /// `Ψ⁻¹(parent)`, the intermediate permutation fixing 1.
    pub anchor: Permutation,
    /// Smallest element of the anchor's difference set.
    pub step: u32,
    pub children: Vec<(Permutation, BranchTag)>,
}

impl Fiber {
    pub fn is_branching(&self) -> bool {
        self.children.len() == 2
    }
}

/// Children of `parent` with their tags, plus the step `a`.
///
/// Reads the difference set of `Ψ⁻¹(parent)` straight off `parent`: the
/// anchor starts `1, π(1)+1, …`, so its differences are `π(1)` followed by
/// those of `π`, all taken modulo `m`.
fn lift_children(parent: &Permutation) -> Result<(u32, Vec<(Permutation, BranchTag)>)> {
    let m = parent.degree() + 1;
    if m > MAX_DEGREE {
        return Err(Error::DegreeTooLarge(m));
    }
    let pv = parent.values();
    let mu = m as u32;
    let (mut lo, mut hi) = (pv[0], pv[0]);
    for w in pv.windows(2) {
        let d = if w[1] >= w[0] {
            w[1] - w[0]
        } else {
            w[1] + mu - w[0]
        };
        lo = lo.min(d);
        hi = hi.max(d);
    }
    // min and max at most one apart pin the set to {lo} or {lo, lo+1}
    if lo == hi {
        let zero = Permutation::affine(m, lo as i64, 0)?;
        let one = Permutation::affine(m, lo as i64, 1)?;
        Ok((lo, vec![(zero, BranchTag::Zero), (one, BranchTag::One)]))
    } else if hi == lo + 1 {
        let wrap = |v: u32| if v > mu { v - mu } else { v };
        let values = std::iter::once(1 + lo)
            .chain(pv.iter().map(|&v| wrap(v + 1 + lo)))
            .collect();
        Ok((
            lo,
            vec![(Permutation::from_vec_unchecked(values), BranchTag::None)],
        ))
    } else {
        let anchor = parent.psi_inverse()?;
        Err(Error::Invariant(format!(
            "difference set {:?} of {anchor} is neither {{a}} nor {{a, a+1}}; \
             {parent} cannot belong to the previous level",
            anchor.cds().residues()
        )))
    }
}

/// Lifts a single parent of degree `m − 1` to its children of degree `m`.
pub fn lift_parent(parent: &Permutation) -> Result<Fiber> {
    let (step, children) = lift_children(parent)?;
    Ok(Fiber {
        parent: parent.clone(),
        anchor: parent.psi_inverse()?,
        step,
        children,
    })
}

/// All fibers of a level, parents in the order given.
pub fn lift_fibers(parents: &[Permutation]) -> Result<Vec<Fiber>> {
    parents.par_iter().map(lift_parent).collect()
}

fn check_level(prev: &PermClass) -> Result<()> {
    if prev.label() != Some(Label::V) {
        return Err(Error::Domain(format!(
            "lifting expects a level labelled V, got {:?}",
            prev.label()
        )));
    }
    if prev.degree() + 1 > MAX_DEGREE {
        return Err(Error::DegreeTooLarge(prev.degree() + 1));
    }
    Ok(())
}

/// Lifts a full level of degree `m − 1` to degree `m`, canonically sorted.
pub fn lift_once(prev: &PermClass) -> Result<PermClass> {
    check_level(prev)?;
    let fibers = prev
        .members()
        .par_iter()
        .map(lift_children)
        .collect::<Result<Vec<_>>>()?;
    let children: Vec<Permutation> = fibers
        .into_iter()
        .flat_map(|(_, kids)| kids.into_iter().map(|(c, _)| c))
        .collect();
    PermClass::new(prev.degree() + 1, Some(Label::V), children)
}

/// Levels of degree `1..=max_m`, starting from the single permutation `1`.
pub fn generate_up_to(max_m: usize) -> Result<Vec<PermClass>> {
    if max_m == 0 {
        return Err(Error::Domain("depth must be at least 1".into()));
    }
    if max_m > MAX_DEGREE {
        return Err(Error::DegreeTooLarge(max_m));
    }
    let base = PermClass::new(1, Some(Label::V), vec![Permutation::identity(1)?])?;
    let mut levels = Vec::with_capacity(max_m);
    levels.push(base);
    while levels.len() < max_m {
        let next = lift_once(levels.last().expect("nonempty"))?;
        levels.push(next);
    }
    Ok(levels)
}

/// `Ψ ∘ Γ`: maps a degree-`m` solution to its parent of degree `m − 1`.
pub fn project(theta: &Permutation) -> Result<Permutation> {
    if theta.degree() < 2 {
        return Err(Error::Domain("projection needs degree at least 2".into()));
    }
    if !congruential_recurrence_holds(theta.values()) {
        return Err(Error::Domain(format!(
            "{theta} does not satisfy the congruential recurrence"
        )));
    }
    theta.gamma().psi()
}

/// Fiber-size counts for one lifting step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FiberCensus {
    /// Degree of the children.
    pub m: usize,
    pub parents: usize,
    pub branching: usize,
    pub children: usize,
}

pub fn fiber_census(prev: &PermClass) -> Result<FiberCensus> {
    check_level(prev)?;
    let sizes = prev
        .members()
        .par_iter()
        .map(|p| lift_children(p).map(|(_, kids)| kids.len()))
        .collect::<Result<Vec<_>>>()?;
    Ok(FiberCensus {
        m: prev.degree() + 1,
        parents: sizes.len(),
        branching: sizes.iter().filter(|&&n| n == 2).count(),
        children: sizes.iter().sum(),
    })
}
