//! Canonically ordered sets of permutations of a common degree.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Names of the permutation classes the library can enumerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Label {
    /// Solutions of the congruential recurrence.
    V,
    /// Solutions of the exact (non-congruential) recurrence.
    W,
    /// Permutations whose `Δ` is constant.
    Y,
    /// Permutations with `Δ_θ(i) = −A_θ` for every `i`.
    Yprime,
    /// Mod-`m` quasi-progressions of diameter 1.
    X,
    /// Inverses of Sós permutations.
    Sstar,
    /// Shift closure of `Sstar`.
    SstarTilde,
    /// `θ_{a,0}` for `a` coprime to `m`.
    VL0,
    /// `θ_{a,1}` for `a` coprime to `m`.
    VL1,
    /// `V` with the `VL1` layer removed.
    Vminus,
    /// Permutations satisfying Sós's three-case recurrence.
    SosRec,
}

impl Label {
    pub const ALL: [Label; 11] = [
        Label::V,
        Label::W,
        Label::Y,
        Label::Yprime,
        Label::X,
        Label::Sstar,
        Label::SstarTilde,
        Label::VL0,
        Label::VL1,
        Label::Vminus,
        Label::SosRec,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Label::V => "V",
            Label::W => "W",
            Label::Y => "Y",
            Label::Yprime => "Yprime",
            Label::X => "X",
            Label::Sstar => "Sstar",
            Label::SstarTilde => "SstarTilde",
            Label::VL0 => "VL0",
            Label::VL1 => "VL1",
            Label::Vminus => "Vminus",
            Label::SosRec => "SosRec",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Label::ALL
            .into_iter()
            .find(|l| l.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parse {
                kind: "set label",
                token: s.to_string(),
                reason: "unknown set".into(),
            })
    }
}

/// A sorted, duplicate-free set of permutations of degree `m`.
///
/// `label` is `None` for ad-hoc sets such as the result of a shift closure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PermClass {
    m: usize,
    label: Option<Label>,
    members: Vec<Permutation>,
}

impl PermClass {
    pub fn new(m: usize, label: Option<Label>, mut members: Vec<Permutation>) -> Result<Self> {
        if let Some(bad) = members.iter().find(|p| p.degree() != m) {
            return Err(Error::DegreeMismatch(m, bad.degree()));
        }
        members.sort_unstable();
        members.dedup();
        Ok(PermClass { m, label, members })
    }

    /// `members` must already be sorted, deduplicated and of degree `m`.
    pub(crate) fn from_sorted(m: usize, label: Option<Label>, members: Vec<Permutation>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(members.iter().all(|p| p.degree() == m));
        PermClass { m, label, members }
    }

    pub fn degree(&self) -> usize {
        self.m
    }

    pub fn label(&self) -> Option<Label> {
        self.label
    }

    pub fn with_label(mut self, label: Option<Label>) -> Self {
        self.label = label;
        self
    }

    pub fn members(&self) -> &[Permutation] {
        &self.members
    }

    pub fn into_members(self) -> Vec<Permutation> {
        self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.members.binary_search(p).is_ok()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Permutation> {
        self.members.iter()
    }

    /// Set equality, ignoring labels.
    pub fn same_members(&self, other: &PermClass) -> bool {
        self.m == other.m && self.members == other.members
    }

    pub fn is_subset_of(&self, other: &PermClass) -> bool {
        self.m == other.m && self.members.iter().all(|p| other.contains(p))
    }

    pub fn intersection(&self, other: &PermClass) -> PermClass {
        let members = self
            .members
            .iter()
            .filter(|p| other.contains(p))
            .cloned()
            .collect();
        PermClass::from_sorted(self.m, None, members)
    }

    pub fn difference(&self, other: &PermClass) -> PermClass {
        let members = self
            .members
            .iter()
            .filter(|p| !other.contains(p))
            .cloned()
            .collect();
        PermClass::from_sorted(self.m, None, members)
    }
}

impl<'a> IntoIterator for &'a PermClass {
    type Item = &'a Permutation;
    type IntoIter = std::slice::Iter<'a, Permutation>;

    fn into_iter(self) -> Self::IntoIter {
        self.members.iter()
    }
}

/// Union of the shift orbits of every member. The result carries no label.
pub fn shift_closure(class: &PermClass) -> PermClass {
    let members = class.iter().flat_map(Permutation::orbit).collect();
    PermClass::new(class.m, None, members).expect("shifts preserve the degree")
}
