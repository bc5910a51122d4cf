//! Membership predicates for every permutation class, exhaustive enumeration
//! of the symmetric group, and the set-level verification suite.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::class::{shift_closure, Label, PermClass};
use crate::error::{Error, Result};
use crate::farey::{farey_intervals, totients};
use crate::lifting::generate_up_to;
use crate::perm::{self, congruential_recurrence_holds, mod_m, Permutation};
use crate::report::Report;
use crate::sos::{satisfies_sos_recurrence, sos_from_alpha, suranyi_table, theta_ab};

/// Default ceiling on the degree for exhaustive enumeration.
pub const DEFAULT_MAX_BRUTE_M: usize = 10;

// Slice-level predicates, used in the brute-force inner loop.

fn exact_recurrence_holds(v: &[u32]) -> bool {
    let m = v.len() as i64;
    let (first, last) = (v[0] as i64, v[v.len() - 1]);
    v.windows(2).all(|w| {
        let (cur, next) = (w[0], w[1]);
        let rhs = first - i64::from(last <= cur) + m * (i64::from(cur <= next) - 1);
        next as i64 - cur as i64 == rhs
    })
}

fn constant_delta(v: &[u32]) -> bool {
    if v.len() <= 2 {
        return true;
    }
    let d1 = perm::delta_at(v, 1);
    (2..v.len()).all(|i| perm::delta_at(v, i) == d1)
}

fn delta_equals_minus_ascents(v: &[u32]) -> bool {
    let a = perm::ascents(v) as i64;
    (1..v.len()).all(|i| perm::delta_at(v, i) == -a)
}

fn quasi_progression(v: &[u32]) -> bool {
    let m = v.len();
    if m == 1 {
        return true;
    }
    let mut lo = u32::MAX;
    let mut hi = 0;
    for w in v.windows(2) {
        let d = mod_m(w[1] as i64 - w[0] as i64, m) as u32;
        lo = lo.min(d);
        hi = hi.max(d);
    }
    // every residue is nonzero, so lo >= 1 and k = lo works when hi <= lo + 1
    hi <= lo + 1
}

fn affine_layer(v: &[u32], b: i64) -> bool {
    let m = v.len();
    let a = mod_m(v[0] as i64 - b, m);
    v.iter()
        .zip(1i64..)
        .all(|(&x, i)| mod_m(x as i64 - a * i - b, m) == 0)
}

/// Congruential recurrence `θ(i+1) − θ(i) ≡ θ(1) − [θ(m) <= θ(i)] (mod m)`.
/// Vacuously true at `m = 1`.
pub fn in_v(theta: &Permutation) -> bool {
    congruential_recurrence_holds(theta.values())
}

/// Exact recurrence
/// `θ(i+1) − θ(i) = θ(1) − [θ(m) <= θ(i)] + m([θ(i) <= θ(i+1)] − 1)`.
pub fn in_w(theta: &Permutation) -> bool {
    exact_recurrence_holds(theta.values())
}

/// `Δ_θ` constant; every permutation of degree at most 2 qualifies.
pub fn in_y(theta: &Permutation) -> bool {
    constant_delta(theta.values())
}

/// `Δ_θ(i) = −A_θ` for every `i`. Defined for `m >= 3`.
pub fn in_yprime(theta: &Permutation) -> Result<bool> {
    if theta.degree() < 3 {
        return Err(Error::Domain(format!(
            "Yprime is defined for degree >= 3, got {}",
            theta.degree()
        )));
    }
    Ok(delta_equals_minus_ascents(theta.values()))
}

/// Difference set contained in `{k, k+1}` for some `k ∈ [m−1]`.
pub fn in_x(theta: &Permutation) -> bool {
    quasi_progression(theta.values())
}

/// Whether `θ = θ_{a,b}` for some `a` coprime to `m`.
pub fn in_affine_layer(theta: &Permutation, b: i64) -> bool {
    affine_layer(theta.values(), b)
}

/// Enumeration strategy for [`enumerate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Filter all of `𝔖_m`.
    Brute,
    /// Repeated degree lifting from degree 1.
    Lift,
    /// Permutation column of the Farey-interval table.
    Farey,
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "brute" => Ok(Method::Brute),
            "lift" => Ok(Method::Lift),
            "farey" => Ok(Method::Farey),
            _ => Err(Error::Parse {
                kind: "method",
                token: s.to_string(),
                reason: "expected brute, lift or farey".into(),
            }),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Brute => "brute",
            Method::Lift => "lift",
            Method::Farey => "farey",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerateOptions {
    pub max_brute_m: usize,
    /// Ignore `max_brute_m`.
    pub force: bool,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        EnumerateOptions {
            max_brute_m: DEFAULT_MAX_BRUTE_M,
            force: false,
        }
    }
}

impl EnumerateOptions {
    fn guard(&self, m: usize) -> Result<()> {
        if m > self.max_brute_m && !self.force {
            Err(Error::SizeGuard {
                m,
                limit: self.max_brute_m,
            })
        } else {
            Ok(())
        }
    }
}

fn next_permutation(v: &mut [u32]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Every permutation of `[m]` accepted by `pred`, in lexicographic order.
///
/// The work is split by first entry; each block is walked with the
/// lexicographic successor and the blocks are concatenated in order.
pub fn brute_filter<F>(m: usize, pred: F) -> Vec<Permutation>
where
    F: Fn(&[u32]) -> bool + Sync,
{
    let blocks: Vec<Vec<Permutation>> = (1..=m as u32)
        .into_par_iter()
        .map(|head| {
            let mut v: Vec<u32> = std::iter::once(head)
                .chain((1..=m as u32).filter(|&x| x != head))
                .collect();
            let mut out = Vec::new();
            loop {
                if pred(&v) {
                    out.push(Permutation::from_vec_unchecked(v.clone()));
                }
                if !next_permutation(&mut v[1..]) {
                    break;
                }
            }
            out
        })
        .collect();
    blocks.concat()
}

/// `{ σ_α⁻¹ : α a mediant of an order-m interval }`.
fn sos_inverses(m: usize) -> Result<HashSet<Permutation>> {
    farey_intervals(m)?
        .iter()
        .map(|iv| sos_from_alpha(m, &iv.mediant()).map(|s| s.inverse()))
        .collect()
}

fn brute(label: Label, m: usize) -> Result<Vec<Permutation>> {
    let members = match label {
        Label::V => brute_filter(m, congruential_recurrence_holds),
        Label::W => brute_filter(m, exact_recurrence_holds),
        Label::Y => brute_filter(m, constant_delta),
        Label::Yprime => {
            if m < 3 {
                return Err(Error::Domain("Yprime is defined for degree >= 3".into()));
            }
            brute_filter(m, delta_equals_minus_ascents)
        }
        Label::X => brute_filter(m, quasi_progression),
        Label::VL0 => brute_filter(m, |v| affine_layer(v, 0)),
        Label::VL1 => brute_filter(m, |v| affine_layer(v, 1)),
        Label::Vminus => brute_filter(m, |v| {
            congruential_recurrence_holds(v) && !affine_layer(v, 1)
        }),
        Label::SosRec => brute_filter(m, |v| {
            satisfies_sos_recurrence(&Permutation::from_vec_unchecked(v.to_vec()))
        }),
        Label::Sstar => {
            let targets = sos_inverses(m)?;
            brute_filter(m, |v| {
                targets.contains(&Permutation::from_vec_unchecked(v.to_vec()))
            })
        }
        Label::SstarTilde => {
            let targets: HashSet<Permutation> = sos_inverses(m)?
                .iter()
                .flat_map(Permutation::orbit)
                .collect();
            brute_filter(m, |v| {
                targets.contains(&Permutation::from_vec_unchecked(v.to_vec()))
            })
        }
    };
    Ok(members)
}

/// Enumerates the class `label` at degree `m`.
///
/// `Lift` and `Farey` are only available for `V` and `Sstar`, which they
/// produce as the same set.
pub fn enumerate(
    label: Label,
    m: usize,
    method: Method,
    opts: EnumerateOptions,
) -> Result<PermClass> {
    if m == 0 {
        return Err(Error::Domain("degree must be at least 1".into()));
    }
    match method {
        Method::Brute => {
            opts.guard(m)?;
            Ok(PermClass::from_sorted(m, Some(label), brute(label, m)?))
        }
        Method::Lift | Method::Farey if !matches!(label, Label::V | Label::Sstar) => {
            Err(Error::Domain(format!(
                "method {method} only produces V and Sstar, not {label}"
            )))
        }
        Method::Lift => {
            let last = generate_up_to(m)?.pop().expect("at least one level");
            Ok(last.with_label(Some(label)))
        }
        Method::Farey => Ok(suranyi_table(m)?.to_class().with_label(Some(label))),
    }
}

/// `{ θ_{a,b} : a ∈ [m], gcd(a, m) = 1 }`.
pub fn affine_class(m: usize, b: i64) -> Result<PermClass> {
    let phi = totients(m);
    let members = (1..=m as i64)
        .filter(|&a| num_integer::gcd(a, m as i64) == 1)
        .map(|a| theta_ab(m, a, b))
        .collect::<Result<Vec<_>>>()?;
    debug_assert_eq!(members.len() as u64, phi[m]);
    let label = if b == 0 { Label::VL0 } else { Label::VL1 };
    PermClass::new(m, Some(label), members)
}

/// Permutations satisfying Sós's recurrence next to the inverses of the
/// degree-`m` congruential solutions. Exploratory only.
#[derive(Debug, Clone, Serialize)]
pub struct SosRecurrenceSurvey {
    pub m: usize,
    pub recurrence: PermClass,
    pub inverses_of_v: PermClass,
    /// Members of `recurrence` that are not inverses of `V`.
    pub extra: Vec<Permutation>,
    /// Inverses of `V` that fail the recurrence.
    pub missing: Vec<Permutation>,
}

pub fn enumerate_sos_recurrence(m: usize, opts: EnumerateOptions) -> Result<SosRecurrenceSurvey> {
    if m < 2 {
        return Err(Error::Domain(
            "the recurrence needs degree at least 2".into(),
        ));
    }
    let recurrence = enumerate(Label::SosRec, m, Method::Brute, opts)?;
    let v = enumerate(Label::V, m, Method::Brute, opts)?;
    let inverses_of_v = PermClass::new(m, None, v.iter().map(Permutation::inverse).collect())?;
    Ok(SosRecurrenceSurvey {
        m,
        extra: recurrence.difference(&inverses_of_v).into_members(),
        missing: inverses_of_v.difference(&recurrence).into_members(),
        recurrence,
        inverses_of_v,
    })
}

fn sizes(a: &PermClass, b: &PermClass) -> String {
    format!("{} vs {}", a.len(), b.len())
}

/// Exhaustive set-level checks for every degree in `2..=m_max`.
pub fn verify_class_identities(m_max: usize, opts: EnumerateOptions) -> Result<Report> {
    if m_max < 2 {
        return Err(Error::Domain("m_max must be at least 2".into()));
    }
    opts.guard(m_max)?;
    let phi = totients(m_max);
    let mut report = Report::new("permutation classes");
    let lifted = generate_up_to(m_max)?;
    let mut prev_w: Option<PermClass> = None;

    for m in 2..=m_max {
        let at = Some(m);
        let get = |label| enumerate(label, m, Method::Brute, opts);
        let v = get(Label::V)?;
        let w = get(Label::W)?;
        let y = get(Label::Y)?;
        let x = get(Label::X)?;
        let phi_sum: u64 = phi[1..=m].iter().sum();
        let phi_sum_prev: u64 = phi[1..m].iter().sum();

        report.record("V = W", at, v.same_members(&w), sizes(&v, &w));
        report.record("W subset of Y", at, w.is_subset_of(&y), sizes(&w, &y));
        if m >= 3 {
            let yp = get(Label::Yprime)?;
            report.record("Y = Yprime", at, y.same_members(&yp), sizes(&y, &yp));
        }
        let y_closed = shift_closure(&y);
        report.record(
            "Y is shift-closed",
            at,
            y.same_members(&y_closed),
            sizes(&y, &y_closed),
        );
        let v_closed = shift_closure(&v);
        report.record(
            "X = shift closure of V",
            at,
            x.same_members(&v_closed),
            sizes(&x, &v_closed),
        );

        let farey = enumerate(Label::Sstar, m, Method::Farey, opts)?;
        report.record(
            "Sstar (Farey) = V",
            at,
            farey.same_members(&v),
            sizes(&farey, &v),
        );
        let sstar = get(Label::Sstar)?;
        report.record(
            "Sstar (brute) = V",
            at,
            sstar.same_members(&v),
            sizes(&sstar, &v),
        );
        let lift = &lifted[m - 1];
        report.record(
            "lifted level = V",
            at,
            lift.same_members(&v),
            sizes(lift, &v),
        );

        report.record(
            "|V| = sum phi(k), k <= m",
            at,
            v.len() as u64 == phi_sum,
            format!("{} vs {phi_sum}", v.len()),
        );
        let expect_y = m as u64 * phi_sum_prev;
        report.record(
            "|Y| = m * sum phi(k), k < m",
            at,
            y.len() as u64 == expect_y,
            format!("{} vs {expect_y}", y.len()),
        );
        let singletons = v.iter().filter(|t| t.cds().len() == 1).count() as u64;
        report.record(
            "#{V : |CDS| = 1} = 2 phi(m)",
            at,
            singletons == 2 * phi[m],
            format!("{singletons} vs {}", 2 * phi[m]),
        );

        let image = PermClass::new(
            m - 1,
            None,
            y.iter()
                .filter(|t| t.first() == 1)
                .map(Permutation::psi)
                .collect::<Result<_>>()?,
        )?;
        let w_prev = match prev_w.take() {
            Some(w) => w,
            None => PermClass::new(1, Some(Label::W), vec![Permutation::identity(1)?])?,
        };
        report.record(
            "psi(S^1 cap Y_m) = W_(m-1)",
            at,
            image.same_members(&w_prev),
            sizes(&image, &w_prev),
        );
        prev_w = Some(w.clone());

        let l0 = affine_class(m, 0)?;
        let l1 = affine_class(m, 1)?;
        let vminus = get(Label::Vminus)?;
        let layers_ok = l0.intersection(&l1).is_empty()
            && l0.is_subset_of(&v)
            && l1.is_subset_of(&v)
            && l0.len() as u64 == phi[m]
            && l1.len() as u64 == phi[m]
            && vminus.same_members(&v.difference(&l1))
            && vminus.len() as u64 == v.len() as u64 - phi[m];
        report.record(
            "affine layers: disjoint, inside V, phi(m) each",
            at,
            layers_ok,
            format!(
                "|VL0| = {}, |VL1| = {}, |V-| = {}",
                l0.len(),
                l1.len(),
                vminus.len()
            ),
        );

        if m >= 3 {
            let mut classes: BTreeMap<Permutation, Vec<&Permutation>> = BTreeMap::new();
            for t in &v {
                classes.entry(t.gamma()).or_default().push(t);
            }
            let mut pairs = 0;
            let mut bad = 0;
            for group in classes.values() {
                match group[..] {
                    [_] => {}
                    [a, b] => {
                        pairs += 1;
                        let split = (l0.contains(a) && l1.contains(b))
                            || (l1.contains(a) && l0.contains(b));
                        bad += usize::from(!split);
                    }
                    _ => bad += 1,
                }
            }
            report.record(
                "shift-equivalent pairs in V split across VL0/VL1",
                at,
                bad == 0 && pairs as u64 == phi[m],
                format!("{pairs} pairs, {bad} violations"),
            );
        }

        let identity_failures = brute_filter(m, |s| {
            let total: i64 = (1..s.len()).map(|i| perm::delta_at(s, i)).sum();
            total != -((s.len() as i64 - 1) * perm::ascents(s) as i64)
        });
        report.record(
            "sum of Delta = -(m-1) A on all of S_m",
            at,
            identity_failures.is_empty(),
            format!("{} counterexamples", identity_failures.len()),
        );

        let rec_failures = v
            .iter()
            .filter(|t| !satisfies_sos_recurrence(&t.inverse()))
            .count();
        report.record(
            "inverses of V satisfy Sos's recurrence",
            at,
            rec_failures == 0,
            format!("{rec_failures} failures"),
        );
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn names(c: &PermClass) -> Vec<String> {
        c.iter().map(ToString::to_string).collect()
    }

    #[test]
    fn predicate_examples() {
        assert!(in_v(&p("2413")));
        assert!(in_v(&p("1234")));
        assert!(!in_v(&p("1324")));
        assert!(in_w(&p("2413")));
        assert!(in_w(&p("1234")));
        assert!(!in_w(&p("2134")));
        assert!(in_y(&p("1342")));
        assert!(in_y(&p("21")));
        assert!(!in_y(&p("2134")));
        assert!(in_yprime(&p("1342")).unwrap());
        assert!(in_yprime(&p("123")).unwrap());
        assert!(!in_yprime(&p("2134")).unwrap());
        assert!(matches!(in_yprime(&p("21")), Err(Error::Domain(_))));
        assert!(in_x(&p("1342")));
        assert!(in_x(&p("123456")));
        assert!(in_x(&p("1432")));
        assert!(!in_x(&p("1423")));
        assert!(in_affine_layer(&p("35241"), 1));
        assert!(!in_affine_layer(&p("35241"), 0));
    }

    #[test]
    fn successor_walks_all_of_s4_in_order() {
        let all = brute_filter(4, |_| true);
        assert_eq!(all.len(), 24);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(brute_filter(1, |_| true), vec![p("1")]);
    }

    #[test]
    fn enumerate_examples() {
        let opts = EnumerateOptions::default();
        let v3 = enumerate(Label::V, 3, Method::Brute, opts).unwrap();
        assert_eq!(names(&v3), ["123", "213", "231", "321"]);
        let v2 = enumerate(Label::V, 2, Method::Brute, opts).unwrap();
        assert_eq!(names(&v2), ["12", "21"]);
        assert_eq!(
            enumerate(Label::V, 6, Method::Lift, opts).unwrap().len(),
            12
        );
        assert_eq!(v3.label(), Some(Label::V));
    }

    #[test]
    fn enumerate_errors() {
        let opts = EnumerateOptions::default();
        assert!(matches!(
            enumerate(Label::Y, 4, Method::Lift, opts),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            enumerate(Label::X, 4, Method::Farey, opts),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            enumerate(Label::V, 11, Method::Brute, opts),
            Err(Error::SizeGuard { m: 11, limit: 10 })
        ));
        let tight = EnumerateOptions {
            max_brute_m: 3,
            force: false,
        };
        assert!(enumerate(Label::V, 4, Method::Brute, tight).is_err());
        let forced = EnumerateOptions {
            force: true,
            ..tight
        };
        assert_eq!(
            enumerate(Label::V, 4, Method::Brute, forced).unwrap().len(),
            6
        );
    }

    #[test]
    fn three_methods_agree() {
        let opts = EnumerateOptions::default();
        for m in 2..=8 {
            let brute = enumerate(Label::V, m, Method::Brute, opts).unwrap();
            let lift = enumerate(Label::V, m, Method::Lift, opts).unwrap();
            let farey = enumerate(Label::V, m, Method::Farey, opts).unwrap();
            let sstar = enumerate(Label::Sstar, m, Method::Brute, opts).unwrap();
            assert!(brute.same_members(&lift), "m = {m}");
            assert!(brute.same_members(&farey), "m = {m}");
            assert!(brute.same_members(&sstar), "m = {m}");
        }
    }

    #[test]
    fn sstar_tilde_matches_y() {
        let opts = EnumerateOptions::default();
        for m in 3..=7 {
            let tilde = enumerate(Label::SstarTilde, m, Method::Brute, opts).unwrap();
            let y = enumerate(Label::Y, m, Method::Brute, opts).unwrap();
            assert!(tilde.same_members(&y), "m = {m}");
        }
    }

    #[test]
    fn affine_layers_up_to_30() {
        let phi = totients(30);
        for (m, &count) in phi.iter().enumerate().skip(2) {
            let l0 = affine_class(m, 0).unwrap();
            let l1 = affine_class(m, 1).unwrap();
            assert!(l0.intersection(&l1).is_empty());
            assert_eq!(l0.len() as u64, count);
            assert_eq!(l1.len() as u64, count);
            assert!(l0.iter().chain(&l1).all(in_v));
        }
    }

    #[test]
    fn sos_recurrence_survey() {
        let opts = EnumerateOptions::default();
        let two = enumerate_sos_recurrence(2, opts).unwrap();
        assert!(two.inverses_of_v.is_subset_of(&two.recurrence));
        for m in 3..=6 {
            let s = enumerate_sos_recurrence(m, opts).unwrap();
            assert!(s.missing.is_empty(), "m = {m}");
        }
    }

    #[test]
    fn verify_small() {
        let report = verify_class_identities(6, EnumerateOptions::default()).unwrap();
        assert!(report.passed(), "{report}");
        assert!(verify_class_identities(1, EnumerateOptions::default()).is_err());
        let two = verify_class_identities(2, EnumerateOptions::default()).unwrap();
        assert!(two.passed(), "{two}");
    }
}
