use std::collections::HashSet;

use proptest::prelude::*;

use soslift::class::shift_closure;
use soslift::farey::farey_intervals;
use soslift::lifting::{lift_parent, project, BranchTag};
use soslift::sets::{in_v, in_w, in_x, in_y, in_yprime};
use soslift::sos::{sos_from_alpha, tau_explicit, tau_from_alpha};
use soslift::{Fraction, PermClass, Permutation};

fn perm(max_m: usize) -> impl Strategy<Value = Permutation> {
    (1..=max_m)
        .prop_flat_map(|m| Just((1..=m as u32).collect::<Vec<_>>()).prop_shuffle())
        .prop_map(|v| Permutation::new(v).unwrap())
}

fn of_degree(m: u32) -> impl Strategy<Value = Permutation> {
    Just((1..=m).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::new(v).unwrap())
}

fn perm_pair(max_m: usize) -> impl Strategy<Value = (Permutation, Permutation)> {
    (1..=max_m).prop_flat_map(|m| {
        let base = Just((1..=m as u32).collect::<Vec<_>>());
        (base.clone().prop_shuffle(), base.prop_shuffle())
            .prop_map(|(a, b)| (Permutation::new(a).unwrap(), Permutation::new(b).unwrap()))
    })
}

/// `p/q` in lowest terms with `q > m`, so `{iα}` are distinct and nonzero
/// for `i <= m`.
fn interior_alpha(m: usize) -> impl Strategy<Value = Fraction> {
    ((m as i64 + 1)..=(4 * m as i64 + 4))
        .prop_flat_map(|q| (1..q, Just(q)))
        .prop_map(|(p, q)| Fraction::new(p, q).unwrap())
        .prop_filter("reduced denominator above m", move |a| {
            a.denom_u64().is_some_and(|q| q > m as u64)
        })
}

proptest! {
    #[test]
    fn orbit_has_m_distinct_members(theta in perm(12)) {
        let orbit: HashSet<_> = theta.orbit().into_iter().collect();
        prop_assert_eq!(orbit.len(), theta.degree());
        prop_assert!(orbit.iter().all(|s| theta.shift_equivalent(s).unwrap()));
    }

    #[test]
    fn shift_equivalence_is_an_equivalence((a, b) in perm_pair(7), k in -20i64..20) {
        prop_assert!(a.shift_equivalent(&a).unwrap());
        prop_assert_eq!(a.shift_equivalent(&b).unwrap(), b.shift_equivalent(&a).unwrap());
        let c = b.shift(k);
        if a.shift_equivalent(&b).unwrap() {
            prop_assert!(a.shift_equivalent(&c).unwrap());
        }
        prop_assert_eq!(a.shift_equivalent(&b).unwrap(), a.gamma() == b.gamma());
    }

    #[test]
    fn closure_is_idempotent(members in prop::collection::vec(of_degree(5), 0..8)) {
        let class = PermClass::new(5, None, members).unwrap();
        let once = shift_closure(&class);
        prop_assert!(class.is_subset_of(&once));
        prop_assert!(shift_closure(&once).same_members(&once));
        prop_assert_eq!(once.len() % 5, 0);
    }

    #[test]
    fn gamma_fixes_one_and_psi_round_trips(theta in perm(15)) {
        let g = theta.gamma();
        prop_assert_eq!(g.first(), 1);
        prop_assert!(g.shift_equivalent(&theta).unwrap());
        if theta.degree() >= 2 {
            prop_assert_eq!(g.psi().unwrap().psi_inverse().unwrap(), g.clone());
        }
        prop_assert_eq!(theta.psi_inverse().unwrap().psi().unwrap(), theta);
    }

    #[test]
    fn delta_sums_to_minus_m_minus_one_times_ascents(theta in perm(20).prop_filter("m >= 2", |p| p.degree() >= 2)) {
        let m = theta.degree() as i64;
        prop_assert_eq!(theta.delta().unwrap().sum(), -(m - 1) * theta.ascents() as i64);
    }

    #[test]
    fn cds_is_shift_invariant(theta in perm(15), k in -40i64..40) {
        prop_assert_eq!(theta.shift(k).cds(), theta.cds());
    }

    #[test]
    fn inverse_is_an_involution(theta in perm(30)) {
        prop_assert_eq!(theta.inverse().inverse(), theta.clone());
        let id = Permutation::identity(theta.degree()).unwrap();
        let composed: Vec<u32> = theta.values().iter().map(|&v| theta.inverse().at(v as usize)).collect();
        prop_assert_eq!(composed, id.values().to_vec());
    }

    #[test]
    fn predicate_implications(theta in perm(8).prop_filter("m >= 3", |p| p.degree() >= 3)) {
        prop_assert_eq!(in_v(&theta), in_w(&theta));
        if in_w(&theta) {
            prop_assert!(in_y(&theta));
        }
        prop_assert_eq!(in_y(&theta), in_yprime(&theta).unwrap());
        prop_assert_eq!(in_y(&theta), in_y(&theta.shift(1)));
    }

    #[test]
    fn tau_lands_in_v_and_forms_agree((m, alpha) in (2usize..40).prop_flat_map(|m| (Just(m), interior_alpha(m)))) {
        let tau = tau_from_alpha(m, &alpha).unwrap();
        prop_assert!(in_v(&tau));
        prop_assert!(in_x(&tau));
        prop_assert_eq!(tau_explicit(m, &alpha).unwrap(), tau.clone());
        prop_assert_eq!(sos_from_alpha(m, &alpha).unwrap().inverse(), tau);
    }

    #[test]
    fn lifting_then_projecting_returns_the_parent(m in 2usize..25, pick in any::<prop::sample::Index>()) {
        let intervals = farey_intervals(m).unwrap();
        let iv = &intervals[pick.index(intervals.len())];
        let parent = tau_from_alpha(m, &iv.mediant()).unwrap();
        let fiber = lift_parent(&parent).unwrap();
        for (child, tag) in &fiber.children {
            prop_assert!(in_v(child));
            prop_assert_eq!(&project(child).unwrap(), &parent);
            prop_assert_eq!(*tag == BranchTag::None, !fiber.is_branching());
        }
    }
}
