use std::collections::BTreeSet;

use proptest::prelude::*;

use sdof_core::dimensions::limit_tuple;
use sdof_core::ops::{contains, decompose, irredundant_rows, max_weighted_sum, violated_rows};
use sdof_core::slice::region_slice;
use sdof_core::vertex::{enumerate_with, ic_closed_form, Method};
use sdof_core::{
    build_system, enumerate_extreme_points, ChannelFamily, Error, ExtremePoint, FamilyKind,
    HalfspaceSystem, Rational,
};

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn coords(sys: &HalfspaceSystem) -> BTreeSet<Vec<Rational>> {
    enumerate_extreme_points(sys)
        .iter()
        .map(|p| p.coords().to_vec())
        .collect()
}

fn family() -> impl Strategy<Value = ChannelFamily> {
    (
        prop_oneof![Just(FamilyKind::Mac), Just(FamilyKind::Ic)],
        2usize..=4,
    )
        .prop_map(|(kind, k)| ChannelFamily::new(kind, k).unwrap())
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-3i64..=12, 1i64..=12).prop_map(|(n, d)| r(n, d))
}

#[test]
fn json_round_trip_all_families() {
    for k in 2..=6 {
        for kind in [FamilyKind::Mac, FamilyKind::Ic] {
            let sys = build_system(ChannelFamily::new(kind, k).unwrap());
            let text = serde_json::to_string(&sys.to_json()).unwrap();
            let back = HalfspaceSystem::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
            assert_eq!(back, sys);
        }
    }
}

#[test]
fn json_uses_one_based_users() {
    let sys = build_system(ChannelFamily::ic(3).unwrap());
    let v = sys.to_json();
    let text = v.to_string();
    assert!(text.contains(r#""class":"secrecy","user":1"#), "{text}");
    assert!(text.contains(r#""pair":[1,2]"#), "{text}");
    assert!(!text.contains(r#""user":0"#));
}

#[test]
fn removing_rows_against_enumeration() {
    for k in 2..=4 {
        for kind in [FamilyKind::Mac, FamilyKind::Ic] {
            let sys = build_system(ChannelFamily::new(kind, k).unwrap());
            let base = coords(&sys);
            let irr = irredundant_rows(&sys).unwrap();
            for row in 0..sys.len() {
                let after = coords(&sys.without_row(row));
                if irr.contains(&row) {
                    assert_ne!(
                        after,
                        base,
                        "{kind} K={k} dropping row {row} ({}) kept the vertices",
                        sys.tags()[row]
                    );
                } else {
                    assert_eq!(
                        after, base,
                        "{kind} K={k} dropping redundant row {row} changed the vertices"
                    );
                }
            }
        }
    }
}

#[test]
fn vertices_decompose_to_themselves() {
    for k in 2..=4 {
        for kind in [FamilyKind::Mac, FamilyKind::Ic] {
            let sys = build_system(ChannelFamily::new(kind, k).unwrap());
            for v in enumerate_extreme_points(&sys) {
                let dec = decompose(&sys, v.coords()).unwrap();
                assert_eq!(dec.terms.len(), 1);
                assert_eq!(dec.terms[0].1, Rational::one());
                assert_eq!(dec.terms[0].0, v);
            }
        }
    }
}

#[test]
fn outside_points_are_domain_errors() {
    let sys = build_system(ChannelFamily::ic(4).unwrap());
    let err = decompose(&sys, &[r(3, 5), r(3, 5), r(0, 1), r(0, 1)]).unwrap_err();
    assert!(matches!(err, Error::Domain(_)));
    assert!(matches!(
        violated_rows(&sys, &[r(1, 2)]),
        Err(Error::Shape(_))
    ));
}

#[test]
fn pruned_and_brute_agree() {
    for k in 2..=5 {
        for kind in [FamilyKind::Mac, FamilyKind::Ic] {
            let sys = build_system(ChannelFamily::new(kind, k).unwrap());
            assert_eq!(
                enumerate_with(&sys, Method::Brute),
                enumerate_with(&sys, Method::Pruned)
            );
        }
    }
}

#[test]
fn extreme_point_records_active_rows() {
    let sys = build_system(ChannelFamily::ic(4).unwrap());
    let v = ExtremePoint::at(&sys, vec![r(2, 3), r(1, 3), r(0, 1), r(0, 1)]).unwrap();
    for &row in v.active_set() {
        assert_eq!(sys.lhs(row, v.coords()), sys.rhs()[row]);
    }
    assert_eq!(v.witness().len(), 4);
    assert!(ExtremePoint::at(&sys, vec![r(1, 4), r(1, 4), r(0, 1), r(0, 1)]).is_err());
}

#[test]
fn limit_tuple_is_a_vertex() {
    // (m/(m+1), 1/(m+1) x p) padded with m zeros is a vertex of the
    // (p+1+m)-user region: the helpers carry no message.
    for m in 1..=3usize {
        for p in 0..=2usize {
            let k = p + 1 + m;
            let mut pt = limit_tuple(p, m);
            pt.resize(k, Rational::zero());
            let sys = build_system(ChannelFamily::ic(k).unwrap());
            assert!(ExtremePoint::at(&sys, pt.clone()).is_ok(), "p={p} m={m}");
            if k >= 3 {
                assert!(ic_closed_form(k)
                    .unwrap()
                    .iter()
                    .any(|v| v.coords() == pt.as_slice()));
            }
        }
    }
}

#[test]
fn slices_match_vertex_projection() {
    // With the other coordinates pinned at zero, the slice polygon is the
    // set of vertices of the K=2 face.
    for k in 3..=5 {
        for kind in [FamilyKind::Mac, FamilyKind::Ic] {
            let fam = ChannelFamily::new(kind, k).unwrap();
            let fixed: Vec<(usize, Rational)> = (2..k).map(|i| (i, Rational::zero())).collect();
            let s = region_slice(fam, &fixed).unwrap();
            let sys = build_system(fam);
            let face: BTreeSet<[Rational; 2]> = enumerate_extreme_points(&sys)
                .iter()
                .filter(|v| v.coords()[2..].iter().all(Rational::is_zero))
                .map(|v| [v.coords()[0].clone(), v.coords()[1].clone()])
                .collect();
            let got: BTreeSet<[Rational; 2]> = s.vertices.iter().cloned().collect();
            assert_eq!(got, face, "{kind} K={k}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn membership_matches_violations(fam in family(), pt in prop::collection::vec(small_rational(), 4)) {
        let sys = build_system(fam);
        let d = &pt[..fam.users()];
        prop_assert_eq!(contains(&sys, d).unwrap(), violated_rows(&sys, d).unwrap().is_empty());
    }

    #[test]
    fn decomposition_is_exact(fam in family(), w in prop::collection::vec(0i64..=5, 80)) {
        let sys = build_system(fam);
        let verts = enumerate_extreme_points(&sys);
        let w = &w[..verts.len()];
        let total: i64 = w.iter().sum();
        prop_assume!(total > 0);
        let mut d = vec![Rational::zero(); fam.users()];
        for (v, &wi) in verts.iter().zip(w) {
            for (x, c) in d.iter_mut().zip(v.coords()) {
                *x += &(&r(wi, total) * c);
            }
        }
        let dec = decompose(&sys, &d).unwrap();
        prop_assert!(dec.is_valid_for(&d));
        prop_assert!(dec.terms.len() <= fam.users() + 1);
    }

    #[test]
    fn maximum_bounds_every_vertex(fam in family(), w in prop::collection::vec(-4i64..=6, 4)) {
        let sys = build_system(fam);
        let w: Vec<Rational> = w[..fam.users()].iter().map(|&x| Rational::from_integer(x)).collect();
        let (best, argmax) = max_weighted_sum(&sys, &w).unwrap();
        prop_assert!(!argmax.is_empty());
        for v in enumerate_extreme_points(&sys) {
            let val: Rational = v.coords().iter().zip(&w).map(|(a, b)| a * b).sum();
            prop_assert!(val <= best);
        }
    }

    #[test]
    fn vertices_are_permutation_closed(fam in family()) {
        let sys = build_system(fam);
        let set = coords(&sys);
        for v in &set {
            let mut rev = v.clone();
            rev.reverse();
            prop_assert!(set.contains(&rev));
            let mut rot = v.clone();
            rot.rotate_left(1);
            prop_assert!(set.contains(&rot));
        }
    }
}
