use sdof_core::dimensions::{
    build_sets, limit_tuple, receiver_dimension_audit, sdof_lower_bound, AlignmentParams, Gain,
    SetLabel,
};
use sdof_core::{Error, Rational};

#[test]
fn sets_have_distinct_keys() {
    let params = AlignmentParams::new(1, 2, 1, 2, 0.01).unwrap();
    let sets = build_sets(params).unwrap();
    for j in 1..=2 {
        for label in [SetLabel::T(j), SetLabel::TTilde(j)] {
            let keys: Vec<u128> = sets.get(label).unwrap().keys().collect();
            assert!(
                keys.windows(2).all(|w| w[0] < w[1]),
                "{label} not strictly sorted"
            );
        }
    }
    assert!(sets.get(SetLabel::T(3)).is_err());
}

#[test]
fn wrong_relations_are_caught() {
    let params = AlignmentParams::new(1, 2, 1, 2, 0.01).unwrap();
    let sets = build_sets(params).unwrap();
    // T~ is strictly larger than T, so the reverse containment fails.
    assert!(matches!(
        sets.check_subset(None, SetLabel::TTilde(1), SetLabel::T(1)),
        Err(Error::Structural(_))
    ));
    assert!(matches!(
        sets.check_disjoint(None, SetLabel::TTilde(1), None, SetLabel::TTilde(1)),
        Err(Error::Structural(_))
    ));
    assert!(sets
        .check_subset(None, SetLabel::T(1), SetLabel::TTilde(1))
        .is_ok());
    assert!(sets
        .check_subset(Some(Gain::H(9, 1)), SetLabel::T(1), SetLabel::TTilde(1))
        .is_err());
}

#[test]
fn audit_respects_guard() {
    let small = receiver_dimension_audit(AlignmentParams::new(0, 1, 1, 2, 0.01).unwrap()).unwrap();
    assert!(small.audited && small.note.is_none());
    assert_eq!(small.r1, 2 * small.t_tilde_size);
    let big = receiver_dimension_audit(AlignmentParams::new(2, 3, 2, 3, 0.01).unwrap()).unwrap();
    assert!(!big.audited);
    assert!(big.checks.is_empty());
    assert!(big.note.unwrap().starts_with("not audited"));
}

#[test]
fn bound_approaches_limit() {
    for (p, m) in [(0, 1), (1, 1), (2, 3)] {
        let limit: Vec<f64> = limit_tuple(p, m).iter().map(Rational::to_f64).collect();
        let mut prev_gap = f64::INFINITY;
        for l in [10u64, 100, 1000, 10_000, 100_000] {
            let lb = sdof_lower_bound(&AlignmentParams::new(p, m, 1, l, 0.0).unwrap());
            let gap = (lb.d1 - limit[0]).abs();
            assert!(gap < prev_gap, "p={p} m={m} l={l}");
            assert!(lb.d1 < limit[0]);
            prev_gap = gap;
        }
        assert!(prev_gap < 1e-3);
    }
}

#[test]
fn bound_is_finite_for_huge_exponents() {
    let lb = sdof_lower_bound(&AlignmentParams::new(2, 3, 2, 1 << 40, 1e-3).unwrap());
    assert!(lb.d1.is_finite() && lb.xi > 0.0 && lb.xi < 1e-9);
}

#[test]
fn invalid_params() {
    assert!(AlignmentParams::new(1, 0, 1, 2, 0.01).is_err());
    assert!(AlignmentParams::new(1, 1, 0, 2, 0.01).is_err());
    assert!(AlignmentParams::new(1, 1, 1, 0, 0.01).is_err());
    assert!(AlignmentParams::new(1, 1, 1, 2, 1.0).is_err());
}
