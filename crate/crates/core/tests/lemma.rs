use pdisk_core::ext_analyzer::{validate_middle_constraints, SupportSets};
use pdisk_core::qp_algebra::{is_split_mono, linear_d_fixture, verify_exact};
use pdisk_core::{FieldConfig, QpError};

#[test]
fn every_parameter_choice_gives_a_non_split_sequence() {
    for field in [FieldConfig::Rationals, FieldConfig::prime(3).unwrap()] {
        for n in 6..=10 {
            for r in 2..n {
                for s in r + 1..n {
                    for i in s + 1..n - 1 {
                        let fx = linear_d_fixture(n, r, s, i, &field).unwrap();
                        let q = &fx.quiver;
                        assert!(
                            verify_exact(q, &fx.bottom, &fx.middle, &fx.top, &fx.f, &fx.g, &field).unwrap(),
                            "{n} {r} {s} {i}"
                        );
                        assert!(!is_split_mono(q, &fx.bottom, &fx.middle, &fx.f, &field).unwrap(), "{n} {r} {s} {i}");
                    }
                }
            }
        }
    }
}

#[test]
fn characteristic_two_is_rejected() {
    let err = linear_d_fixture(8, 2, 4, 6, &FieldConfig::prime(2).unwrap()).unwrap_err();
    assert_eq!(err, QpError::Characteristic(2));
}

#[test]
fn bad_parameters_are_rejected() {
    for (n, r, s, i) in [(8, 1, 4, 6), (8, 4, 4, 6), (8, 2, 4, 7), (5, 2, 3, 4)] {
        assert!(matches!(linear_d_fixture(n, r, s, i, &FieldConfig::Rationals), Err(QpError::Parameter(_))));
    }
}

#[test]
fn middle_term_constraints_hold() {
    let field = FieldConfig::Rationals;
    let (n, r, s, i) = (8, 2, 4, 6);
    let fx = linear_d_fixture(n, r, s, i, &field).unwrap();
    let sets = SupportSets { socle: Some(vec![0, r, s]), top: Some(vec![i - 1, n - 2, n - 1]) };
    let report = validate_middle_constraints(&fx.quiver, &fx.bottom, &fx.middle, &fx.top, &sets, &field).unwrap();
    assert!(report.all(), "{report:?}");
}
