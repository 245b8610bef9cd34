mod common;

use common::*;
use flatdef::cylinder::{decompose, default_bound_sq, DecompositionStatus};
use flatdef::deformation::CylinderForm;
use flatdef::delaunay::translation_equivalent;
use flatdef::geom::{Mat2, Vec2};
use flatdef::homology::{Cocycle, HomologyFrame};
use flatdef::orbit::{accumulate_tangent, complete_parabolicity_check, complete_periodicity_scan, parabolicity_of};
use flatdef::saddle::enumerate_directions;
use flatdef::scalar::Scalar;
use proptest::prelude::*;

fn scalar() -> impl Strategy<Value = Scalar> {
    (-50i64..=50, 1i64..=20, -50i64..=50, 1i64..=20).prop_map(|(a, b, c, d)| Scalar::quad(a, b, c, d, 5))
}

fn sl2z() -> impl Strategy<Value = Mat2> {
    prop::collection::vec(prop_oneof![Just(Mat2::ints(1, 1, 0, 1)), Just(Mat2::ints(1, 0, 1, 1)), Just(Mat2::ints(0, -1, 1, 0))], 0..6)
        .prop_map(|ws| ws.iter().fold(Mat2::identity(), |acc, w| &acc * w))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scalar_text_round_trips(x in scalar()) {
        prop_assert_eq!(x.to_string().parse::<Scalar>().unwrap(), x);
    }

    #[test]
    fn scalar_division_inverts_multiplication(x in scalar(), y in scalar()) {
        prop_assume!(!y.is_zero());
        prop_assert_eq!(&(&x * &y) / &y, x);
    }

    #[test]
    fn periods_are_equivariant(g in sl2z()) {
        let m = golden_l();
        let f = HomologyFrame::new(&m);
        let gm = m.gl2_action(&g).unwrap();
        prop_assert_eq!(gm.area(), m.area());
        let before = f.period_map(&m);
        let after = f.period_map(&gm);
        for (a, b) in before.values.iter().zip(&after.values) {
            prop_assert_eq!(g.apply(&Vec2::from_complex(a)), Vec2::from_complex(b));
        }
    }

    #[test]
    fn deformation_is_linear_in_the_period_cocycle(num in 0i64..=20, j in 0usize..4) {
        let m = l_origami();
        let f = HomologyFrame::new(&m);
        let eps = Scalar::from_ratio(num, 100);
        let zeta = Cocycle::dual(&f, j);
        let moved = f.deform_from_periods(&m, &zeta, &eps).unwrap();
        let before = f.period_map(&m);
        let after = f.period_map(&moved);
        for i in 0..before.values.len() {
            let expected = &before.values[i] + &zeta.values[i].scale(&eps);
            prop_assert_eq!(&after.values[i], &expected);
        }
    }

    #[test]
    fn equivalence_is_symmetric(p in 0i64..=8, q in 1i64..=4) {
        let m = l_origami();
        let f = HomologyFrame::new(&m);
        let d = decompose(&m, &Vec2::ints(1, 0), &default_bound_sq(&m));
        let sheared = CylinderForm::new(&f, &d).unwrap().shear(&[0, 1], &Scalar::from_ratio(p, q)).unwrap();
        prop_assert!(translation_equivalent(&sheared, &sheared));
        prop_assert_eq!(translation_equivalent(&m, &sheared), translation_equivalent(&sheared, &m));
        prop_assert_eq!(translation_equivalent(&m, &sheared), p % (2 * q) == 0);
    }

    #[test]
    fn tangent_span_grows_monotonically(cut in 0usize..12) {
        let m = l_origami();
        let f = HomologyFrame::new(&m);
        let bound = default_bound_sq(&m);
        let dirs = enumerate_directions(&m, &Scalar::from_int(5));
        let cut = cut.min(dirs.len());
        let prefix = accumulate_tangent(&m, &f, &dirs[..cut], &bound);
        let full = accumulate_tangent(&m, &f, &dirs, &bound);
        prop_assert!(prefix.dim() <= full.dim());
        prop_assert!(prefix.generators.iter().all(|g| full.contains(&g.cocycle)));
    }
}

#[test]
fn irrational_moduli_ratio_fails_parabolicity() {
    let m = sqrt2_l();
    let bound = default_bound_sq(&m);
    let h = decompose(&m, &Vec2::ints(1, 0), &bound);
    assert_eq!(h.status, DecompositionStatus::Periodic);
    let mut moduli = h.moduli();
    moduli.sort();
    assert_eq!(moduli, vec![Scalar::from_ratio(1, 2), Scalar::quad(0, 1, 1, 1, 2)]);

    let r2 = Scalar::from_int(2);
    let report = complete_parabolicity_check(&m, &r2, &bound);
    assert!(!report.pass());
    let failing: Vec<&Vec2> = report.entries.iter().filter(|e| e.failure.is_some()).map(|e| &e.direction).collect();
    assert!(failing.contains(&&Vec2::ints(1, 0)));
    let again = parabolicity_of(&complete_periodicity_scan(&m, &r2, &bound));
    assert_eq!(again.pass(), report.pass());
}

#[test]
fn lattice_fixtures_pass_parabolicity() {
    for m in square_tiled_fixtures() {
        let bound = default_bound_sq(&m);
        assert!(complete_parabolicity_check(&m, &Scalar::from_int(5), &bound).pass(), "{:?}", m.label());
    }
    let g = golden_l();
    assert!(complete_parabolicity_check(&g, &Scalar::from_int(5), &default_bound_sq(&g)).pass());
}
