mod common;

use common::curve_panel;
use padic_spectra::elliptic::{
    count_points_bruteforce, derived_eigenvalue, forward_table, hasse_window, hear_points, lambda0,
    lambda0_strictly_monotone, printed_eigenvalue, serre_invariant, ClosedForm, CurveSpec, EllipticModel, Region,
};
use padic_spectra::manifold::BallId;
use padic_spectra::padic_arith::rational::ratio;
use padic_spectra::spectral::{enumerate_spectrum, wavelet_eigenvalue_numeric, Exponent};

const EXPONENTS: [Exponent; 5] =
    [Exponent::Integer(0), Exponent::Integer(2), Exponent::Integer(3), Exponent::Real(1.5), Exponent::Real(2.7)];

fn region_ball(e: &EllipticModel, region: Region, depth: u32) -> BallId {
    let top = (0..e.model().top_count()).find(|&t| e.region_of_top(t) == region).unwrap();
    BallId { top, depth, prefix: 0 }
}

#[test]
fn derived_closed_form_matches_quadrature() {
    for p in [13u64, 17] {
        let curve = CurveSpec::from_integers(p, 1, -1, 0).unwrap();
        for m in 2..=3 {
            let e = EllipticModel::build(&curve, m).unwrap();
            let n = e.point_count();
            for s in EXPONENTS {
                for region in Region::ALL {
                    for depth in 1..m {
                        let quad = wavelet_eigenvalue_numeric(e.model(), region_ball(&e, region, depth), s).unwrap();
                        let mu_b = e.model().ball_measure(depth).clone();
                        let closed = derived_eigenvalue(&mu_b, region, s, n, p).unwrap();
                        match (&quad.exact, &closed.exact) {
                            (Some(a), Some(b)) => assert_eq!(a, b, "q={p} m={m} s={s} {region} depth {depth}"),
                            _ => assert!(
                                (quad.value - closed.value).abs() < 1e-10 * quad.value.abs(),
                                "q={p} m={m} s={s} {region} depth {depth}: {} vs {}",
                                quad.value,
                                closed.value
                            ),
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn printed_closed_form_discrepancy_is_reported() {
    let curve = CurveSpec::from_integers(13, 1, -1, 0).unwrap();
    let e = EllipticModel::build(&curve, 2).unwrap();
    let n = e.point_count();
    let mu_b = ratio(1, 13);
    for region in Region::ALL {
        let s = Exponent::Integer(0);
        let quad = wavelet_eigenvalue_numeric(e.model(), region_ball(&e, region, 1), s).unwrap();
        let printed = printed_eigenvalue(&mu_b, region, s, n, 13).unwrap();
        println!("s=0 region {region}: printed {} quadrature {}", printed.value, quad.value);
        assert_eq!(quad.exact, Some(ratio(n as i64, 13)));
    }
}

#[test]
fn spectrum_enumeration_agrees_with_derived_lambda0() {
    for p in [13u64, 17] {
        let curve = CurveSpec::from_integers(p, 1, -1, 0).unwrap();
        let e = EllipticModel::build(&curve, 3).unwrap();
        for s in EXPONENTS {
            let spectrum = enumerate_spectrum(e.model(), s).unwrap();
            let closed = lambda0(ClosedForm::Derived, e.point_count(), p, s, 3).unwrap();
            let from_spectrum = spectrum.lambda0().unwrap().lambda;
            assert!((from_spectrum - closed.value.value).abs() < 1e-10 * closed.value.value.abs(), "q={p} s={s}");
        }
    }
}

#[test]
fn bottom_of_spectrum_sits_on_top_balls_for_s_above_one() {
    let curve = CurveSpec::from_integers(17, 1, -1, 0).unwrap();
    let n = count_points_bruteforce(&curve);
    for s in [Exponent::Real(1.5), Exponent::Integer(2), Exponent::Integer(3)] {
        for level in 2..=4 {
            let found = lambda0(ClosedForm::Derived, n, 17, s, level).unwrap();
            assert!(found.argmin.iter().all(|c| c.depth == 1), "s={s} level={level}: {:?}", found.argmin);
        }
    }
}

#[test]
fn wavelets_per_fiber_fill_the_complement_of_constants() {
    let curve = CurveSpec::from_integers(13, 1, -1, 0).unwrap();
    for m in 2..=3u32 {
        let e = EllipticModel::build(&curve, m).unwrap();
        let spectrum = enumerate_spectrum(e.model(), Exponent::Integer(2)).unwrap();
        let tops = e.model().top_count() as u64;
        assert_eq!(spectrum.wavelet_count() as u64, tops * (13u64.pow(m - 1) - 1));
    }
}

#[test]
fn hearing_round_trip_on_the_reference_curve() {
    let curve = CurveSpec::from_integers(13, 1, -1, 0).unwrap();
    let e = EllipticModel::build(&curve, 2).unwrap();
    for s in [Exponent::Integer(2), Exponent::Integer(3)] {
        let lambda = enumerate_spectrum(e.model(), s).unwrap().lambda0().unwrap().lambda;
        assert_eq!(hear_points(lambda, 13, s, 2).unwrap().n, 8);
    }
}

#[test]
fn forward_table_is_monotone_across_the_window() {
    for q in [13u64, 17, 29] {
        for s in [Exponent::Integer(2), Exponent::Integer(3), Exponent::Real(0.5)] {
            assert!(lambda0_strictly_monotone(q, s, 2).unwrap(), "q={q} s={s}");
            let table = forward_table(q, s, 2).unwrap();
            let (lo, hi) = hasse_window(q);
            assert_eq!(table.last().unwrap().0, hi);
            assert!(table.first().unwrap().0 >= lo);
        }
    }
}

#[test]
fn serre_invariant_is_read_off_the_measure() {
    for p in [13u64, 17, 29] {
        for (curve, n) in curve_panel(p) {
            let e = EllipticModel::build(&curve, 2).unwrap();
            assert!(e.measure_identities_hold());
            assert_eq!(e.serre_invariant_from_measure(), serre_invariant(n, p));
            assert_eq!(e.model().total_measure(), ratio(n as i64, p as i64));
        }
    }
}
