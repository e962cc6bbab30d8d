use std::sync::OnceLock;

use padic_spectra::elliptic::{CurveSpec, EllipticModel};
use padic_spectra::manifold::{build_projective_model, build_y_model, BallId, CellId, CellModel};
use padic_spectra::spectral::{wavelet_eigenvalue_at, Exponent, OperatorMatrix};
use padic_spectra::{FiniteField, PAdicNumber};
use proptest::prelude::*;

const PREC: u32 = 12;

fn padic(p: u64, n: i64) -> PAdicNumber {
    PAdicNumber::from_integer(p, n, PREC).unwrap()
}

fn same(a: &PAdicNumber, b: &PAdicNumber) -> bool {
    a.congruent(b, PREC as i64 - 2).unwrap()
}

fn models() -> &'static [CellModel] {
    static MODELS: OnceLock<Vec<CellModel>> = OnceLock::new();
    MODELS.get_or_init(|| {
        let curve = CurveSpec::from_integers(13, 1, -1, 0).unwrap();
        vec![
            build_projective_model(5, 1, 3).unwrap().into_model(),
            build_projective_model(5, 2, 2).unwrap().into_model(),
            build_y_model(7, 2, 1).unwrap().into_model(),
            EllipticModel::build(&curve, 2).unwrap().into_model(),
        ]
    })
}

fn model_and_cells() -> impl Strategy<Value = (usize, usize, usize)> {
    (0..models().len()).prop_flat_map(|i| {
        let n = models()[i].cell_count();
        (Just(i), 0..n, 0..n)
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn padic_ring_laws(p in prop::sample::select(vec![5u64, 7, 13]), a in -5000i64..5000, b in -5000i64..5000, c in -5000i64..5000) {
        let (x, y, z) = (padic(p, a), padic(p, b), padic(p, c));
        prop_assert!(same(&x.add(&y).unwrap(), &y.add(&x).unwrap()));
        prop_assert!(same(&x.mul(&y).unwrap(), &y.mul(&x).unwrap()));
        prop_assert!(same(&x.add(&y).unwrap().add(&z).unwrap(), &x.add(&y.add(&z).unwrap()).unwrap()));
        prop_assert!(same(&x.mul(&y).unwrap().mul(&z).unwrap(), &x.mul(&y.mul(&z).unwrap()).unwrap()));
        let lhs = x.mul(&y.add(&z).unwrap()).unwrap();
        let rhs = x.mul(&y).unwrap().add(&x.mul(&z).unwrap()).unwrap();
        prop_assert!(same(&lhs, &rhs));
        prop_assert!(same(&x.sub(&x).unwrap(), &PAdicNumber::zero(p)));
    }

    #[test]
    fn padic_inverse_of_units(p in prop::sample::select(vec![5u64, 7]), k in -1000i64..1000, r in 1i64..5) {
        let x = padic(p, k * p as i64 + r);
        let one = padic(p, 1);
        prop_assert!(same(&x.mul(&x.inverse().unwrap()).unwrap(), &one));
        prop_assert_eq!(x.norm(), padic_spectra::padic_arith::rational::int(1));
    }

    #[test]
    fn finite_field_axioms(field in prop::sample::select(vec![(5u64, 1u32), (7, 2), (13, 1), (5, 3)]), i in any::<u64>(), j in any::<u64>(), k in any::<u64>()) {
        let f = FiniteField::new(field.0, field.1).unwrap();
        let q = f.order();
        let (a, b, c) = (f.element(i % q).unwrap(), f.element(j % q).unwrap(), f.element(k % q).unwrap());
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert!(f.add(a, f.neg(a)).is_zero());
        if let Some(inv) = f.inv(a) {
            prop_assert_eq!(f.mul(a, inv), f.one());
        } else {
            prop_assert!(a.is_zero());
        }
        prop_assert_eq!(f.pow(a, q), a);
    }

    #[test]
    fn operator_rows_sum_to_zero(i in 0..4usize, s in 0.0f64..4.0, x in any::<u64>()) {
        let model = &models()[i];
        let op = OperatorMatrix::new(model, Exponent::from_f64(s)).unwrap();
        let x = CellId((x % model.cell_count() as u64) as usize);
        let off: f64 = model.cells().filter(|&y| y != x).map(|y| op.entry(x, y)).sum();
        prop_assert!((op.entry(x, x) + off).abs() < 1e-9 * op.diagonal(x).abs().max(1.0));
    }

    #[test]
    fn wavelet_eigenvalue_is_independent_of_the_cell((i, a, b) in model_and_cells(), depth in 1u32..3, s in 0.0f64..4.0) {
        let model = &models()[i];
        if model.level() < 2 {
            return Ok(());
        }
        let depth = 1 + (depth - 1) % (model.level() - 1);
        let ball = model.ball_of(CellId(a), depth);
        let range = model.ball_cells(ball);
        let other = CellId(range.start + b % range.len());
        let s = Exponent::from_f64(s);
        let at_a = wavelet_eigenvalue_at(model, ball, s, CellId(a)).unwrap();
        let at_other = wavelet_eigenvalue_at(model, ball, s, other).unwrap();
        match (&at_a.exact, &at_other.exact) {
            (Some(u), Some(v)) => prop_assert_eq!(u, v),
            _ => prop_assert!((at_a.value - at_other.value).abs() < 1e-12 * at_a.value.abs()),
        }
    }

    #[test]
    fn geodesic_distance_is_symmetric_and_positive((i, a, b) in model_and_cells()) {
        let model = &models()[i];
        let (x, y) = (CellId(a), CellId(b));
        prop_assume!(x != y);
        let dxy = model.geodesic_distance(x, y).unwrap();
        prop_assert_eq!(&dxy, &model.geodesic_distance(y, x).unwrap());
        prop_assert!(dxy > num_traits::Zero::zero());
        prop_assert!(&dxy >= model.cell_measure());
    }
}

#[test]
fn top_balls_cover_the_model() {
    for model in models() {
        let covered: usize = (0..model.top_count())
            .map(|top| model.ball_cells(BallId { top, depth: 1, prefix: 0 }).len())
            .sum();
        assert_eq!(covered, model.cell_count());
    }
}
