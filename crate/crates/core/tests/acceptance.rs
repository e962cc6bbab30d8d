mod common;

use common::{builtin_models, curve_panel, timed, verdict};
use num_traits::One;
use padic_spectra::elliptic::{
    count_points_bruteforce, hear_points, printed_eigenvalue, CurveSpec, EllipticModel, Region,
};
use padic_spectra::manifold::{
    build_projective_model, check_metric, equalise_pair, equalising_number_of_map, maps_ball_to_equal_ball,
    matrix_minus_identity, matrix_norm, residue_at, AnalyticMap, BallCheck, CellId, ChartSet, CoordDomain,
    Equalised, Equalising, Monomial, Polynomial, PolynomialMap, RationalComponent,
};
use padic_spectra::padic_arith::rational::{int, ratio, to_f64};
use padic_spectra::spectral::{
    enumerate_spectrum, sample_paths, wavelet_eigenvalue_numeric, Basis, ConstantTerm, Exponent, OperatorMatrix,
    SamplerConfig, SpectralCalculus,
};
use padic_spectra::{PAdicNumber, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn criterion_01_projective_plane_nerve_weights() {
    let (failures, elapsed) = timed(|| {
        let mut failures = Vec::new();
        for p in [5u64, 7] {
            let model = build_projective_model(p, 2, 1).unwrap().into_model();
            let nerve = model.nerve();
            let edge = Rational::one() - ratio(1, p as i64);
            for simplex in ChartSet::full(3).nonempty_subsets() {
                let expected = edge.pow(simplex.len() as i32 - 1);
                if nerve.weight(simplex) != Some(&expected) {
                    failures.push(format!("p={p} {simplex}: {:?}", nerve.weight(simplex)));
                }
            }
        }
        failures
    });
    verdict(1, "nerve weights of P^2 are 1, 1-1/p, (1-1/p)^2", failures.is_empty(), elapsed, 1.0, &failures.join("; "));
}

#[test]
fn criterion_02_equalising_numbers() {
    let (outcome, elapsed) = timed(|| {
        let p1 = build_projective_model(5, 1, 3).unwrap().atlas_equalising_number(3).unwrap();
        let p2 = build_projective_model(5, 2, 3).unwrap().atlas_equalising_number(3).unwrap();
        let scale = Polynomial::linear(1, 0, PAdicNumber::from_integer(5, 5, 8).unwrap());
        let px = PolynomialMap::new(5, 8, vec![CoordDomain::Disc], vec![RationalComponent::polynomial(scale)]).unwrap();
        let scaled = equalising_number_of_map(&px, 0, 3, BallCheck::default()).unwrap();
        (p1, p2, scaled)
    });
    let ok = outcome == (Equalising::Number(1), Equalising::Number(1), Equalising::NotEqualising);
    verdict(2, "e(A)=1 for P^1, P^2; x -> p x not equalising", ok, elapsed, 5.0, &format!("{outcome:?}"));
}

const P3: u64 = 5;
const PREC3: u32 = 8;

fn padic(n: i64) -> PAdicNumber {
    PAdicNumber::from_integer(P3, n, PREC3).unwrap()
}

/// `F(x) = c + A x + p·Q(x)` with `A` not congruent to the identity; unit determinant
/// or `A = p·U`, in which case the nonlinear part is divisible by `p²`.
fn random_bianalytic_map(rng: &mut ChaCha8Rng) -> PolynomialMap {
    let n = rng.random_range(1..=2usize);
    let scaled_linear = rng.random_bool(0.25);
    let matrix: Vec<Vec<i64>> = loop {
        let a: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| rng.random_range(-12..=12)).collect()).collect();
        let det = if n == 1 { a[0][0] } else { a[0][0] * a[1][1] - a[0][1] * a[1][0] };
        let far_from_identity = (0..n).any(|i| (0..n).any(|j| (a[i][j] - (i == j) as i64).rem_euclid(5) != 0));
        if det.rem_euclid(5) != 0 && (scaled_linear || far_from_identity) {
            break a;
        }
    };
    let linear_factor = if scaled_linear { 5 } else { 1 };
    let higher_factor = if scaled_linear { 25 } else { 5 };
    let components = (0..n)
        .map(|i| {
            let mut terms = vec![Monomial { exponents: vec![0; n], coeff: padic(rng.random_range(-20..=20)) }];
            for (j, &a) in matrix[i].iter().enumerate() {
                let mut e = vec![0; n];
                e[j] = 1;
                terms.push(Monomial { exponents: e, coeff: padic(a * linear_factor) });
            }
            for _ in 0..2 {
                let e: Vec<u32> = (0..n).map(|_| rng.random_range(0..=2)).collect();
                if e.iter().sum::<u32>() >= 2 {
                    terms.push(Monomial { exponents: e, coeff: padic(higher_factor * rng.random_range(-4..=4)) });
                }
            }
            RationalComponent::polynomial(Polynomial::from_terms(n, terms).unwrap())
        })
        .collect();
    PolynomialMap::new(P3, PREC3, vec![CoordDomain::Disc; n], components).unwrap()
}

#[test]
fn criterion_03_equalise_pair_on_random_maps() {
    let (failures, elapsed) = timed(|| {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut failures = Vec::new();
        for index in 0..20 {
            let f = random_bianalytic_map(&mut rng);
            let a = f.linear_part().unwrap();
            if matrix_norm(&matrix_minus_identity(&a, PREC3).unwrap()) < int(1) {
                failures.push(format!("map {index}: generator produced ||A-I|| < 1"));
                continue;
            }
            let Equalised::Transformed { h, linear_part, post, .. } = equalise_pair(&f).unwrap() else {
                failures.push(format!("map {index}: not transformed"));
                continue;
            };
            if matrix_norm(&matrix_minus_identity(&linear_part, PREC3).unwrap()) >= int(1) {
                failures.push(format!("map {index}: ||A'-I|| >= 1"));
            }
            let n = f.dim();
            for _ in 0..100 {
                let radius = rng.random_range(1..=3i64);
                let center: Vec<u64> = (0..n).map(|_| rng.random_range(0..5u64.pow(radius as u32))).collect();
                if !maps_ball_to_equal_ball(&h, &center, radius, 2).unwrap() {
                    failures.push(format!("map {index}: ball {center:?} radius 5^-{radius}"));
                }
            }
            for _ in 0..5 {
                let x: Vec<PAdicNumber> =
                    (0..n).map(|_| residue_at(P3, rng.random_range(0..5u64.pow(PREC3)), PREC3 as i64).unwrap()).collect();
                let lhs = post.eval(&f.eval(&x).unwrap()).unwrap();
                let rhs = h.eval(&x).unwrap();
                for (l, r) in lhs.iter().zip(&rhs) {
                    let digits = l.absolute_precision().unwrap().min(r.absolute_precision().unwrap());
                    if digits < PREC3 as i64 - 1 || !l.congruent(r, digits).unwrap() {
                        failures.push(format!("map {index}: post(F(x)) != H(x) at {digits} digits"));
                    }
                }
            }
        }
        failures
    });
    verdict(3, "equalise_pair on 20 random bi-analytic maps over Q_5", failures.is_empty(), elapsed, 10.0, &failures.join("; "));
}

fn region_ball(model: &EllipticModel, region: Region, depth: u32) -> padic_spectra::manifold::BallId {
    let top = (0..model.model().top_count()).find(|&t| model.region_of_top(t) == region).unwrap();
    padic_spectra::manifold::BallId { top, depth, prefix: 0 }
}

#[test]
fn criterion_04_printed_closed_form_against_quadrature() {
    let (failures, elapsed) = timed(|| {
        let mut failures = Vec::new();
        for p in [13u64, 17] {
            let curve = CurveSpec::from_integers(p, 1, -1, 0).unwrap();
            let e = EllipticModel::build(&curve, 2).unwrap();
            let n = e.point_count();
            let mu_b = ratio(1, p as i64);
            for s in [Exponent::Integer(0), Exponent::Integer(2), Exponent::Integer(3), Exponent::Real(1.5), Exponent::Real(2.7)] {
                for region in Region::ALL {
                    let quad = wavelet_eigenvalue_numeric(e.model(), region_ball(&e, region, 1), s).unwrap();
                    let printed = printed_eigenvalue(&mu_b, region, s, n, p).unwrap();
                    let agree = match (&quad.exact, &printed.exact) {
                        (Some(a), Some(b)) => a == b,
                        _ => (quad.value - printed.value).abs() < 1e-10 * quad.value.abs(),
                    };
                    if !agree {
                        failures.push(format!(
                            "q={p} N={n} s={s} region {region}: printed {:.12} vs quadrature {:.12}",
                            printed.value, quad.value
                        ));
                    }
                }
            }
        }
        failures
    });
    verdict(4, "printed eigenvalue closed form equals quadrature", failures.is_empty(), elapsed, 30.0, &failures.join("; "));
}

#[test]
fn criterion_05_s_zero_collapse() {
    let (failures, elapsed) = timed(|| {
        let mut failures = Vec::new();
        for named in builtin_models(usize::MAX) {
            let total = named.model.total_measure();
            let spectrum = enumerate_spectrum(&named.model, Exponent::Integer(0)).unwrap();
            for entry in spectrum.entries() {
                if entry.lambda_exact.as_ref() != Some(&total) {
                    failures.push(format!("{} depth {} region {}: {:?}", named.name, entry.depth, entry.region, entry.lambda_exact));
                }
            }
        }
        failures
    });
    verdict(5, "s=0 wavelet eigenvalues equal mu(X) on all built-in models", failures.is_empty(), elapsed, 10.0, &failures.join("; "));
}

#[test]
fn criterion_06_hearing_round_trip() {
    let (outcome, elapsed) = timed(|| {
        let mut failures = Vec::new();
        let mut curves = 0;
        for p in [13u64, 17, 29] {
            for (curve, n_true) in curve_panel(p) {
                curves += 1;
                let e = EllipticModel::build(&curve, 2).unwrap();
                for s in [Exponent::Integer(2), Exponent::Integer(3)] {
                    let spectrum = enumerate_spectrum(e.model(), s).unwrap();
                    let lambda0 = spectrum.lambda0().unwrap().lambda;
                    match hear_points(lambda0, p, s, 2) {
                        Ok(heard) => {
                            if heard.n != n_true {
                                failures.push(format!("{curve} s={s}: heard {} want {n_true}", heard.n));
                            }
                            if heard.paper_formulas.sandwich_contains(n_true) != Some(true) {
                                failures.push(format!(
                                    "{curve} s={s}: N={n_true} outside ({:.3}, {:.3})",
                                    heard.paper_formulas.sandwich_lo.unwrap(),
                                    heard.paper_formulas.sandwich_hi.unwrap()
                                ));
                            }
                        }
                        Err(err) => failures.push(format!("{curve} s={s}: {err}")),
                    }
                }
            }
        }
        (curves, failures)
    });
    let (curves, failures) = outcome;
    verdict(
        6,
        &format!("hearing round trip and sandwich bounds on {curves} curves"),
        curves >= 5 && failures.is_empty(),
        elapsed,
        60.0,
        &failures.join("; "),
    );
}

fn elliptic_13(level: u32) -> EllipticModel {
    EllipticModel::build(&CurveSpec::from_integers(13, 1, -1, 0).unwrap(), level).unwrap()
}

#[test]
fn criterion_07_stochasticity_and_semigroup() {
    let (failures, elapsed) = timed(|| {
        let e = elliptic_13(2);
        let model = e.model();
        let op = OperatorMatrix::new(model, Exponent::Integer(2)).unwrap();
        let spectrum = enumerate_spectrum(model, op.exponent()).unwrap();
        let mu = to_f64(model.cell_measure());
        let mut failures = Vec::new();
        for basis in [Basis::Wavelet, Basis::Complete] {
            let calc = SpectralCalculus::new(&op, &spectrum, basis, ConstantTerm::Normalized).unwrap();
            for t in [0.1, 0.7, 3.0] {
                for x in model.cells() {
                    let mass = calc.heat_row(t, x).iter().sum::<f64>() * mu;
                    if (mass - 1.0).abs() >= 1e-9 {
                        failures.push(format!("{basis:?} t={t} x={}: mass {mass}", x.0));
                        break;
                    }
                }
            }
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            for _ in 0..10 {
                let h: Vec<f64> = (0..model.cell_count()).map(|_| rng.random_range(-1.0..1.0)).collect();
                let joint = calc.semigroup_apply(0.8, &h);
                let split = calc.semigroup_apply(0.3, &calc.semigroup_apply(0.5, &h));
                let gap = joint.iter().zip(&split).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                if gap >= 1e-9 {
                    failures.push(format!("{basis:?}: semigroup gap {gap:e}"));
                }
            }
        }
        failures
    });
    verdict(7, "heat kernel stochasticity and semigroup law (E/F_13, m=2, s=2)", failures.is_empty(), elapsed, 10.0, &failures.join("; "));
}

#[test]
fn criterion_08_cross_fiber_values_are_level_independent() {
    let (failures, elapsed) = timed(|| {
        let mut failures = Vec::new();
        let coarse = elliptic_13(2);
        let fine = elliptic_13(3);
        let pairs = [(Region::A, Region::B), (Region::B, Region::C), (Region::A, Region::C)];
        for s in [Exponent::Integer(2), Exponent::Real(2.5)] {
            let ops = [&coarse, &fine].map(|e| OperatorMatrix::new(e.model(), s).unwrap());
            let spectra = [&coarse, &fine].map(|e| enumerate_spectrum(e.model(), s).unwrap());
            for basis in [Basis::Wavelet, Basis::Complete] {
                let calcs: Vec<SpectralCalculus> = (0..2)
                    .map(|i| SpectralCalculus::new(&ops[i], &spectra[i], basis, ConstantTerm::Normalized).unwrap())
                    .collect();
                for (ra, rb) in pairs {
                    let cells: Vec<(CellId, CellId)> = [&coarse, &fine]
                        .iter()
                        .map(|e| {
                            let m = e.model();
                            (m.cell_at(region_ball(e, ra, 1).top, 0), m.cell_at(region_ball(e, rb, 1).top, 0))
                        })
                        .collect();
                    for t in [0.2, 1.0] {
                        let h: Vec<f64> = (0..2).map(|i| calcs[i].heat_kernel(t, cells[i].0, cells[i].1)).collect();
                        if (h[0] - h[1]).abs() >= 1e-12 {
                            failures.push(format!("{basis:?} s={s} {ra}-{rb} H(t={t}): {} vs {}", h[0], h[1]));
                        }
                    }
                    let g: Vec<f64> = (0..2).map(|i| calcs[i].green(cells[i].0, cells[i].1)).collect();
                    if (g[0] - g[1]).abs() >= 1e-12 {
                        failures.push(format!("{basis:?} s={s} {ra}-{rb} G: {} vs {}", g[0], g[1]));
                    }
                    if basis == Basis::Wavelet && s.as_integer().is_some() {
                        let exact: Vec<Option<Rational>> =
                            (0..2).map(|i| calcs[i].green_exact(cells[i].0, cells[i].1)).collect();
                        if exact[0].is_none() || exact[0] != exact[1] {
                            failures.push(format!("s={s} {ra}-{rb} exact G: {exact:?}"));
                        }
                    }
                }
            }
        }
        failures
    });
    verdict(8, "cross-fiber H and G unchanged from level 2 to 3", failures.is_empty(), elapsed, 60.0, &failures.join("; "));
}

#[test]
fn criterion_09_sampler_matches_heat_kernel() {
    let (outcome, elapsed) = timed(|| {
        let e = elliptic_13(2);
        let model = e.model();
        let op = OperatorMatrix::new(model, Exponent::Integer(2)).unwrap();
        let spectrum = enumerate_spectrum(model, op.exponent()).unwrap();
        let calc = SpectralCalculus::new(&op, &spectrum, Basis::Complete, ConstantTerm::Normalized).unwrap();
        let start = CellId(0);
        let config = SamplerConfig { t_end: 0.5, paths: 100_000, seed: 20240917, logged_paths: 0 };
        let report = sample_paths(&op, start, &config).unwrap();
        let tv = report.total_variation(&calc.transition_law(0.5, start));
        let z = (report.first_holding.mean - report.expected_holding).abs() / report.first_holding.standard_error;
        (tv, z)
    });
    let (tv, z) = outcome;
    verdict(
        9,
        "sampler law at t=0.5 vs heat kernel; mean holding time",
        tv < 0.02 && z < 3.0,
        elapsed,
        120.0,
        &format!("TV = {tv:.5}, holding-time z = {z:.3}"),
    );
}

#[test]
fn criterion_10_metric_axioms() {
    let (failures, elapsed) = timed(|| {
        let mut failures = Vec::new();
        let models = builtin_models(2000);
        for named in &models {
            let report = check_metric(&named.model, 2000).unwrap();
            if !report.passed() {
                failures.push(format!("{}: {report:?}", named.name));
            }
        }
        (models.len(), failures)
    });
    let (count, failures) = failures;
    verdict(
        10,
        &format!("d_g symmetric and triangle inequality on {count} models"),
        count > 0 && failures.is_empty(),
        elapsed,
        60.0,
        &failures.join("; "),
    );
}

#[test]
fn bruteforce_count_is_the_model_point_count() {
    let curve = CurveSpec::from_integers(13, 1, -1, 0).unwrap();
    assert_eq!(elliptic_13(2).point_count(), count_points_bruteforce(&curve));
}
