#![allow(dead_code)]

use std::collections::BTreeSet;
use std::io::{self, Write};
use std::time::{Duration, Instant};

use padic_spectra::elliptic::{count_points_bruteforce, CurveSpec, EllipticModel};
use padic_spectra::manifold::{build_projective_model, build_y_model, CellModel};

pub struct Named {
    pub name: String,
    pub model: CellModel,
}

/// Every built-in model with a connected nerve, up to the given cell count.
pub fn builtin_models(max_cells: usize) -> Vec<Named> {
    let mut out = Vec::new();
    let mut push = |name: String, model: CellModel| {
        if model.cell_count() <= max_cells {
            out.push(Named { name, model });
        }
    };
    for p in [5, 7] {
        for m in 1..=3 {
            push(format!("P1 p={p} m={m}"), build_projective_model(p, 1, m).unwrap().into_model());
        }
        for m in 1..=2 {
            push(format!("P2 p={p} m={m}"), build_projective_model(p, 2, m).unwrap().into_model());
            push(format!("Y2 p={p} m={m}"), build_y_model(p, 2, m).unwrap().into_model());
        }
    }
    for p in [13, 17] {
        let curve = CurveSpec::from_integers(p, 1, -1, 0).unwrap();
        for m in 2..=3 {
            push(format!("E p={p} m={m}"), EllipticModel::build(&curve, m).unwrap().into_model());
        }
    }
    out
}

/// `y² = x³ − x` plus the first curve (by `(A, B)`) for each further point count
/// with split cubic and `N ≥ 6`.
pub fn curve_panel(p: u64) -> Vec<(CurveSpec, u64)> {
    let base = CurveSpec::from_integers(p, 1, -1, 0).unwrap();
    let base_n = count_points_bruteforce(&base);
    let mut seen = BTreeSet::from([base_n]);
    let mut out = vec![(base, base_n)];
    for a in 0..p as i64 {
        for b in 0..p as i64 {
            let Ok(curve) = CurveSpec::from_integers(p, 1, a, b) else { continue };
            if !curve.branch_points_rational() {
                continue;
            }
            let n = count_points_bruteforce(&curve);
            if n >= 6 && seen.insert(n) {
                out.push((curve, n));
            }
        }
    }
    out
}

pub fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

/// Prints one PASS/FAIL line and fails the test on FAIL.
pub fn verdict(criterion: u32, title: &str, ok: bool, elapsed: Duration, budget_secs: f64, detail: &str) {
    let in_budget = elapsed.as_secs_f64() < budget_secs;
    let pass = ok && in_budget;
    // Written to the raw handle so the line survives libtest's output capture.
    let _ = writeln!(
        io::stderr(),
        "{} criterion {criterion}: {title} [{:.2} s of {budget_secs} s] {detail}",
        if pass { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
    assert!(ok, "criterion {criterion} failed: {detail}");
    assert!(in_budget, "criterion {criterion} exceeded its {budget_secs} s budget");
}
