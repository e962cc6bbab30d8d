//! Recovering `N = |Ē(F_q)|` from `λ₀(s)`.

use serde::{Deserialize, Serialize};

use super::curve::hasse_window;
use super::eigen::{lambda0, ClosedForm};
use crate::error::{precondition, Error, Result};
use crate::spectral::Exponent;

/// Relative tolerance for matching `λ₀`.
pub const MATCH_TOLERANCE: f64 = 1e-9;

/// Smallest point count the closed forms accept.
pub const MIN_POINTS: u64 = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HearingMethod {
    ForwardSearch,
    PaperClosedForm,
}

/// Values of the printed inversion formulas, evaluated for diagnostics only.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PaperFormulas {
    /// `(6 − 4λ₀)/(3 − λ₀)`, at `s = 1`.
    pub s1: Option<f64>,
    /// `(2/(λ₀ − q^(s−1)))^(1/(s−1)) + q`, for `s > 1`.
    pub sandwich_lo: Option<f64>,
    /// `(3/(λ₀ − q^(s−1)))^(1/(s−1)) + 5 + q`, for `s > 1`.
    pub sandwich_hi: Option<f64>,
    /// `t₀` solving the `s > 1` or `s < 1` formula for the recovered `N`.
    pub t0: Option<f64>,
    /// `λ₀` of the printed eigenvalue formulas at the recovered `N`.
    pub printed_lambda0: Option<f64>,
}

impl PaperFormulas {
    pub fn evaluate(lambda0_value: f64, q: u64, s: f64, n: Option<u64>, level: u32) -> Self {
        let qf = q as f64;
        let mut out = PaperFormulas::default();
        if s == 1.0 {
            out.s1 = Some((6.0 - 4.0 * lambda0_value) / (3.0 - lambda0_value));
        }
        let shift = if s > 1.0 { qf.powf(s - 1.0) } else { 1.0 };
        let root = |c: f64| (c / (lambda0_value - shift)).powf(1.0 / (s - 1.0));
        if s > 1.0 {
            out.sandwich_lo = Some(root(2.0) + qf);
            out.sandwich_hi = Some(root(3.0) + 5.0 + qf);
        }
        if let Some(n) = n {
            if s > 1.0 {
                out.t0 = Some(n as f64 - qf - root(3.0));
            } else if s < 1.0 {
                out.t0 = Some(n as f64 - qf - root(2.0));
            }
            out.printed_lambda0 = lambda0(ClosedForm::Printed, n, q, Exponent::from_f64(s), level)
                .ok()
                .map(|l| l.value.value);
        }
        out
    }

    /// Whether the sandwich bounds (when defined) strictly contain `n`.
    pub fn sandwich_contains(&self, n: u64) -> Option<bool> {
        let (lo, hi) = (self.sandwich_lo?, self.sandwich_hi?);
        Some(lo < n as f64 && (n as f64) < hi)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HearingResult {
    pub s: f64,
    pub lambda0: f64,
    pub n: u64,
    pub method: HearingMethod,
    pub window: (u64, u64),
    pub paper_formulas: PaperFormulas,
}

/// Forward `λ₀(s; N)` for every `N` in the Hasse window.
pub fn forward_table(q: u64, s: Exponent, level: u32) -> Result<Vec<(u64, f64)>> {
    let (lo, hi) = hasse_window(q);
    (lo.max(MIN_POINTS)..=hi)
        .map(|n| Ok((n, lambda0(ClosedForm::Derived, n, q, s, level)?.value.value)))
        .collect()
}

/// `N ↦ λ₀(s; N)` is strictly monotone on the Hasse window.
pub fn lambda0_strictly_monotone(q: u64, s: Exponent, level: u32) -> Result<bool> {
    let table = forward_table(q, s, level)?;
    let increasing = table.windows(2).all(|w| w[0].1 < w[1].1);
    let decreasing = table.windows(2).all(|w| w[0].1 > w[1].1);
    Ok(increasing || decreasing)
}

/// The unique `N` in the Hasse window whose forward `λ₀` matches.
pub fn hear_points(lambda0_value: f64, q: u64, s: Exponent, level: u32) -> Result<HearingResult> {
    if !lambda0_value.is_finite() || lambda0_value <= 0.0 {
        return Err(precondition(format!("λ₀ = {lambda0_value} is not a positive number")));
    }
    let window = hasse_window(q);
    let candidates: Vec<u64> = forward_table(q, s, level)?
        .into_iter()
        .filter(|&(_, v)| (v - lambda0_value).abs() <= MATCH_TOLERANCE * lambda0_value)
        .map(|(n, _)| n)
        .collect();
    let n = match candidates.as_slice() {
        [] => return Err(Error::NoMatch { lambda0: lambda0_value, lo: window.0, hi: window.1 }),
        [n] => *n,
        _ => return Err(Error::Ambiguous { lambda0: lambda0_value, candidates }),
    };
    Ok(HearingResult {
        s: s.value(),
        lambda0: lambda0_value,
        n,
        method: HearingMethod::ForwardSearch,
        window,
        paper_formulas: PaperFormulas::evaluate(lambda0_value, q, s.value(), Some(n), level),
    })
}
