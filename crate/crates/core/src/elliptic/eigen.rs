//! Closed-form wavelet eigenvalues of the elliptic model and `λ₀(s)`.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::model::Region;
use crate::error::{precondition, Result};
use crate::padic_arith::rational::{int, ratio, to_f64};
use crate::padic_arith::Rational;
use crate::spectral::{Exponent, Power};

/// `ℓ` with `μ(B) = q^(−ℓ)`.
pub fn ball_depth(mu_b: &Rational, q: u64) -> Result<u32> {
    let q = int(q as i64);
    let mut m = mu_b.clone();
    let mut depth = 0;
    while m < Rational::one() && !m.is_zero() {
        m *= &q;
        depth += 1;
    }
    if depth == 0 || !m.is_one() {
        return Err(precondition(format!("{mu_b} is not q^(-l) with l ≥ 1")));
    }
    Ok(depth)
}

fn check_count(n: u64) -> Result<()> {
    if n < 6 {
        return Err(precondition(format!("closed forms need N ≥ 6, got {n}")));
    }
    Ok(())
}

/// `Σ c_i · base_i^(scale·s + offset)`.
fn power_sum(s: Exponent, terms: &[(Rational, Rational, i64, i64)]) -> Power {
    let mut value = 0.0;
    let mut exact = Some(Rational::zero());
    for (coeff, base, scale, offset) in terms {
        let p = s.power(base, *scale, *offset);
        value += to_f64(coeff) * p.value;
        exact = match (exact, p.exact) {
            (Some(acc), Some(e)) => Some(acc + coeff * e),
            _ => None,
        };
    }
    Power { value, exact }
}

/// The cross-fiber part `Σ_{y outside the fiber} d_g^(−s) μ(y)`, from the distance table.
pub fn kappa(region: Region, s: Exponent, n: u64, q: u64) -> Result<Power> {
    check_count(n)?;
    let (n, q) = (n as i64, q as i64);
    let terms = match region {
        Region::A => vec![(ratio(n - 4, q), ratio(n - 3, q), -1, 0), (ratio(3, q), ratio(n, q), -1, 0)],
        Region::B => vec![
            (ratio(n - 5, q), ratio(n - 4, q), -1, 0),
            (ratio(3, q), ratio(n - 1, q), -1, 0),
            (ratio(1, q), ratio(n - 3, q), -1, 0),
        ],
        Region::C => vec![(ratio(n - 2, q), ratio(n - 1, q), -1, 0), (ratio(1, q), ratio(n, q), -1, 0)],
    };
    Ok(power_sum(s, &terms))
}

/// `μ(B)^(1−s) + (1 − 1/q) Σ_{j=1}^{ℓ−1} q^(j(s−1))`: the part of the eigenvalue from inside the fiber.
pub fn fiber_term(mu_b: &Rational, s: Exponent, q: u64) -> Result<Power> {
    let depth = ball_depth(mu_b, q)?;
    let qr = int(q as i64);
    let shell = Rational::one() - ratio(1, q as i64);
    let mut terms = vec![(Rational::one(), mu_b.clone(), -1, 1)];
    terms.extend((1..depth as i64).map(|j| (shell.clone(), qr.clone(), j, -j)));
    Ok(power_sum(s, &terms))
}

/// Wavelet eigenvalue on a ball of measure `μ_B` in a fiber of the given region.
pub fn derived_eigenvalue(mu_b: &Rational, region: Region, s: Exponent, n: u64, q: u64) -> Result<Power> {
    Ok(add(fiber_term(mu_b, s, q)?, kappa(region, s, n, q)?))
}

/// The printed closed form `1 + (1 − q^(1−s)) μ_B^(1−s) + κ(s)` with its `a(s)`, `b(s)`, `c(s)`.
pub fn printed_eigenvalue(mu_b: &Rational, region: Region, s: Exponent, n: u64, q: u64) -> Result<Power> {
    ball_depth(mu_b, q)?;
    check_count(n)?;
    let (ni, qi) = (n as i64, q as i64);
    let one = Rational::one();
    let qr = int(qi);
    // 1 + μ_B^(1−s) − (q μ_B)^(1−s)
    let mut terms = vec![
        (one.clone(), one.clone(), 0, 0),
        (one.clone(), mu_b.clone(), -1, 1),
        (-one.clone(), &qr * mu_b, -1, 1),
    ];
    terms.extend(match region {
        Region::A => vec![(ratio(ni - 4, qi), ratio(ni - 3, qi), -1, 0), (one.clone(), ratio(ni, qi), -1, 1)],
        Region::B => vec![
            (ratio(ni - 5, qi), ratio(ni - 4, qi), -1, 0),
            (one.clone(), ratio(ni - 1, qi), -1, 1),
            (one.clone(), ratio(ni - 3, qi), -1, 1),
        ],
        Region::C => vec![(ratio(ni - 2, qi), ratio(ni - 1, qi), -1, 0), (one, ratio(ni, qi), -1, 1)],
    });
    Ok(power_sum(s, &terms))
}

fn add(a: Power, b: Power) -> Power {
    Power {
        value: a.value + b.value,
        exact: a.exact.zip(b.exact).map(|(x, y)| x + y),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EigenClass {
    /// `ℓ` with `μ(B) = q^(−ℓ)`.
    pub depth: u32,
    pub region: Region,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Lambda0 {
    pub value: Power,
    /// Every class attaining the minimum.
    pub argmin: Vec<EigenClass>,
}

/// Which closed form to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosedForm {
    Derived,
    Printed,
}

impl ClosedForm {
    pub fn eigenvalue(self, mu_b: &Rational, region: Region, s: Exponent, n: u64, q: u64) -> Result<Power> {
        match self {
            ClosedForm::Derived => derived_eigenvalue(mu_b, region, s, n, q),
            ClosedForm::Printed => printed_eigenvalue(mu_b, region, s, n, q),
        }
    }
}

/// Minimum over balls of depth `1..m` and all regions.
pub fn lambda0(form: ClosedForm, n: u64, q: u64, s: Exponent, level: u32) -> Result<Lambda0> {
    if level < 2 {
        return Err(precondition("wavelets exist only for level m ≥ 2"));
    }
    let mut values = Vec::new();
    for depth in 1..level {
        let mu_b = Rational::one() / int(q as i64).pow(depth as i32);
        for region in Region::ALL {
            values.push((EigenClass { depth, region }, form.eigenvalue(&mu_b, region, s, n, q)?));
        }
    }
    let best = values
        .iter()
        .map(|(_, v)| v)
        .min_by(|a, b| match (&a.exact, &b.exact) {
            (Some(x), Some(y)) => x.cmp(y),
            _ => a.value.total_cmp(&b.value),
        })
        .cloned()
        .expect("at least one class");
    let argmin = values
        .iter()
        .filter(|(_, v)| match (&v.exact, &best.exact) {
            (Some(x), Some(y)) => x == y,
            _ => (v.value - best.value).abs() <= 1e-12 * best.value.abs(),
        })
        .map(|(c, _)| *c)
        .collect();
    Ok(Lambda0 { value: best, argmin })
}
