//! Polynomial and rational maps over `Q_p`, equalising numbers and the
//! equalisation transform `H(x) = p^m F(x) + x`.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{precondition, Error, Result};
use crate::padic_arith::{rational, vector_norm, PAdicNumber, Rational};

/// Per-coordinate domain: `O_K`, the unit sphere `S_0`, or `pO_K`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoordDomain {
    Disc,
    Sphere,
    PDisc,
}

impl CoordDomain {
    /// Smallest `N` for which the domain is a union of radius-`p^(−N)` balls.
    pub fn min_radius_exponent(self) -> i64 {
        match self {
            CoordDomain::Disc => 0,
            CoordDomain::Sphere | CoordDomain::PDisc => 1,
        }
    }

    fn admits_residue(self, residue: u64, p: u64) -> bool {
        match self {
            CoordDomain::Disc => true,
            CoordDomain::Sphere => !residue.is_multiple_of(p),
            CoordDomain::PDisc => residue.is_multiple_of(p),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Monomial {
    pub exponents: Vec<u32>,
    pub coeff: PAdicNumber,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    vars: usize,
    terms: Vec<Monomial>,
}

impl Polynomial {
    pub fn zero(vars: usize) -> Self {
        Self { vars, terms: vec![] }
    }

    pub fn constant(vars: usize, c: PAdicNumber) -> Self {
        Self { vars, terms: vec![Monomial { exponents: vec![0; vars], coeff: c }] }
    }

    /// `c · x_i`.
    pub fn linear(vars: usize, i: usize, c: PAdicNumber) -> Self {
        let mut exponents = vec![0; vars];
        exponents[i] = 1;
        Self { vars, terms: vec![Monomial { exponents, coeff: c }] }
    }

    pub fn from_terms(vars: usize, terms: Vec<Monomial>) -> Result<Self> {
        if terms.iter().any(|t| t.exponents.len() != vars) {
            return Err(precondition("monomial arity does not match the number of variables"));
        }
        Ok(Self { vars, terms })
    }

    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|t| t.exponents.iter().sum()).max().unwrap_or(0)
    }

    pub fn eval(&self, x: &[PAdicNumber], p: u64) -> Result<PAdicNumber> {
        let mut acc = PAdicNumber::zero(p);
        for t in &self.terms {
            let mut term = t.coeff;
            for (xi, &e) in x.iter().zip(&t.exponents) {
                if e > 0 {
                    term = term.mul(&xi.pow(e)?)?;
                }
            }
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Self { vars: self.vars, terms }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                let exponents = a.exponents.iter().zip(&b.exponents).map(|(x, y)| x + y).collect();
                terms.push(Monomial { exponents, coeff: a.coeff.mul(&b.coeff)? });
            }
        }
        Ok(Self { vars: self.vars, terms })
    }

    pub fn scale(&self, c: &PAdicNumber) -> Result<Self> {
        let terms = self
            .terms
            .iter()
            .map(|t| Ok(Monomial { exponents: t.exponents.clone(), coeff: t.coeff.mul(c)? }))
            .collect::<Result<_>>()?;
        Ok(Self { vars: self.vars, terms })
    }

    pub fn derivative(&self, var: usize, precision: u32) -> Result<Self> {
        let mut terms = Vec::new();
        for t in &self.terms {
            let e = t.exponents[var];
            if e == 0 {
                continue;
            }
            let mut exponents = t.exponents.clone();
            exponents[var] -= 1;
            let factor = PAdicNumber::from_integer(t.coeff.prime(), e as i64, precision)?;
            terms.push(Monomial { exponents, coeff: t.coeff.mul(&factor)? });
        }
        Ok(Self { vars: self.vars, terms })
    }
}

/// `numerator / denominator`; the denominator must be a unit on the domain.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalComponent {
    pub numerator: Polynomial,
    pub denominator: Option<Polynomial>,
}

impl RationalComponent {
    pub fn polynomial(numerator: Polynomial) -> Self {
        Self { numerator, denominator: None }
    }

    pub fn eval(&self, x: &[PAdicNumber], p: u64) -> Result<PAdicNumber> {
        let n = self.numerator.eval(x, p)?;
        match &self.denominator {
            None => Ok(n),
            Some(d) => n.div(&d.eval(x, p)?),
        }
    }

    fn partial(&self, var: usize, x: &[PAdicNumber], p: u64, precision: u32) -> Result<PAdicNumber> {
        let dn = self.numerator.derivative(var, precision)?.eval(x, p)?;
        match &self.denominator {
            None => Ok(dn),
            Some(den) => {
                let n = self.numerator.eval(x, p)?;
                let d = den.eval(x, p)?;
                let dd = den.derivative(var, precision)?.eval(x, p)?;
                dn.mul(&d)?.sub(&n.mul(&dd)?)?.div(&d.mul(&d)?)
            }
        }
    }
}

pub type Matrix = Vec<Vec<PAdicNumber>>;

/// A locally bi-analytic map on a product domain inside `K^n`.
pub trait AnalyticMap {
    fn prime(&self) -> u64;
    fn dim(&self) -> usize;
    fn domain(&self) -> &[CoordDomain];
    /// Digits of precision carried by the map's coefficients.
    fn working_precision(&self) -> u32;
    fn eval(&self, x: &[PAdicNumber]) -> Result<Vec<PAdicNumber>>;
}

#[derive(Clone, Debug, PartialEq)]
pub struct PolynomialMap {
    p: u64,
    precision: u32,
    domain: Vec<CoordDomain>,
    components: Vec<RationalComponent>,
}

impl PolynomialMap {
    pub fn new(
        p: u64,
        precision: u32,
        domain: Vec<CoordDomain>,
        components: Vec<RationalComponent>,
    ) -> Result<Self> {
        let n = domain.len();
        if n == 0 || components.len() != n {
            return Err(precondition("a map on K^n needs n components and n domain factors"));
        }
        let arity_ok = components.iter().all(|c| {
            c.numerator.vars == n && c.denominator.as_ref().is_none_or(|d| d.vars == n)
        });
        if !arity_ok {
            return Err(precondition("component arity does not match the dimension"));
        }
        Ok(Self { p, precision, domain, components })
    }

    pub fn identity(p: u64, precision: u32, domain: Vec<CoordDomain>) -> Result<Self> {
        let n = domain.len();
        let one = PAdicNumber::from_integer(p, 1, precision)?;
        let components =
            (0..n).map(|i| RationalComponent::polynomial(Polynomial::linear(n, i, one))).collect();
        Self::new(p, precision, domain, components)
    }

    pub fn components(&self) -> &[RationalComponent] {
        &self.components
    }

    /// Jacobian matrix `∂F_i/∂x_j` at `x`.
    pub fn jacobian(&self, x: &[PAdicNumber]) -> Result<Matrix> {
        let n = self.domain.len();
        self.components
            .iter()
            .map(|c| (0..n).map(|j| c.partial(j, x, self.p, self.precision)).collect())
            .collect()
    }

    /// The linear part `A`: the Jacobian at the origin (degree-1 coefficients
    /// for polynomial components).
    pub fn linear_part(&self) -> Result<Matrix> {
        let zero = vec![self.exact_input(0, self.precision as i64)?; self.domain.len()];
        self.jacobian(&zero)
    }

    fn exact_input(&self, value: u64, abs: i64) -> Result<PAdicNumber> {
        residue_at(self.p, value, abs)
    }
}

impl AnalyticMap for PolynomialMap {
    fn prime(&self) -> u64 {
        self.p
    }

    fn dim(&self) -> usize {
        self.domain.len()
    }

    fn domain(&self) -> &[CoordDomain] {
        &self.domain
    }

    fn working_precision(&self) -> u32 {
        self.precision
    }

    fn eval(&self, x: &[PAdicNumber]) -> Result<Vec<PAdicNumber>> {
        self.components.iter().map(|c| c.eval(x, self.p)).collect()
    }
}

/// The integer `value` known modulo `p^abs`.
pub fn residue_at(p: u64, value: u64, abs: i64) -> Result<PAdicNumber> {
    if value == 0 {
        return Ok(PAdicNumber::inexact_zero(p, abs));
    }
    let x = PAdicNumber::from_bigint(p, &BigInt::from(value), abs.max(1) as u32)?;
    Ok(x.truncate_abs(abs))
}

pub fn matrix_norm(a: &Matrix) -> Rational {
    a.iter().map(|row| vector_norm(row)).max().unwrap_or_else(Rational::zero)
}

pub fn matrix_minus_identity(a: &Matrix, precision: u32) -> Result<Matrix> {
    let p = a[0][0].prime();
    let one = PAdicNumber::from_integer(p, 1, precision)?;
    a.iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, x)| if i == j { x.sub(&one) } else { Ok(*x) })
                .collect()
        })
        .collect()
}

pub fn mat_vec(a: &Matrix, x: &[PAdicNumber]) -> Result<Vec<PAdicNumber>> {
    a.iter()
        .map(|row| {
            row.iter().zip(x).try_fold(PAdicNumber::zero(x[0].prime()), |acc, (r, v)| acc.add(&r.mul(v)?))
        })
        .collect()
}

/// Gauss-Jordan inverse with valuation-minimising pivots.
pub fn mat_inverse(a: &Matrix, precision: u32) -> Result<Matrix> {
    let n = a.len();
    let p = a[0][0].prime();
    let one = PAdicNumber::from_integer(p, 1, precision)?;
    let mut m: Vec<Vec<PAdicNumber>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { one } else { PAdicNumber::zero(p) }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .filter(|&r| !m[r][col].is_zero())
            .min_by_key(|&r| m[r][col].valuation().unwrap())
            .ok_or(Error::NotInvertible)?;
        m.swap(col, pivot);
        let inv = m[col][col].inverse()?;
        for x in m[col].iter_mut() {
            *x = x.mul(&inv)?;
        }
        for r in 0..n {
            if r == col || m[r][col].is_exact_zero() {
                continue;
            }
            let factor = m[r][col];
            for c in 0..2 * n {
                let delta = factor.mul(&m[col][c])?;
                m[r][c] = m[r][c].sub(&delta)?;
            }
        }
    }
    Ok(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn determinant(a: &Matrix) -> Result<PAdicNumber> {
    let n = a.len();
    if n == 1 {
        return Ok(a[0][0]);
    }
    let p = a[0][0].prime();
    let mut acc = PAdicNumber::zero(p);
    for j in 0..n {
        let minor: Matrix = a[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, x)| *x).collect())
            .collect();
        let term = a[0][j].mul(&determinant(&minor)?)?;
        acc = if j % 2 == 0 { acc.add(&term)? } else { acc.sub(&term)? };
    }
    Ok(acc)
}

/// Solves `F(x) = z` on the domain of `F`: residue search for a start
/// point, then Newton iteration to the precision of `z`.
pub fn invert_map(f: &PolynomialMap, z: &[PAdicNumber]) -> Result<Vec<PAdicNumber>> {
    let p = f.p;
    let n = f.dim();
    let target_abs = z.iter().filter_map(|c| c.absolute_precision()).min().unwrap_or(f.precision as i64);
    let mut start = None;
    for residues in domain_residues(&f.domain, p, 1) {
        let x: Vec<PAdicNumber> =
            residues.iter().map(|&r| residue_at(p, r, target_abs)).collect::<Result<_>>()?;
        let Ok(y) = f.eval(&x) else { continue };
        let close = y.iter().zip(z).all(|(a, b)| a.sub(b).map(|d| d.valuation_lower_bound() >= 1).unwrap_or(false));
        if close {
            start = Some(x);
            break;
        }
    }
    let mut x = start.ok_or_else(|| precondition("point is not in the image of the map"))?;
    for _ in 0..2 * target_abs.max(1) + 4 {
        let y = f.eval(&x)?;
        let residual: Vec<PAdicNumber> = y.iter().zip(z).map(|(a, b)| a.sub(b)).collect::<Result<_>>()?;
        if residual.iter().all(|r| r.valuation_lower_bound() >= target_abs) {
            return Ok(x.iter().map(|c| c.truncate_abs(target_abs)).collect());
        }
        let step = mat_vec(&mat_inverse(&f.jacobian(&x)?, f.precision)?, &residual)?;
        x = x.iter().zip(&step).map(|(a, b)| a.sub(b)).collect::<Result<_>>()?;
        x = x.iter().map(|c| c.truncate_abs(target_abs)).collect();
        debug_assert_eq!(x.len(), n);
    }
    Err(Error::PrecisionExhausted("Newton inversion did not converge".into()))
}

/// Residue vectors mod `p^k` of the radius-`p^(−k)` balls in the domain.
fn domain_residues(domain: &[CoordDomain], p: u64, k: u32) -> impl Iterator<Item = Vec<u64>> + '_ {
    let modulus = p.pow(k);
    let total = modulus.pow(domain.len() as u32);
    (0..total).filter_map(move |mut code| {
        let mut v = Vec::with_capacity(domain.len());
        for d in domain {
            let r = code % modulus;
            code /= modulus;
            if !d.admits_residue(r, p) {
                return None;
            }
            v.push(r);
        }
        Some(v)
    })
}

/// Options for ball-image checks.
#[derive(Clone, Copy, Debug)]
pub struct BallCheck {
    /// Digits resolved below the ball radius.
    pub extra_digits: u32,
    /// Maximum number of ball centers examined per radius.
    pub max_centers: usize,
    pub seed: u64,
}

impl Default for BallCheck {
    fn default() -> Self {
        Self { extra_digits: 2, max_centers: 64, seed: 0 }
    }
}

/// Whether `F` maps the ball `center + p^radius_exp · O^n` onto a ball of
/// the same radius, decided by computing every image point modulo
/// `p^(radius_exp + extra_digits)`.
pub fn maps_ball_to_equal_ball(
    f: &dyn AnalyticMap,
    center: &[u64],
    radius_exp: i64,
    extra_digits: u32,
) -> Result<bool> {
    let p = f.prime();
    let n = f.dim();
    let w = radius_exp + extra_digits as i64;
    if w > f.working_precision() as i64 {
        return Err(Error::PrecisionExhausted(format!(
            "ball check needs {w} digits, map carries {}",
            f.working_precision()
        )));
    }
    let lift = |t: &[u64]| -> Result<Vec<PAdicNumber>> {
        center
            .iter()
            .zip(t)
            .map(|(&c, &ti)| residue_at(p, c + ti * p.pow(radius_exp as u32), w))
            .collect()
    };
    let k = extra_digits;
    let count = p.pow(k * n as u32);
    let base = f.eval(&lift(&vec![0; n])?)?;
    let scale = PAdicNumber::from_parts(p, -radius_exp, 1, f.working_precision())?;
    let mut keys = HashSet::with_capacity(count as usize);
    for code in 0..count {
        let mut c = code;
        let t: Vec<u64> = (0..n)
            .map(|_| {
                let d = c % p.pow(k);
                c /= p.pow(k);
                d
            })
            .collect();
        let y = f.eval(&lift(&t)?)?;
        let mut key = Vec::with_capacity(n);
        for (yi, bi) in y.iter().zip(&base) {
            let d = yi.sub(bi)?;
            if d.valuation_lower_bound() < radius_exp {
                return Ok(false);
            }
            let scaled = d.mul(&scale)?;
            key.push(scaled.residue(k)?);
        }
        keys.insert(key);
    }
    Ok(keys.len() as u64 == count)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Equalising {
    Number(i64),
    NotEqualising,
}

/// Smallest `N` in `[n_min, n_max]` such that every tested radius
/// `p^(−N')`, `N ≤ N' ≤ n_max`, has its sampled balls mapped to balls of
/// the same radius. A radius only qualifies when the domain is a union of
/// balls of that radius.
pub fn equalising_number_of_map(
    f: &dyn AnalyticMap,
    n_min: i64,
    n_max: i64,
    check: BallCheck,
) -> Result<Equalising> {
    if n_min > n_max {
        return Err(precondition("empty radius range"));
    }
    if (f.working_precision() as i64) < n_max + check.extra_digits as i64 {
        return Err(Error::PrecisionExhausted(format!(
            "working precision {} is below {} + {} digits",
            f.working_precision(),
            n_max,
            check.extra_digits
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(check.seed);
    let mut ok = Vec::new();
    for radius in n_min..=n_max {
        ok.push(radius_preserved(f, radius, check, &mut rng)?);
    }
    let mut answer = Equalising::NotEqualising;
    for (i, preserved) in ok.iter().enumerate().rev() {
        if !preserved {
            break;
        }
        answer = Equalising::Number(n_min + i as i64);
    }
    Ok(answer)
}

fn radius_preserved(
    f: &dyn AnalyticMap,
    radius: i64,
    check: BallCheck,
    rng: &mut ChaCha8Rng,
) -> Result<bool> {
    let p = f.prime();
    let min_radius = f.domain().iter().map(|d| d.min_radius_exponent()).max().unwrap_or(0);
    if radius < min_radius {
        return Ok(false);
    }
    let k = radius as u32;
    let total: u64 = f
        .domain()
        .iter()
        .map(|d| match d {
            CoordDomain::Disc => p.pow(k),
            CoordDomain::Sphere => p.pow(k) - p.pow(k - 1),
            CoordDomain::PDisc => p.pow(k - 1),
        })
        .product();
    let centers: Vec<Vec<u64>> = if total as usize <= check.max_centers {
        domain_residues(f.domain(), p, k).collect()
    } else {
        (0..check.max_centers)
            .map(|_| {
                f.domain()
                    .iter()
                    .map(|d| loop {
                        let r = rng.random_range(0..p.pow(k));
                        if d.admits_residue(r, p) {
                            break r;
                        }
                    })
                    .collect()
            })
            .collect()
    };
    for c in centers {
        if !maps_ball_to_equal_ball(f, &c, radius, check.extra_digits)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `ψ̃(z) = p^m z + F^{−1}(z)`, so that `ψ̃ ∘ F = H`.
#[derive(Clone, Debug)]
pub struct PostComposition {
    f: PolynomialMap,
    shift: u32,
}

impl AnalyticMap for PostComposition {
    fn prime(&self) -> u64 {
        self.f.p
    }

    fn dim(&self) -> usize {
        self.f.dim()
    }

    fn domain(&self) -> &[CoordDomain] {
        self.f.domain()
    }

    fn working_precision(&self) -> u32 {
        self.f.precision
    }

    fn eval(&self, z: &[PAdicNumber]) -> Result<Vec<PAdicNumber>> {
        let p = self.f.p;
        let pm = PAdicNumber::from_parts(p, self.shift as i64, 1, self.f.precision)?;
        let inv = invert_map(&self.f, z)?;
        z.iter().zip(&inv).map(|(zi, xi)| pm.mul(zi)?.add(xi)).collect()
    }
}

#[derive(Clone, Debug)]
pub enum Equalised {
    /// `‖A − I‖ < 1` already; the map is returned unchanged.
    AlreadyGood(PolynomialMap),
    Transformed {
        h: PolynomialMap,
        shift: u32,
        linear_part: Matrix,
        post: PostComposition,
    },
}

impl Equalised {
    pub fn map(&self) -> &PolynomialMap {
        match self {
            Equalised::AlreadyGood(f) => f,
            Equalised::Transformed { h, .. } => h,
        }
    }

    pub fn shift(&self) -> Option<u32> {
        match self {
            Equalised::AlreadyGood(_) => None,
            Equalised::Transformed { shift, .. } => Some(*shift),
        }
    }
}

pub fn equalise_pair(f: &PolynomialMap) -> Result<Equalised> {
    let a = f.linear_part()?;
    let det = determinant(&a)?;
    if det.is_zero() {
        return Err(Error::NotInvertible);
    }
    let a_minus_i = matrix_minus_identity(&a, f.precision)?;
    if matrix_norm(&a_minus_i) < rational::int(1) {
        return Ok(Equalised::AlreadyGood(f.clone()));
    }
    let min_val = a
        .iter()
        .flatten()
        .filter_map(PAdicNumber::valuation)
        .min()
        .ok_or(Error::NotInvertible)?;
    let shift = (1 - min_val).max(0) as u32;
    let p = f.p;
    let n = f.dim();
    let pm = PAdicNumber::from_parts(p, shift as i64, 1, f.precision)?;
    let one = PAdicNumber::from_integer(p, 1, f.precision)?;
    let components = f
        .components
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let x_i = Polynomial::linear(n, i, one);
            let numerator = match &c.denominator {
                None => c.numerator.scale(&pm)?.add(&x_i),
                Some(d) => c.numerator.scale(&pm)?.add(&x_i.mul(d)?),
            };
            Ok(RationalComponent { numerator, denominator: c.denominator.clone() })
        })
        .collect::<Result<Vec<_>>>()?;
    let h = PolynomialMap::new(p, f.precision, f.domain.clone(), components)?;
    let linear_part: Matrix = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, x)| {
                    let scaled = pm.mul(x)?;
                    if i == j { scaled.add(&one) } else { Ok(scaled) }
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    Ok(Equalised::Transformed {
        h,
        shift,
        linear_part,
        post: PostComposition { f: f.clone(), shift },
    })
}

/// JSON form of a [`PolynomialMap`]; coefficients are `"num/den"` strings.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolynomialMapSpec {
    pub p: u64,
    pub precision: u32,
    pub domain: Vec<CoordDomain>,
    pub components: Vec<ComponentSpec>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComponentSpec {
    pub numerator: Vec<TermSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub denominator: Option<Vec<TermSpec>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TermSpec {
    pub coeff: String,
    pub exponents: Vec<u32>,
}

impl PolynomialMap {
    pub fn from_spec(spec: &PolynomialMapSpec) -> Result<Self> {
        let n = spec.domain.len();
        let poly = |terms: &[TermSpec]| -> Result<Polynomial> {
            let terms = terms
                .iter()
                .map(|t| {
                    let c = rational::parse(&t.coeff)?;
                    Ok(Monomial {
                        exponents: t.exponents.clone(),
                        coeff: PAdicNumber::from_rational(spec.p, &c, spec.precision)?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Polynomial::from_terms(n, terms)
        };
        let components = spec
            .components
            .iter()
            .map(|c| {
                Ok(RationalComponent {
                    numerator: poly(&c.numerator)?,
                    denominator: c.denominator.as_deref().map(poly).transpose()?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(spec.p, spec.precision, spec.domain.clone(), components)
    }

    pub fn to_spec(&self) -> PolynomialMapSpec {
        let terms = |p: &Polynomial| -> Vec<TermSpec> {
            p.terms
                .iter()
                .map(|t| TermSpec { coeff: rational::format(&t.coeff.to_rational()), exponents: t.exponents.clone() })
                .collect()
        };
        PolynomialMapSpec {
            p: self.p,
            precision: self.precision,
            domain: self.domain.clone(),
            components: self
                .components
                .iter()
                .map(|c| ComponentSpec {
                    numerator: terms(&c.numerator),
                    denominator: c.denominator.as_ref().map(terms),
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u64 = 5;
    const PREC: u32 = 8;

    fn c(n: i64) -> PAdicNumber {
        PAdicNumber::from_integer(P, n, PREC).unwrap()
    }

    fn scalar_map(coeffs: &[(i64, u32)], domain: CoordDomain) -> PolynomialMap {
        let terms = coeffs.iter().map(|&(a, e)| Monomial { exponents: vec![e], coeff: c(a) }).collect();
        let poly = Polynomial::from_terms(1, terms).unwrap();
        PolynomialMap::new(P, PREC, vec![domain], vec![RationalComponent::polynomial(poly)]).unwrap()
    }

    fn inversion() -> PolynomialMap {
        let num = Polynomial::constant(1, c(1));
        let den = Polynomial::linear(1, 0, c(1));
        let comp = RationalComponent { numerator: num, denominator: Some(den) };
        PolynomialMap::new(P, PREC, vec![CoordDomain::Sphere], vec![comp]).unwrap()
    }

    #[test]
    fn identity_is_equalising_from_the_start() {
        let id = PolynomialMap::identity(P, PREC, vec![CoordDomain::Disc]).unwrap();
        assert_eq!(equalising_number_of_map(&id, 0, 3, BallCheck::default()).unwrap(), Equalising::Number(0));
    }

    #[test]
    fn scaling_by_p_is_not_equalising() {
        let f = scalar_map(&[(5, 1)], CoordDomain::Disc);
        assert_eq!(
            equalising_number_of_map(&f, 0, 3, BallCheck::default()).unwrap(),
            Equalising::NotEqualising
        );
    }

    #[test]
    fn inversion_on_the_sphere_has_number_one() {
        assert_eq!(
            equalising_number_of_map(&inversion(), 0, 3, BallCheck::default()).unwrap(),
            Equalising::Number(1)
        );
    }

    #[test]
    fn precision_must_cover_the_range() {
        assert!(matches!(
            equalising_number_of_map(&inversion(), 0, 7, BallCheck::default()),
            Err(Error::PrecisionExhausted(_))
        ));
    }

    #[test]
    fn translation_is_already_good() {
        let f = scalar_map(&[(3, 0), (1, 1)], CoordDomain::Disc);
        let e = equalise_pair(&f).unwrap();
        assert!(matches!(e, Equalised::AlreadyGood(_)));
        assert_eq!(e.shift(), None);
    }

    #[test]
    fn unit_scaling_needs_one_shift() {
        let f = scalar_map(&[(2, 1)], CoordDomain::Disc);
        let Equalised::Transformed { shift, linear_part, post, h } = equalise_pair(&f).unwrap() else {
            panic!("expected a transformed map");
        };
        assert_eq!(shift, 1);
        // A' = 5·2 + 1 = 11 and ‖A' − I‖ = 1/5.
        assert!(linear_part[0][0].congruent(&c(11), PREC as i64).unwrap());
        let diff = matrix_minus_identity(&linear_part, PREC).unwrap();
        assert_eq!(matrix_norm(&diff), rational::ratio(1, 5));
        for x in [0u64, 1, 7, 24, 3120] {
            let xin = vec![residue_at(P, x, 6).unwrap()];
            let lhs = post.eval(&f.eval(&xin).unwrap()).unwrap();
            let rhs = h.eval(&xin).unwrap();
            assert!(lhs[0].congruent(&rhs[0], 6).unwrap());
        }
    }

    #[test]
    fn singular_linear_part_is_rejected() {
        let f = scalar_map(&[(1, 0), (1, 2)], CoordDomain::Disc);
        assert_eq!(equalise_pair(&f).unwrap_err(), Error::NotInvertible);
    }

    #[test]
    fn newton_inverts_a_cubic_perturbation() {
        let f = scalar_map(&[(1, 0), (3, 1), (5, 3)], CoordDomain::Disc);
        let x = vec![residue_at(P, 1234, 7).unwrap()];
        let y = f.eval(&x).unwrap();
        let back = invert_map(&f, &y).unwrap();
        assert!(back[0].congruent(&x[0], 7).unwrap());
    }

    #[test]
    fn spec_roundtrip() {
        let f = inversion();
        let json = serde_json::to_string(&f.to_spec()).unwrap();
        let back = PolynomialMap::from_spec(&serde_json::from_str(&json).unwrap()).unwrap();
        assert_eq!(back, f);
    }
}
