//! Finite fields `F_q`, `q = p^f`, via discrete-log tables.
//!
//! Elements are indices in `[0, q)` whose base-`p` digits are the
//! coordinates in the basis `1, x, …, x^(f−1)` modulo the field's monic
//! irreducible polynomial.

use std::fmt;

use super::{check_prime, checked_pow};
use crate::error::{precondition, Result};

/// Largest field order supported by the table representation.
pub const MAX_ORDER: u64 = 1 << 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FqElement(u32);

impl FqElement {
    pub const ZERO: FqElement = FqElement(0);

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FqElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Debug)]
pub struct FiniteField {
    p: u64,
    f: u32,
    q: u64,
    /// Monic modulus, lowest degree first, length `f + 1`.
    modulus: Vec<u64>,
    exp: Vec<u32>,
    log: Vec<u32>,
    trace: Vec<u32>,
}

/// Product of two polynomials over `F_p` (coefficients lowest degree first).
fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    out
}

/// Monic polynomial of degree `d` whose lower coefficients are the base-`p`
/// digits of `code`.
fn monic_from_code(code: u64, d: u32, p: u64) -> Vec<u64> {
    let mut c = digits(code, d, p);
    c.push(1);
    c
}

fn digits(mut n: u64, len: u32, p: u64) -> Vec<u64> {
    (0..len)
        .map(|_| {
            let d = n % p;
            n /= p;
            d
        })
        .collect()
}

fn code_of(lower: &[u64], p: u64) -> u64 {
    lower.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Lowest monic irreducible of degree `f`, ordering candidates by the
/// integer whose base-`p` digits are the non-leading coefficients
/// (so the constant term varies fastest).
fn lowest_irreducible(p: u64, f: u32) -> Vec<u64> {
    if f == 1 {
        return vec![0, 1];
    }
    let count = p.pow(f) as usize;
    let mut reducible = vec![false; count];
    // Every reducible monic of degree f is a product of a monic of degree
    // d ≤ f/2 with a monic of degree f − d.
    for d in 1..=f / 2 {
        for a in 0..p.pow(d) {
            let pa = monic_from_code(a, d, p);
            for b in 0..p.pow(f - d) {
                let prod = poly_mul(&pa, &monic_from_code(b, f - d, p), p);
                reducible[code_of(&prod[..f as usize], p) as usize] = true;
            }
        }
    }
    let code = reducible.iter().position(|&r| !r).expect("irreducibles exist in every degree");
    monic_from_code(code as u64, f, p)
}

impl FiniteField {
    pub fn new(p: u64, f: u32) -> Result<Self> {
        check_prime(p)?;
        if f == 0 {
            return Err(precondition("extension degree must be positive"));
        }
        let q = checked_pow(p, f)?;
        if q > MAX_ORDER {
            return Err(precondition(format!("field order {q} exceeds {MAX_ORDER}")));
        }
        let modulus = lowest_irreducible(p, f);
        let mut field = Self { p, f, q, modulus, exp: vec![], log: vec![], trace: vec![] };
        field.build_tables()?;
        Ok(field)
    }

    /// Multiplication on coordinate vectors, used only while the tables are built.
    fn slow_mul(&self, a: u64, b: u64) -> u64 {
        let (p, f) = (self.p, self.f as usize);
        let prod = poly_mul(&digits(a, self.f, p), &digits(b, self.f, p), p);
        let mut r = prod;
        for top in (f..r.len()).rev() {
            let c = r[top];
            if c == 0 {
                continue;
            }
            for (i, &m) in self.modulus.iter().enumerate() {
                let k = top - f + i;
                r[k] = (r[k] + (p - c) * m) % p;
            }
        }
        code_of(&r[..f], p)
    }

    fn build_tables(&mut self) -> Result<()> {
        let q = self.q;
        let order = q - 1;
        let generator = (2..q.max(3))
            .chain(std::iter::once(1))
            .find(|&g| {
                let mut x = g;
                for k in 1..order {
                    if x == 1 {
                        return k == order;
                    }
                    x = self.slow_mul(x, g);
                }
                x == 1
            })
            .ok_or_else(|| precondition("modulus does not yield a field"))?;
        let mut exp = Vec::with_capacity(order as usize);
        let mut log = vec![u32::MAX; q as usize];
        let mut x = 1u64;
        for k in 0..order {
            if log[x as usize] != u32::MAX {
                return Err(precondition("modulus is not irreducible"));
            }
            exp.push(x as u32);
            log[x as usize] = k as u32;
            x = self.slow_mul(x, generator);
        }
        self.exp = exp;
        self.log = log;
        // Tr(a) = a + a^p + … + a^(p^(f−1)).
        let trace = (0..q)
            .map(|a| {
                let a = FqElement(a as u32);
                let mut acc = FqElement::ZERO;
                let mut frob = a;
                for _ in 0..self.f {
                    acc = self.add(acc, frob);
                    frob = self.pow(frob, self.p);
                }
                debug_assert!((acc.0 as u64) < self.p);
                acc.0
            })
            .collect();
        self.trace = trace;
        Ok(())
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.f
    }

    pub fn order(&self) -> u64 {
        self.q
    }

    /// Monic modulus, lowest degree coefficient first.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn elements(&self) -> impl Iterator<Item = FqElement> + Clone {
        (0..self.q as u32).map(FqElement)
    }

    pub fn element(&self, index: u64) -> Result<FqElement> {
        if index >= self.q {
            return Err(precondition(format!("index {index} outside F_{}", self.q)));
        }
        Ok(FqElement(index as u32))
    }

    pub fn one(&self) -> FqElement {
        FqElement(1)
    }

    /// The image of an integer in the prime field.
    pub fn from_int(&self, n: i64) -> FqElement {
        FqElement(n.rem_euclid(self.p as i64) as u32)
    }

    /// From coordinates (reduced mod p); missing trailing coordinates are 0.
    pub fn from_coeffs(&self, coeffs: &[i64]) -> Result<FqElement> {
        if coeffs.len() > self.f as usize {
            return Err(precondition(format!(
                "{} coordinates given for a degree-{} field",
                coeffs.len(),
                self.f
            )));
        }
        let reduced: Vec<u64> =
            coeffs.iter().map(|&c| c.rem_euclid(self.p as i64) as u64).collect();
        Ok(FqElement(code_of(&reduced, self.p) as u32))
    }

    pub fn coeffs(&self, a: FqElement) -> Vec<u64> {
        digits(a.0 as u64, self.f, self.p)
    }

    pub fn add(&self, a: FqElement, b: FqElement) -> FqElement {
        if self.f == 1 {
            return FqElement(((a.0 as u64 + b.0 as u64) % self.p) as u32);
        }
        let (mut x, mut y) = (a.0 as u64, b.0 as u64);
        let (mut out, mut place) = (0u64, 1u64);
        for _ in 0..self.f {
            out += ((x % self.p + y % self.p) % self.p) * place;
            x /= self.p;
            y /= self.p;
            place *= self.p;
        }
        FqElement(out as u32)
    }

    pub fn neg(&self, a: FqElement) -> FqElement {
        let mut x = a.0 as u64;
        let (mut out, mut place) = (0u64, 1u64);
        for _ in 0..self.f {
            out += ((self.p - x % self.p) % self.p) * place;
            x /= self.p;
            place *= self.p;
        }
        FqElement(out as u32)
    }

    pub fn sub(&self, a: FqElement, b: FqElement) -> FqElement {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FqElement, b: FqElement) -> FqElement {
        if a.is_zero() || b.is_zero() {
            return FqElement::ZERO;
        }
        let order = self.q - 1;
        let k = (self.log[a.index()] as u64 + self.log[b.index()] as u64) % order;
        FqElement(self.exp[k as usize])
    }

    pub fn inv(&self, a: FqElement) -> Option<FqElement> {
        if a.is_zero() {
            return None;
        }
        let order = self.q - 1;
        let k = (order - self.log[a.index()] as u64) % order;
        Some(FqElement(self.exp[k as usize]))
    }

    pub fn pow(&self, a: FqElement, e: u64) -> FqElement {
        if e == 0 {
            return self.one();
        }
        if a.is_zero() {
            return FqElement::ZERO;
        }
        let order = self.q - 1;
        let k = (self.log[a.index()] as u128 * e as u128 % order as u128) as usize;
        FqElement(self.exp[k])
    }

    /// Euler's criterion: `a` is a square iff `a = 0` or `a^((q−1)/2) = 1`.
    pub fn is_square(&self, a: FqElement) -> bool {
        a.is_zero() || self.pow(a, (self.q - 1) / 2) == self.one()
    }

    /// Absolute trace to `F_p`, as an integer in `[0, p)`.
    pub fn trace(&self, a: FqElement) -> u64 {
        self.trace[a.index()] as u64
    }
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.f == other.f
    }
}

impl Eq for FiniteField {}
