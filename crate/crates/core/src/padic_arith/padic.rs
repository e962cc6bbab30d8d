//! Elements of `Q_p` known to finite precision.
//!
//! A nonzero value is `unit · p^val` with the unit known modulo `p^prec`
//! (relative precision). Zero is either exact or an inexact `O(p^abs)`
//! produced by cancellation.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::rational::{prime_power, Rational};
use super::{check_prime, checked_pow};
use crate::error::{precondition, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Repr {
    /// Zero known modulo `p^abs`; `abs == None` is exact zero.
    Zero { abs: Option<i64> },
    Unit { val: i64, unit: u64, prec: u32 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PAdicNumber {
    p: u64,
    repr: Repr,
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    let (mut r0, mut r1) = (m as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert_eq!(r0, 1);
    t0.rem_euclid(m as i128) as u64
}

impl PAdicNumber {
    fn modulus(&self, prec: u32) -> u64 {
        self.p.pow(prec)
    }

    fn validate_prec(p: u64, prec: u32) -> Result<()> {
        if prec == 0 {
            return Err(precondition("p-adic precision must be at least one digit"));
        }
        let m = checked_pow(p, prec)?;
        if m > 1 << 62 {
            return Err(precondition(format!("{p}^{prec} exceeds the supported modulus")));
        }
        Ok(())
    }

    pub fn zero(p: u64) -> Self {
        Self { p, repr: Repr::Zero { abs: None } }
    }

    /// `O(p^abs)`.
    pub fn inexact_zero(p: u64, abs: i64) -> Self {
        Self { p, repr: Repr::Zero { abs: Some(abs) } }
    }

    /// `n` with `prec` digits of relative precision. Zero maps to exact zero.
    pub fn from_integer(p: u64, n: i64, prec: u32) -> Result<Self> {
        Self::from_bigint(p, &BigInt::from(n), prec)
    }

    pub fn from_bigint(p: u64, n: &BigInt, prec: u32) -> Result<Self> {
        check_prime(p)?;
        Self::validate_prec(p, prec)?;
        if n.is_zero() {
            return Ok(Self::zero(p));
        }
        let pb = BigInt::from(p);
        let mut n = n.clone();
        let mut val = 0i64;
        loop {
            let (q, r) = n.div_rem(&pb);
            if !r.is_zero() {
                break;
            }
            n = q;
            val += 1;
        }
        let m = BigInt::from(p.pow(prec));
        let unit = n.mod_floor(&m).to_u64().unwrap();
        Ok(Self { p, repr: Repr::Unit { val, unit, prec } })
    }

    /// A rational number with `prec` digits of relative precision.
    pub fn from_rational(p: u64, r: &Rational, prec: u32) -> Result<Self> {
        if r.is_zero() {
            check_prime(p)?;
            return Ok(Self::zero(p));
        }
        let num = Self::from_bigint(p, r.numer(), prec)?;
        let den = Self::from_bigint(p, r.denom(), prec)?;
        num.div(&den)
    }

    /// `unit · p^val` directly; `unit` must be coprime to `p`.
    pub fn from_parts(p: u64, val: i64, unit: u64, prec: u32) -> Result<Self> {
        check_prime(p)?;
        Self::validate_prec(p, prec)?;
        if unit.is_multiple_of(p) {
            return Err(precondition(format!("unit {unit} is divisible by p = {p}")));
        }
        Ok(Self { p, repr: Repr::Unit { val, unit: unit % p.pow(prec), prec } })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero { .. })
    }

    pub fn is_exact_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero { abs: None })
    }

    /// `None` for zero (exact or inexact).
    pub fn valuation(&self) -> Option<i64> {
        match self.repr {
            Repr::Unit { val, .. } => Some(val),
            Repr::Zero { .. } => None,
        }
    }

    /// Lower bound for the valuation: exact for nonzero values, the known
    /// absolute precision for an inexact zero.
    pub fn valuation_lower_bound(&self) -> i64 {
        match self.repr {
            Repr::Unit { val, .. } => val,
            Repr::Zero { abs } => abs.unwrap_or(i64::MAX),
        }
    }

    pub fn unit(&self) -> Option<u64> {
        match self.repr {
            Repr::Unit { unit, .. } => Some(unit),
            Repr::Zero { .. } => None,
        }
    }

    /// Relative precision (digits of the unit); `None` for zero.
    pub fn relative_precision(&self) -> Option<u32> {
        match self.repr {
            Repr::Unit { prec, .. } => Some(prec),
            Repr::Zero { .. } => None,
        }
    }

    /// The value is known modulo `p^absolute_precision()`; `None` when exact.
    pub fn absolute_precision(&self) -> Option<i64> {
        match self.repr {
            Repr::Unit { val, prec, .. } => Some(val + prec as i64),
            Repr::Zero { abs } => abs,
        }
    }

    /// `|x|_p = p^(-v)`, and 0 for zero.
    pub fn norm(&self) -> Rational {
        match self.repr {
            Repr::Unit { val, .. } => prime_power(self.p, -val),
            Repr::Zero { .. } => Rational::zero(),
        }
    }

    fn check_prime_match(&self, other: &Self) -> Result<()> {
        if self.p != other.p {
            return Err(Error::PrimeMismatch(self.p, other.p));
        }
        Ok(())
    }

    /// Reduce to absolute precision `abs` (no-op if already coarser).
    pub fn truncate_abs(&self, abs: i64) -> Self {
        match self.repr {
            Repr::Zero { abs: a } => {
                let a = a.map_or(abs, |a| a.min(abs));
                Self::inexact_zero(self.p, a)
            }
            Repr::Unit { val, unit, prec } => {
                if val >= abs {
                    return Self::inexact_zero(self.p, abs);
                }
                let new_prec = ((abs - val) as u32).min(prec);
                Self {
                    p: self.p,
                    repr: Repr::Unit { val, unit: unit % self.modulus(new_prec), prec: new_prec },
                }
            }
        }
    }

    /// Relative precision capped at `prec` digits.
    pub fn with_relative_precision(&self, prec: u32) -> Self {
        match self.repr {
            Repr::Unit { val, .. } => self.truncate_abs(val + prec as i64),
            Repr::Zero { .. } => *self,
        }
    }

    pub fn neg(&self) -> Self {
        match self.repr {
            Repr::Zero { .. } => *self,
            Repr::Unit { val, unit, prec } => {
                let m = self.modulus(prec);
                Self { p: self.p, repr: Repr::Unit { val, unit: (m - unit) % m, prec } }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_prime_match(other)?;
        let (xv, xu, xm, yv, yu, ym) = match (self.repr, other.repr) {
            (Repr::Zero { abs }, _) => return Ok(abs.map_or(*other, |a| other.truncate_abs(a))),
            (_, Repr::Zero { abs }) => return Ok(abs.map_or(*self, |a| self.truncate_abs(a))),
            (
                Repr::Unit { val: xv, unit: xu, prec: xm },
                Repr::Unit { val: yv, unit: yu, prec: ym },
            ) => (xv, xu, xm, yv, yu, ym),
        };
        let p = self.p;
        let v = xv.min(yv);
        let abs = (xv + xm as i64).min(yv + ym as i64);
        let digits = (abs - v) as u32;
        let m = p.pow(digits) as u128;
        let lift = |val: i64, unit: u64| -> u128 {
            let shift = (val - v) as u32;
            if shift >= digits {
                0
            } else {
                (unit as u128 % m) * (p.pow(shift) as u128) % m
            }
        };
        let mut sum = (lift(xv, xu) + lift(yv, yu)) % m;
        if sum == 0 {
            return Ok(Self::inexact_zero(p, abs));
        }
        let mut k = 0u32;
        while sum.is_multiple_of(p as u128) {
            sum /= p as u128;
            k += 1;
        }
        let prec = digits - k;
        Ok(Self {
            p,
            repr: Repr::Unit { val: v + k as i64, unit: sum as u64 % p.pow(prec), prec },
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_prime_match(other)?;
        let p = self.p;
        Ok(match (self.repr, other.repr) {
            (Repr::Zero { abs: None }, _) | (_, Repr::Zero { abs: None }) => Self::zero(p),
            (Repr::Zero { abs: Some(a) }, Repr::Zero { abs: Some(b) }) => {
                Self::inexact_zero(p, a + b)
            }
            (Repr::Zero { abs: Some(a) }, Repr::Unit { val, .. })
            | (Repr::Unit { val, .. }, Repr::Zero { abs: Some(a) }) => {
                Self::inexact_zero(p, a + val)
            }
            (
                Repr::Unit { val: xv, unit: xu, prec: xm },
                Repr::Unit { val: yv, unit: yu, prec: ym },
            ) => {
                let prec = xm.min(ym);
                let m = p.pow(prec) as u128;
                let unit = ((xu as u128 % m) * (yu as u128 % m) % m) as u64;
                Self { p, repr: Repr::Unit { val: xv + yv, unit, prec } }
            }
        })
    }

    pub fn inverse(&self) -> Result<Self> {
        match self.repr {
            Repr::Zero { abs: None } => Err(precondition("division by exact zero")),
            Repr::Zero { abs: Some(a) } => Err(Error::PrecisionExhausted(format!(
                "cannot invert O({}^{a})",
                self.p
            ))),
            Repr::Unit { val, unit, prec } => Ok(Self {
                p: self.p,
                repr: Repr::Unit { val: -val, unit: mod_inverse(unit, self.modulus(prec)), prec },
            }),
        }
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.mul(&other.inverse()?)
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        if e == 0 {
            return Self::from_integer(self.p, 1, self.relative_precision().unwrap_or(1));
        }
        let mut acc = *self;
        for _ in 1..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// The value modulo `p^k` as an integer in `[0, p^k)`.
    pub fn residue(&self, k: u32) -> Result<u64> {
        let m = checked_pow(self.p, k)?;
        match self.repr {
            Repr::Zero { abs } => {
                if abs.is_some_and(|a| a < k as i64) {
                    return Err(Error::PrecisionExhausted(format!(
                        "residue mod {}^{k} of O({}^{})",
                        self.p,
                        self.p,
                        abs.unwrap()
                    )));
                }
                Ok(0)
            }
            Repr::Unit { val, unit, prec } => {
                if val < 0 {
                    return Err(Error::NotIntegral(self.to_string()));
                }
                if val >= k as i64 {
                    return Ok(0);
                }
                if val + (prec as i64) < k as i64 {
                    return Err(Error::PrecisionExhausted(format!(
                        "residue mod {}^{k} of {self}",
                        self.p
                    )));
                }
                let v = val as u32;
                Ok(((unit as u128 * self.p.pow(v) as u128) % m as u128) as u64)
            }
        }
    }

    /// Whether `self ≡ other (mod p^k)`. Errors when the available digits
    /// cannot decide.
    pub fn congruent(&self, other: &Self, k: i64) -> Result<bool> {
        let d = self.sub(other)?;
        match d.repr {
            Repr::Unit { val, .. } => Ok(val >= k),
            Repr::Zero { abs } => {
                if abs.is_some_and(|a| a < k) {
                    Err(Error::PrecisionExhausted(format!(
                        "congruence mod {}^{k} undecidable",
                        self.p
                    )))
                } else {
                    Ok(true)
                }
            }
        }
    }

    /// The represented rational `unit · p^val` (the lift with unit in `[0, p^prec)`).
    pub fn to_rational(&self) -> Rational {
        match self.repr {
            Repr::Zero { .. } => Rational::zero(),
            Repr::Unit { val, unit, .. } => {
                Rational::from_integer(BigInt::from(unit)) * prime_power(self.p, val)
            }
        }
    }

    /// Signed integer representative in `(-p^prec/2, p^prec/2]` times `p^val`,
    /// when `val ≥ 0`.
    pub fn to_balanced_integer(&self) -> Option<BigInt> {
        match self.repr {
            Repr::Zero { .. } => Some(BigInt::zero()),
            Repr::Unit { val, unit, prec } if val >= 0 => {
                let m = self.p.pow(prec) as i128;
                let mut u = unit as i128;
                if u > m / 2 {
                    u -= m;
                }
                Some(BigInt::from(u) * BigInt::from(self.p).pow(val as u32))
            }
            _ => None,
        }
    }
}

impl fmt::Display for PAdicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.repr {
            Repr::Zero { abs: None } => write!(f, "0"),
            Repr::Zero { abs: Some(a) } => write!(f, "O({}^{a})", self.p),
            Repr::Unit { val, unit, prec } => {
                write!(f, "{unit}*{}^{val} + O({}^{})", self.p, self.p, val + prec as i64)
            }
        }
    }
}

/// Max-norm of a coordinate vector.
pub fn vector_norm(xs: &[PAdicNumber]) -> Rational {
    xs.iter().map(|x| x.norm()).fold(Rational::zero(), |a, b| if b > a { b } else { a })
}

impl PAdicNumber {
    pub fn is_unit(&self) -> bool {
        self.valuation() == Some(0)
    }

    pub fn is_integral(&self) -> bool {
        self.valuation().is_none_or(|v| v >= 0)
    }
}
