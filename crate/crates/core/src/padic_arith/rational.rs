//! Exact rationals for measures, weights and integer-`s` eigenvalues.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `n/d` in lowest terms. Panics on `d = 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// `base^e` for any integer exponent.
pub fn pow_int(base: &Rational, e: i64) -> Rational {
    if e >= 0 {
        num_traits::pow(base.clone(), e as usize)
    } else {
        num_traits::pow(base.recip(), e.unsigned_abs() as usize)
    }
}

/// `p^e` for any integer exponent.
pub fn prime_power(p: u64, e: i64) -> Rational {
    pow_int(&Rational::from_integer(BigInt::from(p)), e)
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Fall back to logarithms when numerator or denominator overflow f64.
        let sign = if r.is_negative() { -1.0 } else { 1.0 };
        sign * ln_abs(r).exp()
    })
}

fn ln_big(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits < 1000 {
        return n.to_f64().unwrap().abs().ln();
    }
    let shift = bits - 64;
    let top = (n.abs() >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural logarithm of `|r|`; `r` must be nonzero.
pub fn ln_abs(r: &Rational) -> f64 {
    ln_big(r.numer()) - ln_big(r.denom())
}

/// `r^s` in floating point for a positive rational `r` and real `s`.
pub fn real_pow(r: &Rational, s: f64) -> f64 {
    debug_assert!(r.is_positive());
    if s == 0.0 {
        return 1.0;
    }
    (s * ln_abs(r)).exp()
}

/// Canonical `"num/den"` rendering, denominator always present.
pub fn format(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `"num/den"` or a bare integer.
pub fn parse(s: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    let (n, d) = match s.trim().split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

pub fn is_one(r: &Rational) -> bool {
    r.is_one()
}

/// Serde adapter: `#[serde(with = "rational::serde_str")]`.
pub mod serde_str {
    use super::Rational;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::format(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        super::parse(&text).map_err(de::Error::custom)
    }
}

/// Serde adapter for `Option<Rational>`.
pub mod serde_str_opt {
    use super::Rational;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.serialize_some(&super::format(r)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        let text = Option::<String>::deserialize(d)?;
        text.map(|t| super::parse(&t).map_err(de::Error::custom))
            .transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_terms_and_format() {
        let r = ratio(6, -4);
        assert_eq!(format(&r), "-3/2");
        assert_eq!(format(&int(7)), "7/1");
        assert_eq!(parse("-3/2").unwrap(), r);
        assert_eq!(parse(" 12 ").unwrap(), int(12));
        assert!(parse("1/0").is_err());
        assert!(parse("x").is_err());
    }

    #[test]
    fn powers() {
        assert_eq!(prime_power(5, -2), ratio(1, 25));
        assert_eq!(prime_power(5, 3), int(125));
        assert_eq!(pow_int(&ratio(2, 3), -2), ratio(9, 4));
        assert!((real_pow(&ratio(1, 13), 1.5) - (1.0f64 / 13.0).powf(1.5)).abs() < 1e-15);
    }

    #[test]
    fn huge_to_f64() {
        let r = prime_power(13, -400);
        let expect = -400.0 * 13f64.ln();
        assert!((ln_abs(&r) - expect).abs() < 1e-9);
        assert_eq!(to_f64(&r), 0.0);
    }
}
