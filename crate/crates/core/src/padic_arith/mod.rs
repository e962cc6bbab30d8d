//! Exact arithmetic substrate: rationals, finite-precision p-adic numbers,
//! finite fields `F_{p^f}` and additive characters.

mod character;
mod fq;
mod padic;
pub mod rational;

pub use character::{additive_character_table, CharacterTable};
pub use fq::{FiniteField, FqElement};
pub use padic::{vector_norm, PAdicNumber};
pub use rational::Rational;

use crate::error::{precondition, Result};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Rejects anything but a prime `p ≥ 5`.
pub fn check_prime(p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(precondition(format!("p = {p} is not prime")));
    }
    if p == 2 || p == 3 {
        return Err(precondition(format!("p = {p}: p must differ from 2 and 3")));
    }
    Ok(())
}

/// `p^e` as `u64`, or a precondition error on overflow.
pub fn checked_pow(p: u64, e: u32) -> Result<u64> {
    p.checked_pow(e)
        .ok_or_else(|| precondition(format!("{p}^{e} does not fit in 64 bits")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        let small: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(check_prime(5).is_ok());
        assert!(check_prime(3).is_err());
        assert!(check_prime(2).is_err());
        assert!(check_prime(9).is_err());
    }
}
