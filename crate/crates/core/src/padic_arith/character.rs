//! Additive characters `χ_j(k) = exp(2πi·Tr(j·k)/p)` of `F_q`.

use num_complex::Complex64;

use super::FiniteField;
use crate::error::{precondition, Result};

#[derive(Clone, Debug)]
pub struct CharacterTable {
    q: usize,
    values: Vec<Complex64>,
}

impl CharacterTable {
    pub fn order(&self) -> usize {
        self.q
    }

    pub fn get(&self, j: usize, k: usize) -> Complex64 {
        self.values[j * self.q + k]
    }

    pub fn row(&self, j: usize) -> &[Complex64] {
        &self.values[j * self.q..(j + 1) * self.q]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Complex64]> {
        self.values.chunks(self.q)
    }
}

/// The `q × q` table of additive characters, rows indexed by `j`.
pub fn additive_character_table(field: &FiniteField) -> Result<CharacterTable> {
    let q = field.order() as usize;
    if q < 5 {
        return Err(precondition("character tables need q ≥ 5"));
    }
    let p = field.characteristic();
    // exp(2πi t/p) for t in F_p, reused across the table.
    let roots: Vec<Complex64> = (0..p)
        .map(|t| Complex64::from_polar(1.0, std::f64::consts::TAU * t as f64 / p as f64))
        .collect();
    let mut values = Vec::with_capacity(q * q);
    for j in field.elements() {
        for k in field.elements() {
            values.push(roots[field.trace(field.mul(j, k)) as usize]);
        }
    }
    Ok(CharacterTable { q, values })
}
