//! The operator `Δ^s h(x) = Σ_{y≠x} d_g(x,y)^(−s) (h(x) − h(y)) μ(y)` on a cell model.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{precondition, Result};
use crate::manifold::{CellId, CellModel};
use crate::padic_arith::rational::{pow_int, real_pow, to_f64};
use crate::padic_arith::Rational;
use crate::par;

/// The exponent `s`. Integral values run through exact rational arithmetic.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Exponent {
    Integer(i64),
    Real(f64),
}

impl Exponent {
    pub fn from_f64(s: f64) -> Self {
        if s.fract() == 0.0 && s.abs() < 1e6 {
            Exponent::Integer(s as i64)
        } else {
            Exponent::Real(s)
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Exponent::Integer(s) => s as f64,
            Exponent::Real(s) => s,
        }
    }

    pub fn as_integer(self) -> Option<i64> {
        match self {
            Exponent::Integer(s) => Some(s),
            Exponent::Real(_) => None,
        }
    }

    /// `base^(exponent)` for `base > 0`, exactly when possible.
    pub fn power(self, base: &Rational, exponent_scale: i64, offset: i64) -> Power {
        // base^(scale·s + offset)
        match self {
            Exponent::Integer(s) => {
                let exact = pow_int(base, exponent_scale * s + offset);
                Power { value: to_f64(&exact), exact: Some(exact) }
            }
            Exponent::Real(s) => Power {
                value: real_pow(base, exponent_scale as f64 * s + offset as f64),
                exact: None,
            },
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Integer(s) => write!(f, "{s}"),
            Exponent::Real(s) => write!(f, "{s}"),
        }
    }
}

/// A real number with its exact rational value when available.
#[derive(Clone, Debug, PartialEq)]
pub struct Power {
    pub value: f64,
    pub exact: Option<Rational>,
}

/// Scalars the operator can act on.
pub trait Scalar:
    Clone + Send + Sync + Zero + Add<Output = Self> + Sub<Output = Self> + for<'a> Mul<&'a Self, Output = Self>
{
}

impl<T> Scalar for T where
    T: Clone + Send + Sync + Zero + Add<Output = T> + Sub<Output = T> + for<'a> Mul<&'a T, Output = T>
{
}

#[derive(Clone, Debug)]
pub struct OperatorMatrix<'a> {
    model: &'a CellModel,
    s: Exponent,
    /// `d^(−s)` per distance id.
    kernel: Vec<f64>,
    kernel_exact: Option<Vec<Rational>>,
    cell_measure: f64,
}

impl<'a> OperatorMatrix<'a> {
    pub fn new(model: &'a CellModel, s: Exponent) -> Result<Self> {
        if model.cell_count() < 2 {
            return Err(precondition("the operator needs at least two cells"));
        }
        model.require_connected()?;
        let powers: Vec<Power> = model.distance_values().iter().map(|d| s.power(d, -1, 0)).collect();
        let kernel = powers.iter().map(|p| p.value).collect();
        let kernel_exact = powers.into_iter().map(|p| p.exact).collect::<Option<Vec<_>>>();
        Ok(Self { model, s, kernel, kernel_exact, cell_measure: to_f64(model.cell_measure()) })
    }

    pub fn model(&self) -> &'a CellModel {
        self.model
    }

    pub fn exponent(&self) -> Exponent {
        self.s
    }

    pub fn is_exact(&self) -> bool {
        self.kernel_exact.is_some()
    }

    pub fn kernel(&self) -> &[f64] {
        &self.kernel
    }

    pub fn kernel_exact(&self) -> Option<&[Rational]> {
        self.kernel_exact.as_deref()
    }

    pub fn cell_measure(&self) -> f64 {
        self.cell_measure
    }

    /// Number of cells `y ≠ x` at each distance id, read off the tree shape.
    pub fn row_counts(&self, x: CellId) -> Vec<u64> {
        let m = self.model;
        let r = m.branching();
        let level = m.level();
        let mut counts = vec![0u64; m.distance_values().len()];
        for depth in 1..level {
            counts[m.same_top_distance_id(depth)] += r.pow(level - depth) - r.pow(level - depth - 1);
        }
        let tx = m.top_of(x);
        let per_top = m.cells_per_top() as u64;
        for ty in (0..m.top_count()).filter(|&t| t != tx) {
            counts[m.cross_distance_id(tx, ty).expect("connected")] += per_top;
        }
        counts
    }

    /// Same counts by visiting every cell.
    pub fn row_counts_bruteforce(&self, x: CellId) -> Vec<u64> {
        let mut counts = vec![0u64; self.model.distance_values().len()];
        for y in self.model.cells().filter(|&y| y != x) {
            counts[self.model.distance_id(x, y).expect("connected")] += 1;
        }
        counts
    }

    pub fn entry(&self, x: CellId, y: CellId) -> f64 {
        if x == y {
            return self.diagonal(x);
        }
        -self.kernel[self.model.distance_id(x, y).expect("connected")] * self.cell_measure
    }

    pub fn entry_exact(&self, x: CellId, y: CellId) -> Option<Rational> {
        let kernel = self.kernel_exact.as_ref()?;
        if x == y {
            return self.diagonal_exact(x);
        }
        Some(-(&kernel[self.model.distance_id(x, y).expect("connected")] * self.model.cell_measure()))
    }

    /// Total jump rate out of `x`: `Σ_{y≠x} d^(−s) μ(y)`.
    pub fn diagonal(&self, x: CellId) -> f64 {
        let counts = self.row_counts(x);
        counts.iter().zip(&self.kernel).map(|(&c, k)| c as f64 * k).sum::<f64>() * self.cell_measure
    }

    pub fn diagonal_exact(&self, x: CellId) -> Option<Rational> {
        let kernel = self.kernel_exact.as_ref()?;
        let counts = self.row_counts(x);
        let sum = counts
            .iter()
            .zip(kernel)
            .fold(Rational::zero(), |acc, (&c, k)| acc + k * Rational::from_integer(BigInt::from(c)));
        Some(sum * self.model.cell_measure())
    }

    /// `Δ^s h` through subtree sums: `O(cells · (m + tops))`.
    pub fn apply_with<T: Scalar>(&self, h: &[T], kernel: &[T], cell_measure: &T) -> Vec<T> {
        let m = self.model;
        let level = m.level();
        let r = m.branching() as usize;
        assert_eq!(h.len(), m.cell_count(), "vector length must equal the cell count");
        // sums[d − 1][b]: sum of h over the b-th ball at depth d (global order).
        let mut sums: Vec<Vec<T>> = vec![h.to_vec()];
        for _ in 1..level {
            let finer = sums.last().unwrap();
            let coarser: Vec<T> = finer
                .chunks(r)
                .map(|c| c.iter().cloned().fold(T::zero(), |a, b| a + b))
                .collect();
            sums.push(coarser);
        }
        sums.reverse();
        let tops = &sums[0];
        let tcount = m.top_count();
        // Kernel-weighted sums over other top balls, one per top ball.
        let cross: Vec<T> = (0..tcount)
            .map(|t| {
                (0..tcount).filter(|&u| u != t).fold(T::zero(), |acc, u| {
                    let k = &kernel[m.cross_distance_id(t, u).expect("connected")];
                    acc + tops[u].clone() * k
                })
            })
            .collect();
        // Row sum of the kernel, identical for all cells of a top ball.
        let row_kernel: Vec<T> = (0..tcount)
            .map(|t| {
                let x = m.cell_at(t, 0);
                self.row_counts(x).iter().zip(kernel).fold(T::zero(), |acc, (&c, k)| {
                    acc + repeat_add(k, c)
                })
            })
            .collect();
        let per_top = m.cells_per_top();
        par::map_range(h.len(), |i| {
            let top = i / per_top;
            let mut near = cross[top].clone();
            let mut index = i;
            let mut inner = h[i].clone();
            for depth in (1..level).rev() {
                index /= r;
                let outer = sums[depth as usize - 1][index].clone();
                let k = &kernel[m.same_top_distance_id(depth)];
                near = near + (outer.clone() - inner) * k;
                inner = outer;
            }
            (h[i].clone() * &row_kernel[top] - near) * cell_measure
        })
    }

    pub fn apply(&self, h: &[f64]) -> Vec<f64> {
        self.apply_with(h, &self.kernel, &self.cell_measure)
    }

    /// Exact action for integer `s`; `None` otherwise.
    pub fn apply_exact(&self, h: &[Rational]) -> Option<Vec<Rational>> {
        let kernel = self.kernel_exact.as_ref()?;
        Some(self.apply_with(h, kernel, self.model.cell_measure()))
    }

    pub fn dense(&self) -> DMatrix<f64> {
        let n = self.model.cell_count();
        DMatrix::from_fn(n, n, |i, j| self.entry(CellId(i), CellId(j)))
    }

    pub fn dense_exact(&self) -> Option<Vec<Vec<Rational>>> {
        self.kernel_exact.as_ref()?;
        let n = self.model.cell_count();
        Some(
            (0..n)
                .map(|i| (0..n).map(|j| self.entry_exact(CellId(i), CellId(j)).unwrap()).collect())
                .collect(),
        )
    }
}

/// `k · c` for a count `c`, by doubling.
fn repeat_add<T: Scalar>(k: &T, mut c: u64) -> T {
    let mut acc = T::zero();
    let mut base = k.clone();
    while c > 0 {
        if c & 1 == 1 {
            acc = acc + base.clone();
        }
        base = base.clone() + base;
        c >>= 1;
    }
    acc
}

pub fn assemble_operator(model: &CellModel, s: Exponent) -> Result<OperatorMatrix<'_>> {
    OperatorMatrix::new(model, s)
}
