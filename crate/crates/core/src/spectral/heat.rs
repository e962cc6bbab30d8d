//! Heat kernel, Green function and semigroup by spectral synthesis.

use nalgebra::{DMatrix, SymmetricEigen};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::operator::OperatorMatrix;
use super::spectrum::Spectrum;
use crate::error::{precondition, Result};
use crate::manifold::{CellId, CellModel};
use crate::padic_arith::rational::to_f64;
use crate::padic_arith::Rational;
use crate::par;

/// Which modes enter the spectral sums.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Basis {
    /// Constants plus wavelets.
    #[default]
    Wavelet,
    /// Also the top-ball indicator modes orthogonal to constants.
    Complete,
}

/// Coefficient of the constant mode in the heat kernel.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstantTerm {
    /// `1/μ(X)`, so that `∫ H(t,x,y) dμ(y) = 1`.
    #[default]
    Normalized,
    /// The literal `1`.
    One,
}

/// Eigenpairs of `Δ^s` on functions constant on top balls and orthogonal to constants.
#[derive(Clone, Debug)]
pub struct ComplementModes {
    pub eigenvalues: Vec<f64>,
    /// `vectors[k][T]`: coefficient of `1_T/√μ_T`.
    pub vectors: Vec<Vec<f64>>,
}

impl ComplementModes {
    pub fn compute(op: &OperatorMatrix<'_>) -> Result<Self> {
        let model = op.model();
        let tops = model.top_count();
        let mu = to_f64(model.top_measure());
        let kernel = op.kernel();
        let mut block = DMatrix::<f64>::zeros(tops, tops);
        for t in 0..tops {
            for u in (0..tops).filter(|&u| u != t) {
                let w = kernel[model.cross_distance_id(t, u)?] * mu;
                block[(t, u)] = -w;
                block[(t, t)] += w;
            }
        }
        let eig = SymmetricEigen::new(block);
        let constant = 1.0 / (tops as f64).sqrt();
        let mut modes: Vec<(f64, Vec<f64>)> = (0..tops)
            .map(|k| (eig.eigenvalues[k], eig.eigenvectors.column(k).iter().copied().collect::<Vec<f64>>()))
            .collect();
        let drop = modes
            .iter()
            .enumerate()
            .max_by(|a, b| {
                let overlap = |v: &[f64]| v.iter().sum::<f64>().abs() * constant;
                overlap(&a.1 .1).total_cmp(&overlap(&b.1 .1))
            })
            .map(|(i, _)| i)
            .expect("at least one top ball");
        modes.remove(drop);
        modes.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (eigenvalues, vectors) = modes.into_iter().unzip();
        Ok(Self { eigenvalues, vectors })
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }
}

/// Spectral calculus of `Δ^s` on one model and level.
#[derive(Clone, Debug)]
pub struct SpectralCalculus<'a> {
    model: &'a CellModel,
    spectrum: &'a Spectrum,
    basis: Basis,
    constant: ConstantTerm,
    /// `lambda[top][depth − 1]` for depths `1..m`.
    lambda: Vec<Vec<f64>>,
    complement: Option<ComplementModes>,
    top_measure: f64,
}

impl<'a> SpectralCalculus<'a> {
    pub fn new(op: &OperatorMatrix<'a>, spectrum: &'a Spectrum, basis: Basis, constant: ConstantTerm) -> Result<Self> {
        let model = op.model();
        if spectrum.level() != model.level() || spectrum.exponent() != op.exponent() {
            return Err(precondition("spectrum was computed for a different level or exponent"));
        }
        let lambda = (0..model.top_count())
            .map(|t| (1..model.level()).map(|d| spectrum.entry_for(t, d).lambda).collect())
            .collect();
        let complement = match basis {
            Basis::Wavelet => None,
            Basis::Complete => Some(ComplementModes::compute(op)?),
        };
        Ok(Self {
            model,
            spectrum,
            basis,
            constant,
            lambda,
            complement,
            top_measure: to_f64(model.top_measure()),
        })
    }

    pub fn model(&self) -> &'a CellModel {
        self.model
    }

    pub fn spectrum(&self) -> &'a Spectrum {
        self.spectrum
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn complement(&self) -> Option<&ComplementModes> {
        self.complement.as_ref()
    }

    fn constant_term(&self) -> f64 {
        match self.constant {
            ConstantTerm::Normalized => 1.0 / to_f64(&self.model.total_measure()),
            ConstantTerm::One => 1.0,
        }
    }

    /// `Σ_k g(λ_k) φ_k(x) φ_k(y)` over the complement modes.
    fn complement_sum(&self, x: CellId, y: CellId, g: impl Fn(f64) -> f64) -> f64 {
        let Some(modes) = &self.complement else { return 0.0 };
        let (tx, ty) = (self.model.top_of(x), self.model.top_of(y));
        modes
            .eigenvalues
            .iter()
            .zip(&modes.vectors)
            .map(|(&l, v)| g(l) * v[tx] * v[ty])
            .sum::<f64>()
            / self.top_measure
    }

    /// `Σ_B g(λ_B) (r·[x, y in one child of B] − 1)/μ(B)` over wavelet balls `B ∋ x, y`.
    fn wavelet_sum(&self, x: CellId, y: CellId, g: impl Fn(f64) -> f64) -> f64 {
        let Some(join) = self.model.join_depth(x, y) else { return 0.0 };
        let r = self.model.branching() as f64;
        let top = self.model.top_of(x);
        (1..self.model.level().min(join + 1))
            .map(|d| {
                let same_child = if join > d { r } else { 0.0 };
                g(self.lambda[top][d as usize - 1]) * (same_child - 1.0) / to_f64(self.model.ball_measure(d))
            })
            .sum()
    }

    pub fn heat_kernel(&self, t: f64, x: CellId, y: CellId) -> f64 {
        let decay = |l: f64| (-t * l).exp();
        self.constant_term() + self.wavelet_sum(x, y, decay) + self.complement_sum(x, y, decay)
    }

    /// `y ↦ H(t, x, y)`.
    pub fn heat_row(&self, t: f64, x: CellId) -> Vec<f64> {
        par::map_range(self.model.cell_count(), |y| self.heat_kernel(t, x, CellId(y)))
    }

    /// `y ↦ H(t, x, y) μ(y)`: the law of the process at time `t` started from `x`.
    pub fn transition_law(&self, t: f64, x: CellId) -> Vec<f64> {
        let mu = to_f64(self.model.cell_measure());
        self.heat_row(t, x).into_iter().map(|h| h * mu).collect()
    }

    pub fn green(&self, x: CellId, y: CellId) -> f64 {
        let inv = |l: f64| 1.0 / l;
        self.wavelet_sum(x, y, inv) + self.complement_sum(x, y, inv)
    }

    /// Green function over the wavelet basis in exact arithmetic (integer `s`).
    pub fn green_exact(&self, x: CellId, y: CellId) -> Option<Rational> {
        let Some(join) = self.model.join_depth(x, y) else { return Some(Rational::zero()) };
        let r = Rational::from_integer(BigInt::from(self.model.branching()));
        let top = self.model.top_of(x);
        let mut sum = Rational::zero();
        for d in 1..self.model.level().min(join + 1) {
            let lambda = self.spectrum.entry_for(top, d).lambda_exact.clone()?;
            let pattern = if join > d { &r - Rational::one() } else { -Rational::one() };
            sum += pattern / (lambda * self.model.ball_measure(d));
        }
        Some(sum)
    }

    /// `e^(−tΔ^s) h` restricted to the modes of the basis.
    pub fn semigroup_apply(&self, t: f64, h: &[f64]) -> Vec<f64> {
        let model = self.model;
        let level = model.level();
        let r = model.branching() as usize;
        assert_eq!(h.len(), model.cell_count(), "vector length must equal the cell count");
        // averages[d − 1][b]: mean of h over the b-th ball at depth d.
        let mut averages: Vec<Vec<f64>> = vec![h.to_vec()];
        for _ in 1..level {
            let finer = averages.last().unwrap();
            averages.push(finer.chunks(r).map(|c| c.iter().sum::<f64>() / r as f64).collect());
        }
        averages.reverse();
        let tops = &averages[0];
        let mean = tops.iter().sum::<f64>() / tops.len() as f64;
        let complement: Vec<f64> = match &self.complement {
            None => vec![0.0; tops.len()],
            Some(modes) => {
                let mut out = vec![0.0; tops.len()];
                for (l, v) in modes.eigenvalues.iter().zip(&modes.vectors) {
                    // ⟨h, φ⟩ = Σ_T v_T √μ_T a_T
                    let coeff: f64 = v.iter().zip(tops).map(|(vt, a)| vt * a).sum::<f64>() * self.top_measure.sqrt();
                    let scaled = (-t * l).exp() * coeff / self.top_measure.sqrt();
                    out.iter_mut().zip(v).for_each(|(o, vt)| *o += scaled * vt);
                }
                out
            }
        };
        let per_top = model.cells_per_top();
        par::map_range(h.len(), |i| {
            let top = i / per_top;
            let mut value = mean + complement[top];
            let mut index = i;
            let mut finer = h[i];
            for depth in (1..level).rev() {
                index /= r;
                let coarser = averages[depth as usize - 1][index];
                value += (-t * self.lambda[top][depth as usize - 1]).exp() * (finer - coarser);
                finer = coarser;
            }
            value
        })
    }
}
