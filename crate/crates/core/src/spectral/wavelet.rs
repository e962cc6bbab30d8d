//! Mean-zero wavelets supported on a ball, constant on its `r = q^dim` children.

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::error::{precondition, Result};
use crate::manifold::{BallId, CellModel};
use crate::padic_arith::rational::to_f64;
use crate::padic_arith::{additive_character_table, FiniteField, Rational};

#[derive(Clone, Debug)]
pub struct WaveletFamily {
    ball: BallId,
    child_measure: f64,
    /// `values[j][k]`: value of the `j`-th wavelet on child `k`.
    values: Vec<Vec<Complex64>>,
}

impl WaveletFamily {
    /// Character wavelets: child `k = Σ k_i q^i` carries `μ(B)^(−1/2) Π χ_{j_i}(k_i)`, `j ≠ 0`.
    pub fn characters(model: &CellModel, ball: BallId) -> Result<Self> {
        check_ball(model, ball)?;
        let field = FiniteField::new(model.prime(), model.residue_degree())?;
        let table = additive_character_table(&field)?;
        let q = table.order();
        let r = model.branching() as usize;
        let dim = model.dimension();
        let scale = to_f64(model.ball_measure(ball.depth)).powf(-0.5);
        let values = (1..r)
            .map(|j| {
                (0..r)
                    .map(|k| {
                        let (mut jj, mut kk) = (j, k);
                        let mut v = Complex64::new(scale, 0.0);
                        for _ in 0..dim {
                            v *= table.get(jj % q, kk % q);
                            jj /= q;
                            kk /= q;
                        }
                        v
                    })
                    .collect()
            })
            .collect();
        Ok(Self { ball, child_measure: child_measure(model, ball), values })
    }

    /// Gram-Schmidt orthonormalisation of `1_{C_0} − 1_{C_k}`, `k = 1, …, r − 1`.
    pub fn gram_schmidt(model: &CellModel, ball: BallId) -> Result<Self> {
        check_ball(model, ball)?;
        let r = model.branching() as usize;
        let mu = child_measure(model, ball);
        let mut basis: Vec<Vec<f64>> = Vec::with_capacity(r - 1);
        for k in 1..r {
            let mut v = vec![0.0; r];
            v[0] = 1.0;
            v[k] = -1.0;
            for b in &basis {
                let dot: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum::<f64>() * mu;
                v.iter_mut().zip(b).for_each(|(x, y)| *x -= dot * y);
            }
            let norm = (v.iter().map(|x| x * x).sum::<f64>() * mu).sqrt();
            v.iter_mut().for_each(|x| *x /= norm);
            basis.push(v);
        }
        let values = basis
            .into_iter()
            .map(|v| v.into_iter().map(|x| Complex64::new(x, 0.0)).collect())
            .collect();
        Ok(Self { ball, child_measure: mu, values })
    }

    pub fn ball(&self) -> BallId {
        self.ball
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn child_values(&self, j: usize) -> &[Complex64] {
        &self.values[j]
    }

    /// `∫ ψ_j dμ`.
    pub fn integral(&self, j: usize) -> Complex64 {
        self.values[j].iter().sum::<Complex64>() * self.child_measure
    }

    /// `⟨ψ_i, ψ_j⟩` in `L²(X, μ)`.
    pub fn inner(&self, i: usize, j: usize) -> Complex64 {
        self.values[i]
            .iter()
            .zip(&self.values[j])
            .map(|(a, b)| a * b.conj())
            .sum::<Complex64>()
            * self.child_measure
    }

    /// Largest deviation of the Gram matrix from the identity.
    pub fn orthonormality_defect(&self) -> f64 {
        let n = self.len();
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| {
                let target = if i == j { Complex64::one() } else { Complex64::zero() };
                (self.inner(i, j) - target).norm()
            })
            .fold(0.0, f64::max)
    }

    /// `ψ_j` as a vector over all cells.
    pub fn cell_vector(&self, model: &CellModel, j: usize) -> Vec<Complex64> {
        let mut out = vec![Complex64::zero(); model.cell_count()];
        for (child, value) in model.children(self.ball).zip(&self.values[j]) {
            out[model.ball_cells(child)].fill(*value);
        }
        out
    }
}

/// `1_{C_0} − 1_{C_k}` on the children of `ball`: an exact spanning set of its wavelets.
pub fn child_difference(model: &CellModel, ball: BallId, k: u64) -> Result<Vec<Rational>> {
    check_ball(model, ball)?;
    if k == 0 || k >= model.branching() {
        return Err(precondition("child index must lie in 1..r"));
    }
    let mut out = vec![Rational::zero(); model.cell_count()];
    let mut children = model.children(ball);
    let first = children.next().expect("ball has children");
    let other = children.nth(k as usize - 1).expect("child exists");
    out[model.ball_cells(first)].fill(Rational::one());
    out[model.ball_cells(other)].fill(-Rational::one());
    Ok(out)
}

fn check_ball(model: &CellModel, ball: BallId) -> Result<()> {
    if ball.depth == 0 || ball.depth >= model.level() || ball.top >= model.top_count() {
        return Err(precondition(format!("{ball} does not support wavelets at level {}", model.level())));
    }
    Ok(())
}

fn child_measure(model: &CellModel, ball: BallId) -> f64 {
    to_f64(model.ball_measure(ball.depth + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::build_projective_model;

    #[test]
    fn character_family_is_orthonormal_and_mean_zero() {
        let model = build_projective_model(5, 2, 2).unwrap().into_model();
        let ball = BallId { top: 3, depth: 1, prefix: 0 };
        let fam = WaveletFamily::characters(&model, ball).unwrap();
        assert_eq!(fam.len(), 24);
        assert!(fam.orthonormality_defect() < 1e-12);
        assert!((0..fam.len()).all(|j| fam.integral(j).norm() < 1e-12));
    }

    #[test]
    fn gram_schmidt_family_is_orthonormal() {
        let model = build_projective_model(7, 1, 3).unwrap().into_model();
        let fam = WaveletFamily::gram_schmidt(&model, BallId { top: 2, depth: 2, prefix: 5 }).unwrap();
        assert_eq!(fam.len(), 6);
        assert!(fam.orthonormality_defect() < 1e-12);
        assert!((0..fam.len()).all(|j| fam.integral(j).norm() < 1e-12));
    }

    #[test]
    fn cells_are_not_supports() {
        let model = build_projective_model(5, 1, 2).unwrap().into_model();
        assert!(WaveletFamily::characters(&model, BallId { top: 0, depth: 2, prefix: 0 }).is_err());
    }

    #[test]
    fn child_difference_integrates_to_zero() {
        let model = build_projective_model(5, 1, 3).unwrap().into_model();
        let v = child_difference(&model, BallId { top: 1, depth: 1, prefix: 0 }, 3).unwrap();
        assert!(v.iter().fold(Rational::zero(), |a, b| a + b).is_zero());
        assert_eq!(v.iter().filter(|x| !x.is_zero()).count(), 10);
    }
}
