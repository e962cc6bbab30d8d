//! Wavelet eigenvalues and the full spectrum of `Δ^s` at a given level.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::operator::{Exponent, Power};
use crate::error::{precondition, Result};
use crate::manifold::{BallId, CellId, CellModel};
use crate::padic_arith::rational::{serde_str, serde_str_opt, to_f64};
use crate::padic_arith::Rational;
use crate::par;

pub type Eigenvalue = Power;

/// `Σ_{y ∉ B} d(x,y)^(−s) μ(y) + μ(B)^(1−s)`, summed over the cells outside `B` as seen from `x ∈ B`.
pub fn wavelet_eigenvalue_at(model: &CellModel, ball: BallId, s: Exponent, x: CellId) -> Result<Eigenvalue> {
    let inside = model.ball_cells(ball);
    if !inside.contains(&x.0) {
        return Err(precondition(format!("cell {} is not in {ball}", x.0)));
    }
    model.require_connected()?;
    let mut counts = vec![0u64; model.distance_values().len()];
    for y in model.cells().filter(|y| !inside.contains(&y.0)) {
        counts[model.distance_id(x, y)?] += 1;
    }
    Ok(combine(model, &counts, ball.depth, s))
}

/// [`wavelet_eigenvalue_at`] evaluated at the first cell of the ball.
pub fn wavelet_eigenvalue_numeric(model: &CellModel, ball: BallId, s: Exponent) -> Result<Eigenvalue> {
    wavelet_eigenvalue_at(model, ball, s, CellId(model.ball_cells(ball).start))
}

/// The same sum with the outside counts read off the tree shape.
pub fn wavelet_eigenvalue(model: &CellModel, ball: BallId, s: Exponent) -> Result<Eigenvalue> {
    model.require_connected()?;
    let r = model.branching();
    let level = model.level();
    let mut counts = vec![0u64; model.distance_values().len()];
    for depth in 1..ball.depth {
        counts[model.same_top_distance_id(depth)] += r.pow(level - depth) - r.pow(level - depth - 1);
    }
    for other in (0..model.top_count()).filter(|&t| t != ball.top) {
        counts[model.cross_distance_id(ball.top, other)?] += model.cells_per_top() as u64;
    }
    Ok(combine(model, &counts, ball.depth, s))
}

fn combine(model: &CellModel, counts: &[u64], depth: u32, s: Exponent) -> Eigenvalue {
    let cell = model.cell_measure();
    let own = s.power(model.ball_measure(depth), -1, 1);
    let terms: Vec<Power> = model.distance_values().iter().map(|d| s.power(d, -1, 0)).collect();
    let value = counts.iter().zip(&terms).map(|(&c, k)| c as f64 * k.value).sum::<f64>() * to_f64(cell)
        + own.value;
    let exact = terms.iter().map(|k| k.exact.clone()).collect::<Option<Vec<_>>>().map(|ks| {
        let outside = counts
            .iter()
            .zip(&ks)
            .fold(Rational::zero(), |acc, (&c, k)| acc + k * Rational::from_integer(BigInt::from(c)));
        outside * cell + own.exact.expect("integer exponent")
    });
    Eigenvalue { value, exact }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumEntry {
    #[serde(rename = "mu_B", with = "serde_str")]
    pub ball_measure: Rational,
    pub depth: u32,
    pub region: String,
    pub lambda: f64,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "serde_str_opt")]
    pub lambda_exact: Option<Rational>,
    pub multiplicity: u64,
}

#[derive(Clone, Debug)]
pub struct Spectrum {
    s: Exponent,
    level: u32,
    entries: Vec<SpectrumEntry>,
    /// `index[region][depth − 1]` into `entries`.
    index: Vec<Vec<usize>>,
    top_region: Vec<usize>,
    complement_dimension: usize,
}

impl Spectrum {
    pub fn exponent(&self) -> Exponent {
        self.s
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// Wavelet classes sorted by eigenvalue.
    pub fn entries(&self) -> &[SpectrumEntry] {
        &self.entries
    }

    pub fn constant_mode(&self) -> f64 {
        0.0
    }

    /// Dimension of the top-ball indicators modulo constants.
    pub fn complement_dimension(&self) -> usize {
        self.complement_dimension
    }

    pub fn wavelet_count(&self) -> u64 {
        self.entries.iter().map(|e| e.multiplicity).sum()
    }

    /// The smallest wavelet eigenvalue.
    pub fn lambda0(&self) -> Option<&SpectrumEntry> {
        self.entries.first()
    }

    /// Eigenvalue class of the wavelets supported on balls of `depth` inside `top`.
    pub fn entry_for(&self, top: usize, depth: u32) -> &SpectrumEntry {
        &self.entries[self.index[self.top_region[top]][depth as usize - 1]]
    }
}

/// Every wavelet class `(depth, region)` of the model, each eigenvalue by direct quadrature.
pub fn enumerate_spectrum(model: &CellModel, s: Exponent) -> Result<Spectrum> {
    model.require_connected()?;
    let regions = model.regions();
    let top_region: Vec<usize> = model
        .tops()
        .iter()
        .map(|t| regions.iter().position(|r| *r == t.region).expect("region listed"))
        .collect();
    let level = model.level();
    let classes: Vec<(usize, u32)> =
        (0..regions.len()).flat_map(|g| (1..level).map(move |d| (g, d))).collect();
    let r = model.branching();
    let computed = par::map_slice(&classes, |&(g, depth)| -> Result<SpectrumEntry> {
        let tops: Vec<usize> = (0..model.top_count()).filter(|&t| top_region[t] == g).collect();
        let mask = model.tops()[tops[0]].mask;
        if tops.iter().any(|&t| model.tops()[t].mask != mask) {
            return Err(precondition(format!("region {} mixes chart sets", regions[g])));
        }
        let ball = BallId { top: tops[0], depth, prefix: 0 };
        let lambda = wavelet_eigenvalue_numeric(model, ball, s)?;
        Ok(SpectrumEntry {
            ball_measure: model.ball_measure(depth).clone(),
            depth,
            region: regions[g].clone(),
            lambda: lambda.value,
            lambda_exact: lambda.exact,
            multiplicity: (r - 1) * tops.len() as u64 * r.pow(depth - 1),
        })
    });
    let mut entries = computed.into_iter().collect::<Result<Vec<_>>>()?;
    let mut order: Vec<usize> = (0..entries.len()).collect();
    order.sort_by(|&a, &b| {
        let (x, y) = (&entries[a], &entries[b]);
        x.lambda.total_cmp(&y.lambda).then(x.depth.cmp(&y.depth)).then(x.region.cmp(&y.region))
    });
    let mut index = vec![vec![0usize; level.saturating_sub(1) as usize]; regions.len()];
    for (pos, &i) in order.iter().enumerate() {
        let (g, d) = classes[i];
        index[g][d as usize - 1] = pos;
    }
    let mut slots: Vec<Option<SpectrumEntry>> = entries.drain(..).map(Some).collect();
    let entries = order.iter().map(|&i| slots[i].take().expect("each class once")).collect();
    Ok(Spectrum {
        s,
        level,
        entries,
        index,
        top_region,
        complement_dimension: model.top_count() - 1,
    })
}
