//! Exhaustive checks of the metric axioms for `d_g` on a cell model.

use serde::{Deserialize, Serialize};

use super::cells::{CellId, CellModel};
use crate::error::{precondition, Result};
use crate::par;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetricReport {
    pub cells: usize,
    pub triples: u64,
    pub asymmetric_pairs: u64,
    pub triangle_violations: u64,
}

impl MetricReport {
    pub fn passed(&self) -> bool {
        self.asymmetric_pairs == 0 && self.triangle_violations == 0
    }
}

/// Symmetry on all pairs and `d(x,z) ≤ d(x,y) + d(y,z)` on all triples of cells.
pub fn check_metric(model: &CellModel, max_cells: usize) -> Result<MetricReport> {
    let n = model.cell_count();
    if n > max_cells {
        return Err(precondition(format!("{n} cells exceed the exhaustive limit {max_cells}")));
    }
    model.require_connected()?;
    let values = model.distance_values();
    if values.len() > u8::MAX as usize {
        return Err(precondition("too many distinct distances"));
    }
    let ids: Vec<u8> = (0..n * n)
        .map(|k| model.distance_id(CellId(k / n), CellId(k % n)).map(|i| i as u8))
        .collect::<Result<_>>()?;
    let v = values.len();
    // holds[(a·v + b)·v + c]: values[c] ≤ values[a] + values[b], decided exactly once per id triple.
    let holds: Vec<bool> = (0..v * v * v)
        .map(|k| values[k % v] <= &values[k / (v * v)] + &values[(k / v) % v])
        .collect();
    let asymmetric_pairs = par::sum_range(n, |x| (0..n).filter(|&y| ids[x * n + y] != ids[y * n + x]).count() as u64);
    let triangle_violations = par::sum_range(n, |x| {
        let row_x = &ids[x * n..(x + 1) * n];
        let mut bad = 0u64;
        for y in 0..n {
            let base = row_x[y] as usize * v;
            let row_y = &ids[y * n..(y + 1) * n];
            for (&dyz, &dxz) in row_y.iter().zip(row_x) {
                if !holds[(base + dyz as usize) * v + dxz as usize] {
                    bad += 1;
                }
            }
        }
        bad
    });
    Ok(MetricReport { cells: n, triples: (n as u64).pow(3), asymmetric_pairs, triangle_violations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::build_projective_model;

    #[test]
    fn projective_line_is_a_metric() {
        let model = build_projective_model(5, 1, 2).unwrap().into_model();
        let report = check_metric(&model, 2000).unwrap();
        assert!(report.passed(), "{report:?}");
        assert_eq!(report.triples, 30u64.pow(3));
    }

    #[test]
    fn refuses_large_models() {
        let model = build_projective_model(5, 1, 3).unwrap().into_model();
        assert!(check_metric(&model, 100).is_err());
    }
}
