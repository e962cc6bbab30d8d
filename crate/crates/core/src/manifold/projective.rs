//! `P^n(Q_p)` with its standard atlas, and `Y = P^n ∖ U_{0…n}`.
//!
//! Chart `i` is `U_i = {|x_i| = 1, |x_j| ≤ 1}` with coordinates `x_j / x_i`
//! for `j ≠ i`, in increasing `j`. A point's canonical chart is the least
//! `i` with `x_i` a unit; its top ball is its reduction mod `p`.

use std::collections::HashSet;

use super::cells::{CellId, CellModel, CrossRule, ModelKind, ModelParts, TopBall};
use super::nerve::ChartSet;
use super::poly_map::{
    determinant, equalising_number_of_map, residue_at, AnalyticMap, BallCheck, CoordDomain,
    Equalising, Polynomial, PolynomialMap, RationalComponent,
};
use crate::error::{precondition, Result};
use crate::padic_arith::rational::prime_power;
use crate::padic_arith::{check_prime, PAdicNumber};

/// Digits carried beyond the model level by chart arithmetic.
const GUARD_DIGITS: u32 = 3;

/// Position of coordinate `k` in chart `i`'s coordinate vector.
fn position(i: usize, k: usize) -> usize {
    if k < i { k } else { k - 1 }
}

/// `τ_ij`: chart-`i` coordinates to chart-`j` coordinates on `U_i ∩ U_j`:
/// `x_k/x_j = z_k / z_j` and `x_i/x_j = 1 / z_j`.
pub fn transition_map(p: u64, n: usize, i: usize, j: usize, precision: u32) -> Result<PolynomialMap> {
    if i == j || i > n || j > n {
        return Err(precondition(format!("no transition map between charts {i} and {j}")));
    }
    let one = PAdicNumber::from_integer(p, 1, precision)?;
    let zj = Polynomial::linear(n, position(i, j), one);
    let components = (0..=n)
        .filter(|&k| k != j)
        .map(|k| {
            let numerator = if k == i {
                Polynomial::constant(n, one)
            } else {
                Polynomial::linear(n, position(i, k), one)
            };
            RationalComponent { numerator, denominator: Some(zj.clone()) }
        })
        .collect();
    let domain = (0..n)
        .map(|pos| if pos == position(i, j) { CoordDomain::Sphere } else { CoordDomain::Disc })
        .collect();
    PolynomialMap::new(p, precision, domain, components)
}

#[derive(Clone, Debug)]
pub struct ProjectiveModel {
    model: CellModel,
    n: usize,
    precision: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BallTransitionReport {
    pub balls_checked: usize,
    pub chart_images_checked: usize,
    pub cocycle_checks: usize,
    pub failures: Vec<String>,
}

impl BallTransitionReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn projective_tops(p: u64, n: usize) -> Vec<TopBall> {
    let mut tops = Vec::new();
    for i in 0..=n {
        let free = n - i;
        for code in 0..p.pow(free as u32) {
            let mut c = code;
            let mut residue = vec![0u64; n];
            for k in (i + 1)..=n {
                residue[position(i, k)] = c % p;
                c /= p;
            }
            let mask = ChartSet::from_charts(
                std::iter::once(i).chain(((i + 1)..=n).filter(|&k| residue[position(i, k)] != 0)),
            );
            tops.push(TopBall { mask, region: format!("U{mask}"), chart: i, residue });
        }
    }
    tops
}

fn build(p: u64, n: u32, level: u32, drop_top_overlap: bool) -> Result<ProjectiveModel> {
    check_prime(p)?;
    if !(1..=2).contains(&n) {
        return Err(precondition(format!("projective dimension n = {n} must be 1 or 2")));
    }
    if level == 0 {
        return Err(precondition("level m must be at least 1"));
    }
    let nn = n as usize;
    let full = ChartSet::full(nn + 1);
    let mut tops = projective_tops(p, nn);
    if drop_top_overlap {
        tops.retain(|t| t.mask != full);
    }
    let kind = if drop_top_overlap {
        ModelKind::ProjectiveComplement { n }
    } else {
        ModelKind::Projective { n }
    };
    let parts = ModelParts {
        kind,
        p,
        f: 1,
        dim: n,
        level,
        chart_names: (0..=nn).map(|i| format!("U{i}")).collect(),
        tops,
        top_measure: prime_power(p, -(n as i64)),
    };
    let model = CellModel::new(parts, CrossRule::NervePaths)?;
    Ok(ProjectiveModel { model, n: nn, precision: level + GUARD_DIGITS })
}

pub fn build_projective_model(p: u64, n: u32, level: u32) -> Result<ProjectiveModel> {
    build(p, n, level, false)
}

pub fn build_y_model(p: u64, n: u32, level: u32) -> Result<ProjectiveModel> {
    build(p, n, level, true)
}

impl ProjectiveModel {
    pub fn model(&self) -> &CellModel {
        &self.model
    }

    pub fn into_model(self) -> CellModel {
        self.model
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Working precision of the chart maps, `m` plus guard digits.
    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn transition(&self, i: usize, j: usize) -> Result<PolynomialMap> {
        transition_map(self.model.prime(), self.n, i, j, self.precision)
    }

    /// All ordered chart pairs whose overlap is nonempty in this model.
    pub fn overlapping_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..=self.n {
            for j in 0..=self.n {
                let pair = ChartSet::from_charts([i, j]);
                if i != j && self.model.nerve().simplex(pair).is_some() {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// `e(A)`: the largest equalising number over the transition maps,
    /// tested on radii `p^0 … p^(−max_radius)`.
    pub fn atlas_equalising_number(&self, max_radius: i64) -> Result<Equalising> {
        let mut worst = None;
        for (i, j) in self.overlapping_pairs() {
            let tau = transition_map(self.model.prime(), self.n, i, j, max_radius as u32 + 2)?;
            match equalising_number_of_map(&tau, 0, max_radius, BallCheck::default())? {
                Equalising::NotEqualising => return Ok(Equalising::NotEqualising),
                Equalising::Number(e) => worst = Some(worst.map_or(e, |w: i64| w.max(e))),
            }
        }
        Ok(worst.map_or(Equalising::Number(0), Equalising::Number))
    }

    /// Canonical-chart coordinates of a cell, as integers mod `p^m`.
    pub fn canonical_coordinates(&self, cell: CellId) -> (usize, Vec<u64>) {
        let m = &self.model;
        let p = m.prime();
        let top = &m.tops()[m.top_of(cell)];
        let mut coords = top.residue.clone();
        for (depth_index, digit) in m.digits(cell).into_iter().enumerate() {
            let place = p.pow(depth_index as u32 + 1);
            let mut d = digit;
            for c in coords.iter_mut() {
                *c += (d % p) * place;
                d /= p;
            }
        }
        (top.chart, coords)
    }

    fn padic_coords(&self, coords: &[u64]) -> Result<Vec<PAdicNumber>> {
        let level = self.model.level() as i64;
        coords.iter().map(|&c| residue_at(self.model.prime(), c, level)).collect()
    }

    fn to_residues(&self, values: &[PAdicNumber]) -> Result<Vec<u64>> {
        values.iter().map(|v| v.residue(self.model.level())).collect()
    }

    /// Coordinates of a cell in every chart containing it.
    pub fn chart_coordinates(&self, cell: CellId) -> Result<Vec<(usize, Vec<u64>)>> {
        let (canon, coords) = self.canonical_coordinates(cell);
        let z = self.padic_coords(&coords)?;
        let mut out = vec![(canon, coords.clone())];
        for j in self.model.mask(cell).charts().filter(|&j| j != canon) {
            let image = self.transition(canon, j)?.eval(&z)?;
            out.push((j, self.to_residues(&image)?));
        }
        out.sort_by_key(|(c, _)| *c);
        Ok(out)
    }

    /// Exhaustive check that every ball of the tree is a ball of the right
    /// radius in each chart containing it, and that transition maps carry
    /// the chart images onto each other.
    pub fn check_ball_transitions(&self) -> Result<BallTransitionReport> {
        let m = &self.model;
        let p = m.prime();
        let level = m.level();
        let coords: Vec<Vec<(usize, Vec<u64>)>> =
            m.cells().map(|c| self.chart_coordinates(c)).collect::<Result<_>>()?;
        let mut report = BallTransitionReport {
            balls_checked: 0,
            chart_images_checked: 0,
            cocycle_checks: 0,
            failures: vec![],
        };
        for cell in m.cells() {
            let charts = &coords[cell.0];
            for (a, za) in charts {
                for (b, zb) in charts {
                    if a == b {
                        continue;
                    }
                    let image = self.transition(*a, *b)?.eval(&self.padic_coords(za)?)?;
                    report.cocycle_checks += 1;
                    if self.to_residues(&image)? != *zb {
                        report.failures.push(format!("τ_{a}{b} disagrees with chart {b} on {}", m.describe_cell(cell)));
                    }
                }
            }
        }
        for depth in 1..=level {
            let radius_mod = p.pow(depth);
            let expected = m.branching().pow(level - depth) as usize;
            for ball in m.balls_at_depth(depth) {
                report.balls_checked += 1;
                let cells = m.ball_cells(ball);
                let charts: Vec<usize> = coords[cells.start].iter().map(|(c, _)| *c).collect();
                for (slot, chart) in charts.iter().enumerate() {
                    report.chart_images_checked += 1;
                    let first = &coords[cells.start][slot].1;
                    let mut seen = HashSet::with_capacity(expected);
                    let mut ok = true;
                    for c in cells.clone() {
                        let z = &coords[c][slot].1;
                        ok &= z.iter().zip(first).all(|(a, b)| a % radius_mod == b % radius_mod);
                        seen.insert(z.clone());
                    }
                    if !ok || seen.len() != expected {
                        report.failures.push(format!("{ball} is not a radius-{p}^-{depth} ball in chart {chart}"));
                    }
                }
            }
        }
        Ok(report)
    }

    /// `|det τ_ij'| = 1` at every cell of every overlap, i.e. the chart
    /// densities agree across transition maps.
    pub fn density_ratios_are_one(&self) -> Result<bool> {
        let m = &self.model;
        for cell in m.cells() {
            let coords = self.chart_coordinates(cell)?;
            for (a, za) in &coords {
                for (b, _) in &coords {
                    if a == b {
                        continue;
                    }
                    let jac = self.transition(*a, *b)?.jacobian(&self.padic_coords(za)?)?;
                    if determinant(&jac)?.valuation() != Some(0) {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic_arith::rational::{int, ratio};

    fn set(c: &[usize]) -> ChartSet {
        ChartSet::from_charts(c.iter().copied())
    }

    #[test]
    fn p2_nerve_weights() {
        let pm = build_projective_model(5, 2, 1).unwrap();
        let nerve = pm.model().nerve();
        for v in 0..3 {
            assert_eq!(nerve.weight(set(&[v])), Some(&int(1)));
        }
        for e in [[0, 1], [0, 2], [1, 2]] {
            assert_eq!(nerve.weight(set(&e)), Some(&ratio(4, 5)));
        }
        assert_eq!(nerve.weight(set(&[0, 1, 2])), Some(&ratio(16, 25)));
        assert_eq!(nerve.simplices().len(), 7);
    }

    #[test]
    fn p1_level_one_census() {
        let m = build_projective_model(5, 1, 1).unwrap().into_model();
        assert_eq!(m.cell_count(), 6);
        assert_eq!(m.cell_measure(), &ratio(1, 5));
        assert_eq!(m.cell_sum(), ratio(6, 5));
    }

    #[test]
    fn y_model_drops_the_top_simplex() {
        let y = build_y_model(5, 2, 1).unwrap().into_model();
        let nerve = y.nerve();
        assert!(nerve.simplex(set(&[0, 1, 2])).is_none());
        assert!(nerve.is_downward_closed());
        assert_eq!(nerve.weight(set(&[0])), Some(&ratio(9, 25)));
        assert_eq!(nerve.weight(set(&[0, 1])), Some(&ratio(4, 25)));
        assert_eq!(y.cell_sum(), ratio(31, 25) - ratio(16, 25));
    }

    #[test]
    fn y1_is_disconnected() {
        let y = build_y_model(5, 1, 2).unwrap().into_model();
        assert!(y.require_connected().is_err());
    }

    #[test]
    fn transition_maps_are_equalising_with_number_one() {
        for n in [1, 2] {
            let pm = build_projective_model(5, n, 2).unwrap();
            assert_eq!(pm.atlas_equalising_number(3).unwrap(), Equalising::Number(1));
        }
    }

    #[test]
    fn balls_and_densities_are_consistent() {
        for (n, level) in [(1, 3), (2, 2)] {
            let pm = build_projective_model(5, n, level).unwrap();
            let report = pm.check_ball_transitions().unwrap();
            assert!(report.passed(), "{:?}", report.failures);
            assert!(pm.density_ratios_are_one().unwrap());
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(build_projective_model(3, 1, 1).is_err());
        assert!(build_projective_model(5, 3, 1).is_err());
        assert!(build_projective_model(5, 1, 0).is_err());
    }
}
