//! The good-reduction model of `E(K)`: one fiber of measure `1/q` per point of `Ē(F_q)`.

use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::curve::{count_points_bruteforce, CurveSpec};
use crate::error::{precondition, Error, Result};
use crate::manifold::{CellModel, ChartSet, CrossRule, ModelKind, ModelParts, TopBall};
use crate::padic_arith::rational::ratio;
use crate::padic_arith::Rational;

/// Chart `O₁` covers every fiber except those over affine branch points, `O₂` every fiber except `E₁(K)`.
pub const CHART_NAMES: [&str; 2] = ["O1", "O2"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Region {
    /// `E₁(K)`, the fiber over the origin.
    A,
    /// Fibers over points with `y ≠ 0`.
    B,
    /// Fibers over the three affine branch points.
    C,
}

impl Region {
    pub const ALL: [Region; 3] = [Region::A, Region::B, Region::C];

    pub fn label(self) -> &'static str {
        match self {
            Region::A => "a",
            Region::B => "b",
            Region::C => "c",
        }
    }

    pub fn from_label(label: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|r| r.label() == label)
    }

    pub fn mask(self) -> ChartSet {
        match self {
            Region::A => ChartSet::singleton(0),
            Region::B => ChartSet::full(2),
            Region::C => ChartSet::singleton(1),
        }
    }

    fn from_mask(mask: ChartSet) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|r| r.mask() == mask)
            .ok_or_else(|| precondition(format!("no elliptic region has chart set {mask}")))
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// `d_g` between different fibers, by the regions of the two fibers.
pub fn cross_fiber_distance(from: Region, to: Region, n: u64, q: u64) -> Rational {
    let (n, q) = (n as i64, q as i64);
    match (from, to) {
        (Region::A, Region::A) | (Region::A, Region::B) | (Region::B, Region::A) => ratio(n - 3, q),
        (Region::A, Region::C) | (Region::C, Region::A) => ratio(n, q),
        (Region::B, Region::B) => ratio(n - 4, q),
        (Region::B, Region::C) | (Region::C, Region::B) | (Region::C, Region::C) => ratio(n - 1, q),
    }
}

#[derive(Clone, Debug)]
pub struct EllipticModel {
    curve: CurveSpec,
    points: u64,
    model: CellModel,
}

impl EllipticModel {
    pub fn build(curve: &CurveSpec, level: u32) -> Result<Self> {
        if level < 2 {
            return Err(precondition("the elliptic model needs level m ≥ 2"));
        }
        if !curve.branch_points_rational() {
            return Err(Error::HypothesisViolated(format!("{curve}: branch points are not all rational")));
        }
        let points = count_points_bruteforce(curve);
        let q = curve.q();
        if points < 6 {
            return Err(Error::HypothesisViolated(format!("{curve}: N = {points} < 6")));
        }
        let field = curve.field();
        let mut tops = vec![TopBall { mask: Region::A.mask(), region: "a".into(), chart: 0, residue: vec![] }];
        for (x, y) in curve.affine_points() {
            let region = if y.is_zero() { Region::C } else { Region::B };
            let coords = field.coeffs(x).into_iter().chain(field.coeffs(y)).collect();
            tops.push(TopBall {
                mask: region.mask(),
                region: region.label().into(),
                chart: if region == Region::C { 1 } else { 0 },
                residue: coords,
            });
        }
        let table = |a: ChartSet, b: ChartSet| -> Result<Rational> {
            Ok(cross_fiber_distance(Region::from_mask(a)?, Region::from_mask(b)?, points, q))
        };
        let model = CellModel::new(
            ModelParts {
                kind: ModelKind::EllipticCurve,
                p: field.characteristic(),
                f: field.degree(),
                dim: 1,
                level,
                chart_names: CHART_NAMES.iter().map(|s| s.to_string()).collect(),
                tops,
                top_measure: ratio(1, q as i64),
            },
            CrossRule::Table(&table),
        )?;
        Ok(Self { curve: curve.clone(), points, model })
    }

    pub fn curve(&self) -> &CurveSpec {
        &self.curve
    }

    /// `N = |Ē(F_q)|` as counted by brute force.
    pub fn point_count(&self) -> u64 {
        self.points
    }

    pub fn model(&self) -> &CellModel {
        &self.model
    }

    pub fn into_model(self) -> CellModel {
        self.model
    }

    pub fn region_of_top(&self, top: usize) -> Region {
        Region::from_label(&self.model.tops()[top].region).expect("elliptic regions")
    }

    pub fn region_measure(&self, region: Region) -> Rational {
        self.model.measure_of_region(region.label())
    }

    /// `μ₁ = μ(O₁)`.
    pub fn mu1(&self) -> Rational {
        self.region_measure(Region::A) + self.region_measure(Region::B)
    }

    /// The fiber measures `1/q`, `(N − 4)/q`, `3/q` summing to `N/q`, and `μ₁ = (N − 3)/q`.
    pub fn measure_identities_hold(&self) -> bool {
        let (n, q) = (self.points as i64, self.curve.q() as i64);
        let total = self.model.total_measure();
        self.region_measure(Region::A) == ratio(1, q)
            && self.region_measure(Region::B) == ratio(n - 4, q)
            && self.region_measure(Region::C) == ratio(3, q)
            && self.mu1() == ratio(n - 3, q)
            && total == ratio(n, q)
            && total == self.model.cell_sum()
            && self.model.tops().len() as u64 == self.points
    }

    /// `q · μ(X)` reduced mod `q − 1`.
    pub fn serre_invariant_from_measure(&self) -> u64 {
        let q = self.curve.q();
        let scaled = self.model.total_measure() * Rational::from_integer(BigInt::from(q));
        let n: u64 = scaled.to_integer().try_into().expect("N/q · q is a small integer");
        n % (q - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::serre_invariant;
    use crate::manifold::CellId;

    fn model(level: u32) -> EllipticModel {
        EllipticModel::build(&CurveSpec::from_integers(13, 1, -1, 0).unwrap(), level).unwrap()
    }

    #[test]
    fn census_and_measures() {
        let e = model(2);
        let n = e.point_count();
        let m = e.model();
        assert_eq!(m.cell_count() as u64, n * 13);
        assert!(e.measure_identities_hold());
        let census = |r: Region| (0..m.top_count()).filter(|&t| e.region_of_top(t) == r).count() as u64;
        assert_eq!((census(Region::A), census(Region::B), census(Region::C)), (1, n - 4, 3));
        assert_eq!(e.serre_invariant_from_measure(), serre_invariant(n, 13));
    }

    #[test]
    fn nerve_is_the_weighted_edge() {
        let e = model(2);
        let n = e.point_count() as i64;
        let nerve = e.model().nerve();
        assert_eq!(nerve.weight(ChartSet::singleton(0)), Some(&ratio(n - 3, 13)));
        assert_eq!(nerve.weight(ChartSet::singleton(1)), Some(&ratio(n - 1, 13)));
        assert_eq!(nerve.weight(ChartSet::full(2)), Some(&ratio(n - 4, 13)));
    }

    #[test]
    fn case_table_agrees_with_nerve_paths() {
        let e = model(2);
        let nerve = e.model().nerve();
        let (n, q) = (e.point_count(), 13);
        for from in Region::ALL {
            for to in Region::ALL {
                if from == to && from != Region::B {
                    continue;
                }
                let expected = if from == to {
                    nerve.weight(ChartSet::full(2)).unwrap().clone()
                } else {
                    nerve.geodesic(from.mask(), to.mask()).unwrap()
                };
                assert_eq!(cross_fiber_distance(from, to, n, q), expected, "{from}->{to}");
            }
        }
    }

    #[test]
    fn distances_by_example() {
        let e = model(3);
        let m = e.model();
        let n = e.point_count() as i64;
        let a = CellId(0);
        let b_top = (0..m.top_count()).find(|&t| e.region_of_top(t) == Region::B).unwrap();
        let b = m.cell_at(b_top, 0);
        assert_eq!(m.geodesic_distance(a, b).unwrap(), ratio(n - 3, 13));
        assert_eq!(m.geodesic_distance(a, CellId(1)).unwrap(), ratio(1, 169));
        assert_eq!(m.geodesic_distance(a, CellId(13)).unwrap(), ratio(1, 13));
    }

    #[test]
    fn rejects_non_split_cubic() {
        let c = (0..13)
            .flat_map(|a| (0..13).map(move |b| (a, b)))
            .filter_map(|(a, b)| CurveSpec::from_integers(13, 1, a, b).ok())
            .find(|c| !c.branch_points_rational())
            .unwrap();
        assert!(matches!(EllipticModel::build(&c, 2), Err(Error::HypothesisViolated(_))));
    }
}
