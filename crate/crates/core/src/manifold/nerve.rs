//! Weighted nerve complexes over chart index sets.

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic_arith::Rational;

/// A set of chart indices, stored as a bitmask (at most 32 charts).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ChartSet(u32);

impl ChartSet {
    pub const EMPTY: ChartSet = ChartSet(0);

    pub fn from_bits(bits: u32) -> Self {
        ChartSet(bits)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn singleton(chart: usize) -> Self {
        ChartSet(1 << chart)
    }

    pub fn full(charts: usize) -> Self {
        ChartSet(((1u64 << charts) - 1) as u32)
    }

    pub fn from_charts(charts: impl IntoIterator<Item = usize>) -> Self {
        ChartSet(charts.into_iter().fold(0, |acc, c| acc | (1 << c)))
    }

    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, chart: usize) -> bool {
        self.0 >> chart & 1 == 1
    }

    pub fn is_subset_of(self, other: ChartSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn with(self, chart: usize) -> Self {
        ChartSet(self.0 | 1 << chart)
    }

    pub fn without(self, chart: usize) -> Self {
        ChartSet(self.0 & !(1 << chart))
    }

    pub fn charts(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |&c| self.contains(c))
    }

    /// Nonempty subsets, in increasing bit order.
    pub fn nonempty_subsets(self) -> impl Iterator<Item = ChartSet> {
        let full = self.0;
        (1..=full).filter(move |s| s & !full == 0).map(ChartSet)
    }

    /// One set is the other plus exactly one chart.
    pub fn is_facet_adjacent(self, other: ChartSet) -> bool {
        let (small, big) = if self.len() < other.len() { (self, other) } else { (other, self) };
        big.len() == small.len() + 1 && small.is_subset_of(big)
    }
}

impl fmt::Display for ChartSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.charts().map(|c| c.to_string()).collect();
        write!(f, "{{{}}}", names.join(","))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Simplex {
    pub charts: ChartSet,
    /// `μ(U_J)` where `U_J` is the intersection of the charts in `J`.
    pub weight: Rational,
}

impl Simplex {
    pub fn dimension(&self) -> u32 {
        self.charts.len() - 1
    }
}

/// Measure carried by the cells whose chart set is exactly `mask`.
#[derive(Clone, Debug, PartialEq)]
pub struct MaskMeasure {
    pub mask: ChartSet,
    pub measure: Rational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NerveComplex {
    charts: usize,
    simplices: Vec<Simplex>,
    strata: Vec<MaskMeasure>,
}

impl NerveComplex {
    /// The nerve of a covering described by how much measure sits on each
    /// exact chart set: `J` is a simplex iff some stratum's mask contains
    /// it, and `w(J)` sums the strata above `J`.
    pub fn from_strata(charts: usize, strata: Vec<MaskMeasure>) -> Self {
        let mut simplices: Vec<Simplex> = ChartSet::full(charts)
            .nonempty_subsets()
            .filter_map(|j| {
                let above: Vec<&MaskMeasure> =
                    strata.iter().filter(|s| j.is_subset_of(s.mask)).collect();
                if above.is_empty() {
                    return None;
                }
                let weight = above.iter().fold(Rational::zero(), |acc, s| acc + &s.measure);
                Some(Simplex { charts: j, weight })
            })
            .collect();
        simplices.sort_by_key(|s| (s.charts.len(), s.charts.bits()));
        Self { charts, simplices, strata }
    }

    pub fn chart_count(&self) -> usize {
        self.charts
    }

    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn strata(&self) -> &[MaskMeasure] {
        &self.strata
    }

    pub fn simplex(&self, charts: ChartSet) -> Option<&Simplex> {
        self.simplices.iter().find(|s| s.charts == charts)
    }

    pub fn weight(&self, charts: ChartSet) -> Option<&Rational> {
        self.simplex(charts).map(|s| &s.weight)
    }

    pub fn total_measure(&self) -> Rational {
        self.strata.iter().fold(Rational::zero(), |acc, s| acc + &s.measure)
    }

    pub fn dimension(&self) -> u32 {
        self.simplices.iter().map(Simplex::dimension).max().unwrap_or(0)
    }

    pub fn is_downward_closed(&self) -> bool {
        self.simplices
            .iter()
            .all(|s| s.charts.nonempty_subsets().all(|j| self.simplex(j).is_some()))
    }

    pub fn weights_monotone(&self) -> bool {
        self.simplices.iter().all(|s| {
            self.simplices
                .iter()
                .filter(|t| s.charts.is_subset_of(t.charts))
                .all(|t| t.weight <= s.weight)
        })
    }

    /// Connectivity of the 1-skeleton (equivalently of the whole complex).
    pub fn is_connected(&self) -> bool {
        let vertices: Vec<usize> =
            self.simplices.iter().filter(|s| s.charts.len() == 1).map(|s| s.charts.charts().next().unwrap()).collect();
        let Some(&start) = vertices.first() else {
            return true;
        };
        let mut seen = ChartSet::singleton(start);
        let mut changed = true;
        while changed {
            changed = false;
            for s in self.simplices.iter().filter(|s| s.charts.len() == 2) {
                let meets = s.charts.bits() & seen.bits() != 0;
                if meets && !s.charts.is_subset_of(seen) {
                    seen = ChartSet::from_bits(seen.bits() | s.charts.bits());
                    changed = true;
                }
            }
        }
        vertices.iter().all(|&v| seen.contains(v))
    }

    /// All simple paths from `from` to `to` through facet/coface-adjacent simplices.
    pub fn simple_paths(&self, from: ChartSet, to: ChartSet) -> Vec<Vec<ChartSet>> {
        let mut out = Vec::new();
        if self.simplex(from).is_none() || self.simplex(to).is_none() {
            return out;
        }
        let mut path = vec![from];
        self.extend_paths(to, &mut path, &mut out);
        out
    }

    fn extend_paths(&self, to: ChartSet, path: &mut Vec<ChartSet>, out: &mut Vec<Vec<ChartSet>>) {
        let last = *path.last().unwrap();
        if last == to {
            out.push(path.clone());
            return;
        }
        for s in &self.simplices {
            if s.charts.is_facet_adjacent(last) && !path.contains(&s.charts) {
                path.push(s.charts);
                self.extend_paths(to, path, out);
                path.pop();
            }
        }
    }

    /// `μ(⋃_{σ ∈ path} U_σ)`: a stratum lies in the union iff its mask
    /// contains some simplex on the path.
    pub fn union_measure(&self, path: &[ChartSet]) -> Rational {
        self.strata
            .iter()
            .filter(|s| path.iter().any(|j| j.is_subset_of(s.mask)))
            .fold(Rational::zero(), |acc, s| acc + &s.measure)
    }

    /// Minimal union measure over all simple paths between two simplices.
    pub fn geodesic(&self, from: ChartSet, to: ChartSet) -> Result<Rational> {
        self.simple_paths(from, to)
            .iter()
            .map(|path| self.union_measure(path))
            .min()
            .ok_or_else(|| {
                Error::DisconnectedNerve(format!("no path from simplex {from} to simplex {to}"))
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic_arith::rational::{int, ratio};

    fn single_chart() -> NerveComplex {
        NerveComplex::from_strata(1, vec![MaskMeasure { mask: ChartSet::singleton(0), measure: ratio(7, 3) }])
    }

    #[test]
    fn single_chart_atlas_is_one_vertex() {
        let n = single_chart();
        assert_eq!(n.simplices().len(), 1);
        assert_eq!(n.simplices()[0].weight, ratio(7, 3));
        assert!(n.is_connected() && n.is_downward_closed());
    }

    #[test]
    fn two_charts_with_overlap() {
        // Strata measures a=1, ab=4, b=3 (in units of 1/q).
        let strata = vec![
            MaskMeasure { mask: ChartSet::from_charts([0]), measure: int(1) },
            MaskMeasure { mask: ChartSet::from_charts([0, 1]), measure: int(4) },
            MaskMeasure { mask: ChartSet::from_charts([1]), measure: int(3) },
        ];
        let n = NerveComplex::from_strata(2, strata);
        assert_eq!(n.weight(ChartSet::from_charts([0])), Some(&int(5)));
        assert_eq!(n.weight(ChartSet::from_charts([1])), Some(&int(7)));
        assert_eq!(n.weight(ChartSet::from_charts([0, 1])), Some(&int(4)));
        assert!(n.weights_monotone());
        let a = ChartSet::from_charts([0]);
        let b = ChartSet::from_charts([1]);
        let ab = ChartSet::from_charts([0, 1]);
        assert_eq!(n.geodesic(a, ab).unwrap(), int(5));
        assert_eq!(n.geodesic(a, b).unwrap(), int(8));
        assert_eq!(n.geodesic(ab, ab).unwrap(), int(4));
        assert_eq!(n.simple_paths(a, b), vec![vec![a, ab, b]]);
    }

    #[test]
    fn disconnected_vertices() {
        let strata = vec![
            MaskMeasure { mask: ChartSet::from_charts([0]), measure: int(1) },
            MaskMeasure { mask: ChartSet::from_charts([1]), measure: int(1) },
        ];
        let n = NerveComplex::from_strata(2, strata);
        assert!(!n.is_connected());
        assert!(matches!(
            n.geodesic(ChartSet::singleton(0), ChartSet::singleton(1)),
            Err(Error::DisconnectedNerve(_))
        ));
    }
}
