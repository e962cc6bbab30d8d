//! Level-`m` cell models: implicit cells, ball trees and the geodesic distance.
//!
//! Every model is a disjoint union of top balls of equal measure, each a
//! complete `r`-ary tree of depth `m − 1` with `r = q^dim`. Cell `i` lives in
//! top ball `i / r^(m−1)`; the base-`r` digits of `i mod r^(m−1)` (most
//! significant first) select a child at depths `2, …, m`.

use std::fmt;
use std::ops::Range;

use num_bigint::BigInt;
use num_traits::Zero;

use super::nerve::{ChartSet, MaskMeasure, NerveComplex};
use crate::error::{precondition, Error, Result};
use crate::padic_arith::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CellId(pub usize);

/// A ball of the tree: `depth = 1` is a top ball, `depth = m` a single cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BallId {
    pub top: usize,
    pub depth: u32,
    /// Index among the balls of this depth inside the top ball.
    pub prefix: u64,
}

impl fmt::Display for BallId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "B{}.{}.{}", self.top, self.depth, self.prefix)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelKind {
    Projective { n: u32 },
    /// `P^n` with the top overlap of all charts removed.
    ProjectiveComplement { n: u32 },
    EllipticCurve,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TopBall {
    pub mask: ChartSet,
    pub region: String,
    /// Chart in which `residue` is written.
    pub chart: usize,
    pub residue: Vec<u64>,
}

/// How distances between different top balls are obtained.
pub enum CrossRule<'a> {
    /// Minimal union measure over nerve paths between the chart sets.
    NervePaths,
    /// A model-specific table keyed by the two top balls' chart sets.
    Table(&'a dyn Fn(ChartSet, ChartSet) -> Result<Rational>),
}

#[derive(Clone, Debug)]
pub struct CellModel {
    kind: ModelKind,
    p: u64,
    f: u32,
    dim: u32,
    level: u32,
    branching: u64,
    chart_names: Vec<String>,
    tops: Vec<TopBall>,
    top_measure: Rational,
    nerve: NerveComplex,
    /// Distinct chart sets of the top balls, in order of first appearance.
    classes: Vec<ChartSet>,
    top_class: Vec<usize>,
    distance_values: Vec<Rational>,
    same_top_ids: Vec<usize>,
    cross_ids: Vec<Vec<Option<usize>>>,
    cross_error: Option<Error>,
}

pub struct ModelParts {
    pub kind: ModelKind,
    pub p: u64,
    pub f: u32,
    pub dim: u32,
    pub level: u32,
    pub chart_names: Vec<String>,
    pub tops: Vec<TopBall>,
    pub top_measure: Rational,
}

impl CellModel {
    pub fn new(parts: ModelParts, rule: CrossRule<'_>) -> Result<Self> {
        let ModelParts { kind, p, f, dim, level, chart_names, tops, top_measure } = parts;
        if level == 0 {
            return Err(precondition("level m must be at least 1"));
        }
        if tops.is_empty() {
            return Err(precondition("model has no cells"));
        }
        let q = p.checked_pow(f).ok_or_else(|| precondition("q overflows"))?;
        let branching = q.checked_pow(dim).ok_or_else(|| precondition("q^dim overflows"))?;
        let per_top = branching
            .checked_pow(level - 1)
            .filter(|&c| c.checked_mul(tops.len() as u64).is_some_and(|n| n <= 1 << 40))
            .ok_or_else(|| precondition("model too large"))?;
        let _ = per_top;

        let mut classes: Vec<ChartSet> = Vec::new();
        let top_class: Vec<usize> = tops
            .iter()
            .map(|t| match classes.iter().position(|&c| c == t.mask) {
                Some(i) => i,
                None => {
                    classes.push(t.mask);
                    classes.len() - 1
                }
            })
            .collect();

        let strata: Vec<MaskMeasure> = classes
            .iter()
            .map(|&mask| {
                let count = tops.iter().filter(|t| t.mask == mask).count();
                MaskMeasure { mask, measure: &top_measure * Rational::from_integer(BigInt::from(count)) }
            })
            .collect();
        let nerve = NerveComplex::from_strata(chart_names.len(), strata);

        let mut distance_values: Vec<Rational> = Vec::new();
        let mut intern = |v: Rational| -> usize {
            match distance_values.iter().position(|w| *w == v) {
                Some(i) => i,
                None => {
                    distance_values.push(v);
                    distance_values.len() - 1
                }
            }
        };
        let r = Rational::from_integer(BigInt::from(branching));
        let mut ball = top_measure.clone();
        let mut same_top_ids = Vec::with_capacity(level as usize);
        for _ in 0..level {
            same_top_ids.push(intern(ball.clone()));
            ball /= &r;
        }
        let mut cross_error = None;
        let mut cross_ids = vec![vec![None; classes.len()]; classes.len()];
        for (i, &a) in classes.iter().enumerate() {
            for (j, &b) in classes.iter().enumerate() {
                let value = match &rule {
                    CrossRule::NervePaths => nerve.geodesic(a, b),
                    CrossRule::Table(table) => table(a, b),
                };
                match value {
                    Ok(v) => cross_ids[i][j] = Some(intern(v)),
                    Err(e) => {
                        cross_error.get_or_insert(e);
                    }
                }
            }
        }
        Ok(Self {
            kind,
            p,
            f,
            dim,
            level,
            branching,
            chart_names,
            tops,
            top_measure,
            nerve,
            classes,
            top_class,
            distance_values,
            same_top_ids,
            cross_ids,
            cross_error,
        })
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn residue_degree(&self) -> u32 {
        self.f
    }

    pub fn residue_field_order(&self) -> u64 {
        self.p.pow(self.f)
    }

    pub fn dimension(&self) -> u32 {
        self.dim
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// Number of children of every non-leaf ball, `q^dim`.
    pub fn branching(&self) -> u64 {
        self.branching
    }

    pub fn chart_names(&self) -> &[String] {
        &self.chart_names
    }

    pub fn tops(&self) -> &[TopBall] {
        &self.tops
    }

    pub fn top_count(&self) -> usize {
        self.tops.len()
    }

    pub fn nerve(&self) -> &NerveComplex {
        &self.nerve
    }

    pub fn cells_per_top(&self) -> usize {
        self.branching.pow(self.level - 1) as usize
    }

    pub fn cell_count(&self) -> usize {
        self.tops.len() * self.cells_per_top()
    }

    pub fn cells(&self) -> impl Iterator<Item = CellId> {
        (0..self.cell_count()).map(CellId)
    }

    pub fn top_measure(&self) -> &Rational {
        &self.top_measure
    }

    /// Measure of a ball at `depth` (1 = top ball, `m` = cell).
    pub fn ball_measure(&self, depth: u32) -> &Rational {
        &self.distance_values[self.same_top_ids[depth as usize - 1]]
    }

    pub fn cell_measure(&self) -> &Rational {
        self.ball_measure(self.level)
    }

    pub fn total_measure(&self) -> Rational {
        &self.top_measure * Rational::from_integer(BigInt::from(self.tops.len()))
    }

    pub fn top_of(&self, cell: CellId) -> usize {
        cell.0 / self.cells_per_top()
    }

    pub fn offset_of(&self, cell: CellId) -> u64 {
        (cell.0 % self.cells_per_top()) as u64
    }

    pub fn cell_at(&self, top: usize, offset: u64) -> CellId {
        CellId(top * self.cells_per_top() + offset as usize)
    }

    pub fn mask(&self, cell: CellId) -> ChartSet {
        self.tops[self.top_of(cell)].mask
    }

    pub fn region(&self, cell: CellId) -> &str {
        &self.tops[self.top_of(cell)].region
    }

    /// Index of the cell's top-ball chart set among [`Self::mask_classes`].
    pub fn top_class(&self, top: usize) -> usize {
        self.top_class[top]
    }

    pub fn mask_classes(&self) -> &[ChartSet] {
        &self.classes
    }

    /// Child index chosen at `depth ∈ 2..=m`.
    pub fn digit(&self, cell: CellId, depth: u32) -> u64 {
        debug_assert!((2..=self.level).contains(&depth));
        (self.offset_of(cell) / self.branching.pow(self.level - depth)) % self.branching
    }

    /// Child digits at depths `2..=m`.
    pub fn digits(&self, cell: CellId) -> Vec<u64> {
        (2..=self.level).map(|d| self.digit(cell, d)).collect()
    }

    pub fn ball_of(&self, cell: CellId, depth: u32) -> BallId {
        BallId {
            top: self.top_of(cell),
            depth,
            prefix: self.offset_of(cell) / self.branching.pow(self.level - depth),
        }
    }

    pub fn ball_cells(&self, ball: BallId) -> Range<usize> {
        let width = self.branching.pow(self.level - ball.depth) as usize;
        let start = self.cell_at(ball.top, ball.prefix * width as u64).0;
        start..start + width
    }

    pub fn parent(&self, ball: BallId) -> Option<BallId> {
        (ball.depth > 1).then(|| BallId {
            top: ball.top,
            depth: ball.depth - 1,
            prefix: ball.prefix / self.branching,
        })
    }

    pub fn children(&self, ball: BallId) -> impl Iterator<Item = BallId> {
        let r = self.branching;
        let has_children = ball.depth < self.level;
        (0..if has_children { r } else { 0 }).map(move |k| BallId {
            top: ball.top,
            depth: ball.depth + 1,
            prefix: ball.prefix * r + k,
        })
    }

    pub fn balls_at_depth(&self, depth: u32) -> impl Iterator<Item = BallId> + '_ {
        let per_top = self.branching.pow(depth - 1);
        (0..self.tops.len())
            .flat_map(move |top| (0..per_top).map(move |prefix| BallId { top, depth, prefix }))
    }

    pub fn ball_count_at_depth(&self, depth: u32) -> usize {
        self.tops.len() * self.branching.pow(depth - 1) as usize
    }

    /// Depth of the smallest common ball, `None` across top balls.
    pub fn join_depth(&self, x: CellId, y: CellId) -> Option<u32> {
        if self.top_of(x) != self.top_of(y) {
            return None;
        }
        let (ox, oy) = (self.offset_of(x), self.offset_of(y));
        let mut depth = self.level;
        let mut width = 1u64;
        while depth > 1 && ox / width != oy / width {
            depth -= 1;
            width *= self.branching;
        }
        Some(depth)
    }

    /// `x ∧ y`: the smallest ball containing both cells.
    pub fn join(&self, x: CellId, y: CellId) -> Option<BallId> {
        self.join_depth(x, y).map(|d| self.ball_of(x, d))
    }

    /// Fails when some pair of top balls has no cross distance (disconnected nerve).
    pub fn require_connected(&self) -> Result<()> {
        match &self.cross_error {
            Some(e) => Err(e.clone()),
            None => Ok(()),
        }
    }

    /// Distinct distance values; ids index into this table.
    pub fn distance_values(&self) -> &[Rational] {
        &self.distance_values
    }

    pub fn same_top_distance_id(&self, join_depth: u32) -> usize {
        self.same_top_ids[join_depth as usize - 1]
    }

    /// Distance id between two different top balls.
    pub fn cross_distance_id(&self, top_x: usize, top_y: usize) -> Result<usize> {
        self.cross_ids[self.top_class[top_x]][self.top_class[top_y]].ok_or_else(|| {
            Error::DisconnectedNerve(format!(
                "no nerve path between {} and {}",
                self.tops[top_x].mask, self.tops[top_y].mask
            ))
        })
    }

    pub fn distance_id(&self, x: CellId, y: CellId) -> Result<usize> {
        match self.join_depth(x, y) {
            Some(d) => Ok(self.same_top_distance_id(d)),
            None => self.cross_distance_id(self.top_of(x), self.top_of(y)),
        }
    }

    /// `d_g(x, y)`; `d_g(x, x)` is the cell measure.
    pub fn geodesic_distance(&self, x: CellId, y: CellId) -> Result<Rational> {
        Ok(self.distance_values[self.distance_id(x, y)?].clone())
    }

    pub fn measure_of_region(&self, region: &str) -> Rational {
        let count = self.tops.iter().filter(|t| t.region == region).count();
        &self.top_measure * Rational::from_integer(BigInt::from(count))
    }

    /// Region labels in order of first appearance.
    pub fn regions(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for t in &self.tops {
            if !out.contains(&t.region) {
                out.push(t.region.clone());
            }
        }
        out
    }

    pub fn describe_cell(&self, cell: CellId) -> String {
        let top = &self.tops[self.top_of(cell)];
        let res: Vec<String> = top.residue.iter().map(|r| r.to_string()).collect();
        let digits: Vec<String> = self.digits(cell).iter().map(|d| d.to_string()).collect();
        format!("chart {} residue ({}) digits [{}]", top.chart, res.join(","), digits.join(","))
    }

    /// Exact measure identity `Σ cells = μ(X)` at this level.
    pub fn cell_sum(&self) -> Rational {
        let n = Rational::from_integer(BigInt::from(self.cell_count()));
        self.cell_measure() * n
    }
}

/// Refinement consistency: each cell at level `m` has the measure of its
/// `q^dim` children at level `m + 1`.
pub fn refinement_consistent(coarse: &CellModel, fine: &CellModel) -> bool {
    if fine.level != coarse.level + 1 || fine.tops != coarse.tops {
        return false;
    }
    let r = Rational::from_integer(BigInt::from(fine.branching));
    fine.cell_measure() * r == *coarse.cell_measure()
        && fine.cell_sum() == coarse.cell_sum()
        && !coarse.cell_sum().is_zero()
}
