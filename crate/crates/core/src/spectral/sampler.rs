//! Jump process generated by `−Δ^s`, simulated event by event.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};
use serde::{Deserialize, Serialize};

use super::operator::OperatorMatrix;
use crate::error::{precondition, Error, Result};
use crate::manifold::CellId;
use crate::par;

/// Paths per RNG stream; stream `c` serves paths `c·CHUNK .. (c+1)·CHUNK`.
pub const CHUNK: usize = 4096;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub t_end: f64,
    pub paths: usize,
    pub seed: u64,
    /// Number of leading paths whose events are kept.
    pub logged_paths: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct JumpEvent {
    pub path: usize,
    pub time: f64,
    pub from: usize,
    pub to: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct HoldingStats {
    pub count: u64,
    pub mean: f64,
    pub standard_error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleReport {
    pub start: usize,
    pub t_end: f64,
    pub paths: usize,
    /// Paths found in each cell at `t_end`.
    pub occupation: Vec<u64>,
    pub total_jumps: u64,
    /// `jump_histogram[k]`: paths with exactly `k` jumps.
    pub jump_histogram: Vec<u64>,
    /// First holding time at the start cell, drawn for every path.
    pub first_holding: HoldingStats,
    pub expected_holding: f64,
    pub events: Vec<JumpEvent>,
}

impl SampleReport {
    pub fn empirical_law(&self) -> Vec<f64> {
        self.occupation.iter().map(|&c| c as f64 / self.paths as f64).collect()
    }

    pub fn total_variation(&self, law: &[f64]) -> f64 {
        total_variation(&self.empirical_law(), law)
    }
}

pub fn total_variation(a: &[f64], b: &[f64]) -> f64 {
    0.5 * a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>()
}

enum Target {
    /// Another cell of the ball at this depth, outside the current child.
    Shell(u32),
    Top(usize),
}

/// Cumulative jump rates out of the cells of one top ball.
struct JumpTable {
    cumulative: Vec<f64>,
    targets: Vec<Target>,
}

impl JumpTable {
    fn total(&self) -> f64 {
        *self.cumulative.last().unwrap_or(&0.0)
    }
}

pub struct Sampler<'a> {
    op: &'a OperatorMatrix<'a>,
    tables: Vec<JumpTable>,
}

impl<'a> Sampler<'a> {
    pub fn new(op: &'a OperatorMatrix<'a>) -> Result<Self> {
        let model = op.model();
        let r = model.branching();
        let level = model.level();
        let mu = op.cell_measure();
        let kernel = op.kernel();
        let tables = (0..model.top_count())
            .map(|top| -> Result<JumpTable> {
                let mut cumulative = Vec::new();
                let mut targets = Vec::new();
                let mut acc = 0.0;
                for depth in 1..level {
                    let cells = (r.pow(level - depth) - r.pow(level - depth - 1)) as f64;
                    acc += cells * kernel[model.same_top_distance_id(depth)] * mu;
                    cumulative.push(acc);
                    targets.push(Target::Shell(depth));
                }
                for other in (0..model.top_count()).filter(|&t| t != top) {
                    let k = kernel[model.cross_distance_id(top, other)?];
                    acc += model.cells_per_top() as f64 * k * mu;
                    cumulative.push(acc);
                    targets.push(Target::Top(other));
                }
                if !(acc > 0.0) {
                    return Err(Error::ZeroTotalRate(top));
                }
                Ok(JumpTable { cumulative, targets })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { op, tables })
    }

    /// Total jump rate out of `x`.
    pub fn rate(&self, x: CellId) -> f64 {
        self.tables[self.op.model().top_of(x)].total()
    }

    fn jump(&self, x: usize, rng: &mut ChaCha8Rng) -> usize {
        let model = self.op.model();
        let per_top = model.cells_per_top();
        let top = x / per_top;
        let table = &self.tables[top];
        let u = rng.random::<f64>() * table.total();
        let slot = table.cumulative.partition_point(|&c| c <= u).min(table.targets.len() - 1);
        match table.targets[slot] {
            Target::Shell(depth) => {
                let r = model.branching();
                let low = r.pow(model.level() - depth - 1);
                let offset = (x % per_top) as u64;
                let head = offset / (low * r);
                let current = (offset / low) % r;
                let mut digit = rng.random_range(0..r - 1);
                if digit >= current {
                    digit += 1;
                }
                let rest = rng.random_range(0..low);
                model.cell_at(top, (head * r + digit) * low + rest).0
            }
            Target::Top(other) => model.cell_at(other, rng.random_range(0..per_top as u64)).0,
        }
    }

    pub fn sample(&self, start: CellId, config: &SamplerConfig) -> Result<SampleReport> {
        let model = self.op.model();
        if start.0 >= model.cell_count() {
            return Err(precondition(format!("start cell {} out of range", start.0)));
        }
        if !(config.t_end >= 0.0) || config.paths == 0 {
            return Err(precondition("need t_end ≥ 0 and at least one path"));
        }
        let rate = self.rate(start);
        let chunks = config.paths.div_ceil(CHUNK);
        let parts = par::map_range(chunks, |c| self.run_chunk(start.0, c, config));
        let mut report = SampleReport {
            start: start.0,
            t_end: config.t_end,
            paths: config.paths,
            occupation: vec![0; model.cell_count()],
            total_jumps: 0,
            jump_histogram: Vec::new(),
            first_holding: HoldingStats::default(),
            expected_holding: 1.0 / rate,
            events: Vec::new(),
        };
        let (mut sum, mut sum_sq) = (0.0, 0.0);
        for part in parts {
            for (slot, c) in report.occupation.iter_mut().zip(&part.occupation) {
                *slot += c;
            }
            if report.jump_histogram.len() < part.jump_histogram.len() {
                report.jump_histogram.resize(part.jump_histogram.len(), 0);
            }
            for (slot, c) in report.jump_histogram.iter_mut().zip(&part.jump_histogram) {
                *slot += c;
            }
            report.total_jumps += part.total_jumps;
            sum += part.holding_sum;
            sum_sq += part.holding_sum_sq;
            report.events.extend(part.events);
        }
        let n = config.paths as f64;
        let mean = sum / n;
        let variance = if config.paths > 1 { (sum_sq - n * mean * mean) / (n - 1.0) } else { 0.0 };
        report.first_holding =
            HoldingStats { count: config.paths as u64, mean, standard_error: (variance.max(0.0) / n).sqrt() };
        Ok(report)
    }

    fn run_chunk(&self, start: usize, chunk: usize, config: &SamplerConfig) -> ChunkResult {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(chunk as u64);
        let first = chunk * CHUNK;
        let last = (first + CHUNK).min(config.paths);
        let mut out = ChunkResult {
            occupation: vec![0; self.op.model().cell_count()],
            ..ChunkResult::default()
        };
        for path in first..last {
            let mut x = start;
            let mut t = 0.0;
            let mut jumps = 0usize;
            loop {
                let hold = Exp::new(self.tables[self.op.model().top_of(CellId(x))].total())
                    .expect("positive rate")
                    .sample(&mut rng);
                if jumps == 0 {
                    out.holding_sum += hold;
                    out.holding_sum_sq += hold * hold;
                }
                if t + hold > config.t_end {
                    break;
                }
                t += hold;
                let y = self.jump(x, &mut rng);
                if path < config.logged_paths {
                    out.events.push(JumpEvent { path, time: t, from: x, to: y });
                }
                x = y;
                jumps += 1;
            }
            out.occupation[x] += 1;
            out.total_jumps += jumps as u64;
            if out.jump_histogram.len() <= jumps {
                out.jump_histogram.resize(jumps + 1, 0);
            }
            out.jump_histogram[jumps] += 1;
        }
        out
    }
}

#[derive(Default)]
struct ChunkResult {
    occupation: Vec<u64>,
    total_jumps: u64,
    jump_histogram: Vec<u64>,
    holding_sum: f64,
    holding_sum_sq: f64,
    events: Vec<JumpEvent>,
}

pub fn sample_paths(op: &OperatorMatrix<'_>, start: CellId, config: &SamplerConfig) -> Result<SampleReport> {
    Sampler::new(op)?.sample(start, config)
}
