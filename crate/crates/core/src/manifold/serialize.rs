//! The `padic-spectra/model-v1` JSON document.

use serde::{Deserialize, Serialize};

use super::cells::{CellModel, ModelKind};
use super::nerve::NerveComplex;
use crate::padic_arith::{rational, Rational};

pub const MODEL_SCHEMA: &str = "padic-spectra/model-v1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelHeader {
    pub kind: String,
    pub p: u64,
    pub f: u32,
    pub dimension: u32,
    pub level: u32,
    #[serde(with = "rational::serde_str")]
    pub total_measure: Rational,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellRecord {
    pub id: usize,
    pub charts: Vec<usize>,
    #[serde(with = "rational::serde_str")]
    pub measure: Rational,
    /// The ball one level above the cell; absent at level 1.
    pub parent: Option<String>,
    pub region: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimplexRecord {
    pub charts: Vec<usize>,
    #[serde(with = "rational::serde_str")]
    pub weight: Rational,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelDocument {
    pub schema: String,
    pub model: ModelHeader,
    pub chart_names: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cells: Vec<CellRecord>,
    pub simplices: Vec<SimplexRecord>,
}

pub fn kind_name(kind: ModelKind) -> String {
    match kind {
        ModelKind::Projective { n } => format!("projective-{n}"),
        ModelKind::ProjectiveComplement { n } => format!("y-{n}"),
        ModelKind::EllipticCurve => "elliptic".to_string(),
    }
}

pub fn simplex_records(nerve: &NerveComplex) -> Vec<SimplexRecord> {
    nerve
        .simplices()
        .iter()
        .map(|s| SimplexRecord { charts: s.charts.charts().collect(), weight: s.weight.clone() })
        .collect()
}

/// Builds the document; `with_cells = false` emits only the nerve.
pub fn model_document(model: &CellModel, with_cells: bool) -> ModelDocument {
    let cells = if with_cells {
        model
            .cells()
            .map(|c| CellRecord {
                id: c.0,
                charts: model.mask(c).charts().collect(),
                measure: model.cell_measure().clone(),
                parent: (model.level() > 1).then(|| model.ball_of(c, model.level() - 1).to_string()),
                region: model.region(c).to_string(),
            })
            .collect()
    } else {
        Vec::new()
    };
    ModelDocument {
        schema: MODEL_SCHEMA.to_string(),
        model: ModelHeader {
            kind: kind_name(model.kind()),
            p: model.prime(),
            f: model.residue_degree(),
            dimension: model.dimension(),
            level: model.level(),
            total_measure: model.total_measure(),
        },
        chart_names: model.chart_names().to_vec(),
        cells,
        simplices: simplex_records(model.nerve()),
    }
}
