//! Discretized compact p-adic manifolds.
//!
//! A model at level `m` replaces the manifold by its radius-`p^(−m)` cells.
//! Every integral becomes a finite sum over cells, exact for rational
//! integrands. Balls and joins come from the cell tree; the geodesic
//! distance between different top balls comes from the weighted nerve.

mod cells;
mod metric;
mod nerve;
mod poly_map;
mod projective;
mod serialize;

pub use cells::{
    refinement_consistent, BallId, CellId, CellModel, CrossRule, ModelKind, ModelParts, TopBall,
};
pub use metric::{check_metric, MetricReport};
pub use nerve::{ChartSet, MaskMeasure, NerveComplex, Simplex};
pub use poly_map::{
    determinant, equalise_pair, equalising_number_of_map, invert_map, mat_inverse, mat_vec,
    maps_ball_to_equal_ball, matrix_minus_identity, matrix_norm, residue_at, AnalyticMap,
    BallCheck, ComponentSpec, CoordDomain, Equalised, Equalising, Matrix, Monomial, Polynomial,
    PolynomialMap, PolynomialMapSpec, PostComposition, RationalComponent, TermSpec,
};
pub use projective::{
    build_projective_model, build_y_model, transition_map, BallTransitionReport, ProjectiveModel,
};
pub use serialize::{model_document, simplex_records, CellRecord, ModelDocument, ModelHeader, SimplexRecord, MODEL_SCHEMA};
