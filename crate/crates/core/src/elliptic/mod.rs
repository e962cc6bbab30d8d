//! Elliptic curves with good reduction and the bottom of their wavelet spectrum.

mod curve;
mod eigen;
mod hearing;
mod model;

pub use curve::{count_points_bruteforce, hasse_window, parse_element, serre_invariant, CurveSpec};
pub use eigen::{
    ball_depth, derived_eigenvalue, fiber_term, kappa, lambda0, printed_eigenvalue, ClosedForm, EigenClass, Lambda0,
};
pub use hearing::{
    forward_table, hear_points, lambda0_strictly_monotone, HearingMethod, HearingResult, PaperFormulas,
    MATCH_TOLERANCE, MIN_POINTS,
};
pub use model::{cross_fiber_distance, EllipticModel, Region, CHART_NAMES};
