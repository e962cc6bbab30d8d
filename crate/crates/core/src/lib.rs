//! Vladimirov-Taibleson type Laplacians on discretized compact p-adic
//! analytic manifolds.
//!
//! The crate is organised bottom-up:
//!
//! - [`padic_arith`]: finite-precision p-adic numbers, finite fields
//!   `F_{p^f}`, exact rationals and additive character tables.
//! - [`manifold`]: atlases with polynomial transition maps, equalising
//!   numbers, level-`m` cell models with their ball trees, weighted nerve
//!   complexes and the geodesic distance `d_g`. Built-in models are the
//!   projective spaces `P^n(Q_p)` and `Y = P^n \ S_0^n`.
//! - [`spectral`]: the operator `Δ^s`, Kozyrev-style wavelets, eigenvalues
//!   by quadrature, heat kernels, Green functions, the heat semigroup and a
//!   jump-process sampler.
//! - [`elliptic`]: brute-force point counting, the good-reduction model of
//!   `E(K)`, closed-form wavelet eigenvalues and recovery of `|Ē(k)|` from the
//!   bottom of the spectrum.
//!
//! With the default `parallel` feature the data-parallel loops run on rayon;
//! without it every loop runs sequentially with identical results.

pub mod elliptic;
pub mod error;
pub mod manifold;
pub mod padic_arith;
pub mod par;
pub mod spectral;

pub use error::{Error, Result};
pub use padic_arith::{FiniteField, FqElement, PAdicNumber, Rational};
