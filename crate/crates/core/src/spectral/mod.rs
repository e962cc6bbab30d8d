//! The operator `Δ^s`, its wavelet spectrum and the associated diffusion.

mod heat;
mod operator;
mod sampler;
mod spectrum;
mod wavelet;

pub use heat::{Basis, ComplementModes, ConstantTerm, SpectralCalculus};
pub use operator::{assemble_operator, Exponent, OperatorMatrix, Power, Scalar};
pub use sampler::{
    sample_paths, total_variation, HoldingStats, JumpEvent, SampleReport, Sampler, SamplerConfig, CHUNK,
};
pub use spectrum::{
    enumerate_spectrum, wavelet_eigenvalue, wavelet_eigenvalue_at, wavelet_eigenvalue_numeric, Eigenvalue, Spectrum,
    SpectrumEntry,
};
pub use wavelet::{child_difference, WaveletFamily};
