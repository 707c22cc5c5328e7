//! Extended cubic B-spline collocation for the Gardner equation
//!
//! ```text
//! u_t + mu1 u u_x + mu2 u^2 u_x + mu3 u_xxx + epsilon = 0,   a <= x <= b,
//! ```
//!
//! with homogeneous Neumann data. The third-order term is split off through
//! `v = u_x`, both fields are expanded in extended cubic B-splines, and time
//! is advanced by a linearised Crank-Nicolson step that costs one banded solve.
//!
//! The crate also provides the closed-form test solutions, the conserved
//! quantities `M`, `E`, `H`, a search over the extension parameter and a von
//! Neumann amplification-factor sweep.

pub mod assembly;
pub mod banded;
pub mod basis;
pub mod diagnostics;
pub mod error;
pub mod export;
pub mod init;
pub mod lambda_opt;
pub mod problems;
pub mod reference;
pub mod simulation;
pub mod stability;

pub use assembly::{CoefficientState, PhiReflection, PhysicsParams, Scheme};
pub use basis::{eval_basis, nodal_weights, reconstruct, GridSpec, NodalWeights};
pub use diagnostics::{
    conserved_quantities, linf_error, relative_changes, Conserved, DiagnosticsRecord, Quadrature,
};
pub use error::{Error, Result};
pub use init::{fit_initial, InitialProfile};
pub use lambda_opt::{scan, ScanResult, ScanSpec};
pub use problems::{preset, ExperimentPreset, PresetName};
pub use simulation::{run, RunOptions, RunOutput};
pub use stability::{amplification_factors, verify_stability, StabilityInput, StabilityReport};
