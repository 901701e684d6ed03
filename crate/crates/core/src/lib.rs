//! Scattering data for the weighted Jacobi difference equation
//!
//! ```text
//! a(n+1) psi(n+1) + b(n) psi(n) + a(n) psi(n-1) = lambda w(n) psi(n),   n in Z,
//! ```
//!
//! with coefficients that differ from their limits `(a_inf, b_inf, w_inf)` on
//! finitely many sites. The crate computes Jost solutions, the transmission
//! and reflection coefficients `T`, `R`, `L` on the unit circle, the 2x2
//! transition matrix, and verifies that the transition matrix of the whole
//! lattice is the ordered product of the transition matrices of its
//! fragments.
//!
//! ```
//! use jacobi_scattering::{lattice::*, scattering::extract_scattering};
//! use num_complex::Complex64;
//!
//! let seq = validate_sequence(&RawCoefficients {
//!     a_inf: 1.0, b_inf: 0.0, w_inf: 1.0,
//!     n_min: 0, n_max: 0,
//!     a: vec![1.0], b: vec![0.5], w: vec![1.0],
//! }).unwrap();
//! let sd = extract_scattering(&seq, Complex64::i()).unwrap();
//! assert!((sd.t - Complex64::new(4.0, 1.0) / 4.25).norm() < 1e-12);
//! ```

pub mod cli;
pub mod error;
pub mod jost;
pub mod lattice;
pub mod matrix;
pub mod oracle;
pub mod scattering;
pub mod spectral;
pub mod transition;

pub use error::{Error, Result};
pub use lattice::{CoefficientSequence, Fragmentation, IndexWindow, Limits, RawCoefficients};
pub use matrix::Mat2;
pub use scattering::ScatteringData;
pub use spectral::{CircleGrid, SpectralPoint};
pub use transition::{FactorizationReport, TransitionMatrix};
