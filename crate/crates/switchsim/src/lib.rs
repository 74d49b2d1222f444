//! Simulation toolkit for single-query discrimination of bipartite
//! no-signalling quantum channels, with and without a definite causal order.
//!
//! The library is organized in layers:
//!
//! - [`linalg`]: dense complex matrices with tensor-factor bookkeeping
//!   (Kronecker products, partial traces, Hermitian eigendecomposition,
//!   trace norm, PSD square root).
//! - [`channels`]: quantum channels as Kraus families and Choi operators,
//!   no-signalling checks, and the channel factories `M_U`, `X_V`, `Y_V`, `Z_V`.
//! - [`haar`]: Haar-uniform SU(2) sampling, Monte Carlo averaging, and exact
//!   twirling over tensor-power representations via isotypic decomposition.
//! - [`spincouple`]: Clebsch-Gordan coefficients, coupled angular-momentum
//!   bases for 2, 3 and 4 spin-1/2 systems, the invariant projectors and
//!   operator families on them, and the symmetric tester.
//! - [`switch`]: sequential, parallel and superposed-causal-order outputs of
//!   a bipartite channel, including the quantum-switch construction.
//! - [`discrim`]: discrimination strategy evaluation (Helstrom bound, the
//!   three reference strategies, tester optimization, multi-pair check).
//! - [`report`]: named end-to-end experiments with machine-readable reports.

pub mod channels;
pub mod discrim;
pub mod haar;
pub mod linalg;
pub mod report;
pub mod spincouple;
pub mod switch;

pub use linalg::CMatrix;

use thiserror::Error;

/// Errors surfaced by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("factor index {index} out of range for {n_factors} factors")]
    FactorOutOfRange { index: usize, n_factors: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not positive semidefinite (min eigenvalue {min_eig:e})")]
    NotPsd { min_eig: f64 },
    #[error("matrix is not unitary (deviation {0:e})")]
    NotUnitary(f64),
    #[error("invalid angular momentum quantum numbers: {0}")]
    InvalidQuantumNumbers(String),
    #[error("trace preservation violated (deviation {0:e})")]
    NotTracePreserving(f64),
    #[error("channel is signalling in direction {0}")]
    Signalling(&'static str),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("unknown experiment: {0}")]
    UnknownExperiment(String),
    #[error("serialization error: {0}")]
    Serialization(#[from] serde_json::Error),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
