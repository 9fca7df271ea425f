//! Spectral analysis and filtering of periodic temporal graph signals: the
//! joint (time-vertex) Fourier transform, joint smoothness measures,
//! bivariate polynomial filters with a distributed evaluation scheme, and
//! Wiener interference cancellation, plus the on-disk formats and the
//! `jtv` command-line front end.

pub mod error;
pub mod graph;
pub mod linalg;
pub mod signal;
pub mod spectral;
pub mod variation;
pub mod filters;
pub mod wiener;
pub mod distributed;
pub mod io;

pub use error::{Error, Result};
pub use graph::{joint_graph, kronecker_sum, ring_graph, Graph, MatrixKind};
pub use signal::TemporalGraphSignal;
pub use spectral::{
    dft, dft_basis, gft, graph_basis, idft, igft, ijft, jft, JointBasis, SpectralBasis,
};
