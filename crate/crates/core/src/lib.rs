//! Closed-form PPT analysis of Bell-transformed NMR thermal states, with a
//! dense density-matrix oracle to check every analytic result.

pub mod bell;
pub mod bipartition;
pub mod cli;
pub mod boundary;
pub mod criteria;
pub mod durcirac;
pub mod error;
pub mod mt;
pub mod oracle;
pub mod polarization;
pub mod transforms;
pub mod validate;

pub use bell::{partial_transpose_weights, BellDiagonalState, PtSpectrum};
pub use bipartition::{Bipartition, GhzIndex, Sign};
pub use criteria::{FullClassification, Verdict};
pub use error::{Error, Result};
pub use oracle::DenseDensityMatrix;
pub use polarization::PolarizationVector;
pub use transforms::TransformKind;
