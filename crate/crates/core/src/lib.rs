//! Spin-flip invariants and optimal decompositions for even-qubit states.
//!
//! Qubit 1 is the most significant bit of a basis index; functions that take
//! qubit positions use 0-based indices in the same order.

pub mod decompositions;
pub mod error;
pub mod io;
pub mod linalg;
pub mod measures;
pub mod oracle;
pub mod states;

pub use decompositions::{DecompositionKind, DecompositionReport, MemberStats};
pub use error::{Error, Result};
pub use io::StateValue;
pub use linalg::{ComplexMatrix, ComplexVector, C64};
pub use measures::{MeasureReport, Method};
pub use oracle::{OracleConfig, OracleResult};
pub use states::{DensityMatrix, Ensemble, PureState, StandardState, XRow, XStateSpec};
