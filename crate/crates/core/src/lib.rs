//! Translate qutrit operators into symmetric two-qubit operators and back.
//!
//! A spin-1 operator basis on qutrits (three spin matrices, their shifted
//! squares, and all anticommutators) has an exact image inside two qubits:
//! the nine operators supported on the symmetric (triplet) subspace. Any
//! n-qutrit operator therefore lifts to a 2n-qubit operator with the same
//! expansion coefficients, and qutrit states embed as symmetric two-qubit
//! states so that all expectation values are preserved.
//!
//! On top of that machinery the crate reconstructs the two-qutrit CGLMP
//! Bell operator and a three-qutrit Bell operator, computes exact classical
//! bounds by enumerating deterministic local strategies, optimizes the
//! GHZ-plus-Bell-pair state families, and rederives the CGLMP Tsirelson
//! bound from complementarity constraints on anticommuting observables.
//!
//! The [`checks`] module bundles the full set of reproduction criteria that
//! the `qutrit-bell` CLI exposes as `reproduce`.

pub mod checks;
pub mod cglmp;
pub mod decomp;
pub mod error;
pub mod functional;
mod golden;
pub mod matrix;
pub mod resources;
pub mod spin;
pub mod three_qutrit;
pub mod tsirelson;

pub use error::{Error, Result};
pub use matrix::{ComplexMatrix, EigenDecomposition, StateVector};
