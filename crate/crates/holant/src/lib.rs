//! Workbench for Boolean-domain Holant problems.
//!
//! Signatures are dense maps ℤ₂ⁿ → scalars over either an exact cyclotomic
//! backend or a complex floating backend. On top of them sit the gadget
//! calculus, unique prime factorization, tractable-class membership tests,
//! entanglement analysis with a replayable reduction engine, and a Holant
//! partition-function evaluator.

pub mod classify;
pub mod entangle;
pub mod error;
pub mod factor;
pub mod gadget;
pub mod grid;
pub mod io;
pub mod scalar;
pub mod signature;

pub use error::{HolantError, Result};
pub use scalar::{Backend, CycloScalar, FloatScalar, Scalar};
pub use signature::{ExactSignature, FloatSignature, Signature};
