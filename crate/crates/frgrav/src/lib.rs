//! Caputo fractional calculus and exact-solution constructors for
//! nonholonomic 2+2 fractional gravity.
//!
//! * [`fraccore`]: fractional derivatives and integrals on sampled fields.
//! * [`geomframe`]: N-adapted frames, the canonical d-connection and the
//!   reduced field-equation residuals.
//! * [`solvers`]: the four exact-solution families and the Levi-Civita selector.
//! * [`blackholes`]: Schwarzschild deformations, rotoids, solitonic and
//!   oscillator backgrounds.
//! * [`cli`]: config-driven pipeline behind the `frgrav` binary.

// Index loops mirror the tensor notation; negated comparisons keep NaN on the failing side.
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod blackholes;
pub mod cli;
pub mod error;
pub mod fraccore;
pub mod geomframe;
pub mod solvers;

pub use error::{Error, Result};
