//! Fractional calculus on sampled fields: Gamma, Caputo and Riemann-Liouville
//! operators, Mittag-Leffler, closed-form power rules and exterior derivatives.

mod arith;
mod forms;
mod gamma;
mod grid;
pub(crate) mod kernel;
mod mittag;
mod ops;
mod order;
mod power;

pub use forms::{exterior_derivative, Form, OneForm, TwoForm};
pub use gamma::{gamma, ln_gamma, recip_gamma};
#[allow(unused_imports)]
pub(crate) use grid::{flatten, unflatten};
pub use grid::{Grid1D, SampledField};
pub use mittag::{mittag_leffler, ML_MAX_ARG};
pub use ops::{caputo_left, caputo_right, rl_integral, rl_left_derivative};
pub use order::FracOrder;
pub use power::caputo_power_rule;
