//! N-adapted geometry of the 2+2 splitting: frames, the canonical
//! d-connection, curvature, distortion and the reduced field equations.

mod curvature;
mod dconn;
mod distortion;
mod dmetric;
mod nconn;
mod residuals;
mod tensor;

pub use curvature::{einstein_dtensor, ricci, ricci_dtensor, EinsteinReport};
pub use dconn::{canonical_dconnection, nonmetricity, torsion, DConnectionCoeffs, DET_TOL};
pub use distortion::distortion_tensor;
pub use dmetric::{broadcast_v, DMetric, SourceSpec, SINGULAR_TOL};
pub use nconn::{build_frames, nonholonomy_coefficients, Frames, NConnection, V_AXIS};
pub use residuals::{
    evaluation_mask, lc_conditions, lc_conditions_with, ln_abs, reduced_residuals,
    reduced_residuals_with, residual_fields, EqStat, LcReport, ResidualFields, ResidualOptions,
    ResidualReport,
};
pub(crate) use tensor::masked_max as tensor_masked_max;
pub use tensor::{Tensor2, Tensor3};
