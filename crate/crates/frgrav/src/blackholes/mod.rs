//! Schwarzschild prime data, vacuum fractional deformations, black rotoids,
//! solitonic backgrounds and the fractional oscillator embedding.

mod deform;
mod oscillator;
mod prime;
mod soliton;

pub use deform::{
    fractional_deformation, horizon_curve, oscillator_embedded_metric, polarize, rotoid_metric,
    rotoid_n_conditions, solitonic_rotoid, Deformation, HorizonPoint, RotoidData, RotoidMetric, H0,
};
pub use oscillator::{
    oscillator_residual, oscillator_series, SeriesSolution, SeriesSummary, DEFAULT_TRUNCATION,
};
pub use prime::{
    horizon_radii, prime_schwarzschild, uniform_xi_radii, varpi2, PrimeData, HORIZON_MARGIN,
};
pub use soliton::{soliton_residual, solitonic_eta, SolitonOptions, SolitonSolution, VBoundary};
