//! Gamma function by a fixed-coefficient Lanczos approximation.
//!
//! Coefficients are the g = 10.900511, n = 11 set tabulated by Pugh (2004,
//! "An Analysis of the Lanczos Gamma Approximation", p. 116), the same set
//! shipped by the statrs crate.

use std::f64::consts::{E, PI};

use crate::error::{domain, Result};

const LANCZOS_G: f64 = 10.900511;

#[allow(clippy::excessive_precision)]
const LANCZOS_DK: [f64; 11] = [
    2.48574089138753565546e-5,
    1.05142378581721974210,
    -3.45687097222016235469,
    4.51227709466894823700,
    -2.98285225323576655721,
    1.05639711577126713077,
    -1.95428773191645869583e-1,
    1.70970543404441224307e-2,
    -5.71926117404305781283e-4,
    4.63399473359905636708e-6,
    -2.71994908488607703910e-9,
];

const TWO_SQRT_E_OVER_PI: f64 = 1.860_382_734_205_265_7;

fn lanczos_sum(x: f64) -> f64 {
    LANCZOS_DK
        .iter()
        .enumerate()
        .skip(1)
        .fold(LANCZOS_DK[0], |s, (i, &dk)| s + dk / (x + i as f64 - 1.0))
}

/// Gamma on any real argument that is not a pole.
fn gamma_raw(x: f64) -> f64 {
    if (1.0..=171.0).contains(&x) && x == x.floor() {
        return (2..x as u32).fold(1.0, |p, k| p * k as f64);
    }
    if x < 0.5 {
        PI / ((PI * x).sin() * gamma_raw(1.0 - x))
    } else {
        lanczos_sum(x) * TWO_SQRT_E_OVER_PI * ((x - 0.5 + LANCZOS_G) / E).powf(x - 0.5)
    }
}

/// Gamma(x) for x > 0.
pub fn gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return domain(format!(
            "gamma requires a positive finite argument, got {x}"
        ));
    }
    Ok(gamma_raw(x))
}

/// ln Gamma(x) for x > 0; stays finite where Gamma itself overflows.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return domain(format!(
            "ln_gamma requires a positive finite argument, got {x}"
        ));
    }
    Ok(ln_gamma_pos(x))
}

pub(crate) fn ln_gamma_pos(x: f64) -> f64 {
    if x < 0.5 {
        PI.ln() - (PI * x).sin().ln() - ln_gamma_pos(1.0 - x)
    } else {
        lanczos_sum(x).ln() + TWO_SQRT_E_OVER_PI.ln() + (x - 0.5) * ((x - 0.5 + LANCZOS_G) / E).ln()
    }
}

/// 1/Gamma(x), an entire function: exactly zero at 0, -1, -2, ...
pub fn recip_gamma(x: f64) -> f64 {
    if x <= 0.0 && x == x.floor() {
        return 0.0;
    }
    1.0 / gamma_raw(x)
}
