use super::gamma::{gamma, recip_gamma};
use crate::error::{domain, Result};

/// Closed-form Caputo derivative of (x - t)^beta:
/// Gamma(beta + 1) / Gamma(beta + 1 - alpha) (x - t)^(beta - alpha).
///
/// Integer exponents below the ceiling s = 1 (that is, beta = 0) give 0.
pub fn caputo_power_rule(alpha: f64, beta: f64, x: f64, terminal: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return domain(format!("order must lie in (0, 1], got {alpha}"));
    }
    if !x.is_finite() || !terminal.is_finite() || x < terminal {
        return domain(format!(
            "need terminal <= x, got x = {x}, terminal = {terminal}"
        ));
    }
    if beta == 0.0 {
        return Ok(0.0);
    }
    if !(beta > alpha - 1.0) || !(beta > 0.0) {
        return domain(format!(
            "power rule needs beta > 0 (and beta > alpha - 1), got {beta}"
        ));
    }
    let d = x - terminal;
    if d == 0.0 {
        return Ok(if beta > alpha {
            0.0
        } else if beta == alpha {
            gamma(beta + 1.0)?
        } else {
            f64::INFINITY
        });
    }
    Ok(gamma(beta + 1.0)? * recip_gamma(beta + 1.0 - alpha) * d.powf(beta - alpha))
}
