use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Fractional order alpha in (0, 1], so the integer ceiling s is always 1.
///
/// Lower terminals are carried by each [`Grid1D`](super::Grid1D), one per axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct FracOrder {
    alpha: f64,
}

impl FracOrder {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return domain(format!("fractional order must lie in (0, 1], got {alpha}"));
        }
        Ok(Self { alpha })
    }

    /// The integer order alpha = 1.
    pub fn integer() -> Self {
        Self { alpha: 1.0 }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn is_integer(&self) -> bool {
        self.alpha == 1.0
    }
}

impl TryFrom<f64> for FracOrder {
    type Error = crate::error::Error;
    fn try_from(alpha: f64) -> Result<Self> {
        Self::new(alpha)
    }
}

impl From<FracOrder> for f64 {
    fn from(o: FracOrder) -> f64 {
        o.alpha
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_is_half_open() {
        assert!(FracOrder::new(1.0).is_ok());
        assert!(FracOrder::new(1e-9).is_ok());
        assert!(FracOrder::new(0.0).is_err());
        assert!(FracOrder::new(1.5).is_err());
        assert!(FracOrder::new(f64::NAN).is_err());
    }
}
