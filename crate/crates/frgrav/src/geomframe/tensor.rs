use serde::{Deserialize, Serialize};

use crate::fraccore::SampledField;

/// Three-index object T^a_bc over the four N-adapted directions, one field per
/// component (index 0..4 each).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tensor3 {
    comps: Vec<SampledField>,
}

impl Tensor3 {
    pub fn zeros(like: &SampledField) -> Self {
        Self {
            comps: vec![like.map(|_| 0.0); 64],
        }
    }

    pub fn get(&self, a: usize, b: usize, c: usize) -> &SampledField {
        &self.comps[a * 16 + b * 4 + c]
    }

    pub fn set(&mut self, a: usize, b: usize, c: usize, f: SampledField) {
        self.comps[a * 16 + b * 4 + c] = f;
    }

    pub fn max_abs(&self) -> f64 {
        self.comps.iter().fold(0.0, |m, f| m.max(f.max_abs()))
    }

    /// Largest |T| over the nodes selected by `keep`.
    pub fn max_abs_where(&self, keep: &[bool]) -> f64 {
        self.comps
            .iter()
            .fold(0.0, |m, f| m.max(masked_max(f, keep)))
    }

    pub fn sub(&self, other: &Tensor3) -> Tensor3 {
        Tensor3 {
            comps: self
                .comps
                .iter()
                .zip(&other.comps)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

/// Two-index object T_ab, index 0..4 each.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tensor2 {
    comps: Vec<SampledField>,
}

impl Tensor2 {
    pub fn zeros(like: &SampledField) -> Self {
        Self {
            comps: vec![like.map(|_| 0.0); 16],
        }
    }

    pub fn get(&self, a: usize, b: usize) -> &SampledField {
        &self.comps[a * 4 + b]
    }

    pub fn set(&mut self, a: usize, b: usize, f: SampledField) {
        self.comps[a * 4 + b] = f;
    }

    pub fn max_abs(&self) -> f64 {
        self.comps.iter().fold(0.0, |m, f| m.max(f.max_abs()))
    }

    pub fn max_abs_where(&self, keep: &[bool]) -> f64 {
        self.comps
            .iter()
            .fold(0.0, |m, f| m.max(masked_max(f, keep)))
    }
}

pub(crate) fn masked_max(f: &SampledField, keep: &[bool]) -> f64 {
    f.values()
        .iter()
        .zip(keep)
        .filter(|(_, &k)| k)
        .fold(0.0, |m, (v, _)| m.max(v.abs()))
}
