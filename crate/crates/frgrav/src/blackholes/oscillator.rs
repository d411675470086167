//! One-dimensional fractional oscillator RL∂ᵅ(ρ*) + ¹z ρ* = ²z on a v axis.
//!
//! With u = ρ* the equation is the Volterra problem u = Iᵅ²z − Iᵅ[¹z u],
//! expanded as a Neumann series, and ρ = Iᵅu + ¹c(v − ¹v) + ²c.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fraccore::{recip_gamma, FracOrder, SampledField};

pub const DEFAULT_TRUNCATION: usize = 8;

#[derive(Debug, Clone)]
pub struct SeriesSolution {
    pub rho: SampledField,
    /// ρ* summed to the truncation order.
    pub u: SampledField,
    pub z1: SampledField,
    pub z2: SampledField,
    pub c1: f64,
    pub c2: f64,
    /// The v terminal ¹v.
    pub v1: f64,
    pub order: usize,
    pub alpha: f64,
    /// Max norm of each series term, p = 0..=order.
    pub term_norms: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SeriesSummary {
    pub order: usize,
    pub alpha: f64,
    pub c1: f64,
    pub c2: f64,
    pub v1: f64,
    pub term_norms: Vec<f64>,
    pub last_term: f64,
}

impl SeriesSolution {
    pub fn last_term(&self) -> f64 {
        *self.term_norms.last().unwrap_or(&0.0)
    }

    pub fn summary(&self) -> SeriesSummary {
        SeriesSummary {
            order: self.order,
            alpha: self.alpha,
            c1: self.c1,
            c2: self.c2,
            v1: self.v1,
            term_norms: self.term_norms.clone(),
            last_term: self.last_term(),
        }
    }
}

fn one_axis(f: &SampledField, what: &str) -> Result<()> {
    if f.ndim() != 1 {
        return Err(Error::Shape(format!("{what} must be a function of v only")));
    }
    Ok(())
}

pub fn oscillator_series(
    z1: &SampledField,
    z2: &SampledField,
    ord: FracOrder,
    c1: f64,
    c2: f64,
    order: usize,
) -> Result<SeriesSolution> {
    one_axis(z1, "z1")?;
    one_axis(z2, "z2")?;
    if !z1.same_grid(z2) {
        return Err(Error::Shape("z1 and z2 must share the v grid".into()));
    }
    if order < 1 {
        return Err(Error::Precondition(
            "truncation order must be at least 1".into(),
        ));
    }
    if let Some(k) = z1.values().iter().position(|z| *z == 0.0 || !z.is_finite()) {
        return Err(Error::Precondition(format!(
            "z1 vanishes at v = {}",
            z1.axis(0).nodes()[k]
        )));
    }
    let mut term = z2.integral_axis(0, ord)?;
    let mut sum = term.clone();
    let mut norms = vec![term.max_abs()];
    let mut growing = 0;
    for p in 1..=order {
        let prod = z1.zip_with(&term, |a, b| a * b)?;
        term = prod.integral_axis(0, ord)?.map(|x| -x);
        let n = term.max_abs();
        if !n.is_finite() {
            return Err(Error::Divergence { term: p });
        }
        growing = if n > norms[p - 1] && n > 0.0 {
            growing + 1
        } else {
            0
        };
        norms.push(n);
        if growing == 3 {
            return Err(Error::Divergence { term: p });
        }
        sum = sum.zip_with(&term, |a, b| a + b)?;
    }
    let g = z1.axis(0);
    let v1 = g.terminal();
    let iu = sum.integral_axis(0, ord)?;
    let vals: Vec<f64> = g
        .nodes()
        .iter()
        .zip(iu.values())
        .map(|(v, i)| i + c1 * (v - v1) + c2)
        .collect();
    Ok(SeriesSolution {
        rho: z1.with_values(vals)?,
        u: sum,
        z1: z1.clone(),
        z2: z2.clone(),
        c1,
        c2,
        v1,
        order,
        alpha: ord.alpha(),
        term_norms: norms,
    })
}

/// Substitution residual RL∂ᵅ(ρ*) + ¹z ρ* − ²z with ρ* the Caputo derivative
/// of the sampled ρ. Nodes sitting on the terminal, where the RL derivative
/// is singular, are reported as zero.
pub fn oscillator_residual(s: &SeriesSolution) -> Result<SampledField> {
    let ord = FracOrder::new(s.alpha)?;
    let g = s.rho.axis(0);
    let nodes = g.nodes();
    let t = g.terminal();
    let u = s.rho.caputo_axis(0, ord)?;
    let cu = u.caputo_axis(0, ord)?;
    let uv = u.values();
    let ut = uv[0] + (uv[1] - uv[0]) / (nodes[1] - nodes[0]) * (t - nodes[0]);
    let a = ord.alpha();
    let out: Vec<f64> = (0..nodes.len())
        .map(|k| {
            let x = nodes[k] - t;
            let rl = if ord.is_integer() {
                cu.values()[k]
            } else if x <= 0.0 {
                return 0.0;
            } else {
                cu.values()[k] + ut * x.powf(-a) * recip_gamma(1.0 - a)
            };
            rl + s.z1.values()[k] * uv[k] - s.z2.values()[k]
        })
        .collect();
    s.rho.with_values(out)
}
