//! Pointwise fractional operators on one-dimensional sampled functions.
//!
//! Off-node points get a virtual node carrying the quadratic interpolant of
//! the samples; memory operators then use the grid truncated at that node.
//! Points between the terminal and the first node are handled by continuing
//! the first linear piece of the sampled function.

use super::gamma::recip_gamma;
use super::kernel::{caputo_row, integral_row};
use super::{FracOrder, Grid1D, SampledField};
use crate::error::{domain, Error, Result};

fn single_axis(f: &SampledField) -> Result<(&Grid1D, &[f64])> {
    if f.ndim() != 1 {
        return Err(Error::Shape(format!(
            "expected a 1-axis field, got {} axes",
            f.ndim()
        )));
    }
    if f.len() < 2 {
        return Err(Error::Shape("need at least two samples".into()));
    }
    Ok((f.axis(0), f.values()))
}

fn row_dot(row: &[f64], f: &[f64]) -> f64 {
    row.iter().zip(f).map(|(c, v)| c * v).sum()
}

/// Quadratic interpolant through three consecutive samples around x.
fn quadratic_at(nodes: &[f64], f: &[f64], k: usize, x: f64) -> f64 {
    if nodes.len() < 3 {
        let t = (x - nodes[0]) / (nodes[1] - nodes[0]);
        return (1.0 - t) * f[0] + t * f[1];
    }
    let s = k.saturating_sub(1).min(nodes.len() - 3);
    let (a, b, c) = (nodes[s], nodes[s + 1], nodes[s + 2]);
    f[s] * (x - b) * (x - c) / ((a - b) * (a - c))
        + f[s + 1] * (x - a) * (x - c) / ((b - a) * (b - c))
        + f[s + 2] * (x - a) * (x - b) / ((c - a) * (c - b))
}

/// Evaluate a nodal operator at x: at nodes directly, below the first node on
/// an auxiliary grid that starts at x, otherwise either on the grid cut at a
/// virtual node x (`cut`) or by linear interpolation of the two nodal values.
fn at_point(
    g: &Grid1D,
    f: &[f64],
    x: f64,
    cut: bool,
    row: impl Fn(&[f64], f64, usize, &mut [f64]),
) -> Result<f64> {
    let nodes = g.nodes();
    let n = nodes.len();
    let mut buf = vec![0.0; n];
    if x < g.first() {
        if x < g.terminal() {
            return domain(format!("x = {x} lies below the terminal {}", g.terminal()));
        }
        // Only the continued first linear piece contributes.
        let slope = (f[1] - f[0]) / (nodes[1] - nodes[0]);
        let fx = f[0] + slope * (x - nodes[0]);
        let aux = [x, nodes[0]];
        let vals = [fx, f[0]];
        let mut r = [0.0; 2];
        row(&aux, g.terminal(), 0, &mut r);
        return Ok(row_dot(&r, &vals));
    }
    let (k, t) = g.locate(x)?;
    if t != 0.0 && cut {
        let mut aux = nodes[..=k].to_vec();
        aux.push(x);
        let mut vals = f[..=k].to_vec();
        vals.push(quadratic_at(nodes, f, k, x));
        let mut r = vec![0.0; k + 2];
        row(&aux, g.terminal(), k + 1, &mut r);
        return Ok(row_dot(&r, &vals));
    }
    row(nodes, g.terminal(), k, &mut buf);
    let lo = row_dot(&buf, f);
    if t == 0.0 {
        return Ok(lo);
    }
    row(nodes, g.terminal(), k + 1, &mut buf);
    let hi = row_dot(&buf, f);
    Ok((1.0 - t) * lo + t * hi)
}

/// Left Caputo derivative of order alpha at x, from the grid terminal.
pub fn caputo_left(f: &SampledField, ord: FracOrder, x: f64) -> Result<f64> {
    let (g, v) = single_axis(f)?;
    if x > g.last() {
        return domain(format!("x = {x} lies above the last node {}", g.last()));
    }
    let a = ord.alpha();
    at_point(g, v, x, !ord.is_integer(), |nodes, t, k, out| {
        caputo_row(nodes, t, a, k, out)
    })
}

/// Right Caputo derivative with upper terminal at the last node.
///
/// Reflection x -> (first + last) - x turns it into a left derivative;
/// the factor (-1)^s with s = 1 is already absorbed by the reflection.
pub fn caputo_right(f: &SampledField, ord: FracOrder, x: f64) -> Result<f64> {
    let (g, v) = single_axis(f)?;
    if x < g.first() || x > g.last() {
        return domain(format!("x = {x} outside [{}, {}]", g.first(), g.last()));
    }
    let r = g.reflected();
    let vals: Vec<f64> = v.iter().rev().copied().collect();
    let mirrored = SampledField::from_parts(vec![r], vals);
    caputo_left(&mirrored, ord, g.first() + g.last() - x)
}

/// Left Riemann-Liouville derivative: Caputo plus the terminal term
/// f(t) (x - t)^(-alpha) / Gamma(1 - alpha), which vanishes at alpha = 1.
pub fn rl_left_derivative(f: &SampledField, ord: FracOrder, x: f64) -> Result<f64> {
    let (g, v) = single_axis(f)?;
    let c = caputo_left(f, ord, x)?;
    let a = ord.alpha();
    if ord.is_integer() {
        return Ok(c);
    }
    if x == g.terminal() {
        return domain("the Riemann-Liouville derivative is singular at the terminal");
    }
    let nodes = g.nodes();
    let ft = v[0] + (v[1] - v[0]) / (nodes[1] - nodes[0]) * (g.terminal() - nodes[0]);
    Ok(c + ft * (x - g.terminal()).powf(-a) * recip_gamma(1.0 - a))
}

/// Riemann-Liouville integral of order alpha from the grid terminal to x.
pub fn rl_integral(f: &SampledField, ord: FracOrder, x: f64) -> Result<f64> {
    let (g, v) = single_axis(f)?;
    if x > g.last() {
        return domain(format!("x = {x} lies above the last node {}", g.last()));
    }
    let a = ord.alpha();
    at_point(g, v, x, true, |nodes, t, k, out| {
        integral_row(nodes, t, a, k, out)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(n: usize, a: f64, b: f64, f: impl Fn(f64) -> f64) -> SampledField {
        let g = Grid1D::uniform(a, b, n).unwrap();
        SampledField::from_fn(vec![g], |c| f(c[0])).unwrap()
    }

    #[test]
    fn integer_order_is_ordinary_derivative() {
        let f = field(101, 0.0, 1.0, |x| x);
        assert!((caputo_left(&f, FracOrder::integer(), 0.5).unwrap() - 1.0).abs() < 1e-12);
        let s = field(1025, 0.0, 2.0, f64::sin);
        let d = caputo_left(&s, FracOrder::integer(), 1.0).unwrap();
        assert!((d - 1f64.cos()).abs() < 1e-12);
    }

    #[test]
    fn right_derivative_sign() {
        let f = field(201, 0.0, 1.0, |x| 1.0 - x);
        let d = caputo_right(&f, FracOrder::integer(), 0.3).unwrap();
        assert!((d - 1.0).abs() < 1e-12);
        let c = field(50, 0.0, 1.0, |_| 4.2);
        assert!(
            caputo_right(&c, FracOrder::new(0.4).unwrap(), 0.1)
                .unwrap()
                .abs()
                < 1e-12
        );
    }

    #[test]
    fn rl_of_constant_is_power() {
        let one = field(64, 0.0, 1.0, |_| 1.0);
        let h = FracOrder::new(0.5).unwrap();
        let d = rl_left_derivative(&one, h, 1.0).unwrap();
        assert!((d - 0.564_189_583_547_756_3).abs() < 1e-12);
        assert!(
            rl_left_derivative(&one, FracOrder::integer(), 0.5)
                .unwrap()
                .abs()
                < 1e-12
        );
    }

    #[test]
    fn domain_errors() {
        let f = field(10, 0.5, 1.0, |x| x);
        let h = FracOrder::new(0.5).unwrap();
        assert!(caputo_left(&f, h, 1.1).is_err());
        assert!(rl_integral(&f, h, 0.4).is_err());
        assert!(caputo_right(&f, h, 0.4).is_err());
    }

    #[test]
    fn below_first_node_uses_continued_piece() {
        // f(x) = x on nodes starting at 0.5 with terminal 0: exactly linear everywhere.
        let g = Grid1D::new((0..11).map(|i| 0.5 + 0.05 * i as f64).collect(), 0.0).unwrap();
        let f = SampledField::from_fn(vec![g], |c| c[0]).unwrap();
        let h = FracOrder::new(0.5).unwrap();
        let expect = 0.2f64.sqrt() / crate::fraccore::gamma(1.5).unwrap();
        assert!((caputo_left(&f, h, 0.2).unwrap() - expect).abs() < 1e-12);
        assert!((rl_integral(&f, FracOrder::integer(), 0.2).unwrap() - 0.02).abs() < 1e-14);
    }
}
