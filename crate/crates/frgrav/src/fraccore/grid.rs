use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::kernel::LineOperator;
use super::FracOrder;
use crate::error::{domain, Error, Result};

/// Strictly increasing nodes with a lower terminal at or below the first node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    nodes: Vec<f64>,
    terminal: f64,
}

impl Grid1D {
    pub fn new(nodes: Vec<f64>, terminal: f64) -> Result<Self> {
        if nodes.is_empty() {
            return domain("grid needs at least one node");
        }
        if nodes.iter().any(|x| !x.is_finite()) || !terminal.is_finite() {
            return domain("grid nodes and terminal must be finite");
        }
        if nodes.windows(2).any(|w| w[1] <= w[0]) {
            return domain("grid nodes must be strictly increasing");
        }
        if terminal > nodes[0] {
            return domain(format!(
                "terminal {terminal} lies above the first node {}",
                nodes[0]
            ));
        }
        Ok(Self { nodes, terminal })
    }

    /// `n` equispaced nodes on [a, b] with terminal a.
    pub fn uniform(a: f64, b: f64, n: usize) -> Result<Self> {
        if n < 2 || !(b > a) {
            return domain(format!(
                "uniform grid needs n >= 2 and b > a (n={n}, a={a}, b={b})"
            ));
        }
        let h = (b - a) / (n - 1) as f64;
        let mut nodes: Vec<f64> = (0..n).map(|i| a + h * i as f64).collect();
        nodes[n - 1] = b;
        Self::new(nodes, a)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn terminal(&self) -> f64 {
        self.terminal
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn first(&self) -> f64 {
        self.nodes[0]
    }

    pub fn last(&self) -> f64 {
        self.nodes[self.nodes.len() - 1]
    }

    /// Mirror image x -> (first + last) - x, with the old upper end as terminal.
    pub fn reflected(&self) -> Self {
        let s = self.first() + self.last();
        let nodes: Vec<f64> = self.nodes.iter().rev().map(|x| s - x).collect();
        let terminal = nodes[0];
        Self { nodes, terminal }
    }

    /// Index k and weight t with x = (1 - t) x_k + t x_{k+1}.
    pub(crate) fn locate(&self, x: f64) -> Result<(usize, f64)> {
        let n = self.nodes.len();
        if !(x >= self.first() && x <= self.last()) {
            return domain(format!(
                "x = {x} outside [{}, {}]",
                self.first(),
                self.last()
            ));
        }
        if n == 1 {
            return Ok((0, 0.0));
        }
        let k = match self.nodes.binary_search_by(|p| p.partial_cmp(&x).unwrap()) {
            Ok(i) => return Ok((i.min(n - 2), if i == n - 1 { 1.0 } else { 0.0 })),
            Err(i) => i - 1,
        };
        let t = (x - self.nodes[k]) / (self.nodes[k + 1] - self.nodes[k]);
        Ok((k, t))
    }
}

/// A scalar sampled on a tensor-product grid of one to three axes.
///
/// Values are stored row-major with the last axis fastest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledField {
    axes: Vec<Grid1D>,
    values: Vec<f64>,
}

impl SampledField {
    pub fn new(axes: Vec<Grid1D>, values: Vec<f64>) -> Result<Self> {
        if axes.is_empty() || axes.len() > 3 {
            return Err(Error::Shape(format!(
                "1 to 3 axes supported, got {}",
                axes.len()
            )));
        }
        let n: usize = axes.iter().map(Grid1D::len).product();
        if values.len() != n {
            return Err(Error::Shape(format!(
                "expected {n} values, got {}",
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return domain(format!("non-finite value at flat index {i}"));
        }
        Ok(Self { axes, values })
    }

    pub(crate) fn from_parts(axes: Vec<Grid1D>, values: Vec<f64>) -> Self {
        debug_assert_eq!(
            values.len(),
            axes.iter().map(Grid1D::len).product::<usize>()
        );
        Self { axes, values }
    }

    pub fn from_fn(axes: Vec<Grid1D>, f: impl Fn(&[f64]) -> f64) -> Result<Self> {
        let shape: Vec<usize> = axes.iter().map(Grid1D::len).collect();
        let n: usize = shape.iter().product();
        let mut values = Vec::with_capacity(n);
        let mut idx = vec![0usize; axes.len()];
        let mut coord = vec![0.0; axes.len()];
        for flat in 0..n {
            unflatten(flat, &shape, &mut idx);
            for (a, i) in idx.iter().enumerate() {
                coord[a] = axes[a].nodes[*i];
            }
            values.push(f(&coord));
        }
        Self::new(axes, values)
    }

    pub fn constant(axes: Vec<Grid1D>, c: f64) -> Result<Self> {
        let n = axes.iter().map(Grid1D::len).product();
        Self::new(axes, vec![c; n])
    }

    pub fn axes(&self) -> &[Grid1D] {
        &self.axes
    }

    pub fn axis(&self, a: usize) -> &Grid1D {
        &self.axes[a]
    }

    pub fn ndim(&self) -> usize {
        self.axes.len()
    }

    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(Grid1D::len).collect()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, idx: &[usize]) -> f64 {
        self.values[flatten(idx, &self.shape())]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn same_grid(&self, other: &SampledField) -> bool {
        self.axes == other.axes
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self::from_parts(
            self.axes.clone(),
            self.values.iter().map(|&v| f(v)).collect(),
        )
    }

    /// Nodewise combination of two fields on the same grid.
    pub fn zip_with(&self, other: &SampledField, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if !self.same_grid(other) {
            return Err(Error::Shape("fields live on different grids".into()));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Ok(Self::from_parts(self.axes.clone(), values))
    }

    /// Field with the given values on this field's grid.
    pub fn with_values(&self, values: Vec<f64>) -> Result<Self> {
        Self::new(self.axes.clone(), values)
    }

    /// Left Caputo derivative along one axis, evaluated at every node.
    pub fn caputo_axis(&self, axis: usize, ord: FracOrder) -> Result<Self> {
        let g = self.check_axis(axis)?;
        let op = LineOperator::caputo(g.nodes(), g.terminal(), ord.alpha());
        Ok(self.apply_along(axis, &op))
    }

    /// Riemann-Liouville integral along one axis from the axis terminal.
    pub fn integral_axis(&self, axis: usize, ord: FracOrder) -> Result<Self> {
        let g = self.check_axis(axis)?;
        let op = LineOperator::integral(g.nodes(), g.terminal(), ord.alpha());
        Ok(self.apply_along(axis, &op))
    }

    fn check_axis(&self, axis: usize) -> Result<&Grid1D> {
        self.axes.get(axis).ok_or_else(|| {
            Error::Shape(format!(
                "axis {axis} out of range for a {}-axis field",
                self.ndim()
            ))
        })
    }

    pub(crate) fn apply_along(&self, axis: usize, op: &LineOperator) -> Self {
        let shape = self.shape();
        let n = shape[axis];
        let stride: usize = shape[axis + 1..].iter().product();
        let outer: usize = shape[..axis].iter().product();
        let bases: Vec<usize> = (0..outer)
            .flat_map(|o| (0..stride).map(move |s| o * n * stride + s))
            .collect();
        let lines: Vec<Vec<f64>> = bases
            .par_iter()
            .map(|&b| {
                let line: Vec<f64> = (0..n).map(|k| self.values[b + k * stride]).collect();
                let mut out = vec![0.0; n];
                op.apply(&line, &mut out);
                out
            })
            .collect();
        let mut values = vec![0.0; self.values.len()];
        for (b, line) in bases.iter().zip(lines) {
            for (k, v) in line.into_iter().enumerate() {
                values[b + k * stride] = v;
            }
        }
        Self::from_parts(self.axes.clone(), values)
    }

    /// Values along `axis` with every other index fixed by `idx`.
    pub fn line(&self, axis: usize, idx: &[usize]) -> Vec<f64> {
        let shape = self.shape();
        let mut i = idx.to_vec();
        (0..shape[axis])
            .map(|k| {
                i[axis] = k;
                self.values[flatten(&i, &shape)]
            })
            .collect()
    }
}

pub(crate) fn flatten(idx: &[usize], shape: &[usize]) -> usize {
    idx.iter().zip(shape).fold(0, |acc, (i, n)| acc * n + i)
}

pub(crate) fn unflatten(mut flat: usize, shape: &[usize], idx: &mut [usize]) {
    for a in (0..shape.len()).rev() {
        idx[a] = flat % shape[a];
        flat /= shape[a];
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_invariants() {
        assert!(Grid1D::new(vec![0.0, 1.0, 1.0], 0.0).is_err());
        assert!(Grid1D::new(vec![0.5, 1.0], 0.6).is_err());
        assert!(Grid1D::new(vec![0.5, 1.0], 0.0).is_ok());
        let g = Grid1D::uniform(0.0, 2.0, 5).unwrap();
        assert_eq!(g.nodes(), &[0.0, 0.5, 1.0, 1.5, 2.0]);
        assert_eq!(g.locate(1.25).unwrap(), (2, 0.5));
        assert_eq!(g.locate(2.0).unwrap(), (3, 1.0));
        assert!(g.locate(2.1).is_err());
    }

    #[test]
    fn field_shape_and_finiteness() {
        let g = Grid1D::uniform(0.0, 1.0, 3).unwrap();
        assert!(SampledField::new(vec![g.clone(), g.clone()], vec![0.0; 8]).is_err());
        assert!(SampledField::new(vec![g.clone()], vec![0.0, f64::NAN, 1.0]).is_err());
        let f = SampledField::from_fn(vec![g.clone(), g], |c| c[0] + 10.0 * c[1]).unwrap();
        assert_eq!(f.get(&[2, 1]), 1.0 + 5.0);
        assert_eq!(f.line(0, &[0, 1]), vec![5.0, 5.5, 6.0]);
    }

    #[test]
    fn axis_derivative_acts_on_one_axis() {
        let gx = Grid1D::uniform(0.0, 1.0, 11).unwrap();
        let gv = Grid1D::uniform(0.0, 2.0, 21).unwrap();
        let f = SampledField::from_fn(vec![gx, gv], |c| c[0] * c[0] + 3.0 * c[1]).unwrap();
        let one = FracOrder::integer();
        let dv = f.caputo_axis(1, one).unwrap();
        assert!(dv.values().iter().all(|v| (v - 3.0).abs() < 1e-12));
        let dx = f.caputo_axis(0, one).unwrap();
        for i in 0..11 {
            let x = i as f64 * 0.1;
            assert!((dx.get(&[i, 7]) - 2.0 * x).abs() < 1e-12);
        }
    }

    #[test]
    fn reflection_swaps_ends() {
        let g = Grid1D::new(vec![0.0, 0.25, 1.0], 0.0).unwrap();
        let r = g.reflected();
        assert_eq!(r.nodes(), &[0.0, 0.75, 1.0]);
        assert_eq!(r.terminal(), 0.0);
    }
}
