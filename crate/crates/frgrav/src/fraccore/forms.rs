use serde::{Deserialize, Serialize};

use super::{FracOrder, SampledField};
use crate::error::{Error, Result};

/// Fractional 1-form sum_i w_i (dx^i)^alpha, one coefficient per grid axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OneForm {
    coeffs: Vec<SampledField>,
}

impl OneForm {
    pub fn new(coeffs: Vec<SampledField>) -> Result<Self> {
        let first = coeffs
            .first()
            .ok_or_else(|| Error::Shape("empty 1-form".into()))?;
        if coeffs.len() != first.ndim() {
            return Err(Error::Shape(format!(
                "{} coefficients for a {}-axis grid",
                coeffs.len(),
                first.ndim()
            )));
        }
        if coeffs.iter().any(|c| !c.same_grid(first)) {
            return Err(Error::Shape(
                "1-form coefficients on different grids".into(),
            ));
        }
        Ok(Self { coeffs })
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, i: usize) -> &SampledField {
        &self.coeffs[i]
    }
}

/// Fractional 2-form. Only the pairs i < j are stored, so w_ij = -w_ji holds
/// bit for bit and the diagonal is identically zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoForm {
    dim: usize,
    upper: Vec<SampledField>,
    zero: SampledField,
}

impl TwoForm {
    fn slot(dim: usize, i: usize, j: usize) -> usize {
        // row-major index into the strict upper triangle
        i * dim - i * (i + 1) / 2 + (j - i - 1)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Coefficient w_ij.
    pub fn coeff(&self, i: usize, j: usize) -> SampledField {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Less => self.upper[Self::slot(self.dim, i, j)].clone(),
            Greater => self.upper[Self::slot(self.dim, j, i)].map(|v| -v),
            Equal => self.zero.clone(),
        }
    }
}

/// Input and output of the fractional exterior derivative.
#[derive(Debug, Clone, PartialEq)]
pub enum Form {
    Zero(SampledField),
    One(OneForm),
    Two(TwoForm),
}

/// d f = sum_i (D^alpha_i f) (dx^i)^alpha for a 0-form, and
/// d w = sum_{i<j} (D_i w_j - D_j w_i) (dx^i)^alpha ^ (dx^j)^alpha for a 1-form.
pub fn exterior_derivative(w: &Form, ord: FracOrder) -> Result<Form> {
    match w {
        Form::Zero(f) => {
            let coeffs = (0..f.ndim())
                .map(|i| f.caputo_axis(i, ord))
                .collect::<Result<Vec<_>>>()?;
            Ok(Form::One(OneForm::new(coeffs)?))
        }
        Form::One(o) => {
            let n = o.dim();
            if n < 2 {
                return Err(Error::Shape("a 2-form needs at least two axes".into()));
            }
            let mut upper = Vec::with_capacity(n * (n - 1) / 2);
            for i in 0..n {
                for j in (i + 1)..n {
                    let dij = o.coeff(j).caputo_axis(i, ord)?;
                    let dji = o.coeff(i).caputo_axis(j, ord)?;
                    upper.push(dij.zip_with(&dji, |a, b| a - b)?);
                }
            }
            let zero = o.coeff(0).map(|_| 0.0);
            Ok(Form::Two(TwoForm {
                dim: n,
                upper,
                zero,
            }))
        }
        Form::Two(_) => Err(Error::Shape(
            "exterior derivative of a 2-form is not provided".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fraccore::Grid1D;

    fn grid2() -> Vec<Grid1D> {
        vec![
            Grid1D::uniform(0.0, 1.0, 9).unwrap(),
            Grid1D::uniform(0.0, 2.0, 11).unwrap(),
        ]
    }

    #[test]
    fn constants_give_zero_forms() {
        let h = FracOrder::new(0.5).unwrap();
        let f = SampledField::constant(grid2(), 3.0).unwrap();
        let Form::One(d) = exterior_derivative(&Form::Zero(f.clone()), h).unwrap() else {
            panic!()
        };
        assert!(d.coeff(0).max_abs() < 1e-12 && d.coeff(1).max_abs() < 1e-12);
        let o = OneForm::new(vec![f.clone(), f]).unwrap();
        let Form::Two(t) = exterior_derivative(&Form::One(o), h).unwrap() else {
            panic!()
        };
        assert!(t.coeff(0, 1).max_abs() < 1e-12);
    }

    #[test]
    fn antisymmetry_is_exact() {
        let g = vec![Grid1D::uniform(0.0, 1.0, 7).unwrap(); 3];
        let h = FracOrder::new(0.7).unwrap();
        let a = SampledField::from_fn(g.clone(), |c| c[0] * c[1] + c[2].sin()).unwrap();
        let b = SampledField::from_fn(g.clone(), |c| c[2] * c[0].exp()).unwrap();
        let c = SampledField::from_fn(g, |c| c[1] * c[1] - c[0]).unwrap();
        let Form::Two(t) =
            exterior_derivative(&Form::One(OneForm::new(vec![a, b, c]).unwrap()), h).unwrap()
        else {
            panic!()
        };
        for i in 0..3 {
            assert!(t.coeff(i, i).values().iter().all(|&v| v == 0.0));
            for j in 0..3 {
                let s = t
                    .coeff(i, j)
                    .zip_with(&t.coeff(j, i), |x, y| x + y)
                    .unwrap();
                assert!(s.values().iter().all(|&v| v == 0.0));
            }
        }
    }

    #[test]
    fn single_axis_two_form_is_shape_error() {
        let f = SampledField::constant(vec![Grid1D::uniform(0.0, 1.0, 5).unwrap()], 1.0).unwrap();
        let o = OneForm::new(vec![f]).unwrap();
        assert!(matches!(
            exterior_derivative(&Form::One(o), FracOrder::integer()),
            Err(Error::Shape(_))
        ));
    }
}
