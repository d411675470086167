use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fraccore::kernel::LineOperator;
use crate::fraccore::{mittag_leffler, FracOrder, SampledField};

/// Largest horizontal grid handled by the dense direct solve.
pub const PSI_MAX_UNKNOWNS: usize = 4096;
const PSI_TOL: f64 = 1e-9;
const REFINE_STEPS: usize = 3;

/// Dirichlet data on the edge of the (x^1, x^2) chart.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PsiBoundary {
    Constant(f64),
    /// Edge nodes of this 2-axis field are used; interior values are ignored.
    Values(SampledField),
}

impl Default for PsiBoundary {
    fn default() -> Self {
        PsiBoundary::Constant(0.0)
    }
}

fn second_derivative(nodes: &[f64], terminal: f64, alpha: f64) -> DMatrix<f64> {
    let n = nodes.len();
    let d = DMatrix::from_row_slice(n, n, LineOperator::caputo(nodes, terminal, alpha).matrix());
    &d * &d
}

/// Solves D_1 D_1 psi + D_2 D_2 psi = 2 Y4 with Dirichlet edges, the second
/// derivatives being composed Caputo derivatives.
pub fn solve_psi(src4: &SampledField, bc: &PsiBoundary, ord: FracOrder) -> Result<SampledField> {
    if src4.ndim() != 2 {
        return Err(Error::Shape("the psi source lives on (x1, x2)".into()));
    }
    if let PsiBoundary::Values(b) = bc {
        if !b.same_grid(src4) {
            return Err(Error::Shape(
                "boundary field and source on different grids".into(),
            ));
        }
    }
    let (ax, ay) = (src4.axis(0), src4.axis(1));
    let (nx, ny) = (ax.len(), ay.len());
    let total = nx * ny;
    if total > PSI_MAX_UNKNOWNS {
        return Err(Error::Precondition(format!(
            "{total} unknowns exceed the dense limit {PSI_MAX_UNKNOWNS}"
        )));
    }
    if nx < 3 || ny < 3 {
        return Err(Error::Shape("psi needs at least 3 nodes per axis".into()));
    }
    let dxx = second_derivative(ax.nodes(), ax.terminal(), ord.alpha());
    let dyy = second_derivative(ay.nodes(), ay.terminal(), ord.alpha());
    let mut a = DMatrix::<f64>::zeros(total, total);
    let mut b = DVector::<f64>::zeros(total);
    for i in 0..nx {
        for j in 0..ny {
            let r = i * ny + j;
            if i == 0 || j == 0 || i == nx - 1 || j == ny - 1 {
                a[(r, r)] = 1.0;
                b[r] = match bc {
                    PsiBoundary::Constant(c) => *c,
                    PsiBoundary::Values(f) => f.values()[r],
                };
                continue;
            }
            for k in 0..nx {
                a[(r, k * ny + j)] += dxx[(i, k)];
            }
            for l in 0..ny {
                a[(r, i * ny + l)] += dyy[(j, l)];
            }
            b[r] = 2.0 * src4.values()[r];
        }
    }
    let lu = a.clone().lu();
    let mut x = lu
        .solve(&b)
        .ok_or_else(|| Error::Degenerate("singular psi operator".into()))?;
    let scale = b.amax().max(1.0);
    let mut res = (&b - &a * &x).amax();
    for _ in 0..REFINE_STEPS {
        if res <= 1e-3 * PSI_TOL * scale {
            break;
        }
        let r = &b - &a * &x;
        if let Some(dx) = lu.solve(&r) {
            x += dx;
        }
        res = (&b - &a * &x).amax();
    }
    if !(res <= PSI_TOL * scale) {
        return Err(Error::NonConvergence {
            iterations: REFINE_STEPS + 1,
            residual: res,
        });
    }
    src4.with_values(x.iter().copied().collect())
}

/// The fractional exponential e^psi: E_alpha(psi) for alpha < 1, exp at alpha = 1.
pub fn fractional_exp(psi: &SampledField, ord: FracOrder) -> Result<SampledField> {
    if ord.is_integer() {
        return Ok(psi.map(f64::exp));
    }
    let v = psi
        .values()
        .iter()
        .map(|&p| mittag_leffler(ord.alpha(), p))
        .collect::<Result<Vec<_>>>()?;
    psi.with_values(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fraccore::Grid1D;

    fn axes(n: usize) -> Vec<Grid1D> {
        vec![
            Grid1D::uniform(0.0, 1.0, n).unwrap(),
            Grid1D::uniform(0.0, 1.0, n).unwrap(),
        ]
    }

    #[test]
    fn constant_boundary_without_source() {
        let src = SampledField::constant(axes(9), 0.0).unwrap();
        let psi = solve_psi(
            &src,
            &PsiBoundary::Constant(0.7),
            FracOrder::new(0.6).unwrap(),
        )
        .unwrap();
        assert!(psi.values().iter().all(|v| (v - 0.7).abs() < 1e-10));
    }

    #[test]
    fn harmonic_polynomial_is_reproduced() {
        let ax = axes(17);
        let exact = SampledField::from_fn(ax.clone(), |c| {
            c[0] * c[0] - c[1] * c[1] + 2.0 * c[0] * c[1]
        })
        .unwrap();
        let src = SampledField::constant(ax, 0.0).unwrap();
        let psi = solve_psi(
            &src,
            &PsiBoundary::Values(exact.clone()),
            FracOrder::integer(),
        )
        .unwrap();
        let err = (&psi - &exact).max_abs();
        assert!(err < 1e-9, "{err}");
    }

    #[test]
    fn unit_source_matches_separable_reference() {
        // psi = x (x - 1) solves psi_xx + psi_yy = 2 with psi = x (x - 1) on the edge.
        let ax = axes(21);
        let exact = SampledField::from_fn(ax.clone(), |c| c[0] * (c[0] - 1.0)).unwrap();
        let src = SampledField::constant(ax, 1.0).unwrap();
        let psi = solve_psi(
            &src,
            &PsiBoundary::Values(exact.clone()),
            FracOrder::integer(),
        )
        .unwrap();
        assert!((&psi - &exact).max_abs() < 1e-4);
    }

    #[test]
    fn oversized_grid_is_refused() {
        let src = SampledField::constant(axes(65), 0.0).unwrap();
        assert!(matches!(
            solve_psi(&src, &PsiBoundary::Constant(0.0), FracOrder::integer()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn exponential_of_zero_is_one() {
        let z = SampledField::constant(axes(4), 0.0).unwrap();
        for a in [0.5, 1.0] {
            assert!(fractional_exp(&z, FracOrder::new(a).unwrap())
                .unwrap()
                .values()
                .iter()
                .all(|v| *v == 1.0));
        }
    }
}
