//! Family C: h3 independent of v, h4 solved from its ordinary equation.
//!
//! Prints the reduced residuals on two grids; integer order converges, the
//! fractional orders show what the truncated Leibniz rule leaves behind.

use frgrav::fraccore::*;
use frgrav::geomframe::*;
use frgrav::solvers::{family_c, GeneratingData};

fn axes(n: usize) -> frgrav::Result<Vec<Grid1D>> {
    Ok(vec![
        Grid1D::uniform(0.0, 1.0, n)?,
        Grid1D::uniform(0.0, 1.0, n)?,
        Grid1D::new(
            (0..2 * n - 1)
                .map(|k| 0.1 + k as f64 / (2 * n - 2) as f64)
                .collect(),
            0.0,
        )?,
    ])
}

fn main() -> frgrav::Result<()> {
    for (alpha, n) in [(1.0, 9), (1.0, 17), (0.8, 9), (0.8, 17)] {
        let ax = axes(n)?;
        let ord = FracOrder::new(alpha)?;
        let src = SourceSpec::uniform(&ax, 1.0, 0.0)?;
        let h3_0 = SampledField::constant(ax[..2].to_vec(), 1.0)?;
        let g = family_c(
            &GeneratingData {
                h3_0: Some(h3_0),
                ..Default::default()
            },
            &src,
            ord,
        )?;
        let rep = reduced_residuals(&g, &src)?;
        println!(
            "alpha {alpha} n {n:2}: eq1 {:.2e} eq2 {:.2e} eq3 {:.2e} eq4 {:.2e}",
            rep.eq1.max_abs, rep.eq2.max_abs, rep.eq3.max_abs, rep.eq4.max_abs
        );
    }
    Ok(())
}
