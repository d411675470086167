//! Family B: vacuum vertical sector with a free h3 and h4 fixed by its terminal value.
//!
//! The construction is exact at every order.

use frgrav::fraccore::*;
use frgrav::geomframe::*;
use frgrav::solvers::{family_b, GeneratingData};

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
        let src = SourceSpec::vacuum(&ax)?;
        let h3 = SampledField::from_fn(ax.clone(), |c| (1.0 + c[2]).powi(2))?;
        let h4_0 = SampledField::from_fn(ax[..2].to_vec(), |c| 1.0 + c[0])?;
        let g = family_b(
            &GeneratingData {
                h3: Some(h3),
                h4_0: Some(h4_0),
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
