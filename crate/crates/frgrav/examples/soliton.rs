//! Solitonic background: relax eta(x1, v) to the nonlinear wave equation on a
//! periodic v axis.

use std::f64::consts::PI;

use frgrav::blackholes::*;
use frgrav::fraccore::*;

fn main() -> frgrav::Result<()> {
    let x1 = Grid1D::uniform(0.0, 1.0, 64)?;
    let v = Grid1D::new((0..64).map(|k| k as f64 * 2.0 * PI / 64.0).collect(), 0.0)?;
    let init = SampledField::from_fn(vec![x1, v], |c| {
        0.3 + 0.04 * (c[1] + 0.7).sin() * (1.0 + c[0])
    })?;
    println!(
        "initial residual {:.3e}",
        soliton_residual(&init, -1, VBoundary::Periodic)?.max_abs()
    );
    let sol = solitonic_eta(&init, -1, &SolitonOptions::default())?;
    for (k, r) in sol.history.iter().enumerate() {
        println!("sweep {k:2}: {r:.3e}");
    }
    println!("final residual {:.3e}", sol.residual);
    Ok(())
}
