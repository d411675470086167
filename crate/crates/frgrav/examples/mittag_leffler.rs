//! One-parameter Mittag-Leffler function and the fractional exponential.

use frgrav::fraccore::*;
use frgrav::solvers::fractional_exp;

fn main() -> frgrav::Result<()> {
    println!(
        "{:>6} {:>14} {:>14} {:>14}",
        "z", "E_1(z)", "E_0.7(z)", "E_0.3(z)"
    );
    for z in [-5.0, -2.0, -0.5, 0.0, 0.5, 2.0] {
        println!(
            "{z:6.1} {:14.8} {:14.8} {:14.8}",
            mittag_leffler(1.0, z)?,
            mittag_leffler(0.7, z)?,
            mittag_leffler(0.3, z)?
        );
    }

    let g = Grid1D::uniform(-1.0, 1.0, 5)?;
    let psi = SampledField::from_fn(vec![g.clone(), g], |c| c[0] * c[1])?;
    let e = fractional_exp(&psi, FracOrder::new(0.6)?)?;
    println!(
        "fractional exp of x1 x2 ranges over [{:.6}, {:.6}]",
        e.values().iter().cloned().fold(f64::INFINITY, f64::min),
        e.max_abs()
    );
    Ok(())
}
