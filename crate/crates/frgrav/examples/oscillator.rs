//! Fractional oscillator: the truncated series for rho, its substitution
//! residual, and how the residual falls with the truncation order.

use frgrav::blackholes::*;
use frgrav::fraccore::*;

fn main() -> frgrav::Result<()> {
    let g = Grid1D::uniform(0.0, 1.0, 513)?;
    let one = SampledField::constant(vec![g.clone()], 1.0)?;
    let ord = FracOrder::new(0.6)?;
    for order in [4, 8, 12, 16, 24] {
        let s = oscillator_series(&one, &one, ord, 0.0, 0.0, order)?;
        let res = oscillator_residual(&s)?;
        let interior = g
            .nodes()
            .iter()
            .zip(res.values())
            .filter(|(v, _)| (0.1..=0.9).contains(*v))
            .fold(0.0f64, |m, (_, r)| m.max(r.abs()));
        println!("P = {order:2}: rho(1) = {:.8}, last term {:.2e}, residual on [0.1, 0.9] {interior:.2e}", s.rho.values()[512], s.last_term());
    }
    Ok(())
}
