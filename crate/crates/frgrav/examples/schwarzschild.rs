//! Schwarzschild prime metric at integer order in the (xi, theta, phi) chart,
//! and a fractional vacuum deformation of it.

use std::f64::consts::PI;

use frgrav::blackholes::*;
use frgrav::fraccore::*;
use frgrav::geomframe::*;

fn main() -> frgrav::Result<()> {
    let r = uniform_xi_radii(1.0, 0.0, 4.0, 10.0, 48)?;
    let theta = Grid1D::uniform(0.6, PI - 0.6, 24)?;
    let phi = Grid1D::new((0..9).map(|k| 0.1 + 0.125 * k as f64).collect(), 0.0)?;
    let prime = prime_schwarzschild(1.0, 0.0, &r, &theta, &phi, HORIZON_MARGIN)?;
    println!("horizon radii {:?}", horizon_radii(1.0, 0.0));

    let g = prime.metric(FracOrder::integer())?;
    let rep = reduced_residuals(&g, &SourceSpec::vacuum(g.axes())?)?;
    // the h-part of the reduced system is the (r, theta) sector, which is curved
    println!(
        "integer order: eq1 {:.3e}, eq2..eq4 {:.1e}",
        rep.eq1.max_abs,
        rep.eq2.max_abs.max(rep.eq3.max_abs).max(rep.eq4.max_abs)
    );

    let ord = FracOrder::new(0.8)?;
    let b = prime.field(|r, t, p| (1.0 - 2.0 / r).sqrt() * (1.0 + 0.1 * p + 0.01 * t));
    let def = fractional_deformation(&prime, &b, None, None, ord)?;
    let rep = reduced_residuals(&def.metric, &SourceSpec::vacuum(def.metric.axes())?)?;
    println!(
        "deformed, alpha 0.8: eq1 {:.3e} eq2 {:.3e} eq3 {:.3e} eq4 {:.3e}, eta4 in [{:.4}, {:.4}]",
        rep.eq1.max_abs,
        rep.eq2.max_abs,
        rep.eq3.max_abs,
        rep.eq4.max_abs,
        min(&def.eta4),
        def.eta4.max_abs()
    );
    Ok(())
}

fn min(f: &SampledField) -> f64 {
    f.values().iter().cloned().fold(f64::INFINITY, f64::min)
}
