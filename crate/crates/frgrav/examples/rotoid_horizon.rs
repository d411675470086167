//! Black rotoid: the h4 = 0 surface against r = 2 mu0 / (1 + eps sin phi).

use std::f64::consts::PI;

use frgrav::blackholes::*;
use frgrav::fraccore::*;

fn main() -> frgrav::Result<()> {
    let fine = Grid1D::uniform(1.0, 4.0, 100_001)?;
    let phis: Vec<f64> = (0..8).map(|k| k as f64 * PI / 4.0).collect();
    for eps in [0.01, 0.05, 0.2] {
        println!("eps = {eps}");
        for p in horizon_curve(1.0, eps, 1.0, 1.0, 0.0, &phis, &fine)? {
            println!(
                "  phi {:5.3}  numeric {:.6}  formula {:.6}",
                p.phi, p.r_numeric, p.r_formula
            );
        }
    }

    let r = Grid1D::uniform(3.0, 5.0, 13)?;
    let theta = Grid1D::uniform(0.4, 2.6, 5)?;
    let phi = Grid1D::new((0..33).map(|k| 0.1 + 0.05 * k as f64).collect(), 0.0)?;
    let prime = prime_schwarzschild(1.0, 0.01, &r, &theta, &phi, HORIZON_MARGIN)?;
    let mu1 = prime.field(|_, t, p| 0.3 * (p + 0.3 * t).cos());
    let rot = rotoid_metric(
        &prime,
        &RotoidData::with_ratio(&prime, 1.0, 1.0, 0.0, Some(mu1)),
        None,
        None,
        FracOrder::new(0.8)?,
    )?;
    println!(
        "rotoid metric at alpha 0.8: h4 spans [{:.4}, {:.4}]",
        rot.metric
            .h4()
            .values()
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min),
        rot.metric.h4().max_abs()
    );
    Ok(())
}
