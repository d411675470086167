//! Caputo derivative of x^beta against the closed form, and the RL integral
//! undoing it.

use frgrav::fraccore::*;

fn main() -> frgrav::Result<()> {
    let alpha = FracOrder::new(0.5)?;
    for n in [65, 257, 1025] {
        let f = SampledField::from_fn(vec![Grid1D::uniform(0.0, 1.0, n)?], |c| c[0].powf(1.5))?;
        let d = caputo_left(&f, alpha, 0.75)?;
        let exact = caputo_power_rule(0.5, 1.5, 0.75, 0.0)?;
        println!(
            "n = {n:5}  D^0.5 x^1.5 at 0.75 = {d:.12}  error {:.2e}",
            (d - exact).abs()
        );
    }

    let f = SampledField::from_fn(vec![Grid1D::uniform(0.0, 1.0, 1025)?], |c| c[0].sin())?;
    let back = f.caputo_axis(0, alpha)?.integral_axis(0, alpha)?;
    let worst = f
        .values()
        .iter()
        .zip(back.values())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    println!("I^a D^a sin - sin: {worst:.2e}");
    Ok(())
}
