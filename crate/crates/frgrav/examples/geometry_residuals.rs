//! Build a d-metric by hand and evaluate the Einstein d-tensor and the reduced
//! field-equation residuals.

use frgrav::fraccore::*;
use frgrav::geomframe::*;

fn main() -> frgrav::Result<()> {
    let ax = vec![
        Grid1D::uniform(0.0, 1.0, 9)?,
        Grid1D::uniform(0.0, 1.0, 9)?,
        Grid1D::new((0..17).map(|k| 0.1 + k as f64 / 16.0).collect(), 0.0)?,
    ];
    let ord = FracOrder::new(0.7)?;
    let g = SampledField::constant(ax.clone(), 1.0)?;
    let h3 = SampledField::constant(ax.clone(), -1.0)?;
    let h4 = SampledField::from_fn(ax.clone(), |c| 1.0 + 0.2 * c[0])?;
    let metric = DMetric::new(
        [g.clone(), g],
        [h3.clone(), h4],
        NConnection::zero(&h3)?,
        ord,
    )?;

    let ein = einstein_dtensor(&metric)?;
    println!("scalar curvature max |R| = {:.3e}", ein.scalar.max_abs());
    let rep = reduced_residuals(&metric, &SourceSpec::vacuum(&ax)?)?;
    for (k, e) in [&rep.eq1, &rep.eq2, &rep.eq3, &rep.eq4].iter().enumerate() {
        println!(
            "eq{}: max {:.3e}  mean {:.3e}",
            k + 1,
            e.max_abs,
            e.mean_abs
        );
    }
    println!(
        "{} of {} nodes evaluated",
        rep.evaluated_nodes,
        rep.shape.iter().product::<usize>()
    );
    Ok(())
}
