//! Levi-Civita selector on family A: a v-independent phi satisfies the
//! zero-torsion conditions, a v-dependent N-connection does not.

use frgrav::fraccore::*;
use frgrav::geomframe::*;
use frgrav::solvers::*;

fn main() -> frgrav::Result<()> {
    let ax = vec![
        Grid1D::uniform(0.0, 1.0, 9)?,
        Grid1D::uniform(0.0, 1.0, 9)?,
        Grid1D::new((0..17).map(|k| 0.1 + k as f64 / 16.0).collect(), 0.0)?,
    ];
    let src = SourceSpec::uniform(&ax, 1.0, 0.0)?;
    let phi = SampledField::from_fn(ax.clone(), |c| c[2])?;
    let g = family_a(
        &GeneratingData {
            phi: Some(phi),
            ..Default::default()
        },
        &src,
        FracOrder::new(0.8)?,
    )?;

    let show = |label: &str, sel: &LcSelection| {
        println!("{label}: max violation {:.3e}", sel.max());
        for (name, v) in &sel.conditions {
            println!("    {name:<24} {v:.3e}");
        }
    };
    show("phi = v", &select_levi_civita(&g, FamilyTag::A)?);

    let bump = SampledField::from_fn(ax, |c| 0.1 * c[2] * (1.0 + c[0]))?;
    let n = NConnection::new(
        [g.w(0).clone(), g.w(1).clone()],
        [g.n(0) + &bump, g.n(1) + &bump],
    )?;
    show(
        "n_i + 0.1 v (1 + x1)",
        &select_levi_civita(&g.with_nconn(n)?, FamilyTag::A)?,
    );
    Ok(())
}
