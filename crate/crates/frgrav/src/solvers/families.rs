use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::psi::{fractional_exp, solve_psi, PsiBoundary};
use crate::error::{Error, Result};
use crate::fraccore::kernel::LineOperator;
use crate::fraccore::{FracOrder, SampledField};
use crate::geomframe::{broadcast_v, DMetric, NConnection, SourceSpec, V_AXIS};

/// Sign of h3 h4 in family A.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Plus,
    #[default]
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

/// Generating functions and integration data. Unset 3-axis fields live on
/// the grid of `src.ups2()`, 2-axis ones on its (x^1, x^2) part.
#[derive(Debug, Clone)]
pub struct GeneratingData {
    /// phi(x, v) of family A.
    pub phi: Option<SampledField>,
    /// f(x, v) of family D.
    pub f: Option<SampledField>,
    /// Free h3(x, v) of family B.
    pub h3: Option<SampledField>,
    /// h4(x, v) for family C; solved from its ODE when absent.
    pub h4: Option<SampledField>,
    /// Free w_i of family B; for C and D it replaces the potential formula,
    /// which is indeterminate when the potential does not depend on v.
    pub w: Option<[SampledField; 2]>,
    pub n1: Option<[SampledField; 2]>,
    pub n2: Option<[SampledField; 2]>,
    pub h4_0: Option<SampledField>,
    pub h3_0: Option<SampledField>,
    pub varsigma40: Option<SampledField>,
    pub h0: f64,
    pub phi0: f64,
    /// (h4, h4*) at the v terminal for the family C ODE.
    pub h4_start: (f64, f64),
    pub branch: Branch,
    pub psi: PsiBoundary,
}

impl Default for GeneratingData {
    fn default() -> Self {
        Self {
            phi: None,
            f: None,
            h3: None,
            h4: None,
            w: None,
            n1: None,
            n2: None,
            h4_0: None,
            h3_0: None,
            varsigma40: None,
            h0: 1.0,
            phi0: 0.0,
            h4_start: (1.0, 1.0),
            branch: Branch::Minus,
            psi: PsiBoundary::Constant(0.0),
        }
    }
}

/// Auxiliary quantities of a solved metric. Nodes with h4* = 0 carry zeros.
#[derive(Debug, Clone)]
pub struct AuxQuantities {
    pub phi: SampledField,
    pub gamma: SampledField,
    pub alpha: [SampledField; 2],
    pub beta: SampledField,
    pub varsigma: Option<SampledField>,
}

fn check3(name: &str, f: &SampledField, like: &SampledField) -> Result<()> {
    if !f.same_grid(like) {
        return Err(Error::Shape(format!("{name} is not on the source grid")));
    }
    if !f.is_finite() {
        return Err(Error::Domain(format!("{name} has non-finite values")));
    }
    Ok(())
}

fn horizontal(
    name: &str,
    f: &Option<SampledField>,
    like: &SampledField,
    default: f64,
) -> Result<SampledField> {
    match f {
        Some(f) => {
            if f.axes() != &like.axes()[..2] {
                return Err(Error::Shape(format!(
                    "{name} must live on the (x1, x2) grid"
                )));
            }
            if !f.is_finite() {
                return Err(Error::Domain(format!("{name} has non-finite values")));
            }
            Ok(broadcast_v(f, like.axis(V_AXIS)))
        }
        None => Ok(like.map(|_| default)),
    }
}

fn pair(
    name: &str,
    f: &Option<[SampledField; 2]>,
    like: &SampledField,
) -> Result<[SampledField; 2]> {
    match f {
        Some([a, b]) => Ok([
            horizontal(name, &Some(a.clone()), like, 0.0)?,
            horizontal(name, &Some(b.clone()), like, 0.0)?,
        ]),
        None => Ok([like.map(|_| 0.0), like.map(|_| 0.0)]),
    }
}

fn zip3(
    a: &SampledField,
    b: &SampledField,
    c: &SampledField,
    f: impl Fn(f64, f64, f64) -> f64,
) -> SampledField {
    let v = a
        .values()
        .iter()
        .zip(b.values())
        .zip(c.values())
        .map(|((x, y), z)| f(*x, *y, *z))
        .collect();
    a.with_values(v).expect("same grid")
}

/// n_k = 1n_k + 2n_k I^alpha_v[integrand].
fn n_coefficients(
    gen: &GeneratingData,
    like: &SampledField,
    integrand: &SampledField,
    ord: FracOrder,
) -> Result<[SampledField; 2]> {
    let n1 = pair("1n", &gen.n1, like)?;
    let n2 = pair("2n", &gen.n2, like)?;
    let i = integrand.integral_axis(V_AXIS, ord)?;
    let [a1, a2] = n1;
    let [b1, b2] = n2;
    Ok([a1 + &b1 * &i, a2 + &b2 * &i])
}

/// sqrt|h3| / |h4|^{3/2}, zero where h4 vanishes.
fn generic_n_integrand(h3: &SampledField, h4: &SampledField) -> SampledField {
    h3.zip_with(h4, |a, b| {
        if b == 0.0 {
            0.0
        } else {
            a.abs().sqrt() / b.abs().powf(1.5)
        }
    })
    .expect("same grid")
}

/// w_i = d_i F / F*, zero where `skip` holds.
fn w_from_potential(
    pot: &SampledField,
    ord: FracOrder,
    skip: impl Fn(usize) -> bool,
    what: &str,
) -> Result<[SampledField; 2]> {
    let ps = pot.caputo_axis(V_AXIS, ord)?;
    let scale = ps.max_abs().max(1e-3 * pot.max_abs()).max(1e-300);
    let mut out = Vec::with_capacity(2);
    for i in 0..2 {
        let di = pot.caputo_axis(i, ord)?;
        let mut v = Vec::with_capacity(pot.len());
        for k in 0..pot.len() {
            if skip(k) {
                v.push(0.0);
                continue;
            }
            let s = ps.values()[k];
            if s.abs() <= 1e-10 * scale {
                return Err(Error::Precondition(format!(
                    "{what}* vanishes at node {k}; w_i is indeterminate"
                )));
            }
            v.push(di.values()[k] / s);
        }
        out.push(pot.with_values(v)?);
    }
    let [a, b]: [SampledField; 2] = out.try_into().expect("two components");
    Ok([a, b])
}

fn given_w([a, b]: &[SampledField; 2], like: &SampledField) -> Result<[SampledField; 2]> {
    check3("w1", a, like)?;
    check3("w2", b, like)?;
    Ok([a.clone(), b.clone()])
}

fn horizontal_metric(
    gen: &GeneratingData,
    src: &SourceSpec,
    ord: FracOrder,
) -> Result<SampledField> {
    let psi = solve_psi(src.ups4(), &gen.psi, ord)?;
    let g = fractional_exp(&psi, ord)?;
    Ok(broadcast_v(&g, src.ups2().axis(V_AXIS)))
}

fn nowhere_zero(f: &SampledField) -> bool {
    f.values().iter().all(|v| *v != 0.0)
}

/// Family A: nonzero Y2, generated by phi with phi* != 0.
pub fn family_a(gen: &GeneratingData, src: &SourceSpec, ord: FracOrder) -> Result<DMetric> {
    let like = src.ups2();
    let phi = gen
        .phi
        .as_ref()
        .ok_or_else(|| Error::Precondition("family A needs phi".into()))?;
    check3("phi", phi, like)?;
    if !nowhere_zero(like) {
        return Err(Error::Precondition(
            "family A needs Y2 != 0 at every node; use family B or D".into(),
        ));
    }
    let phis = phi.caputo_axis(V_AXIS, ord)?;
    let scale = phis.max_abs();
    if phis
        .values()
        .iter()
        .any(|v| v.abs() <= 1e-12 * scale.max(f64::MIN_POSITIVE))
        || scale == 0.0
    {
        return Err(Error::Precondition(
            "family A needs phi* != 0 at every node; use family B or D".into(),
        ));
    }
    let sigma = gen.branch.sign();
    let e2s = phi.map(|p| (2.0 * p).exp()).caputo_axis(V_AXIS, ord)?;
    // h4* itself: the integrand of the vertical integral
    let h4s = e2s.zip_with(like, |e, y| sigma * e / (4.0 * y))?;
    let h4 = horizontal("0h4", &gen.h4_0, like, 0.0)? + h4s.integral_axis(V_AXIS, ord)?;
    let h3 = eq2_h3(&h4, &h4s, &phis, like, ord)?;
    let w = w_from_potential(phi, ord, |_| false, "phi")?;
    let n = n_coefficients(gen, like, &generic_n_integrand(&h3, &h4), ord)?;
    let g = horizontal_metric(gen, src, ord)?;
    DMetric::new([g.clone(), g], [h3, h4], NConnection::new(w, n)?, ord)
}

/// h3 = h4* phi* / (2 h4 Y2), zero where h4 vanishes.
fn eq2_h3(
    h4: &SampledField,
    h4s: &SampledField,
    phis: &SampledField,
    ups2: &SampledField,
    _ord: FracOrder,
) -> Result<SampledField> {
    let num = h4s * phis;
    Ok(zip3(&num, h4, ups2, |n, h, y| {
        if h == 0.0 {
            0.0
        } else {
            n / (2.0 * h * y)
        }
    }))
}

/// Family B: Y2 = 0, h4 = 0h4(x), free h3 and w_i.
pub fn family_b(gen: &GeneratingData, src: &SourceSpec, ord: FracOrder) -> Result<DMetric> {
    let like = src.ups2();
    if like.max_abs() != 0.0 {
        return Err(Error::Precondition("family B requires Y2 = 0".into()));
    }
    let h3 = gen
        .h3
        .clone()
        .ok_or_else(|| Error::Precondition("family B needs h3".into()))?;
    check3("h3", &h3, like)?;
    if gen.h4_0.is_none() {
        return Err(Error::Precondition("family B needs 0h4(x)".into()));
    }
    let h4 = horizontal("0h4", &gen.h4_0, like, 0.0)?;
    let w = match &gen.w {
        Some(w) => given_w(w, like)?,
        None => [like.map(|_| 0.0), like.map(|_| 0.0)],
    };
    let n = n_coefficients(gen, like, &h3.map(|x| x.abs().sqrt()), ord)?;
    let g = horizontal_metric(gen, src, ord)?;
    DMetric::new([g.clone(), g], [h3, h4], NConnection::new(w, n)?, ord)
}

const C_MAX_ITER: usize = 5000;
const C_DAMPING: f64 = 0.7;
const C_TOL: f64 = 1e-13;

/// Solves h** = (h*)^2/(2h) + 2 h3 h Y2 along every v-line as the fixed point
/// m = c1 + I[m^2/(2h) + 2 h3 h Y2], h = c0 + I m. Returns (h4, h4*).
pub fn solve_family_c_h4(
    h3: &SampledField,
    ups2: &SampledField,
    start: (f64, f64),
    ord: FracOrder,
) -> Result<(SampledField, SampledField)> {
    let vg = ups2.axis(V_AXIS);
    let nv = vg.len();
    let op = LineOperator::integral(vg.nodes(), vg.terminal(), ord.alpha());
    let (c0, c1) = start;
    let lines: Vec<(Vec<f64>, Vec<f64>)> = ups2
        .values()
        .par_chunks(nv)
        .zip(h3.values().par_chunks(nv))
        .map(|(y, h3l)| {
            let mut m = vec![c1; nv];
            let mut h = vec![1.0; nv];
            let mut rhs = vec![0.0; nv];
            let mut tmp = vec![0.0; nv];
            for it in 0..C_MAX_ITER {
                for k in 0..nv {
                    rhs[k] = m[k] * m[k] / (2.0 * h[k]) + 2.0 * h3l[k] * h[k] * y[k];
                }
                op.apply(&rhs, &mut tmp);
                let mut delta = 0.0f64;
                for k in 0..nv {
                    let next = c1 + tmp[k];
                    delta = delta.max((next - m[k]).abs() / m[k].abs().max(1.0));
                    m[k] += C_DAMPING * (next - m[k]);
                }
                op.apply(&m, &mut tmp);
                for k in 0..nv {
                    h[k] = c0 + tmp[k];
                }
                if h.iter().any(|x| !x.is_finite() || *x == 0.0) || m.iter().any(|x| !x.is_finite())
                {
                    return Err(Error::NonConvergence {
                        iterations: it + 1,
                        residual: f64::INFINITY,
                    });
                }
                if delta < C_TOL {
                    return Ok((h, m));
                }
                if it + 1 == C_MAX_ITER {
                    return Err(Error::NonConvergence {
                        iterations: C_MAX_ITER,
                        residual: delta,
                    });
                }
            }
            unreachable!()
        })
        .collect::<Result<_>>()?;
    let mut hv = Vec::with_capacity(ups2.len());
    let mut mv = Vec::with_capacity(ups2.len());
    for (h, m) in lines {
        hv.extend(h);
        mv.extend(m);
    }
    Ok((ups2.with_values(hv)?, ups2.with_values(mv)?))
}

/// Family C: h3 = -0h3(x), h4 from the vertical ODE unless supplied.
pub fn family_c(gen: &GeneratingData, src: &SourceSpec, ord: FracOrder) -> Result<DMetric> {
    let like = src.ups2();
    if gen.h3_0.is_none() {
        return Err(Error::Precondition("family C needs 0h3(x)".into()));
    }
    let h3 = -horizontal("0h3", &gen.h3_0, like, 0.0)?;
    if !nowhere_zero(&h3) {
        return Err(Error::Precondition("family C needs 0h3 != 0".into()));
    }
    let (h4, h4s) = match &gen.h4 {
        Some(h4) => {
            check3("h4", h4, like)?;
            (h4.clone(), h4.caputo_axis(V_AXIS, ord)?)
        }
        None => solve_family_c_h4(&h3, like, gen.h4_start, ord)?,
    };
    if !nowhere_zero(&h4s) || !nowhere_zero(&h4) {
        return Err(Error::Precondition(
            "family C needs h4 != 0 and h4* != 0".into(),
        ));
    }
    let w = match &gen.w {
        Some(w) => given_w(w, like)?,
        None => {
            let phit = zip3(&h4s, &h3, &h4, |s, a, b| {
                (s / (a * b).abs().sqrt()).abs().ln()
            });
            w_from_potential(&phit, ord, |_| false, "phi~")?
        }
    };
    let n = n_coefficients(gen, like, &generic_n_integrand(&h3, &h4), ord)?;
    let g = horizontal_metric(gen, src, ord)?;
    DMetric::new([g.clone(), g], [h3, h4], NConnection::new(w, n)?, ord)
}

/// varsigma for family D: 1/vs = 1/vs40 - sign(vs40) 0h^2 I^alpha_v[Y2 (f^2)*].
pub fn varsigma_upsilon(
    f: &SampledField,
    ups2: &SampledField,
    h0: f64,
    s40: &SampledField,
    ord: FracOrder,
) -> Result<SampledField> {
    let f2s = f.map(|x| x * x).caputo_axis(V_AXIS, ord)?;
    let int = (ups2 * &f2s).integral_axis(V_AXIS, ord)?;
    let inv = zip3(s40, &int, s40, |s, i, _| 1.0 / s - s.signum() * h0 * h0 * i);
    let nv = f.axis(V_AXIS).len();
    for (line, s) in inv.values().chunks(nv).zip(s40.values().chunks(nv)) {
        if line
            .iter()
            .any(|x| *x == 0.0 || x.signum() != s[0].signum())
        {
            return Err(Error::Precondition(
                "varsigma blows up inside the v range".into(),
            ));
        }
    }
    Ok(inv.map(|x| 1.0 / x))
}

/// Family D: phi fixed, generated by f with h4 = f^2.
pub fn family_d(gen: &GeneratingData, src: &SourceSpec, ord: FracOrder) -> Result<DMetric> {
    family_d_with_aux(gen, src, ord).map(|(g, _)| g)
}

/// Family D together with its varsigma field.
pub fn family_d_with_aux(
    gen: &GeneratingData,
    src: &SourceSpec,
    ord: FracOrder,
) -> Result<(DMetric, SampledField)> {
    let like = src.ups2();
    let f = gen
        .f
        .as_ref()
        .ok_or_else(|| Error::Precondition("family D needs f".into()))?;
    check3("f", f, like)?;
    if gen.h0 == 0.0 || !gen.h0.is_finite() {
        return Err(Error::Precondition(
            "family D needs a finite nonzero 0h".into(),
        ));
    }
    let s40 = horizontal("varsigma40", &gen.varsigma40, like, 1.0)?;
    if !nowhere_zero(&s40) {
        return Err(Error::Precondition("varsigma40 must not vanish".into()));
    }
    let fs = f.caputo_axis(V_AXIS, ord)?;
    if fs.max_abs() == 0.0 {
        return Err(Error::Precondition("family D needs f* != 0".into()));
    }
    let vs = varsigma_upsilon(f, like, gen.h0, &s40, ord)?;
    let h0sq = gen.h0 * gen.h0;
    let h4 = f.map(|x| x * x);
    let h3 = fs.zip_with(&vs, |d, s| -h0sq * d * d * s.abs())?;
    let w = match &gen.w {
        Some(w) => given_w(w, like)?,
        None => {
            let (h3v, h4v) = (h3.values(), h4.values());
            w_from_potential(&vs, ord, |k| h3v[k] == 0.0 || h4v[k] == 0.0, "varsigma")?
        }
    };
    let n = n_coefficients(gen, like, &generic_n_integrand(&h3, &h4), ord)?;
    let g = horizontal_metric(gen, src, ord)?;
    Ok((
        DMetric::new([g.clone(), g], [h3, h4], NConnection::new(w, n)?, ord)?,
        vs,
    ))
}

/// phi, gamma, alpha_i and beta recomputed from a metric.
pub fn aux_quantities(g: &DMetric) -> Result<AuxQuantities> {
    let ord = g.ord();
    let (h3, h4) = (g.h3(), g.h4());
    let h4s = h4.caputo_axis(V_AXIS, ord)?;
    let phi = zip3(&h4s, h3, h4, |s, a, b| {
        if s == 0.0 || a * b == 0.0 {
            0.0
        } else {
            (s / (a * b).abs().sqrt()).abs().ln()
        }
    });
    let phis = phi.caputo_axis(V_AXIS, ord)?;
    let zero = |x: &SampledField| zip3(x, &h4s, x, |v, s, _| if s == 0.0 { 0.0 } else { v });
    let beta = zero(&(&h4s * &phis));
    let alpha = [
        zero(&(&h4s * &phi.caputo_axis(0, ord)?)),
        zero(&(&h4s * &phi.caputo_axis(1, ord)?)),
    ];
    let gamma = zip3(h3, h4, h3, |a, b, _| {
        if a == 0.0 || b == 0.0 {
            0.0
        } else {
            (b.abs().powf(1.5) / a.abs()).ln()
        }
    })
    .caputo_axis(V_AXIS, ord)?;
    Ok(AuxQuantities {
        phi,
        gamma,
        alpha,
        beta,
        varsigma: None,
    })
}
