use serde::{Deserialize, Serialize};

use super::prime::PrimeData;
use crate::error::{Error, Result};
use crate::fraccore::{FracOrder, Grid1D, SampledField};
use crate::geomframe::{broadcast_v, DMetric, NConnection, V_AXIS};
use crate::solvers::fractional_exp;

/// The constant 0h fixed by the vacuum condition.
pub const H0: f64 = 2.0;
const COND_TOL: f64 = 1e-8;

/// g_i = eta_i g_i(seed), h_a = eta_a h_a(seed).
pub fn polarize(
    prime: &PrimeData,
    eta: &[SampledField; 4],
    nconn: Option<NConnection>,
    ord: FracOrder,
) -> Result<DMetric> {
    let seed = prime.coefficients();
    let mut out = Vec::with_capacity(4);
    for (e, s) in eta.iter().zip(&seed) {
        if !e.same_grid(s) {
            return Err(Error::Shape("polarization is not on the seed chart".into()));
        }
        out.push(e * s);
    }
    let n = match nconn {
        Some(n) => n,
        None => NConnection::zero(&seed[0])?,
    };
    let [g1, g2, h3, h4]: [SampledField; 4] = out.try_into().expect("four blocks");
    DMetric::new([g1, g2], [h3, h4], n, ord)
}

/// Vacuum deformation together with its vertical polarizations.
#[derive(Debug, Clone)]
pub struct Deformation {
    pub metric: DMetric,
    pub eta3: SampledField,
    pub eta4: SampledField,
}

fn conformal(
    prime: &PrimeData,
    psi: Option<&SampledField>,
    ord: FracOrder,
) -> Result<SampledField> {
    let phi = prime.axes()[V_AXIS].clone();
    match psi {
        None => Ok(prime.field(|_, _, _| -1.0)),
        Some(p) => {
            if p.axes() != &prime.axes()[..2] {
                return Err(Error::Shape(
                    "psi must live on the (xi, theta) chart".into(),
                ));
            }
            Ok(broadcast_v(&fractional_exp(p, ord)?, &phi).map(|x| -x))
        }
    }
}

fn nconn_or_zero(nconn: Option<NConnection>, like: &SampledField) -> Result<NConnection> {
    match nconn {
        Some(n) if n.grid_like().same_grid(like) => Ok(n),
        Some(_) => Err(Error::Shape("N-connection is not on the seed chart".into())),
        None => NConnection::zero(like),
    }
}

/// h3 = -0h^2 (b*)^2, h4 = b^2 with 0h = 2 and g1 = g2 = -e^psi.
pub fn fractional_deformation(
    prime: &PrimeData,
    b: &SampledField,
    psi: Option<&SampledField>,
    nconn: Option<NConnection>,
    ord: FracOrder,
) -> Result<Deformation> {
    let [_, _, s3, s4] = prime.coefficients();
    if !b.same_grid(&s4) {
        return Err(Error::Shape(
            "generating function is not on the seed chart".into(),
        ));
    }
    let bs = b.caputo_axis(V_AXIS, ord)?;
    let scale = bs.max_abs().max(b.max_abs());
    if let Some(k) = bs.values().iter().position(|x| x.abs() <= 1e-12 * scale) {
        return Err(Error::Precondition(format!("b* vanishes at node {k}")));
    }
    let h3 = bs.map(|x| -H0 * H0 * x * x);
    let h4 = b.map(|x| x * x);
    let eta3 = &h3 / &s3;
    let eta4 = &h4 / &s4;
    let g = conformal(prime, psi, ord)?;
    let n = nconn_or_zero(nconn, &g)?;
    Ok(Deformation {
        metric: DMetric::new([g.clone(), g], [h3, h4], n, ord)?,
        eta3,
        eta4,
    })
}

/// Rotoid generating data: q = 1 - 2 mu / r, s = q0(r) / (4 mu^2) sin(omega0 phi + phi0),
/// mu = mu0 + mu1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RotoidData {
    /// q0 at the radial nodes.
    pub q0: Vec<f64>,
    pub omega0: f64,
    pub phi0: f64,
    /// Anisotropic mass correction on the chart; zero when absent.
    pub mu1: Option<SampledField>,
}

impl RotoidData {
    /// q0 = 4 mu0^2 ratio, so that q0 / 4 mu^2 = ratio while mu1 = 0.
    pub fn with_ratio(
        prime: &PrimeData,
        ratio: f64,
        omega0: f64,
        phi0: f64,
        mu1: Option<SampledField>,
    ) -> Self {
        Self {
            q0: vec![4.0 * prime.mu0 * prime.mu0 * ratio; prime.r().len()],
            omega0,
            phi0,
            mu1,
        }
    }
}

/// Metric generated by b^2 = q + eps s, kept with its generating pair so it
/// can be rescaled by solitonic or oscillator backgrounds.
#[derive(Debug, Clone)]
pub struct RotoidMetric {
    pub metric: DMetric,
    pub q: SampledField,
    pub s: SampledField,
    pub eps: f64,
}

/// h4 = q + eps s, h3 = -4 [(sqrt|q|)*]^2 [1 + eps (s / sqrt|q|)* / (sqrt|q|)*].
fn linear_eccentric(
    q: &SampledField,
    s: &SampledField,
    eps: f64,
    g: SampledField,
    n: NConnection,
    ord: FracOrder,
) -> Result<DMetric> {
    let sq = q.map(|x| x.abs().sqrt());
    let sqs = sq.caputo_axis(V_AXIS, ord)?;
    if sqs.max_abs() <= 1e-10 * sq.max_abs() {
        return Err(Error::Precondition(
            "(sqrt|q|)* vanishes identically; the mass correction must depend on phi".into(),
        ));
    }
    let ratio = s
        .zip_with(&sq, |a, b| if b == 0.0 { 0.0 } else { a / b })?
        .caputo_axis(V_AXIS, ord)?;
    // expanded so that nodes with (sqrt|q|)* = 0 stay finite
    let h3 = sqs.zip_with(&ratio, |d, r| -4.0 * d * (d + eps * r))?;
    let h4 = q + &(s * eps);
    DMetric::new([g.clone(), g], [h3, h4], n, ord)
}

/// Max violations of the rotoid N-conditions:
/// w2 w1* - w1 w2* = d_xi w2 - d_theta w1 (or the curl alone where w* = 0),
/// d_theta n1 - d_xi n2 = 0, and n* = 0.
pub fn rotoid_n_conditions(n: &NConnection, ord: FracOrder) -> Result<[f64; 3]> {
    let (w1, w2) = (n.w(0), n.w(1));
    let w1s = w1.caputo_axis(V_AXIS, ord)?;
    let w2s = w2.caputo_axis(V_AXIS, ord)?;
    let curl = w2.caputo_axis(0, ord)? - w1.caputo_axis(1, ord)?;
    let mut cw: f64 = 0.0;
    for k in 0..curl.len() {
        let lhs = w2.values()[k] * w1s.values()[k] - w1.values()[k] * w2s.values()[k];
        cw = cw.max((lhs - curl.values()[k]).abs());
    }
    let cn = (n.n(0).caputo_axis(1, ord)? - n.n(1).caputo_axis(0, ord)?).max_abs();
    let ns = n
        .n(0)
        .caputo_axis(V_AXIS, ord)?
        .max_abs()
        .max(n.n(1).caputo_axis(V_AXIS, ord)?.max_abs());
    Ok([cw, cn, ns])
}

/// Black-ellipsoid metric with eccentricity `prime.eps`.
pub fn rotoid_metric(
    prime: &PrimeData,
    rot: &RotoidData,
    psi: Option<&SampledField>,
    nconn: Option<NConnection>,
    ord: FracOrder,
) -> Result<RotoidMetric> {
    let eps = prime.eps;
    if !(0.0..1.0).contains(&eps) {
        return Err(Error::Domain(format!("eccentricity {eps} outside [0, 1)")));
    }
    if rot.q0.len() != prime.r().len() {
        return Err(Error::Shape("q0 needs one value per radial node".into()));
    }
    let zero = prime.field(|_, _, _| 0.0);
    let mu1 = match &rot.mu1 {
        Some(m) if m.same_grid(&zero) => m.clone(),
        Some(_) => return Err(Error::Shape("mu1 is not on the seed chart".into())),
        None => zero,
    };
    let mu = mu1.map(|m| prime.mu0 + m);
    if let Some(k) = mu.values().iter().position(|m| *m == 0.0) {
        return Err(Error::Domain(format!("mu vanishes at node {k}")));
    }
    let r = prime.field(|r, _, _| r);
    let q = mu.zip_with(&r, |m, r| 1.0 - 2.0 * m / r)?;
    let (om, p0) = (rot.omega0, rot.phi0);
    let q0 = prime.field({
        let q0 = rot.q0.clone();
        let rs = prime.r().to_vec();
        move |r, _, _| q0[rs.iter().position(|x| *x == r).expect("radial node")]
    });
    let phase = prime.field(move |_, _, p| (om * p + p0).sin());
    let s = (&q0 * &phase).zip_with(&mu, |a, m| a / (4.0 * m * m))?;
    let g = conformal(prime, psi, ord)?;
    let n = nconn_or_zero(nconn, &g)?;
    let [cw, cn, ns] = rotoid_n_conditions(&n, ord)?;
    if cw > COND_TOL || cn > COND_TOL || ns > COND_TOL {
        return Err(Error::Precondition(format!(
            "N-connection violates the rotoid conditions ({cw:.2e}, {cn:.2e}, {ns:.2e})"
        )));
    }
    let metric = linear_eccentric(&q, &s, eps, g, n, ord)?;
    Ok(RotoidMetric { metric, q, s, eps })
}

/// Multiplies the generating pair by a positive background; N and g_i are kept.
fn rescale(rot: &RotoidMetric, factor: &SampledField, what: &str) -> Result<RotoidMetric> {
    if let Some(k) = factor.values().iter().position(|x| !(*x > 0.0)) {
        return Err(Error::Domain(format!(
            "{what} must be positive; fails at node {k}"
        )));
    }
    let q = &rot.q * factor;
    let s = &rot.s * factor;
    let g = rot.metric.g1().clone();
    let metric = linear_eccentric(
        &q,
        &s,
        rot.eps,
        g,
        rot.metric.nconn().clone(),
        rot.metric.ord(),
    )?;
    Ok(RotoidMetric {
        metric,
        q,
        s,
        eps: rot.eps,
    })
}

/// Extends a (xi, phi) field along theta, or passes a chart field through.
fn on_chart(f: &SampledField, like: &SampledField) -> Result<SampledField> {
    if f.same_grid(like) {
        return Ok(f.clone());
    }
    let ax = like.axes();
    if f.ndim() == 2 && f.axis(0) == &ax[0] && f.axis(1) == &ax[2] {
        let (n0, n1, n2) = (ax[0].len(), ax[1].len(), ax[2].len());
        let mut v = Vec::with_capacity(n0 * n1 * n2);
        for i in 0..n0 {
            for _ in 0..n1 {
                v.extend_from_slice(&f.values()[i * n2..(i + 1) * n2]);
            }
        }
        return like.with_values(v);
    }
    Err(Error::Shape(
        "background must be on the chart or on (xi, phi)".into(),
    ))
}

/// Rotoid in a solitonic background: q -> eta q, s -> eta s.
pub fn solitonic_rotoid(rot: &RotoidMetric, eta: &SampledField) -> Result<RotoidMetric> {
    let eta = on_chart(eta, &rot.q)?;
    rescale(rot, &eta, "eta")
}

/// Further embedding into an oscillator profile rho(phi).
pub fn oscillator_embedded_metric(rot: &RotoidMetric, rho: &SampledField) -> Result<RotoidMetric> {
    let ax = rot.q.axes();
    if rho.ndim() != 1 || rho.axis(0) != &ax[V_AXIS] {
        return Err(Error::Shape("rho must live on the phi axis".into()));
    }
    let (n0, n1) = (ax[0].len(), ax[1].len());
    let v = (0..n0 * n1)
        .flat_map(|_| rho.values().iter().copied())
        .collect();
    rescale(rot, &rot.q.with_values(v)?, "rho")
}

/// One point of the horizon curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HorizonPoint {
    pub phi: f64,
    /// Zero of the sampled h4 along r, linearly interpolated.
    pub r_numeric: f64,
    /// 2 mu0 / (1 + eps ratio sin(omega0 phi + phi0)).
    pub r_formula: f64,
}

/// Zero crossings of h4 = 1 - 2 mu0 / r + eps ratio sin(omega0 phi + phi0)
/// sampled on `r_grid`, for each phi.
pub fn horizon_curve(
    mu0: f64,
    eps: f64,
    ratio: f64,
    omega0: f64,
    phi0: f64,
    phis: &[f64],
    r_grid: &Grid1D,
) -> Result<Vec<HorizonPoint>> {
    let r = r_grid.nodes();
    phis.iter()
        .map(|&phi| {
            let shift = eps * ratio * (omega0 * phi + phi0).sin();
            let h: Vec<f64> = r.iter().map(|x| 1.0 - 2.0 * mu0 / x + shift).collect();
            let k = h
                .windows(2)
                .position(|w| w[0] == 0.0 || w[0].signum() != w[1].signum())
                .ok_or_else(|| {
                    Error::Precondition(format!("no zero of h4 in the radial range at phi = {phi}"))
                })?;
            let r_numeric = r[k] - h[k] * (r[k + 1] - r[k]) / (h[k + 1] - h[k]);
            Ok(HorizonPoint {
                phi,
                r_numeric,
                r_formula: 2.0 * mu0 / (1.0 + shift),
            })
        })
        .collect()
}
