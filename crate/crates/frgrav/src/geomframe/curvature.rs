use serde::{Deserialize, Serialize};

use super::dconn::{canonical_dconnection, DConnectionCoeffs};
use super::dmetric::DMetric;
use super::nconn::{nonholonomy_coefficients, Frames};
use super::{Tensor2, Tensor3};
use crate::error::Result;
use crate::fraccore::SampledField;

/// Ricci, scalar curvature and Einstein tensor of the canonical d-connection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EinsteinReport {
    pub ricci: Tensor2,
    pub scalar: SampledField,
    pub einstein: Tensor2,
}

/// Ric(b, c) = R^a_{b a c} where R(e_g, e_d) e_b = R^a_{b g d} e_a, i.e.
/// R^a_bgd = e_g G^a_bd - e_d G^a_bg + G^f_bd G^a_fg - G^f_bg G^a_fd - W^f_gd G^a_bf.
pub fn ricci(gamma: &Tensor3, w: &Tensor3, frames: &Frames) -> Result<Tensor2> {
    let like = gamma.get(0, 0, 0);
    let zero = like.map(|_| 0.0);
    let deriv = |dir: usize, f: &SampledField| -> Result<SampledField> {
        if f.values().iter().all(|v| *v == 0.0) {
            Ok(zero.clone())
        } else {
            frames.apply(dir, f)
        }
    };
    // contracted trace G^a_fa
    let mut tr = vec![zero.clone(); 4];
    for (f, t) in tr.iter_mut().enumerate() {
        for a in 0..4 {
            *t = &*t + gamma.get(a, f, a);
        }
    }
    let mut ric = Tensor2::zeros(like);
    for b in 0..4 {
        for c in 0..4 {
            let mut s = zero.clone();
            for a in 0..4 {
                s = s + deriv(a, gamma.get(a, b, c))? - deriv(c, gamma.get(a, b, a))?;
            }
            for f in 0..4 {
                s = s + gamma.get(f, b, c) * &tr[f];
                for a in 0..4 {
                    s = s
                        - gamma.get(f, b, a) * gamma.get(a, f, c)
                        - w.get(f, a, c) * gamma.get(a, b, f);
                }
            }
            ric.set(b, c, s);
        }
    }
    Ok(ric)
}

pub fn ricci_dtensor(g: &DMetric, conn: &DConnectionCoeffs) -> Result<Tensor2> {
    let w = nonholonomy_coefficients(g.nconn(), g.ord())?;
    ricci(conn.gamma(), &w, &g.frames())
}

/// Ricci d-tensor, scalar curvature (h- plus v-trace) and G = Ric - g R / 2.
pub fn einstein_dtensor(g: &DMetric) -> Result<EinsteinReport> {
    let conn = canonical_dconnection(g)?;
    let ricci = ricci_dtensor(g, &conn)?;
    let mut scalar = g.g1().map(|_| 0.0);
    for a in 0..4 {
        scalar = scalar + ricci.get(a, a) / g.diag(a);
    }
    let mut einstein = ricci.clone();
    for a in 0..4 {
        einstein.set(a, a, ricci.get(a, a) - 0.5 * (g.diag(a) * &scalar));
    }
    Ok(EinsteinReport {
        ricci,
        scalar,
        einstein,
    })
}
