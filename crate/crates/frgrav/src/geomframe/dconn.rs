use serde::{Deserialize, Serialize};

use super::dmetric::DMetric;
use super::nconn::{nonholonomy_coefficients, V_AXIS};
use super::Tensor3;
use crate::error::{Error, Result};
use crate::fraccore::SampledField;

/// Smallest |det| of a diagonal block accepted by the connection builders.
pub const DET_TOL: f64 = 1e-12;

/// Canonical d-connection coefficients in N-adapted form, stored as the full
/// array G^g_ab with D_{e_b} e_a = G^g_ab e_g. Only four blocks are nonzero:
/// L^i_jk, L^a_bk, C^i_jc and C^a_bc (i, j, k in 0..2; a, b, c in 2..4).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DConnectionCoeffs {
    gamma: Tensor3,
}

impl DConnectionCoeffs {
    pub fn l_h(&self, i: usize, j: usize, k: usize) -> &SampledField {
        self.gamma.get(i, j, k)
    }
    pub fn l_v(&self, a: usize, b: usize, k: usize) -> &SampledField {
        self.gamma.get(a, b, k)
    }
    pub fn c_h(&self, i: usize, j: usize, c: usize) -> &SampledField {
        self.gamma.get(i, j, c)
    }
    pub fn c_v(&self, a: usize, b: usize, c: usize) -> &SampledField {
        self.gamma.get(a, b, c)
    }
    pub fn gamma(&self) -> &Tensor3 {
        &self.gamma
    }
}

pub(crate) fn check_blocks(g: &DMetric) -> Result<()> {
    let hdet = g.g1() * g.g2();
    let vdet = g.h3() * g.h4();
    for (name, d) in [("h", &hdet), ("v", &vdet)] {
        if let Some(k) = d.values().iter().position(|x| x.abs() < DET_TOL) {
            return Err(Error::Degenerate(format!(
                "{name}-block determinant below {DET_TOL:e} at flat node {k}"
            )));
        }
    }
    Ok(())
}

/// Frame derivatives e_b g_aa of the diagonal metric, indexed [a][b].
pub(crate) fn metric_derivs(g: &DMetric) -> Result<Vec<[SampledField; 4]>> {
    let fr = g.frames();
    (0..4).map(|a| fr.all(g.diag(a))).collect()
}

/// e_b N^a_k for vertical b, indexed [a - 2][k][b - 2]; e_3 gives zero.
pub(crate) fn n_derivs(g: &DMetric) -> Result<Vec<Vec<[SampledField; 2]>>> {
    let ord = g.ord();
    (2..4)
        .map(|a| {
            (0..2)
                .map(|k| {
                    let f = g.nconn().coeff(a, k);
                    Ok([f.caputo_axis(V_AXIS, ord)?, f.map(|_| 0.0)])
                })
                .collect()
        })
        .collect()
}

/// Canonical d-connection of a diagonal d-metric, every derivative taken
/// through the N-adapted Caputo frame.
pub fn canonical_dconnection(g: &DMetric) -> Result<DConnectionCoeffs> {
    check_blocks(g)?;
    let dg = metric_derivs(g)?;
    let dn = n_derivs(g)?;
    let mut gamma = Tensor3::zeros(g.g1());
    let inv: Vec<SampledField> = (0..4).map(|a| g.diag(a).map(|x| 0.5 / x)).collect();
    let d = |x: usize, y: usize| if x == y { 1.0 } else { 0.0 };

    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                let s = d(i, j) * &dg[i][k] + d(i, k) * &dg[i][j] - d(j, k) * &dg[j][i];
                gamma.set(i, j, k, &inv[i] * &s);
            }
            for c in 2..4 {
                gamma.set(i, j, c, d(i, j) * (&inv[i] * &dg[i][c]));
            }
        }
    }
    for a in 2..4 {
        for b in 2..4 {
            for k in 0..2 {
                let ebna = &dn[a - 2][k][b - 2];
                let ea_nb = &dn[b - 2][k][a - 2];
                let s = d(a, b) * &dg[a][k] - g.diag(a) * ebna - g.diag(b) * ea_nb;
                gamma.set(a, b, k, ebna + &inv[a] * &s);
            }
            for c in 2..4 {
                let s = d(a, b) * &dg[a][c] + d(a, c) * &dg[a][b] - d(b, c) * &dg[b][a];
                gamma.set(a, b, c, &inv[a] * &s);
            }
        }
    }
    Ok(DConnectionCoeffs { gamma })
}

/// Torsion T^g_ab = G^g_ba - G^g_ab - W^g_ab of a connection in the N-adapted frame.
pub fn torsion(g: &DMetric, conn: &DConnectionCoeffs) -> Result<Tensor3> {
    let w = nonholonomy_coefficients(g.nconn(), g.ord())?;
    let gm = conn.gamma();
    let mut t = Tensor3::zeros(g.g1());
    for c in 0..4 {
        for a in 0..4 {
            for b in 0..4 {
                t.set(c, a, b, gm.get(c, b, a) - gm.get(c, a, b) - w.get(c, a, b));
            }
        }
    }
    Ok(t)
}

/// Nonmetricity Q_cab = e_c g_ab - G^m_ac g_mb - G^m_bc g_am, stored at [c][a][b].
pub fn nonmetricity(g: &DMetric, conn: &DConnectionCoeffs) -> Result<Tensor3> {
    let dg = metric_derivs(g)?;
    let gm = conn.gamma();
    let mut q = Tensor3::zeros(g.g1());
    for c in 0..4 {
        for a in 0..4 {
            for b in 0..4 {
                let mut s = gm.get(b, a, c) * g.diag(b) + gm.get(a, b, c) * g.diag(a);
                if a == b {
                    s = &dg[a][c] - &s;
                } else {
                    s = -s;
                }
                q.set(c, a, b, s);
            }
        }
    }
    Ok(q)
}
