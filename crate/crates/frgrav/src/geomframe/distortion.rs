use super::dconn::{canonical_dconnection, check_blocks, metric_derivs, n_derivs};
use super::dmetric::DMetric;
use super::nconn::nonholonomy_coefficients;
use super::Tensor3;
use crate::error::Result;
use crate::fraccore::SampledField;

/// Distortion Z with G(Levi-Civita) = G(canonical) + Z in the N-adapted frame,
/// same index layout as the connection (Z^g_ab at [g][a][b], b the direction).
///
/// For a diagonal d-metric the nonzero blocks are
///   Z^a_jk = -d_jk e_a g_j / (2 h_a) - W^a_jk / 2
///   Z^i_kb = h_b W^b_ik / (2 g_i),   Z^i_bk = Z^i_kb + C^i_kb
///   Z^a_jb = Y^a_bj,   Z^i_ab = -(h_a Y^a_bi + h_b Y^b_ai) / (2 g_i)
/// with Y^a_bj = L^a_bj - e_b N^a_j. Z^i_jk, Z^a_bk and Z^a_bc vanish.
pub fn distortion_tensor(g: &DMetric) -> Result<Tensor3> {
    check_blocks(g)?;
    let conn = canonical_dconnection(g)?;
    let w = nonholonomy_coefficients(g.nconn(), g.ord())?;
    let dg = metric_derivs(g)?;
    let dn = n_derivs(g)?;
    let y =
        |a: usize, b: usize, j: usize| -> SampledField { conn.l_v(a, b, j) - &dn[a - 2][j][b - 2] };
    let mut z = Tensor3::zeros(g.g1());
    for a in 2..4 {
        for j in 0..2 {
            for k in 0..2 {
                let mut s = -0.5 * w.get(a, j, k);
                if j == k {
                    s = s - &dg[j][a] / g.diag(a) * 0.5;
                }
                z.set(a, j, k, s);
            }
        }
    }
    for i in 0..2 {
        for b in 2..4 {
            for k in 0..2 {
                let zkb = g.diag(b) * w.get(b, i, k) / g.diag(i) * 0.5;
                z.set(i, b, k, &zkb + conn.c_h(i, k, b));
                z.set(i, k, b, zkb);
            }
        }
    }
    for a in 2..4 {
        for b in 2..4 {
            for j in 0..2 {
                z.set(a, j, b, y(a, b, j));
            }
            for i in 0..2 {
                let s = g.diag(a) * y(a, b, i) + g.diag(b) * y(b, a, i);
                z.set(i, a, b, -0.5 * (s / g.diag(i)));
            }
        }
    }
    Ok(z)
}
