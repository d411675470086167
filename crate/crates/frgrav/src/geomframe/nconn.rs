use serde::{Deserialize, Serialize};

use super::Tensor3;
use crate::error::{Error, Result};
use crate::fraccore::{FracOrder, SampledField};

/// Axis of the vertical coordinate v = y^3 in every 3-axis field.
pub const V_AXIS: usize = 2;

/// N-connection coefficients N^a_i over (x^1, x^2, v); N^3_i = w_i, N^4_i = n_i.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NConnection {
    w: [SampledField; 2],
    n: [SampledField; 2],
}

impl NConnection {
    pub fn new(w: [SampledField; 2], n: [SampledField; 2]) -> Result<Self> {
        let first = &w[0];
        if first.ndim() != 3 {
            return Err(Error::Shape(format!(
                "N-connection needs 3-axis fields, got {}",
                first.ndim()
            )));
        }
        if w.iter().chain(n.iter()).any(|f| !f.same_grid(first)) {
            return Err(Error::Shape(
                "N-connection components on different grids".into(),
            ));
        }
        Ok(Self { w, n })
    }

    pub fn zero(like: &SampledField) -> Result<Self> {
        let z = like.map(|_| 0.0);
        Self::new([z.clone(), z.clone()], [z.clone(), z])
    }

    pub fn w(&self, i: usize) -> &SampledField {
        &self.w[i]
    }

    pub fn n(&self, i: usize) -> &SampledField {
        &self.n[i]
    }

    /// N^a_i with a in {2, 3} (0-based frame index) and i in {0, 1}.
    pub fn coeff(&self, a: usize, i: usize) -> &SampledField {
        match a {
            2 => &self.w[i],
            3 => &self.n[i],
            _ => panic!("vertical index must be 2 or 3, got {a}"),
        }
    }

    pub fn grid_like(&self) -> &SampledField {
        &self.w[0]
    }
}

/// N-adapted frame e_i = D_i - N^a_i D_a, e_a = D_a, with D the Caputo
/// derivative of order `ord`. Indices run 0..4 over (x^1, x^2, v, y^4);
/// nothing depends on y^4, so e_3 annihilates every field.
#[derive(Debug, Clone)]
pub struct Frames {
    n: NConnection,
    ord: FracOrder,
}

pub fn build_frames(n: &NConnection, ord: FracOrder) -> Frames {
    Frames { n: n.clone(), ord }
}

impl Frames {
    pub fn nconn(&self) -> &NConnection {
        &self.n
    }

    pub fn ord(&self) -> FracOrder {
        self.ord
    }

    fn check(&self, f: &SampledField) -> Result<()> {
        if f.same_grid(self.n.grid_like()) {
            Ok(())
        } else {
            Err(Error::Shape(
                "field and frame live on different grids".into(),
            ))
        }
    }

    /// e_beta f.
    pub fn apply(&self, beta: usize, f: &SampledField) -> Result<SampledField> {
        self.check(f)?;
        match beta {
            0 | 1 => {
                let dv = f.caputo_axis(V_AXIS, self.ord)?;
                Ok(f.caputo_axis(beta, self.ord)? - self.n.w(beta) * &dv)
            }
            2 => f.caputo_axis(V_AXIS, self.ord),
            3 => Ok(f.map(|_| 0.0)),
            _ => Err(Error::Shape(format!("frame index {beta} out of range"))),
        }
    }

    /// All four frame derivatives, sharing one v-derivative.
    pub fn all(&self, f: &SampledField) -> Result<[SampledField; 4]> {
        self.check(f)?;
        let dv = f.caputo_axis(V_AXIS, self.ord)?;
        let e0 = f.caputo_axis(0, self.ord)? - self.n.w(0) * &dv;
        let e1 = f.caputo_axis(1, self.ord)? - self.n.w(1) * &dv;
        let zero = f.map(|_| 0.0);
        Ok([e0, e1, dv, zero])
    }

    /// Rows are e_beta in the coordinate basis (d_1, d_2, d_v, d_4) at a node.
    pub fn frame_matrix(&self, flat: usize) -> [[f64; 4]; 4] {
        let w = [self.n.w(0).values()[flat], self.n.w(1).values()[flat]];
        let n = [self.n.n(0).values()[flat], self.n.n(1).values()[flat]];
        [
            [1.0, 0.0, -w[0], -n[0]],
            [0.0, 1.0, -w[1], -n[1]],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ]
    }

    /// Rows are e^alpha in the coordinate cobasis (dx^1, dx^2, dv, dy^4) at a node.
    pub fn coframe_matrix(&self, flat: usize) -> [[f64; 4]; 4] {
        let w = [self.n.w(0).values()[flat], self.n.w(1).values()[flat]];
        let n = [self.n.n(0).values()[flat], self.n.n(1).values()[flat]];
        [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [w[0], w[1], 1.0, 0.0],
            [n[0], n[1], 0.0, 1.0],
        ]
    }

    /// Pairing e^alpha(e_beta); the identity up to roundoff.
    pub fn pairing(&self, flat: usize) -> [[f64; 4]; 4] {
        let f = self.frame_matrix(flat);
        let c = self.coframe_matrix(flat);
        let mut p = [[0.0; 4]; 4];
        for (a, row) in p.iter_mut().enumerate() {
            for (b, v) in row.iter_mut().enumerate() {
                *v = (0..4).map(|m| c[a][m] * f[b][m]).sum();
            }
        }
        p
    }
}

/// Anholonomy coefficients W^g_ab with [e_a, e_b] = W^g_ab e_g:
/// W^a_ib = D_b N^a_i, W^a_bi = -W^a_ib and W^a_ij = e_j N^a_i - e_i N^a_j.
pub fn nonholonomy_coefficients(n: &NConnection, ord: FracOrder) -> Result<Tensor3> {
    let fr = build_frames(n, ord);
    let mut w = Tensor3::zeros(n.grid_like());
    for a in 2..4 {
        for i in 0..2 {
            let dv = n.coeff(a, i).caputo_axis(V_AXIS, ord)?;
            w.set(a, i, 2, dv.clone());
            w.set(a, 2, i, -dv);
        }
        let omega = fr.apply(1, n.coeff(a, 0))? - fr.apply(0, n.coeff(a, 1))?;
        w.set(a, 0, 1, omega.clone());
        w.set(a, 1, 0, -omega);
    }
    Ok(w)
}
