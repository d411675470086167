use serde::{Deserialize, Serialize};

use super::nconn::{build_frames, Frames, NConnection};
use crate::error::{Error, Result};
use crate::fraccore::{FracOrder, Grid1D, SampledField};

/// Relative size below which a diagonal coefficient counts as vanishing at a node.
pub const SINGULAR_TOL: f64 = 1e-10;

/// Ansatz g = g_i dx^i dx^i + h_a e^a e^a with e^3 = dv + w_i dx^i,
/// e^4 = dy^4 + n_i dx^i. Every coefficient is a 3-axis field over
/// (x^1, x^2, v); y^4 is Killing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DMetric {
    g1: SampledField,
    g2: SampledField,
    h3: SampledField,
    h4: SampledField,
    nconn: NConnection,
    ord: FracOrder,
    signature: [i8; 4],
}

fn block_sign(f: &SampledField) -> i8 {
    f.values()
        .iter()
        .find(|v| **v != 0.0)
        .map_or(0, |v| if *v > 0.0 { 1 } else { -1 })
}

impl DMetric {
    pub fn new(
        g: [SampledField; 2],
        h: [SampledField; 2],
        nconn: NConnection,
        ord: FracOrder,
    ) -> Result<Self> {
        let [g1, g2] = g;
        let [h3, h4] = h;
        let like = nconn.grid_like();
        for (name, f) in [("g1", &g1), ("g2", &g2), ("h3", &h3), ("h4", &h4)] {
            if !f.same_grid(like) {
                return Err(Error::Shape(format!(
                    "{name} is not on the N-connection grid"
                )));
            }
            if f.values().iter().all(|v| *v == 0.0) {
                return Err(Error::Degenerate(format!("{name} vanishes identically")));
            }
        }
        let signature = [
            block_sign(&g1),
            block_sign(&g2),
            block_sign(&h3),
            block_sign(&h4),
        ];
        Ok(Self {
            g1,
            g2,
            h3,
            h4,
            nconn,
            ord,
            signature,
        })
    }

    /// Diagonal N-adapted component g_aa, a in 0..4.
    pub fn diag(&self, a: usize) -> &SampledField {
        match a {
            0 => &self.g1,
            1 => &self.g2,
            2 => &self.h3,
            3 => &self.h4,
            _ => panic!("metric index {a} out of range"),
        }
    }

    pub fn g1(&self) -> &SampledField {
        &self.g1
    }
    pub fn g2(&self) -> &SampledField {
        &self.g2
    }
    pub fn h3(&self) -> &SampledField {
        &self.h3
    }
    pub fn h4(&self) -> &SampledField {
        &self.h4
    }
    pub fn w(&self, i: usize) -> &SampledField {
        self.nconn.w(i)
    }
    pub fn n(&self, i: usize) -> &SampledField {
        self.nconn.n(i)
    }
    pub fn nconn(&self) -> &NConnection {
        &self.nconn
    }
    pub fn ord(&self) -> FracOrder {
        self.ord
    }
    /// Sign of each diagonal block at its first nonzero node.
    pub fn signature(&self) -> [i8; 4] {
        self.signature
    }
    pub fn axes(&self) -> &[Grid1D] {
        self.g1.axes()
    }

    pub fn frames(&self) -> Frames {
        build_frames(&self.nconn, self.ord)
    }

    /// Same metric with new h-coefficients (keeps everything else).
    pub fn with_h(&self, h3: SampledField, h4: SampledField) -> Result<Self> {
        Self::new(
            [self.g1.clone(), self.g2.clone()],
            [h3, h4],
            self.nconn.clone(),
            self.ord,
        )
    }

    pub fn with_nconn(&self, nconn: NConnection) -> Result<Self> {
        Self::new(
            [self.g1.clone(), self.g2.clone()],
            [self.h3.clone(), self.h4.clone()],
            nconn,
            self.ord,
        )
    }

    /// True where some diagonal coefficient vanishes (horizons, degenerate nodes).
    pub fn singular_mask(&self) -> Vec<bool> {
        let scales: Vec<f64> = (0..4).map(|a| self.diag(a).max_abs()).collect();
        (0..self.g1.len())
            .map(|k| (0..4).any(|a| self.diag(a).values()[k].abs() <= SINGULAR_TOL * scales[a]))
            .collect()
    }
}

/// Diagonal source with Y_1 = Y_2 = Y2(x^k, v)
/// and Y_3 = Y_4 = Y4(x^k).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SourceSpec {
    ups2: SampledField,
    ups4: SampledField,
}

impl SourceSpec {
    pub fn new(ups2: SampledField, ups4: SampledField) -> Result<Self> {
        if ups2.ndim() != 3 || ups4.ndim() != 2 {
            return Err(Error::Shape(
                "source needs Y2 over (x1, x2, v) and Y4 over (x1, x2)".into(),
            ));
        }
        if ups2.axes()[..2] != *ups4.axes() {
            return Err(Error::Shape(
                "Y2 and Y4 disagree on the horizontal grid".into(),
            ));
        }
        Ok(Self { ups2, ups4 })
    }

    pub fn vacuum(axes: &[Grid1D]) -> Result<Self> {
        Self::uniform(axes, 0.0, 0.0)
    }

    pub fn uniform(axes: &[Grid1D], y2: f64, y4: f64) -> Result<Self> {
        Self::new(
            SampledField::constant(axes.to_vec(), y2)?,
            SampledField::constant(axes[..2].to_vec(), y4)?,
        )
    }

    pub fn ups2(&self) -> &SampledField {
        &self.ups2
    }

    pub fn ups4(&self) -> &SampledField {
        &self.ups4
    }

    /// Y4 broadcast along v onto the 3-axis grid.
    pub fn ups4_3d(&self) -> SampledField {
        broadcast_v(&self.ups4, self.ups2.axis(2))
    }
}

/// Extends a field over (x^1, x^2) to (x^1, x^2, v), constant in v.
pub fn broadcast_v(f: &SampledField, v: &Grid1D) -> SampledField {
    let nv = v.len();
    let values = f
        .values()
        .iter()
        .flat_map(|&x| std::iter::repeat_n(x, nv))
        .collect();
    let mut axes = f.axes().to_vec();
    axes.push(v.clone());
    SampledField::new(axes, values).expect("broadcast of a valid field")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn axes() -> Vec<Grid1D> {
        vec![
            Grid1D::uniform(0.0, 1.0, 4).unwrap(),
            Grid1D::uniform(0.0, 1.0, 5).unwrap(),
            Grid1D::uniform(0.0, 1.0, 6).unwrap(),
        ]
    }

    #[test]
    fn rejects_identically_zero_blocks_and_records_signature() {
        let one = SampledField::constant(axes(), 1.0).unwrap();
        let zero = one.map(|_| 0.0);
        let n = NConnection::zero(&one).unwrap();
        let h = FracOrder::integer();
        let bad = DMetric::new(
            [one.clone(), one.clone()],
            [zero, one.clone()],
            n.clone(),
            h,
        );
        assert!(matches!(bad, Err(Error::Degenerate(_))));
        let g = DMetric::new([one.clone(), one.clone()], [-&one, one.clone()], n, h).unwrap();
        assert_eq!(g.signature(), [1, 1, -1, 1]);
        assert!(g.singular_mask().iter().all(|m| !m));
    }

    #[test]
    fn isolated_zero_is_masked() {
        let one = SampledField::constant(axes(), 1.0).unwrap();
        let h4 = SampledField::from_fn(axes(), |c| c[2]).unwrap();
        let g = DMetric::new(
            [one.clone(), one.clone()],
            [one.clone(), h4],
            NConnection::zero(&one).unwrap(),
            FracOrder::integer(),
        )
        .unwrap();
        assert_eq!(g.singular_mask().iter().filter(|m| **m).count(), 4 * 5);
    }

    #[test]
    fn broadcast_is_constant_in_v() {
        let a = axes();
        let f = SampledField::from_fn(a[..2].to_vec(), |c| c[0] + 2.0 * c[1]).unwrap();
        let b = broadcast_v(&f, &a[2]);
        assert_eq!(b.get(&[2, 3, 0]), b.get(&[2, 3, 5]));
        assert_eq!(b.get(&[2, 3, 4]), f.get(&[2, 3]));
    }
}
