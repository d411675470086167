use serde::{Deserialize, Serialize};

use super::dmetric::{DMetric, SourceSpec};
use super::nconn::V_AXIS;
use crate::error::{Error, Result};
use crate::fraccore::{unflatten, SampledField};

/// Max and mean of |residual| over the evaluated nodes.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct EqStat {
    pub max_abs: f64,
    pub mean_abs: f64,
}

impl EqStat {
    fn over<'a>(fields: impl IntoIterator<Item = &'a SampledField>, keep: &[bool]) -> Self {
        let (mut max, mut sum, mut count) = (0.0f64, 0.0, 0usize);
        for f in fields {
            for (v, _) in f.values().iter().zip(keep).filter(|(_, &k)| k) {
                max = max.max(v.abs());
                sum += v.abs();
                count += 1;
            }
        }
        Self {
            max_abs: max,
            mean_abs: if count > 0 { sum / count as f64 } else { 0.0 },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualOptions {
    /// Nodes dropped at each end of every axis long enough to have an interior.
    pub boundary_layer: usize,
    pub include_boundary: bool,
}

impl Default for ResidualOptions {
    fn default() -> Self {
        Self {
            boundary_layer: 2,
            include_boundary: false,
        }
    }
}

/// Violations of the Levi-Civita conditions
/// w_i* = e_i ln|h4|, e_1 w_2 = e_2 w_1, n_i* = 0, D_1 n_2 = D_2 n_1.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct LcReport {
    pub w_star: f64,
    pub w_curl: f64,
    pub n_star: f64,
    pub n_curl: f64,
}

impl LcReport {
    pub fn max(&self) -> f64 {
        self.w_star
            .max(self.w_curl)
            .max(self.n_star)
            .max(self.n_curl)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.max() <= tol
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub eq1: EqStat,
    pub eq2: EqStat,
    pub eq3: EqStat,
    pub eq4: EqStat,
    pub lc: Option<LcReport>,
    pub singular_nodes: usize,
    pub evaluated_nodes: usize,
    pub shape: Vec<usize>,
    pub boundary_layer: usize,
    /// The source is taken to be given in the N-adapted frame.
    pub source_frame: String,
}

impl ResidualReport {
    pub fn max(&self) -> f64 {
        self.eq1
            .max_abs
            .max(self.eq2.max_abs)
            .max(self.eq3.max_abs)
            .max(self.eq4.max_abs)
    }
}

/// Nodewise residuals; zero at masked (singular) nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualFields {
    pub eq1: SampledField,
    pub eq2: SampledField,
    pub eq3: [SampledField; 2],
    pub eq4: [SampledField; 2],
    pub singular: Vec<bool>,
}

/// Nodes kept in the reductions: nonsingular and, unless requested, off the boundary layers.
pub fn evaluation_mask(shape: &[usize], singular: &[bool], opts: &ResidualOptions) -> Vec<bool> {
    let bl = if opts.include_boundary {
        0
    } else {
        opts.boundary_layer
    };
    let mut idx = vec![0; shape.len()];
    (0..singular.len())
        .map(|flat| {
            unflatten(flat, shape, &mut idx);
            let inside = idx
                .iter()
                .zip(shape)
                .all(|(&i, &n)| n <= 2 * bl || (i >= bl && i + bl < n));
            inside && !singular[flat]
        })
        .collect()
}

fn check_source(g: &DMetric, src: &SourceSpec) -> Result<()> {
    if !src.ups2().same_grid(g.h4()) {
        return Err(Error::Shape(
            "source and metric live on different grids".into(),
        ));
    }
    Ok(())
}

/// Left side minus right side of the reduced system, per node:
///
/// eq1: -(g2.. - g1.g2./2g1 - (g2.)^2/2g2 + g1'' - g1'g2'/2g2 - (g1')^2/2g1)/(2 g1 g2) + Y4
/// eq2: -(h4** - (h4*)^2/2h4 - h3* h4*/2h3)/(2 h3 h4) + Y2
/// eq3: w_k B/(2h4) + h4*/(4h4) (D_k h3/h3 + D_k h4/h4) - D_k h4*/(2h4),  B the eq2 bracket
/// eq4: -h4/(2h3) (n_k** + (3h4*/2h4 - h3*/2h3) n_k*)
///
/// Dots, primes and stars are Caputo derivatives in x^1, x^2 and v; second
/// derivatives are composed, mixed ones take v innermost.
pub fn residual_fields(g: &DMetric, src: &SourceSpec) -> Result<ResidualFields> {
    check_source(g, src)?;
    let ord = g.ord();
    let d = |f: &SampledField, ax: usize| f.caputo_axis(ax, ord);
    let (g1, g2, h3, h4) = (g.g1(), g.g2(), g.h3(), g.h4());
    let singular = g.singular_mask();

    let g1x = d(g1, 0)?;
    let g2x = d(g2, 0)?;
    let g2xx = d(&g2x, 0)?;
    let g1y = d(g1, 1)?;
    let g2y = d(g2, 1)?;
    let g1yy = d(&g1y, 1)?;
    let h3v = d(h3, V_AXIS)?;
    let h4v = d(h4, V_AXIS)?;
    let h4vv = d(&h4v, V_AXIS)?;
    let h3k = [d(h3, 0)?, d(h3, 1)?];
    let h4k = [d(h4, 0)?, d(h4, 1)?];
    let h4vk = [d(&h4v, 0)?, d(&h4v, 1)?];
    let nv: Vec<SampledField> = (0..2).map(|k| d(g.n(k), V_AXIS)).collect::<Result<_>>()?;
    let nvv: Vec<SampledField> = nv.iter().map(|f| d(f, V_AXIS)).collect::<Result<_>>()?;
    let ups2 = src.ups2().values();
    let ups4 = src.ups4_3d();
    let ups4 = ups4.values();

    let n = g1.len();
    let mut r1 = vec![0.0; n];
    let mut r2 = vec![0.0; n];
    let mut r3 = [vec![0.0; n], vec![0.0; n]];
    let mut r4 = [vec![0.0; n], vec![0.0; n]];
    let v = |f: &SampledField, p: usize| f.values()[p];
    for p in 0..n {
        if singular[p] {
            continue;
        }
        let (a1, a2, b3, b4) = (v(g1, p), v(g2, p), v(h3, p), v(h4, p));
        let hb =
            v(&g2xx, p) - v(&g1x, p) * v(&g2x, p) / (2.0 * a1) - v(&g2x, p).powi(2) / (2.0 * a2)
                + v(&g1yy, p)
                - v(&g1y, p) * v(&g2y, p) / (2.0 * a2)
                - v(&g1y, p).powi(2) / (2.0 * a1);
        r1[p] = -hb / (2.0 * a1 * a2) + ups4[p];
        let (s3, s4) = (v(&h3v, p), v(&h4v, p));
        let vb = v(&h4vv, p) - s4 * s4 / (2.0 * b4) - s3 * s4 / (2.0 * b3);
        r2[p] = -vb / (2.0 * b3 * b4) + ups2[p];
        for k in 0..2 {
            r3[k][p] = v(g.w(k), p) * vb / (2.0 * b4)
                + s4 / (4.0 * b4) * (v(&h3k[k], p) / b3 + v(&h4k[k], p) / b4)
                - v(&h4vk[k], p) / (2.0 * b4);
            r4[k][p] =
                -b4 / (2.0 * b3) * (v(&nvv[k], p) + (1.5 * s4 / b4 - 0.5 * s3 / b3) * v(&nv[k], p));
        }
    }
    let [r3a, r3b] = r3;
    let [r4a, r4b] = r4;
    Ok(ResidualFields {
        eq1: g1.with_values(r1)?,
        eq2: g1.with_values(r2)?,
        eq3: [g1.with_values(r3a)?, g1.with_values(r3b)?],
        eq4: [g1.with_values(r4a)?, g1.with_values(r4b)?],
        singular,
    })
}

pub fn reduced_residuals(g: &DMetric, src: &SourceSpec) -> Result<ResidualReport> {
    reduced_residuals_with(g, src, &ResidualOptions::default())
}

pub fn reduced_residuals_with(
    g: &DMetric,
    src: &SourceSpec,
    opts: &ResidualOptions,
) -> Result<ResidualReport> {
    let r = residual_fields(g, src)?;
    let shape = g.g1().shape();
    let keep = evaluation_mask(&shape, &r.singular, opts);
    Ok(ResidualReport {
        eq1: EqStat::over([&r.eq1], &keep),
        eq2: EqStat::over([&r.eq2], &keep),
        eq3: EqStat::over(&r.eq3, &keep),
        eq4: EqStat::over(&r.eq4, &keep),
        lc: None,
        singular_nodes: r.singular.iter().filter(|s| **s).count(),
        evaluated_nodes: keep.iter().filter(|k| **k).count(),
        boundary_layer: if opts.include_boundary {
            0
        } else {
            opts.boundary_layer
        },
        shape,
        source_frame: "N-adapted".into(),
    })
}

/// ln|f| with zeros mapped to 0 (they are masked downstream).
pub fn ln_abs(f: &SampledField) -> SampledField {
    f.map(|x| if x == 0.0 { 0.0 } else { x.abs().ln() })
}

pub fn lc_conditions(g: &DMetric) -> Result<LcReport> {
    lc_conditions_with(g, &ResidualOptions::default())
}

pub fn lc_conditions_with(g: &DMetric, opts: &ResidualOptions) -> Result<LcReport> {
    let ord = g.ord();
    let fr = g.frames();
    let keep = evaluation_mask(&g.g1().shape(), &g.singular_mask(), opts);
    let mx = |f: &SampledField| super::tensor::masked_max(f, &keep);
    let lh4 = ln_abs(g.h4());
    let mut rep = LcReport::default();
    for i in 0..2 {
        let ws = g.w(i).caputo_axis(V_AXIS, ord)? - fr.apply(i, &lh4)?;
        rep.w_star = rep.w_star.max(mx(&ws));
        rep.n_star = rep.n_star.max(mx(&g.n(i).caputo_axis(V_AXIS, ord)?));
    }
    rep.w_curl = mx(&(fr.apply(0, g.w(1))? - fr.apply(1, g.w(0))?));
    rep.n_curl = mx(&(g.n(1).caputo_axis(0, ord)? - g.n(0).caputo_axis(1, ord)?));
    Ok(rep)
}
