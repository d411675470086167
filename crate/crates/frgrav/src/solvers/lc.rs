use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geomframe::{
    evaluation_mask, lc_conditions_with, DMetric, LcReport, ResidualOptions, V_AXIS,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum FamilyTag {
    A,
    B,
    C,
    D,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LcSelection {
    pub family: FamilyTag,
    /// (condition, max violation) in evaluation order.
    pub conditions: Vec<(String, f64)>,
    pub generic: LcReport,
}

impl LcSelection {
    pub fn max(&self) -> f64 {
        self.conditions
            .iter()
            .map(|c| c.1)
            .fold(self.generic.max(), f64::max)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.max() <= tol
    }
}

/// Levi-Civita conditions written for the given family, on the interior
/// mask used by the residual report.
pub fn select_levi_civita(g: &DMetric, family: FamilyTag) -> Result<LcSelection> {
    let opts = ResidualOptions::default();
    let generic = lc_conditions_with(g, &opts)?;
    let keep = evaluation_mask(&g.g1().shape(), &g.singular_mask(), &opts);
    let mx = |f: &crate::fraccore::SampledField| crate::geomframe::tensor_masked_max(f, &keep);
    let mut conditions = vec![
        (
            "w_i* + w_i (ln|h4|)* - d_i ln|h4|".to_string(),
            generic.w_star,
        ),
        ("d_i w_k - d_k w_i".to_string(), generic.w_curl),
        ("n_k* (2n_k = 0)".to_string(), generic.n_star),
        ("d_i 1n_k - d_k 1n_i".to_string(), generic.n_curl),
    ];
    match family {
        FamilyTag::B => conditions.push((
            "h4* (0h4 depends on x only)".into(),
            mx(&g.h4().caputo_axis(V_AXIS, g.ord())?),
        )),
        FamilyTag::C => conditions.push((
            "h3* (0h3 depends on x only)".into(),
            mx(&g.h3().caputo_axis(V_AXIS, g.ord())?),
        )),
        FamilyTag::A | FamilyTag::D => {}
    }
    Ok(LcSelection {
        family,
        conditions,
        generic,
    })
}
