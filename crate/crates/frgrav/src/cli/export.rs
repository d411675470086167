//! Grid files: CSV with one row per node (17 significant digits) or a single
//! JSON document with axes and flat value arrays.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::CliError;
use crate::fraccore::{FracOrder, Grid1D, SampledField};
use crate::geomframe::{DMetric, NConnection};

pub const METRIC_COLUMNS: [&str; 8] = ["g1", "g2", "h3", "h4", "w1", "w2", "n1", "n2"];
pub const AXIS_NAMES: [&str; 3] = ["x1", "x2", "v"];
pub const SCHEMA_VERSION: u32 = 1;

fn io(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| io(path, e))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| io(path, e))?;
    s.push('\n');
    write_text(path, &s)
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_table(axes: &[Grid1D], names: &[&str], columns: &[&[f64]]) -> String {
    let mut out = String::new();
    let header: Vec<&str> = AXIS_NAMES[..axes.len()]
        .iter()
        .chain(names)
        .copied()
        .collect();
    out.push_str(&header.join(","));
    out.push('\n');
    let shape: Vec<usize> = axes.iter().map(Grid1D::len).collect();
    let total: usize = shape.iter().product();
    let mut idx = vec![0usize; shape.len()];
    for flat in 0..total {
        let mut rem = flat;
        for a in (0..shape.len()).rev() {
            idx[a] = rem % shape[a];
            rem /= shape[a];
        }
        let mut cells: Vec<String> = idx
            .iter()
            .enumerate()
            .map(|(a, &i)| num(axes[a].nodes()[i]))
            .collect();
        cells.extend(columns.iter().map(|c| num(c[flat])));
        let _ = writeln!(out, "{}", cells.join(","));
    }
    out
}

/// One field as CSV: axis columns then `name`.
pub fn field_csv(f: &SampledField, name: &str) -> String {
    csv_table(f.axes(), &[name], &[f.values()])
}

fn metric_columns(g: &DMetric) -> [&[f64]; 8] {
    [
        g.g1().values(),
        g.g2().values(),
        g.h3().values(),
        g.h4().values(),
        g.w(0).values(),
        g.w(1).values(),
        g.n(0).values(),
        g.n(1).values(),
    ]
}

pub fn metric_csv(g: &DMetric) -> String {
    csv_table(g.axes(), &METRIC_COLUMNS, &metric_columns(g))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisRecord {
    pub name: String,
    pub nodes: Vec<f64>,
    pub terminal: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricDocument {
    pub schema_version: u32,
    pub alpha: f64,
    pub axes: Vec<AxisRecord>,
    pub g1: Vec<f64>,
    pub g2: Vec<f64>,
    pub h3: Vec<f64>,
    pub h4: Vec<f64>,
    pub w1: Vec<f64>,
    pub w2: Vec<f64>,
    pub n1: Vec<f64>,
    pub n2: Vec<f64>,
}

impl MetricDocument {
    pub fn from_metric(g: &DMetric) -> Self {
        let axes = g
            .axes()
            .iter()
            .zip(AXIS_NAMES)
            .map(|(a, n)| AxisRecord {
                name: n.into(),
                nodes: a.nodes().to_vec(),
                terminal: a.terminal(),
            })
            .collect();
        let [g1, g2, h3, h4, w1, w2, n1, n2] = metric_columns(g).map(<[f64]>::to_vec);
        Self {
            schema_version: SCHEMA_VERSION,
            alpha: g.ord().alpha(),
            axes,
            g1,
            g2,
            h3,
            h4,
            w1,
            w2,
            n1,
            n2,
        }
    }

    pub fn to_metric(&self) -> Result<DMetric, CliError> {
        let bad = |e: crate::Error| CliError::Config(format!("metric file: {e}"));
        if self.axes.len() != 3 {
            return Err(CliError::Config("metric file: expected three axes".into()));
        }
        let axes = self
            .axes
            .iter()
            .map(|a| Grid1D::new(a.nodes.clone(), a.terminal))
            .collect::<crate::Result<Vec<_>>>()
            .map_err(bad)?;
        let f = |v: &Vec<f64>| SampledField::new(axes.clone(), v.clone()).map_err(bad);
        let n = NConnection::new([f(&self.w1)?, f(&self.w2)?], [f(&self.n1)?, f(&self.n2)?])
            .map_err(bad)?;
        let ord = FracOrder::new(self.alpha).map_err(bad)?;
        DMetric::new(
            [f(&self.g1)?, f(&self.g2)?],
            [f(&self.h3)?, f(&self.h4)?],
            n,
            ord,
        )
        .map_err(bad)
    }
}

pub fn metric_json(g: &DMetric) -> Result<String, CliError> {
    serde_json::to_string(&MetricDocument::from_metric(g)).map_err(|e| CliError::Io(e.to_string()))
}

pub fn read_metric_json(text: &str) -> Result<DMetric, CliError> {
    let doc: MetricDocument = serde_json::from_str(text)
        .map_err(|e| CliError::Config(format!("metric file, line {}: {e}", e.line())))?;
    doc.to_metric()
}

/// Reads a metric CSV. Axis nodes are the distinct coordinate values in row
/// order; terminals and alpha are not stored in CSV and come from the caller.
pub fn read_metric_csv(
    text: &str,
    alpha: f64,
    terminals: Option<[f64; 3]>,
) -> Result<DMetric, CliError> {
    let bad = |m: String| CliError::Config(format!("metric file: {m}"));
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header: Vec<&str> = lines
        .next()
        .ok_or_else(|| bad("empty file".into()))?
        .split(',')
        .map(str::trim)
        .collect();
    let want: Vec<&str> = AXIS_NAMES.iter().chain(&METRIC_COLUMNS).copied().collect();
    if header != want {
        return Err(bad(format!("header must be {}", want.join(","))));
    }
    let mut cols: Vec<Vec<f64>> = vec![Vec::new(); want.len()];
    for (row, line) in lines.enumerate() {
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != want.len() {
            return Err(bad(format!("row {} has {} cells", row + 2, cells.len())));
        }
        for (c, cell) in cells.iter().enumerate() {
            let x = cell
                .trim()
                .parse::<f64>()
                .map_err(|_| bad(format!("row {}: bad number '{cell}'", row + 2)))?;
            cols[c].push(x);
        }
    }
    let mut axes = Vec::new();
    for a in 0..3 {
        let mut nodes: Vec<f64> = Vec::new();
        for &x in &cols[a] {
            if !nodes.contains(&x) {
                nodes.push(x);
            }
        }
        let t = terminals.map_or(nodes[0], |t| t[a]);
        axes.push(Grid1D::new(nodes, t).map_err(|e| bad(e.to_string()))?);
    }
    let total: usize = axes.iter().map(Grid1D::len).product();
    if total != cols[0].len() {
        return Err(bad(format!(
            "{} rows do not fill a {}x{}x{} grid",
            cols[0].len(),
            axes[0].len(),
            axes[1].len(),
            axes[2].len()
        )));
    }
    let doc = MetricDocument {
        schema_version: SCHEMA_VERSION,
        alpha,
        axes: axes
            .iter()
            .zip(AXIS_NAMES)
            .map(|(a, n)| AxisRecord {
                name: n.into(),
                nodes: a.nodes().to_vec(),
                terminal: a.terminal(),
            })
            .collect(),
        g1: cols[3].clone(),
        g2: cols[4].clone(),
        h3: cols[5].clone(),
        h4: cols[6].clone(),
        w1: cols[7].clone(),
        w2: cols[8].clone(),
        n1: cols[9].clone(),
        n2: cols[10].clone(),
    };
    doc.to_metric()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn metric() -> DMetric {
        let ax = vec![
            Grid1D::uniform(0.0, 1.0, 3).unwrap(),
            Grid1D::uniform(0.0, 1.0, 2).unwrap(),
            Grid1D::new(vec![0.1, 0.2, 0.7], 0.0).unwrap(),
        ];
        let f = |k: f64| {
            SampledField::from_fn(ax.clone(), |c| k + c[0] / 3.0 + c[1] * c[2].sin()).unwrap()
        };
        DMetric::new(
            [f(1.0), f(2.0)],
            [f(-1.0), f(0.5)],
            NConnection::new([f(0.1), f(0.2)], [f(0.3), f(0.4)]).unwrap(),
            FracOrder::new(0.7).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn small_field_has_one_row_per_node() {
        let f = SampledField::from_fn(
            vec![
                Grid1D::uniform(0.0, 1.0, 2).unwrap(),
                Grid1D::uniform(0.0, 1.0, 2).unwrap(),
            ],
            |c| c[0] + c[1],
        )
        .unwrap();
        let s = field_csv(&f, "u");
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[0], "x1,x2,u");
        assert_eq!(
            lines[4],
            "1.0000000000000000e0,1.0000000000000000e0,2.0000000000000000e0"
        );
    }

    #[test]
    fn metric_csv_has_schema_columns() {
        let s = metric_csv(&metric());
        assert_eq!(s.lines().next().unwrap(), "x1,x2,v,g1,g2,h3,h4,w1,w2,n1,n2");
        assert_eq!(s.lines().count(), 1 + 3 * 2 * 3);
    }

    #[test]
    fn json_round_trip_is_bitwise() {
        let g = metric();
        let back = read_metric_json(&metric_json(&g).unwrap()).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn csv_round_trip_is_bitwise_with_terminals() {
        let g = metric();
        let back = read_metric_csv(&metric_csv(&g), 0.7, Some([0.0, 0.0, 0.0])).unwrap();
        assert_eq!(back, g);
    }
}
