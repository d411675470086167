//! Run configuration: JSON with the keys alpha, grid, family, generators,
//! source, signs, tolerances and output. Unknown keys are rejected at every level.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::expr::{Expr, Var};
use super::CliError;
use crate::blackholes::HORIZON_MARGIN;
use crate::fraccore::{FracOrder, Grid1D};
use crate::solvers::Branch;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    #[serde(rename = "schwarzschild")]
    Schwarzschild,
    #[serde(rename = "rotoid")]
    Rotoid,
    #[serde(rename = "solrot")]
    Solrot,
    #[serde(rename = "oscillator")]
    Oscillator,
}

impl Family {
    pub fn is_blackhole(self) -> bool {
        matches!(
            self,
            Family::Schwarzschild | Family::Rotoid | Family::Solrot | Family::Oscillator
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::A => "A",
            Family::B => "B",
            Family::C => "C",
            Family::D => "D",
            Family::Schwarzschild => "schwarzschild",
            Family::Rotoid => "rotoid",
            Family::Solrot => "solrot",
            Family::Oscillator => "oscillator",
        }
    }

    /// Generator names accepted for this family.
    pub fn generator_names(self) -> &'static [&'static str] {
        match self {
            Family::A => &["phi", "h4_0", "n1_1", "n1_2", "n2_1", "n2_2", "psi"],
            Family::B => &[
                "h3", "h4_0", "w1", "w2", "n1_1", "n1_2", "n2_1", "n2_2", "psi",
            ],
            Family::C => &[
                "h3_0",
                "h4",
                "h4_start",
                "h4_start_slope",
                "w1",
                "w2",
                "n1_1",
                "n1_2",
                "n2_1",
                "n2_2",
                "psi",
            ],
            Family::D => &[
                "f",
                "varsigma40",
                "h0",
                "w1",
                "w2",
                "n1_1",
                "n1_2",
                "n2_1",
                "n2_2",
                "psi",
            ],
            Family::Schwarzschild => &["mu0", "eps", "margin", "b"],
            Family::Rotoid => ROTOID,
            Family::Solrot => SOLROT,
            Family::Oscillator => OSCILLATOR,
        }
    }
}

const ROTOID: &[&str] = &["mu0", "eps", "margin", "ratio", "omega0", "phi0", "mu1"];
const SOLROT: &[&str] = &[
    "mu0",
    "eps",
    "margin",
    "ratio",
    "omega0",
    "phi0",
    "mu1",
    "eta",
    "period_nodes",
];
const OSCILLATOR: &[&str] = &[
    "mu0",
    "eps",
    "margin",
    "ratio",
    "omega0",
    "phi0",
    "mu1",
    "eta",
    "period_nodes",
    "z1",
    "z2",
    "c1",
    "c2",
    "order",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    #[default]
    Uniform,
    /// Radii equally spaced in xi (blackhole runs only).
    Xi,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisSpec {
    pub min: f64,
    pub max: f64,
    pub n: usize,
    /// Lower terminal of the fractional derivatives; defaults to `min`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub terminal: Option<f64>,
    #[serde(default)]
    pub spacing: Spacing,
}

impl AxisSpec {
    pub fn nodes(&self) -> Vec<f64> {
        let h = (self.max - self.min) / (self.n - 1) as f64;
        (0..self.n)
            .map(|k| {
                if k + 1 == self.n {
                    self.max
                } else {
                    self.min + k as f64 * h
                }
            })
            .collect()
    }

    pub fn grid(&self) -> Result<Grid1D, CliError> {
        Grid1D::new(self.nodes(), self.terminal.unwrap_or(self.min))
            .map_err(|e| CliError::Config(format!("grid: {e}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub x1: AxisSpec,
    pub x2: AxisSpec,
    pub v: AxisSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceConfig {
    /// Y2 over (x1, x2, v).
    #[serde(default = "zero_expr")]
    pub ups2: String,
    /// Y4 over (x1, x2).
    #[serde(default = "zero_expr")]
    pub ups4: String,
}

fn zero_expr() -> String {
    "0".into()
}

impl Default for SourceConfig {
    fn default() -> Self {
        Self {
            ups2: zero_expr(),
            ups4: zero_expr(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BranchSign {
    Plus,
    #[default]
    Minus,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SignsConfig {
    #[serde(default)]
    pub branch: BranchSign,
    /// Sign of the solitonic equation.
    #[serde(default = "minus_one")]
    pub soliton: i8,
}

fn minus_one() -> i8 {
    -1
}

impl Default for SignsConfig {
    fn default() -> Self {
        Self {
            branch: BranchSign::Minus,
            soliton: -1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default = "default_residual")]
    pub residual: f64,
    #[serde(default = "default_lc")]
    pub lc: f64,
    #[serde(default = "default_solver")]
    pub solver: f64,
    /// Reduced equations that decide the exit code.
    #[serde(default = "all_equations")]
    pub equations: Vec<u8>,
}

fn default_residual() -> f64 {
    5e-3
}
fn default_lc() -> f64 {
    1e-6
}
fn default_solver() -> f64 {
    1e-6
}
fn all_equations() -> Vec<u8> {
    vec![1, 2, 3, 4]
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            residual: default_residual(),
            lc: default_lc(),
            solver: default_solver(),
            equations: all_equations(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default = "default_dir")]
    pub dir: PathBuf,
    #[serde(default)]
    pub format: Format,
}

fn default_dir() -> PathBuf {
    PathBuf::from("out")
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            dir: default_dir(),
            format: Format::Csv,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub alpha: f64,
    pub grid: GridConfig,
    pub family: Family,
    #[serde(default)]
    pub generators: BTreeMap<String, String>,
    #[serde(default)]
    pub source: SourceConfig,
    #[serde(default)]
    pub signs: SignsConfig,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub output: OutputConfig,
}

/// Parsed generators of a validated config.
#[derive(Debug, Clone)]
pub struct Generators(BTreeMap<String, Expr>);

impl Generators {
    pub fn expr(&self, name: &str) -> Option<&Expr> {
        self.0.get(name)
    }

    pub fn number(&self, name: &str, default: f64) -> Result<f64, CliError> {
        match self.0.get(name) {
            None => Ok(default),
            Some(e) => e
                .constant()
                .ok_or_else(|| CliError::Config(format!("generator '{name}' must be a constant"))),
        }
    }

    pub fn count(&self, name: &str, default: usize) -> Result<usize, CliError> {
        let x = self.number(name, default as f64)?;
        if x < 0.0 || x.fract() != 0.0 || x > 1e7 {
            return Err(CliError::Config(format!(
                "generator '{name}' must be a non-negative integer"
            )));
        }
        Ok(x as usize)
    }

    pub fn require(&self, name: &str) -> Result<&Expr, CliError> {
        self.expr(name)
            .ok_or_else(|| CliError::Config(format!("missing generator '{name}'")))
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| {
            CliError::Config(format!("line {} column {}: {e}", e.line(), e.column()))
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text).map_err(|e| match e {
            CliError::Config(m) => CliError::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn order(&self) -> Result<FracOrder, CliError> {
        FracOrder::new(self.alpha).map_err(|e| CliError::Config(format!("alpha: {e}")))
    }

    pub fn branch(&self) -> Branch {
        match self.signs.branch {
            BranchSign::Plus => Branch::Plus,
            BranchSign::Minus => Branch::Minus,
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.order()?;
        for (name, ax) in [
            ("x1", &self.grid.x1),
            ("x2", &self.grid.x2),
            ("v", &self.grid.v),
        ] {
            if ax.n < 3 || !(ax.max > ax.min) || !ax.min.is_finite() || !ax.max.is_finite() {
                return Err(CliError::Config(format!(
                    "grid.{name}: need n >= 3 and min < max"
                )));
            }
            if ax.terminal.is_some_and(|t| !(t <= ax.min)) {
                return Err(CliError::Config(format!(
                    "grid.{name}: terminal must not exceed min"
                )));
            }
            if ax.spacing == Spacing::Xi && (name != "x1" || !self.family.is_blackhole()) {
                return Err(CliError::Config(format!(
                    "grid.{name}: xi spacing applies to the radial axis of blackhole runs"
                )));
            }
        }
        let allowed = self.family.generator_names();
        for name in self.generators.keys() {
            if !allowed.contains(&name.as_str()) {
                return Err(CliError::Config(format!(
                    "generator '{name}' is not used by family {}; expected one of {}",
                    self.family.name(),
                    allowed.join(", ")
                )));
            }
        }
        let gens = self.generators()?;
        for two_d in ["h4_0", "h3_0", "varsigma40", "n1_1", "n1_2", "n2_1", "n2_2"] {
            if gens.expr(two_d).is_some_and(|e| e.uses(Var::V)) {
                return Err(CliError::Config(format!(
                    "generator '{two_d}' must not depend on v"
                )));
            }
        }
        let ups4: Expr = parse("source.ups4", &self.source.ups4)?;
        parse("source.ups2", &self.source.ups2)?;
        if ups4.uses(Var::V) {
            return Err(CliError::Config("source.ups4 must not depend on v".into()));
        }
        if self.family.is_blackhole()
            && (self.source.ups2.trim() != "0" || self.source.ups4.trim() != "0")
        {
            return Err(CliError::Config(
                "blackhole runs are vacuum; source must be zero".into(),
            ));
        }
        if !matches!(self.signs.soliton, -1 | 1) {
            return Err(CliError::Config("signs.soliton must be 1 or -1".into()));
        }
        let t = &self.tolerances;
        if !(t.residual > 0.0 && t.lc > 0.0 && t.solver > 0.0) {
            return Err(CliError::Config("tolerances must be positive".into()));
        }
        if t.equations.is_empty() || t.equations.iter().any(|e| !(1..=4).contains(e)) {
            return Err(CliError::Config(
                "tolerances.equations must list equations 1 to 4".into(),
            ));
        }
        Ok(())
    }

    pub fn generators(&self) -> Result<Generators, CliError> {
        self.generators
            .iter()
            .map(|(k, s)| Ok((k.clone(), parse(&format!("generators.{k}"), s)?)))
            .collect::<Result<_, CliError>>()
            .map(Generators)
    }

    pub fn blackhole_margin(&self) -> Result<f64, CliError> {
        self.generators()?.number("margin", HORIZON_MARGIN)
    }
}

pub(crate) fn parse(what: &str, s: &str) -> Result<Expr, CliError> {
    s.parse()
        .map_err(|e| CliError::Config(format!("{what}: {e}")))
}
