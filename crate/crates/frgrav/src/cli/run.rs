use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use super::config::{parse, Family, Format, Generators, RunConfig, Spacing};
use super::export::{self, write_json, write_text};
use super::expr::Expr;
use super::CliError;
use crate::blackholes::{
    fractional_deformation, horizon_curve, oscillator_embedded_metric, oscillator_residual,
    oscillator_series, prime_schwarzschild, rotoid_metric, solitonic_eta, solitonic_rotoid,
    uniform_xi_radii, HorizonPoint, PrimeData, RotoidData, SolitonOptions, DEFAULT_TRUNCATION,
    HORIZON_MARGIN,
};
use crate::fraccore::{caputo_left, FracOrder, Grid1D, SampledField};
use crate::geomframe::{reduced_residuals, DMetric, ResidualReport, SourceSpec};
use crate::solvers::{
    family_a, family_b, family_c, family_d, select_levi_civita, FamilyTag, GeneratingData,
    LcSelection, PsiBoundary,
};

pub const REPORT_SCHEMA: u32 = 1;
/// Radial samples used to locate the horizon, spread over [mu0, 4 mu0].
const HORIZON_SAMPLES: usize = 20001;

/// Exit-code decision: the largest max-residual over `equations`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Gate {
    pub equations: Vec<u8>,
    pub tolerance: f64,
    pub max: f64,
    pub passed: bool,
}

impl Gate {
    fn new(rep: &ResidualReport, equations: &[u8], tolerance: f64) -> Self {
        let stat = |e: u8| match e {
            1 => rep.eq1.max_abs,
            2 => rep.eq2.max_abs,
            3 => rep.eq3.max_abs,
            _ => rep.eq4.max_abs,
        };
        // NaN propagates so that a non-finite residual fails the gate
        let max = equations.iter().map(|&e| stat(e)).fold(0.0, |m: f64, x| {
            if x.is_nan() || m.is_nan() {
                f64::NAN
            } else {
                m.max(x)
            }
        });
        Self {
            equations: equations.to_vec(),
            tolerance,
            max,
            passed: max <= tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunReport {
    pub schema_version: u32,
    pub family: Family,
    pub alpha: f64,
    pub shape: Vec<usize>,
    pub residuals: ResidualReport,
    pub lc: Option<LcSelection>,
    pub gate: Gate,
    /// Family-specific diagnostics.
    pub checks: Value,
    pub finite: bool,
    pub outputs: Vec<String>,
    pub config: RunConfig,
    pub timing_ms: f64,
}

impl RunReport {
    pub fn summary_line(&self) -> String {
        format!(
            "{} alpha={} max residual {:.3e} (tolerance {:.1e}, equations {:?}): {}",
            self.family.name(),
            self.alpha,
            self.gate.max,
            self.gate.tolerance,
            self.gate.equations,
            if self.gate.passed {
                "ok"
            } else {
                "above tolerance"
            }
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyReport {
    pub schema_version: u32,
    pub alpha: f64,
    pub shape: Vec<usize>,
    pub residuals: ResidualReport,
    pub gate: Gate,
}

/// Source description written next to every metric, read back by `verify`.
/// Expressions are evaluated at the metric's own coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceFile {
    pub alpha: f64,
    pub terminals: [f64; 3],
    pub ups2: String,
    pub ups4: String,
    pub tolerance: f64,
    pub equations: Vec<u8>,
}

struct Built {
    metric: DMetric,
    source: SourceSpec,
    lc: Option<LcSelection>,
    checks: Value,
    horizon: Option<Vec<HorizonPoint>>,
}

fn field3(axes: &[Grid1D], e: &Expr) -> Result<SampledField, CliError> {
    Ok(SampledField::from_fn(axes.to_vec(), |c| {
        e.eval(c[0], c[1], c[2])
    })?)
}

fn field2(axes: &[Grid1D], e: &Expr) -> Result<SampledField, CliError> {
    Ok(SampledField::from_fn(axes[..2].to_vec(), |c| {
        e.eval(c[0], c[1], 0.0)
    })?)
}

fn source_on(axes: &[Grid1D], ups2: &str, ups4: &str) -> Result<SourceSpec, CliError> {
    let y2 = field3(axes, &parse("source.ups2", ups2)?)?;
    let y4 = field2(axes, &parse("source.ups4", ups4)?)?;
    Ok(SourceSpec::new(y2, y4)?)
}

fn build_family(cfg: &RunConfig, gens: &Generators, ord: FracOrder) -> Result<Built, CliError> {
    let axes = vec![cfg.grid.x1.grid()?, cfg.grid.x2.grid()?, cfg.grid.v.grid()?];
    let source = source_on(&axes, &cfg.source.ups2, &cfg.source.ups4)?;
    let f3 = |n: &str| gens.expr(n).map(|e| field3(&axes, e)).transpose();
    let f2 = |n: &str| gens.expr(n).map(|e| field2(&axes, e)).transpose();
    let pair = |a: Option<SampledField>, b: Option<SampledField>, like: SampledField| match (a, b) {
        (None, None) => None,
        (a, b) => Some([a.unwrap_or_else(|| like.clone()), b.unwrap_or(like)]),
    };
    let zero2 = SampledField::constant(axes[..2].to_vec(), 0.0)?;
    let zero3 = SampledField::constant(axes.clone(), 0.0)?;
    let psi = match gens.expr("psi") {
        None => PsiBoundary::Constant(0.0),
        Some(e) => match e.constant() {
            Some(c) => PsiBoundary::Constant(c),
            None => PsiBoundary::Values(field2(&axes, e)?),
        },
    };
    let gen = GeneratingData {
        phi: f3("phi")?,
        f: f3("f")?,
        h3: f3("h3")?,
        h4: f3("h4")?,
        w: pair(f3("w1")?, f3("w2")?, zero3),
        n1: pair(f2("n1_1")?, f2("n1_2")?, zero2.clone()),
        n2: pair(f2("n2_1")?, f2("n2_2")?, zero2),
        h4_0: f2("h4_0")?,
        h3_0: f2("h3_0")?,
        varsigma40: f2("varsigma40")?,
        h0: gens.number("h0", 1.0)?,
        h4_start: (
            gens.number("h4_start", 1.0)?,
            gens.number("h4_start_slope", 1.0)?,
        ),
        branch: cfg.branch(),
        psi,
        ..Default::default()
    };
    let (metric, tag) = match cfg.family {
        Family::A => (family_a(&gen, &source, ord)?, FamilyTag::A),
        Family::B => (family_b(&gen, &source, ord)?, FamilyTag::B),
        Family::C => (family_c(&gen, &source, ord)?, FamilyTag::C),
        Family::D => (family_d(&gen, &source, ord)?, FamilyTag::D),
        _ => unreachable!("blackhole families are built elsewhere"),
    };
    let lc = select_levi_civita(&metric, tag)?;
    let checks = json!({ "lc_max": lc.max(), "lc_passed": lc.passes(cfg.tolerances.lc), "lc_tolerance": cfg.tolerances.lc });
    Ok(Built {
        metric,
        source,
        lc: Some(lc),
        checks,
        horizon: None,
    })
}

/// Solitonic background on (xi, phi). The soliton is relaxed on a periodic
/// extension of the phi axis with the same step; its first nodes are kept.
fn soliton_background(
    cfg: &RunConfig,
    gens: &Generators,
    prime: &PrimeData,
) -> Result<(SampledField, Value), CliError> {
    if cfg.grid.x1.spacing != Spacing::Xi {
        return Err(CliError::Config(
            "solitonic backgrounds need grid.x1.spacing = \"xi\" (uniform in xi)".into(),
        ));
    }
    let eta0 = gens.require("eta")?;
    let v = &cfg.grid.v;
    let h = (v.max - v.min) / (v.n - 1) as f64;
    let np = gens.count("period_nodes", 2 * (v.n - 1))?;
    if np < v.n {
        return Err(CliError::Config(format!(
            "period_nodes must be at least grid.v.n = {}",
            v.n
        )));
    }
    let periodic = Grid1D::new((0..np).map(|k| v.min + k as f64 * h).collect(), v.min)?;
    let xi = prime.axes()[0].clone();
    let mut init = Vec::with_capacity(xi.len() * np);
    for &r in prime.r() {
        init.extend(periodic.nodes().iter().map(|&p| eta0.eval(r, 0.0, p)));
    }
    let init = SampledField::new(vec![xi.clone(), periodic], init)?;
    let opts = SolitonOptions {
        tol: cfg.tolerances.solver,
        ..Default::default()
    };
    let sol = solitonic_eta(&init, cfg.signs.soliton, &opts)?;
    let kept: Vec<f64> = sol
        .eta
        .values()
        .chunks(np)
        .flat_map(|row| row[..v.n].iter().copied())
        .collect();
    let eta = SampledField::new(vec![xi, prime.axes()[2].clone()], kept)?;
    let info = json!({ "residual": sol.residual, "sweeps": sol.history.len() - 1, "period_nodes": np, "min": eta.values().iter().copied().fold(f64::INFINITY, f64::min) });
    Ok((eta, info))
}

fn build_blackhole(cfg: &RunConfig, gens: &Generators, ord: FracOrder) -> Result<Built, CliError> {
    let mu0 = gens.number("mu0", 1.0)?;
    let eps = gens.number("eps", 0.0)?;
    let margin = gens.number("margin", HORIZON_MARGIN)?;
    let x1 = &cfg.grid.x1;
    let r = match x1.spacing {
        Spacing::Xi => uniform_xi_radii(mu0, eps, x1.min, x1.max, x1.n)?,
        Spacing::Uniform => x1.grid()?,
    };
    let prime = prime_schwarzschild(
        mu0,
        eps,
        &r,
        &cfg.grid.x2.grid()?,
        &cfg.grid.v.grid()?,
        margin,
    )?;
    let source = SourceSpec::vacuum(prime.axes())?;
    let chart = |e: &Expr| prime.field(|r, t, p| e.eval(r, t, p));
    if cfg.family == Family::Schwarzschild {
        let (metric, checks) = match gens.expr("b") {
            None => (prime.metric(ord)?, json!({ "deformed": false })),
            Some(b) => {
                let d = fractional_deformation(&prime, &chart(b), None, None, ord)?;
                let checks = json!({ "deformed": true, "eta3_max": d.eta3.max_abs(), "eta4_max": d.eta4.max_abs() });
                (d.metric, checks)
            }
        };
        return Ok(Built {
            metric,
            source,
            lc: None,
            checks,
            horizon: None,
        });
    }
    let ratio = gens.number("ratio", 1.0)?;
    let omega0 = gens.number("omega0", 1.0)?;
    let phi0 = gens.number("phi0", 0.0)?;
    let mu1 = gens.expr("mu1").map(chart);
    let rot = RotoidData::with_ratio(&prime, ratio, omega0, phi0, mu1);
    let mut m = rotoid_metric(&prime, &rot, None, None, ord)?;
    let mut checks = Map::new();
    if cfg.family == Family::Solrot
        || (cfg.family == Family::Oscillator && gens.expr("eta").is_some())
    {
        let (eta, info) = soliton_background(cfg, gens, &prime)?;
        m = solitonic_rotoid(&m, &eta)?;
        checks.insert("soliton".into(), info);
    }
    if cfg.family == Family::Oscillator {
        let phi = vec![prime.axes()[2].clone()];
        let z1 = SampledField::from_fn(phi.clone(), |c| {
            gens.expr("z1").map_or(0.0, |e| e.eval(0.0, 0.0, c[0]))
        })?;
        let z2 = SampledField::from_fn(phi, |c| {
            gens.expr("z2").map_or(0.0, |e| e.eval(0.0, 0.0, c[0]))
        })?;
        gens.require("z1")?;
        let order = gens.count("order", DEFAULT_TRUNCATION)?;
        let s = oscillator_series(
            &z1,
            &z2,
            ord,
            gens.number("c1", 0.0)?,
            gens.number("c2", 1.0)?,
            order,
        )?;
        let sub = oscillator_residual(&s)?;
        m = oscillator_embedded_metric(&m, &s.rho)?;
        checks.insert(
            "oscillator".into(),
            json!({ "series": s.summary(), "substitution_residual": sub.max_abs() }),
        );
    }
    let fine = Grid1D::uniform(mu0, 4.0 * mu0, HORIZON_SAMPLES)?;
    let horizon = horizon_curve(
        mu0,
        eps,
        ratio,
        omega0,
        phi0,
        prime.axes()[2].nodes(),
        &fine,
    )?;
    let worst = horizon
        .iter()
        .map(|p| ((p.r_numeric - p.r_formula) / p.r_formula).abs())
        .fold(0.0, f64::max);
    checks.insert("horizon_max_relative_gap".into(), json!(worst));
    Ok(Built {
        metric: m.metric,
        source,
        lc: None,
        checks: Value::Object(checks),
        horizon: Some(horizon),
    })
}

fn horizon_csv(pts: &[HorizonPoint]) -> String {
    let mut s = String::from("phi,r_numeric,r_formula\n");
    for p in pts {
        s.push_str(&format!(
            "{:.16e},{:.16e},{:.16e}\n",
            p.phi, p.r_numeric, p.r_formula
        ));
    }
    s
}

fn metric_finite(g: &DMetric) -> bool {
    [
        g.g1(),
        g.g2(),
        g.h3(),
        g.h4(),
        g.w(0),
        g.w(1),
        g.n(0),
        g.n(1),
    ]
    .iter()
    .all(|f| f.is_finite())
}

/// Builds the configured solution and writes metric, residuals, source,
/// horizon (rotoid kinds) and report files. A residual above tolerance
/// returns `CliError::Residual` after everything is written.
pub fn run(
    cfg: &RunConfig,
    out: Option<&Path>,
    tolerance: Option<f64>,
) -> Result<RunReport, CliError> {
    let t0 = Instant::now();
    let mut cfg = cfg.clone();
    if let Some(t) = tolerance {
        if !(t > 0.0) {
            return Err(CliError::Config("--tolerance must be positive".into()));
        }
        cfg.tolerances.residual = t;
    }
    if let Some(o) = out {
        cfg.output.dir = o.to_path_buf();
    }
    cfg.validate()?;
    let ord = cfg.order()?;
    let gens = cfg.generators()?;
    let built = if cfg.family.is_blackhole() {
        build_blackhole(&cfg, &gens, ord)?
    } else {
        build_family(&cfg, &gens, ord)?
    };
    let residuals = reduced_residuals(&built.metric, &built.source)?;
    let gate = Gate::new(
        &residuals,
        &cfg.tolerances.equations,
        cfg.tolerances.residual,
    );

    let dir = cfg.output.dir.clone();
    std::fs::create_dir_all(&dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    let mut outputs = Vec::new();
    let mut put = |name: &str, text: String| -> Result<(), CliError> {
        write_text(&dir.join(name), &text)?;
        outputs.push(name.to_string());
        Ok(())
    };
    match cfg.output.format {
        Format::Csv => put("metric.csv", export::metric_csv(&built.metric))?,
        Format::Json => put("metric.json", export::metric_json(&built.metric)?)?,
    }
    if let Some(h) = &built.horizon {
        put("horizon.csv", horizon_csv(h))?;
    }
    let axes = built.metric.axes();
    let source = SourceFile {
        alpha: cfg.alpha,
        terminals: [axes[0].terminal(), axes[1].terminal(), axes[2].terminal()],
        ups2: cfg.source.ups2.clone(),
        ups4: cfg.source.ups4.clone(),
        tolerance: cfg.tolerances.residual,
        equations: cfg.tolerances.equations.clone(),
    };
    write_json(&dir.join("source.json"), &source)?;
    write_json(&dir.join("residuals.json"), &residuals)?;
    outputs.extend([
        "source.json".to_string(),
        "residuals.json".to_string(),
        "report.json".to_string(),
    ]);
    let report = RunReport {
        schema_version: REPORT_SCHEMA,
        family: cfg.family,
        alpha: cfg.alpha,
        shape: residuals.shape.clone(),
        residuals,
        lc: built.lc,
        gate,
        checks: built.checks,
        finite: metric_finite(&built.metric),
        outputs,
        timing_ms: t0.elapsed().as_secs_f64() * 1e3,
        config: cfg,
    };
    write_json(&dir.join("report.json"), &report)?;
    if !report.gate.passed {
        return Err(CliError::Residual(format!(
            "{} > {:.3e} over equations {:?}; outputs in {}",
            report.gate.max,
            report.gate.tolerance,
            report.gate.equations,
            dir.display()
        )));
    }
    Ok(report)
}

/// `run` with the family replaced by a blackhole kind.
pub fn run_blackhole(
    mut cfg: RunConfig,
    kind: Family,
    out: Option<&Path>,
) -> Result<RunReport, CliError> {
    if !kind.is_blackhole() {
        return Err(CliError::Config(format!(
            "{} is not a blackhole kind",
            kind.name()
        )));
    }
    cfg.family = kind;
    run(&cfg, out, None)
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// Residuals of an exported metric (`.json` or `.csv`) against a source file.
pub fn verify(metric: &Path, source: &Path) -> Result<VerifyReport, CliError> {
    let src: SourceFile = serde_json::from_str(&read(source)?)
        .map_err(|e| CliError::Config(format!("{}: line {}: {e}", source.display(), e.line())))?;
    let text = read(metric)?;
    let g = if metric.extension().is_some_and(|e| e == "json") {
        let g = export::read_metric_json(&text)?;
        if g.ord().alpha() != src.alpha {
            return Err(CliError::Config(format!(
                "metric alpha {} differs from source alpha {}",
                g.ord().alpha(),
                src.alpha
            )));
        }
        g
    } else {
        export::read_metric_csv(&text, src.alpha, Some(src.terminals))?
    };
    if src.equations.is_empty()
        || src.equations.iter().any(|e| !(1..=4).contains(e))
        || !(src.tolerance > 0.0)
    {
        return Err(CliError::Config(format!(
            "{}: bad tolerance or equations",
            source.display()
        )));
    }
    let spec = source_on(g.axes(), &src.ups2, &src.ups4)?;
    let residuals = reduced_residuals(&g, &spec)?;
    let gate = Gate::new(&residuals, &src.equations, src.tolerance);
    Ok(VerifyReport {
        schema_version: REPORT_SCHEMA,
        alpha: src.alpha,
        shape: residuals.shape.clone(),
        residuals,
        gate,
    })
}

/// Left Caputo derivative of `expr` (every variable set to x) at `at`,
/// sampled on a uniform grid over [terminal, at].
pub fn deriv(
    alpha: f64,
    expr: &str,
    at: f64,
    terminal: f64,
    nodes: usize,
) -> Result<f64, CliError> {
    let ord = FracOrder::new(alpha).map_err(|e| CliError::Config(format!("alpha: {e}")))?;
    let e = parse("--expr", expr)?;
    if !(at > terminal) || !at.is_finite() || !terminal.is_finite() {
        return Err(CliError::Config("need terminal < at".into()));
    }
    if nodes < 3 {
        return Err(CliError::Config("need at least 3 nodes".into()));
    }
    let g = Grid1D::uniform(terminal, at, nodes)?;
    let f = SampledField::from_fn(vec![g], |c| e.eval(c[0], c[0], c[0]))?;
    Ok(caputo_left(&f, ord, at)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deriv_of_linear_function() {
        // D^a x = x^(1-a) / Gamma(2-a); at x = 1, a = 1/2: 1 / Gamma(3/2) = 2 / sqrt(pi)
        let d = deriv(0.5, "x", 1.0, 0.0, 513).unwrap();
        assert!((d - 2.0 / std::f64::consts::PI.sqrt()).abs() < 1e-8, "{d}");
        assert!(matches!(
            deriv(0.5, "x", 0.0, 0.0, 9),
            Err(CliError::Config(_))
        ));
        assert!(matches!(
            deriv(0.5, "y", 1.0, 0.0, 9),
            Err(CliError::Config(_))
        ));
    }

    #[test]
    fn gate_reads_only_listed_equations() {
        let mut rep: ResidualReport = serde_json::from_value(json!({
            "eq1": {"max_abs": 1.0, "mean_abs": 0.5}, "eq2": {"max_abs": 1e-9, "mean_abs": 0.0},
            "eq3": {"max_abs": 2e-9, "mean_abs": 0.0}, "eq4": {"max_abs": 0.0, "mean_abs": 0.0},
            "lc": null, "singular_nodes": 0, "evaluated_nodes": 1, "shape": [1, 1, 1], "boundary_layer": 2, "source_frame": "N-adapted"
        }))
        .unwrap();
        let g = Gate::new(&rep, &[2, 3, 4], 1e-6);
        assert!(g.passed && g.max == 2e-9);
        assert!(!Gate::new(&rep, &[1, 2, 3, 4], 1e-6).passed);
        rep.eq4.max_abs = f64::NAN;
        assert!(!Gate::new(&rep, &[2, 3, 4], 1e-6).passed);
    }
}
