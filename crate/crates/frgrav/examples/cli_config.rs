//! Drive a run from a JSON config in process, the way `frgrav run` does, and
//! read the exported metric back.

use frgrav::cli::export::read_metric_json;
use frgrav::cli::{run, RunConfig};

const CONFIG: &str = r#"{
    "alpha": 0.7,
    "grid": {
        "x1": {"min": 0, "max": 1, "n": 9},
        "x2": {"min": 0, "max": 1, "n": 9},
        "v": {"min": 0.1, "max": 1.1, "n": 17, "terminal": 0}
    },
    "family": "B",
    "generators": {"h3": "(1 + v)^2", "h4_0": "1 + x1", "w1": "x1*v"},
    "tolerances": {"residual": 1e-8},
    "output": {"dir": "out/example", "format": "json"}
}"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = RunConfig::from_json(CONFIG)?;
    let dir = std::env::temp_dir().join("frgrav-example");
    let report = run(&cfg, Some(&dir), None)?;
    println!("{}", report.summary_line());
    let metric = read_metric_json(&std::fs::read_to_string(dir.join("metric.json"))?)?;
    println!(
        "reimported metric has shape {:?}, outputs in {}",
        metric.g1().shape(),
        dir.display()
    );
    Ok(())
}
