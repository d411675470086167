use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use frgrav::cli::export::{metric_json, read_metric_json};
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_frgrav"))
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs")
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn report(dir: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join("report.json")).unwrap()).unwrap()
}

fn run_sample(name: &str, out: &Path) -> Output {
    let cfg = configs().join(format!("{name}.json"));
    run(&[
        "run",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ])
}

const SAMPLES: [&str; 8] = [
    "family_a",
    "family_b",
    "family_c",
    "family_d",
    "schwarzschild",
    "rotoid",
    "solrot",
    "oscillator",
];

#[test]
fn every_sample_config_exits_zero_with_a_schema_valid_report() {
    let tmp = tempfile::tempdir().unwrap();
    for name in SAMPLES {
        let out = tmp.path().join(name);
        let o = run_sample(name, &out);
        assert_eq!(
            code(&o),
            0,
            "{name}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
        let r = report(&out);
        assert_eq!(r["schema_version"], 1, "{name}");
        assert_eq!(r["gate"]["passed"], true, "{name}");
        assert_eq!(r["finite"], true, "{name}");
        assert!(r["gate"]["max"].as_f64().unwrap() <= r["gate"]["tolerance"].as_f64().unwrap());
        for key in [
            "residuals",
            "config",
            "timing_ms",
            "checks",
            "shape",
            "alpha",
            "family",
        ] {
            assert!(r.get(key).is_some(), "{name}: missing {key}");
        }
        assert!(out.join("residuals.json").exists() && out.join("source.json").exists());
        let rotoid_kind = matches!(name, "rotoid" | "solrot" | "oscillator");
        assert_eq!(out.join("horizon.csv").exists(), rotoid_kind, "{name}");
        assert!(out.join("metric.csv").exists() || out.join("metric.json").exists());
    }
}

#[test]
fn reports_are_identical_apart_from_timing() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("a");
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("timing_ms");
        serde_json::to_string(&v).unwrap()
    };
    assert_eq!(code(&run_sample("family_c", &out)), 0);
    let first = strip(report(&out));
    let metric = std::fs::read(out.join("metric.json")).unwrap();
    assert_eq!(code(&run_sample("family_c", &out)), 0);
    assert_eq!(strip(report(&out)), first);
    assert_eq!(std::fs::read(out.join("metric.json")).unwrap(), metric);
}

#[test]
fn exported_json_metric_reimports_bitwise() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("c");
    assert_eq!(code(&run_sample("family_c", &out)), 0);
    let text = std::fs::read_to_string(out.join("metric.json")).unwrap();
    let g = read_metric_json(&text).unwrap();
    assert_eq!(metric_json(&g).unwrap(), text);
}

#[test]
fn verify_accepts_exports_and_rejects_corruption() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("a");
    assert_eq!(code(&run_sample("family_a", &out)), 0);
    let (metric, source) = (out.join("metric.csv"), out.join("source.json"));
    let ok = run(&[
        "verify",
        "--metric",
        metric.to_str().unwrap(),
        "--source",
        source.to_str().unwrap(),
    ]);
    assert_eq!(code(&ok), 0, "{}", String::from_utf8_lossy(&ok.stderr));
    let v: Value = serde_json::from_slice(&ok.stdout).unwrap();
    let run_max = report(&out)["gate"]["max"].as_f64().unwrap();
    assert_eq!(
        v["gate"]["max"].as_f64().unwrap(),
        run_max,
        "CSV round trip must reproduce the residuals"
    );

    // scale h4 at one interior row
    let text = std::fs::read_to_string(&metric).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let row = lines.len() / 2;
    let mut cells: Vec<String> = lines[row].split(',').map(String::from).collect();
    cells[6] = format!("{:.16e}", cells[6].parse::<f64>().unwrap() * 1.5);
    lines[row] = cells.join(",");
    let bad = tmp.path().join("bad.csv");
    std::fs::write(&bad, lines.join("\n")).unwrap();
    let o = run(&[
        "verify",
        "--metric",
        bad.to_str().unwrap(),
        "--source",
        source.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 4);
}

#[test]
fn blackhole_command_runs_the_requested_kind() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("r");
    let cfg = configs().join("rotoid.json");
    let o = run(&[
        "blackhole",
        "--kind",
        "rotoid",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(report(&out)["family"], "rotoid");
    let h = std::fs::read_to_string(out.join("horizon.csv")).unwrap();
    assert_eq!(h.lines().next().unwrap(), "phi,r_numeric,r_formula");
    assert_eq!(h.lines().count(), 1 + 65);
    // solrot generators do not fit the plain rotoid
    let solrot = configs().join("solrot.json");
    assert_eq!(
        code(&run(&[
            "blackhole",
            "--kind",
            "rotoid",
            "--config",
            solrot.to_str().unwrap(),
            "--out",
            out.to_str().unwrap()
        ])),
        2
    );
}

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let p = dir.join("cfg.json");
    std::fs::write(&p, text).unwrap();
    p
}

const FLAT: &str = r#"{
    "alpha": 0.7,
    "grid": {"x1": {"min": 0, "max": 1, "n": 9}, "x2": {"min": 0, "max": 1, "n": 9}, "v": {"min": 0.1, "max": 1.1, "n": 17, "terminal": 0}},
    "family": "B",
    "generators": {"h3": "-1", "h4_0": "1"},
    "tolerances": {"residual": 1e-10}
}"#;

#[test]
fn flat_metric_has_vanishing_residuals() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), FLAT);
    let out = tmp.path().join("o");
    let o = run(&[
        "run",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(report(&out)["gate"]["max"].as_f64().unwrap() <= 1e-10);
}

#[test]
fn exit_codes_follow_the_failure_kind() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("o");
    let o = out.to_str().unwrap();

    let unknown = write_config(
        tmp.path(),
        &FLAT.replace(r#""family": "B","#, r#""family": "B", "colour": 1,"#),
    );
    assert_eq!(
        code(&run(&[
            "run",
            "--config",
            unknown.to_str().unwrap(),
            "--out",
            o
        ])),
        2
    );

    let missing = tmp.path().join("nope.json");
    assert_eq!(
        code(&run(&[
            "run",
            "--config",
            missing.to_str().unwrap(),
            "--out",
            o
        ])),
        5
    );

    // outputs are still written when the gate fails
    let cfg = configs().join("family_a.json");
    assert_eq!(
        code(&run(&[
            "run",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            o,
            "--tolerance",
            "1e-12"
        ])),
        4
    );
    assert_eq!(report(&out)["gate"]["passed"], false);
    assert_eq!(
        code(&run(&[
            "run",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            o,
            "--tolerance",
            "-1"
        ])),
        2
    );

    // a strongly coupled oscillator trips the divergence watchdog
    let osc = std::fs::read_to_string(configs().join("oscillator.json"))
        .unwrap()
        .replace(r#""z1": "1""#, r#""z1": "400""#);
    let osc = write_config(
        tmp.path(),
        &osc.replace(r#""order": "8""#, r#""order": "30""#),
    );
    assert_eq!(
        code(&run(&[
            "run",
            "--config",
            osc.to_str().unwrap(),
            "--out",
            o
        ])),
        3
    );

    assert_eq!(code(&run(&["frobnicate"])), 2);
}

#[test]
fn calculator_commands_print_values() {
    let o = run(&[
        "deriv",
        "--alpha",
        "0.5",
        "--expr",
        "x^2",
        "--at",
        "1",
        "--terminal",
        "0",
    ]);
    assert_eq!(code(&o), 0);
    let d: f64 = String::from_utf8_lossy(&o.stdout).trim().parse().unwrap();
    // 2 / Gamma(5/2) = 8 / (3 sqrt(pi))
    assert!(
        (d - 8.0 / (3.0 * std::f64::consts::PI.sqrt())).abs() < 1e-5,
        "{d}"
    );

    let o = run(&["ml", "--alpha", "1", "--z", "-2"]);
    let e: f64 = String::from_utf8_lossy(&o.stdout).trim().parse().unwrap();
    assert!((e - (-2.0f64).exp()).abs() < 1e-10);

    assert_eq!(code(&run(&["ml", "--alpha", "1", "--z", "1e3"])), 2);
    assert_eq!(
        code(&run(&[
            "deriv",
            "--alpha",
            "0.5",
            "--expr",
            "x^",
            "--at",
            "1",
            "--terminal",
            "0"
        ])),
        2
    );
}
