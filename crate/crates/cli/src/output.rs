//! CSV / JSON data files and the run manifest.
//!
//! Numbers are written in scientific notation with 9 significant digits, so
//! identical runs give byte-identical data files. Every curve starts with the
//! τ = 0 row, where the normalized autocorrelation is exactly 1.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde_json::{json, Value};

use ntn_coherence::coherence::CoherenceTime;
use ntn_coherence::scenarios::SweepResult;

use crate::config::{OutputFormat, RunConfig, ScenarioSource};
use crate::error::CliError;
use crate::run::{RunOutput, RunResult};

pub const VERSION: &str = env!("NTN_COHERENCE_VERSION");

pub const CURVE_HEADER: &str = "tau_s,re,im,abs";
pub const SERIES_CURVE_HEADER: &str = "series,tau_s,re,im,abs";
pub const TC_HEADER: &str = "axis_value,epsilon,tc_s,status";
pub const MC_HEADER: &str = "tau_s,quad_re,quad_im,mc_re,mc_im,se_re,se_im,z";

/// Scientific notation, 9 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.8e}")
}

fn with_origin(curve: &[(f64, Complex64)]) -> impl Iterator<Item = (f64, Complex64)> + '_ {
    std::iter::once((0.0, Complex64::new(1.0, 0.0))).chain(curve.iter().copied())
}

pub fn curve_csv(curve: &[(f64, Complex64)]) -> String {
    let mut s = format!("{CURVE_HEADER}\n");
    for (tau, a) in with_origin(curve) {
        let _ = writeln!(s, "{},{},{},{}", num(tau), num(a.re), num(a.im), num(a.norm()));
    }
    s
}

fn curve_json(curve: &[(f64, Complex64)]) -> Value {
    Value::Array(
        with_origin(curve)
            .map(|(tau, a)| json!({ "tau_s": tau, "re": a.re, "im": a.im, "abs": a.norm() }))
            .collect(),
    )
}

fn tc_row(axis_value: Option<f64>, epsilon: f64, tc: &CoherenceTime) -> String {
    format!(
        "{},{},{},{}",
        axis_value.map(num).unwrap_or_default(),
        num(epsilon),
        tc.seconds().map(num).unwrap_or_default(),
        tc.status()
    )
}

fn tc_json(axis_value: Option<f64>, epsilon: f64, tc: &CoherenceTime) -> Value {
    json!({ "axis_value": axis_value, "epsilon": epsilon, "tc_s": tc.seconds(), "status": tc.status() })
}

pub fn sweep_curves_csv(r: &SweepResult) -> String {
    let mut s = format!("{SERIES_CURVE_HEADER}\n");
    for series in &r.series {
        for (tau, a) in with_origin(&series.curve) {
            let _ = writeln!(
                s,
                "{},{},{},{},{}",
                num(series.axis_value),
                num(tau),
                num(a.re),
                num(a.im),
                num(a.norm())
            );
        }
    }
    s
}

pub fn sweep_tc_csv(r: &SweepResult) -> String {
    let mut s = format!("{TC_HEADER}\n");
    for series in &r.series {
        for (e, tc) in &series.tcs {
            let _ = writeln!(s, "{}", tc_row(Some(series.axis_value), *e, tc));
        }
    }
    s
}

struct DataFile {
    name: String,
    csv: String,
    json: Value,
}

fn data_files(out: &RunOutput) -> Vec<DataFile> {
    match &out.result {
        RunResult::Curve { curve, .. } => vec![DataFile {
            name: "curve".into(),
            csv: curve_csv(curve),
            json: curve_json(curve),
        }],
        RunResult::Tc(r) => vec![
            DataFile {
                name: "curve".into(),
                csv: curve_csv(&r.curve),
                json: curve_json(&r.curve),
            },
            DataFile {
                name: "tc".into(),
                csv: format!("{TC_HEADER}\n{}\n", tc_row(None, r.epsilon, &r.tc)),
                json: Value::Array(vec![tc_json(None, r.epsilon, &r.tc)]),
            },
        ],
        RunResult::Sweeps(rs) => {
            let mut files = Vec::new();
            for r in rs {
                files.push(DataFile {
                    name: format!("{}_curves", r.name),
                    csv: sweep_curves_csv(r),
                    json: Value::Array(
                        r.series
                            .iter()
                            .map(|s| json!({ "axis_value": s.axis_value, "curve": curve_json(&s.curve) }))
                            .collect(),
                    ),
                });
                if r.series.iter().any(|s| !s.tcs.is_empty()) {
                    files.push(DataFile {
                        name: format!("{}_tc", r.name),
                        csv: sweep_tc_csv(r),
                        json: Value::Array(
                            r.series
                                .iter()
                                .flat_map(|s| s.tcs.iter().map(|(e, tc)| tc_json(Some(s.axis_value), *e, tc)))
                                .collect(),
                        ),
                    });
                }
            }
            files
        }
        RunResult::McCheck(rows) => {
            let mut csv = format!("{MC_HEADER}\n");
            for r in rows {
                let _ = writeln!(
                    csv,
                    "{},{},{},{},{},{},{},{}",
                    num(r.tau),
                    num(r.quad_re),
                    num(r.quad_im),
                    num(r.mc.re),
                    num(r.mc.im),
                    num(r.mc.se_re),
                    num(r.mc.se_im),
                    num(r.z)
                );
            }
            vec![DataFile {
                name: "mc_check".into(),
                csv,
                json: serde_json::to_value(rows).unwrap_or(Value::Null),
            }]
        }
    }
}

fn diagnostics(out: &RunOutput) -> Value {
    match &out.result {
        RunResult::Curve { quad_stats, .. } => json!({ "quadrature": quad_stats }),
        RunResult::Tc(r) => json!({
            "quadrature": r.quad_stats,
            "crossing_bracket_s": r.crossing_bracket.map(|(a, b)| [a, b]),
        }),
        RunResult::Sweeps(rs) => Value::Array(
            rs.iter()
                .map(|r| {
                    json!({
                        "name": r.name,
                        "axis": r.axis.name(),
                        "wall_time_s": r.wall_time_s,
                        "series": r.series.iter().map(|s| json!({
                            "axis_value": s.axis_value,
                            "quadrature": s.quad_stats,
                            "wall_time_s": s.wall_time_s,
                            "tc": s.tcs.iter().map(|(e, tc)| tc_json(None, *e, tc)).collect::<Vec<_>>(),
                        })).collect::<Vec<_>>(),
                    })
                })
                .collect(),
        ),
        RunResult::McCheck(rows) => json!({
            "lags": rows.len(),
            "within_3": rows.iter().filter(|r| r.z < 3.0).count(),
        }),
    }
}

pub fn manifest(cfg: &RunConfig, out: &RunOutput, files: &[PathBuf]) -> Value {
    let source = match &cfg.source {
        ScenarioSource::Preset(p) => json!({ "preset": p }),
        ScenarioSource::Inline => json!("inline"),
    };
    json!({
        "version": VERSION,
        "command": cfg.command.name(),
        "config": {
            "scenario_source": source,
            "scenario": cfg.scenario_config(),
            "t_s": cfg.t,
            "grid": cfg.grid,
            "quad": cfg.quad,
            "epsilon": cfg.epsilon,
            "epsilons": cfg.epsilons,
            "seed": cfg.seed,
            "mc": { "scatterers": cfg.mc_n, "realizations": cfg.mc_m, "points": cfg.mc_points },
            "sweep": cfg.sweep.as_ref().map(|s| json!({ "axis": s.axis, "values": s.values })),
            "threads": cfg.threads,
            "format": cfg.format,
        },
        "diagnostics": diagnostics(out),
        "wall_time_s": out.wall_time_s,
        "files": files.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
    })
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

/// Write the data files and `manifest.json` into `cfg.output`; returns the
/// paths written, manifest last.
pub fn write_outputs(out: &RunOutput, cfg: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let dir = &cfg.output;
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut written = Vec::new();
    for f in data_files(out) {
        let (path, text) = match cfg.format {
            OutputFormat::Csv => (dir.join(format!("{}.csv", f.name)), f.csv),
            OutputFormat::Json => (
                dir.join(format!("{}.json", f.name)),
                serde_json::to_string_pretty(&f.json).expect("JSON values serialize") + "\n",
            ),
        };
        write(&path, &text)?;
        written.push(path);
    }
    let path = dir.join("manifest.json");
    let m = manifest(cfg, out, &written);
    write(&path, &(serde_json::to_string_pretty(&m).expect("JSON values serialize") + "\n"))?;
    written.push(path);
    Ok(written)
}
