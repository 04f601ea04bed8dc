//! Run configuration: a JSON file plus command-line overrides.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use ntn_coherence::coherence::check_epsilon;
use ntn_coherence::scenarios::{preset, KValue, ScenarioConfig, SweepAxis, FIG4_EPSILONS};
use ntn_coherence::units::{parse_quantity, Dimension};
use ntn_coherence::{QuadSpec, RicianK, Scenario, TauGrid};

use crate::error::CliError;

/// Environment variable holding the default worker-thread count.
pub const THREADS_ENV: &str = "NTN_COHERENCE_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Curve,
    Tc,
    Sweep,
    Fig2,
    Fig3,
    Fig4,
    McCheck,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Curve => "curve",
            Command::Tc => "tc",
            Command::Sweep => "sweep",
            Command::Fig2 => "fig2",
            Command::Fig3 => "fig3",
            Command::Fig4 => "fig4",
            Command::McCheck => "mc-check",
        }
    }

    /// Commands that build their own K values.
    fn sets_own_k(&self) -> bool {
        matches!(self, Command::Fig2 | Command::Fig3 | Command::Fig4 | Command::McCheck)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridFile {
    pub tau_min: Option<String>,
    pub tau_max: Option<String>,
    pub points_per_decade: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadFile {
    pub base_el_nodes: Option<usize>,
    pub base_az_nodes: Option<usize>,
    pub max_refinements: Option<usize>,
    pub rel_tol: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McFile {
    pub scatterers: Option<usize>,
    pub realizations: Option<usize>,
    pub points: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepFile {
    pub axis: SweepAxis,
    /// Unit-suffixed for speeds and beamwidths (`"4 km/s"`, `"5 deg"`);
    /// plain numbers or `"inf"` for K.
    pub values: Vec<KValue>,
}

/// On-disk run description. Every field is optional; flags fill or
/// override them.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunFile {
    pub preset: Option<String>,
    pub scenario: Option<ScenarioConfig>,
    pub command: Option<Command>,
    /// Observation time, e.g. `"0 s"`.
    pub t: Option<String>,
    #[serde(default)]
    pub grid: GridFile,
    #[serde(default)]
    pub quad: QuadFile,
    pub epsilon: Option<f64>,
    pub epsilons: Option<Vec<f64>>,
    pub output: Option<PathBuf>,
    pub format: Option<OutputFormat>,
    pub seed: Option<u64>,
    #[serde(default)]
    pub mc: McFile,
    pub sweep: Option<SweepFile>,
    pub threads: Option<usize>,
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Default, Args)]
pub struct Overrides {
    /// JSON run file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Named scenario preset (default, static-bs).
    #[arg(long, global = true)]
    pub preset: Option<String>,
    /// Rician factor K; a number or `inf`.
    #[arg(long, global = true)]
    pub rician_k: Option<String>,
    /// Coherence threshold in (0, 1).
    #[arg(long, global = true)]
    pub epsilon: Option<f64>,
    /// Observation time t in seconds.
    #[arg(long = "time", global = true)]
    pub t: Option<f64>,
    /// Smallest lag in seconds.
    #[arg(long, global = true)]
    pub tau_min: Option<f64>,
    /// Largest lag in seconds.
    #[arg(long, global = true)]
    pub tau_max: Option<f64>,
    /// Lag points per decade.
    #[arg(long, global = true)]
    pub ppd: Option<usize>,
    #[arg(long, global = true)]
    pub quad_el: Option<usize>,
    #[arg(long, global = true)]
    pub quad_az: Option<usize>,
    #[arg(long, global = true)]
    pub quad_refine: Option<usize>,
    #[arg(long, global = true)]
    pub quad_tol: Option<f64>,
    /// Scatterers per Monte-Carlo realization.
    #[arg(long, global = true)]
    pub mc_n: Option<usize>,
    /// Monte-Carlo realizations.
    #[arg(long, global = true)]
    pub mc_m: Option<usize>,
    /// Number of log-spaced lags compared by mc-check.
    #[arg(long, global = true)]
    pub mc_points: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads (default: $NTN_COHERENCE_THREADS, else all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Output directory.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,
    /// Sweep axis: rician_k, bs_speed or ue_hpbw.
    #[arg(long, global = true)]
    pub sweep_axis: Option<String>,
    /// Comma-separated sweep values, e.g. "0 km/s,4 km/s" or "0,0.3,inf".
    #[arg(long, global = true)]
    pub sweep_values: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioSource {
    Preset(String),
    Inline,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub axis: SweepAxis,
    pub values: Vec<f64>,
}

/// Fully resolved run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub source: ScenarioSource,
    /// Scenario as resolved (K may be a placeholder for commands that set
    /// their own).
    pub scenario: Scenario,
    pub t: f64,
    pub grid: TauGrid,
    pub quad: QuadSpec,
    pub epsilon: Option<f64>,
    pub epsilons: Vec<f64>,
    pub output: PathBuf,
    pub format: OutputFormat,
    pub seed: u64,
    pub mc_n: usize,
    pub mc_m: usize,
    pub mc_points: usize,
    pub sweep: Option<SweepConfig>,
    pub threads: Option<usize>,
}

fn read_file(path: &Path) -> Result<RunFile, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::config(path.display().to_string(), e.to_string()))
}

fn seconds(path: &str, s: &str) -> Result<f64, CliError> {
    parse_quantity(s, Dimension::Time, None).map_err(|e| CliError::config(path, e.to_string()))
}

fn sweep_value(axis: SweepAxis, v: &KValue) -> Result<f64, CliError> {
    let path = "sweep.values";
    match (axis, v) {
        (SweepAxis::RicianK, k) => Ok(k.to_rician()?.value()),
        (SweepAxis::BsSpeed, KValue::Text(s)) => {
            parse_quantity(s, Dimension::Speed, None).map_err(|e| CliError::config(path, e.to_string()))
        }
        (SweepAxis::UeHpbw, KValue::Text(s)) => {
            parse_quantity(s, Dimension::Angle, None).map_err(|e| CliError::config(path, e.to_string()))
        }
        (_, KValue::Number(x)) => Err(CliError::config(
            path,
            format!("{x} needs a unit on axis {}", axis.name()),
        )),
    }
}

fn parse_axis(s: &str) -> Result<SweepAxis, CliError> {
    serde_json::from_value(serde_json::Value::String(s.to_string()))
        .map_err(|_| CliError::config("sweep.axis", format!("unknown axis `{s}` (rician_k, bs_speed, ue_hpbw)")))
}

/// Merge the optional run file with flag overrides; flags win.
pub fn parse_config(command: Command, overrides: &Overrides) -> Result<RunConfig, CliError> {
    let file = match &overrides.config {
        Some(p) => read_file(p)?,
        None => RunFile::default(),
    };
    resolve(command, file, overrides)
}

pub fn resolve(command: Command, file: RunFile, o: &Overrides) -> Result<RunConfig, CliError> {
    if let Some(c) = file.command {
        if c != command {
            return Err(CliError::config(
                "command",
                format!("file is for `{}` but `{}` was requested", c.name(), command.name()),
            ));
        }
    }

    // scenario: exactly one source
    let (source, mut scn_cfg) = match (&o.preset, &file.preset, &file.scenario) {
        (_, Some(_), Some(_)) => {
            return Err(CliError::config("scenario", "give either `preset` or `scenario`, not both"))
        }
        (Some(name), _, _) => (ScenarioSource::Preset(name.clone()), preset(name)?),
        (None, Some(name), None) => (ScenarioSource::Preset(name.clone()), preset(name)?),
        (None, None, Some(cfg)) => (ScenarioSource::Inline, cfg.clone()),
        (None, None, None) => (ScenarioSource::Preset("default".into()), preset("default")?),
    };
    if let Some(k) = &o.rician_k {
        scn_cfg.rician_k = Some(KValue::Text(k.clone()));
    }
    if scn_cfg.rician_k.is_none() {
        if command.sets_own_k() {
            scn_cfg.rician_k = Some(KValue::Number(0.0));
        } else {
            return Err(CliError::config(
                "scenario.rician_k",
                "Rician K must be supplied (--rician-k or scenario.rician_k)",
            ));
        }
    }
    let scenario = scn_cfg.to_scenario()?;

    let t = match (o.t, &file.t) {
        (Some(t), _) => t,
        (None, Some(s)) => seconds("t", s)?,
        (None, None) => 0.0,
    };
    if !t.is_finite() {
        return Err(CliError::config("t", "must be finite"));
    }

    let d = TauGrid::default();
    let tau_min = match (o.tau_min, &file.grid.tau_min) {
        (Some(v), _) => v,
        (None, Some(s)) => seconds("grid.tau_min", s)?,
        _ => d.tau_min(),
    };
    let tau_max = match (o.tau_max, &file.grid.tau_max) {
        (Some(v), _) => v,
        (None, Some(s)) => seconds("grid.tau_max", s)?,
        _ => d.tau_max(),
    };
    let ppd = o
        .ppd
        .or(file.grid.points_per_decade)
        .unwrap_or(d.points_per_decade());
    let grid = TauGrid::new(tau_min, tau_max, ppd)?;

    let qd = QuadSpec::default();
    let quad = QuadSpec {
        base_el_nodes: o.quad_el.or(file.quad.base_el_nodes).unwrap_or(qd.base_el_nodes),
        base_az_nodes: o.quad_az.or(file.quad.base_az_nodes).unwrap_or(qd.base_az_nodes),
        max_refinements: o.quad_refine.or(file.quad.max_refinements).unwrap_or(qd.max_refinements),
        rel_tol: o.quad_tol.or(file.quad.rel_tol).unwrap_or(qd.rel_tol),
    };
    quad.validate()?;

    let epsilon = o.epsilon.or(file.epsilon);
    if let Some(e) = epsilon {
        check_epsilon(e)?;
    }
    let epsilons = match (&file.epsilons, epsilon) {
        (_, Some(e)) if o.epsilon.is_some() => vec![e],
        (Some(list), _) => list.clone(),
        (None, Some(e)) => vec![e],
        (None, None) if command == Command::Fig4 => FIG4_EPSILONS.to_vec(),
        (None, None) => vec![],
    };
    for &e in &epsilons {
        check_epsilon(e)?;
    }
    if command == Command::Tc && epsilon.is_none() {
        return Err(CliError::config("epsilon", "required for `tc`"));
    }

    let sweep = match command {
        Command::Sweep => {
            let axis = match (&o.sweep_axis, &file.sweep) {
                (Some(a), _) => parse_axis(a)?,
                (None, Some(s)) => s.axis,
                (None, None) => return Err(CliError::config("sweep.axis", "required for `sweep`")),
            };
            let raw: Vec<KValue> = match (&o.sweep_values, &file.sweep) {
                (Some(list), _) => list.split(',').map(|s| KValue::Text(s.trim().to_string())).collect(),
                (None, Some(s)) => s.values.clone(),
                (None, None) => return Err(CliError::config("sweep.values", "required for `sweep`")),
            };
            let values = raw.iter().map(|v| sweep_value(axis, v)).collect::<Result<Vec<_>, _>>()?;
            if values.is_empty() {
                return Err(CliError::config("sweep.values", "must not be empty"));
            }
            Some(SweepConfig { axis, values })
        }
        _ => None,
    };

    let threads = o.threads.or(file.threads).or_else(|| {
        std::env::var(THREADS_ENV).ok().and_then(|s| s.trim().parse().ok())
    });
    if threads == Some(0) {
        return Err(CliError::config("threads", "must be >= 1"));
    }
    let mc_n = o.mc_n.or(file.mc.scatterers).unwrap_or(2000);
    let mc_m = o.mc_m.or(file.mc.realizations).unwrap_or(2000);
    let mc_points = o.mc_points.or(file.mc.points).unwrap_or(10);
    if mc_n == 0 || mc_m < 2 || mc_points == 0 {
        return Err(CliError::config("mc", "need scatterers >= 1, realizations >= 2, points >= 1"));
    }

    Ok(RunConfig {
        command,
        source,
        scenario,
        t,
        grid,
        quad,
        epsilon,
        epsilons,
        output: o.output.clone().or(file.output).unwrap_or_else(|| PathBuf::from("out")),
        format: o.format.or(file.format).unwrap_or_default(),
        seed: o.seed.or(file.seed).unwrap_or(1),
        mc_n,
        mc_m,
        mc_points,
        sweep,
        threads,
    })
}

impl RunConfig {
    /// Scenario echo in the file format.
    pub fn scenario_config(&self) -> ScenarioConfig {
        ScenarioConfig::from_scenario(&self.scenario)
    }

    pub fn rician_k(&self) -> RicianK {
        self.scenario.rician_k
    }
}
