//! Experiment presets, the scenario file format and parameter sweeps.

use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::antenna::{hpbw_to_q, BeamConfig};
use crate::channel::{ChannelEvaluator, QuadStats, RicianK, Scenario};
use crate::coherence::{check_epsilon, crossing_on_curve, curve_on, CoherenceTime, TauGrid};
use crate::error::{Error, Result};
use crate::geometry::{BodyState, Vec3};
use crate::quadrature::QuadSpec;
use crate::scatter::VmfField;
use crate::units::{format_quantity, format_vec3, parse_quantity, parse_vec3, Dimension};
use crate::SPEED_OF_LIGHT;

pub const DEFAULT_FC_HZ: f64 = 28e9;
pub const DEFAULT_BS_POSITION_M: Vec3 = Vec3::new(-1e3, 0.0, 5e5);
pub const DEFAULT_BS_VELOCITY_MPS: Vec3 = Vec3::new(7e3, 0.0, 0.0);
pub const DEFAULT_UE_VELOCITY_MPS: Vec3 = Vec3::new(0.0, 2.0, 0.0);
pub const DEFAULT_RADIUS_WAVELENGTHS: f64 = 1000.0;
pub const DEFAULT_RHO: f64 = 30.0;
pub const DEFAULT_BS_HPBW_DEG: f64 = 2.0;
pub const DEFAULT_UE_HPBW_DEG: f64 = 20.0;

pub const FIG2_K: [f64; 7] = [0.0, 0.1, 0.2, 0.5, 1.0, 2.0, f64::INFINITY];
pub const FIG3_K: [f64; 3] = [0.0, 0.3, f64::INFINITY];
pub const FIG3_BS_SPEEDS_MPS: [f64; 3] = [0.0, 4e3, 8e3];
pub const FIG4_CURVE_HPBW_DEG: [f64; 4] = [2.0, 5.0, 10.0, 20.0];
pub const FIG4_BS_SPEEDS_MPS: [f64; 2] = [0.0, 7e3];
pub const FIG4_EPSILONS: [f64; 3] = [0.3, 0.5, 0.7];
/// Smallest lag used for the moving-BS rows of the beamwidth study, whose
/// crossings sit around 1e-7 s.
pub const FIG4_MOVING_TAU_MIN: f64 = 1e-10;

/// HPBW values of the T_c-versus-beamwidth study: 10^(−2 + i/5) degrees.
pub fn fig4_hpbw_deg() -> Vec<f64> {
    (0..=18).map(|i| 10f64.powf(-2.0 + i as f64 / 5.0)).collect()
}

/// The reference geometry: a satellite 500 km up moving at 7 km/s, a user
/// walking at 2 m/s, 28 GHz, scatterers on a 1000-wavelength sphere centered
/// on the LoS direction, and both beams aligned with the LoS at t = 0.
pub fn default_scenario(k: RicianK) -> Scenario {
    let lambda = SPEED_OF_LIGHT / DEFAULT_FC_HZ;
    let bs = BodyState {
        p0: DEFAULT_BS_POSITION_M,
        v: DEFAULT_BS_VELOCITY_MPS,
    };
    let ue = BodyState {
        p0: Vec3::ZERO,
        v: DEFAULT_UE_VELOCITY_MPS,
    };
    let los = (bs.p0 - ue.p0).normalized().expect("distinct default positions");
    let q_bs = hpbw_to_q(DEFAULT_BS_HPBW_DEG.to_radians()).expect("valid default beam");
    let q_ue = hpbw_to_q(DEFAULT_UE_HPBW_DEG.to_radians()).expect("valid default beam");
    Scenario::new(
        bs,
        ue,
        BeamConfig::new(-los, q_bs).expect("valid default beam"),
        BeamConfig::new(los, q_ue).expect("valid default beam"),
        VmfField::new(los, DEFAULT_RHO, DEFAULT_RADIUS_WAVELENGTHS * lambda).expect("valid default field"),
        k,
        DEFAULT_FC_HZ,
    )
    .expect("valid default scenario")
}

/// Names accepted by [`preset`].
pub const PRESETS: [&str; 2] = ["default", "static-bs"];

/// Preset scenario file. K is left out and has to be supplied separately.
pub fn preset(name: &str) -> Result<ScenarioConfig> {
    let scn = match name {
        "default" => default_scenario(RicianK::NLOS_ONLY),
        "static-bs" => SweepAxis::BsSpeed.apply(&default_scenario(RicianK::NLOS_ONLY), 0.0)?,
        _ => {
            return Err(Error::param(
                "scenario.preset",
                format!("unknown preset `{name}` (known: {})", PRESETS.join(", ")),
            ))
        }
    };
    let mut cfg = ScenarioConfig::from_scenario(&scn);
    cfg.rician_k = None;
    Ok(cfg)
}

/// Rician K in a scenario file: a number, or `"inf"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum KValue {
    Number(f64),
    Text(String),
}

impl KValue {
    pub fn to_rician(&self) -> Result<RicianK> {
        match self {
            KValue::Number(k) => RicianK::new(*k),
            KValue::Text(s) => match s.trim().to_ascii_lowercase().as_str() {
                "inf" | "+inf" | "infinity" | "+infinity" => Ok(RicianK::LOS_ONLY),
                other => other
                    .parse::<f64>()
                    .map_err(|_| Error::param("scenario.rician_k", format!("`{s}` is neither a number nor `inf`")))
                    .and_then(RicianK::new),
            },
        }
    }

    pub fn from_rician(k: RicianK) -> Self {
        if k.is_los_only() {
            KValue::Text("inf".into())
        } else {
            KValue::Number(k.value())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BodyConfig {
    /// e.g. `"[-1, 0, 500] km"`.
    pub position: String,
    /// e.g. `"[7, 0, 0] km/s"`.
    pub velocity: String,
}

/// A beam is given by its HPBW (`"20 deg"`) or directly by the exponent `q`.
/// Without `pointing` it is aimed along the t = 0 line of sight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BeamSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pointing: Option<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hpbw: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScatterConfig {
    /// Defaults to the t = 0 LoS direction (user toward base station).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean_direction: Option<[f64; 3]>,
    pub concentration: f64,
    /// e.g. `"1000 lambda"` or `"10.7 m"`.
    pub radius: String,
}

/// Scenario file contents. Every dimensioned quantity carries its unit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub carrier: String,
    pub bs: BodyConfig,
    pub ue: BodyConfig,
    pub beam_bs: BeamSpec,
    pub beam_ue: BeamSpec,
    pub scatter: ScatterConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rician_k: Option<KValue>,
}

fn at<T>(path: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Unit(m) => Error::Unit(format!("{path}: {m}")),
        other => other,
    })
}

impl ScenarioConfig {
    pub fn to_scenario(&self) -> Result<Scenario> {
        let fc = at("scenario.carrier", parse_quantity(&self.carrier, Dimension::Frequency, None))?;
        if !(fc > 0.0) {
            return Err(Error::param("scenario.carrier", format!("must be > 0 Hz, got {fc}")));
        }
        let lambda = SPEED_OF_LIGHT / fc;
        let body = |c: &BodyConfig, name: &str| -> Result<BodyState> {
            let p0 = at(&format!("scenario.{name}.position"), parse_vec3(&c.position, Dimension::Length))?;
            let v = at(&format!("scenario.{name}.velocity"), parse_vec3(&c.velocity, Dimension::Speed))?;
            BodyState::new(p0, v)
        };
        let bs = body(&self.bs, "bs")?;
        let ue = body(&self.ue, "ue")?;
        let los = (bs.p0 - ue.p0).normalized()?;
        let beam = |b: &BeamSpec, name: &'static str, default: Vec3| -> Result<BeamConfig> {
            let pointing = b.pointing.map(Vec3::from).unwrap_or(default);
            match (&b.hpbw, b.q) {
                (Some(h), None) => {
                    let psi = at(&format!("scenario.{name}.hpbw"), parse_quantity(h, Dimension::Angle, None))?;
                    BeamConfig::from_hpbw(pointing, psi)
                }
                (None, Some(q)) => BeamConfig::new(pointing, q),
                _ => Err(Error::param(name, "give exactly one of `hpbw` or `q`")),
            }
        };
        let beam_bs = beam(&self.beam_bs, "beam_bs", -los)?;
        let beam_ue = beam(&self.beam_ue, "beam_ue", los)?;
        let radius = at(
            "scenario.scatter.radius",
            parse_quantity(&self.scatter.radius, Dimension::Length, Some(lambda)),
        )?;
        let mu = self.scatter.mean_direction.map(Vec3::from).unwrap_or(los);
        let field = VmfField::new(mu, self.scatter.concentration, radius)?;
        let k = match &self.rician_k {
            Some(k) => k.to_rician()?,
            None => return Err(Error::param("scenario.rician_k", "Rician K must be supplied")),
        };
        Scenario::new(bs, ue, beam_bs, beam_ue, field, k, fc)
    }

    /// Lossless description of `scn` (SI units, explicit pointing and q).
    pub fn from_scenario(scn: &Scenario) -> Self {
        let body = |b: &BodyState| BodyConfig {
            position: format_vec3(b.p0, Dimension::Length),
            velocity: format_vec3(b.v, Dimension::Speed),
        };
        let beam = |b: &BeamConfig| BeamSpec {
            pointing: Some(b.pointing().to_array()),
            hpbw: None,
            q: Some(b.q()),
        };
        ScenarioConfig {
            carrier: format_quantity(scn.fc_hz(), Dimension::Frequency),
            bs: body(&scn.bs),
            ue: body(&scn.ue),
            beam_bs: beam(&scn.beam_bs),
            beam_ue: beam(&scn.beam_ue),
            scatter: ScatterConfig {
                mean_direction: Some(scn.field.mu().to_array()),
                concentration: scn.field.rho(),
                radius: format_quantity(scn.field.radius_m(), Dimension::Length),
            },
            rician_k: Some(KValue::from_rician(scn.rician_k)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    RicianK,
    /// BS speed in m/s along the scenario's BS direction of motion (x if static).
    BsSpeed,
    /// UE half-power beamwidth in radians.
    UeHpbw,
}

impl SweepAxis {
    pub fn name(&self) -> &'static str {
        match self {
            SweepAxis::RicianK => "rician_k",
            SweepAxis::BsSpeed => "bs_speed",
            SweepAxis::UeHpbw => "ue_hpbw",
        }
    }

    pub fn apply(&self, base: &Scenario, value: f64) -> Result<Scenario> {
        let mut scn = base.clone();
        match self {
            SweepAxis::RicianK => scn.rician_k = RicianK::new(value)?,
            SweepAxis::BsSpeed => {
                if !value.is_finite() || value < 0.0 {
                    return Err(Error::param("sweep.values", format!("speed must be finite and >= 0, got {value}")));
                }
                let dir = scn.bs.v.normalized().unwrap_or(Vec3::X);
                scn.bs.v = dir * value;
            }
            SweepAxis::UeHpbw => scn.beam_ue = BeamConfig::from_hpbw(scn.beam_ue.pointing(), value)?,
        }
        Ok(scn)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub base: Scenario,
    pub axis: SweepAxis,
    pub values: Vec<f64>,
    /// Thresholds at which T_c is reported; empty for curves only.
    pub epsilons: Vec<f64>,
    pub grid: TauGrid,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(Error::param("sweep.values", "must not be empty"));
        }
        for &v in &self.values {
            let ok = v.is_finite() || (self.axis == SweepAxis::RicianK && v == f64::INFINITY);
            if !ok {
                return Err(Error::param("sweep.values", format!("{v} not allowed on axis {}", self.axis.name())));
            }
        }
        for &e in &self.epsilons {
            check_epsilon(e)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSeries {
    pub axis_value: f64,
    pub curve: Vec<(f64, Complex64)>,
    /// (ε, T_c) pairs, in the order of the requested thresholds.
    pub tcs: Vec<(f64, CoherenceTime)>,
    pub quad_stats: QuadStats,
    pub wall_time_s: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub name: String,
    pub axis: SweepAxis,
    pub t: f64,
    pub series: Vec<SweepSeries>,
    pub wall_time_s: f64,
}

impl SweepResult {
    pub fn tc(&self, axis_value: f64, epsilon: f64) -> Option<CoherenceTime> {
        self.series
            .iter()
            .find(|s| s.axis_value == axis_value)
            .and_then(|s| s.tcs.iter().find(|(e, _)| *e == epsilon).map(|(_, tc)| *tc))
    }
}

/// Curve (and T_c per threshold) for one scenario.
pub fn run_point(
    scn: &Scenario,
    t: f64,
    grid: &TauGrid,
    epsilons: &[f64],
    quad: &QuadSpec,
) -> Result<(Vec<(f64, Complex64)>, Vec<(f64, CoherenceTime)>, QuadStats)> {
    let eval = ChannelEvaluator::new(scn, t, quad)?;
    let curve = curve_on(&eval, &grid.points())?;
    let tcs = epsilons
        .iter()
        .map(|&e| Ok((e, crossing_on_curve(&eval, &curve, e)?.0)))
        .collect::<Result<Vec<_>>>()?;
    Ok((curve, tcs, eval.stats()))
}

/// Evaluate every sweep point at time `t`; the output keeps the order of
/// `spec.values` whatever the scheduling.
pub fn run_sweep(name: &str, spec: &SweepSpec, t: f64, quad: &QuadSpec) -> Result<SweepResult> {
    spec.validate()?;
    let start = Instant::now();
    let series = spec
        .values
        .par_iter()
        .map(|&value| {
            let t0 = Instant::now();
            let scn = spec.axis.apply(&spec.base, value)?;
            let (curve, tcs, quad_stats) = run_point(&scn, t, &spec.grid, &spec.epsilons, quad)?;
            Ok(SweepSeries {
                axis_value: value,
                curve,
                tcs,
                quad_stats,
                wall_time_s: t0.elapsed().as_secs_f64(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult {
        name: name.to_string(),
        axis: spec.axis,
        t,
        series,
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}

/// Autocorrelation over K ∈ {0, 0.1, 0.2, 0.5, 1, 2, ∞} on the default scenario.
pub fn run_fig2(grid: &TauGrid, quad: &QuadSpec, epsilon: Option<f64>) -> Result<Vec<SweepResult>> {
    let spec = SweepSpec {
        base: default_scenario(RicianK::NLOS_ONLY),
        axis: SweepAxis::RicianK,
        values: FIG2_K.to_vec(),
        epsilons: epsilon.into_iter().collect(),
        grid: *grid,
    };
    Ok(vec![run_sweep("fig2", &spec, 0.0, quad)?])
}

/// BS speeds {0, 4, 8} km/s, one result per K ∈ {0, 0.3, ∞}.
pub fn run_fig3(grid: &TauGrid, quad: &QuadSpec, epsilon: Option<f64>) -> Result<Vec<SweepResult>> {
    FIG3_K
        .iter()
        .map(|&k| {
            let spec = SweepSpec {
                base: default_scenario(RicianK::new(k)?),
                axis: SweepAxis::BsSpeed,
                values: FIG3_BS_SPEEDS_MPS.to_vec(),
                epsilons: epsilon.into_iter().collect(),
                grid: *grid,
            };
            run_sweep(&format!("fig3_k{}", RicianK::new(k)?), &spec, 0.0, quad)
        })
        .collect()
}

/// UE beamwidth study at K = 0 for a static and a 7 km/s BS: curves for
/// ψ ∈ {2, 5, 10, 20}° and T_c over the log-spaced beamwidth list.
pub fn run_fig4(grid: &TauGrid, quad: &QuadSpec, epsilons: &[f64]) -> Result<Vec<SweepResult>> {
    let mut out = Vec::new();
    for &speed in &FIG4_BS_SPEEDS_MPS {
        let base = SweepAxis::BsSpeed.apply(&default_scenario(RicianK::NLOS_ONLY), speed)?;
        let grid = if speed > 0.0 && grid.tau_min() > FIG4_MOVING_TAU_MIN {
            grid.with_range(FIG4_MOVING_TAU_MIN, grid.tau_max())?
        } else {
            *grid
        };
        let tag = format!("vb{}kms", speed / 1e3);
        let curves = SweepSpec {
            base: base.clone(),
            axis: SweepAxis::UeHpbw,
            values: FIG4_CURVE_HPBW_DEG.iter().map(|d| d.to_radians()).collect(),
            epsilons: epsilons.to_vec(),
            grid,
        };
        out.push(run_sweep(&format!("fig4a_{tag}"), &curves, 0.0, quad)?);
        let tcs = SweepSpec {
            base,
            axis: SweepAxis::UeHpbw,
            values: fig4_hpbw_deg().iter().map(|d| d.to_radians()).collect(),
            epsilons: epsilons.to_vec(),
            grid,
        };
        out.push(run_sweep(&format!("fig4b_{tag}"), &tcs, 0.0, quad)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_values() {
        let scn = default_scenario(RicianK::new(0.3).unwrap());
        let lambda = SPEED_OF_LIGHT / 28e9;
        assert!((lambda - 0.010_706_9).abs() < 1e-7);
        assert!((scn.field.radius_m() - 10.706_873_5).abs() < 1e-6);
        let los = (scn.bs.p0 - scn.ue.p0).normalized().unwrap();
        assert!((scn.field.mu().dot(los) - 1.0).abs() < 1e-15);
        assert!((scn.beam_ue.hpbw() - 20f64.to_radians()).abs() < 1e-12);
        assert!((scn.beam_bs.hpbw() - 2f64.to_radians()).abs() < 1e-12);
        assert_eq!(scn.bs.v, Vec3::new(7e3, 0.0, 0.0));
        assert_eq!(scn.ue.v, Vec3::new(0.0, 2.0, 0.0));
        assert_eq!(scn.field.rho(), 30.0);
    }

    #[test]
    fn presets_need_k() {
        let cfg = preset("default").unwrap();
        assert!(matches!(cfg.to_scenario(), Err(Error::InvalidParameter { name: "scenario.rician_k", .. })));
        assert!(preset("nope").is_err());
    }

    #[test]
    fn presets_round_trip_through_json() {
        for name in PRESETS {
            for k in [0.0, 0.3, f64::INFINITY] {
                let mut cfg = preset(name).unwrap();
                cfg.rician_k = Some(KValue::from_rician(RicianK::new(k).unwrap()));
                let scn = cfg.to_scenario().unwrap();
                let text = serde_json::to_string_pretty(&ScenarioConfig::from_scenario(&scn)).unwrap();
                let back: ScenarioConfig = serde_json::from_str(&text).unwrap();
                assert_eq!(back.to_scenario().unwrap(), scn, "{name} K={k}");
            }
        }
    }

    #[test]
    fn human_written_config() {
        let text = r#"{
            "carrier": "28 GHz",
            "bs": { "position": "[-1, 0, 500] km", "velocity": "[7, 0, 0] km/s" },
            "ue": { "position": "[0, 0, 0] m", "velocity": "[0, 2, 0] m/s" },
            "beam_bs": { "hpbw": "2 deg" },
            "beam_ue": { "hpbw": "20 deg" },
            "scatter": { "concentration": 30, "radius": "1000 lambda" },
            "rician_k": 0.3
        }"#;
        let cfg: ScenarioConfig = serde_json::from_str(text).unwrap();
        let scn = cfg.to_scenario().unwrap();
        let reference = default_scenario(RicianK::new(0.3).unwrap());
        assert!((scn.field.radius_m() - reference.field.radius_m()).abs() < 1e-12);
        assert!((scn.beam_ue.q() - reference.beam_ue.q()).abs() < 1e-9);
        assert!((scn.field.mu() - reference.field.mu()).norm() < 1e-15);
        assert_eq!(scn.bs, reference.bs);
    }

    #[test]
    fn config_errors_carry_field_paths() {
        let mut cfg = preset("default").unwrap();
        cfg.rician_k = Some(KValue::Number(1.0));
        cfg.bs.position = "[-1, 0, 500]".into();
        match cfg.to_scenario() {
            Err(Error::Unit(m)) => assert!(m.starts_with("scenario.bs.position"), "{m}"),
            other => panic!("{other:?}"),
        }
        let mut cfg = preset("default").unwrap();
        cfg.rician_k = Some(KValue::Text("lots".into()));
        assert!(cfg.to_scenario().is_err());
        let mut cfg = preset("default").unwrap();
        cfg.rician_k = Some(KValue::Number(1.0));
        cfg.beam_ue.hpbw = Some("20 deg".into());
        assert!(cfg.to_scenario().is_err());
    }

    #[test]
    fn k_values() {
        assert_eq!(KValue::Text("inf".into()).to_rician().unwrap(), RicianK::LOS_ONLY);
        assert_eq!(KValue::Text("0.5".into()).to_rician().unwrap().value(), 0.5);
        assert!(KValue::Number(-1.0).to_rician().is_err());
        let json = serde_json::to_string(&KValue::from_rician(RicianK::LOS_ONLY)).unwrap();
        assert_eq!(json, "\"inf\"");
    }

    #[test]
    fn sweep_axes() {
        let base = default_scenario(RicianK::NLOS_ONLY);
        let s = SweepAxis::BsSpeed.apply(&base, 4e3).unwrap();
        assert_eq!(s.bs.v, Vec3::new(4e3, 0.0, 0.0));
        let still = SweepAxis::BsSpeed.apply(&base, 0.0).unwrap();
        assert_eq!(SweepAxis::BsSpeed.apply(&still, 8e3).unwrap().bs.v, Vec3::new(8e3, 0.0, 0.0));
        let b = SweepAxis::UeHpbw.apply(&base, 5f64.to_radians()).unwrap();
        assert!((b.beam_ue.hpbw() - 5f64.to_radians()).abs() < 1e-12);
        assert_eq!(SweepAxis::RicianK.apply(&base, f64::INFINITY).unwrap().rician_k, RicianK::LOS_ONLY);
        let spec = SweepSpec {
            base: base.clone(),
            axis: SweepAxis::BsSpeed,
            values: vec![f64::INFINITY],
            epsilons: vec![],
            grid: TauGrid::default(),
        };
        assert!(spec.validate().is_err());
    }

    #[test]
    fn beamwidth_list() {
        let l = fig4_hpbw_deg();
        assert_eq!(l.len(), 19);
        assert!((l[0] - 0.01).abs() < 1e-15 && (l[5] - 0.1).abs() < 1e-15 && (l[15] - 10.0).abs() < 1e-12);
    }

    #[test]
    fn sweep_keeps_value_order() {
        let spec = SweepSpec {
            base: default_scenario(RicianK::NLOS_ONLY),
            axis: SweepAxis::RicianK,
            values: vec![f64::INFINITY, 0.0, 1.0],
            epsilons: vec![0.5],
            grid: TauGrid::new(1e-6, 1e-3, 20).unwrap(),
        };
        let r = run_sweep("t", &spec, 0.0, &QuadSpec::default()).unwrap();
        let vals: Vec<f64> = r.series.iter().map(|s| s.axis_value).collect();
        assert_eq!(vals, spec.values);
        assert!(r.series.iter().all(|s| s.curve.len() == spec.grid.len() && s.tcs.len() == 1));
    }
}
