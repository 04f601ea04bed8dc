//! Command execution.

use std::time::Instant;

use num_complex::Complex64;

use ntn_coherence::channel::{ChannelEvaluator, QuadStats};
use ntn_coherence::coherence::{crossing_on_curve, curve_on, CoherenceResult};
use ntn_coherence::montecarlo::{mc_check, McCheckRow};
use ntn_coherence::scenarios::{run_fig2, run_fig3, run_fig4, run_sweep, SweepResult, SweepSpec};
use ntn_coherence::TauGrid;

use crate::config::{Command, RunConfig};
use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum RunResult {
    Curve {
        curve: Vec<(f64, Complex64)>,
        quad_stats: QuadStats,
    },
    Tc(CoherenceResult),
    Sweeps(Vec<SweepResult>),
    McCheck(Vec<McCheckRow>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub result: RunResult,
    pub wall_time_s: f64,
}

/// `count` log-spaced lags spanning the grid's range.
pub fn log_spaced(grid: &TauGrid, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![grid.tau_min()];
    }
    let (a, b) = (grid.tau_min().log10(), grid.tau_max().log10());
    (0..count)
        .map(|i| 10f64.powf(a + (b - a) * i as f64 / (count - 1) as f64))
        .collect()
}

pub fn execute(cfg: &RunConfig) -> Result<RunOutput, CliError> {
    let start = Instant::now();
    let scn = &cfg.scenario;
    let result = match cfg.command {
        Command::Curve => {
            let eval = ChannelEvaluator::new(scn, cfg.t, &cfg.quad)?;
            let curve = curve_on(&eval, &cfg.grid.points())?;
            RunResult::Curve {
                curve,
                quad_stats: eval.stats(),
            }
        }
        Command::Tc => {
            let epsilon = cfg.epsilon.expect("validated at parse time");
            let eval = ChannelEvaluator::new(scn, cfg.t, &cfg.quad)?;
            let curve = curve_on(&eval, &cfg.grid.points())?;
            let (tc, crossing_bracket) = crossing_on_curve(&eval, &curve, epsilon)?;
            RunResult::Tc(CoherenceResult {
                t: cfg.t,
                epsilon,
                tc,
                crossing_bracket,
                curve,
                quad_stats: eval.stats(),
            })
        }
        Command::Sweep => {
            let sweep = cfg.sweep.as_ref().expect("validated at parse time");
            let spec = SweepSpec {
                base: scn.clone(),
                axis: sweep.axis,
                values: sweep.values.clone(),
                epsilons: cfg.epsilons.clone(),
                grid: cfg.grid,
            };
            RunResult::Sweeps(vec![run_sweep("sweep", &spec, cfg.t, &cfg.quad)?])
        }
        Command::Fig2 => RunResult::Sweeps(run_fig2(&cfg.grid, &cfg.quad, cfg.epsilon)?),
        Command::Fig3 => RunResult::Sweeps(run_fig3(&cfg.grid, &cfg.quad, cfg.epsilon)?),
        Command::Fig4 => RunResult::Sweeps(run_fig4(&cfg.grid, &cfg.quad, &cfg.epsilons)?),
        Command::McCheck => {
            let taus = log_spaced(&cfg.grid, cfg.mc_points);
            RunResult::McCheck(mc_check(scn, cfg.t, &taus, cfg.mc_n, cfg.mc_m, cfg.seed, &cfg.quad)?)
        }
    };
    Ok(RunOutput {
        result,
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}

/// Human-readable summary for stdout.
pub fn summary(cfg: &RunConfig, out: &RunOutput) -> String {
    let mut s = format!("{} finished in {:.2} s\n", cfg.command.name(), out.wall_time_s);
    match &out.result {
        RunResult::Curve { curve, .. } => {
            s += &format!("{} lags from {:e} s to {:e} s\n", curve.len(), cfg.grid.tau_min(), cfg.grid.tau_max());
            if let Some((tau, a)) = curve.last() {
                s += &format!("|A| at {tau:e} s: {:.6}\n", a.norm());
            }
        }
        RunResult::Tc(r) => match r.tc.seconds() {
            Some(tc) => s += &format!("T_c(eps={}) = {tc:.6e} s\n", r.epsilon),
            None => s += &format!("T_c(eps={}) not reached below {:e} s\n", r.epsilon, cfg.grid.tau_max()),
        },
        RunResult::Sweeps(rs) => {
            for r in rs {
                s += &format!("{} ({}):\n", r.name, r.axis.name());
                for series in &r.series {
                    let tcs: Vec<String> = series
                        .tcs
                        .iter()
                        .map(|(e, tc)| match tc.seconds() {
                            Some(v) => format!("T_c({e})={v:.4e} s"),
                            None => format!("T_c({e})=not reached"),
                        })
                        .collect();
                    s += &format!("  {:<12} {}\n", format!("{:.6e}", series.axis_value), tcs.join("  "));
                }
            }
        }
        RunResult::McCheck(rows) => {
            let ok = rows.iter().filter(|r| r.z < 3.0).count();
            for r in rows {
                s += &format!(
                    "  tau={:.3e} s  quad={:+.5e}{:+.5e}i  mc={:+.5e}{:+.5e}i  se={:.2e}  z={:.2}\n",
                    r.tau,
                    r.quad_re,
                    r.quad_im,
                    r.mc.re,
                    r.mc.im,
                    r.mc.se(),
                    r.z
                );
            }
            s += &format!("{ok}/{} lags with |z| < 3\n", rows.len());
        }
    }
    s
}
