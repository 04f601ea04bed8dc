//! Coherence time `T_c = min{τ : |Ā_h(t,τ)| < ε}`.
//!
//! The first crossing is located on a log-spaced τ grid (a plain bisection
//! could skip a plateau and return a later crossing), then refined by
//! bisection on the quadrature-backed |Ā|, not on interpolated grid values.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{ChannelEvaluator, QuadStats, Scenario};
use crate::error::{Error, Result};
use crate::quadrature::QuadSpec;

/// Bisection stops once the bracket is narrower than this, relative to its
/// upper end.
pub const BISECTION_REL_WIDTH: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TauGrid {
    tau_min: f64,
    tau_max: f64,
    points_per_decade: usize,
}

impl Default for TauGrid {
    fn default() -> Self {
        TauGrid {
            tau_min: 1e-9,
            tau_max: 1e-2,
            points_per_decade: 100,
        }
    }
}

impl TauGrid {
    pub fn new(tau_min: f64, tau_max: f64, points_per_decade: usize) -> Result<Self> {
        if !(tau_min > 0.0) || !tau_min.is_finite() {
            return Err(Error::param("grid.tau_min", format!("must be > 0 s, got {tau_min}")));
        }
        if !(tau_max > tau_min) || !tau_max.is_finite() {
            return Err(Error::param(
                "grid.tau_max",
                format!("must exceed tau_min ({tau_min} s), got {tau_max}"),
            ));
        }
        if points_per_decade < 20 {
            return Err(Error::param(
                "grid.points_per_decade",
                format!("must be >= 20, got {points_per_decade}"),
            ));
        }
        Ok(TauGrid {
            tau_min,
            tau_max,
            points_per_decade,
        })
    }

    pub fn tau_min(&self) -> f64 {
        self.tau_min
    }

    pub fn tau_max(&self) -> f64 {
        self.tau_max
    }

    pub fn points_per_decade(&self) -> usize {
        self.points_per_decade
    }

    pub fn with_range(self, tau_min: f64, tau_max: f64) -> Result<Self> {
        TauGrid::new(tau_min, tau_max, self.points_per_decade)
    }

    /// Grid points, `tau_min·10^(i/ppd)`, ending exactly at `tau_max`.
    pub fn points(&self) -> Vec<f64> {
        let l0 = self.tau_min.log10();
        let decades = self.tau_max.log10() - l0;
        let ppd = self.points_per_decade as f64;
        let x = decades * ppd;
        let steps = if (x - x.round()).abs() < 1e-6 { x.round() } else { x.ceil() };
        let steps = steps.max(1.0) as usize;
        let mut pts: Vec<f64> = (0..steps)
            .map(|i| 10f64.powf(l0 + i as f64 / ppd))
            .collect();
        pts[0] = self.tau_min;
        pts.push(self.tau_max);
        pts
    }

    pub fn len(&self) -> usize {
        self.points().len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", content = "tc_s", rename_all = "snake_case")]
pub enum CoherenceTime {
    Reached(f64),
    NotReached,
}

impl CoherenceTime {
    pub fn seconds(&self) -> Option<f64> {
        match self {
            CoherenceTime::Reached(s) => Some(*s),
            CoherenceTime::NotReached => None,
        }
    }

    pub fn status(&self) -> &'static str {
        match self {
            CoherenceTime::Reached(_) => "reached",
            CoherenceTime::NotReached => "not_reached",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoherenceResult {
    pub t: f64,
    pub epsilon: f64,
    pub tc: CoherenceTime,
    /// (τ_lo, τ_hi) with |Ā(τ_lo)| ≥ ε > |Ā(τ_hi)|, when a crossing exists.
    pub crossing_bracket: Option<(f64, f64)>,
    pub curve: Vec<(f64, Complex64)>,
    pub quad_stats: QuadStats,
}

pub fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidEpsilon(epsilon))
    }
}

/// Ā at each point of `taus`, evaluated in parallel.
pub fn curve_on(eval: &ChannelEvaluator<'_>, taus: &[f64]) -> Result<Vec<(f64, Complex64)>> {
    taus.par_iter()
        .map(|&tau| Ok((tau, eval.normalized(tau)?)))
        .collect()
}

/// Ā_h(t,τ) over the grid.
pub fn autocorr_curve(
    scn: &Scenario,
    t: f64,
    grid: &TauGrid,
    quad: &QuadSpec,
) -> Result<Vec<(f64, Complex64)>> {
    let eval = ChannelEvaluator::new(scn, t, quad)?;
    curve_on(&eval, &grid.points())
}

/// First-crossing search on an already computed curve, then bisection.
pub fn crossing_on_curve(
    eval: &ChannelEvaluator<'_>,
    curve: &[(f64, Complex64)],
    epsilon: f64,
) -> Result<(CoherenceTime, Option<(f64, f64)>)> {
    check_epsilon(epsilon)?;
    let Some(idx) = curve.iter().position(|(_, a)| a.norm() < epsilon) else {
        return Ok((CoherenceTime::NotReached, None));
    };
    // Ā(0) = 1 ≥ ε, so a crossing before the first grid point is bracketed by 0
    let mut lo = if idx == 0 { 0.0 } else { curve[idx - 1].0 };
    let mut hi = curve[idx].0;
    while hi - lo > BISECTION_REL_WIDTH * hi {
        let mid = if lo > 0.0 { (lo * hi).sqrt() } else { 0.5 * hi };
        if eval.normalized(mid)?.norm() < epsilon {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((CoherenceTime::Reached(hi), Some((lo, hi))))
}

/// Coherence time for one threshold.
pub fn coherence_time(
    scn: &Scenario,
    t: f64,
    epsilon: f64,
    grid: &TauGrid,
    quad: &QuadSpec,
) -> Result<CoherenceResult> {
    check_epsilon(epsilon)?;
    let mut all = coherence_times(scn, t, &[epsilon], grid, quad)?;
    Ok(all.remove(0))
}

/// Coherence times for several thresholds sharing one curve.
pub fn coherence_times(
    scn: &Scenario,
    t: f64,
    epsilons: &[f64],
    grid: &TauGrid,
    quad: &QuadSpec,
) -> Result<Vec<CoherenceResult>> {
    for &e in epsilons {
        check_epsilon(e)?;
    }
    let eval = ChannelEvaluator::new(scn, t, quad)?;
    let curve = curve_on(&eval, &grid.points())?;
    let mut out = Vec::with_capacity(epsilons.len());
    for &epsilon in epsilons {
        let (tc, crossing_bracket) = crossing_on_curve(&eval, &curve, epsilon)?;
        out.push(CoherenceResult {
            t,
            epsilon,
            tc,
            crossing_bracket,
            curve: curve.clone(),
            quad_stats: QuadStats::default(),
        });
    }
    let stats = eval.stats();
    for r in &mut out {
        r.quad_stats = stats;
    }
    Ok(out)
}
