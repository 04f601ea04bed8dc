//! Doppler phases and the channel autocorrelation.
//!
//! The channel is `h = √(K/(K+1))·h_L + √(1/(K+1))·h_N`. Because the
//! scatterer phases are uniform and mutually uncorrelated, the cross terms of
//! `E[h(t) h*(t+τ)]` vanish and
//!
//! ```text
//! A_h(t,τ) = K/(K+1)·A_L(t,τ) + 1/(K+1)·A_N(t,τ)
//! A_L(t,τ) = √(G_b(t)G_b(t+τ)G_u(t)G_u(t+τ)) · e^{j2π(φ(t) − φ(t+τ))}
//! A_N(t,τ) = ∫ p(Ω) √(G_b(t,Ω)G_b(t+τ,Ω)G_u(t,Ω)G_u(t+τ,Ω)) · e^{j2π(φ(t,Ω) − φ(t+τ,Ω))} dΩ
//! ```
//!
//! Propagation delays contribute a τ-independent phase per path that cancels
//! in every term, so they do not appear here (see [`crate::montecarlo`]).
//! Phases are in cycles; 2π enters only when forming complex exponentials.

use std::collections::HashMap;
use std::f64::consts::TAU;
use std::sync::{Arc, Mutex};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::antenna::{beam_gain, los_gains, BeamConfig};
use crate::error::{Error, Result};
use crate::geometry::{direction_vector, norm_increment, BodyState, SolidAngle, Vec3, MIN_DISTANCE_M};
use crate::quadrature::{integrate_adaptive, Cap, QuadResult, QuadSpec, SphereGrid};
use crate::scatter::VmfField;
use crate::SPEED_OF_LIGHT;

/// Rician factor. `+∞` is a valid value meaning LoS only; `0` means NLoS only.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct RicianK(f64);

impl RicianK {
    pub const LOS_ONLY: RicianK = RicianK(f64::INFINITY);
    pub const NLOS_ONLY: RicianK = RicianK(0.0);

    pub fn new(k: f64) -> Result<Self> {
        if k.is_nan() || k < 0.0 {
            return Err(Error::param("rician_k", format!("must be >= 0 or +inf, got {k}")));
        }
        Ok(RicianK(k))
    }

    pub fn value(&self) -> f64 {
        self.0
    }

    pub fn is_los_only(&self) -> bool {
        self.0.is_infinite()
    }

    pub fn is_nlos_only(&self) -> bool {
        self.0 == 0.0
    }

    /// K/(K+1), equal to 1 for K = +∞.
    pub fn los_weight(&self) -> f64 {
        if self.is_los_only() {
            1.0
        } else {
            self.0 / (self.0 + 1.0)
        }
    }

    /// 1/(K+1), equal to 0 for K = +∞.
    pub fn nlos_weight(&self) -> f64 {
        if self.is_los_only() {
            0.0
        } else {
            1.0 / (self.0 + 1.0)
        }
    }
}

impl std::fmt::Display for RicianK {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_los_only() {
            write!(f, "inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

/// One evaluation unit: two bodies, two beams, the scatterer field, K and
/// the carrier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub bs: BodyState,
    pub ue: BodyState,
    pub beam_bs: BeamConfig,
    pub beam_ue: BeamConfig,
    pub field: VmfField,
    pub rician_k: RicianK,
    fc_hz: f64,
    lambda_m: f64,
}

impl Scenario {
    pub fn new(
        bs: BodyState,
        ue: BodyState,
        beam_bs: BeamConfig,
        beam_ue: BeamConfig,
        field: VmfField,
        rician_k: RicianK,
        fc_hz: f64,
    ) -> Result<Self> {
        if !(fc_hz > 0.0) || !fc_hz.is_finite() {
            return Err(Error::param("carrier", format!("frequency must be > 0 Hz, got {fc_hz}")));
        }
        let d = (bs.p0 - ue.p0).norm();
        if d < MIN_DISTANCE_M {
            return Err(Error::ZeroDistance { distance: d });
        }
        Ok(Scenario {
            bs,
            ue,
            beam_bs,
            beam_ue,
            field,
            rician_k,
            fc_hz,
            lambda_m: SPEED_OF_LIGHT / fc_hz,
        })
    }

    pub fn fc_hz(&self) -> f64 {
        self.fc_hz
    }

    pub fn lambda_m(&self) -> f64 {
        self.lambda_m
    }

    pub fn with_rician_k(mut self, k: RicianK) -> Self {
        self.rician_k = k;
        self
    }

    /// p_b(0) − p_u(0).
    pub fn initial_offset(&self) -> Vec3 {
        self.bs.p0 - self.ue.p0
    }

    /// v_b − v_u.
    pub fn relative_velocity(&self) -> Vec3 {
        self.bs.v - self.ue.v
    }

    /// Scatterer position p(Ω) = p_u(0) + R·n for unit `n`.
    #[inline]
    pub fn scatterer_point(&self, n: Vec3) -> Vec3 {
        self.ue.p0 + n * self.field.radius_m()
    }

    pub fn is_static(&self) -> bool {
        self.bs.v == Vec3::ZERO && self.ue.v == Vec3::ZERO
    }
}

/// Autocorrelation `A_h(t,τ)` with its two non-zero pieces.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Autocorr {
    pub t: f64,
    pub tau: f64,
    pub value: Complex64,
    pub los_part: Complex64,
    pub nlos_part: Complex64,
}

impl Autocorr {
    fn combine(k: RicianK, t: f64, tau: f64, los: Complex64, nlos: Complex64) -> Self {
        let mut value = Complex64::new(0.0, 0.0);
        if k.los_weight() > 0.0 {
            value += los * k.los_weight();
        }
        if k.nlos_weight() > 0.0 {
            value += nlos * k.nlos_weight();
        }
        Autocorr {
            t,
            tau,
            value,
            los_part: los,
            nlos_part: nlos,
        }
    }
}

/// LoS Doppler frequency (v_u − v_b)·(p_b − p_u) / (λ‖p_b − p_u‖), Hz.
pub fn los_doppler_freq(scn: &Scenario, t: f64) -> Result<f64> {
    let d = scn.bs.position_at(t) - scn.ue.position_at(t);
    let dn = d.norm();
    if dn < MIN_DISTANCE_M {
        return Err(Error::ZeroDistance { distance: dn });
    }
    Ok((scn.ue.v - scn.bs.v).dot(d) / (scn.lambda_m * dn))
}

/// LoS Doppler phase φ(t) = −(‖p_0 + v t‖ − ‖p_0‖)/λ, cycles.
pub fn los_phase(scn: &Scenario, t: f64) -> f64 {
    -norm_increment(scn.initial_offset(), scn.relative_velocity() * t) / scn.lambda_m
}

/// NLoS Doppler frequency for the scatterer at `omega`, Hz.
pub fn nlos_doppler_freq(scn: &Scenario, t: f64, omega: SolidAngle) -> Result<f64> {
    nlos_doppler_freq_dir(scn, t, direction_vector(omega))
}

pub fn nlos_doppler_freq_dir(scn: &Scenario, t: f64, n: Vec3) -> Result<f64> {
    let p = scn.scatterer_point(n);
    let term = |body: &BodyState| -> Result<f64> {
        let d = p - body.position_at(t);
        let dn = d.norm();
        if dn < MIN_DISTANCE_M {
            return Err(Error::ZeroDistance { distance: dn });
        }
        Ok(body.v.dot(d) / (scn.lambda_m * dn))
    };
    Ok(term(&scn.bs)? + term(&scn.ue)?)
}

/// NLoS Doppler phase
/// φ(t,Ω) = −(‖r − v_b t‖ − ‖r‖ + ‖s − v_u t‖ − ‖s‖)/λ with
/// r = p(Ω) − p_b(0), s = p(Ω) − p_u(0); cycles.
pub fn nlos_phase(scn: &Scenario, t: f64, omega: SolidAngle) -> f64 {
    nlos_phase_dir(scn, t, direction_vector(omega))
}

#[inline]
pub fn nlos_phase_dir(scn: &Scenario, t: f64, n: Vec3) -> f64 {
    let p = scn.scatterer_point(n);
    let r = p - scn.bs.p0;
    let s = p - scn.ue.p0;
    -(norm_increment(r, scn.bs.v * -t) + norm_increment(s, scn.ue.v * -t)) / scn.lambda_m
}

/// Product G_b(t,Ω)·G_u(t,Ω) toward the scatterer at unit `n`, or `None`
/// if the scatterer coincides with either body.
#[inline]
fn nlos_gain_product(scn: &Scenario, t: f64, n: Vec3) -> Option<f64> {
    let p = scn.scatterer_point(n);
    let db = p - scn.bs.position_at(t);
    let du = p - scn.ue.position_at(t);
    let (nb, nu) = (db.norm(), du.norm());
    if nb < MIN_DISTANCE_M || nu < MIN_DISTANCE_M {
        return None;
    }
    let gb = beam_gain(&scn.beam_bs, db / nb);
    if gb == 0.0 {
        return Some(0.0);
    }
    Some(gb * beam_gain(&scn.beam_ue, du / nu))
}

/// A_L(t,τ).
pub fn los_autocorr(scn: &Scenario, t: f64, tau: f64) -> Result<Complex64> {
    let (gb0, gu0) = los_gains(scn, t)?;
    let (gb1, gu1) = los_gains(scn, t + tau)?;
    let mag = (gb0 * gb1 * gu0 * gu1).sqrt();
    let dphi = los_phase(scn, t) - los_phase(scn, t + tau);
    Ok(Complex64::from_polar(mag, TAU * dphi))
}

/// A_N(t,τ) by adaptive spherical quadrature.
pub fn nlos_autocorr(scn: &Scenario, t: f64, tau: f64, quad: &QuadSpec) -> Result<Complex64> {
    let eval = NlosEvaluator::new(scn, t, quad)?;
    eval.autocorr(tau)
}

/// A_h(t,τ) with the K = 0 and K = +∞ sentinels.
pub fn channel_autocorr(scn: &Scenario, t: f64, tau: f64, quad: &QuadSpec) -> Result<Autocorr> {
    ChannelEvaluator::new(scn, t, quad)?.autocorr(tau)
}

/// Ā_h(t,τ) = A_h(t,τ)/A_h(t,0).
pub fn normalized_autocorr(scn: &Scenario, t: f64, tau: f64, quad: &QuadSpec) -> Result<Complex64> {
    ChannelEvaluator::new(scn, t, quad)?.normalized(tau)
}

/// Log of the envelope bound below which the NLoS integrand is dropped
/// (outside the integration cap the integrand is < e^-36 of its peak bound).
const CAP_LOG_CUTOFF: f64 = 36.0;

/// Grids larger than this are not cached.
const MAX_CACHED_NODES: usize = 1 << 21;

/// Running totals of quadrature work.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct QuadStats {
    pub integrals: usize,
    pub nodes_used: usize,
    /// Largest estimated error relative to the normalizer.
    pub max_rel_error: f64,
    pub max_grid: (usize, usize),
}

impl QuadStats {
    pub fn merge(&mut self, other: &QuadStats) {
        self.integrals += other.integrals;
        self.nodes_used += other.nodes_used;
        self.max_rel_error = self.max_rel_error.max(other.max_rel_error);
        if other.max_grid.0 * other.max_grid.1 > self.max_grid.0 * self.max_grid.1 {
            self.max_grid = other.max_grid;
        }
    }
}

/// Per-node data at the reference time t: p·√G(t) (times the quadrature
/// weight) and φ(t).
struct RefNodes {
    amp: Vec<f64>,
    phase: Vec<f64>,
}

/// Evaluates A_N(t,τ) for many τ at a fixed (scenario, t), reusing the
/// normalizer, the integration cap and the reference-time node data.
pub struct NlosEvaluator<'a> {
    scn: &'a Scenario,
    t: f64,
    quad: QuadSpec,
    cap: Cap,
    normalizer: f64,
    cache: Mutex<HashMap<(usize, usize), Arc<RefNodes>>>,
    stats: Mutex<QuadStats>,
}

impl<'a> NlosEvaluator<'a> {
    pub fn new(scn: &'a Scenario, t: f64, quad: &QuadSpec) -> Result<Self> {
        quad.validate()?;
        if !t.is_finite() {
            return Err(Error::NonFinite { what: "time" });
        }
        let mut eval = NlosEvaluator {
            scn,
            t,
            quad: *quad,
            cap: nlos_cap(scn, t),
            normalizer: 0.0,
            cache: Mutex::new(HashMap::new()),
            stats: Mutex::new(QuadStats::default()),
        };
        let a0 = eval.integrate(0.0, 0.0)?;
        eval.normalizer = a0.re;
        Ok(eval)
    }

    /// A_N(t,0), real and non-negative.
    pub fn normalizer(&self) -> f64 {
        self.normalizer
    }

    pub fn cap(&self) -> &Cap {
        &self.cap
    }

    pub fn stats(&self) -> QuadStats {
        *self.stats.lock().expect("stats poisoned")
    }

    pub fn autocorr(&self, tau: f64) -> Result<Complex64> {
        if tau == 0.0 {
            return Ok(Complex64::new(self.normalizer, 0.0));
        }
        self.integrate(tau, self.normalizer)
    }

    /// Spatial rate of the phase difference across the sphere, cycles/rad.
    fn phase_rate(&self, tau: f64) -> f64 {
        let scn = self.scn;
        let r = scn.field.radius_m();
        let pb = scn.bs.position_at(self.t);
        let d_bs = ((pb - scn.ue.p0).norm() - r).abs().max(1e-3 * r);
        let disp = (scn.ue.v.norm() + scn.bs.v.norm() * r / d_bs) * tau.abs();
        disp / scn.lambda_m
    }

    fn ref_nodes(&self, grid: &SphereGrid) -> Result<Arc<RefNodes>> {
        let key = (grid.n_el(), grid.n_az());
        if let Some(r) = self.cache.lock().expect("cache poisoned").get(&key) {
            return Ok(r.clone());
        }
        let scn = self.scn;
        let t = self.t;
        let data: Vec<(f64, f64)> = grid.map_nodes(|n| match nlos_gain_product(scn, t, n) {
            Some(g) => (scn.field.pdf(n) * g.sqrt(), nlos_phase_dir(scn, t, n)),
            None => (f64::NAN, 0.0),
        });
        if data.iter().any(|(a, _)| a.is_nan()) {
            return Err(Error::ZeroDistance { distance: 0.0 });
        }
        let (amp, phase) = data.into_iter().unzip();
        let nodes = Arc::new(RefNodes { amp, phase });
        if grid.len() <= MAX_CACHED_NODES {
            self.cache
                .lock()
                .expect("cache poisoned")
                .insert(key, nodes.clone());
        }
        Ok(nodes)
    }

    fn integrate(&self, tau: f64, ref_scale: f64) -> Result<Complex64> {
        let scn = self.scn;
        let t1 = self.t + tau;
        let start = self.cap.resolution_for_phase(self.phase_rate(tau));
        let failure: Mutex<Option<Error>> = Mutex::new(None);
        let result: QuadResult = integrate_adaptive(self.cap, start, &self.quad, ref_scale, |grid| {
            let nodes = match self.ref_nodes(grid) {
                Ok(n) => n,
                Err(e) => {
                    *failure.lock().expect("poisoned") = Some(e);
                    return Complex64::new(f64::NAN, f64::NAN);
                }
            };
            grid.weighted_sum(|k, n| {
                let amp = nodes.amp[k];
                if amp == 0.0 {
                    return Complex64::new(0.0, 0.0);
                }
                if tau == 0.0 {
                    // p·√G(t)·√G(t)
                    return Complex64::new(amp * amp / scn.field.pdf(n), 0.0);
                }
                match nlos_gain_product(scn, t1, n) {
                    Some(g1) => {
                        let dphi = nodes.phase[k] - nlos_phase_dir(scn, t1, n);
                        Complex64::from_polar(amp * g1.sqrt(), TAU * dphi)
                    }
                    None => Complex64::new(f64::NAN, f64::NAN),
                }
            })
        });
        if let Some(e) = failure.into_inner().expect("poisoned") {
            return Err(e);
        }
        if !result.value.is_finite() {
            return Err(Error::ZeroDistance { distance: 0.0 });
        }
        {
            let mut s = self.stats.lock().expect("stats poisoned");
            let scale = result.value.norm().max(ref_scale).max(1e-300);
            s.merge(&QuadStats {
                integrals: 1,
                nodes_used: result.nodes_used,
                max_rel_error: result.est_error / scale,
                max_grid: result.final_grid,
            });
        }
        Ok(result.into_result()?.value)
    }
}

/// Cap holding all non-negligible mass of p(Ω)·√G_u(t,Ω).
///
/// With the user at the sphere center, p·√G_u ≤ C·exp(m·n) for
/// m = ρµ + (q_u/2)u (since ln cos θ ≤ cos θ − 1), a vMF-shaped bound about
/// m/|m| with concentration |m|. Once the user has moved off-center only the
/// density factor is used.
fn nlos_cap(scn: &Scenario, t: f64) -> Cap {
    let field = &scn.field;
    let ue_offset = (scn.ue.position_at(t) - scn.ue.p0).norm();
    let m = if ue_offset <= 1e-9 * field.radius_m() {
        field.mu() * field.rho() + scn.beam_ue.pointing() * (0.5 * scn.beam_ue.q())
    } else {
        field.mu() * field.rho()
    };
    let conc = m.norm();
    let pole = if conc > 0.0 { m / conc } else { field.mu() };
    let cos_min = 1.0 - CAP_LOG_CUTOFF / conc.max(1e-300);
    if cos_min <= -1.0 {
        Cap::around(pole, -1.0)
    } else {
        Cap::around(pole, cos_min)
    }
}

/// Evaluates A_h(t,τ) and Ā_h(t,τ) for many τ at a fixed (scenario, t).
pub struct ChannelEvaluator<'a> {
    scn: &'a Scenario,
    t: f64,
    nlos: Option<NlosEvaluator<'a>>,
    at_zero: Autocorr,
}

impl<'a> ChannelEvaluator<'a> {
    pub fn new(scn: &'a Scenario, t: f64, quad: &QuadSpec) -> Result<Self> {
        let k = scn.rician_k;
        let nlos = if k.is_los_only() {
            None
        } else {
            Some(NlosEvaluator::new(scn, t, quad)?)
        };
        let los0 = if k.is_nlos_only() {
            Complex64::new(0.0, 0.0)
        } else {
            los_autocorr(scn, t, 0.0)?
        };
        let nlos0 = nlos
            .as_ref()
            .map_or(Complex64::new(0.0, 0.0), |e| Complex64::new(e.normalizer(), 0.0));
        let at_zero = Autocorr::combine(k, t, 0.0, los0, nlos0);
        Ok(ChannelEvaluator {
            scn,
            t,
            nlos,
            at_zero,
        })
    }

    pub fn scenario(&self) -> &Scenario {
        self.scn
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// A_h(t,0).
    pub fn normalizer(&self) -> f64 {
        self.at_zero.value.re
    }

    pub fn autocorr(&self, tau: f64) -> Result<Autocorr> {
        if tau == 0.0 {
            return Ok(self.at_zero);
        }
        let k = self.scn.rician_k;
        let los = if k.is_nlos_only() {
            Complex64::new(0.0, 0.0)
        } else {
            los_autocorr(self.scn, self.t, tau)?
        };
        let nlos = match &self.nlos {
            Some(e) => e.autocorr(tau)?,
            None => Complex64::new(0.0, 0.0),
        };
        Ok(Autocorr::combine(k, self.t, tau, los, nlos))
    }

    pub fn normalized(&self, tau: f64) -> Result<Complex64> {
        let a0 = self.normalizer();
        if !(a0.abs() >= 1e-30) {
            return Err(Error::DegenerateNormalizer(a0));
        }
        if tau == 0.0 {
            return Ok(Complex64::new(1.0, 0.0));
        }
        Ok(self.autocorr(tau)?.value / a0)
    }

    pub fn stats(&self) -> QuadStats {
        self.nlos.as_ref().map(|e| e.stats()).unwrap_or_default()
    }
}
