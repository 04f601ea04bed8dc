//! `cos^q` beam patterns.
//!
//! A beam is a pointing direction plus a directivity exponent `q`. The gain
//! toward a unit direction at angle θ off boresight is `max(0, cos θ)^q`; the
//! clamp removes the back lobe, which the plain power law leaves undefined
//! for non-integer `q`. The exponent and the half-power beamwidth ψ are tied
//! by ψ = 2·arccos(2^(−1/q)).

use serde::{Deserialize, Serialize};

use crate::channel::Scenario;
use crate::error::{Error, Result};
use crate::geometry::{direction_vector, one_minus_cos, unit_between, SolidAngle, Vec3};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeamConfig {
    pointing: Vec3,
    q: f64,
}

impl BeamConfig {
    /// `pointing` is normalized here; it only has to be non-zero and finite.
    pub fn new(pointing: Vec3, q: f64) -> Result<Self> {
        if !(q > 0.0) || !q.is_finite() {
            return Err(Error::InvalidDirectivity(q));
        }
        if !pointing.is_finite() {
            return Err(Error::NonFinite { what: "beam pointing" });
        }
        Ok(BeamConfig {
            pointing: pointing.normalized()?,
            q,
        })
    }

    pub fn from_hpbw(pointing: Vec3, hpbw_rad: f64) -> Result<Self> {
        BeamConfig::new(pointing, hpbw_to_q(hpbw_rad)?)
    }

    pub fn pointing(&self) -> Vec3 {
        self.pointing
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn hpbw(&self) -> f64 {
        // q > 0 is a constructor invariant
        q_to_hpbw(self.q).expect("q validated at construction")
    }

    pub fn with_pointing(self, pointing: Vec3) -> Result<Self> {
        BeamConfig::new(pointing, self.q)
    }

    pub fn gain(&self, dir: Vec3) -> f64 {
        beam_gain(self, dir)
    }
}

/// Half-power beamwidth (full width, radians) of a `cos^q` lobe.
pub fn q_to_hpbw(q: f64) -> Result<f64> {
    if !(q > 0.0) || q.is_nan() {
        return Err(Error::InvalidDirectivity(q));
    }
    // ψ/2 = arccos(c) with c = 2^(-1/q); arccos(c) = 2·asin(sqrt((1-c)/2)) keeps
    // precision when c is close to 1.
    let one_minus_c = -(-std::f64::consts::LN_2 / q).exp_m1();
    Ok(4.0 * (0.5 * one_minus_c).sqrt().asin())
}

/// Directivity exponent `q = ln 2 / (−ln cos(ψ/2))`.
pub fn hpbw_to_q(psi: f64) -> Result<f64> {
    if !(psi > 0.0 && psi < std::f64::consts::PI) {
        return Err(Error::InvalidHpbw(psi));
    }
    let s = (0.25 * psi).sin();
    // -ln cos(ψ/2) = -ln(1 - 2 sin²(ψ/4))
    let neg_ln_cos = -(-2.0 * s * s).ln_1p();
    Ok(std::f64::consts::LN_2 / neg_ln_cos)
}

/// `max(0, pointing·dir)^q` for a unit `dir`.
#[inline]
pub fn beam_gain(beam: &BeamConfig, dir: Vec3) -> f64 {
    let cos = beam.pointing.dot(dir);
    if cos <= 0.0 {
        return 0.0;
    }
    let omc = one_minus_cos(beam.pointing, dir);
    if omc >= 1.0 {
        return 0.0;
    }
    (beam.q * (-omc).ln_1p()).exp()
}

/// LoS gains `(G_b(t), G_u(t))`: BS toward the UE and UE toward the BS.
pub fn los_gains(scn: &Scenario, t: f64) -> Result<(f64, f64)> {
    let pb = scn.bs.position_at(t);
    let pu = scn.ue.position_at(t);
    let b_to_u = unit_between(pb, pu)?;
    Ok((beam_gain(&scn.beam_bs, b_to_u), beam_gain(&scn.beam_ue, -b_to_u)))
}

/// NLoS gains toward the scatterer at solid angle `omega`.
pub fn nlos_gains(scn: &Scenario, t: f64, omega: SolidAngle) -> Result<(f64, f64)> {
    nlos_gains_dir(scn, t, direction_vector(omega))
}

/// NLoS gains toward the scatterer in unit direction `n` from the sphere center.
pub fn nlos_gains_dir(scn: &Scenario, t: f64, n: Vec3) -> Result<(f64, f64)> {
    let p = scn.scatterer_point(n);
    let gb = beam_gain(&scn.beam_bs, unit_between(scn.bs.position_at(t), p)?);
    let gu = beam_gain(&scn.beam_ue, unit_between(scn.ue.position_at(t), p)?);
    Ok((gb, gu))
}
