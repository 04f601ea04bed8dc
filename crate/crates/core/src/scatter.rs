//! Von-Mises–Fisher scatterer field on a sphere around the user.

use std::f64::consts::TAU;

use rand::distr::Distribution;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{one_minus_cos, tangent_basis, Vec3};

/// Scatterers on a sphere of radius `radius_m` centered on the user's
/// initial position, with directions drawn from vMF(`mu`, `rho`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VmfField {
    mu: Vec3,
    rho: f64,
    radius_m: f64,
}

impl VmfField {
    pub fn new(mu: Vec3, rho: f64, radius_m: f64) -> Result<Self> {
        if !(rho > 0.0) || !rho.is_finite() {
            return Err(Error::param("rho", format!("concentration must be > 0, got {rho}")));
        }
        if !(radius_m > 0.0) || !radius_m.is_finite() {
            return Err(Error::param("radius", format!("must be > 0 m, got {radius_m}")));
        }
        if !mu.is_finite() {
            return Err(Error::NonFinite { what: "vMF mean direction" });
        }
        Ok(VmfField {
            mu: mu.normalized()?,
            rho,
            radius_m,
        })
    }

    pub fn mu(&self) -> Vec3 {
        self.mu
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn radius_m(&self) -> f64 {
        self.radius_m
    }

    pub fn with_mu(self, mu: Vec3) -> Result<Self> {
        VmfField::new(mu, self.rho, self.radius_m)
    }

    pub fn pdf(&self, n: Vec3) -> f64 {
        vmf_pdf(self, n)
    }

    /// Expected `mu·n`, i.e. the mean resultant length coth ρ − 1/ρ.
    pub fn mean_resultant_length(&self) -> f64 {
        let r = self.rho;
        if r < 1e-4 {
            r / 3.0
        } else {
            // coth ρ = (1 + e^{-2ρ}) / (1 - e^{-2ρ})
            let e = (-2.0 * r).exp();
            (1.0 + e) / -(-2.0 * r).exp_m1() - 1.0 / r
        }
    }

    /// Draw one unit direction.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec3 {
        vmf_sample(self, rng)
    }
}

impl Distribution<Vec3> for VmfField {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec3 {
        vmf_sample(self, rng)
    }
}

/// Density per steradian, evaluated as ρ·e^{ρ(µ·n − 1)} / (2π(1 − e^{−2ρ})).
#[inline]
pub fn vmf_pdf(field: &VmfField, n: Vec3) -> f64 {
    let rho = field.rho;
    let norm = TAU * -(-2.0 * rho).exp_m1();
    rho * (-rho * one_minus_cos(field.mu, n)).exp() / norm
}

/// Inverse-CDF draw of w = µ·n followed by a uniform azimuth about µ.
pub fn vmf_sample<R: Rng + ?Sized>(field: &VmfField, rng: &mut R) -> Vec3 {
    let rho = field.rho;
    let u: f64 = rng.random();
    let alpha = TAU * rng.random::<f64>();
    // w = 1 + ln(u + (1-u) e^{-2ρ}) / ρ
    let w = (1.0 + (-(1.0 - u) * -(-2.0 * rho).exp_m1()).ln_1p() / rho).clamp(-1.0, 1.0);
    let s = (1.0 - w * w).max(0.0).sqrt();
    let (e1, e2) = tangent_basis(field.mu);
    let (sa, ca) = alpha.sin_cos();
    field.mu * w + (e1 * ca + e2 * sa) * s
}
