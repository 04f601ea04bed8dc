//! Discrete-scatterer channel realizations.
//!
//! A realization draws N scatterer directions from the vMF field and N
//! uniform phases. The scattered channel is then
//!
//! ```text
//! h(t) = N^{-1/2} Σ_i √(G_b(t,Ω_i) G_u(t,Ω_i)) · e^{j2π(φ(t,Ω_i) + γ_i − f_c ζ_i)}
//! ```
//!
//! and the ensemble mean of h(t)·h*(t+τ) over realizations (directions and
//! phases both redrawn) converges to the NLoS autocorrelation integral. This
//! is an estimator completely separate from the quadrature path.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::antenna::nlos_gains_dir;
use crate::channel::{nlos_phase_dir, NlosEvaluator, Scenario};
use crate::error::{Error, Result};
use crate::geometry::Vec3;
use crate::quadrature::QuadSpec;
use crate::scatter::VmfField;

#[derive(Debug, Clone, PartialEq)]
pub struct Realization {
    pub dirs: Vec<Vec3>,
    /// Phases in cycles, uniform on [0, 1).
    pub gammas: Vec<f64>,
    /// Path delays in seconds.
    pub zetas: Vec<f64>,
    pub seed: u64,
}

impl Realization {
    pub fn len(&self) -> usize {
        self.dirs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dirs.is_empty()
    }
}

fn draw<R: Rng>(field: &VmfField, n: usize, rng: &mut R) -> (Vec<Vec3>, Vec<f64>) {
    let mut dirs = Vec::with_capacity(n);
    let mut gammas = Vec::with_capacity(n);
    for _ in 0..n {
        dirs.push(field.sample(rng));
        gammas.push(rng.random::<f64>());
    }
    (dirs, gammas)
}

/// Draw `n` scatterers; zero delays.
pub fn realize(field: &VmfField, n: usize, seed: u64) -> Result<Realization> {
    if n == 0 {
        return Err(Error::param("mc.n", "need at least one scatterer"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (dirs, gammas) = draw(field, n, &mut rng);
    Ok(Realization {
        dirs,
        gammas,
        zetas: vec![0.0; n],
        seed,
    })
}

/// Realization `k` of a seeded ensemble: its own ChaCha stream, so the draw
/// does not depend on how realizations are scheduled across threads.
pub fn realize_stream(field: &VmfField, n: usize, seed: u64, k: u64) -> Result<Realization> {
    if n == 0 {
        return Err(Error::param("mc.n", "need at least one scatterer"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(k);
    let (dirs, gammas) = draw(field, n, &mut rng);
    Ok(Realization {
        dirs,
        gammas,
        zetas: vec![0.0; n],
        seed,
    })
}

/// Scattered channel h(t) of one realization.
pub fn mc_channel(real: &Realization, scn: &Scenario, t: f64) -> Result<Complex64> {
    if real.is_empty() || real.gammas.len() != real.len() || real.zetas.len() != real.len() {
        return Err(Error::param("realization", "dirs, gammas and zetas must have equal non-zero length"));
    }
    let fc = scn.fc_hz();
    let mut h = Complex64::new(0.0, 0.0);
    for ((&n, &gamma), &zeta) in real.dirs.iter().zip(&real.gammas).zip(&real.zetas) {
        let (gb, gu) = nlos_gains_dir(scn, t, n)?;
        let amp = (gb * gu).sqrt();
        if amp == 0.0 {
            continue;
        }
        let phase = nlos_phase_dir(scn, t, n) + gamma - fc * zeta;
        h += Complex64::from_polar(amp, TAU * phase);
    }
    Ok(h / (real.len() as f64).sqrt())
}

/// Ensemble mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub tau: f64,
    pub re: f64,
    pub im: f64,
    pub se_re: f64,
    pub se_im: f64,
    /// Covariance of the (re, im) sample means.
    pub cov_re_im: f64,
}

impl McEstimate {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    /// Combined standard error √(se_re² + se_im²).
    pub fn se(&self) -> f64 {
        self.se_re.hypot(self.se_im)
    }

    /// Standardized distance of `reference` from the estimate: the
    /// Mahalanobis distance under the sample covariance of (re, im), which is
    /// χ²₂-distributed when squared. Falls back to a one-dimensional score
    /// when the covariance is singular (e.g. τ = 0, where every sample is real).
    pub fn z_score(&self, reference: Complex64) -> f64 {
        let dr = self.re - reference.re;
        let di = self.im - reference.im;
        let (a, b, c) = (self.se_re * self.se_re, self.cov_re_im, self.se_im * self.se_im);
        let det = a * c - b * b;
        if det > 1e-12 * a.max(c).powi(2) && det > 0.0 {
            ((c * dr * dr - 2.0 * b * dr * di + a * di * di) / det).sqrt()
        } else if a >= c && a > 0.0 {
            (dr / self.se_re).abs()
        } else if c > 0.0 {
            (di / self.se_im).abs()
        } else if dr == 0.0 && di == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    }
}

fn summarize(tau: f64, samples: &[Complex64]) -> McEstimate {
    let m = samples.len() as f64;
    let mean = samples.iter().fold(Complex64::new(0.0, 0.0), |a, &b| a + b) / m;
    let (mut vr, mut vi, mut cri) = (0.0, 0.0, 0.0);
    for s in samples {
        let d = s - mean;
        vr += d.re * d.re;
        vi += d.im * d.im;
        cri += d.re * d.im;
    }
    let denom = if samples.len() > 1 { m * (m - 1.0) } else { f64::INFINITY };
    McEstimate {
        tau,
        re: mean.re,
        im: mean.im,
        se_re: (vr / denom).sqrt(),
        se_im: (vi / denom).sqrt(),
        cov_re_im: cri / denom,
    }
}

/// Estimate A_N(t,τ) from `m` realizations of `n` scatterers.
pub fn mc_autocorr(scn: &Scenario, t: f64, tau: f64, n: usize, m: usize, seed: u64) -> Result<McEstimate> {
    Ok(mc_autocorr_multi(scn, t, &[tau], n, m, seed)?.remove(0))
}

/// Estimate A_N(t,τ) at several lags; every lag uses the same realizations.
pub fn mc_autocorr_multi(
    scn: &Scenario,
    t: f64,
    taus: &[f64],
    n: usize,
    m: usize,
    seed: u64,
) -> Result<Vec<McEstimate>> {
    if m == 0 {
        return Err(Error::param("mc.m", "need at least one realization"));
    }
    let per_real: Vec<Vec<Complex64>> = (0..m as u64)
        .into_par_iter()
        .map(|k| {
            let real = realize_stream(&scn.field, n, seed, k)?;
            let h0 = mc_channel(&real, scn, t)?;
            taus.iter()
                .map(|&tau| Ok(h0 * mc_channel(&real, scn, t + tau)?.conj()))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    Ok(taus
        .iter()
        .enumerate()
        .map(|(j, &tau)| {
            let samples: Vec<Complex64> = per_real.iter().map(|r| r[j]).collect();
            summarize(tau, &samples)
        })
        .collect())
}

/// Quadrature value and Monte-Carlo estimate of A_N(t,τ) side by side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McCheckRow {
    pub tau: f64,
    pub quad_re: f64,
    pub quad_im: f64,
    pub mc: McEstimate,
    pub z: f64,
}

/// Compare the NLoS autocorrelation integral against the discrete ensemble.
pub fn mc_check(
    scn: &Scenario,
    t: f64,
    taus: &[f64],
    n: usize,
    m: usize,
    seed: u64,
    quad: &QuadSpec,
) -> Result<Vec<McCheckRow>> {
    let eval = NlosEvaluator::new(scn, t, quad)?;
    let quad_vals: Vec<Complex64> = taus.iter().map(|&tau| eval.autocorr(tau)).collect::<Result<_>>()?;
    let mc = mc_autocorr_multi(scn, t, taus, n, m, seed)?;
    Ok(taus
        .iter()
        .zip(quad_vals)
        .zip(mc)
        .map(|((&tau, q), e)| McCheckRow {
            tau,
            quad_re: q.re,
            quad_im: q.im,
            mc: e,
            z: e.z_score(q),
        })
        .collect())
}
