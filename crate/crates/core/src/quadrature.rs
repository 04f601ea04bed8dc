//! Adaptive product quadrature on the unit sphere.
//!
//! Nodes are Gauss–Legendre in the cosine of the polar angle times a uniform
//! (periodic trapezoid) rule in azimuth. Integration may be restricted to a
//! spherical cap about an arbitrary pole, which is how concentrated
//! integrands are handled: the cap is laid out in a rotated frame centered on
//! the mass of the integrand, so nodes are not spent where it vanishes.
//!
//! Resolution is doubled in both directions until two successive estimates
//! agree to `rel_tol` (relative to the larger of the current estimate and an
//! optional reference scale).

use std::collections::HashMap;
use std::f64::consts::{PI, TAU};
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{tangent_basis, SolidAngle, Vec3};

/// Upper bound on nodes along either axis of a single grid.
pub const MAX_AXIS_NODES: usize = 1 << 14;

/// Minimum nodes per phase cycle used when sizing the starting grid.
pub const NODES_PER_CYCLE: f64 = 6.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadSpec {
    pub base_el_nodes: usize,
    pub base_az_nodes: usize,
    pub max_refinements: usize,
    pub rel_tol: f64,
}

impl Default for QuadSpec {
    fn default() -> Self {
        QuadSpec {
            base_el_nodes: 32,
            base_az_nodes: 64,
            max_refinements: 6,
            rel_tol: 1e-3,
        }
    }
}

impl QuadSpec {
    pub fn validate(&self) -> Result<()> {
        if self.base_el_nodes < 8 {
            return Err(Error::param("quad.base_el_nodes", "must be >= 8"));
        }
        if self.base_az_nodes < 16 {
            return Err(Error::param("quad.base_az_nodes", "must be >= 16"));
        }
        if !(self.rel_tol > 0.0) || !self.rel_tol.is_finite() {
            return Err(Error::param("quad.rel_tol", "must be > 0"));
        }
        Ok(())
    }

    pub fn with_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }
}

/// Spherical cap `{n : pole·n >= cos_min}` with a tangent frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cap {
    pole: Vec3,
    e1: Vec3,
    e2: Vec3,
    cos_min: f64,
}

impl Cap {
    /// The whole sphere in the standard frame, so that grid angles are
    /// exactly (az, el) of [`crate::geometry::direction_vector`].
    pub fn full_sphere() -> Self {
        Cap {
            pole: Vec3::Z,
            e1: Vec3::X,
            e2: Vec3::Y,
            cos_min: -1.0,
        }
    }

    /// Cap about a unit `pole` with half-angle `acos(cos_min)`.
    pub fn around(pole: Vec3, cos_min: f64) -> Self {
        let (e1, e2) = tangent_basis(pole);
        Cap {
            pole,
            e1,
            e2,
            cos_min: cos_min.clamp(-1.0, 1.0 - 1e-15),
        }
    }

    pub fn pole(&self) -> Vec3 {
        self.pole
    }

    pub fn cos_min(&self) -> f64 {
        self.cos_min
    }

    pub fn half_angle(&self) -> f64 {
        self.cos_min.acos()
    }

    /// Smallest grid that puts [`NODES_PER_CYCLE`] nodes on every cycle of a
    /// phase varying at `cycles_per_rad` across the cap.
    pub fn resolution_for_phase(&self, cycles_per_rad: f64) -> (usize, usize) {
        if !(cycles_per_rad > 0.0) || !cycles_per_rad.is_finite() {
            return (0, 0);
        }
        let theta = self.half_angle();
        let rim = if theta > PI / 2.0 { 1.0 } else { theta.sin() };
        let el = (NODES_PER_CYCLE * cycles_per_rad * theta).ceil();
        let az = (NODES_PER_CYCLE * cycles_per_rad * TAU * rim).ceil();
        (
            el.min(MAX_AXIS_NODES as f64) as usize,
            az.min(MAX_AXIS_NODES as f64) as usize,
        )
    }
}

struct GlRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

fn gauss_legendre(n: usize) -> Arc<GlRule> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GlRule>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(rule) = cache.lock().expect("GL cache poisoned").get(&n) {
        return rule.clone();
    }
    let rule = Arc::new(compute_gauss_legendre(n));
    cache
        .lock()
        .expect("GL cache poisoned")
        .entry(n)
        .or_insert(rule)
        .clone()
}

/// Newton iteration on P_n from the Tricomi initial guesses.
fn compute_gauss_legendre(n: usize) -> GlRule {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p0 = 1.0;
            }
            dp = nf * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    GlRule { nodes, weights }
}

/// Product grid on a cap: `n_el` Gauss–Legendre rows in cos θ, `n_az`
/// equally spaced azimuths.
pub struct SphereGrid {
    cap: Cap,
    n_el: usize,
    n_az: usize,
    rows: Vec<(f64, f64, f64)>,
    az: Vec<(f64, f64)>,
}

impl SphereGrid {
    pub fn new(cap: Cap, n_el: usize, n_az: usize) -> Self {
        let rule = gauss_legendre(n_el);
        let half = 0.5 * (1.0 - cap.cos_min);
        let az_w = TAU / n_az as f64;
        let rows = rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .map(|(&x, &w)| {
                let c = cap.cos_min + half * (x + 1.0);
                let s = (1.0 - c * c).max(0.0).sqrt();
                (c, s, w * half * az_w)
            })
            .collect();
        let az = (0..n_az)
            .map(|j| {
                let (s, c) = (TAU * j as f64 / n_az as f64).sin_cos();
                (c, s)
            })
            .collect();
        SphereGrid {
            cap,
            n_el,
            n_az,
            rows,
            az,
        }
    }

    pub fn n_el(&self) -> usize {
        self.n_el
    }

    pub fn n_az(&self) -> usize {
        self.n_az
    }

    pub fn len(&self) -> usize {
        self.n_el * self.n_az
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn cap(&self) -> &Cap {
        &self.cap
    }

    /// Direction of node `(row, col)`.
    #[inline]
    pub fn node(&self, row: usize, col: usize) -> Vec3 {
        let (c, s, _) = self.rows[row];
        let (ca, sa) = self.az[col];
        self.cap.pole * c + (self.cap.e1 * ca + self.cap.e2 * sa) * s
    }

    /// Weight shared by every node of `row` (includes the azimuth step).
    #[inline]
    pub fn row_weight(&self, row: usize) -> f64 {
        self.rows[row].2
    }

    /// Weighted sum of `f(flat_index, direction)` over all nodes.
    ///
    /// Rows are evaluated in parallel; the reduction runs in row order so the
    /// result does not depend on the thread count.
    pub fn weighted_sum<F>(&self, f: F) -> Complex64
    where
        F: Fn(usize, Vec3) -> Complex64 + Sync,
    {
        let row_sums: Vec<Complex64> = (0..self.n_el)
            .into_par_iter()
            .map(|i| {
                let mut acc = Complex64::new(0.0, 0.0);
                for j in 0..self.n_az {
                    acc += f(i * self.n_az + j, self.node(i, j));
                }
                acc * self.row_weight(i)
            })
            .collect();
        row_sums.into_iter().fold(Complex64::new(0.0, 0.0), |a, b| a + b)
    }

    /// Evaluate `f` at every node (flat index order), in parallel by row.
    pub fn map_nodes<T, F>(&self, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(Vec3) -> T + Sync,
    {
        (0..self.n_el)
            .into_par_iter()
            .flat_map_iter(|i| (0..self.n_az).map(move |j| (i, j)))
            .map(|(i, j)| f(self.node(i, j)))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadResult {
    pub value: Complex64,
    pub nodes_used: usize,
    /// |difference| between the last two levels.
    pub est_error: f64,
    pub converged: bool,
    /// Estimated error after each refinement, first entry compares the
    /// starting grid with its half-resolution companion.
    pub error_history: Vec<f64>,
    pub final_grid: (usize, usize),
}

impl QuadResult {
    pub fn into_result(self) -> Result<QuadResult> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::QuadratureNotConverged {
                best_re: self.value.re,
                best_im: self.value.im,
                est_error: self.est_error,
                nodes_used: self.nodes_used,
            })
        }
    }
}

/// Adaptive driver. `eval` returns the quadrature sum on a given grid;
/// `start` is a lower bound on the starting grid (e.g. from
/// [`Cap::resolution_for_phase`]); `ref_scale` sets the magnitude relative to
/// which `spec.rel_tol` is measured when the integral itself is small.
pub fn integrate_adaptive<E>(
    cap: Cap,
    start: (usize, usize),
    spec: &QuadSpec,
    ref_scale: f64,
    eval: E,
) -> QuadResult
where
    E: Fn(&SphereGrid) -> Complex64,
{
    let mut n_el = spec.base_el_nodes.max(start.0).min(MAX_AXIS_NODES);
    let mut n_az = spec.base_az_nodes.max(start.1).min(MAX_AXIS_NODES);
    let coarse = SphereGrid::new(cap, (n_el / 2).max(4), (n_az / 2).max(8));
    let mut prev = eval(&coarse);
    let mut nodes_used = coarse.len();
    let mut history = Vec::new();
    let scale_floor = ref_scale.abs().max(1e-30);
    let mut level = 0;
    loop {
        let grid = SphereGrid::new(cap, n_el, n_az);
        let value = eval(&grid);
        nodes_used += grid.len();
        let err = (value - prev).norm();
        history.push(err);
        let converged = err < spec.rel_tol * value.norm().max(scale_floor);
        let at_limit = level >= spec.max_refinements || (n_el >= MAX_AXIS_NODES && n_az >= MAX_AXIS_NODES);
        if converged || at_limit || !value.is_finite() {
            return QuadResult {
                value,
                nodes_used,
                est_error: err,
                converged: converged && value.is_finite(),
                error_history: history,
                final_grid: (n_el, n_az),
            };
        }
        prev = value;
        n_el = (2 * n_el).min(MAX_AXIS_NODES);
        n_az = (2 * n_az).min(MAX_AXIS_NODES);
        level += 1;
    }
}

/// ∫_{S²} f dΩ over the whole sphere (sin(el) Jacobian included).
pub fn sphere_integrate<F>(f: F, spec: &QuadSpec) -> Result<QuadResult>
where
    F: Fn(SolidAngle) -> Complex64 + Sync,
{
    spec.validate()?;
    let cap = Cap::full_sphere();
    integrate_adaptive(cap, (0, 0), spec, 0.0, |grid| {
        grid.weighted_sum(|_, n| f(SolidAngle::from_direction(n)))
    })
    .into_result()
}

/// ∫ f over a cap, with `f` taking the unit direction directly.
pub fn cap_integrate<F>(f: F, cap: Cap, spec: &QuadSpec) -> Result<QuadResult>
where
    F: Fn(Vec3) -> Complex64 + Sync,
{
    spec.validate()?;
    integrate_adaptive(cap, (0, 0), spec, 0.0, |grid| grid.weighted_sum(|_, n| f(n))).into_result()
}
