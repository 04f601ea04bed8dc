//! 3D vectors, sphere directions and constant-velocity kinematics.

use std::f64::consts::{PI, TAU};
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Distances below this are treated as coincident points.
pub const MIN_DISTANCE_M: f64 = 1e-9;

/// Tolerance on `| |v| - 1 |` for values labeled as unit directions.
pub const UNIT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3::new(0.0, 0.0, 0.0);
    pub const X: Vec3 = Vec3::new(1.0, 0.0, 0.0);
    pub const Y: Vec3 = Vec3::new(0.0, 1.0, 0.0);
    pub const Z: Vec3 = Vec3::new(0.0, 0.0, 1.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    /// Checked constructor for external input; rejects NaN and infinities.
    pub fn try_new(x: f64, y: f64, z: f64) -> Result<Self> {
        let v = Vec3::new(x, y, z);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite { what: "vector" })
        }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    #[inline]
    pub fn dot(&self, other: Vec3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    #[inline]
    pub fn cross(&self, other: Vec3) -> Vec3 {
        Vec3::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }

    #[inline]
    pub fn norm_sq(&self) -> f64 {
        self.dot(*self)
    }

    #[inline]
    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y).hypot(self.z)
    }

    /// Unit vector along `self`; `ZeroDistance` for (near-)zero vectors.
    pub fn normalized(&self) -> Result<Vec3> {
        let n = self.norm();
        if n < MIN_DISTANCE_M || !n.is_finite() {
            return Err(Error::ZeroDistance { distance: n });
        }
        // leave vectors that are already unit to rounding untouched, so that
        // normalizing is idempotent
        if (n - 1.0).abs() <= 2.0 * f64::EPSILON {
            return Ok(*self);
        }
        Ok(*self / n)
    }

    pub fn is_unit(&self) -> bool {
        (self.norm() - 1.0).abs() < UNIT_TOL
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

impl From<[f64; 3]> for Vec3 {
    fn from(a: [f64; 3]) -> Self {
        Vec3::new(a[0], a[1], a[2])
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    #[inline]
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Vec3 {
    fn add_assign(&mut self, o: Vec3) {
        *self = *self + o;
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    #[inline]
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    #[inline]
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<Vec3> for f64 {
    type Output = Vec3;
    #[inline]
    fn mul(self, v: Vec3) -> Vec3 {
        v * self
    }
}

impl Div<f64> for Vec3 {
    type Output = Vec3;
    #[inline]
    fn div(self, s: f64) -> Vec3 {
        Vec3::new(self.x / s, self.y / s, self.z / s)
    }
}

/// Direction on the unit sphere. `el` is the polar angle from +z.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolidAngle {
    az: f64,
    el: f64,
}

impl SolidAngle {
    /// `az` in [0, 2π), `el` in [0, π].
    pub fn new(az: f64, el: f64) -> Result<Self> {
        if !(az.is_finite() && el.is_finite()) {
            return Err(Error::NonFinite { what: "solid angle" });
        }
        if !(0.0..TAU).contains(&az) {
            return Err(Error::param("az", format!("{az} outside [0, 2pi)")));
        }
        if !(0.0..=PI).contains(&el) {
            return Err(Error::param("el", format!("{el} outside [0, pi]")));
        }
        Ok(SolidAngle { az, el })
    }

    /// Wraps `az` into [0, 2π) and clamps `el` into [0, π].
    pub fn wrapped(az: f64, el: f64) -> Self {
        let mut az = az.rem_euclid(TAU);
        if az >= TAU {
            az = 0.0;
        }
        SolidAngle {
            az,
            el: el.clamp(0.0, PI),
        }
    }

    /// Inverse of [`direction_vector`] for a unit vector.
    pub fn from_direction(n: Vec3) -> Self {
        let el = n.z.clamp(-1.0, 1.0).acos();
        let az = n.y.atan2(n.x);
        SolidAngle::wrapped(az, el)
    }

    pub fn az(&self) -> f64 {
        self.az
    }

    pub fn el(&self) -> f64 {
        self.el
    }
}

/// n(Ω) = [cos az · sin el, sin az · sin el, cos el].
pub fn direction_vector(omega: SolidAngle) -> Vec3 {
    let (sa, ca) = omega.az.sin_cos();
    let (se, ce) = omega.el.sin_cos();
    Vec3::new(ca * se, sa * se, ce)
}

/// Position and constant velocity of a moving body.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BodyState {
    /// Position at t = 0, m.
    pub p0: Vec3,
    /// Velocity, m/s.
    pub v: Vec3,
}

impl BodyState {
    pub fn new(p0: Vec3, v: Vec3) -> Result<Self> {
        if !(p0.is_finite() && v.is_finite()) {
            return Err(Error::NonFinite { what: "body state" });
        }
        Ok(BodyState { p0, v })
    }

    pub fn stationary(p0: Vec3) -> Self {
        BodyState { p0, v: Vec3::ZERO }
    }

    pub fn position_at(&self, t: f64) -> Vec3 {
        position_at(self, t)
    }
}

pub fn position_at(body: &BodyState, t: f64) -> Vec3 {
    body.p0 + body.v * t
}

/// (to − from)/‖to − from‖.
pub fn unit_between(from: Vec3, to: Vec3) -> Result<Vec3> {
    (to - from).normalized()
}

/// ‖a + d‖ − ‖a‖ without cancellation when ‖d‖ ≪ ‖a‖.
#[inline]
pub fn norm_increment(a: Vec3, d: Vec3) -> f64 {
    let num = 2.0 * a.dot(d) + d.norm_sq();
    let den = (a + d).norm() + a.norm();
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

/// 1 − a·b for unit vectors, accurate for nearly parallel inputs.
#[inline]
pub fn one_minus_cos(a: Vec3, b: Vec3) -> f64 {
    0.5 * (a - b).norm_sq()
}

/// Orthonormal pair completing `pole` to a right-handed frame.
///
/// The helper axis is the coordinate axis least aligned with `pole`.
pub fn tangent_basis(pole: Vec3) -> (Vec3, Vec3) {
    let (ax, ay, az) = (pole.x.abs(), pole.y.abs(), pole.z.abs());
    let helper = if ax <= ay && ax <= az {
        Vec3::X
    } else if ay <= az {
        Vec3::Y
    } else {
        Vec3::Z
    };
    let e1 = (helper - pole * pole.dot(helper)) / (helper - pole * pole.dot(helper)).norm();
    let e2 = pole.cross(e1);
    (e1, e2)
}
