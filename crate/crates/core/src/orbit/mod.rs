//! Orbit state types, element conversions, Kepler propagation and the RTN frame.

mod elements;
mod frame;
mod kepler;

pub use elements::{
    cartesian_to_equinoctial, classical_to_equinoctial, equinoctial_to_cartesian,
    equinoctial_to_classical,
};
pub use frame::{rtn_basis, rtn_basis_with_acceleration, skew, RtnBasis};
pub use kepler::{
    average_angular_rate, propagate_two_body, solve_kepler, true_longitude,
    true_longitude_advance, KEPLER_MAX_ITER, KEPLER_TOL,
};

use crate::{Result, SncError, Vector3, Vector6};
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// Earth gravitational parameter, m³/s².
pub const MU_EARTH: f64 = 3.986004418e14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct GravParam(f64);

impl GravParam {
    pub const EARTH: GravParam = GravParam(MU_EARTH);

    pub fn new(mu: f64) -> Result<Self> {
        if mu.is_finite() && mu > 0.0 {
            Ok(GravParam(mu))
        } else {
            Err(SncError::InvalidInput(format!(
                "gravitational parameter must be positive, got {mu}"
            )))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }
}

impl Default for GravParam {
    fn default() -> Self {
        GravParam::EARTH
    }
}

impl TryFrom<f64> for GravParam {
    type Error = SncError;
    fn try_from(mu: f64) -> Result<Self> {
        GravParam::new(mu)
    }
}

impl From<GravParam> for f64 {
    fn from(mu: GravParam) -> f64 {
        mu.0
    }
}

/// Inertial position (m) and velocity (m/s) at an epoch (s).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InertialState {
    pub r: Vector3,
    pub v: Vector3,
    pub epoch: f64,
}

impl InertialState {
    pub fn new(r: Vector3, v: Vector3, epoch: f64) -> Result<Self> {
        let st = InertialState { r, v, epoch };
        st.check()?;
        Ok(st)
    }

    /// Rejects zero radius and rectilinear motion.
    pub fn check(&self) -> Result<()> {
        let rn = self.r.norm();
        if !(rn > 0.0) || !rn.is_finite() || !self.v.iter().all(|x| x.is_finite()) {
            return Err(SncError::Degenerate("position must be finite and non-zero".into()));
        }
        let l = self.r.cross(&self.v).norm();
        if !(l > 1e-12 * rn * self.v.norm()) {
            return Err(SncError::Degenerate("zero angular momentum".into()));
        }
        Ok(())
    }

    pub fn to_vector(&self) -> Vector6 {
        Vector6::new(self.r.x, self.r.y, self.r.z, self.v.x, self.v.y, self.v.z)
    }

    pub fn from_vector(x: &Vector6, epoch: f64) -> Self {
        InertialState {
            r: Vector3::new(x[0], x[1], x[2]),
            v: Vector3::new(x[3], x[4], x[5]),
            epoch,
        }
    }
}

/// Equinoctial elements: a (m), f, g, h, k, mean longitude λ (rad).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquinoctialState {
    pub a: f64,
    pub f: f64,
    pub g: f64,
    pub h: f64,
    pub k: f64,
    pub lambda: f64,
    pub epoch: f64,
}

impl EquinoctialState {
    pub fn new(a: f64, f: f64, g: f64, h: f64, k: f64, lambda: f64, epoch: f64) -> Result<Self> {
        let eq = EquinoctialState { a, f, g, h, k, lambda, epoch };
        eq.check()?;
        Ok(eq)
    }

    pub fn check(&self) -> Result<()> {
        let vals = [self.a, self.f, self.g, self.h, self.k, self.lambda];
        if !vals.iter().all(|x| x.is_finite()) {
            return Err(SncError::InvalidInput("non-finite equinoctial element".into()));
        }
        if !(self.a > 0.0) {
            return Err(SncError::InvalidInput(format!("semi-major axis {} must be positive", self.a)));
        }
        if self.f * self.f + self.g * self.g >= 1.0 {
            return Err(SncError::NotElliptic { energy: f64::NAN });
        }
        Ok(())
    }

    pub fn eccentricity(&self) -> f64 {
        self.f.hypot(self.g)
    }

    pub fn semi_parameter(&self) -> f64 {
        self.a * (1.0 - self.f * self.f - self.g * self.g)
    }

    pub fn mean_motion(&self, mu: GravParam) -> f64 {
        (mu.value() / self.a.powi(3)).sqrt()
    }

    pub fn period(&self, mu: GravParam) -> f64 {
        TAU / self.mean_motion(mu)
    }

    /// Element vector in (a, f, g, h, k, λ) order.
    pub fn to_vector(&self) -> Vector6 {
        Vector6::new(self.a, self.f, self.g, self.h, self.k, self.lambda)
    }

    pub fn from_vector(x: &Vector6, epoch: f64) -> Self {
        EquinoctialState { a: x[0], f: x[1], g: x[2], h: x[3], k: x[4], lambda: x[5], epoch }
    }
}

/// Classical Keplerian elements; angles in rad, M is mean anomaly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassicalElements {
    pub a: f64,
    pub e: f64,
    pub i: f64,
    pub raan: f64,
    pub argp: f64,
    pub mean_anomaly: f64,
}

/// Wraps an angle into [0, 2π).
pub fn wrap_two_pi(x: f64) -> f64 {
    let w = x.rem_euclid(TAU);
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// Wraps an angle into (−π, π].
pub fn wrap_pi(x: f64) -> f64 {
    let w = wrap_two_pi(x);
    if w > std::f64::consts::PI {
        w - TAU
    } else {
        w
    }
}
