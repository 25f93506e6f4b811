//! Closed-form process noise covariance models for absolute states and the
//! subinterval composition that extends them to long intervals.

mod equinoctial;
mod gve;
mod hcw;
mod kinematic;
mod subinterval;
mod zeta;

pub use equinoctial::{q_equinoctial_circular, q_equinoctial_small_dt};
pub use gve::{gve_gamma, gve_gamma_at};
pub use hcw::{q_hcw_cartesian, q_hcw_curvilinear};
pub use kinematic::{q_kinematic, q_kinematic_rtn};
pub use subinterval::{
    q_cartesian_subintervals, q_equinoctial_subintervals, q_subinterval_compose, subinterval_nodes,
    NodeSpacing,
};
pub use zeta::{zeta_bar_integrals, zeta_integrals, ZetaBarSet, ZetaSet};

use crate::orbit::{EquinoctialState, GravParam, InertialState};
use crate::{Matrix3, Matrix6, Result, SncError};
use serde::{Deserialize, Serialize};

/// Diagonal RTN power spectral density of unmodeled acceleration, m²/s³.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Psd3 {
    pub q_r: f64,
    pub q_t: f64,
    pub q_n: f64,
}

impl Psd3 {
    pub fn new(q_r: f64, q_t: f64, q_n: f64) -> Result<Self> {
        let p = Psd3 { q_r, q_t, q_n };
        p.check()?;
        Ok(p)
    }

    pub fn isotropic(q: f64) -> Result<Self> {
        Psd3::new(q, q, q)
    }

    pub fn check(&self) -> Result<()> {
        for (name, v) in [("q_r", self.q_r), ("q_t", self.q_t), ("q_n", self.q_n)] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(SncError::InvalidInput(format!("{name} = {v} must be finite and >= 0")));
            }
        }
        Ok(())
    }

    pub fn matrix(&self) -> Matrix3 {
        Matrix3::from_diagonal(&crate::Vector3::new(self.q_r, self.q_t, self.q_n))
    }

    pub fn scaled(&self, c: f64) -> Psd3 {
        Psd3 { q_r: c * self.q_r, q_t: c * self.q_t, q_n: c * self.q_n }
    }

    /// The three single-axis parts whose sum is `self`.
    pub fn split(&self) -> [Psd3; 3] {
        [
            Psd3 { q_r: self.q_r, q_t: 0.0, q_n: 0.0 },
            Psd3 { q_r: 0.0, q_t: self.q_t, q_n: 0.0 },
            Psd3 { q_r: 0.0, q_t: 0.0, q_n: self.q_n },
        ]
    }
}

/// Which state a covariance or STM refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Representation {
    /// Inertial position and velocity.
    InertialCartesian,
    /// (ρ, r_cθ, r_cφ) and rates about a chief.
    Curvilinear,
    /// (a, f, g, h, k, λ).
    Equinoctial,
    /// Deputy relative to chief in chief RTN axes, rotating-frame rates.
    RelativeRtn,
    /// (δa/a, δλ, δf, δg, δh, δk).
    RelativeEquinoctial,
}

/// Discrete process noise covariance with its state representation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProcessNoiseCov {
    pub matrix: Matrix6,
    pub representation: Representation,
}

impl ProcessNoiseCov {
    pub fn new(matrix: Matrix6, representation: Representation) -> Self {
        ProcessNoiseCov { matrix, representation }
    }

    /// Mirrors the lower triangle into the upper one.
    pub fn from_lower(lower: Matrix6, representation: Representation) -> Self {
        let mut m = lower;
        for i in 0..6 {
            for j in (i + 1)..6 {
                m[(i, j)] = m[(j, i)];
            }
        }
        ProcessNoiseCov { matrix: m, representation }
    }

    pub fn zeros(representation: Representation) -> Self {
        ProcessNoiseCov { matrix: Matrix6::zeros(), representation }
    }

    pub fn std_devs(&self) -> [f64; 6] {
        std::array::from_fn(|i| self.matrix[(i, i)].max(0.0).sqrt())
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let sym = 0.5 * (self.matrix + self.matrix.transpose());
        sym.symmetric_eigenvalues().min()
    }

    /// Max |Q − Qᵀ| relative to max |Q|.
    pub fn asymmetry(&self) -> f64 {
        let scale = self.matrix.abs().max();
        if scale == 0.0 {
            return 0.0;
        }
        (self.matrix - self.matrix.transpose()).abs().max() / scale
    }

    /// PSD within `tol`·trace.
    pub fn is_psd(&self, tol: f64) -> bool {
        self.min_eigenvalue() >= -tol * self.matrix.trace().abs()
    }

    /// Congruence transform J·Q·Jᵀ into another representation.
    pub fn transformed(&self, j: &Matrix6, representation: Representation) -> Self {
        ProcessNoiseCov { matrix: j * self.matrix * j.transpose(), representation }
    }
}

impl std::ops::Add for ProcessNoiseCov {
    type Output = ProcessNoiseCov;
    fn add(self, rhs: ProcessNoiseCov) -> ProcessNoiseCov {
        debug_assert_eq!(self.representation, rhs.representation);
        ProcessNoiseCov { matrix: self.matrix + rhs.matrix, representation: self.representation }
    }
}

/// Closed-form model choice for inertial Cartesian states.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum CartesianModel {
    /// Constant-frame double integrator, RTN frame of the initial state.
    Kinematic,
    /// HCW curvilinear model mapped to inertial axes.
    Hcw,
    /// Kinematic model per subinterval composed with the two-body STM.
    Subintervals {
        count: usize,
        #[serde(default)]
        spacing: NodeSpacing,
    },
}

impl CartesianModel {
    pub fn evaluate(&self, st: &InertialState, psd: &Psd3, dt: f64, mu: GravParam) -> Result<ProcessNoiseCov> {
        match *self {
            CartesianModel::Kinematic => q_kinematic_rtn(st, &psd.matrix(), dt),
            CartesianModel::Hcw => q_hcw_cartesian(st, psd, dt, mu),
            CartesianModel::Subintervals { count, spacing } => {
                if dt == 0.0 {
                    return Ok(ProcessNoiseCov::zeros(Representation::InertialCartesian));
                }
                q_cartesian_subintervals(st, psd, &subinterval_nodes(dt, count, spacing)?, mu)
            }
        }
    }
}

/// Closed-form model choice for equinoctial element states.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum EquinoctialModel {
    Circular,
    SmallDt,
    /// Short-interval model per subinterval composed with the element STM.
    Subintervals {
        count: usize,
        #[serde(default)]
        spacing: NodeSpacing,
    },
}

impl EquinoctialModel {
    pub fn evaluate(&self, eq: &EquinoctialState, psd: &Psd3, dt: f64, mu: GravParam) -> Result<ProcessNoiseCov> {
        match *self {
            EquinoctialModel::Circular => q_equinoctial_circular(eq, psd, dt, mu),
            EquinoctialModel::SmallDt => q_equinoctial_small_dt(eq, psd, dt, mu),
            EquinoctialModel::Subintervals { count, spacing } => {
                if dt == 0.0 {
                    return Ok(ProcessNoiseCov::zeros(Representation::Equinoctial));
                }
                q_equinoctial_subintervals(eq, psd, &subinterval_nodes(dt, count, spacing)?, mu)
            }
        }
    }
}

pub(crate) fn check_dt(dt: f64) -> Result<()> {
    if dt >= 0.0 && dt.is_finite() {
        Ok(())
    } else {
        Err(SncError::InvalidInput(format!("interval must be finite and >= 0, got {dt}")))
    }
}

/// Logs at warn level the first time `flag` is seen unset, at debug level after;
/// sweeps evaluate the models thousands of times.
pub(crate) fn warn_once(flag: &std::sync::atomic::AtomicBool, msg: impl FnOnce() -> String) {
    if flag.swap(true, std::sync::atomic::Ordering::Relaxed) {
        log::debug!("{}", msg());
    } else {
        log::warn!("{} (further occurrences logged at debug level)", msg());
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn psd_rejects_negative() {
        assert!(Psd3::new(-1.0, 0.0, 0.0).is_err());
        assert!(Psd3::new(f64::NAN, 0.0, 0.0).is_err());
        let p = Psd3::new(1.0, 2.0, 3.0).unwrap();
        let [a, b, c] = p.split();
        assert_eq!(a.matrix() + b.matrix() + c.matrix(), p.matrix());
    }

    #[test]
    fn from_lower_mirrors() {
        let mut l = Matrix6::zeros();
        l[(3, 1)] = 2.5;
        l[(0, 0)] = 1.0;
        let q = ProcessNoiseCov::from_lower(l, Representation::Curvilinear);
        assert_eq!(q.matrix[(1, 3)], 2.5);
        assert_eq!(q.asymmetry(), 0.0);
        assert!(!q.is_psd(1e-10));
    }
}
