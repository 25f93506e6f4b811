//! Process noise covariance of deputy-relative-to-chief states, either
//! linearized about zero separation or assembled from the two absolute
//! covariances.

mod jacobian;

pub use jacobian::{
    j_chief_rel_cartesian, j_chief_rel_equinoctial, j_delta_equinoctial, j_deputy_rel_cartesian,
    j_deputy_rel_equinoctial, rel_cartesian_rtn, rel_cartesian_rtn_with_acceleration, rel_equinoctial,
};

use crate::absolute::{CartesianModel, EquinoctialModel, ProcessNoiseCov, Psd3, Representation};
use crate::orbit::{equinoctial_to_cartesian, propagate_two_body, cartesian_to_equinoctial};
use crate::orbit::{EquinoctialState, GravParam, InertialState};
use crate::stm::j_rtn_from_inertial;
use crate::{Matrix3, Matrix6, Result, SncError, Vector3, Vector6};
use serde::{Deserialize, Serialize};

/// Diagonal cross power spectral density between two spacecraft's RTN
/// accelerations, m²/s³. Entries may be negative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossPsd3 {
    pub q_r: f64,
    pub q_t: f64,
    pub q_n: f64,
}

impl CrossPsd3 {
    pub fn new(q_r: f64, q_t: f64, q_n: f64) -> Result<Self> {
        let c = CrossPsd3 { q_r, q_t, q_n };
        c.check()?;
        Ok(c)
    }

    pub fn zero() -> Self {
        CrossPsd3 { q_r: 0.0, q_t: 0.0, q_n: 0.0 }
    }

    /// `c` times an auto spectral density.
    pub fn scaled_from(psd: &Psd3, c: f64) -> Self {
        CrossPsd3 { q_r: c * psd.q_r, q_t: c * psd.q_t, q_n: c * psd.q_n }
    }

    pub fn check(&self) -> Result<()> {
        if [self.q_r, self.q_t, self.q_n].iter().all(|q| q.is_finite()) {
            Ok(())
        } else {
            Err(SncError::InvalidInput(format!("cross PSD must be finite: {self:?}")))
        }
    }

    pub fn matrix(&self) -> Matrix3 {
        Matrix3::from_diagonal(&Vector3::new(self.q_r, self.q_t, self.q_n))
    }
}

/// Spectral density of the differential acceleration δε = ε_d − ε_c.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RelPsd {
    pub q_delta: Matrix3,
}

impl RelPsd {
    /// The diagonal as a [`Psd3`]; fails if off-diagonal terms are present or
    /// a diagonal entry is negative.
    pub fn as_psd3(&self) -> Result<Psd3> {
        let m = &self.q_delta;
        let off = [m[(0, 1)], m[(0, 2)], m[(1, 0)], m[(1, 2)], m[(2, 0)], m[(2, 1)]];
        if off.iter().any(|&x| x != 0.0) {
            return Err(SncError::InvalidInput("differential PSD must be diagonal for the closed-form models".into()));
        }
        Psd3::new(m[(0, 0)], m[(1, 1)], m[(2, 2)])
    }
}

/// Q̃_δ = Q̃_d + Q̃_c − Q̃_dc − Q̃_cd.
pub fn delta_psd(qd: &Psd3, qc: &Psd3, qdc: &CrossPsd3, qcd: &CrossPsd3) -> RelPsd {
    let q = qd.matrix() + qc.matrix() - qdc.matrix() - qcd.matrix();
    if q.symmetric_eigenvalues().min() < -1e-12 * q.trace().abs() {
        log::warn!("differential PSD is not positive semi-definite: {q:?}");
    }
    RelPsd { q_delta: q }
}

/// Deputy position and velocity relative to the chief in chief RTN axes,
/// velocity differentiated in the rotating frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RelCartesianRtn {
    pub dr: Vector3,
    pub dv: Vector3,
}

impl RelCartesianRtn {
    pub fn to_vector(&self) -> Vector6 {
        Vector6::new(self.dr.x, self.dr.y, self.dr.z, self.dv.x, self.dv.y, self.dv.z)
    }
}

/// Relative equinoctial elements (δa/a_c, δλ, δf, δg, δh, δk).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RelEquinoctial {
    pub da_over_a: f64,
    pub dlambda: f64,
    pub df: f64,
    pub dg: f64,
    pub dh: f64,
    pub dk: f64,
}

impl RelEquinoctial {
    pub fn to_vector(&self) -> Vector6 {
        Vector6::new(self.da_over_a, self.dlambda, self.df, self.dg, self.dh, self.dk)
    }
}

/// Small-separation relative Cartesian model: the absolute model driven by
/// the differential PSD, mapped into chief RTN coordinates at the interval end.
pub fn q_rel_cartesian_small_sep(
    chief: &InertialState,
    rel_psd: &RelPsd,
    dt: f64,
    mu: GravParam,
    model: CartesianModel,
) -> Result<ProcessNoiseCov> {
    let q_di = model.evaluate(chief, &rel_psd.as_psd3()?, dt, mu)?;
    let eq = cartesian_to_equinoctial(chief, mu)?;
    let chief_end = equinoctial_to_cartesian(&propagate_two_body(&eq, dt, mu), mu)?;
    Ok(q_di.transformed(&j_rtn_from_inertial(&chief_end)?, Representation::RelativeRtn))
}

/// Small-separation relative element model: the absolute element model driven
/// by the differential PSD, then δa scaled by 1/a_c and λ moved second.
pub fn q_rel_equinoctial_small_sep(
    chief_eq: &EquinoctialState,
    rel_psd: &RelPsd,
    dt: f64,
    mu: GravParam,
    model: EquinoctialModel,
) -> Result<ProcessNoiseCov> {
    let q = model.evaluate(chief_eq, &rel_psd.as_psd3()?, dt, mu)?;
    Ok(q.transformed(&j_delta_equinoctial(chief_eq.a), Representation::RelativeEquinoctial))
}

fn relative_representation(a: Representation, b: Representation) -> Result<Representation> {
    match (a, b) {
        (Representation::InertialCartesian, Representation::InertialCartesian) => Ok(Representation::RelativeRtn),
        (Representation::Equinoctial, Representation::Equinoctial) => Ok(Representation::RelativeEquinoctial),
        _ => Err(SncError::InvalidInput(format!("no relative state for {a:?} and {b:?} covariances"))),
    }
}

/// Q_δ = J_d Q_d J_dᵀ + J_c Q_c J_cᵀ, which neglects correlation between the
/// two spacecraft's process noise.
pub fn q_rel_large_sep(
    jd: &Matrix6,
    jc: &Matrix6,
    qd: &ProcessNoiseCov,
    qc: &ProcessNoiseCov,
) -> Result<ProcessNoiseCov> {
    q_rel_full(jd, jc, qd, qc, &Matrix6::zeros())
}

/// Q_δ including the cross covariance `cross` = E[w_c w_dᵀ].
pub fn q_rel_full(
    jd: &Matrix6,
    jc: &Matrix6,
    qd: &ProcessNoiseCov,
    qc: &ProcessNoiseCov,
    cross: &Matrix6,
) -> Result<ProcessNoiseCov> {
    let repr = relative_representation(qd.representation, qc.representation)?;
    let c = jc * cross * jd.transpose();
    let m = jd * qd.matrix * jd.transpose() + jc * qc.matrix * jc.transpose() + c + c.transpose();
    Ok(ProcessNoiseCov::new(m, repr))
}
