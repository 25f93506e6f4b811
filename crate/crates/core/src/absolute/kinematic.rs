use super::{check_dt, ProcessNoiseCov, Representation};
use crate::orbit::{rtn_basis, InertialState};
use crate::stm::block2;
use crate::{Matrix3, Result};

/// Force-free (double integrator) model with an inertial PSD.
pub fn q_kinematic(qtilde_inertial: &Matrix3, dt: f64) -> Result<ProcessNoiseCov> {
    check_dt(dt)?;
    let q = qtilde_inertial;
    let m = block2(
        &(q * (dt * dt * dt / 3.0)),
        &(q * (dt * dt / 2.0)),
        &(q * (dt * dt / 2.0)),
        &(q * dt),
    );
    Ok(ProcessNoiseCov::new(m, Representation::InertialCartesian))
}

/// Kinematic model with an RTN PSD held fixed in the RTN frame of `st`.
pub fn q_kinematic_rtn(st: &InertialState, qtilde_rtn: &Matrix3, dt: f64) -> Result<ProcessNoiseCov> {
    let r = rtn_basis(st)?.rot_r_to_i();
    q_kinematic(&(r * qtilde_rtn * r.transpose()), dt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Matrix6, Vector3};

    #[test]
    fn zero_interval() {
        assert_eq!(q_kinematic(&Matrix3::identity(), 0.0).unwrap().matrix, Matrix6::zeros());
        assert!(q_kinematic(&Matrix3::identity(), -1.0).is_err());
    }

    #[test]
    fn unit_interval_blocks() {
        let q = 2.0;
        let m = q_kinematic(&(Matrix3::identity() * q), 1.0).unwrap().matrix;
        assert_eq!(m[(0, 0)], q / 3.0);
        assert_eq!(m[(0, 3)], q / 2.0);
        assert_eq!(m[(3, 0)], q / 2.0);
        assert_eq!(m[(5, 5)], q);
        assert_eq!(m[(0, 1)], 0.0);
    }

    #[test]
    fn rtn_rotation() {
        let st = InertialState { r: Vector3::new(0.0, 7e6, 0.0), v: Vector3::new(-7.5e3, 0.0, 0.0), epoch: 0.0 };
        let q = Matrix3::from_diagonal(&Vector3::new(1.0, 10.0, 3.0));
        let m = q_kinematic_rtn(&st, &q, 1.0).unwrap().matrix;
        // radial is +y, transverse is −x
        assert!((m[(4, 4)] - 1.0).abs() < 1e-15);
        assert!((m[(3, 3)] - 10.0).abs() < 1e-14);
        assert!((m[(5, 5)] - 3.0).abs() < 1e-15);
    }
}
