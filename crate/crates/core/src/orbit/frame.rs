use super::InertialState;
use crate::{Matrix3, Result, SncError, Vector3};

/// RTN frame of a spacecraft: rows of `rot_i_to_r` are r̂, t̂ = n̂ × r̂, n̂.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RtnBasis {
    pub rot_i_to_r: Matrix3,
    /// Angular velocity of RTN relative to inertial, in RTN components.
    pub omega_rtn: Vector3,
}

impl RtnBasis {
    pub fn rot_r_to_i(&self) -> Matrix3 {
        self.rot_i_to_r.transpose()
    }

    pub fn omega_cross(&self) -> Matrix3 {
        skew(&self.omega_rtn)
    }

    pub fn radial(&self) -> Vector3 {
        self.rot_i_to_r.row(0).transpose()
    }

    pub fn transverse(&self) -> Vector3 {
        self.rot_i_to_r.row(1).transpose()
    }

    pub fn normal(&self) -> Vector3 {
        self.rot_i_to_r.row(2).transpose()
    }
}

/// Cross-product matrix: skew(w)·x = w × x.
pub fn skew(w: &Vector3) -> Matrix3 {
    Matrix3::new(0.0, -w.z, w.y, w.z, 0.0, -w.x, -w.y, w.x, 0.0)
}

/// RTN basis with the out-of-plane rotation rate neglected, ω = [0, 0, L/r²].
pub fn rtn_basis(st: &InertialState) -> Result<RtnBasis> {
    rtn_basis_with_acceleration(st, None)
}

/// RTN basis; with an acceleration supplied, ω_r = r·(a·n̂)/L is included.
pub fn rtn_basis_with_acceleration(st: &InertialState, accel: Option<Vector3>) -> Result<RtnBasis> {
    let r = st.r.norm();
    let lvec = st.r.cross(&st.v);
    let l = lvec.norm();
    if !(r > 0.0) || !(l > 0.0) {
        return Err(SncError::Degenerate("RTN frame needs non-zero r and r × v".into()));
    }
    let rhat = st.r / r;
    let nhat = lvec / l;
    let that = nhat.cross(&rhat);
    let rot = Matrix3::from_rows(&[rhat.transpose(), that.transpose(), nhat.transpose()]);
    let wr = accel.map_or(0.0, |a| r * a.dot(&nhat) / l);
    Ok(RtnBasis { rot_i_to_r: rot, omega_rtn: Vector3::new(wr, 0.0, l / (r * r)) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_aligned_state() {
        let st = InertialState { r: Vector3::new(7e6, 0.0, 0.0), v: Vector3::new(0.0, 7.5e3, 0.0), epoch: 0.0 };
        let b = rtn_basis(&st).unwrap();
        assert_eq!(b.rot_i_to_r, Matrix3::identity());
        assert!((b.omega_rtn.z - 7e6 * 7.5e3 / 49e12).abs() < 1e-18);
    }

    #[test]
    fn orthonormal_and_oriented() {
        let st = InertialState {
            r: Vector3::new(3e6, -5e6, 2.5e6),
            v: Vector3::new(4e3, 3e3, -5e3),
            epoch: 0.0,
        };
        let b = rtn_basis(&st).unwrap();
        let rot = b.rot_i_to_r;
        assert!((rot * rot.transpose() - Matrix3::identity()).abs().max() < 1e-14);
        assert!((rot.determinant() - 1.0).abs() < 1e-14);
        let t = b.transverse();
        assert!(t.dot(&st.r).abs() < 1e-6 && t.dot(&b.normal()).abs() < 1e-14);
        assert!(t.dot(&st.v) > 0.0);
    }

    #[test]
    fn skew_matches_cross_product() {
        let w = Vector3::new(0.3, -1.2, 2.0);
        let x = Vector3::new(-0.7, 0.1, 0.4);
        assert!((skew(&w) * x - w.cross(&x)).norm() < 1e-15);
    }

    #[test]
    fn out_of_plane_rate_from_acceleration() {
        let st = InertialState { r: Vector3::new(7e6, 0.0, 0.0), v: Vector3::new(0.0, 7.5e3, 0.0), epoch: 0.0 };
        let b = rtn_basis_with_acceleration(&st, Some(Vector3::new(-8.0, 0.0, 1e-3))).unwrap();
        assert!((b.omega_rtn.x - 7e6 * 1e-3 / (7e6 * 7.5e3)).abs() < 1e-18);
    }

    #[test]
    fn degenerate_rejected() {
        let st = InertialState { r: Vector3::new(7e6, 0.0, 0.0), v: Vector3::new(1.0, 0.0, 0.0), epoch: 0.0 };
        assert!(rtn_basis(&st).is_err());
    }
}
