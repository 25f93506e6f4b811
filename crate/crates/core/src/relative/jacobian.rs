use super::{RelCartesianRtn, RelEquinoctial};
use crate::orbit::{rtn_basis, rtn_basis_with_acceleration, skew, wrap_pi, EquinoctialState, InertialState};
use crate::stm::{block2, j_rtn_from_inertial};
use crate::{Matrix3, Matrix6, Result, SncError, Vector3};

/// Deputy state relative to the chief in chief RTN axes with ω = [0, 0, L/r²].
pub fn rel_cartesian_rtn(chief: &InertialState, deputy: &InertialState) -> Result<RelCartesianRtn> {
    rel_cartesian_rtn_with_acceleration(chief, deputy, None)
}

/// As [`rel_cartesian_rtn`], with the chief acceleration used for the radial
/// component of ω when supplied.
pub fn rel_cartesian_rtn_with_acceleration(
    chief: &InertialState,
    deputy: &InertialState,
    chief_accel: Option<Vector3>,
) -> Result<RelCartesianRtn> {
    let b = rtn_basis_with_acceleration(chief, chief_accel)?;
    let dr = b.rot_i_to_r * (deputy.r - chief.r);
    let dv = b.rot_i_to_r * (deputy.v - chief.v) - b.omega_rtn.cross(&dr);
    Ok(RelCartesianRtn { dr, dv })
}

/// ∂δx_R/∂x_I^d; identical to the zero-separation map ∂δx_R/∂δx_I.
pub fn j_deputy_rel_cartesian(chief: &InertialState) -> Result<Matrix6> {
    j_rtn_from_inertial(chief)
}

/// ∂δx_R/∂x_I^c at arbitrary separation, out-of-plane rotation neglected.
pub fn j_chief_rel_cartesian(chief: &InertialState, deputy: &InertialState) -> Result<Matrix6> {
    let b = rtn_basis(chief)?;
    let (rc_v, vc) = (chief.r, chief.v);
    let rc = rc_v.norm();
    let lv = rc_v.cross(&vc);
    let l = lv.norm();
    if !(l > 0.0) {
        return Err(SncError::Degenerate("chief angular momentum is zero".into()));
    }
    let (rhat, that, nhat) = (b.radial(), b.transverse(), b.normal());
    let rd = deputy.r;
    let dr = deputy.r - chief.r;
    let dv = deputy.v - chief.v;
    let i3 = Matrix3::identity();
    let l3 = l * l * l;
    let rc2 = rc * rc;
    let rc3 = rc2 * rc;
    let lxv = lv.cross(&vc);
    let lxr = lv.cross(&rc_v);

    let dnhat_dv = lv * lxv.transpose() / l3 - skew(&vc) / l;
    let dnhat_dr_v = skew(&rc_v) / l - lv * lxr.transpose() / l3;
    let k1 = skew(&nhat) * (i3 / rc - rc_v * rc_v.transpose() / rc3) - skew(&rhat) * dnhat_dv;
    let k2 = -skew(&rhat) * dnhat_dr_v;

    let rows = |a: nalgebra::RowVector3<f64>, b: nalgebra::RowVector3<f64>, c: nalgebra::RowVector3<f64>| {
        Matrix3::from_rows(&[a, b, c])
    };

    let drdr = rows(
        -(rd.dot(&rc_v)) * rc_v.transpose() / rc3 + dr.transpose() / rc,
        rd.transpose() * k1,
        lv.dot(&rd) * lxv.transpose() / l3 + vc.cross(&rd).transpose() / l,
    );
    let drdv = rows(
        nalgebra::RowVector3::zeros(),
        dr.transpose() * k2,
        dr.transpose() * dnhat_dr_v,
    );
    let dvdr = rows(
        dv.transpose() * (rc2 * i3 - rc_v * rc_v.transpose()) / rc3
            - dr.transpose()
                * (that * (lxv.transpose() / (l * rc2) + 2.0 * l * rc_v.transpose() / (rc2 * rc2)) - l * k1 / rc2)
            - l * that.transpose() / rc2,
        dv.transpose() * k1 - l * (rd - 2.0 * rc_v).transpose() / rc3
            + rc_v.dot(&dr) * (lxv.transpose() / (l * rc3) + 3.0 * l * rc_v.transpose() / (rc3 * rc2)),
        dv.transpose() * dnhat_dv,
    );
    let dvdv = rows(
        -rhat.transpose() + dr.transpose() / rc2 * (that * lxr.transpose() / l + l * k2),
        -that.transpose() + dv.transpose() * k2 - dr.dot(&rc_v) * lxr.transpose() / (l * rc3),
        -(lv + rc_v.cross(&dv)).transpose() / l - lv.dot(&dv) * lxr.transpose() / l3,
    );
    Ok(block2(&drdr, &drdv, &dvdr, &dvdv))
}

/// Relative elements of the deputy with respect to the chief; δλ wrapped to [−π, π).
pub fn rel_equinoctial(chief: &EquinoctialState, deputy: &EquinoctialState) -> RelEquinoctial {
    RelEquinoctial {
        da_over_a: (deputy.a - chief.a) / chief.a,
        dlambda: wrap_pi(deputy.lambda - chief.lambda),
        df: deputy.f - chief.f,
        dg: deputy.g - chief.g,
        dh: deputy.h - chief.h,
        dk: deputy.k - chief.k,
    }
}

/// ∂δx_E/∂δx_E' at zero separation: scales δa by 1/a_c and moves λ to the second row.
pub fn j_delta_equinoctial(a_chief: f64) -> Matrix6 {
    let mut j = Matrix6::zeros();
    j[(0, 0)] = 1.0 / a_chief;
    j[(1, 5)] = 1.0;
    for i in 0..4 {
        j[(2 + i, 1 + i)] = 1.0;
    }
    j
}

/// ∂δx_E/∂x_E^d.
pub fn j_deputy_rel_equinoctial(chief: &EquinoctialState) -> Matrix6 {
    j_delta_equinoctial(chief.a)
}

/// ∂δx_E/∂x_E^c.
pub fn j_chief_rel_equinoctial(chief: &EquinoctialState, deputy: &EquinoctialState) -> Matrix6 {
    let mut j = -j_delta_equinoctial(chief.a);
    j[(0, 0)] = -deputy.a / (chief.a * chief.a);
    j
}
