//! Analytic state transition matrices and the Jacobians between the
//! inertial, RTN-relative and curvilinear state representations.

use crate::orbit::{
    equinoctial_to_cartesian, propagate_two_body, rtn_basis, EquinoctialState, GravParam,
    InertialState,
};
use crate::oracle::{default_fd_steps, finite_difference_jacobian};
use crate::{Matrix3, Matrix6, Result, SncError};

/// HCW transition matrix for state (ρ, r_cθ, r_cφ, ρ̇, r_cθ̇, r_cφ̇).
pub fn hcw_stm(n: f64, dt: f64) -> Matrix6 {
    let nt = n * dt;
    let (s, c) = nt.sin_cos();
    #[rustfmt::skip]
    let m = Matrix6::new(
        4.0 - 3.0 * c,          0.0, 0.0,    s / n,             2.0 * (1.0 - c) / n,      0.0,
        6.0 * (s - nt),         1.0, 0.0,    2.0 * (c - 1.0) / n, (4.0 * s - 3.0 * nt) / n, 0.0,
        0.0,                    0.0, c,      0.0,               0.0,                      s / n,
        3.0 * n * s,            0.0, 0.0,    c,                 2.0 * s,                  0.0,
        6.0 * n * (c - 1.0),    0.0, 0.0,    -2.0 * s,          4.0 * c - 3.0,            0.0,
        0.0,                    0.0, -n * s, 0.0,               0.0,                      c,
    );
    m
}

/// Two-body transition matrix of (a, f, g, h, k, λ): identity plus ∂λ/∂a = −3n·dt/(2a).
pub fn equinoctial_stm(a: f64, n: f64, dt: f64) -> Matrix6 {
    let mut m = Matrix6::identity();
    m[(5, 0)] = -1.5 * n / a * dt;
    m
}

/// ∂δx_I/∂δx_ψ = [[R, 0], [R·w×, R]] with R the RTN→inertial rotation of the chief.
pub fn j_inertial_from_curvilinear(chief: &InertialState) -> Result<Matrix6> {
    let b = rtn_basis(chief)?;
    let r = b.rot_r_to_i();
    Ok(block2(&r, &Matrix3::zeros(), &(r * b.omega_cross()), &r))
}

/// ∂δx_R/∂δx_I = [[R, 0], [−w×·R, R]] with R the inertial→RTN rotation of the chief.
pub fn j_rtn_from_inertial(chief: &InertialState) -> Result<Matrix6> {
    let b = rtn_basis(chief)?;
    let r = b.rot_i_to_r;
    Ok(block2(&r, &Matrix3::zeros(), &(-b.omega_cross() * r), &r))
}

/// Φ_α = j_out · Φ_rel · j_in.
pub fn absolute_stm_from_relative(phi_rel: &Matrix6, j_out: &Matrix6, j_in: &Matrix6) -> Matrix6 {
    j_out * phi_rel * j_in
}

/// ∂x_I/∂x_E by central differences of the element-to-Cartesian map.
pub fn cartesian_equinoctial_jacobian(eq: &EquinoctialState, mu: GravParam) -> Result<Matrix6> {
    let x = eq.to_vector();
    let epoch = eq.epoch;
    finite_difference_jacobian(
        |y| {
            let st = equinoctial_to_cartesian(&EquinoctialState::from_vector(y, epoch), mu)?;
            Ok(st.to_vector())
        },
        &x,
        &default_fd_steps(&x),
    )
}

/// Inertial two-body STM over dt from the element STM mapped through
/// finite-difference conversion Jacobians at both ends.
pub fn cartesian_two_body_stm(chief: &InertialState, dt: f64, mu: GravParam) -> Result<Matrix6> {
    let eq0 = crate::orbit::cartesian_to_equinoctial(chief, mu)?;
    cartesian_two_body_stm_from_elements(&eq0, dt, mu)
}

pub fn cartesian_two_body_stm_from_elements(
    eq0: &EquinoctialState,
    dt: f64,
    mu: GravParam,
) -> Result<Matrix6> {
    let eq1 = propagate_two_body(eq0, dt, mu);
    let j0 = cartesian_equinoctial_jacobian(eq0, mu)?;
    let j1 = cartesian_equinoctial_jacobian(&eq1, mu)?;
    let j0_inv = j0
        .try_inverse()
        .ok_or_else(|| SncError::FiniteDifference("conversion Jacobian is singular".into()))?;
    Ok(j1 * equinoctial_stm(eq0.a, eq0.mean_motion(mu), dt) * j0_inv)
}

pub(crate) fn block2(tl: &Matrix3, tr: &Matrix3, bl: &Matrix3, br: &Matrix3) -> Matrix6 {
    let mut m = Matrix6::zeros();
    m.fixed_view_mut::<3, 3>(0, 0).copy_from(tl);
    m.fixed_view_mut::<3, 3>(0, 3).copy_from(tr);
    m.fixed_view_mut::<3, 3>(3, 0).copy_from(bl);
    m.fixed_view_mut::<3, 3>(3, 3).copy_from(br);
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbit::cartesian_to_equinoctial;
    use crate::oracle::{stm_numeric, IntegratorConfig};
    use crate::Vector3;
    use std::f64::consts::PI;

    const MU: GravParam = GravParam::EARTH;

    fn rel_frob(a: &Matrix6, b: &Matrix6) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn hcw_identity_at_zero() {
        assert_eq!(hcw_stm(1.1e-3, 0.0), Matrix6::identity());
    }

    #[test]
    fn hcw_full_period() {
        let n = 1.1e-3;
        let m = hcw_stm(n, 2.0 * PI / n);
        let mut expect = Matrix6::identity();
        expect[(1, 0)] = -12.0 * PI;
        expect[(1, 4)] = -6.0 * PI / n;
        for i in 0..6 {
            for j in 0..6 {
                let scale = expect[(i, j)].abs().max(1.0) * if j >= 3 && i < 3 { 1.0 / n } else { 1.0 };
                assert!((m[(i, j)] - expect[(i, j)]).abs() < 1e-12 * scale, "({i},{j})");
            }
        }
    }

    #[test]
    fn hcw_semigroup_and_decoupling() {
        let n = 1.05e-3;
        let (t1, t2) = (700.0, 1900.0);
        let d = hcw_stm(n, t1 + t2) - hcw_stm(n, t2) * hcw_stm(n, t1);
        let scale = hcw_stm(n, t1 + t2).abs().max();
        assert!(d.abs().max() < 1e-10 * scale);
        let m = hcw_stm(n, 1234.0);
        for i in [0, 1, 3, 4] {
            for j in [2, 5] {
                assert_eq!(m[(i, j)], 0.0);
                assert_eq!(m[(j, i)], 0.0);
            }
        }
    }

    #[test]
    fn equinoctial_stm_affine_in_dt() {
        let (a, n) = (7e6, 1.08e-3);
        assert_eq!(equinoctial_stm(a, n, 0.0), Matrix6::identity());
        let twice = equinoctial_stm(a, n, 300.0) * equinoctial_stm(a, n, 300.0);
        assert!((twice - equinoctial_stm(a, n, 600.0)).abs().max() < 1e-18);
    }

    #[test]
    fn equinoctial_stm_matches_propagation_difference() {
        let eq = EquinoctialState { a: 7e6, f: 0.01, g: 0.0, h: 0.1, k: 0.2, lambda: 1.0, epoch: 0.0 };
        let dt = 2000.0;
        let da = 7e6 * 1e-8;
        let p0 = propagate_two_body(&eq, dt, MU);
        let p1 = propagate_two_body(&EquinoctialState { a: eq.a + da, ..eq }, dt, MU);
        let fd = crate::orbit::wrap_pi(p1.lambda - p0.lambda);
        let lin = equinoctial_stm(eq.a, eq.mean_motion(MU), dt)[(5, 0)] * da;
        assert!((fd - lin).abs() / lin.abs() < 1e-6);
    }

    fn sample_chief() -> InertialState {
        let eq = EquinoctialState { a: 7.3e6, f: 0.02, g: -0.01, h: 0.3, k: 0.1, lambda: 2.0, epoch: 0.0 };
        equinoctial_to_cartesian(&eq, MU).unwrap()
    }

    #[test]
    fn jacobian_pair_are_inverses() {
        let c = sample_chief();
        let p = j_inertial_from_curvilinear(&c).unwrap() * j_rtn_from_inertial(&c).unwrap();
        assert!((p - Matrix6::identity()).abs().max() < 1e-12);
        let j = j_inertial_from_curvilinear(&c).unwrap();
        let r = j.fixed_view::<3, 3>(0, 0).into_owned();
        assert!((r * r.transpose() - Matrix3::identity()).abs().max() < 1e-14);
    }

    #[test]
    fn axis_aligned_jacobian() {
        let c = InertialState { r: Vector3::new(7e6, 0.0, 0.0), v: Vector3::new(0.0, 7.5e3, 0.0), epoch: 0.0 };
        let j = j_inertial_from_curvilinear(&c).unwrap();
        let w = 7e6 * 7.5e3 / 49e12;
        assert_eq!(j[(3, 1)], -w);
        assert_eq!(j[(4, 0)], w);
        let jr = j_rtn_from_inertial(&c).unwrap();
        let dx = crate::Vector6::new(5.0, 0.0, 0.0, 0.0, 0.0, 0.0);
        let out = jr * dx;
        assert!((out[0] - 5.0).abs() < 1e-15 && out[1].abs() < 1e-15 && out[2].abs() < 1e-15);
    }

    #[test]
    fn rtn_jacobian_matches_finite_differences() {
        let c = sample_chief();
        let b = rtn_basis(&c).unwrap();
        let x = c.to_vector();
        let map = |y: &crate::Vector6| -> Result<crate::Vector6> {
            let dr = b.rot_i_to_r * Vector3::new(y[0] - x[0], y[1] - x[1], y[2] - x[2]);
            let dv = b.rot_i_to_r * Vector3::new(y[3] - x[3], y[4] - x[4], y[5] - x[5])
                - b.omega_cross() * dr;
            Ok(crate::Vector6::new(dr.x, dr.y, dr.z, dv.x, dv.y, dv.z))
        };
        let fd = finite_difference_jacobian(map, &x, &default_fd_steps(&x)).unwrap();
        let an = j_rtn_from_inertial(&c).unwrap();
        assert!((fd - an).abs().max() < 1e-6);
    }

    #[test]
    fn relative_hcw_maps_to_inertial_stm_on_circular_orbit() {
        let eq = EquinoctialState { a: 7e6, f: 0.0, g: 0.0, h: 0.2, k: -0.1, lambda: 0.4, epoch: 0.0 };
        let n = eq.mean_motion(MU);
        let dt = 0.1 * eq.period(MU);
        let c0 = equinoctial_to_cartesian(&eq, MU).unwrap();
        let c1 = equinoctial_to_cartesian(&propagate_two_body(&eq, dt, MU), MU).unwrap();
        let phi = absolute_stm_from_relative(
            &hcw_stm(n, dt),
            &j_inertial_from_curvilinear(&c1).unwrap(),
            &j_rtn_from_inertial(&c0).unwrap(),
        );
        let num = stm_numeric(&c0, dt, &IntegratorConfig::default(), MU).unwrap();
        assert!(rel_frob(&phi, &num) < 1e-6);
        let ident = absolute_stm_from_relative(
            &Matrix6::identity(),
            &j_inertial_from_curvilinear(&c0).unwrap(),
            &j_rtn_from_inertial(&c0).unwrap(),
        );
        assert!((ident - Matrix6::identity()).abs().max() < 1e-12);
    }

    #[test]
    fn cartesian_stm_matches_variational_integration() {
        let eq = EquinoctialState { a: 7.6e6, f: 0.06, g: 0.08, h: 0.25, k: 0.15, lambda: 0.9, epoch: 0.0 };
        let c0 = equinoctial_to_cartesian(&eq, MU).unwrap();
        assert!((cartesian_to_equinoctial(&c0, MU).unwrap().eccentricity() - 0.1).abs() < 1e-9);
        let dt = 0.5 * eq.period(MU);
        let phi = cartesian_two_body_stm(&c0, dt, MU).unwrap();
        let num = stm_numeric(&c0, dt, &IntegratorConfig::default(), MU).unwrap();
        assert!(rel_frob(&phi, &num) < 1e-5, "{}", rel_frob(&phi, &num));
        assert!((phi.determinant() - 1.0).abs() < 1e-6);
        let zero = cartesian_two_body_stm(&c0, 0.0, MU).unwrap();
        assert!((zero - Matrix6::identity()).abs().max() < 1e-8);
    }
}
