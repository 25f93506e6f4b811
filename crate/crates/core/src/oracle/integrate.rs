use super::IntegratorConfig;
use crate::orbit::{GravParam, InertialState};
use crate::{Matrix3, Matrix6, Result, Vector3, Vector6};

pub fn two_body_acceleration(r: &Vector3, mu: f64) -> Vector3 {
    let rn = r.norm();
    -mu * r / (rn * rn * rn)
}

fn gravity_gradient(r: &Vector3, mu: f64) -> Matrix3 {
    let rn = r.norm();
    let r3 = rn * rn * rn;
    -mu * (Matrix3::identity() / r3 - 3.0 * r * r.transpose() / (r3 * rn * rn))
}

fn deriv(x: &Vector6, mu: f64) -> Vector6 {
    let r = x.fixed_rows::<3>(0).into_owned();
    let a = two_body_acceleration(&r, mu);
    Vector6::new(x[3], x[4], x[5], a.x, a.y, a.z)
}

fn deriv_stm(x: &Vector6, phi: &Matrix6, mu: f64) -> (Vector6, Matrix6) {
    let r = x.fixed_rows::<3>(0).into_owned();
    let mut a = Matrix6::zeros();
    a.fixed_view_mut::<3, 3>(0, 3).copy_from(&Matrix3::identity());
    a.fixed_view_mut::<3, 3>(3, 0).copy_from(&gravity_gradient(&r, mu));
    (deriv(x, mu), a * phi)
}

fn rk4_stm(x: &Vector6, phi: &Matrix6, h: f64, mu: f64) -> (Vector6, Matrix6) {
    let (k1, p1) = deriv_stm(x, phi, mu);
    let (k2, p2) = deriv_stm(&(x + 0.5 * h * k1), &(phi + 0.5 * h * p1), mu);
    let (k3, p3) = deriv_stm(&(x + 0.5 * h * k2), &(phi + 0.5 * h * p2), mu);
    let (k4, p4) = deriv_stm(&(x + h * k3), &(phi + h * p3), mu);
    (
        x + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4),
        phi + h / 6.0 * (p1 + 2.0 * p2 + 2.0 * p3 + p4),
    )
}

/// Splits dt into full steps plus one partial step landing exactly on dt.
fn step_sizes(dt: f64, max_step: f64) -> impl Iterator<Item = f64> {
    let sign = dt.signum();
    let full = (dt.abs() / max_step).floor() as usize;
    let rem = dt.abs() - full as f64 * max_step;
    let tail = if rem > 1e-12 * max_step { Some(sign * rem) } else { None };
    std::iter::repeat_n(sign * max_step, full).chain(tail)
}

/// RK4 two-body propagation.
pub fn integrate_two_body(
    st: &InertialState,
    dt: f64,
    cfg: &IntegratorConfig,
    mu: GravParam,
) -> Result<InertialState> {
    cfg.validate()?;
    let mu = mu.value();
    let mut x = st.to_vector();
    for h in step_sizes(dt, cfg.step) {
        let k1 = deriv(&x, mu);
        let k2 = deriv(&(x + 0.5 * h * k1), mu);
        let k3 = deriv(&(x + 0.5 * h * k2), mu);
        let k4 = deriv(&(x + h * k3), mu);
        x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    Ok(InertialState::from_vector(&x, st.epoch + dt))
}

/// Joint RK4 integration of the state and its variational equations.
pub fn propagate_with_stm(
    st: &InertialState,
    dt: f64,
    cfg: &IntegratorConfig,
    mu: GravParam,
) -> Result<(InertialState, Matrix6)> {
    cfg.validate()?;
    let mut x = st.to_vector();
    let mut phi = Matrix6::identity();
    advance_with_stm(&mut x, &mut phi, dt, cfg.step, mu.value());
    Ok((InertialState::from_vector(&x, st.epoch + dt), phi))
}

/// Advances a state and its STM in place by dt with RK4 steps no longer than max_step.
pub(crate) fn advance_with_stm(x: &mut Vector6, phi: &mut Matrix6, dt: f64, max_step: f64, mu: f64) {
    for h in step_sizes(dt, max_step) {
        (*x, *phi) = rk4_stm(x, phi, h, mu);
    }
}

pub fn stm_numeric(st: &InertialState, dt: f64, cfg: &IntegratorConfig, mu: GravParam) -> Result<Matrix6> {
    propagate_with_stm(st, dt, cfg, mu).map(|(_, phi)| phi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{default_fd_steps, finite_difference_jacobian};
    use crate::orbit::{equinoctial_to_cartesian, propagate_two_body, EquinoctialState};

    const MU: GravParam = GravParam::EARTH;

    fn state(e: f64) -> (EquinoctialState, InertialState) {
        let eq = EquinoctialState { a: 6.906e6, f: e, g: 0.0, h: 0.29, k: 0.29, lambda: 0.3, epoch: 0.0 };
        (eq, equinoctial_to_cartesian(&eq, MU).unwrap())
    }

    #[test]
    fn zero_interval_is_identity() {
        let (_, st) = state(0.1);
        let cfg = IntegratorConfig::default();
        assert_eq!(integrate_two_body(&st, 0.0, &cfg, MU).unwrap().to_vector(), st.to_vector());
        assert_eq!(stm_numeric(&st, 0.0, &cfg, MU).unwrap(), Matrix6::identity());
    }

    #[test]
    fn partial_final_step() {
        let steps: Vec<f64> = step_sizes(25.0, 10.0).collect();
        assert_eq!(steps, vec![10.0, 10.0, 5.0]);
        let back: Vec<f64> = step_sizes(-20.0, 10.0).collect();
        assert_eq!(back, vec![-10.0, -10.0]);
    }

    #[test]
    fn conserves_energy_and_momentum() {
        let (eq, st) = state(0.3);
        let t = eq.period(MU);
        let end = integrate_two_body(&st, t, &IntegratorConfig::default(), MU).unwrap();
        let energy = |s: &InertialState| 0.5 * s.v.norm_squared() - MU.value() / s.r.norm();
        let mom = |s: &InertialState| s.r.cross(&s.v).norm();
        assert!((energy(&end) / energy(&st) - 1.0).abs() < 1e-9);
        assert!((mom(&end) / mom(&st) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn matches_kepler_propagation() {
        let (eq, st) = state(1e-3);
        let t = eq.period(MU);
        let kep = equinoctial_to_cartesian(&propagate_two_body(&eq, t, MU), MU).unwrap();
        let err = |h: f64| {
            let end = integrate_two_body(&st, t, &IntegratorConfig { step: h }, MU).unwrap();
            (end.r - kep.r).norm()
        };
        // RK4 truncation at the default 10 s step is about 1.5 cm over one LEO orbit
        let (e10, e5) = (err(10.0), err(5.0));
        assert!(e10 < 0.02, "{e10}");
        assert!(e5 < 1e-3, "{e5}");
        let order = (e10 / e5).log2();
        assert!((order - 4.0).abs() < 0.2, "observed order {order}");
    }

    #[test]
    fn stm_properties() {
        let (eq, st) = state(0.2);
        let cfg = IntegratorConfig::default();
        let t = eq.period(MU);
        let phi = stm_numeric(&st, t, &cfg, MU).unwrap();
        assert!((phi.determinant() - 1.0).abs() < 1e-9);
        let (mid, p1) = propagate_with_stm(&st, 0.4 * t, &cfg, MU).unwrap();
        let p2 = stm_numeric(&mid, 0.6 * t, &cfg, MU).unwrap();
        assert!((p2 * p1 - phi).norm() / phi.norm() < 1e-8);

        let dt = 0.3 * t;
        let x0 = st.to_vector();
        let fd = finite_difference_jacobian(
            |x| Ok(integrate_two_body(&InertialState::from_vector(x, 0.0), dt, &cfg, MU)?.to_vector()),
            &x0,
            &default_fd_steps(&x0),
        )
        .unwrap();
        let an = stm_numeric(&st, dt, &cfg, MU).unwrap();
        for j in 0..6 {
            let c = an.column(j);
            assert!((fd.column(j) - c).norm() / c.norm() < 1e-6, "column {j}");
        }
    }
}
