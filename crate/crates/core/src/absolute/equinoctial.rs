use super::{check_dt, gve_gamma_at, zeta_bar_integrals, ProcessNoiseCov, Psd3, Representation, warn_once};
use crate::orbit::{propagate_two_body, true_longitude, true_longitude_advance, EquinoctialState, GravParam};
use crate::{Matrix6, Result, Vector6};
use std::sync::atomic::AtomicBool;

fn hadamard_outer(m: &Vector6, pattern: &Matrix6) -> Matrix6 {
    (m * m.transpose()).component_mul(pattern)
}

/// Near-circular equinoctial model: Γ evaluated with f = g = 0 and a true
/// longitude advancing linearly at the average rate over the interval.
///
/// The semi-parameter is replaced by the semi-major axis.
pub fn q_equinoctial_circular(
    eq: &EquinoctialState,
    psd: &Psd3,
    dt: f64,
    mu: GravParam,
) -> Result<ProcessNoiseCov> {
    check_dt(dt)?;
    psd.check()?;
    eq.check()?;
    if dt == 0.0 {
        return Ok(ProcessNoiseCov::zeros(Representation::Equinoctial));
    }
    if eq.eccentricity() > 0.1 {
        static WARNED: AtomicBool = AtomicBool::new(false);
        warn_once(&WARNED, || format!("circular equinoctial model used with eccentricity {:.3}", eq.eccentricity()));
    }
    let muv = mu.value();
    let a = eq.a;
    let (h, k) = (eq.h, eq.k);
    let ang = (muv * a).sqrt();
    let s = (a / muv).sqrt();
    let n = eq.mean_motion(mu);
    let l0 = true_longitude(eq, mu)?;
    let nbar = true_longitude_advance(eq, dt, mu)? / dt;
    let z = zeta_bar_integrals(l0, nbar, dt);

    let mut pr = Matrix6::zeros();
    pr[(1, 1)] = z.zss;
    pr[(2, 1)] = -z.zcs;
    pr[(2, 2)] = z.zcc;
    pr[(5, 1)] = -2.0 * z.zs;
    pr[(5, 2)] = 2.0 * z.zc;
    pr[(5, 5)] = 4.0 * dt;
    let qr = pr * (psd.q_r * s * s);

    let mut pt = Matrix6::zeros();
    pt[(0, 0)] = dt;
    pt[(1, 0)] = z.zc;
    pt[(1, 1)] = z.zcc;
    pt[(2, 0)] = z.zs;
    pt[(2, 1)] = z.zcs;
    pt[(2, 2)] = z.zss;
    pt[(5, 0)] = 0.5 * dt * dt;
    pt[(5, 1)] = z.ztc;
    pt[(5, 2)] = z.zts;
    pt[(5, 5)] = dt * dt * dt / 3.0;
    let mt = Vector6::new(2.0 * a * a / ang, 2.0 * s, 2.0 * s, 0.0, 0.0, -3.0 * n * a / ang);
    let qt = hadamard_outer(&mt, &pt) * psd.q_t;

    let mut pn = Matrix6::zeros();
    pn[(3, 3)] = z.zcc;
    pn[(4, 3)] = z.zcs;
    pn[(4, 4)] = z.zss;
    pn[(5, 3)] = k * z.zcc - h * z.zcs;
    pn[(5, 4)] = k * z.zcs - h * z.zss;
    pn[(5, 5)] = k * k * z.zcc + h * h * z.zss - 2.0 * k * h * z.zcs;
    let half = 0.5 * s * (1.0 + h * h + k * k);
    let mn = Vector6::new(0.0, 0.0, 0.0, half, half, -ang / muv);
    let qn = hadamard_outer(&mn, &pn) * psd.q_n;

    Ok(ProcessNoiseCov::from_lower(qr + qt + qn, Representation::Equinoctial))
}

/// Short-interval equinoctial model valid at any eccentricity: Γ frozen at the
/// true longitude of the interval midpoint, two-body STM applied exactly.
pub fn q_equinoctial_small_dt(
    eq: &EquinoctialState,
    psd: &Psd3,
    dt: f64,
    mu: GravParam,
) -> Result<ProcessNoiseCov> {
    check_dt(dt)?;
    psd.check()?;
    eq.check()?;
    if dt == 0.0 {
        return Ok(ProcessNoiseCov::zeros(Representation::Equinoctial));
    }
    let mid = propagate_two_body(eq, 0.5 * dt, mu);
    let gamma = gve_gamma_at(eq, true_longitude(&mid, mu)?, mu)?;
    let n = eq.mean_motion(mu);
    let a = eq.a;
    let secular = 0.75 * n * dt * dt / a;

    // One in-plane axis: Δt·γγᵀ plus the λ-row coupling through ∂λ/∂a.
    let in_plane = |col: usize, q: f64| -> Matrix6 {
        let g: Vector6 = gamma.column(col).into_owned();
        let mut m = g * g.transpose() * dt;
        let g1 = g[0];
        for j in 0..5 {
            let sj = -g1 * g[j];
            m[(5, j)] += secular * sj;
            m[(j, 5)] += secular * sj;
        }
        m[(5, 5)] += secular * (n / a * g1 * g1 * dt - 2.0 * g1 * g[5]);
        m * q
    };
    let gn: Vector6 = gamma.column(2).into_owned();
    let total = in_plane(0, psd.q_r) + in_plane(1, psd.q_t) + gn * gn.transpose() * (dt * psd.q_n);
    Ok(ProcessNoiseCov::new(total, Representation::Equinoctial))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::simpson;
    use crate::stm::equinoctial_stm;

    fn rel_fro(a: &Matrix6, b: &Matrix6) -> f64 {
        (a - b).norm() / b.norm()
    }

    fn circ_state(l: f64) -> EquinoctialState {
        EquinoctialState { a: 6.9e6, f: 0.0, g: 0.0, h: 0.29, k: 0.29, lambda: l, epoch: 0.0 }
    }

    #[test]
    fn circular_model_matches_quadrature() {
        let mu = GravParam::EARTH;
        let psd = Psd3::new(2e-12, 3e-12, 5e-12).unwrap();
        let eq = circ_state(0.4);
        let n = eq.mean_motion(mu);
        for &frac in &[0.05, 0.3, 1.0] {
            let dt = frac * eq.period(mu);
            let q = q_equinoctial_circular(&eq, &psd, dt, mu).unwrap().matrix;
            let numeric = simpson(
                |tau| {
                    let g = gve_gamma_at(&eq, eq.lambda + n * tau, mu).unwrap();
                    let phi = equinoctial_stm(eq.a, n, dt - tau);
                    let u = phi * g;
                    u * psd.matrix() * u.transpose()
                },
                0.0,
                dt,
                4096,
            );
            assert!(rel_fro(&q, &numeric) < 1e-10, "frac={frac}: {}", rel_fro(&q, &numeric));
        }
    }

    #[test]
    fn circular_model_axis_patterns() {
        let mu = GravParam::EARTH;
        let eq = circ_state(1.0);
        let dt = 1500.0;
        let only = |p: Psd3| q_equinoctial_circular(&eq, &p, dt, mu).unwrap().matrix;
        let qr = only(Psd3::new(1e-12, 0.0, 0.0).unwrap());
        let qt = only(Psd3::new(0.0, 1e-12, 0.0).unwrap());
        let qn = only(Psd3::new(0.0, 0.0, 1e-12).unwrap());
        for i in 0..6 {
            assert_eq!(qr[(0, i)], 0.0);
            for j in [3, 4] {
                assert_eq!(qr[(i, j)], 0.0);
                assert_eq!(qt[(i, j)], 0.0);
            }
            for j in [0, 1, 2] {
                assert_eq!(qn[(i, j)], 0.0);
            }
        }
        let all = only(Psd3::new(1e-12, 1e-12, 1e-12).unwrap());
        assert!(rel_fro(&(qr + qt + qn), &all) < 1e-15);
    }

    #[test]
    fn h_variance_small_near_ninety_degrees() {
        let mu = GravParam::EARTH;
        let psd = Psd3::isotropic(1e-12).unwrap();
        let dt = 20.0;
        let at = |l: f64| q_equinoctial_circular(&circ_state(l), &psd, dt, mu).unwrap().matrix[(3, 3)];
        assert!(at(std::f64::consts::FRAC_PI_2) < 1e-3 * at(0.0));
    }

    #[test]
    fn small_dt_matches_quadrature_with_frozen_gamma() {
        let mu = GravParam::EARTH;
        let psd = Psd3::new(2e-12, 3e-12, 5e-12).unwrap();
        let eq = EquinoctialState { a: 9e6, f: 0.1, g: 0.2, h: 0.1, k: -0.3, lambda: 2.0, epoch: 0.0 };
        let dt = 0.2 * eq.period(mu);
        let q = q_equinoctial_small_dt(&eq, &psd, dt, mu).unwrap().matrix;
        let mid = propagate_two_body(&eq, 0.5 * dt, mu);
        let g = gve_gamma_at(&eq, true_longitude(&mid, mu).unwrap(), mu).unwrap();
        let n = eq.mean_motion(mu);
        let numeric = simpson(
            |tau| {
                let u = equinoctial_stm(eq.a, n, dt - tau) * g;
                u * psd.matrix() * u.transpose()
            },
            0.0,
            dt,
            4096,
        );
        assert!(rel_fro(&q, &numeric) < 1e-10);
        let qn = q_equinoctial_small_dt(&eq, &Psd3::new(0.0, 0.0, 1.0).unwrap(), dt, mu).unwrap().matrix;
        let gn = g.column(2);
        assert!(rel_fro(&qn, &(gn * gn.transpose() * dt)) < 1e-15);
    }

    #[test]
    fn zero_interval_is_zero() {
        let mu = GravParam::EARTH;
        let psd = Psd3::isotropic(1.0).unwrap();
        let eq = circ_state(0.0);
        assert_eq!(q_equinoctial_circular(&eq, &psd, 0.0, mu).unwrap().matrix, Matrix6::zeros());
        assert_eq!(q_equinoctial_small_dt(&eq, &psd, 0.0, mu).unwrap().matrix, Matrix6::zeros());
    }
}
