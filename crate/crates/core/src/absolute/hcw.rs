use super::zeta::hcw_aux;
use super::{check_dt, zeta_integrals, Psd3, ProcessNoiseCov, Representation, warn_once};
use crate::orbit::{
    cartesian_to_equinoctial, equinoctial_to_cartesian, propagate_two_body, GravParam,
    InertialState,
};
use crate::stm::j_inertial_from_curvilinear;
use crate::{Matrix6, Result};
use std::sync::atomic::AtomicBool;

/// Curvilinear HCW model for state (ρ, r_cθ, r_cφ, ρ̇, r_cθ̇, r_cφ̇).
pub fn q_hcw_curvilinear(psd: &Psd3, n: f64, dt: f64) -> Result<ProcessNoiseCov> {
    check_dt(dt)?;
    psd.check()?;
    let z = zeta_integrals(n, dt);
    let x = hcw_aux(n, dt);
    let n2 = n * n;
    let mut m = Matrix6::zeros();

    // Entries whose printed ζ combinations cancel at small nΔt use the
    // equivalent forms in `HcwAux`.
    let qr = psd.q_r;
    m[(0, 0)] += qr * z.zss / n2;
    m[(1, 0)] += qr * -2.0 * x.b1 / n2;
    m[(1, 1)] += qr * 4.0 * x.a1 / n2;
    m[(3, 0)] += qr * z.zcs / n;
    m[(3, 1)] += qr * 2.0 * (x.a1 - x.d1) / n;
    m[(3, 3)] += qr * z.zcc;
    m[(4, 0)] += qr * -2.0 * z.zss / n;
    m[(4, 1)] += qr * 4.0 * x.b1 / n;
    m[(4, 3)] += qr * -2.0 * z.zcs;
    m[(4, 4)] += qr * 4.0 * z.zss;

    let qt = psd.q_t;
    m[(0, 0)] += qt * 4.0 * x.a1 / n2;
    m[(1, 0)] += qt * 2.0 * (4.0 * x.b1 - 3.0 * n * x.c1) / n2;
    m[(1, 1)] += qt * (3.0 * n2 * dt * dt * dt + 16.0 * z.zss - 24.0 * n * z.zts) / n2;
    m[(3, 0)] += qt * 4.0 * x.b1 / n;
    m[(3, 1)] += qt * 2.0 * (4.0 * z.zss - 3.0 * n * z.zts) / n;
    m[(3, 3)] += qt * 4.0 * z.zss;
    m[(4, 0)] += qt * 2.0 * (x.d1 - 4.0 * x.a1) / n;
    m[(4, 1)] += qt * (4.0 * z.zs - 1.5 * n * dt * dt + 12.0 * n * x.c1 - 16.0 * x.b1) / n;
    m[(4, 3)] += qt * (8.0 * z.zcs - 6.0 * z.zs);
    m[(4, 4)] += qt * (dt - 8.0 * x.d1 + 16.0 * x.a1);

    let qn = psd.q_n;
    m[(2, 2)] += qn * z.zss / n2;
    m[(5, 2)] += qn * z.zcs / n;
    m[(5, 5)] += qn * z.zcc;

    Ok(ProcessNoiseCov::from_lower(m, Representation::Curvilinear))
}

/// HCW model mapped to inertial Cartesian coordinates at the end of the interval.
///
/// `chief` is the state at the start of the interval.
pub fn q_hcw_cartesian(chief: &InertialState, psd: &Psd3, dt: f64, mu: GravParam) -> Result<ProcessNoiseCov> {
    let eq = cartesian_to_equinoctial(chief, mu)?;
    if eq.eccentricity() > 0.1 {
        static WARNED: AtomicBool = AtomicBool::new(false);
        warn_once(&WARNED, || format!("HCW process noise used with eccentricity {:.3}", eq.eccentricity()));
    }
    let q_psi = q_hcw_curvilinear(psd, eq.mean_motion(mu), dt)?;
    let chief_end = equinoctial_to_cartesian(&propagate_two_body(&eq, dt, mu), mu)?;
    let j = j_inertial_from_curvilinear(&chief_end)?;
    Ok(q_psi.transformed(&j, Representation::InertialCartesian))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Lower triangles exactly as printed, for moderate nΔt where they are well conditioned.
    fn printed(psd: &Psd3, n: f64, dt: f64) -> Matrix6 {
        let z = zeta_integrals(n, dt);
        let n2 = n * n;
        let mut m = Matrix6::zeros();
        let (qr, qt, qn) = (psd.q_r, psd.q_t, psd.q_n);
        m[(0, 0)] = qr * z.zss / n2 + qt * 4.0 * (dt + z.zcc - 2.0 * z.zc) / n2;
        m[(1, 0)] = qr * 2.0 * (z.zcs - z.zs) / n2
            + qt * 2.0 * (3.0 * n * z.ztc - 4.0 * z.zcs + 4.0 * z.zs - 1.5 * n * dt * dt) / n2;
        m[(1, 1)] = qr * 4.0 * (z.zcc - 2.0 * z.zc + dt) / n2
            + qt * (3.0 * n2 * dt.powi(3) + 16.0 * z.zss - 24.0 * n * z.zts) / n2;
        m[(3, 0)] = qr * z.zcs / n + qt * 4.0 * (z.zs - z.zcs) / n;
        m[(3, 1)] = qr * 2.0 * (z.zcc - z.zc) / n + qt * 2.0 * (4.0 * z.zss - 3.0 * n * z.zts) / n;
        m[(3, 3)] = qr * z.zcc + qt * 4.0 * z.zss;
        m[(4, 0)] = qr * -2.0 * z.zss / n + qt * 2.0 * (7.0 * z.zc - 4.0 * z.zcc - 3.0 * dt) / n;
        m[(4, 1)] = qr * -4.0 * (z.zcs - z.zs) / n
            + qt * (16.0 * z.zcs - 12.0 * n * z.ztc - 12.0 * z.zs + 4.5 * n * dt * dt) / n;
        m[(4, 3)] = qr * -2.0 * z.zcs + qt * (8.0 * z.zcs - 6.0 * z.zs);
        m[(4, 4)] = qr * 4.0 * z.zss + qt * (9.0 * dt + 16.0 * z.zcc - 24.0 * z.zc);
        m[(2, 2)] = qn * z.zss / n2;
        m[(5, 2)] = qn * z.zcs / n;
        m[(5, 5)] = qn * z.zcc;
        ProcessNoiseCov::from_lower(m, Representation::Curvilinear).matrix
    }

    #[test]
    fn rearranged_entries_equal_printed_entries() {
        let psd = Psd3::new(1.0, 2.0, 3.0).unwrap();
        let n = 1.1e-3;
        for &x in &[0.5, 1.0, 3.0, 6.0] {
            let dt = x / n;
            let a = q_hcw_curvilinear(&psd, n, dt).unwrap().matrix;
            let b = printed(&psd, n, dt);
            for i in 0..6 {
                for j in 0..6 {
                    let scale = (b[(i, i)] * b[(j, j)]).sqrt();
                    assert!((a[(i, j)] - b[(i, j)]).abs() <= 1e-12 * scale, "x={x} ({i},{j})");
                }
            }
        }
    }

    #[test]
    fn zero_psd_and_normal_decoupling() {
        let n = 1.1e-3;
        let z = q_hcw_curvilinear(&Psd3::new(0.0, 0.0, 0.0).unwrap(), n, 900.0).unwrap();
        assert_eq!(z.matrix, Matrix6::zeros());
        let inplane = q_hcw_curvilinear(&Psd3::new(1.0, 1.0, 0.0).unwrap(), n, 900.0).unwrap().matrix;
        let normal = q_hcw_curvilinear(&Psd3::new(0.0, 0.0, 1.0).unwrap(), n, 900.0).unwrap().matrix;
        for i in 0..6 {
            for j in 0..6 {
                let normal_idx = |k: usize| k == 2 || k == 5;
                if normal_idx(i) || normal_idx(j) {
                    assert_eq!(inplane[(i, j)], 0.0);
                } else {
                    assert_eq!(normal[(i, j)], 0.0);
                }
            }
        }
    }
}
