//! Each closed-form model against Simpson quadrature of its own defining
//! integral under its own simplifying assumptions. Agreement certifies the
//! algebra; it says nothing about modeling error.

use crate::absolute::{
    gve_gamma_at, q_equinoctial_circular, q_equinoctial_small_dt, q_hcw_cartesian, q_kinematic_rtn, Psd3,
};
use crate::oracle::simpson;
use crate::orbit::{
    classical_to_equinoctial, equinoctial_to_cartesian, propagate_two_body, rtn_basis, true_longitude,
    true_longitude_advance, ClassicalElements, EquinoctialState, GravParam,
};
use crate::stm::{equinoctial_stm, hcw_stm, j_inertial_from_curvilinear};
use crate::{Matrix3, Matrix6, Matrix6x3, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

const PANELS: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ValidatedModel {
    Kinematic,
    Hcw,
    Circular,
    SmallDt,
}

impl ValidatedModel {
    pub const ALL: [ValidatedModel; 4] =
        [ValidatedModel::Kinematic, ValidatedModel::Hcw, ValidatedModel::Circular, ValidatedModel::SmallDt];

    pub fn name(self) -> &'static str {
        match self {
            ValidatedModel::Kinematic => "kinematic",
            ValidatedModel::Hcw => "hcw",
            ValidatedModel::Circular => "circular",
            ValidatedModel::SmallDt => "small-dt",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationCase {
    pub model: ValidatedModel,
    pub state: EquinoctialState,
    pub psd: Psd3,
    pub dt: f64,
    /// ‖Q_closed − Q_quad‖_F / ‖Q_quad‖_F.
    pub rel_error: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub seed: u64,
    pub cases: Vec<ValidationCase>,
}

impl ValidationReport {
    pub fn max_error(&self, model: ValidatedModel) -> f64 {
        self.cases.iter().filter(|c| c.model == model).map(|c| c.rel_error).fold(0.0, f64::max)
    }

    pub fn worst(&self) -> f64 {
        self.cases.iter().map(|c| c.rel_error).fold(0.0, f64::max)
    }
}

fn rel_fro(a: &Matrix6, b: &Matrix6) -> f64 {
    (a - b).norm() / b.norm()
}

fn accumulate(dt: f64, psd: &Psd3, u: impl Fn(f64) -> Matrix6x3) -> Matrix6 {
    let q = psd.matrix();
    simpson(
        |tau| {
            let m = u(tau);
            m * q * m.transpose()
        },
        0.0,
        dt,
        PANELS,
    )
}

fn lift(m: &Matrix3) -> Matrix6x3 {
    let mut u = Matrix6x3::zeros();
    u.fixed_view_mut::<3, 3>(3, 0).copy_from(m);
    u
}

/// Closed form and quadrature of one model for one case.
pub fn check_case(model: ValidatedModel, eq: &EquinoctialState, psd: &Psd3, dt: f64, mu: GravParam) -> Result<f64> {
    let n = eq.mean_motion(mu);
    let (closed, quad) = match model {
        ValidatedModel::Kinematic => {
            let st = equinoctial_to_cartesian(eq, mu)?;
            let r = rtn_basis(&st)?.rot_r_to_i();
            let quad = accumulate(dt, psd, |tau| {
                let mut phi = Matrix6::identity();
                phi.fixed_view_mut::<3, 3>(0, 3).copy_from(&(Matrix3::identity() * (dt - tau)));
                phi * lift(&r)
            });
            (q_kinematic_rtn(&st, &psd.matrix(), dt)?.matrix, quad)
        }
        ValidatedModel::Hcw => {
            let st = equinoctial_to_cartesian(eq, mu)?;
            let q_psi = accumulate(dt, psd, |tau| hcw_stm(n, dt - tau) * lift(&Matrix3::identity()));
            let end = equinoctial_to_cartesian(&propagate_two_body(eq, dt, mu), mu)?;
            let j = j_inertial_from_curvilinear(&end)?;
            (q_hcw_cartesian(&st, psd, dt, mu)?.matrix, j * q_psi * j.transpose())
        }
        ValidatedModel::Circular => {
            let l0 = true_longitude(eq, mu)?;
            let nbar = true_longitude_advance(eq, dt, mu)? / dt;
            let circ = EquinoctialState { f: 0.0, g: 0.0, ..*eq };
            // f = g = 0 gives W = 1, so Γ is always defined
            let quad = accumulate(dt, psd, |tau| {
                let g = gve_gamma_at(&circ, l0 + nbar * tau, mu).expect("circular Γ has W = 1");
                equinoctial_stm(eq.a, n, dt - tau) * g
            });
            (q_equinoctial_circular(eq, psd, dt, mu)?.matrix, quad)
        }
        ValidatedModel::SmallDt => {
            let mid = propagate_two_body(eq, 0.5 * dt, mu);
            let g = gve_gamma_at(eq, true_longitude(&mid, mu)?, mu)?;
            let quad = accumulate(dt, psd, |tau| equinoctial_stm(eq.a, n, dt - tau) * g);
            (q_equinoctial_small_dt(eq, psd, dt, mu)?.matrix, quad)
        }
    };
    Ok(rel_fro(&closed, &quad))
}

fn random_case(rng: &mut ChaCha8Rng, mu: GravParam) -> Result<(EquinoctialState, Psd3, f64)> {
    let tau = std::f64::consts::TAU;
    let eq = classical_to_equinoctial(&ClassicalElements {
        a: rng.gen_range(6.7e6..4.3e7),
        e: rng.gen_range(0.0..0.5),
        i: rng.gen_range(0.01..3.0),
        raan: rng.gen_range(0.0..tau),
        argp: rng.gen_range(0.0..tau),
        mean_anomaly: rng.gen_range(0.0..tau),
    })?;
    let mut log_q = || 10f64.powf(rng.gen_range(-14.0..-8.0));
    let psd = Psd3::new(log_q(), log_q(), log_q())?;
    let dt = rng.gen_range(1e-3..1.0) * eq.period(mu);
    Ok((eq, psd, dt))
}

/// `cases` random (state, PSD, interval) triples per model, reproducible from `seed`.
pub fn run_validation(cases: usize, seed: u64) -> Result<ValidationReport> {
    let mu = GravParam::EARTH;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(cases * ValidatedModel::ALL.len());
    for _ in 0..cases {
        let (state, psd, dt) = random_case(&mut rng, mu)?;
        for model in ValidatedModel::ALL {
            let rel_error = check_case(model, &state, &psd, dt, mu)?;
            out.push(ValidationCase { model, state, psd, dt, rel_error });
        }
    }
    Ok(ValidationReport { seed, cases: out })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suite_passes() {
        let rep = run_validation(4, 7).unwrap();
        assert_eq!(rep.cases.len(), 16);
        for m in ValidatedModel::ALL {
            assert!(rep.max_error(m) < 1e-10, "{}: {}", m.name(), rep.max_error(m));
        }
    }

    #[test]
    fn detects_a_wrong_closed_form() {
        let mu = GravParam::EARTH;
        let eq = EquinoctialState { a: 7e6, f: 0.01, g: 0.0, h: 0.1, k: 0.2, lambda: 0.3, epoch: 0.0 };
        let psd = Psd3::isotropic(1e-12).unwrap();
        let dt = 0.3 * eq.period(mu);
        // the small-dt closed form is not the circular integral
        let closed = q_equinoctial_small_dt(&eq, &psd, dt, mu).unwrap().matrix;
        let circ = q_equinoctial_circular(&eq, &psd, dt, mu).unwrap().matrix;
        assert!(rel_fro(&closed, &circ) > 1e-3);
    }
}
