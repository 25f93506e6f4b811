use super::integrate::advance_with_stm;
use super::{IntegratorConfig, QuadratureConfig};
use crate::absolute::{gve_gamma, ProcessNoiseCov, Psd3, Representation};
use crate::orbit::{cartesian_to_equinoctial, propagate_two_body, rtn_basis, GravParam, InertialState};
use crate::relative::CrossPsd3;
use crate::stm::equinoctial_stm;
use crate::{Matrix3, Matrix6, Matrix6x3, Result, SncError};
use nalgebra::SMatrix;

/// Composite Simpson rule over [a, b] with an even number of panels.
pub fn simpson<const R: usize, const C: usize, F>(f: F, a: f64, b: f64, panels: usize) -> SMatrix<f64, R, C>
where
    F: Fn(f64) -> SMatrix<f64, R, C>,
{
    assert!(panels >= 2 && panels.is_multiple_of(2), "Simpson needs an even panel count");
    let h = (b - a) / panels as f64;
    let mut acc = f(a) + f(b);
    for i in 1..panels {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += f(a + i as f64 * h) * w;
    }
    acc * (h / 3.0)
}

/// Transition matrix from the start to each node and Φ(τ,0)⁻¹·Γ(τ) at each node.
struct PathSamples {
    phi: Vec<Matrix6>,
    u: Vec<Matrix6x3>,
}

fn sample_path(
    st: &InertialState,
    nodes: &[f64],
    representation: Representation,
    icfg: &IntegratorConfig,
    mu: GravParam,
) -> Result<PathSamples> {
    let mut out = PathSamples { phi: Vec::with_capacity(nodes.len()), u: Vec::with_capacity(nodes.len()) };
    match representation {
        Representation::InertialCartesian => {
            icfg.validate()?;
            let mut x = st.to_vector();
            let mut phi = Matrix6::identity();
            let mut t = 0.0;
            for &tau in nodes {
                advance_with_stm(&mut x, &mut phi, tau - t, icfg.step, mu.value());
                t = tau;
                let here = InertialState::from_vector(&x, st.epoch + tau);
                let mut gamma = Matrix6x3::zeros();
                gamma.fixed_view_mut::<3, 3>(3, 0).copy_from(&rtn_basis(&here)?.rot_r_to_i());
                let inv = phi
                    .try_inverse()
                    .ok_or_else(|| SncError::Singular("numerical STM is not invertible".into()))?;
                out.phi.push(phi);
                out.u.push(inv * gamma);
            }
        }
        Representation::Equinoctial => {
            let eq = cartesian_to_equinoctial(st, mu)?;
            let n = eq.mean_motion(mu);
            for &tau in nodes {
                let gamma = gve_gamma(&propagate_two_body(&eq, tau, mu), mu)?;
                out.phi.push(equinoctial_stm(eq.a, n, tau));
                out.u.push(equinoctial_stm(eq.a, n, -tau) * gamma);
            }
        }
        other => {
            return Err(SncError::InvalidInput(format!("no reference truth for {other:?} states")));
        }
    }
    Ok(out)
}

fn check_times(times: &[f64]) -> Result<()> {
    let mut prev = 0.0;
    for &t in times {
        if !(t.is_finite() && t > prev) {
            return Err(SncError::InvalidInput("output times must be positive and strictly increasing".into()));
        }
        prev = t;
    }
    if times.is_empty() {
        return Err(SncError::InvalidInput("no output times".into()));
    }
    Ok(())
}

/// Simpson nodes for consecutive segments [0, t_1], [t_1, t_2], …, each with
/// `panels` panels. Returns the nodes and the index of every segment end.
fn segment_nodes(times: &[f64], panels: usize) -> (Vec<f64>, Vec<usize>) {
    let mut nodes = vec![0.0];
    let mut ends = Vec::with_capacity(times.len());
    let mut start = 0.0;
    for &t in times {
        let h = (t - start) / panels as f64;
        for i in 1..panels {
            nodes.push(start + i as f64 * h);
        }
        nodes.push(t);
        ends.push(nodes.len() - 1);
        start = t;
    }
    (nodes, ends)
}

/// Cumulative ∫₀^{t_k} U_c(τ) Q̃ U_d(τ)ᵀ dτ mapped forward by Φ_c(t_k) and Φ_d(t_k).
fn cumulative(
    a: &PathSamples,
    b: &PathSamples,
    qtilde: &Matrix3,
    nodes: &[f64],
    ends: &[usize],
) -> Vec<Matrix6> {
    let integrand = |i: usize| a.u[i] * qtilde * b.u[i].transpose();
    let mut acc = Matrix6::zeros();
    let mut out = Vec::with_capacity(ends.len());
    let mut start = 0;
    for &end in ends {
        let panels = end - start;
        let h = (nodes[end] - nodes[start]) / panels as f64;
        let mut seg = integrand(start) + integrand(end);
        for i in 1..panels {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            seg += integrand(start + i) * w;
        }
        acc += seg * (h / 3.0);
        out.push(a.phi[end] * acc * b.phi[end].transpose());
        start = end;
    }
    out
}

/// Reference process noise covariance at each of `times` (seconds after the
/// epoch of `st`), sharing one trajectory and one running integral.
///
/// `qcfg.panels` Simpson panels are used between consecutive output times.
pub fn q_numeric_profile(
    st: &InertialState,
    psd: &Psd3,
    times: &[f64],
    qcfg: &QuadratureConfig,
    icfg: &IntegratorConfig,
    mu: GravParam,
    representation: Representation,
) -> Result<Vec<ProcessNoiseCov>> {
    qcfg.validate()?;
    psd.check()?;
    check_times(times)?;
    let (nodes, ends) = segment_nodes(times, qcfg.panels);
    let path = sample_path(st, &nodes, representation, icfg, mu)?;
    Ok(cumulative(&path, &path, &psd.matrix(), &nodes, &ends)
        .into_iter()
        .map(|m| ProcessNoiseCov::new(0.5 * (m + m.transpose()), representation))
        .collect())
}

/// Reference process noise covariance over one interval of length dt.
pub fn q_numeric(
    st: &InertialState,
    psd: &Psd3,
    dt: f64,
    qcfg: &QuadratureConfig,
    icfg: &IntegratorConfig,
    mu: GravParam,
    representation: Representation,
) -> Result<ProcessNoiseCov> {
    if dt == 0.0 {
        return Ok(ProcessNoiseCov::zeros(representation));
    }
    Ok(q_numeric_profile(st, psd, &[dt], qcfg, icfg, mu, representation)?.remove(0))
}

/// Cross covariance E[w_c w_dᵀ] of the chief and deputy discrete process noise
/// at each of `times`, each spacecraft using its own RTN frame.
#[allow(clippy::too_many_arguments)]
pub fn cross_q_numeric_profile(
    chief: &InertialState,
    deputy: &InertialState,
    q_cd: &CrossPsd3,
    times: &[f64],
    qcfg: &QuadratureConfig,
    icfg: &IntegratorConfig,
    mu: GravParam,
    representation: Representation,
) -> Result<Vec<Matrix6>> {
    qcfg.validate()?;
    q_cd.check()?;
    check_times(times)?;
    let (nodes, ends) = segment_nodes(times, qcfg.panels);
    let c = sample_path(chief, &nodes, representation, icfg, mu)?;
    let d = sample_path(deputy, &nodes, representation, icfg, mu)?;
    Ok(cumulative(&c, &d, &q_cd.matrix(), &nodes, &ends))
}

#[allow(clippy::too_many_arguments)]
pub fn cross_q_numeric(
    chief: &InertialState,
    deputy: &InertialState,
    q_cd: &CrossPsd3,
    dt: f64,
    qcfg: &QuadratureConfig,
    icfg: &IntegratorConfig,
    mu: GravParam,
    representation: Representation,
) -> Result<Matrix6> {
    if dt == 0.0 {
        return Ok(Matrix6::zeros());
    }
    Ok(cross_q_numeric_profile(chief, deputy, q_cd, &[dt], qcfg, icfg, mu, representation)?.remove(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::absolute::q_hcw_cartesian;
    use crate::orbit::{equinoctial_to_cartesian, EquinoctialState};
    use nalgebra::Matrix1;

    const MU: GravParam = GravParam::EARTH;

    fn state(e: f64) -> InertialState {
        let eq = EquinoctialState { a: 6.906e6, f: 0.0, g: e, h: 0.29, k: 0.29, lambda: 1.57, epoch: 0.0 };
        equinoctial_to_cartesian(&eq, MU).unwrap()
    }

    #[test]
    fn simpson_is_exact_for_cubics() {
        let v = simpson(|t| Matrix1::new(t * t * t - 2.0 * t), 0.0, 2.0, 2);
        assert!((v[0] - 0.0).abs() < 1e-14);
    }

    #[test]
    fn zero_psd_gives_zero() {
        let st = state(1e-3);
        let q = q_numeric(
            &st,
            &Psd3::isotropic(0.0).unwrap(),
            100.0,
            &QuadratureConfig { panels: 8 },
            &IntegratorConfig::default(),
            MU,
            Representation::InertialCartesian,
        )
        .unwrap();
        assert_eq!(q.matrix, Matrix6::zeros());
    }

    #[test]
    fn profile_matches_single_interval() {
        let st = state(0.2);
        let psd = Psd3::new(1e-12, 2e-12, 3e-12).unwrap();
        let icfg = IntegratorConfig::default();
        for repr in [Representation::InertialCartesian, Representation::Equinoctial] {
            let prof =
                q_numeric_profile(&st, &psd, &[600.0, 1200.0], &QuadratureConfig { panels: 64 }, &icfg, MU, repr)
                    .unwrap();
            let single = q_numeric(&st, &psd, 1200.0, &QuadratureConfig { panels: 128 }, &icfg, MU, repr).unwrap();
            let err = (prof[1].matrix - single.matrix).norm() / single.matrix.norm();
            assert!(err < 1e-9, "{repr:?}: {err}");
        }
    }

    #[test]
    fn panel_doubling_converges() {
        let st = state(0.2);
        let psd = Psd3::isotropic(1e-12).unwrap();
        let icfg = IntegratorConfig::default();
        let dt = 0.25 * 2.0 * std::f64::consts::PI * (6.906e6f64.powi(3) / MU.value()).sqrt();
        for repr in [Representation::InertialCartesian, Representation::Equinoctial] {
            let q = |p| q_numeric(&st, &psd, dt, &QuadratureConfig { panels: p }, &icfg, MU, repr).unwrap().matrix;
            let (a, b) = (q(512), q(1024));
            assert!((a - b).norm() < 1e-10 * b.norm(), "{repr:?}");
        }
    }

    #[test]
    fn circular_cartesian_agrees_with_hcw() {
        let st = state(0.0);
        let psd = Psd3::isotropic(1e-12).unwrap();
        let dt = 0.25 * 2.0 * std::f64::consts::PI * (6.906e6f64.powi(3) / MU.value()).sqrt();
        let truth = q_numeric(
            &st,
            &psd,
            dt,
            &QuadratureConfig::default(),
            &IntegratorConfig::default(),
            MU,
            Representation::InertialCartesian,
        )
        .unwrap();
        let model = q_hcw_cartesian(&st, &psd, dt, MU).unwrap();
        let (s_t, s_m) = (truth.std_devs(), model.std_devs());
        for i in 0..6 {
            assert!(((s_m[i] - s_t[i]) / s_t[i]).abs() < 1e-3, "element {i}");
        }
    }

    #[test]
    fn coincident_cross_term_equals_auto_term() {
        let st = state(0.05);
        let psd = Psd3::new(1e-12, 2e-12, 3e-12).unwrap();
        let cross = CrossPsd3::new(1e-12, 2e-12, 3e-12).unwrap();
        let qcfg = QuadratureConfig { panels: 64 };
        let icfg = IntegratorConfig::default();
        for repr in [Representation::InertialCartesian, Representation::Equinoctial] {
            let a = q_numeric(&st, &psd, 900.0, &qcfg, &icfg, MU, repr).unwrap().matrix;
            let b = cross_q_numeric(&st, &st, &cross, 900.0, &qcfg, &icfg, MU, repr).unwrap();
            assert!((a - b).norm() <= 1e-10 * a.norm());
        }
    }
}
