use super::{check_dt, q_equinoctial_small_dt, q_kinematic_rtn, ProcessNoiseCov, Psd3};
use crate::orbit::{cartesian_to_equinoctial, equinoctial_to_cartesian, propagate_two_body, InertialState};
use crate::orbit::{EquinoctialState, GravParam};
use crate::stm::{cartesian_two_body_stm_from_elements, equinoctial_stm};
use crate::{Matrix6, Result, SncError};
use serde::{Deserialize, Serialize};

/// Placement of subinterval boundaries inside a propagation interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum NodeSpacing {
    #[default]
    Even,
    /// Each subinterval is `ratio` times longer than the one before it, so
    /// ratios above one concentrate nodes near the start.
    Geometric { ratio: f64 },
}

/// Boundaries 0 = t̄_0 < … < t̄_N = dt, relative to the interval start.
pub fn subinterval_nodes(dt: f64, count: usize, spacing: NodeSpacing) -> Result<Vec<f64>> {
    check_dt(dt)?;
    if count == 0 {
        return Err(SncError::InvalidInput("need at least one subinterval".into()));
    }
    let weights: Vec<f64> = match spacing {
        NodeSpacing::Even => vec![1.0; count],
        NodeSpacing::Geometric { ratio } => {
            if !(ratio.is_finite() && ratio > 0.0) {
                return Err(SncError::InvalidInput(format!("geometric ratio must be positive, got {ratio}")));
            }
            (0..count).map(|i| ratio.powi(i as i32)).collect()
        }
    };
    let total: f64 = weights.iter().sum();
    let mut nodes = Vec::with_capacity(count + 1);
    let mut acc = 0.0;
    nodes.push(0.0);
    for w in &weights[..count - 1] {
        acc += w;
        nodes.push(dt * acc / total);
    }
    nodes.push(dt);
    Ok(nodes)
}

/// Σ Φ(t_k, t̄_i) Q(t̄_i, t̄_{i−1}) Φ(t_k, t̄_i)ᵀ over all segments.
pub fn q_subinterval_compose(segments: &[(Matrix6, ProcessNoiseCov)]) -> Result<ProcessNoiseCov> {
    let (_, first) = segments
        .first()
        .ok_or_else(|| SncError::InvalidInput("no subinterval segments".into()))?;
    let repr = first.representation;
    let mut total = Matrix6::zeros();
    for (phi, q) in segments {
        if q.representation != repr {
            return Err(SncError::InvalidInput(format!(
                "segment representations differ: {:?} vs {:?}",
                q.representation, repr
            )));
        }
        total += phi * q.matrix * phi.transpose();
    }
    let out = ProcessNoiseCov::new(total, repr);
    Ok(ProcessNoiseCov::new(0.5 * (out.matrix + out.matrix.transpose()), repr))
}

fn check_nodes(nodes: &[f64]) -> Result<()> {
    if nodes.len() < 2 || nodes[0] != 0.0 || nodes.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(SncError::InvalidInput("nodes must start at 0 and increase strictly".into()));
    }
    Ok(())
}

/// Equinoctial-element Q over [0, nodes.last()] from the short-interval model
/// on each subinterval mapped with the two-body element STM.
pub fn q_equinoctial_subintervals(
    eq: &EquinoctialState,
    psd: &Psd3,
    nodes: &[f64],
    mu: GravParam,
) -> Result<ProcessNoiseCov> {
    check_nodes(nodes)?;
    let dt = *nodes.last().unwrap();
    let n = eq.mean_motion(mu);
    let segments = nodes
        .windows(2)
        .map(|w| {
            let start = propagate_two_body(eq, w[0], mu);
            let q = q_equinoctial_small_dt(&start, psd, w[1] - w[0], mu)?;
            Ok((equinoctial_stm(eq.a, n, dt - w[1]), q))
        })
        .collect::<Result<Vec<_>>>()?;
    q_subinterval_compose(&segments)
}

/// Inertial Cartesian Q from the kinematic model on each subinterval, with the
/// RTN frame fixed at each subinterval start, mapped with the two-body STM.
pub fn q_cartesian_subintervals(
    chief: &InertialState,
    psd: &Psd3,
    nodes: &[f64],
    mu: GravParam,
) -> Result<ProcessNoiseCov> {
    check_nodes(nodes)?;
    let dt = *nodes.last().unwrap();
    let eq = cartesian_to_equinoctial(chief, mu)?;
    let qtilde = psd.matrix();
    let segments = nodes
        .windows(2)
        .map(|w| {
            let start = equinoctial_to_cartesian(&propagate_two_body(&eq, w[0], mu), mu)?;
            let q = q_kinematic_rtn(&start, &qtilde, w[1] - w[0])?;
            let remaining = dt - w[1];
            let phi = if remaining == 0.0 {
                Matrix6::identity()
            } else {
                cartesian_two_body_stm_from_elements(&propagate_two_body(&eq, w[1], mu), remaining, mu)?
            };
            Ok((phi, q))
        })
        .collect::<Result<Vec<_>>>()?;
    q_subinterval_compose(&segments)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::absolute::{q_hcw_curvilinear, Representation};
    use crate::stm::hcw_stm;

    #[test]
    fn nodes_even_and_geometric() {
        let even = subinterval_nodes(8.0, 4, NodeSpacing::Even).unwrap();
        assert_eq!(even, vec![0.0, 2.0, 4.0, 6.0, 8.0]);
        let geo = subinterval_nodes(7.0, 3, NodeSpacing::Geometric { ratio: 2.0 }).unwrap();
        assert_eq!(geo, vec![0.0, 1.0, 3.0, 7.0]);
        assert!(subinterval_nodes(1.0, 0, NodeSpacing::Even).is_err());
    }

    #[test]
    fn single_identity_segment_is_unchanged() {
        let q = q_hcw_curvilinear(&Psd3::isotropic(1e-9).unwrap(), 1e-3, 500.0).unwrap();
        let c = q_subinterval_compose(&[(Matrix6::identity(), q)]).unwrap();
        assert_eq!(c.matrix, q.matrix);
        assert!(q_subinterval_compose(&[]).is_err());
    }

    #[test]
    fn hcw_semigroup_exactness() {
        let psd = Psd3::new(1e-9, 2e-9, 3e-9).unwrap();
        let (n, dt) = (1.1e-3, 3000.0);
        let whole = q_hcw_curvilinear(&psd, n, dt).unwrap();
        let nodes = [0.0, 1100.0, dt];
        let segs: Vec<_> = nodes
            .windows(2)
            .map(|w| (hcw_stm(n, dt - w[1]), q_hcw_curvilinear(&psd, n, w[1] - w[0]).unwrap()))
            .collect();
        let c = q_subinterval_compose(&segs).unwrap();
        assert!((c.matrix - whole.matrix).norm() < 1e-10 * whole.matrix.norm());
    }

    #[test]
    fn mixed_representations_rejected() {
        let a = ProcessNoiseCov::zeros(Representation::Equinoctial);
        let b = ProcessNoiseCov::zeros(Representation::Curvilinear);
        assert!(q_subinterval_compose(&[(Matrix6::identity(), a), (Matrix6::identity(), b)]).is_err());
    }
}
