use crate::{Result, SncError};
use nalgebra::{SMatrix, SVector};

/// Per-component central-difference steps, max(1e-6·|x_i|, 1e-4).
pub fn default_fd_steps<const N: usize>(x: &SVector<f64, N>) -> SVector<f64, N> {
    x.map(|v| (1e-6 * v.abs()).max(1e-4))
}

/// Central-difference Jacobian of `map` at `x`.
pub fn finite_difference_jacobian<const N: usize, const M: usize, F>(
    map: F,
    x: &SVector<f64, N>,
    steps: &SVector<f64, N>,
) -> Result<SMatrix<f64, M, N>>
where
    F: Fn(&SVector<f64, N>) -> Result<SVector<f64, M>>,
{
    let mut jac = SMatrix::<f64, M, N>::zeros();
    for j in 0..N {
        let h = steps[j];
        if !(h > 0.0) || !h.is_finite() {
            return Err(SncError::FiniteDifference(format!("step {j} is {h}")));
        }
        let mut xp = *x;
        let mut xm = *x;
        xp[j] += h;
        xm[j] -= h;
        let d = (map(&xp)? - map(&xm)?) / (xp[j] - xm[j]);
        if !d.iter().all(|v| v.is_finite()) {
            return Err(SncError::FiniteDifference(format!("non-finite output perturbing component {j}")));
        }
        jac.set_column(j, &d);
    }
    Ok(jac)
}
