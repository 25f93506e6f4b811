use crate::orbit::{true_longitude, EquinoctialState, GravParam};
use crate::{Matrix6x3, Result, SncError};

/// Gauss variational equations in equinoctial elements: ∂ẋ_E/∂(RTN acceleration).
///
/// Rows (a, f, g, h, k, λ), columns (radial, transverse, normal).
pub fn gve_gamma(eq: &EquinoctialState, mu: GravParam) -> Result<Matrix6x3> {
    gve_gamma_at(eq, true_longitude(eq, mu)?, mu)
}

/// As [`gve_gamma`] with the true longitude supplied by the caller.
pub fn gve_gamma_at(eq: &EquinoctialState, l: f64, mu: GravParam) -> Result<Matrix6x3> {
    let mu = mu.value();
    let EquinoctialState { a, f, g, h, k, .. } = *eq;
    let (sl, cl) = l.sin_cos();
    let e2 = f * f + g * g;
    let p = a * (1.0 - e2);
    let ang = (mu * p).sqrt();
    let s = (p / mu).sqrt();
    let w = 1.0 + f * cl + g * sl;
    if !(w > 0.0) {
        return Err(SncError::Degenerate(format!("W = {w} must be positive")));
    }
    let eta = (1.0 - e2).sqrt();
    let s2 = 1.0 + h * h + k * k;

    let a_bar = 2.0 * a * a * (f * sl - g * cl) / ang;
    let b_bar = 2.0 * a * a * w / ang;
    let c_bar = s * sl;
    let d_bar = s * (f + (1.0 + w) * cl) / w;
    let e_bar = s * g * (k * cl - h * sl) / w;
    let f_bar = -s * cl;
    let g_bar = s * (g + (1.0 + w) * sl) / w;
    let h_bar = s * f * (h * sl - k * cl) / w;
    let i_bar = s * s2 * cl / (2.0 * w);
    let j_bar = s * s2 * sl / (2.0 * w);
    let k_bar = -s * ((w - 1.0) / (1.0 + eta) + 2.0 * eta / w);
    let l_bar = -ang * (1.0 + w) * (g * cl - f * sl) / (mu * w * (1.0 + eta));
    let m_bar = -ang * (k * cl - h * sl) / (mu * w);

    #[rustfmt::skip]
    let gamma = Matrix6x3::new(
        a_bar, b_bar, 0.0,
        c_bar, d_bar, e_bar,
        f_bar, g_bar, h_bar,
        0.0,   0.0,   i_bar,
        0.0,   0.0,   j_bar,
        k_bar, l_bar, m_bar,
    );
    Ok(gamma)
}
