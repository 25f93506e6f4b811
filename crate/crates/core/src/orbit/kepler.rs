use super::{wrap_two_pi, EquinoctialState, GravParam};
use crate::{Result, SncError};

pub const KEPLER_TOL: f64 = 1e-12;
pub const KEPLER_MAX_ITER: usize = 25;

/// Solves M = E − e·sin E for the eccentric anomaly by Newton iteration from E = M.
///
/// M is not wrapped, so a continuous M gives a continuous E.
pub fn solve_kepler(m: f64, e: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&e) {
        return Err(SncError::NotElliptic { energy: f64::NAN });
    }
    let mut ecc = m;
    for it in 1..=KEPLER_MAX_ITER {
        let (s, c) = ecc.sin_cos();
        let step = (ecc - e * s - m) / (1.0 - e * c);
        ecc -= step;
        if step.abs() < KEPLER_TOL {
            return Ok(ecc);
        }
        if it == KEPLER_MAX_ITER {
            return Err(SncError::KeplerNonConvergence { iterations: it, residual: step.abs() });
        }
    }
    unreachable!()
}

/// ν − E as a bounded continuous function of E.
fn true_minus_eccentric(ecc: f64, e: f64) -> f64 {
    let beta = e / (1.0 + (1.0 - e * e).sqrt());
    let (s, c) = ecc.sin_cos();
    2.0 * (beta * s).atan2(1.0 - beta * c)
}

pub(crate) fn true_anomaly_from_eccentric(ecc: f64, e: f64) -> f64 {
    ecc + true_minus_eccentric(ecc, e)
}

/// Two-body propagation: only λ advances, by n·dt.
pub fn propagate_two_body(eq: &EquinoctialState, dt: f64, mu: GravParam) -> EquinoctialState {
    EquinoctialState {
        lambda: wrap_two_pi(eq.lambda + eq.mean_motion(mu) * dt),
        epoch: eq.epoch + dt,
        ..*eq
    }
}

/// True longitude l = ν + ω + Ω in [0, 2π).
pub fn true_longitude(eq: &EquinoctialState, _mu: GravParam) -> Result<f64> {
    if eq.f == 0.0 && eq.g == 0.0 {
        return Ok(wrap_two_pi(eq.lambda));
    }
    let e = eq.eccentricity();
    let lon_peri = eq.g.atan2(eq.f);
    let ecc = solve_kepler(wrap_two_pi(eq.lambda - lon_peri), e)?;
    Ok(wrap_two_pi(lon_peri + true_anomaly_from_eccentric(ecc, e)))
}

/// Unwrapped change of true longitude over a two-body arc of length dt.
pub fn true_longitude_advance(eq: &EquinoctialState, dt: f64, mu: GravParam) -> Result<f64> {
    let e = eq.eccentricity();
    let lon_peri = if e == 0.0 { 0.0 } else { eq.g.atan2(eq.f) };
    let m0 = wrap_two_pi(eq.lambda - lon_peri);
    let m1 = m0 + eq.mean_motion(mu) * dt;
    let e0 = solve_kepler(m0, e)?;
    let e1 = solve_kepler(m1, e)?;
    Ok(true_anomaly_from_eccentric(e1, e) - true_anomaly_from_eccentric(e0, e))
}

/// Average angular rate Δθ/Δt for unwrapped angles.
pub fn average_angular_rate(theta_start: f64, theta_end: f64, dt: f64) -> Result<f64> {
    if !(dt > 0.0) {
        return Err(SncError::InvalidInput(format!("interval must be positive, got {dt}")));
    }
    Ok((theta_end - theta_start) / dt)
}
