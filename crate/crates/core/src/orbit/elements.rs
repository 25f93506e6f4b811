use super::kepler::{solve_kepler, true_anomaly_from_eccentric};
use super::{wrap_two_pi, ClassicalElements, EquinoctialState, GravParam, InertialState};
use crate::{Result, SncError, Vector3};
use std::f64::consts::PI;

const RETROGRADE_GUARD: f64 = 1e-9;

pub fn classical_to_equinoctial(ce: &ClassicalElements) -> Result<EquinoctialState> {
    if !(ce.e >= 0.0 && ce.e < 1.0) {
        return Err(SncError::Singular(format!("eccentricity {} outside [0, 1)", ce.e)));
    }
    if !(ce.a > 0.0) {
        return Err(SncError::InvalidInput(format!("semi-major axis {} must be positive", ce.a)));
    }
    if (ce.i - PI).abs() < RETROGRADE_GUARD || !(0.0..PI).contains(&ce.i) {
        return Err(SncError::Singular(format!("inclination {} rad at or beyond π", ce.i)));
    }
    let lon_peri = ce.argp + ce.raan;
    let ti = (0.5 * ce.i).tan();
    Ok(EquinoctialState {
        a: ce.a,
        f: ce.e * lon_peri.cos(),
        g: ce.e * lon_peri.sin(),
        h: ti * ce.raan.cos(),
        k: ti * ce.raan.sin(),
        lambda: wrap_two_pi(ce.mean_anomaly + lon_peri),
        epoch: 0.0,
    })
}

pub fn equinoctial_to_classical(eq: &EquinoctialState) -> ClassicalElements {
    let raan = wrap_two_pi(eq.k.atan2(eq.h));
    let lon_peri = eq.g.atan2(eq.f);
    ClassicalElements {
        a: eq.a,
        e: eq.eccentricity(),
        i: 2.0 * eq.h.hypot(eq.k).atan(),
        raan,
        argp: wrap_two_pi(lon_peri - raan),
        mean_anomaly: wrap_two_pi(eq.lambda - lon_peri),
    }
}

/// Unit vectors of the equinoctial reference frame (f̂, ĝ) in inertial axes.
pub(crate) fn equinoctial_basis(h: f64, k: f64) -> (Vector3, Vector3) {
    let s2 = 1.0 + h * h + k * k;
    let fhat = Vector3::new(1.0 + h * h - k * k, 2.0 * h * k, -2.0 * k) / s2;
    let ghat = Vector3::new(2.0 * h * k, 1.0 - h * h + k * k, 2.0 * h) / s2;
    (fhat, ghat)
}

/// Kepler solve on (e, ω+Ω, M), then position and velocity in the
/// equinoctial frame rotated to inertial axes.
pub fn equinoctial_to_cartesian(eq: &EquinoctialState, mu: GravParam) -> Result<InertialState> {
    eq.check()?;
    let e = eq.eccentricity();
    let lon_peri = eq.g.atan2(eq.f);
    let ecc = solve_kepler(wrap_two_pi(eq.lambda - lon_peri), e)?;
    let nu = true_anomaly_from_eccentric(ecc, e);
    let l = lon_peri + nu;
    let p = eq.semi_parameter();
    let rmag = p / (1.0 + e * nu.cos());
    let (fhat, ghat) = equinoctial_basis(eq.h, eq.k);
    let (sl, cl) = l.sin_cos();
    let vs = (mu.value() / p).sqrt();
    Ok(InertialState {
        r: rmag * (cl * fhat + sl * ghat),
        v: vs * (-(sl + eq.g) * fhat + (cl + eq.f) * ghat),
        epoch: eq.epoch,
    })
}

pub fn cartesian_to_equinoctial(st: &InertialState, mu: GravParam) -> Result<EquinoctialState> {
    st.check()?;
    let mu = mu.value();
    let rmag = st.r.norm();
    let energy = 0.5 * st.v.norm_squared() - mu / rmag;
    if !(energy < 0.0) {
        return Err(SncError::NotElliptic { energy });
    }
    let a = -mu / (2.0 * energy);
    let hvec = st.r.cross(&st.v);
    let w = hvec / hvec.norm();
    if 1.0 + w.z < RETROGRADE_GUARD {
        return Err(SncError::Singular("retrograde equatorial orbit".into()));
    }
    let k = w.x / (1.0 + w.z);
    let h = -w.y / (1.0 + w.z);
    let (fhat, ghat) = equinoctial_basis(h, k);
    let evec = st.v.cross(&hvec) / mu - st.r / rmag;
    let f = evec.dot(&fhat);
    let g = evec.dot(&ghat);
    let l = st.r.dot(&ghat).atan2(st.r.dot(&fhat));
    let e = f.hypot(g);
    if e >= 1.0 {
        return Err(SncError::NotElliptic { energy });
    }
    let lon_peri = g.atan2(f);
    let nu = l - lon_peri;
    let ecc = ((1.0 - e * e).sqrt() * nu.sin()).atan2(e + nu.cos());
    let m = ecc - e * ecc.sin();
    Ok(EquinoctialState { a, f, g, h, k, lambda: wrap_two_pi(m + lon_peri), epoch: st.epoch })
}
