//! Trigonometric integrals over the propagation interval.
//!
//! Written in cancellation-free form (half-angle identities and a series for
//! y − sin y) so that short intervals keep full relative precision.

use serde::{Deserialize, Serialize};

/// y − sin y without cancellation for small y.
pub(crate) fn y_minus_sin(y: f64) -> f64 {
    if y.abs() >= 0.5 {
        return y - y.sin();
    }
    let y2 = y * y;
    let mut term = y * y2 / 6.0;
    let mut sum = term;
    let mut k = 3.0;
    loop {
        term *= -y2 / ((k + 1.0) * (k + 2.0));
        sum += term;
        k += 2.0;
        if term.abs() <= 1e-18 * sum.abs() {
            return sum;
        }
    }
}

/// Combinations of the HCW integrals that cancel to leading order for small nΔt.
#[derive(Debug, Clone, Copy)]
pub(crate) struct HcwAux {
    /// ∫ (1 − cos)² = Δt + ζcc − 2ζc
    pub a1: f64,
    /// ∫ sin·(1 − cos) = ζs − ζcs
    pub b1: f64,
    /// ∫ (t_k − τ)(1 − cos) = Δt²/2 − ζtc
    pub c1: f64,
    /// ∫ (1 − cos) = Δt − ζc
    pub d1: f64,
}

pub(crate) fn hcw_aux(n: f64, dt: f64) -> HcwAux {
    let x = n * dt;
    let x2 = x * x;
    let sh = (0.5 * x).sin();
    let (a1, c1) = if x.abs() < 1.0 {
        // Σ_{m≥2} (−1)^m (2^{2m−1} − 2) x^{2m+1}/(2m+1)!
        let mut p = x2 * x2 * x / 120.0;
        let mut pow2 = 8.0;
        let mut sign = 1.0;
        let mut a = 0.0;
        // Σ_{m≥2} (−1)^m (2m − 1) x^{2m}/(2m)!
        let mut q = x2 * x2 / 24.0;
        let mut c = 0.0;
        for m in 2..40 {
            let ta = sign * (pow2 - 2.0) * p;
            let tc = sign * (2 * m - 1) as f64 * q;
            a += ta;
            c += tc;
            if ta.abs() <= 1e-18 * a.abs() && tc.abs() <= 1e-18 * c.abs() {
                break;
            }
            let mf = m as f64;
            p *= x2 / ((2.0 * mf + 2.0) * (2.0 * mf + 3.0));
            q *= x2 / ((2.0 * mf + 1.0) * (2.0 * mf + 2.0));
            pow2 *= 4.0;
            sign = -sign;
        }
        (a, c)
    } else {
        (1.5 * x - 2.0 * x.sin() + 0.25 * (2.0 * x).sin(), 0.5 * x2 - x * x.sin() + 2.0 * sh * sh)
    };
    HcwAux {
        a1: a1 / n,
        b1: 2.0 * sh.powi(4) / n,
        c1: c1 / (n * n),
        d1: y_minus_sin(x) / n,
    }
}

/// Integrals of the HCW kernels over τ ∈ [t_{k−1}, t_k] with argument n(t_k − τ).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZetaSet {
    /// ∫ cos
    pub zc: f64,
    /// ∫ sin
    pub zs: f64,
    /// ∫ cos²
    pub zcc: f64,
    /// ∫ sin²
    pub zss: f64,
    /// ∫ cos·sin
    pub zcs: f64,
    /// ∫ (t_k − τ) cos
    pub ztc: f64,
    /// ∫ (t_k − τ) sin
    pub zts: f64,
}

pub fn zeta_integrals(n: f64, dt: f64) -> ZetaSet {
    let x = n * dt;
    let s = x.sin();
    let sh = (0.5 * x).sin();
    let one_minus_cos = 2.0 * sh * sh;
    let xms = y_minus_sin(x);
    ZetaSet {
        zc: s / n,
        zs: one_minus_cos / n,
        zcc: (2.0 * x + (2.0 * x).sin()) / (4.0 * n),
        zss: y_minus_sin(2.0 * x) / (4.0 * n),
        zcs: s * s / (2.0 * n),
        ztc: (x * s - one_minus_cos) / (n * n),
        zts: (x * one_minus_cos - xms) / (n * n),
    }
}

/// Integrals of cos l, sin l over the interval with l(τ) = l_{k−1} + n̄(τ − t_{k−1}).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZetaBarSet {
    pub zc: f64,
    pub zs: f64,
    pub zcc: f64,
    pub zss: f64,
    pub zcs: f64,
    /// ∫ (t_k − τ) cos l
    pub ztc: f64,
    /// ∫ (t_k − τ) sin l
    pub zts: f64,
}

pub fn zeta_bar_integrals(l_start: f64, nbar: f64, dt: f64) -> ZetaBarSet {
    let x = nbar * dt;
    let lm = l_start + 0.5 * x;
    let sh = (0.5 * x).sin();
    let sx = x.sin();
    let (slm, clm) = lm.sin_cos();
    let (s0, c0) = l_start.sin_cos();
    let xms = y_minus_sin(x);
    let n2 = nbar * nbar;
    ZetaBarSet {
        zc: 2.0 * clm * sh / nbar,
        zs: 2.0 * slm * sh / nbar,
        zcc: (xms + 2.0 * clm * clm * sx) / (2.0 * nbar),
        zss: (xms + 2.0 * slm * slm * sx) / (2.0 * nbar),
        zcs: (2.0 * lm).sin() * sx / (2.0 * nbar),
        ztc: -(s0 * xms - 2.0 * c0 * sh * sh) / n2,
        zts: (c0 * xms + 2.0 * s0 * sh * sh) / n2,
    }
}
