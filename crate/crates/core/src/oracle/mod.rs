//! Numerical reference solutions: fixed-step two-body integration, the
//! variational STM, Simpson quadrature of the process-noise integrals and
//! central finite differences.

mod fd;
mod integrate;
mod quadrature;

pub use fd::{default_fd_steps, finite_difference_jacobian};
pub use integrate::{integrate_two_body, propagate_with_stm, stm_numeric, two_body_acceleration};
pub use quadrature::{
    cross_q_numeric, cross_q_numeric_profile, q_numeric, q_numeric_profile, simpson,
};

use crate::{Result, SncError};
use serde::{Deserialize, Serialize};

/// Fixed-step RK4 settings for the reference propagation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    /// Maximum step, s.
    pub step: f64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig { step: 10.0 }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<()> {
        if self.step.is_finite() && self.step > 0.0 {
            Ok(())
        } else {
            Err(SncError::InvalidInput(format!("integrator step must be positive, got {}", self.step)))
        }
    }
}

/// Composite Simpson settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    /// Panel count per integration interval; even and at least 2.
    pub panels: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig { panels: 4096 }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if self.panels >= 2 && self.panels.is_multiple_of(2) {
            Ok(())
        } else {
            Err(SncError::InvalidInput(format!("panel count must be even and >= 2, got {}", self.panels)))
        }
    }
}
