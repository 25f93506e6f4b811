//! Process noise covariance models for spacecraft orbit estimation.
//!
//! Unmodeled accelerations are treated as white noise with a power spectral
//! density given in the RTN frame. The crate provides closed-form discrete
//! covariances for Cartesian, curvilinear and equinoctial states, absolute
//! and relative, together with numerical reference solutions and the sweep
//! harness that measures model error against them.
//!
//! All quantities are SI (m, s, rad).

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod absolute;
pub mod error;
pub mod harness;
pub mod orbit;
pub mod oracle;
pub mod relative;
pub mod stm;

pub use error::{Result, SncError};

pub type Matrix6 = nalgebra::Matrix6<f64>;
pub type Matrix3 = nalgebra::Matrix3<f64>;
pub type Matrix6x3 = nalgebra::SMatrix<f64, 6, 3>;
pub type Vector3 = nalgebra::Vector3<f64>;
pub type Vector6 = nalgebra::Vector6<f64>;
