//! Parabolic implosion numerics for one-parameter holomorphic families.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod contour;
mod error;
pub mod family;
pub mod fatou;
pub mod fixed_points;
pub mod param_ray;
pub mod rays;

pub use error::{Error, Result};
pub use num_complex::Complex64;
