//! Nonlocal mean-field dynamics on the Heisenberg group H¹ and on SE(2), and
//! validation of their zero level sets against horizontal mean curvature flow.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod engine;
pub mod error;
pub mod geometry;
pub mod kernel;
pub mod profile;
pub mod se2;
pub mod validation;

pub use error::{Error, Result};
