//! Bounds on quantum state transfer under unitary, mixed-unitary and Markovian
//! channels, minimal mixed-unitary experiment designs, and simulations of NMR
//! pseudopure-state preparation on small spin systems.
//!
//! States are carried as traceless deviations in units of the polarization
//! scale ε, which is kept symbolic (ε = 1).

// `!(x > 0.0)` is used deliberately so NaN is rejected along with non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod channels;
pub mod error;
pub mod expr;
pub mod lindblad;
pub mod linalg;
pub mod optimize;
pub mod permutodesign;
pub mod protocols;
pub mod spinops;

pub use error::{Error, Result};
pub use spinops::{HermitianOperator, SpinSystem};
