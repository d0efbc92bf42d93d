//! curvetan-core: an exact-arithmetic workbench for tangencies and
//! orthogonalities of algebraic plane curve arrangements.
//!
//! The crate enumerates directed points of tangency and orthogonality over
//! the rationals, prime fields and small binary extension fields, computes
//! the branch series and jet calculus behind them, builds the space-curve
//! encodings where tangency becomes incidence, and fits minimal vanishing
//! polynomials over sampled space points. Every computation except the
//! log-log exponent fit is exact.

pub mod algebra;
pub mod error;
pub mod rng;

pub mod curves;
pub mod intersect;
pub mod jets;
pub mod lift;
pub mod linalg;

pub mod counting;
pub mod families;
pub mod oracle;
pub mod polymethod;

pub mod doc;

pub use error::{Error, Result};
