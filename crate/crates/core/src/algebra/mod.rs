//! Exact scalar, polynomial, rational-function and truncated-power-series
//! arithmetic. Everything downstream builds on this layer; all values are
//! immutable once constructed.

pub mod field;
pub mod gcd;
pub mod poly;
pub mod ratfunc;
pub mod scalar;
pub mod series;
pub mod textform;
pub mod unipoly;

pub use field::{Field, FieldDesc};
pub use gcd::{poly_gcd, resultant_y};
pub use poly::{BivarPoly, Exp, Poly, TrivarPoly};
pub use ratfunc::RationalFunc;
pub use scalar::Scalar;
pub use series::{eval_bivar_at_series, TruncatedSeries};
pub use textform::{parse_bivar, parse_trivar};
pub use unipoly::{RootReport, UniPoly};

/// Default series truncation order for a degree-D curve: D^2 + 2, enough for
/// every branch-comparison argument the counting pipelines make. Callers may
/// raise it.
pub fn default_truncation(degree: u32) -> u32 {
    degree * degree + 2
}
