use thiserror::Error;

/// Errors surfaced by the workbench. The CLI maps these onto exit codes:
/// validation/precondition failures (2), scan-bound overruns (3), and
/// internal invariant breaches (4).
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),

    #[error("division by zero in {0}")]
    DivisionByZero(String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("unsupported field parameter: {0}")]
    UnsupportedField(String),

    #[error("series is not a unit (zero constant term)")]
    NonUnitSeries,

    #[error("zero polynomial not allowed here")]
    ZeroPolynomial,

    #[error("point ({0}, {1}) does not lie on the curve")]
    NotOnCurve(String, String),

    #[error("curve is singular at ({0}, {1})")]
    SingularPoint(String, String),

    #[error("vertical tangent at ({0}, {1})")]
    VerticalTangent(String, String),

    #[error("bad point of the lift at ({0}, {1}): {2}")]
    BadPoint(String, String, String),

    #[error("characteristic obstruction: {0}")]
    CharacteristicObstruction(String),

    #[error("{0}! vanishes in characteristic {1}")]
    FactorialVanishes(u32, u64),

    #[error("jet sequence degenerates on the curve: {0}")]
    DegenerateJets(String),

    #[error("defining polynomial is not square-free")]
    NotSquareFree,

    #[error("polynomial is reducible: {0}")]
    Reducible(String),

    #[error("scan bound exceeded: {0}")]
    ScanBound(String),

    #[error("truncation order {0} insufficient; raise it to at least {1}")]
    TruncationInsufficient(u32, u32),

    #[error("Bezout violation: branches of distinct irreducible curves agree past degree {0}")]
    BezoutViolation(u32),

    #[error("tangency monitor breach: sigma {sigma} exceeds {bound} for n = {n}, D = {d}")]
    MonitorBreach { sigma: u64, bound: u64, n: u64, d: u32 },

    #[error("duplicate curves in arrangement: indices {0} and {1}")]
    DuplicateCurves(usize, usize),

    #[error("not enough good points: wanted {wanted}, found {found}")]
    InsufficientGoodPoints { wanted: usize, found: usize },

    #[error("no vanishing polynomial up to degree {0}")]
    NoVanishingPoly(u32),

    #[error("retry budget exhausted after {0} attempts: {1}")]
    RetryExhausted(u32, String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("validation: {0}")]
    Validation(String),

    #[error("selftest failed: {0}")]
    SelftestFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Exit-code class for the CLI: 2 validation, 3 scan bound, 4 invariant breach.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::ScanBound(_) => 3,
            Error::MonitorBreach { .. } | Error::BezoutViolation(_) | Error::SelftestFailed(_) => 4,
            _ => 2,
        }
    }
}
