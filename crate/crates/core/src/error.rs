use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at byte {offset}: expected {}", expected.join(" | "))]
    Syntax {
        offset: usize,
        expected: Vec<String>,
    },

    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },

    /// An expression node or a numeric routine was evaluated outside its domain.
    #[error("domain error in `{what}` at {x}")]
    Domain { what: String, x: f64 },

    #[error("overflow: exponent {exponent} exceeds the double-precision range")]
    Overflow { exponent: f64 },

    #[error("|f'''({x})| = {value} is not a positive finite number")]
    NonPositiveThirdDerivative { x: f64, value: f64 },

    #[error("invalid interval [{a}, {b}]: need finite a < b")]
    BadInterval { a: f64, b: f64 },

    #[error("invalid division: {0}")]
    BadDivision(String),

    #[error("reference integrator did not converge after {evaluations} evaluations (estimate {estimate})")]
    NonConvergence { evaluations: usize, estimate: f64 },

    #[error("tolerance {tol} unreachable: best certified bound {best_bound} at n = {n}")]
    ToleranceUnreachable { tol: f64, best_bound: f64, n: usize },

    #[error("function is not convex: f''({x}) = {second_derivative}")]
    NotConvex { x: f64, second_derivative: f64 },
}

impl Error {
    pub(crate) fn domain(what: impl Into<String>, x: f64) -> Self {
        Error::Domain {
            what: what.into(),
            x,
        }
    }
}
