//! Certified midpoint-rule quadrature for integrands whose third derivative
//! has log-convex absolute value.
//!
//! - [`expr`] parses one-variable expressions and evaluates them with their
//!   first three derivatives through order-3 Taylor [`jet`]s.
//! - [`bounds`] evaluates the single-interval error bounds and picks the
//!   smallest.
//! - [`quadrature`] builds composite midpoint and corrected-midpoint sums,
//!   aggregates certified bounds, and provides the reference integrator.
//! - [`analysis`] samples the log-convexity hypothesis and ships a catalog
//!   of test integrands.

pub mod analysis;
pub mod bounds;
pub mod error;
pub mod expr;
pub mod jet;
pub mod quadrature;

pub use bounds::{BoundKind, BoundReport, DerivEndpoints, QGrid, RatioPair};
pub use error::{Error, Result};
pub use expr::{parse, Expr};
pub use jet::Jet3;
pub use quadrature::{CertifyOutcome, Division, Method, QuadResult};
