//! Meromorphic solutions of
//!
//! ```text
//! c0 u''' + 6 u^4 + c1 u'' + c2 u u' + c4 u' + c5 u^2 + c6 u + c7 = 0
//! ```
//!
//! The pipeline runs exact Laurent expansion at movable poles over Q(w),
//! checks the residue-sum conditions for elliptic solutions, fits first-order
//! subequations of degree 1 to 3, classifies the coefficient tuple into the
//! known solution families and builds and numerically verifies the closed
//! forms.

pub mod cli;
pub mod cyclofield;
pub mod error;
pub mod laurent;
pub mod poly;
pub mod residues;
pub mod solutions;
pub mod subeq;

pub use cyclofield::{CycloNumber, Rational};
pub use error::{Error, ParseError, Result};
pub use laurent::{LaurentSeries, OdeInstance};
