//! Laurent-series engine and the singularity analysis of the ODE at a
//! movable simple pole.

mod instance;
mod series;
mod singularity;

pub use instance::OdeInstance;
pub use series::LaurentSeries;
pub use singularity::{
    check_fuchs_indices, dominant_monomials, expand_branches, expand_laurent, indicial_polynomial, ode_residual,
    FuchsReport, Monomial, DEFAULT_DEPTH,
};
