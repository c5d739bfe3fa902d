//! First-order subequations `F(u, u') = 0` of degree 1 to 3 fitted to the
//! Laurent branches of the ODE.

mod branches;
mod fit;
pub mod linsolve;
mod polynomial;

pub use branches::{distinct_series_count, leading_balance, riccati_factor};
pub use fit::{
    candidate_template, default_branches, fit_depth, fit_subequation, template_for, FitReport, FitStatus, Template,
    Unknown, DEFAULT_EXTRA_ORDERS,
};
pub use polynomial::{Subequation, Term};

use crate::error::Result;
use crate::laurent::LaurentSeries;

/// `F(u, u')` along a truncated series.
pub fn subeq_residual(s: &Subequation, u: &LaurentSeries) -> Result<LaurentSeries> {
    s.residual(u)
}
