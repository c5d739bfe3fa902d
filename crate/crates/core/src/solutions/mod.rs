//! Classification into the solution families, closed-form construction and
//! numeric verification.

mod closed_form;
mod families;
mod jet;
mod poles;
mod verify;
mod weierstrass;

pub use closed_form::{
    build_closed_form, closed_form_candidates, e0_cubic, eval_closed_form, BuildOptions, BuiltSolution, Candidate, ClosedForm,
    Param, Pole, RejectedCandidate, S2aChain,
};
pub use families::*;
pub use jet::Jet;
pub use poles::{contour_residue, find_poles, nearest_residues, PoleResidue};
pub use verify::{relative_ode_residual, sample_points, verify_numeric, VerificationReport, VerifyConfig};
pub use weierstrass::{wp_eval, Weierstrass, WP_TERMS};
