//! Exhaustive verification of the digital-sum inequalities and of the
//! approximate-convexity inequalities they imply for `h_b`.

mod report;
pub mod sharpness;
pub mod slack;
mod sweep;

pub use report::{Counterexample, MinSlack, VerificationReport};
pub use sharpness::{sharpness_closed_form, sharpness_deficit, sharpness_ratio};
pub use slack::{
    approx_convexity_h_slack, general_bound_slack, lev_slack, superadditivity_slack, ternary_slack,
    times_b_average_slack, times_b_slack,
};
pub use sweep::{sweep, SweepOptions, SweepSpec, TheoremId, DEFAULT_WITNESS_CAP};
