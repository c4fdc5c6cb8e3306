//! Stability, commuting series, the Lubin logarithm and the two criteria.

mod commute;
mod criteria;
mod lubin;
mod rootbound;
mod stability;
mod system;

pub use commute::{check_commute, solve_commuting, CommuteReport, CommutingSolution};
pub use criteria::{
    corollary_a_normalize, criterion_a, criterion_b, normalization_exponent, wideg_shape_check,
    CriterionA, CriterionB, CriterionBDiagnosis, WidegShape,
};
pub use lubin::{
    log_derivative_integral_check, lubin_log, lubin_log_limit, lubin_log_recursion,
    IntegralityCheck, LubinLog,
};
pub use rootbound::{newton_root_bound_check, RootBoundCheck};
pub use stability::{is_stable, multiplier_stability, Stability, UnstableReason};
pub use system::DynamicalSystem;
