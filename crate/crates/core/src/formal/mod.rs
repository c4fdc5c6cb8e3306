//! Formal group laws attached to a logarithm and their endomorphisms.

mod law;
mod ops;

pub use law::{
    build_group_law, factorial_bound_check, factorial_valuation, group_law_from_bivariate,
    integrality_report, Certification, FactorialBound, GroupLaw, IntegralityReport,
};
pub use ops::{
    check_group_axioms, endomorphism, is_endomorphism, one_unit_power, padic_iterate,
    un_commuter_check, AxiomCheck, AxiomReport, EndomorphismCheck, UnCommuter,
};
