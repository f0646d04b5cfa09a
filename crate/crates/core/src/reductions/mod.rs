//! Hardness instances built from 3-CNF formulas, and the translations
//! between truth assignments and cost configurations.

mod cnf;
mod dimacs;
mod mcc;

pub use cnf::{Assignment, Clause, CnfError, CnfFormula, Literal};
pub use dimacs::parse_dimacs;
pub use mcc::{
    assignment_to_config, config_to_assignment, epsilon_bound, gap_epsilon_bound, gap_ratio,
    gap_reward, sat_to_mcc, EdgeKind, NodeRole, ReductionError, ReductionMeta,
};
