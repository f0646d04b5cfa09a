//! Commitment devices: penalty fences along a path, the 2-approximation,
//! the exact infimum over paths, and prohibition (edge deletion) for
//! comparison.

mod fence;
mod minmax;
mod path;
mod search;
mod subgraph;

pub use fence::{fence_margin, fence_required_reward, path_and_fence};
pub use minmax::{
    minmax_path, minmax_path_approx, prefix_bottlenecks, successor_map, ApproxResult, SuccessorMap,
};
pub use path::Path;
pub use search::{
    exact_infimum, exact_infimum_with, InfimumResult, SearchOptions, DEFAULT_PATH_BUDGET,
};
pub use subgraph::{
    brute_subgraph_opt, compare_devices, emulate_subgraph, Comparison, SubgraphOptimum,
    DEFAULT_EDGE_BUDGET,
};

use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DeviceError {
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("epsilon must be positive, got {0}")]
    NonPositiveEpsilon(Rational),
    #[error("the kept edges do not connect source to target")]
    Disconnected,
    #[error("{edges} optional edges exceed the budget of {budget}")]
    BudgetExceeded { edges: usize, budget: usize },
    #[error("internal verification failed: {0}")]
    InternalVerificationFailed(String),
}
