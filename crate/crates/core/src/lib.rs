//! Present-biased agents on task graphs.
//!
//! A task graph is a DAG whose edges carry nonnegative rational costs. A
//! present-biased agent with bias `β` walks from `s` to `t`, at every step
//! discounting all future cost by `β`, and gives up as soon as the
//! remaining perceived cost exceeds the discounted reward. This crate
//! simulates such agents exactly and designs penalty fees that keep them on
//! track.

#![allow(clippy::result_large_err, clippy::needless_range_loop)]

pub mod agent;
pub mod cli;
pub mod config;
pub mod devices;
pub mod graph;
pub mod instances;
pub mod io;
pub mod perceived;
pub mod rational;
pub mod reductions;

pub use agent::{is_motivating, min_motivating_reward, AgentView, WalkReport};
pub use config::CostConfiguration;
pub use graph::{EdgeId, GraphBuilder, NodeId, TaskGraph};
pub use rational::{Bias, Rational};
