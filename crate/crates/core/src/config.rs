//! Cost configurations: nonnegative extra cost (penalty fees) per edge.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::graph::{EdgeId, TaskGraph};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("extra cost on {edge} must be nonnegative, got {value}")]
    Negative { edge: EdgeId, value: Rational },
    #[error("extra cost assigned to {edge}, which is not an edge of the graph")]
    UnknownEdge { edge: EdgeId },
}

/// Map from edges to extra cost. Zero entries are never stored, so the
/// trivial configuration is the empty map and equality is semantic.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CostConfiguration {
    extra: BTreeMap<EdgeId, Rational>,
}

impl CostConfiguration {
    /// The trivial configuration that charges nothing.
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn set(&mut self, edge: EdgeId, value: Rational) -> Result<(), ConfigError> {
        if value.is_negative() {
            return Err(ConfigError::Negative { edge, value });
        }
        if value.is_zero() {
            self.extra.remove(&edge);
        } else {
            self.extra.insert(edge, value);
        }
        Ok(())
    }

    /// Builds a configuration from a dense per-edge vector.
    pub fn from_dense(values: &[Rational]) -> Result<Self, ConfigError> {
        let mut config = Self::zero();
        for (i, v) in values.iter().enumerate() {
            config.set(EdgeId(i), v.clone())?;
        }
        Ok(config)
    }

    /// Extra cost of `edge`, zero when unset.
    pub fn get(&self, edge: EdgeId) -> Rational {
        self.extra
            .get(&edge)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn is_trivial(&self) -> bool {
        self.extra.is_empty()
    }

    /// Number of edges carrying positive extra cost.
    pub fn len(&self) -> usize {
        self.extra.len()
    }

    pub fn is_empty(&self) -> bool {
        self.extra.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (EdgeId, &Rational)> {
        self.extra.iter().map(|(e, v)| (*e, v))
    }

    /// Checks that every configured edge exists in `graph`.
    pub fn check(&self, graph: &TaskGraph) -> Result<(), ConfigError> {
        match self.extra.keys().find(|e| e.0 >= graph.edge_count()) {
            Some(&edge) => Err(ConfigError::UnknownEdge { edge }),
            None => Ok(()),
        }
    }

    /// `c(e) + c̃(e)`.
    pub fn effective_cost(&self, graph: &TaskGraph, edge: EdgeId) -> Rational {
        let base = &graph.edge(edge).cost;
        match self.extra.get(&edge) {
            Some(x) => base + x,
            None => base.clone(),
        }
    }

    /// Dense vector of effective edge costs.
    pub fn effective_costs(&self, graph: &TaskGraph) -> Vec<Rational> {
        graph
            .edge_ids()
            .map(|e| self.effective_cost(graph, e))
            .collect()
    }

    /// True when every extra cost here is at least the one in `other`.
    pub fn dominates(&self, other: &CostConfiguration) -> bool {
        other.iter().all(|(e, v)| &self.get(e) >= v)
    }
}
