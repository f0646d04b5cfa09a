//! 3-SAT to motivating cost configuration.
//!
//! For `x = 1 − β` the graph has a first part of literal nodes `v_{i,j}`
//! (one layer per clause) and a second part of variable nodes `w_{k,T}`,
//! `w_{k,F}` (one layer per variable), joined by the spine
//! `u_1 → u_2 … u_3 → u_4 → u_5 → t`. Forward edges cost `x³ − ε`. A
//! literal node has a shortcut of cost `x²` to the variable node of the
//! opposite truth value. `u_2` and every variable node have a shortcut to
//! `t` costing `2 − β`; the ones at variable nodes pass through a free
//! first edge and a private intermediate node.
//!
//! A motivating configuration for reward `1/β` exists iff the formula is
//! satisfiable. With the tighter `ε` bound, unsatisfiable formulas need a
//! reward above `(1 + β·x⁴)/β`.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use super::cnf::{Assignment, CnfFormula};
use crate::agent::AgentView;
use crate::config::CostConfiguration;
use crate::graph::{EdgeId, GraphBuilder, NodeId, TaskGraph};
use crate::rational::{Bias, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("bias must lie strictly between 0 and 1, got {0}")]
    BiasOutOfRange(Rational),
    #[error("epsilon {epsilon} must lie strictly between 0 and {bound}")]
    EpsilonTooLarge { epsilon: Rational, bound: Rational },
    #[error("assignment covers {got} variables, expected {expected}")]
    IncompleteAssignment { expected: usize, got: usize },
    #[error("the agent abandons before reaching the target")]
    NoWalk,
    #[error("the annotations do not describe this graph")]
    AnnotationMismatch,
}

/// What a node stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(into = "String")]
pub enum NodeRole {
    Source,
    Target,
    /// `v_{i,j}`: literal `j` of clause `i`, both from 1.
    Literal {
        clause: usize,
        position: usize,
    },
    /// `w_{k,y}`.
    Variable {
        var: usize,
        value: bool,
    },
    /// The node between `w_{k,y}` and `t` on its shortcut.
    Intermediate {
        var: usize,
        value: bool,
    },
    /// `u_1` to `u_5`.
    Spine(u8),
}

fn tf(b: bool) -> char {
    if b {
        'T'
    } else {
        'F'
    }
}

impl fmt::Display for NodeRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            NodeRole::Source => write!(f, "source"),
            NodeRole::Target => write!(f, "target"),
            NodeRole::Literal { clause, position } => write!(f, "literal({clause},{position})"),
            NodeRole::Variable { var, value } => write!(f, "variable({var},{})", tf(value)),
            NodeRole::Intermediate { var, value } => {
                write!(f, "intermediate({var},{})", tf(value))
            }
            NodeRole::Spine(i) => write!(f, "u{i}"),
        }
    }
}

impl From<NodeRole> for String {
    fn from(role: NodeRole) -> String {
        role.to_string()
    }
}

impl FromStr for NodeRole {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || format!("unknown node role `{s}`");
        match s {
            "source" => return Ok(NodeRole::Source),
            "target" => return Ok(NodeRole::Target),
            _ => {}
        }
        if let Some(i) = s.strip_prefix('u') {
            return match i.parse() {
                Ok(i @ 1..=5) => Ok(NodeRole::Spine(i)),
                _ => Err(bad()),
            };
        }
        let (name, args) = s
            .strip_suffix(')')
            .and_then(|rest| rest.split_once('('))
            .ok_or_else(bad)?;
        let (a, b) = args.split_once(',').ok_or_else(bad)?;
        let a: usize = a.parse().map_err(|_| bad())?;
        let value = match b {
            "T" => Some(true),
            "F" => Some(false),
            _ => None,
        };
        match (name, value) {
            ("literal", None) => Ok(NodeRole::Literal {
                clause: a,
                position: b.parse().map_err(|_| bad())?,
            }),
            ("variable", Some(value)) => Ok(NodeRole::Variable { var: a, value }),
            ("intermediate", Some(value)) => Ok(NodeRole::Intermediate { var: a, value }),
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EdgeKind {
    Forward,
    /// Literal node to variable node.
    Shortcut1,
    /// `u_2 → t`.
    Shortcut2,
    /// Variable node to its intermediate node (free).
    Shortcut3First,
    /// Intermediate node to `t`.
    Shortcut3Second,
    Spine,
}

impl EdgeKind {
    pub const ALL: [EdgeKind; 6] = [
        EdgeKind::Forward,
        EdgeKind::Shortcut1,
        EdgeKind::Shortcut2,
        EdgeKind::Shortcut3First,
        EdgeKind::Shortcut3Second,
        EdgeKind::Spine,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            EdgeKind::Forward => "forward",
            EdgeKind::Shortcut1 => "shortcut1",
            EdgeKind::Shortcut2 => "shortcut2",
            EdgeKind::Shortcut3First => "shortcut3-first",
            EdgeKind::Shortcut3Second => "shortcut3-second",
            EdgeKind::Spine => "spine",
        }
    }
}

impl fmt::Display for EdgeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EdgeKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        EdgeKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| format!("unknown edge kind `{s}`"))
    }
}

/// A reduction instance with its bookkeeping.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionMeta {
    pub formula: CnfFormula,
    pub graph: TaskGraph,
    pub beta: Bias,
    pub epsilon: Rational,
    pub gap: bool,
    /// `1/β`.
    pub reward: Rational,
    /// Indexed by node id.
    pub roles: Vec<NodeRole>,
    /// Indexed by edge id.
    pub edge_kinds: Vec<EdgeKind>,
}

impl ReductionMeta {
    pub fn role(&self, v: NodeId) -> NodeRole {
        self.roles[v.0]
    }

    pub fn kind(&self, e: EdgeId) -> EdgeKind {
        self.edge_kinds[e.0]
    }

    pub fn node_with_role(&self, role: NodeRole) -> Option<NodeId> {
        self.roles.iter().position(|r| *r == role).map(NodeId)
    }

    pub fn variable_node(&self, var: usize, value: bool) -> NodeId {
        self.node_with_role(NodeRole::Variable { var, value })
            .expect("variable in range")
    }

    /// Reward at which the agent is simulated when reading an assignment
    /// back: `1/β`, or `(1 + β·x⁴)/β` for the gap variant.
    pub fn simulation_reward(&self) -> Rational {
        if self.gap {
            gap_reward(&self.beta)
        } else {
            self.reward.clone()
        }
    }
}

fn pow(x: &Rational, k: u32) -> Rational {
    (0..k).fold(Rational::one(), |acc, _| acc * x)
}

/// Strict upper bound on `ε`:
/// `min{x², β·x³/(1+β), β·x²/(1+β)}`.
pub fn epsilon_bound(beta: &Bias) -> Rational {
    let b = beta.value();
    let x = beta.complement();
    let one_b = Rational::one() + b;
    [pow(&x, 2), b * pow(&x, 3) / &one_b, b * pow(&x, 2) / &one_b]
        .into_iter()
        .min()
        .expect("non-empty")
}

/// Strict upper bound on `ε` for the gap variant:
/// `min{β·x³, β·x²·(2−β), β²·x³/(1+β), β²·x²·(2−β)/(1+β)}`.
pub fn gap_epsilon_bound(beta: &Bias) -> Rational {
    let b = beta.value();
    let x = beta.complement();
    let one_b = Rational::one() + b;
    let two_b = Rational::from_integer(2.into()) - b;
    let b2 = b * b;
    [
        b * pow(&x, 3),
        b * pow(&x, 2) * &two_b,
        &b2 * pow(&x, 3) / &one_b,
        &b2 * pow(&x, 2) * &two_b / &one_b,
    ]
    .into_iter()
    .min()
    .expect("non-empty")
}

/// `1 + β·x⁴`, the factor separating yes and no instances of the gap
/// variant.
pub fn gap_ratio(beta: &Bias) -> Rational {
    Rational::one() + beta.value() * pow(&beta.complement(), 4)
}

/// `(1 + β·x⁴)/β`: no-instances of the gap variant need more than this.
pub fn gap_reward(beta: &Bias) -> Rational {
    beta.undiscount(&gap_ratio(beta))
}

pub fn sat_to_mcc(
    formula: &CnfFormula,
    beta: &Bias,
    epsilon: Option<Rational>,
    gap: bool,
) -> Result<ReductionMeta, ReductionError> {
    if beta.is_unbiased() {
        return Err(ReductionError::BiasOutOfRange(beta.value().clone()));
    }
    let bound = if gap {
        gap_epsilon_bound(beta)
    } else {
        epsilon_bound(beta)
    };
    let epsilon = match epsilon {
        Some(e) if !e.is_positive() || e >= bound => {
            return Err(ReductionError::EpsilonTooLarge { epsilon: e, bound })
        }
        Some(e) => e,
        None => bound / Rational::from_integer(2.into()),
    };

    let x = beta.complement();
    let forward = pow(&x, 3) - &epsilon;
    let short1 = pow(&x, 2);
    let long = Rational::from_integer(2.into()) - beta.value();
    let ell = formula.num_clauses();
    let m = formula.num_vars();

    let mut b = GraphBuilder::new();
    let mut roles = Vec::new();
    let mut node = |b: &mut GraphBuilder, label: String, role: NodeRole| {
        roles.push(role);
        b.add_node(label)
    };

    let s = node(&mut b, "s".into(), NodeRole::Source);
    let lits: Vec<[NodeId; 3]> = (1..=ell)
        .map(|i| {
            [1, 2, 3].map(|j| {
                node(
                    &mut b,
                    format!("v{i}_{j}"),
                    NodeRole::Literal {
                        clause: i,
                        position: j,
                    },
                )
            })
        })
        .collect();
    let u1 = node(&mut b, "u1".into(), NodeRole::Spine(1));
    let u2 = node(&mut b, "u2".into(), NodeRole::Spine(2));
    let vars: Vec<[NodeId; 2]> = (1..=m)
        .map(|k| {
            [true, false].map(|value| {
                node(
                    &mut b,
                    format!("w{k}_{}", tf(value)),
                    NodeRole::Variable { var: k, value },
                )
            })
        })
        .collect();
    let inter: Vec<[NodeId; 2]> = (1..=m)
        .map(|k| {
            [true, false].map(|value| {
                node(
                    &mut b,
                    format!("z{k}_{}", tf(value)),
                    NodeRole::Intermediate { var: k, value },
                )
            })
        })
        .collect();
    let u3 = node(&mut b, "u3".into(), NodeRole::Spine(3));
    let u4 = node(&mut b, "u4".into(), NodeRole::Spine(4));
    let u5 = node(&mut b, "u5".into(), NodeRole::Spine(5));
    let t = node(&mut b, "t".into(), NodeRole::Target);

    // Index 0 is T, index 1 is F.
    let var_node = |k: usize, value: bool| vars[k - 1][usize::from(!value)];

    let mut kinds = Vec::new();
    let mut edge = |b: &mut GraphBuilder, from, to, cost: &Rational, kind| {
        kinds.push(kind);
        b.add_edge(from, to, cost.clone());
    };

    // First part: s, literal layers, u1.
    let first_layer = lits.first().copied();
    match first_layer {
        Some(layer) => {
            for v in layer {
                edge(&mut b, s, v, &forward, EdgeKind::Forward);
            }
        }
        None => edge(&mut b, s, u1, &forward, EdgeKind::Forward),
    }
    for (i, layer) in lits.iter().enumerate() {
        for (j, &v) in layer.iter().enumerate() {
            match lits.get(i + 1) {
                Some(next) => {
                    for &w in next {
                        edge(&mut b, v, w, &forward, EdgeKind::Forward);
                    }
                }
                None => edge(&mut b, v, u1, &forward, EdgeKind::Forward),
            }
            let lit = formula.clauses()[i][j];
            // x_k leads to w_{k,F}, ¬x_k to w_{k,T}.
            edge(
                &mut b,
                v,
                var_node(lit.var, lit.negated),
                &short1,
                EdgeKind::Shortcut1,
            );
        }
    }
    edge(&mut b, u1, u2, &short1, EdgeKind::Spine);

    // Second part: u2, variable layers, u3.
    match vars.first() {
        Some(layer) => {
            for &w in layer {
                edge(&mut b, u2, w, &forward, EdgeKind::Forward);
            }
        }
        None => edge(&mut b, u2, u3, &forward, EdgeKind::Forward),
    }
    edge(&mut b, u2, t, &long, EdgeKind::Shortcut2);
    for (k, layer) in vars.iter().enumerate() {
        for (y, &w) in layer.iter().enumerate() {
            match vars.get(k + 1) {
                Some(next) => {
                    for &w2 in next {
                        edge(&mut b, w, w2, &forward, EdgeKind::Forward);
                    }
                }
                None => edge(&mut b, w, u3, &forward, EdgeKind::Forward),
            }
            let z = inter[k][y];
            edge(&mut b, w, z, &Rational::zero(), EdgeKind::Shortcut3First);
            edge(&mut b, z, t, &long, EdgeKind::Shortcut3Second);
        }
    }
    edge(&mut b, u3, u4, &short1, EdgeKind::Spine);
    edge(&mut b, u4, u5, &x, EdgeKind::Spine);
    edge(&mut b, u5, t, &Rational::one(), EdgeKind::Spine);

    let graph = b.build(s, t).expect("the construction is a valid DAG");
    Ok(ReductionMeta {
        formula: formula.clone(),
        reward: beta.undiscount(&Rational::one()),
        graph,
        beta: beta.clone(),
        epsilon,
        gap,
        roles,
        edge_kinds: kinds,
    })
}

/// Extra `x²` on the shortcut leaving `w_{k,τ(x_k)}` and extra `1` on every
/// forward edge into `w_{k,¬τ(x_k)}`.
pub fn assignment_to_config(
    meta: &ReductionMeta,
    tau: &Assignment,
) -> Result<CostConfiguration, ReductionError> {
    let m = meta.formula.num_vars();
    if tau.len() != m {
        return Err(ReductionError::IncompleteAssignment {
            expected: m,
            got: tau.len(),
        });
    }
    let g = &meta.graph;
    let short_toll = pow(&meta.beta.complement(), 2);
    let mut config = CostConfiguration::zero();
    for k in 1..=m {
        let chosen = meta.variable_node(k, tau.value(k));
        let other = meta.variable_node(k, !tau.value(k));
        for &e in g.out_edges(chosen) {
            if meta.kind(e) == EdgeKind::Shortcut3First {
                config.set(e, short_toll.clone()).expect("positive");
            }
        }
        for &e in g.in_edges(other) {
            if meta.kind(e) == EdgeKind::Forward {
                config.set(e, Rational::one()).expect("positive");
            }
        }
    }
    Ok(config)
}

/// Simulates the agent and reads `τ(x_k) = y` from the variable node
/// `w_{k,y}` on her first walk. Variables the walk skips are set to false.
pub fn config_to_assignment(
    meta: &ReductionMeta,
    config: &CostConfiguration,
) -> Result<Assignment, ReductionError> {
    let view = AgentView::new(&meta.graph, config, &meta.beta);
    let report = view.report_capped(&meta.simulation_reward(), 1);
    if !report.motivating {
        return Err(ReductionError::NoWalk);
    }
    let mut values = vec![false; meta.formula.num_vars()];
    for &v in &report.walks[0] {
        if let NodeRole::Variable { var, value } = meta.role(v) {
            values[var - 1] = value;
        }
    }
    Ok(Assignment(values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::agent::is_motivating;
    use crate::rational::rat;

    fn sample_formula() -> CnfFormula {
        CnfFormula::from_ints(3, &[[-1, 2, 3], [1, -2, -3], [1, -2, 3]]).unwrap()
    }

    #[test]
    fn bounds_at_one_fifth() {
        let beta = Bias::from_ratio(1, 5);
        assert_eq!(epsilon_bound(&beta), rat(32, 375));
        assert_eq!(gap_epsilon_bound(&beta), rat(32, 1875));
        assert_eq!(gap_ratio(&beta), rat(3381, 3125));
        assert_eq!(gap_reward(&beta), rat(3381, 625));
    }

    #[test]
    fn construction_counts() {
        let meta = sat_to_mcc(&sample_formula(), &Bias::from_ratio(1, 5), None, false).unwrap();
        assert_eq!(meta.graph.node_count(), 28);
        assert_eq!(meta.epsilon, rat(16, 375));
        assert!(meta.graph.is_preprocessed());
        let count = |k| meta.edge_kinds.iter().filter(|&&x| x == k).count();
        // 3 + 9 + 9 + 3 into the first part, 2 + 4 + 4 + 2 in the second.
        assert_eq!(count(EdgeKind::Forward), 24 + 12);
        assert_eq!(count(EdgeKind::Shortcut1), 9);
        assert_eq!(count(EdgeKind::Shortcut2), 1);
        assert_eq!(count(EdgeKind::Shortcut3First), 6);
        assert_eq!(count(EdgeKind::Shortcut3Second), 6);
        assert_eq!(count(EdgeKind::Spine), 4);
    }

    #[test]
    fn shortcut1_targets_the_opposite_value() {
        let meta = sat_to_mcc(&sample_formula(), &Bias::from_ratio(1, 5), None, false).unwrap();
        let v11 = meta
            .node_with_role(NodeRole::Literal {
                clause: 1,
                position: 1,
            })
            .unwrap();
        let target = meta
            .graph
            .out_edges(v11)
            .iter()
            .find(|&&e| meta.kind(e) == EdgeKind::Shortcut1)
            .map(|&e| meta.graph.edge(e).to)
            .unwrap();
        // The first literal of the first clause is ¬x1.
        assert_eq!(target, meta.variable_node(1, true));
    }

    #[test]
    fn epsilon_is_checked() {
        let beta = Bias::from_ratio(1, 5);
        for eps in [rat(32, 375), rat(0, 1), rat(-1, 2)] {
            assert!(matches!(
                sat_to_mcc(&sample_formula(), &beta, Some(eps), false),
                Err(ReductionError::EpsilonTooLarge { .. })
            ));
        }
        assert!(matches!(
            sat_to_mcc(&sample_formula(), &Bias::from_ratio(1, 1), None, false),
            Err(ReductionError::BiasOutOfRange(_))
        ));
    }

    #[test]
    fn satisfying_assignment_round_trips() {
        let meta = sat_to_mcc(&sample_formula(), &Bias::from_ratio(1, 5), None, false).unwrap();
        let tau: Assignment = "TTT".parse().unwrap();
        assert!(meta.formula.is_satisfied_by(&tau));
        let cfg = assignment_to_config(&meta, &tau).unwrap();
        assert!(is_motivating(&meta.graph, &cfg, &meta.beta, &meta.reward).motivating);
        assert_eq!(config_to_assignment(&meta, &cfg).unwrap(), tau);
        assert_eq!(
            config_to_assignment(&meta, &CostConfiguration::zero()),
            Err(ReductionError::NoWalk)
        );
    }

    #[test]
    fn roles_and_kinds_parse_back() {
        let meta = sat_to_mcc(&sample_formula(), &Bias::from_ratio(1, 3), None, true).unwrap();
        for role in &meta.roles {
            assert_eq!(role.to_string().parse::<NodeRole>().unwrap(), *role);
        }
        for kind in EdgeKind::ALL {
            assert_eq!(kind.to_string().parse::<EdgeKind>().unwrap(), kind);
        }
        assert!("u6".parse::<NodeRole>().is_err());
        assert!("variable(1,X)".parse::<NodeRole>().is_err());
    }
}
