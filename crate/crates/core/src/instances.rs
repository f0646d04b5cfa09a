//! Named example graphs and a seeded random DAG generator.

use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{GraphBuilder, NodeId, TaskGraph};
use crate::rational::{ceil, rat, Bias, Rational};
use crate::reductions::{
    sat_to_mcc, CnfFormula, EdgeKind, NodeRole, ReductionError, ReductionMeta,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),
}

fn out_of_range(msg: impl Into<String>) -> InstanceError {
    InstanceError::ParameterOutOfRange(msg.into())
}

/// Reduction bookkeeping carried alongside a graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Annotations {
    pub formula: CnfFormula,
    pub epsilon: Rational,
    pub gap: bool,
    pub roles: Vec<NodeRole>,
    pub edge_kinds: Vec<EdgeKind>,
}

/// A task graph with the agent's bias and optionally a reward.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub graph: TaskGraph,
    pub beta: Bias,
    pub reward: Option<Rational>,
    pub annotations: Option<Annotations>,
}

impl Instance {
    pub fn new(graph: TaskGraph, beta: Bias) -> Self {
        Instance {
            graph,
            beta,
            reward: None,
            annotations: None,
        }
    }

    pub fn with_reward(mut self, reward: Rational) -> Self {
        self.reward = Some(reward);
        self
    }

    pub fn from_reduction(meta: &ReductionMeta) -> Self {
        Instance {
            graph: meta.graph.clone(),
            beta: meta.beta.clone(),
            reward: Some(meta.reward.clone()),
            annotations: Some(Annotations {
                formula: meta.formula.clone(),
                epsilon: meta.epsilon.clone(),
                gap: meta.gap,
                roles: meta.roles.clone(),
                edge_kinds: meta.edge_kinds.clone(),
            }),
        }
    }

    /// Rebuilds the reduction from the annotations, or `None` for plain
    /// instances. Fails if the annotations do not describe this graph.
    pub fn reduction(&self) -> Option<Result<ReductionMeta, ReductionError>> {
        let a = self.annotations.as_ref()?;
        Some(
            sat_to_mcc(&a.formula, &self.beta, Some(a.epsilon.clone()), a.gap).and_then(|meta| {
                if meta.graph == self.graph
                    && meta.roles == a.roles
                    && meta.edge_kinds == a.edge_kinds
                {
                    Ok(meta)
                } else {
                    Err(ReductionError::AnnotationMismatch)
                }
            }),
        )
    }
}

/// Week `i` is node `v_i`. Each week Alice either does one more homework
/// (cost 1) or gives the presentation and is done (cost 3, except 1 in the
/// last week).
pub fn gen_alice(m: usize, beta: &Bias, reward: &Rational) -> Result<Instance, InstanceError> {
    if m < 2 {
        return Err(out_of_range(format!("m must be at least 2, got {m}")));
    }
    let mut b = GraphBuilder::new();
    let v: Vec<NodeId> = (1..=m).map(|i| b.add_node(format!("v{i}"))).collect();
    let t = b.add_node("t");
    for i in 0..m {
        if i + 1 < m {
            b.add_edge(v[i], t, Rational::from_integer(3.into()));
            b.add_edge(v[i], v[i + 1], Rational::one());
        } else {
            b.add_edge(v[i], t, Rational::one());
        }
    }
    let graph = b.build(v[0], t).expect("valid chain");
    Ok(Instance::new(graph, beta.clone()).with_reward(reward.clone()))
}

/// `⌈β⁻²(1−β)⁻¹ε⁻²⌉`.
pub fn ratio_m(beta: &Bias, epsilon: &Rational) -> usize {
    let b = beta.value();
    let m = Rational::one() / (b * b * beta.complement() * epsilon * epsilon);
    ceil(&m).try_into().expect("m fits in usize")
}

/// Main path `v_1, …, v_{2m+1} = t` of cost `(1−β)ε²` per edge, and from
/// every `v_i` with `i ≤ 2m` a free edge to `w`, which reaches `t` for
/// `1/β`.
pub fn gen_ratio(beta: &Bias, epsilon: &Rational) -> Result<Instance, InstanceError> {
    if beta.is_unbiased() {
        return Err(out_of_range("beta must be below 1"));
    }
    if !epsilon.is_positive() || epsilon >= &Rational::one() {
        return Err(out_of_range(format!(
            "epsilon must lie in (0, 1), got {epsilon}"
        )));
    }
    let m = ratio_m(beta, epsilon);
    let step = beta.complement() * epsilon * epsilon;
    let mut b = GraphBuilder::new();
    let main: Vec<NodeId> = (1..=2 * m).map(|i| b.add_node(format!("v{i}"))).collect();
    let w = b.add_node("w");
    let t = b.add_node("t");
    for i in 0..2 * m {
        let next = main.get(i + 1).copied().unwrap_or(t);
        b.add_edge(main[i], next, step.clone());
        b.add_edge(main[i], w, Rational::zero());
    }
    b.add_edge(w, t, beta.undiscount(&Rational::one()));
    let graph = b.build(main[0], t).expect("valid ladder");
    Ok(Instance::new(graph, beta.clone()))
}

/// Seven nodes on which no configuration attains the infimum reward `1/β`.
pub fn gen_noopt(beta: &Bias) -> Result<Instance, InstanceError> {
    if beta.is_unbiased() {
        return Err(out_of_range("beta must be below 1"));
    }
    let x = beta.complement();
    let x2 = &x * &x;
    let x3 = &x2 * &x;
    let mut b = GraphBuilder::new();
    let [s, v1, v2, v3, v4, w, t] =
        ["s", "v1", "v2", "v3", "v4", "w", "t"].map(|name| b.add_node(name));
    b.add_edge(s, v1, x3.clone());
    b.add_edge(v1, v2, x3);
    b.add_edge(v2, v3, x2.clone());
    b.add_edge(v3, v4, x);
    b.add_edge(v4, t, Rational::one());
    b.add_edge(v1, w, x2);
    b.add_edge(w, t, Rational::from_integer(2.into()) - beta.value());
    let graph = b.build(s, t).expect("valid graph");
    Ok(Instance::new(graph, beta.clone()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct RandomSpec {
    pub n: usize,
    /// Probability of each forward pair becoming an edge.
    pub density: f64,
    /// Cost numerators are drawn from `0..=max_numer`.
    pub max_numer: u32,
    /// Cost denominators are drawn from `1..=max_denom`.
    pub max_denom: u32,
    pub seed: u64,
    pub beta: Bias,
}

impl RandomSpec {
    pub fn new(n: usize, density: f64, seed: u64) -> Self {
        RandomSpec {
            n,
            density,
            max_numer: 10,
            max_denom: 64,
            seed,
            beta: Bias::from_ratio(1, 2),
        }
    }
}

/// Random DAG from a ChaCha8 stream seeded with `spec.seed`.
///
/// Node ids are shuffled against the topological order. Every pair of
/// positions `p < q` becomes an edge with probability `density`; then every
/// node lacking one gets an edge from a random earlier node and to a random
/// later node, so every node lies on an `s → t` path.
pub fn gen_random(spec: &RandomSpec) -> Result<Instance, InstanceError> {
    let n = spec.n;
    if n < 2 {
        return Err(out_of_range(format!("n must be at least 2, got {n}")));
    }
    if !(spec.density > 0.0 && spec.density <= 1.0) {
        return Err(out_of_range(format!(
            "density must lie in (0, 1], got {}",
            spec.density
        )));
    }
    if spec.max_denom == 0 {
        return Err(out_of_range("max_denom must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut rng);

    let mut adj = vec![vec![false; n]; n];
    for p in 0..n {
        for q in p + 1..n {
            adj[p][q] = rng.gen_bool(spec.density);
        }
    }
    for q in 1..n {
        if !(0..q).any(|p| adj[p][q]) {
            adj[rng.gen_range(0..q)][q] = true;
        }
    }
    for p in 0..n - 1 {
        if !(p + 1..n).any(|q| adj[p][q]) {
            adj[p][rng.gen_range(p + 1..n)] = true;
        }
    }

    let mut b = GraphBuilder::new();
    let (s_id, t_id) = (perm[0], perm[n - 1]);
    for id in 0..n {
        match id {
            _ if id == s_id => b.add_node("s"),
            _ if id == t_id => b.add_node("t"),
            _ => b.add_node(format!("v{id}")),
        };
    }
    for p in 0..n {
        for q in p + 1..n {
            if adj[p][q] {
                let numer = rng.gen_range(0..=spec.max_numer);
                let denom = rng.gen_range(1..=spec.max_denom);
                b.add_edge(
                    NodeId(perm[p]),
                    NodeId(perm[q]),
                    rat(numer.into(), denom.into()),
                );
            }
        }
    }
    let graph = b
        .build(NodeId(s_id), NodeId(t_id))
        .expect("forward edges only")
        .preprocess()
        .expect("connected by construction");
    Ok(Instance::new(graph, spec.beta.clone()))
}

#[derive(Debug, Clone, PartialEq)]
pub enum GeneratorSpec {
    Alice {
        m: usize,
        beta: Bias,
        reward: Rational,
    },
    Ratio {
        beta: Bias,
        epsilon: Rational,
    },
    Noopt {
        beta: Bias,
    },
    Random(RandomSpec),
}

impl GeneratorSpec {
    pub fn generate(&self) -> Result<Instance, InstanceError> {
        match self {
            GeneratorSpec::Alice { m, beta, reward } => gen_alice(*m, beta, reward),
            GeneratorSpec::Ratio { beta, epsilon } => gen_ratio(beta, epsilon),
            GeneratorSpec::Noopt { beta } => gen_noopt(beta),
            GeneratorSpec::Random(spec) => gen_random(spec),
        }
    }
}
