//! Instance files.
//!
//! A file is one JSON object with sorted keys, so serialization is
//! byte-stable. Rationals are strings `"p"` or `"p/q"` in lowest terms.

use std::path::Path;

use serde::Deserialize;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::config::CostConfiguration;
use crate::graph::{Edge, EdgeId, GraphParts, NodeId, TaskGraph, Violation};
use crate::instances::{Annotations, Instance};
use crate::rational::{format_rational, parse_rational, Bias, Rational};
use crate::reductions::parse_dimacs;

pub const SCHEMA_VERSION: u64 = 1;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("schema error: {0}")]
    Schema(String),
    #[error("invalid graph: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Validation(Vec<Violation>),
    #[error("{path}: {source}")]
    File {
        path: String,
        source: std::io::Error,
    },
}

/// An instance, optionally with a cost configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub instance: Instance,
    pub config: Option<CostConfiguration>,
}

impl Document {
    pub fn new(instance: Instance) -> Self {
        Document {
            instance,
            config: None,
        }
    }

    pub fn with_config(mut self, config: CostConfiguration) -> Self {
        self.config = Some(config);
        self
    }
}

fn text(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

/// The document as a JSON value (objects are key-sorted).
pub fn to_value(instance: &Instance, config: Option<&CostConfiguration>) -> Value {
    let g = &instance.graph;
    let nodes: Vec<Value> = g
        .nodes()
        .map(|v| {
            let mut node = Map::new();
            node.insert("id".into(), json!(v.0));
            if let Some(label) = g.label(v) {
                node.insert("label".into(), json!(label));
            }
            Value::Object(node)
        })
        .collect();
    let edges: Vec<Value> = g
        .edges()
        .iter()
        .map(|e| json!({"from": e.from.0, "to": e.to.0, "cost": text(&e.cost)}))
        .collect();

    let mut doc = Map::new();
    doc.insert("schema_version".into(), json!(SCHEMA_VERSION));
    doc.insert("nodes".into(), Value::Array(nodes));
    doc.insert("edges".into(), Value::Array(edges));
    doc.insert("source".into(), json!(g.source().0));
    doc.insert("target".into(), json!(g.target().0));
    doc.insert("beta".into(), text(instance.beta.value()));
    if let Some(r) = &instance.reward {
        doc.insert("reward".into(), text(r));
    }
    if let Some(config) = config {
        let extra: Vec<Value> = config
            .iter()
            .map(|(e, x)| json!({"edge": e.0, "extra": text(x)}))
            .collect();
        doc.insert("extra_costs".into(), Value::Array(extra));
    }
    if let Some(a) = &instance.annotations {
        doc.insert(
            "annotations".into(),
            json!({
                "formula": a.formula.to_dimacs(),
                "epsilon": text(&a.epsilon),
                "gap": a.gap,
                "roles": a.roles.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
                "edge_kinds": a.edge_kinds.iter().map(|k| k.to_string()).collect::<Vec<_>>(),
            }),
        );
    }
    Value::Object(doc)
}

/// Canonical text: pretty-printed, sorted keys, trailing newline.
pub fn serialize(instance: &Instance, config: Option<&CostConfiguration>) -> String {
    let mut out =
        serde_json::to_string_pretty(&to_value(instance, config)).expect("JSON values serialize");
    out.push('\n');
    out
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDoc {
    schema_version: u64,
    nodes: Vec<RawNode>,
    edges: Vec<RawEdge>,
    source: usize,
    target: usize,
    beta: String,
    reward: Option<String>,
    extra_costs: Option<Vec<RawExtra>>,
    annotations: Option<RawAnnotations>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNode {
    id: usize,
    label: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEdge {
    from: usize,
    to: usize,
    cost: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawExtra {
    edge: usize,
    extra: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAnnotations {
    formula: String,
    epsilon: String,
    gap: bool,
    roles: Vec<String>,
    edge_kinds: Vec<String>,
}

fn schema(msg: impl Into<String>) -> IoError {
    IoError::Schema(msg.into())
}

fn rational_field(field: &str, value: &str) -> Result<Rational, IoError> {
    parse_rational(value).map_err(|e| schema(format!("{field}: {e}")))
}

pub fn parse(text: &str) -> Result<Document, IoError> {
    let raw: RawDoc = serde_json::from_str(text).map_err(|e| {
        use serde_json::error::Category;
        match e.classify() {
            Category::Syntax | Category::Eof => IoError::Syntax {
                line: e.line(),
                column: e.column(),
                message: e.to_string(),
            },
            Category::Data | Category::Io => IoError::Schema(e.to_string()),
        }
    })?;
    if raw.schema_version != SCHEMA_VERSION {
        return Err(schema(format!(
            "unsupported schema_version {}, expected {SCHEMA_VERSION}",
            raw.schema_version
        )));
    }
    for (i, node) in raw.nodes.iter().enumerate() {
        if node.id != i {
            return Err(schema(format!("node at position {i} has id {}", node.id)));
        }
    }
    let edges = raw
        .edges
        .iter()
        .enumerate()
        .map(|(i, e)| {
            Ok(Edge {
                from: NodeId(e.from),
                to: NodeId(e.to),
                cost: rational_field(&format!("edges[{i}].cost"), &e.cost)?,
            })
        })
        .collect::<Result<Vec<_>, IoError>>()?;
    let parts = GraphParts {
        labels: raw.nodes.into_iter().map(|n| n.label).collect(),
        edges,
        source: NodeId(raw.source),
        target: NodeId(raw.target),
    };
    let violations = parts.validate();
    if !violations.is_empty() {
        return Err(IoError::Validation(violations));
    }
    let graph = TaskGraph::from_parts(parts).map_err(|e| schema(e.to_string()))?;

    let beta =
        Bias::new(rational_field("beta", &raw.beta)?).map_err(|e| schema(format!("beta: {e}")))?;
    let reward = raw
        .reward
        .as_deref()
        .map(|r| rational_field("reward", r))
        .transpose()?;

    let config = match raw.extra_costs {
        None => None,
        Some(list) => {
            let mut config = CostConfiguration::zero();
            for (i, item) in list.iter().enumerate() {
                if item.edge >= graph.edge_count() {
                    return Err(schema(format!(
                        "extra_costs[{i}] refers to missing edge {}",
                        item.edge
                    )));
                }
                let value = rational_field(&format!("extra_costs[{i}].extra"), &item.extra)?;
                config
                    .set(EdgeId(item.edge), value)
                    .map_err(|e| schema(format!("extra_costs[{i}]: {e}")))?;
            }
            Some(config)
        }
    };

    let annotations = raw
        .annotations
        .map(|a| -> Result<Annotations, IoError> {
            Ok(Annotations {
                formula: parse_dimacs(&a.formula)
                    .map_err(|e| schema(format!("annotations.formula: {e}")))?,
                epsilon: rational_field("annotations.epsilon", &a.epsilon)?,
                gap: a.gap,
                roles: a
                    .roles
                    .iter()
                    .map(|r| r.parse())
                    .collect::<Result<_, String>>()
                    .map_err(schema)?,
                edge_kinds: a
                    .edge_kinds
                    .iter()
                    .map(|k| k.parse())
                    .collect::<Result<_, String>>()
                    .map_err(schema)?,
            })
        })
        .transpose()?;

    let instance = Instance {
        graph,
        beta,
        reward,
        annotations,
    };
    if let Some(Err(e)) = instance.reduction() {
        return Err(schema(format!("annotations: {e}")));
    }
    Ok(Document { instance, config })
}

pub fn read_file(path: impl AsRef<Path>) -> Result<Document, IoError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| IoError::File {
        path: path.display().to_string(),
        source,
    })?;
    parse(&text)
}

pub fn write_file(
    path: impl AsRef<Path>,
    instance: &Instance,
    config: Option<&CostConfiguration>,
) -> Result<(), IoError> {
    let path = path.as_ref();
    std::fs::write(path, serialize(instance, config)).map_err(|source| IoError::File {
        path: path.display().to_string(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphBuilder;
    use crate::instances::{gen_alice, gen_noopt};
    use crate::rational::{int, rat};
    use crate::reductions::{sat_to_mcc, CnfFormula};

    fn trivial() -> Instance {
        let mut b = GraphBuilder::new();
        let s = b.add_node("s");
        let t = b.add_node("t");
        b.add_edge(s, t, int(0));
        Instance::new(b.build(s, t).unwrap(), Bias::from_ratio(1, 2))
    }

    #[test]
    fn single_zero_edge() {
        let text = serialize(&trivial(), None);
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["edges"], json!([{"cost": "0", "from": 0, "to": 1}]));
        assert_eq!(parse(&text).unwrap(), Document::new(trivial()));
    }

    #[test]
    fn alice_parameters_are_exact() {
        let inst = gen_alice(3, &Bias::from_ratio(1, 3), &int(6)).unwrap();
        let text = serialize(&inst, None);
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["beta"], "1/3");
        assert_eq!(v["reward"], "6");
        assert_eq!(parse(&text).unwrap().instance, inst);
    }

    #[test]
    fn keys_are_sorted() {
        let text = serialize(&trivial(), Some(&CostConfiguration::zero()));
        let keys: Vec<&str> = text
            .lines()
            .filter(|l| l.starts_with("  \""))
            .map(|l| l.trim().split('"').nth(1).unwrap())
            .collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
    }

    #[test]
    fn config_and_annotations_round_trip() {
        let f = CnfFormula::from_ints(2, &[[1, -2, 2]]).unwrap();
        let meta = sat_to_mcc(&f, &Bias::from_ratio(1, 5), None, true).unwrap();
        let inst = Instance::from_reduction(&meta);
        let cfg = CostConfiguration::from_dense(&[rat(1, 3), int(0), int(2)]).unwrap();
        let doc = parse(&serialize(&inst, Some(&cfg))).unwrap();
        assert_eq!(doc.config, Some(cfg));
        assert_eq!(doc.instance.reduction().unwrap().unwrap(), meta);
    }

    #[test]
    fn error_classes() {
        let good = serialize(&gen_noopt(&Bias::from_ratio(1, 2)).unwrap(), None);
        assert!(matches!(
            parse("{\n  \"beta\": }"),
            Err(IoError::Syntax { line: 2, .. })
        ));
        assert!(matches!(parse("{"), Err(IoError::Syntax { .. })));
        let zero_denom = good.replace("\"beta\": \"1/2\"", "\"beta\": \"1/0\"");
        assert!(matches!(parse(&zero_denom), Err(IoError::Schema(_))));
        let no_target = good.replace("\"target\": 6", "\"tarket\": 6");
        assert!(matches!(parse(&no_target), Err(IoError::Schema(_))));
        let cyclic = good.replace(
            "\"from\": 0,\n      \"to\": 1",
            "\"from\": 1,\n      \"to\": 0",
        );
        assert_ne!(cyclic, good);
        assert!(matches!(parse(&cyclic), Err(IoError::Validation(_))));
        let bad_role = serialize(
            &Instance::from_reduction(
                &sat_to_mcc(
                    &CnfFormula::from_ints(1, &[[1, 1, 1]]).unwrap(),
                    &Bias::from_ratio(1, 2),
                    None,
                    false,
                )
                .unwrap(),
            ),
            None,
        )
        .replace("\"u1\"", "\"u2\"");
        assert!(matches!(parse(&bad_role), Err(IoError::Schema(_))));
    }
}
