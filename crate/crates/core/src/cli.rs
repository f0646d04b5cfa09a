//! Command-line front end.
//!
//! [`run`] parses arguments, executes one subcommand and returns a
//! [`CommandResult`]; the binary only prints it and exits. Exit code 2 means
//! a usage error, 1 a domain error, 0 success.

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::agent::{AgentView, DEFAULT_WALK_CAP};
use crate::config::CostConfiguration;
use crate::devices::{
    compare_devices, exact_infimum_with, fence_required_reward, minmax_path_approx, path_and_fence,
    DeviceError, Path, SearchOptions, DEFAULT_EDGE_BUDGET, DEFAULT_PATH_BUDGET,
};
use crate::graph::{GraphError, NodeId, TaskGraph};
use crate::instances::{
    gen_alice, gen_noopt, gen_random, gen_ratio, Instance, InstanceError, RandomSpec,
};
use crate::io::{read_file, to_dot, write_file, Document, IoError};
use crate::rational::{format_rational, parse_rational, Bias, Rational};
use crate::reductions::{
    assignment_to_config, config_to_assignment, gap_reward, parse_dimacs, sat_to_mcc, Assignment,
    CnfError, ReductionError, ReductionMeta,
};

#[derive(Debug, Parser)]
#[command(
    name = "penalty-planner",
    version,
    about = "Present-biased agents on task graphs and penalty fees that keep them going"
)]
struct Cli {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check an instance file.
    Validate { file: PathBuf },
    /// Simulate the agent.
    Simulate {
        file: PathBuf,
        /// Defaults to the reward stored in the file.
        #[arg(long, value_parser = rational_arg)]
        reward: Option<Rational>,
        /// Maximum number of walks to list.
        #[arg(long, default_value_t = DEFAULT_WALK_CAP)]
        walks: usize,
    },
    /// Least reward that motivates under the file's configuration.
    MinReward { file: PathBuf },
    /// Fence a path with penalty fees.
    Fence {
        file: PathBuf,
        /// Comma-separated node labels or ids from source to target.
        #[arg(long)]
        path: String,
        #[arg(long, value_parser = rational_arg)]
        epsilon: Rational,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Fence the minmax path; motivates at twice the optimum or better.
    Approx {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Exact infimum of the motivating reward over all fenced paths.
    Exact {
        file: PathBuf,
        /// Complete paths to evaluate before giving up.
        #[arg(long, default_value_t = DEFAULT_PATH_BUDGET)]
        budget: usize,
        #[arg(long, env = "PENALTY_PLANNER_THREADS", default_value_t = 1)]
        threads: usize,
    },
    /// Build the hardness instance of a 3-CNF formula (DIMACS).
    #[command(name = "reduce3sat")]
    Reduce3Sat {
        cnf: PathBuf,
        #[arg(long, value_parser = bias_arg)]
        beta: Bias,
        #[arg(long, value_parser = rational_arg)]
        epsilon: Option<Rational>,
        /// Use the tighter epsilon of the inapproximability variant.
        #[arg(long)]
        gap: bool,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Turn a truth assignment into a configuration of a reduction instance.
    #[command(name = "assign2config")]
    Assign2Config {
        file: PathBuf,
        /// One letter per variable, e.g. TFT.
        #[arg(long)]
        tau: String,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Read a truth assignment off the agent's walk.
    #[command(name = "config2assign")]
    Config2Assign { file: PathBuf },
    /// Generate an instance.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Graphviz rendering.
    Dot {
        file: PathBuf,
        /// Path to highlight.
        #[arg(long)]
        path: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Penalty infimum against the best subgraph.
    Compare {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_EDGE_BUDGET)]
        edge_budget: usize,
    },
}

#[derive(Debug, Subcommand)]
enum GenKind {
    /// The homework-or-presentation chain.
    Alice {
        #[arg(long)]
        m: usize,
        #[arg(long, value_parser = bias_arg)]
        beta: Bias,
        #[arg(long, value_parser = rational_arg)]
        reward: Rational,
        #[command(flatten)]
        out: OutArg,
    },
    /// Instance where prohibition needs 1/β times the penalty reward.
    Ratio {
        #[arg(long, value_parser = bias_arg)]
        beta: Bias,
        #[arg(long, value_parser = rational_arg)]
        epsilon: Rational,
        #[command(flatten)]
        out: OutArg,
    },
    /// Seven-node graph without an optimal configuration.
    Noopt {
        #[arg(long, value_parser = bias_arg)]
        beta: Bias,
        #[command(flatten)]
        out: OutArg,
    },
    /// Seeded random DAG.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.4)]
        density: f64,
        #[arg(long, default_value_t = 10)]
        max_numer: u32,
        #[arg(long, default_value_t = 64)]
        max_denom: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_parser = bias_arg, default_value = "1/2")]
        beta: Bias,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Debug, Args)]
struct OutArg {
    #[arg(short, long)]
    output: PathBuf,
}

fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn bias_arg(s: &str) -> Result<Bias, String> {
    s.parse::<Bias>().map_err(|e| e.to_string())
}

#[derive(Debug, Error)]
enum CliError {
    #[error(transparent)]
    Io(#[from] IoError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Device(#[from] DeviceError),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error(transparent)]
    Cnf(#[from] CnfError),
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error("{0}")]
    Input(String),
}

impl CliError {
    fn kind(&self) -> String {
        let kind = match self {
            CliError::Io(IoError::Syntax { .. }) => "syntax_error",
            CliError::Io(IoError::Schema(_)) => "schema_error",
            CliError::Io(IoError::Validation(_)) => "validation_error",
            CliError::Io(IoError::File { .. }) => "file_error",
            CliError::Graph(GraphError::NoPath) => "no_path",
            CliError::Graph(_) => "graph_error",
            CliError::Device(DeviceError::BudgetExceeded { .. }) => "budget_exceeded",
            CliError::Device(DeviceError::InvalidPath(_)) => "invalid_path",
            CliError::Device(DeviceError::InternalVerificationFailed(_)) => "verification_failed",
            CliError::Device(_) => "device_error",
            CliError::Reduction(ReductionError::NoWalk) => "no_walk",
            CliError::Reduction(_) => "reduction_error",
            CliError::Cnf(_) => "cnf_error",
            CliError::Instance(_) => "parameter_out_of_range",
            CliError::Input(_) => "input_error",
        };
        kind.to_string()
    }

    fn details(&self) -> Value {
        let mut v = json!({"kind": self.kind(), "message": self.to_string()});
        if let CliError::Io(IoError::Validation(violations)) = self {
            v["violations"] = serde_json::to_value(violations).expect("serializable");
        }
        if let CliError::Io(IoError::Syntax { line, column, .. }) = self {
            v["line"] = json!(line);
            v["column"] = json!(column);
        }
        v
    }
}

/// What one invocation produced.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    /// The arguments, echoed.
    pub command: Vec<String>,
    pub elapsed_ms: f64,
    pub ok: bool,
    /// Command-specific values, or `{"error": …}`.
    pub payload: Value,
}

#[derive(Debug, Clone)]
pub struct CommandResult {
    pub exit_code: i32,
    pub report: Option<Report>,
    /// Text to print: the rendered report, or clap's usage message.
    pub output: String,
}

impl CommandResult {
    pub fn is_success(&self) -> bool {
        self.exit_code == 0
    }

    /// Success output goes to stdout, everything else to stderr.
    pub fn to_stderr(&self) -> bool {
        self.exit_code != 0
    }
}

/// Runs one command line. `argv[0]` is the program name.
pub fn run<I, T>(argv: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            return CommandResult {
                exit_code: e.exit_code(),
                report: None,
                output: e.render().to_string(),
            }
        }
    };
    let command: Vec<String> = argv
        .iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .collect();
    let start = Instant::now();
    let outcome = execute(&cli.command);
    let elapsed_ms = start.elapsed().as_secs_f64() * 1000.0;

    let (exit_code, payload, raw) = match outcome {
        Ok(Outcome { payload, raw }) => (0, payload, raw),
        Err(e) => (1, json!({"error": e.details()}), None),
    };
    let report = Report {
        command,
        elapsed_ms,
        ok: exit_code == 0,
        payload,
    };
    let output = if cli.json {
        let mut s = serde_json::to_string_pretty(&report).expect("serializable");
        s.push('\n');
        s
    } else if let Some(raw) = raw {
        raw
    } else {
        render_human(&report.payload)
    };
    CommandResult {
        exit_code,
        report: Some(report),
        output,
    }
}

struct Outcome {
    payload: Value,
    /// Replaces the rendered payload in human mode.
    raw: Option<String>,
}

impl From<Value> for Outcome {
    fn from(payload: Value) -> Self {
        Outcome { payload, raw: None }
    }
}

fn r(x: &Rational) -> Value {
    Value::String(format_rational(x))
}

fn names(graph: &TaskGraph, nodes: impl IntoIterator<Item = NodeId>) -> Vec<String> {
    nodes.into_iter().map(|v| graph.display_name(v)).collect()
}

fn extra_list(graph: &TaskGraph, config: &CostConfiguration) -> Value {
    Value::Array(
        config
            .iter()
            .map(|(e, x)| {
                let edge = graph.edge(e);
                json!({
                    "edge": format!("{}->{}", graph.display_name(edge.from), graph.display_name(edge.to)),
                    "extra": r(x),
                })
            })
            .collect(),
    )
}

/// Instance and configuration with every node on an `s → t` path.
/// Configurations follow their edges through preprocessing.
fn prepared(doc: Document) -> Result<(Instance, CostConfiguration), CliError> {
    let Document { instance, config } = doc;
    let config = config.unwrap_or_default();
    if instance.graph.is_preprocessed() {
        return Ok((instance, config));
    }
    let pre = instance.graph.preprocess_mapped()?;
    let mut mapped = CostConfiguration::zero();
    for (new, old) in pre.edge_origin.iter().enumerate() {
        mapped
            .set(crate::graph::EdgeId(new), config.get(*old))
            .expect("nonnegative");
    }
    let instance = Instance {
        graph: pre.graph,
        annotations: None,
        ..instance
    };
    Ok((instance, mapped))
}

fn load(file: &PathBuf) -> Result<(Instance, CostConfiguration), CliError> {
    prepared(read_file(file)?)
}

fn reduction_of(instance: &Instance) -> Result<ReductionMeta, CliError> {
    instance
        .reduction()
        .ok_or_else(|| CliError::Input("the file carries no reduction annotations".into()))?
        .map_err(CliError::from)
}

fn execute(command: &Command) -> Result<Outcome, CliError> {
    match command {
        Command::Validate { file } => {
            let doc = read_file(file)?;
            let g = &doc.instance.graph;
            Ok(json!({
                "valid": true,
                "nodes": g.node_count(),
                "edges": g.edge_count(),
                "source": g.display_name(g.source()),
                "target": g.display_name(g.target()),
                "preprocessed": g.is_preprocessed(),
                "paths": g.count_paths().to_string(),
                "beta": r(doc.instance.beta.value()),
                "has_config": doc.config.is_some(),
                "reduction": doc.instance.annotations.is_some(),
            })
            .into())
        }
        Command::Simulate {
            file,
            reward,
            walks,
        } => {
            let (inst, config) = load(file)?;
            let reward = reward.clone().or(inst.reward.clone()).ok_or_else(|| {
                CliError::Input("no --reward given and none stored in the file".into())
            })?;
            let view = AgentView::new(&inst.graph, &config, &inst.beta);
            let report = view.report_capped(&reward, *walks);
            let g = &inst.graph;
            Ok(json!({
                "reward": r(&reward),
                "motivating": report.motivating,
                "abandon_nodes": names(g, report.abandon_nodes.iter().copied()),
                "visited": names(g, report.visited.iter().copied()),
                "walks": report.walks.iter().map(|w| names(g, w.iter().copied()).join(",")).collect::<Vec<_>>(),
                "truncated": report.truncated,
                "min_motivating_reward": r(&view.min_motivating_reward()),
            })
            .into())
        }
        Command::MinReward { file } => {
            let (inst, config) = load(file)?;
            let view = AgentView::new(&inst.graph, &config, &inst.beta);
            Ok(json!({
                "min_motivating_reward": r(&view.min_motivating_reward()),
                "trivial_config": config.is_trivial(),
            })
            .into())
        }
        Command::Fence {
            file,
            path,
            epsilon,
            output,
        } => {
            let (inst, _) = load(file)?;
            let g = &inst.graph;
            let path = Path::parse(g, path)?;
            let config = path_and_fence(g, &inst.beta, &path, epsilon)?;
            let achieved = AgentView::new(g, &config, &inst.beta).min_motivating_reward();
            let mut payload = json!({
                "path": path.display(g),
                "epsilon": r(epsilon),
                "required_reward": r(&fence_required_reward(g, &inst.beta, &path)),
                "motivating_reward": r(&achieved),
                "extra_costs": extra_list(g, &config),
            });
            if let Some(out) = output {
                let inst = inst.clone().with_reward(achieved);
                write_file(out, &inst, Some(&config))?;
                payload["output"] = json!(out.display().to_string());
            }
            Ok(payload.into())
        }
        Command::Approx { file, output } => {
            let (inst, _) = load(file)?;
            let g = &inst.graph;
            let result = minmax_path_approx(g, &inst.beta)?;
            let mut payload = json!({
                "minmax_path": result.minmax_path.display(g),
                "rho": r(&result.rho),
                "guaranteed_reward": r(&result.guaranteed_reward),
                "lower_bound": r(&result.lower_bound),
                "verified": true,
                "extra_costs": extra_list(g, &result.config),
            });
            if let Some(out) = output {
                let inst = inst.clone().with_reward(result.guaranteed_reward.clone());
                write_file(out, &inst, Some(&result.config))?;
                payload["output"] = json!(out.display().to_string());
            }
            Ok(payload.into())
        }
        Command::Exact {
            file,
            budget,
            threads,
        } => {
            let (inst, _) = load(file)?;
            let g = &inst.graph;
            let options = SearchOptions {
                path_budget: *budget,
                threads: (*threads).max(1),
            };
            let result = exact_infimum_with(g, &inst.beta, &options);
            Ok(json!({
                "infimum": r(&result.value),
                "witness": result.witness.display(g),
                "exhausted": result.exhausted,
                "paths_evaluated": result.paths_evaluated,
                "threads": options.threads,
            })
            .into())
        }
        Command::Reduce3Sat {
            cnf,
            beta,
            epsilon,
            gap,
            output,
        } => {
            let text = std::fs::read_to_string(cnf).map_err(|source| IoError::File {
                path: cnf.display().to_string(),
                source,
            })?;
            let formula = parse_dimacs(&text)?;
            let meta = sat_to_mcc(&formula, beta, epsilon.clone(), *gap)?;
            write_file(output, &Instance::from_reduction(&meta), None)?;
            let mut payload = json!({
                "variables": formula.num_vars(),
                "clauses": formula.num_clauses(),
                "nodes": meta.graph.node_count(),
                "edges": meta.graph.edge_count(),
                "epsilon": r(&meta.epsilon),
                "reward": r(&meta.reward),
                "gap": meta.gap,
                "output": output.display().to_string(),
            });
            if *gap {
                payload["gap_reward"] = r(&gap_reward(beta));
            }
            Ok(payload.into())
        }
        Command::Assign2Config { file, tau, output } => {
            let doc = read_file(file)?;
            let meta = reduction_of(&doc.instance)?;
            let tau: Assignment = tau.parse()?;
            let config = assignment_to_config(&meta, &tau)?;
            let motivating = AgentView::new(&meta.graph, &config, &meta.beta)
                .report_capped(&meta.reward, 1)
                .motivating;
            write_file(output, &doc.instance, Some(&config))?;
            Ok(json!({
                "tau": tau.to_string(),
                "satisfies_formula": meta.formula.is_satisfied_by(&tau),
                "motivating_at_reward": motivating,
                "reward": r(&meta.reward),
                "charged_edges": config.len(),
                "output": output.display().to_string(),
            })
            .into())
        }
        Command::Config2Assign { file } => {
            let doc = read_file(file)?;
            let meta = reduction_of(&doc.instance)?;
            let config = doc.config.unwrap_or_default();
            let tau = config_to_assignment(&meta, &config)?;
            Ok(json!({
                "assignment": tau.to_string(),
                "satisfies_formula": meta.formula.is_satisfied_by(&tau),
                "reward": r(&meta.simulation_reward()),
            })
            .into())
        }
        Command::Gen { kind } => {
            let (name, inst, out) = match kind {
                GenKind::Alice {
                    m,
                    beta,
                    reward,
                    out,
                } => ("alice", gen_alice(*m, beta, reward)?, out),
                GenKind::Ratio { beta, epsilon, out } => ("ratio", gen_ratio(beta, epsilon)?, out),
                GenKind::Noopt { beta, out } => ("noopt", gen_noopt(beta)?, out),
                GenKind::Random {
                    n,
                    density,
                    max_numer,
                    max_denom,
                    seed,
                    beta,
                    out,
                } => {
                    let spec = RandomSpec {
                        n: *n,
                        density: *density,
                        max_numer: *max_numer,
                        max_denom: *max_denom,
                        seed: *seed,
                        beta: beta.clone(),
                    };
                    ("random", gen_random(&spec)?, out)
                }
            };
            write_file(&out.output, &inst, None)?;
            Ok(json!({
                "kind": name,
                "nodes": inst.graph.node_count(),
                "edges": inst.graph.edge_count(),
                "beta": r(inst.beta.value()),
                "output": out.output.display().to_string(),
            })
            .into())
        }
        Command::Dot { file, path, output } => {
            let doc = read_file(file)?;
            let g = &doc.instance.graph;
            let highlight = path.as_deref().map(|p| Path::parse(g, p)).transpose()?;
            let dot = to_dot(g, doc.config.as_ref(), highlight.as_ref());
            match output {
                Some(out) => {
                    std::fs::write(out, &dot).map_err(|source| IoError::File {
                        path: out.display().to_string(),
                        source,
                    })?;
                    Ok(json!({"output": out.display().to_string()}).into())
                }
                None => Ok(Outcome {
                    payload: json!({ "dot": dot }),
                    raw: Some(dot),
                }),
            }
        }
        Command::Compare { file, edge_budget } => {
            let (inst, _) = load(file)?;
            let g = &inst.graph;
            let c = compare_devices(g, &inst.beta, *edge_budget)?;
            let kept: Vec<String> = c
                .prohibition
                .kept
                .iter()
                .map(|&e| {
                    let edge = g.edge(e);
                    format!("{}->{}", g.display_name(edge.from), g.display_name(edge.to))
                })
                .collect();
            if !c.within_bound() {
                return Err(CliError::Input(format!(
                    "prohibition/penalty ratio {} exceeds 1/beta = {}",
                    c.ratio.as_ref().map(format_rational).unwrap_or_default(),
                    format_rational(&c.ratio_bound)
                )));
            }
            Ok(json!({
                "penalty_infimum": r(&c.penalty.value),
                "penalty_witness": c.penalty.witness.display(g),
                "penalty_exhausted": c.penalty.exhausted,
                "prohibition_optimum": r(&c.prohibition.reward),
                "kept_edges": kept,
                "ratio": c.ratio.as_ref().map(r),
                "ratio_bound": r(&c.ratio_bound),
                "within_bound": true,
            })
            .into())
        }
    }
}

/// Plain `key: value` lines from the JSON payload, so both output modes
/// carry the same values.
fn render_human(payload: &Value) -> String {
    let mut out = String::new();
    render_object(payload, 0, &mut out);
    out
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        _ => None,
    }
}

fn inline(v: &Value) -> String {
    match v {
        Value::Object(map) => map
            .iter()
            .map(|(k, x)| format!("{k}={}", inline(x)))
            .collect::<Vec<_>>()
            .join(" "),
        Value::Array(items) => items.iter().map(inline).collect::<Vec<_>>().join(", "),
        other => scalar(other).unwrap_or_default(),
    }
}

fn render_object(v: &Value, indent: usize, out: &mut String) {
    let pad = " ".repeat(indent);
    let Value::Object(map) = v else {
        out.push_str(&format!("{pad}{}\n", inline(v)));
        return;
    };
    let map: &Map<String, Value> = map;
    for (k, x) in map {
        match x {
            Value::Array(items) if items.is_empty() => out.push_str(&format!("{pad}{k}: -\n")),
            Value::Object(_) => {
                out.push_str(&format!("{pad}{k}:\n"));
                render_object(x, indent + 2, out);
            }
            Value::Array(items) if items.iter().any(|i| !i.is_string() && scalar(i).is_none()) => {
                out.push_str(&format!("{pad}{k}:\n"));
                for item in items {
                    out.push_str(&format!("{pad}  - {}\n", inline(item)));
                }
            }
            Value::Array(items)
                if items
                    .iter()
                    .any(|i| i.as_str().is_some_and(|s| s.contains(','))) =>
            {
                out.push_str(&format!("{pad}{k}:\n"));
                for item in items {
                    out.push_str(&format!("{pad}  - {}\n", inline(item)));
                }
            }
            _ => out.push_str(&format!("{pad}{k}: {}\n", inline(x))),
        }
    }
}
