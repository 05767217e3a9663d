//! Command-line front end: argument handling, graph loading and report rendering.

use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use chromahom::checks::{Check, CheckOutcome, Limits, Status, Verifier};
use chromahom::complex::BigradedComplex;
use chromahom::graph::parse_graph;
use chromahom::homology::{homology, HomologyTable};
use chromahom::oracle::{assemble_oracle, OracleConfig};
use chromahom::poly::{chromatic_poly_deletion_contraction, chromatic_poly_nbc, graded_euler_characteristic};
use chromahom::st::assemble_with_trees;
use chromahom::trees::enumerate_nbc_trees;
use chromahom::{corpus, Error, GraphError, OrderedGraph};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "chromahom", version, about = "Chromatic homology over Z[x]/(x^m) from NBC spanning trees")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Homology table of the selected model.
    Compute(Common),
    /// NBC spanning trees with activity words.
    Trees(Common),
    /// Generators and differential matrices of the spanning-tree complex.
    Complex(Common),
    /// Generators and differential matrices of the brute-force chromatic complex.
    Oracle {
        #[command(flatten)]
        common: Common,
        /// Restrict to subgraphs without broken circuits.
        #[arg(long)]
        nbc_only: bool,
    },
    /// Chromatic polynomial (two ways) and graded Euler characteristic.
    Poly(Common),
    /// Run theorem checks; exits non-zero if any check fails.
    Verify(Common),
    /// Generator counts and homology timings, spanning-tree model vs oracle.
    Bench(Common),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Model {
    SpanningTree,
    Oracle,
    OracleNbc,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Model::SpanningTree => "spanning-tree",
            Model::Oracle => "oracle",
            Model::OracleNbc => "oracle-nbc",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Table,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Graph document (JSON with vertices, edges, optional root and order).
    #[arg(long, conflicts_with = "random")]
    pub input: Option<PathBuf>,
    /// Seeded random graphs, e.g. `n=5,v=6,extra=3,seed=1`.
    #[arg(long)]
    pub random: Option<String>,
    /// Truncation degree of the algebra.
    #[arg(short, default_value_t = 2)]
    pub m: u32,
    #[arg(long, value_enum, default_value_t = Model::SpanningTree)]
    pub model: Model,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub output: OutputFormat,
    /// Comma-separated checks for `verify` (default: all).
    #[arg(long, value_delimiter = ',')]
    pub checks: Vec<String>,
    /// Root vertex name.
    #[arg(long)]
    pub root: Option<String>,
    /// Edge relabeling: the k-th entry is the new label of the k-th listed edge.
    #[arg(long, value_delimiter = ',')]
    pub order: Vec<usize>,
    /// Worker threads for homology.
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    /// Lift the edge-count guards.
    #[arg(long)]
    pub force: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    /// 1: parse or validation, 2: size guard, 3: integrity.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(Error::LimitExceeded { .. }) => 2,
            CliError::Core(Error::NotAComplex { .. }) => 3,
            _ => 1,
        }
    }
}

/// Exit code of `verify` when a check fails.
pub const EXIT_CHECK_FAILED: i32 = 4;

/// What a command printed and how the process should exit.
pub struct Outcome {
    pub output: String,
    pub exit_code: i32,
}

/// Parameters for `--random`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RandomSpec {
    pub count: usize,
    pub vertices: usize,
    pub extra: usize,
    pub seed: u64,
}

impl FromStr for RandomSpec {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let mut spec = RandomSpec { count: 10, vertices: 6, extra: 3, seed: 0 };
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part.split_once('=').ok_or_else(|| format!("expected key=value, got `{part}`"))?;
            let bad = |_| format!("invalid value for `{key}`: `{value}`");
            match key.trim() {
                "n" => spec.count = value.trim().parse().map_err(bad)?,
                "v" => spec.vertices = value.trim().parse().map_err(bad)?,
                "extra" => spec.extra = value.trim().parse().map_err(bad)?,
                "seed" => spec.seed = value.trim().parse().map_err(bad)?,
                other => return Err(format!("unknown random key `{other}` (expected n, v, extra, seed)")),
            }
        }
        if spec.vertices == 0 {
            return Err("random graphs need at least one vertex".into());
        }
        let max_extra = spec.vertices * (spec.vertices - 1) / 2 - (spec.vertices - 1);
        if spec.extra > max_extra {
            return Err(format!("{} vertices admit at most {max_extra} extra edges", spec.vertices));
        }
        Ok(spec)
    }
}

/// Validated settings shared by all subcommands.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub graphs: Vec<OrderedGraph>,
    pub m: u32,
    pub model: Model,
    pub output: OutputFormat,
    pub checks: Vec<Check>,
    pub limits: Limits,
    pub threads: usize,
}

impl RunConfig {
    pub fn from_common(c: &Common) -> Result<Self, CliError> {
        if c.m < 2 {
            return Err(Error::BadAlgebra(c.m).into());
        }
        if c.threads == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        let mut graphs = match (&c.input, &c.random) {
            (Some(path), None) => {
                let text =
                    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.clone(), source })?;
                vec![parse_graph(&text)?]
            }
            (None, Some(spec)) => {
                let s: RandomSpec = spec.parse().map_err(CliError::Usage)?;
                corpus::random_corpus(s.count, s.vertices, s.extra, s.seed)
            }
            _ => return Err(CliError::Usage("exactly one of --input or --random is required".into())),
        };
        for g in &mut graphs {
            if let Some(root) = &c.root {
                *g = g.with_root(root)?;
            }
            if !c.order.is_empty() {
                *g = g.with_order(&c.order)?;
            }
        }
        let checks = if c.checks.is_empty() {
            Check::ALL.to_vec()
        } else {
            c.checks.iter().map(|s| s.trim().parse()).collect::<Result<_, _>>().map_err(CliError::Usage)?
        };
        let limits = if c.force { Limits::unlimited() } else { Limits::configured() };
        Ok(RunConfig { graphs, m: c.m, model: c.model, output: c.output, checks, limits, threads: c.threads })
    }

    fn oracle_config(&self, nbc_only: bool) -> OracleConfig {
        OracleConfig { m: self.m, nbc_only, edge_limit: self.limits.oracle_edges }
    }
}

/// The chain complex of the selected model.
pub fn build_complex(g: &OrderedGraph, cfg: &RunConfig, model: Model) -> Result<BigradedComplex, CliError> {
    Ok(match model {
        Model::SpanningTree => assemble_with_trees(g, &enumerate_nbc_trees(g), cfg.m)?,
        Model::Oracle => assemble_oracle(g, &cfg.oracle_config(false))?,
        Model::OracleNbc => assemble_oracle(g, &cfg.oracle_config(true))?,
    })
}

pub fn cmd_compute(g: &OrderedGraph, cfg: &RunConfig) -> Result<HomologyTable, CliError> {
    Ok(homology(&build_complex(g, cfg, cfg.model)?)?)
}

fn trees_json(g: &OrderedGraph) -> Value {
    let trees = enumerate_nbc_trees(g);
    let n = g.vertex_count();
    // Gradings of the two m = 2 generators: root colored 1 (plus) or x (minus).
    let list: Vec<Value> = trees
        .iter()
        .map(|t| {
            json!({
                "name": t.name(),
                "edges": t.edges.labels(),
                "word": t.activity_word(g.edge_count()),
                "i": t.hom_grading(),
                "j_plus": n - 1 - t.hom_grading(),
                "j_minus": n - t.hom_grading(),
                "live": t.live.len(),
            })
        })
        .collect();
    json!({"edges": g.edge_count(), "trees": list})
}

fn trees_table(g: &OrderedGraph) -> String {
    let trees = enumerate_nbc_trees(g);
    let n = g.vertex_count();
    let mut out = String::from("tree\tedges\tword\ti\tj+\tj-\n");
    for t in trees.iter() {
        let i = t.hom_grading();
        out.push_str(&format!("{}\t{:?}\t{}\t{i}\t{}\t{}\n", t.name(), t.edges, t.activity_word(g.edge_count()), n - 1 - i, n - i));
    }
    out
}

fn complex_table(c: &BigradedComplex) -> String {
    let mut out = String::new();
    for (&j, s) in &c.stripes {
        for (i, labels) in s.labels.iter().enumerate() {
            if labels.is_empty() {
                continue;
            }
            out.push_str(&format!("(i={i}, j={j}): {}\n", labels.join(" ")));
            if let Some(d) = s.matrix(i).filter(|d| !d.is_zero()) {
                for (r, col, v) in d.triplets() {
                    out.push_str(&format!("    d {} -> {}: {v}\n", labels[col], s.labels[i + 1][r]));
                }
            }
        }
    }
    out
}

fn poly_json(g: &OrderedGraph, cfg: &RunConfig) -> Result<Value, CliError> {
    let trees = enumerate_nbc_trees(g);
    let euler = graded_euler_characteristic(&build_complex(g, cfg, cfg.model)?);
    Ok(json!({
        "m": cfg.m,
        "model": cfg.model.name(),
        "deletion_contraction": chromatic_poly_deletion_contraction(g).to_json("lambda"),
        "nbc": chromatic_poly_nbc(g, &trees).to_json("lambda"),
        "graded_euler": euler.to_json("q"),
    }))
}

fn poly_table(g: &OrderedGraph, cfg: &RunConfig) -> Result<String, CliError> {
    let trees = enumerate_nbc_trees(g);
    let euler = graded_euler_characteristic(&build_complex(g, cfg, cfg.model)?);
    Ok(format!(
        "P (deletion-contraction): {}\nP (NBC expansion):        {}\ngraded Euler (m={}, {}): {}\n",
        chromatic_poly_deletion_contraction(g),
        chromatic_poly_nbc(g, &trees),
        cfg.m,
        cfg.model.name(),
        euler
    ))
}

/// Per-check outcomes for one graph.
#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub graph: String,
    pub m: u32,
    pub outcomes: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.status != Status::Fail)
    }

    pub fn to_json(&self) -> Value {
        let checks: Vec<Value> = self
            .outcomes
            .iter()
            .map(|o| json!({"check": o.check.name(), "status": o.status.name(), "detail": o.detail, "seconds": o.seconds}))
            .collect();
        json!({"graph": self.graph, "m": self.m, "passed": self.passed(), "checks": checks})
    }

    pub fn render(&self) -> String {
        let mut out = format!("graph {} (m={})\n", self.graph, self.m);
        for o in &self.outcomes {
            out.push_str(&format!("  {:<10} {:<4} {:>8.3}s  {}\n", o.check.name(), o.status.name(), o.seconds, o.detail));
        }
        out.push_str(if self.passed() { "  overall: pass\n" } else { "  overall: FAIL\n" });
        out
    }
}

pub fn cmd_verify(g: &OrderedGraph, cfg: &RunConfig) -> Result<VerifyReport, CliError> {
    let v = Verifier::new(g, cfg.m, cfg.limits)?;
    let outcomes = cfg.checks.iter().map(|&c| v.run(c)).collect::<Result<Vec<_>, _>>()?;
    Ok(VerifyReport { graph: graph_name(g), m: cfg.m, outcomes })
}

fn counts_json(c: &BigradedComplex) -> Vec<Value> {
    c.dims().into_iter().map(|((i, j), n)| json!({"i": i, "j": j, "count": n})).collect()
}

/// Generator counts and homology timings for the spanning-tree model and the oracle.
pub fn cmd_bench(g: &OrderedGraph, cfg: &RunConfig) -> Result<Value, CliError> {
    let mut models = serde_json::Map::new();
    for model in [Model::SpanningTree, Model::Oracle] {
        let start = Instant::now();
        let c = build_complex(g, cfg, model)?;
        homology(&c)?;
        models.insert(
            model.name().to_string(),
            json!({
                "generators": c.generator_count(),
                "by_grading": counts_json(&c),
                "seconds": start.elapsed().as_secs_f64(),
            }),
        );
    }
    Ok(json!({"graph": graph_name(g), "m": cfg.m, "models": models}))
}

fn bench_table(v: &Value) -> String {
    let mut out = format!("graph {} (m={})\n", v["graph"].as_str().unwrap_or("?"), v["m"]);
    for (name, data) in v["models"].as_object().into_iter().flatten() {
        out.push_str(&format!(
            "  {:<14} {:>8} generators  {:>8.3}s\n",
            name,
            data["generators"],
            data["seconds"].as_f64().unwrap_or(0.0)
        ));
    }
    out
}

fn graph_name(g: &OrderedGraph) -> String {
    g.name().unwrap_or("graph").to_string()
}

fn render_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

/// Runs one graph through a command, returning JSON, text and a pass flag.
fn run_one(command: &Command, g: &OrderedGraph, cfg: &RunConfig) -> Result<(Value, String, bool), CliError> {
    Ok(match command {
        Command::Compute(_) => {
            let h = cmd_compute(g, cfg)?;
            (h.to_json(cfg.m, cfg.model.name()), h.render(), true)
        }
        Command::Trees(_) => (trees_json(g), trees_table(g), true),
        Command::Complex(_) => {
            let c = build_complex(g, cfg, Model::SpanningTree)?;
            (c.to_json(Model::SpanningTree.name()), complex_table(&c), true)
        }
        Command::Oracle { nbc_only, .. } => {
            let model = if *nbc_only { Model::OracleNbc } else { Model::Oracle };
            let c = build_complex(g, cfg, model)?;
            (c.to_json(model.name()), complex_table(&c), true)
        }
        Command::Poly(_) => (poly_json(g, cfg)?, poly_table(g, cfg)?, true),
        Command::Verify(_) => {
            let r = cmd_verify(g, cfg)?;
            (r.to_json(), r.render(), r.passed())
        }
        Command::Bench(_) => {
            let v = cmd_bench(g, cfg)?;
            let t = bench_table(&v);
            (v, t, true)
        }
    })
}

impl Command {
    pub fn common(&self) -> &Common {
        match self {
            Command::Compute(c)
            | Command::Trees(c)
            | Command::Complex(c)
            | Command::Poly(c)
            | Command::Verify(c)
            | Command::Bench(c) => c,
            Command::Oracle { common, .. } => common,
        }
    }
}

/// Executes a parsed command line.
pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let cfg = RunConfig::from_common(cli.command.common())?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start thread pool: {e}")))?;
    pool.install(|| {
        let mut values = Vec::new();
        let mut text = String::new();
        let mut all_pass = true;
        for g in &cfg.graphs {
            let (v, t, pass) = run_one(&cli.command, g, &cfg)?;
            all_pass &= pass;
            if cfg.graphs.len() > 1 {
                text.push_str(&format!("== {}\n", graph_name(g)));
                values.push(json!({"graph": graph_name(g), "result": v}));
            } else {
                values.push(v);
            }
            text.push_str(&t);
        }
        let output = match cfg.output {
            OutputFormat::Table => text,
            OutputFormat::Json if values.len() == 1 => render_json(&values[0]),
            OutputFormat::Json => render_json(&Value::Array(values)),
        };
        Ok(Outcome { output, exit_code: if all_pass { 0 } else { EXIT_CHECK_FAILED } })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_spec_parsing() {
        let s: RandomSpec = "n=3, v=5, extra=2, seed=9".parse().unwrap();
        assert_eq!(s, RandomSpec { count: 3, vertices: 5, extra: 2, seed: 9 });
        assert_eq!("".parse::<RandomSpec>().unwrap().vertices, 6);
        assert!("q=1".parse::<RandomSpec>().is_err());
        assert!("v=4,extra=4".parse::<RandomSpec>().is_err());
    }

    #[test]
    fn exit_codes() {
        let guard = CliError::Core(Error::LimitExceeded { what: "oracle", limit: 16, actual: 21 });
        assert_eq!(guard.exit_code(), 2);
        assert_eq!(CliError::Core(Error::NotAComplex { i: 0, j: 1 }).exit_code(), 3);
        assert_eq!(CliError::Graph(GraphError::NoVertices).exit_code(), 1);
    }
}
