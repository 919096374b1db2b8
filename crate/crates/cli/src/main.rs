use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pantslab::bounds;
use pantslab::cycles::find_disjoint_cycles;
use pantslab::enumerate::{cap_from_env, enumerate_keyed};
use pantslab::graph::validate;
use pantslab::moves::ScheduleLog;
use pantslab::oracle::{self, Metric, OracleConfig};
use pantslab::random::{random_cubic, random_tree, rng};
use pantslab::reduction::{to_linear, to_treelike, ReductionTrace};
use pantslab::{Disjointness, Error, Exec, MoveSchedule, PantsGraph, RawGraph};
use serde::Serialize;
use serde_json::{json, Value};

const EXIT_INVARIANT: u8 = 2;
const EXIT_CAP: u8 = 3;
const EXIT_INPUT: u8 = 4;

#[derive(Parser, Serialize)]
#[command(name = "pantslab", version, about = "Pants graphs, move schedules and diameter bounds")]
struct Cli {
    /// Worker threads (defaults to available parallelism).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Write the artifact here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
enum Command {
    /// Check a graph file and report every violation.
    Validate { file: PathBuf },
    /// Genus, punctures, girth and counts of a graph.
    Metrics {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = GraphFormat::Json)]
        format: GraphFormat,
    },
    /// Exact distance between two graphs, with a witness schedule.
    Distance {
        source: PathBuf,
        target: PathBuf,
        #[command(flatten)]
        oracle: OracleArgs,
        /// Also write the witness schedule here.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Exact diameter of the move graph on classes of a stratum.
    Diameter {
        #[command(flatten)]
        stratum: Stratum,
        #[command(flatten)]
        oracle: OracleArgs,
    },
    /// List the isomorphism classes of a stratum.
    Enumerate {
        #[command(flatten)]
        stratum: Stratum,
        #[arg(long)]
        cap_classes: Option<usize>,
        #[arg(long, value_enum, default_value_t = GraphFormat::Json)]
        format: GraphFormat,
    },
    /// Build a replay-verified schedule to the linear tree or a treelike graph.
    Reduce {
        file: PathBuf,
        #[arg(long, value_enum)]
        target: Target,
        /// Per-phase CSV: phase, batch sizes, cost, effective genus.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Replay a schedule file and check every recorded cost and the end graph.
    Replay { file: PathBuf },
    /// Evaluate a bound: `bounds <name> --L 0` or `bounds <name> --param L=0`;
    /// `bounds sweep <name> --over key=v1,v2,...` emits CSV.
    #[command(allow_hyphen_values = true)]
    Bounds {
        name: String,
        #[arg(trailing_var_arg = true, allow_hyphen_values = true)]
        params: Vec<String>,
    },
    /// Batch experiments over strata or random samples, as CSV.
    Sweep(SweepArgs),
}

#[derive(Args, Serialize)]
struct Stratum {
    #[arg(long)]
    g: usize,
    #[arg(long)]
    n: usize,
}

#[derive(Args, Serialize, Clone, Copy)]
struct OracleArgs {
    #[arg(long, default_value = "cubical")]
    metric: Metric,
    /// Work on isomorphism classes.
    #[arg(long)]
    quotient: bool,
    #[arg(long, default_value = "vertex")]
    disjoint: Disjointness,
    #[arg(long)]
    cap_classes: Option<usize>,
}

impl OracleArgs {
    fn config(&self) -> OracleConfig {
        OracleConfig {
            disjoint: self.disjoint,
            ..OracleConfig::with_metric(self.metric)
        }
    }

    fn cap(&self) -> usize {
        self.cap_classes.unwrap_or_else(cap_from_env)
    }
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum GraphFormat {
    Json,
    Dot,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum Target {
    Linear,
    Treelike,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum SweepKind {
    /// Quotient diameters over a range of strata.
    Diameters,
    /// Trim-and-melt costs on random trees.
    Trees,
    /// Treelike reduction costs on random cubic graphs.
    Genus,
    /// Greedy disjoint cycle counts on random cubic graphs.
    Cycles,
}

#[derive(Args, Serialize)]
struct SweepArgs {
    #[arg(long, value_enum)]
    kind: SweepKind,
    /// Genus, or a range `a..b` (inclusive) for diameters.
    #[arg(long, default_value = "0")]
    g: String,
    /// Punctures, or a range `a..b` (inclusive) for diameters.
    #[arg(long, default_value = "4..7")]
    n: String,
    /// Sizes for random samples: leaves for trees, genus otherwise.
    #[arg(long, value_delimiter = ',', default_value = "64,256")]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 10)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    oracle: OracleArgs,
}

#[derive(Debug)]
enum Failure {
    Core(Error),
    Input(String),
    Invariant(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => EXIT_INPUT,
            Failure::Invariant(_) => EXIT_INVARIANT,
            Failure::Core(e) => match e {
                Error::CapExceeded { .. } | Error::RadiusExceeded { .. } => EXIT_CAP,
                Error::MalformedMove { .. }
                | Error::OverlappingBatch { .. }
                | Error::ReplayMismatch(_)
                | Error::Invariant(_) => EXIT_INVARIANT,
                _ => EXIT_INPUT,
            },
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Core(e) => e.to_string(),
            Failure::Input(s) | Failure::Invariant(s) => s.clone(),
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

struct Artifact {
    body: String,
    /// Set when the artifact was produced but an asserted property failed.
    violation: Option<String>,
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> CliResult<PantsGraph> {
    let text = read(path)?;
    let value: Value = serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let raw: RawGraph = serde_json::from_value(unwrap_result(value))
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Ok(PantsGraph::try_from(raw)?)
}

/// Artifacts wrap their payload as `{provenance, result}`; inputs accept
/// either form.
fn unwrap_result(value: Value) -> Value {
    match value {
        Value::Object(mut m) if m.contains_key("provenance") && m.contains_key("result") => m.remove("result").unwrap(),
        v => v,
    }
}

fn provenance(cli: &Cli) -> Value {
    json!({
        "tool": "pantslab",
        "version": env!("CARGO_PKG_VERSION"),
        "config": cli,
    })
}

fn wrap(prov: &Value, result: impl Serialize) -> String {
    let v = json!({ "provenance": prov, "result": result });
    serde_json::to_string_pretty(&v).expect("artifacts serialize") + "\n"
}

fn csv_with_header(prov: &Value, body: &str) -> String {
    format!("# provenance: {prov}\n{body}")
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn ok(body: String) -> CliResult<Artifact> {
    Ok(Artifact { body, violation: None })
}

fn run(cli: &Cli, exec: Exec) -> CliResult<Artifact> {
    let prov = provenance(cli);
    match &cli.command {
        Command::Validate { file } => {
            let text = read(file)?;
            let raw: RawGraph = serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", file.display())))?;
            let report = validate(&raw);
            let violation = (!report.is_valid()).then(|| "graph is invalid".to_string());
            Ok(Artifact {
                body: wrap(&prov, &report),
                violation,
            })
        }
        Command::Metrics { file, format } => {
            let g = load_graph(file)?;
            match format {
                GraphFormat::Json => ok(wrap(&prov, g.metrics())),
                GraphFormat::Dot => ok(format!("// provenance: {prov}\n{}", g.to_dot())),
            }
        }
        Command::Distance {
            source,
            target,
            oracle: o,
            witness,
        } => {
            let a = load_graph(source)?;
            let b = load_graph(target)?;
            let cfg = OracleConfig { exec, ..o.config() };
            let result = oracle::distance(&a, &b, o.quotient, &cfg)?;
            if let Some(path) = witness {
                write_file(path, &wrap(&prov, result.witness.to_log()))?;
            }
            ok(wrap(&prov, &result))
        }
        Command::Diameter { stratum, oracle: o } => {
            let cfg = OracleConfig { exec, ..o.config() };
            let report = oracle::diameter(stratum.g, stratum.n, o.quotient, o.cap(), &cfg)?;
            let violation = (!report.connected).then(|| "move graph is disconnected".to_string());
            Ok(Artifact {
                body: wrap(&prov, &report),
                violation,
            })
        }
        Command::Enumerate {
            stratum,
            cap_classes,
            format,
        } => {
            let cap = cap_classes.unwrap_or_else(cap_from_env);
            let classes = enumerate_keyed(stratum.g, stratum.n, cap, exec)?;
            match format {
                GraphFormat::Json => {
                    let list: Vec<Value> = classes
                        .iter()
                        .map(|(k, g)| json!({ "key": k, "graph": g.to_raw() }))
                        .collect();
                    ok(wrap(&prov, json!({ "count": list.len(), "classes": list })))
                }
                GraphFormat::Dot => {
                    let mut out = format!("// provenance: {prov}\n");
                    for (k, g) in &classes {
                        out.push_str(&format!("// {k}\n{}", g.to_dot()));
                    }
                    ok(out)
                }
            }
        }
        Command::Reduce { file, target, trace } => {
            let g = load_graph(file)?;
            let (schedule, tr): (MoveSchedule, ReductionTrace) = match target {
                Target::Linear => to_linear(&g)?,
                Target::Treelike => to_treelike(&g)?,
            };
            let log = schedule.to_log();
            let replayed = log.replay()?;
            if replayed.end != schedule.end {
                return Err(Failure::Invariant("replayed schedule ends elsewhere".into()));
            }
            if let Some(path) = trace {
                write_file(path, &csv_with_header(&prov, &tr.to_csv()))?;
            }
            ok(wrap(&prov, log))
        }
        Command::Replay { file } => {
            let text = read(file)?;
            let value: Value = serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", file.display())))?;
            let log: ScheduleLog = serde_json::from_value(unwrap_result(value))
                .map_err(|e| Failure::Input(format!("{}: {e}", file.display())))?;
            let schedule = log.replay()?;
            let cost = schedule.cost();
            ok(wrap(
                &prov,
                json!({
                    "batches": schedule.batches.len(),
                    "batch_sizes": schedule.batch_sizes(),
                    "total_cost": cost.cubical,
                    "unit_moves": cost.unit_moves,
                    "end": schedule.end.to_raw(),
                }),
            ))
        }
        Command::Bounds { name, params } => run_bounds(&prov, name, params),
        Command::Sweep(args) => run_sweep(&prov, args, exec),
    }
}

/// Parses `--key value`, `--key=value`, `key=value` and `--param key=value`.
fn parse_params(args: &[String]) -> CliResult<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    let mut i = 0;
    while i < args.len() {
        let a = args[i].as_str();
        let (key, value) = if a == "--param" || a == "--over" {
            let kv = args.get(i + 1).ok_or_else(|| Failure::Input(format!("{a} needs key=value")))?;
            i += 1;
            let (k, v) = kv.split_once('=').ok_or_else(|| Failure::Input(format!("expected key=value, got {kv}")))?;
            let k = if a == "--over" { format!("over:{k}") } else { k.to_string() };
            (k, v.to_string())
        } else if let Some(rest) = a.strip_prefix("--") {
            match rest.split_once('=') {
                Some((k, v)) => (k.to_string(), v.to_string()),
                None => {
                    let v = args.get(i + 1).ok_or_else(|| Failure::Input(format!("--{rest} needs a value")))?;
                    i += 1;
                    (rest.to_string(), v.clone())
                }
            }
        } else if let Some((k, v)) = a.split_once('=') {
            (k.to_string(), v.to_string())
        } else {
            return Err(Failure::Input(format!("unexpected argument {a}")));
        };
        out.insert(key, value);
        i += 1;
    }
    Ok(out)
}

fn number(key: &str, v: &str) -> CliResult<f64> {
    v.parse::<f64>()
        .map_err(|_| Failure::Input(format!("parameter {key}: `{v}` is not a number")))
}

fn run_bounds(prov: &Value, name: &str, raw: &[String]) -> CliResult<Artifact> {
    if name == "sweep" {
        let bound = raw
            .first()
            .filter(|s| !s.starts_with("--"))
            .ok_or_else(|| Failure::Input("bounds sweep needs a bound name".into()))?;
        let params = parse_params(&raw[1..])?;
        let mut base = BTreeMap::new();
        let mut over = None;
        for (k, v) in &params {
            if let Some(key) = k.strip_prefix("over:") {
                let values = v.split(',').map(|x| number(key, x)).collect::<CliResult<Vec<f64>>>()?;
                over = Some((key.to_string(), values));
            } else {
                base.insert(k.clone(), number(k, v)?);
            }
        }
        let (key, values) = over.ok_or_else(|| Failure::Input("bounds sweep needs --over key=v1,v2,...".into()))?;
        let csv = bounds::sweep(bound, &base, &key, &values)?;
        return ok(csv_with_header(prov, &csv));
    }
    let mut params = BTreeMap::new();
    for (k, v) in parse_params(raw)? {
        params.insert(k.clone(), number(&k, &v)?);
    }
    let report = bounds::evaluate(name, &params)?;
    let violation = (report.satisfied == Some(false)).then(|| format!("{} does not hold", report.inequality));
    Ok(Artifact {
        body: wrap(prov, &report),
        violation,
    })
}

fn parse_range(s: &str) -> CliResult<(usize, usize)> {
    let bad = || Failure::Input(format!("expected N or A..B, got {s}"));
    match s.split_once("..") {
        Some((a, b)) => {
            let a = a.trim().parse().map_err(|_| bad())?;
            let b = b.trim().parse().map_err(|_| bad())?;
            if a > b {
                return Err(bad());
            }
            Ok((a, b))
        }
        None => {
            let v = s.trim().parse().map_err(|_| bad())?;
            Ok((v, v))
        }
    }
}

fn run_sweep(prov: &Value, args: &SweepArgs, exec: Exec) -> CliResult<Artifact> {
    let mut body = String::new();
    let mut violation = None;
    match args.kind {
        SweepKind::Diameters => {
            let (g0, g1) = parse_range(&args.g)?;
            let (n0, n1) = parse_range(&args.n)?;
            let cfg = OracleConfig { exec, ..args.oracle.config() };
            body.push_str("g,n,classes,diameter,connected,explored_edges\n");
            for g in g0..=g1 {
                for n in n0..=n1 {
                    if !pantslab::enumerate::is_stable(g, n) {
                        continue;
                    }
                    let r = oracle::diameter(g, n, true, args.oracle.cap(), &cfg)?;
                    if !r.connected {
                        violation = Some(format!("({g}, {n}) move graph is disconnected"));
                    }
                    body.push_str(&format!(
                        "{g},{n},{},{},{},{}\n",
                        r.class_count, r.diameter, r.connected, r.explored_edges
                    ));
                }
            }
        }
        SweepKind::Trees | SweepKind::Genus | SweepKind::Cycles => {
            let header = match args.kind {
                SweepKind::Trees => "n,sample,cost,unit_moves,batches,ratio\n",
                SweepKind::Genus => "g,sample,cost,unit_moves,iterations,ratio\n",
                _ => "g,sample,cycles,threshold\n",
            };
            body.push_str(header);
            let jobs: Vec<(usize, u64)> = args
                .sizes
                .iter()
                .flat_map(|&s| (0..args.samples).map(move |i| (s, i)))
                .collect();
            let rows = exec.map(&jobs, |&(size, i)| sample_row(args.kind, size, args.seed.wrapping_add(i)));
            for (row, &(size, i)) in rows.into_iter().zip(&jobs) {
                body.push_str(&format!("{size},{i},{}\n", row?));
            }
        }
    }
    Ok(Artifact {
        body: csv_with_header(prov, &body),
        violation,
    })
}

fn sample_row(kind: SweepKind, size: usize, seed: u64) -> Result<String, Error> {
    let mut r = rng(seed);
    let s = size as f64;
    Ok(match kind {
        SweepKind::Trees => {
            let (sched, _) = to_linear(&random_tree(size, &mut r))?;
            let c = sched.cost();
            format!("{},{},{},{}", c.cubical, c.unit_moves, sched.batches.len(), c.cubical / s.sqrt())
        }
        SweepKind::Genus => {
            let (sched, tr) = to_treelike(&random_cubic(size, &mut r))?;
            let c = sched.cost();
            format!(
                "{},{},{},{}",
                c.cubical,
                c.unit_moves,
                tr.effective_genus.len(),
                c.cubical / (s.sqrt() * s.ln())
            )
        }
        SweepKind::Cycles => {
            let cycles = find_disjoint_cycles(&random_cubic(size, &mut r))?;
            format!("{},{}", cycles.len(), std::f64::consts::LN_2 / 2.0 * s / s.ln())
        }
        SweepKind::Diameters => unreachable!("diameters are not sampled"),
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let exec = Exec::default();
    let outcome = match cli.workers {
        Some(w) if w > 0 => exec.with_workers(w, || run(&cli, exec)),
        _ => run(&cli, exec),
    };
    match outcome {
        Ok(artifact) => {
            let written = match &cli.out {
                Some(path) => write_file(path, &artifact.body),
                None => {
                    print!("{}", artifact.body);
                    Ok(())
                }
            };
            if let Err(f) = written {
                eprintln!("error: {}", f.message());
                return ExitCode::from(f.code());
            }
            match artifact.violation {
                Some(msg) => {
                    eprintln!("invariant violated: {msg}");
                    ExitCode::from(EXIT_INVARIANT)
                }
                None => ExitCode::SUCCESS,
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
