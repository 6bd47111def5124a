//! Command-line front end. [`run`] returns the process exit code: 0 on
//! success, 1 for usage errors, 2 for data errors.

use std::io::{BufRead, Write};
use std::net::{IpAddr, SocketAddr};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use infodd_core::{
    induce, ConsistencyPolicy, DecisionTable, Diagram, InductionConfig, ResultView, Session, TableSchema, View,
};

use crate::bench::{load_dir, report_csv, report_text, run_benchmark, standard_configs};
use crate::catalog::{parse_catalog, parse_schema, Catalog};
use crate::config::{parse_algorithm, parse_config, parse_policy, parse_structure, ConfigDoc, Criterion};
use crate::diagram_json::{deserialize, paths_to_json_lines, serialize};
use crate::error::{read_file, Error};
use crate::fetch::{fetch_all, parse_manifest, synthesize_monks_tests, MANIFEST_JSON};
use crate::monks::parse_monks;
use crate::report::{analyze, entropy_json};
use crate::service::{serve, AppState};
use crate::tabular::parse_table_csv;

#[derive(Debug, Parser)]
#[command(name = "infodd", version, about = "Entropy-guided decision diagrams for decision tables")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Induce a diagram and write it as JSON.
    Build(BuildArgs),
    /// Print H(f) and H(f|x) for every variable as JSON.
    Analyze(AnalyzeArgs),
    /// Run every dataset in a directory through greedy and iterated induction.
    Bench(BenchArgs),
    /// List the root-to-terminal paths of a diagram as JSON lines.
    Paths(PathsArgs),
    /// Serve the navigator HTTP API.
    Serve(ServeArgs),
    /// Interactive question-at-a-time session in the terminal.
    Navigate(NavigateArgs),
    /// Download benchmark datasets.
    Fetch(FetchArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Catalog document (JSON).
    #[arg(long, conflicts_with_all = ["csv", "monks"])]
    pub catalog: Option<PathBuf>,
    /// CSV table; needs --schema.
    #[arg(long, requires = "schema", conflicts_with = "monks")]
    pub csv: Option<PathBuf>,
    /// Schema document for --csv.
    #[arg(long)]
    pub schema: Option<PathBuf>,
    /// MONK's problem file.
    #[arg(long)]
    pub monks: Option<PathBuf>,
    /// strict or majority.
    #[arg(long)]
    pub inconsistency: Option<String>,
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// JSON file with induction settings; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// greedy or iter.
    #[arg(long)]
    pub algo: Option<String>,
    #[arg(long)]
    pub iters: Option<usize>,
    /// tree or dd.
    #[arg(long)]
    pub structure: Option<String>,
    /// levels,nodes or nodes,levels.
    #[arg(long)]
    pub criterion: Option<Criterion>,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub input: InputArgs,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long)]
    pub datasets: PathBuf,
    #[arg(long, default_value_t = 10)]
    pub iters: usize,
    /// CSV report path.
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[arg(long, default_value = "nodes,levels")]
    pub criterion: Criterion,
    /// Widen every variable to this arity before induction.
    #[arg(long)]
    pub pad_arity: Option<usize>,
    #[arg(long, default_value = "majority")]
    pub inconsistency: String,
}

#[derive(Debug, Args)]
pub struct PathsArgs {
    #[arg(long)]
    pub diagram: PathBuf,
    /// Catalog or schema whose labels name the products.
    #[arg(long)]
    pub catalog: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    /// Diagram built for the catalog; a greedy build is used when absent.
    #[arg(long)]
    pub diagram: Option<PathBuf>,
    #[arg(long)]
    pub catalog: PathBuf,
    #[arg(long, default_value_t = 8080)]
    pub port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    pub host: IpAddr,
    /// Directory of static UI assets served under `/`.
    #[arg(long = "static")]
    pub static_dir: Option<PathBuf>,
    /// Idle minutes before a session expires.
    #[arg(long, default_value_t = 30)]
    pub idle_minutes: u64,
}

#[derive(Debug, Args)]
pub struct NavigateArgs {
    #[arg(long)]
    pub diagram: Option<PathBuf>,
    #[arg(long)]
    pub catalog: PathBuf,
}

#[derive(Debug, Args)]
pub struct FetchArgs {
    #[arg(long, default_value = "datasets")]
    pub dir: PathBuf,
    /// Manifest replacing the bundled one.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    /// Write the three MONK's test sets from their target concepts instead
    /// of downloading.
    #[arg(long)]
    pub synthesize_tests: bool,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Data(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Data(e) => write!(f, "{e}"),
        }
    }
}

type CliResult<T = ()> = Result<T, CliError>;

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, input: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli.command, input, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute(command: Command, input: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    match command {
        Command::Build(a) => build(a, out),
        Command::Analyze(a) => {
            let table = load_input(&a.input)?;
            let report = analyze(&table)?;
            emit(out, &entropy_json(&table, &report))
        }
        Command::Bench(a) => bench(a, out),
        Command::Paths(a) => {
            let schema = a.catalog.as_deref().map(load_schema).transpose()?;
            let diagram = deserialize(&read_file(&a.diagram)?, schema)?;
            emit(out, &paths_to_json_lines(&diagram, &diagram.enumerate_paths()))
        }
        Command::Serve(a) => serve_cmd(a),
        Command::Navigate(a) => {
            let (_, diagram) = catalog_diagram(&a.catalog, a.diagram.as_deref())?;
            navigate(&diagram, input, out).map_err(|e| io_error("terminal", e))?;
            Ok(())
        }
        Command::Fetch(a) => fetch(a, out, err),
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn io_error(path: &str, source: std::io::Error) -> CliError {
    CliError::Data(Error::Io { path: path.into(), source })
}

fn emit(out: &mut dyn Write, text: &str) -> CliResult {
    out.write_all(text.as_bytes()).map_err(|e| io_error("stdout", e))
}

fn write_output(path: Option<&Path>, text: &str, out: &mut dyn Write) -> CliResult {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| io_error(&p.display().to_string(), e)),
        None => emit(out, text),
    }
}

fn policy(flag: Option<&str>, default: ConsistencyPolicy) -> CliResult<ConsistencyPolicy> {
    flag.map_or(Ok(default), |p| parse_policy(p).map_err(|e| usage(e.to_string())))
}

fn load_input(input: &InputArgs) -> CliResult<DecisionTable> {
    load_input_with(input, policy(input.inconsistency.as_deref(), ConsistencyPolicy::Strict)?)
}

fn load_input_with(input: &InputArgs, policy: ConsistencyPolicy) -> CliResult<DecisionTable> {
    if let Some(path) = &input.catalog {
        return Ok(parse_catalog(&read_file(path)?, policy)?.table);
    }
    if let Some(path) = &input.csv {
        let schema_path = input.schema.as_ref().ok_or_else(|| usage("--csv needs --schema"))?;
        let schema = Arc::new(parse_schema(&read_file(schema_path)?)?);
        return Ok(parse_table_csv(&read_file(path)?, schema, policy)?);
    }
    if let Some(path) = &input.monks {
        return Ok(parse_monks(&read_file(path)?, policy)?);
    }
    Err(usage("one of --catalog, --csv or --monks is required"))
}

fn load_schema(path: &Path) -> CliResult<Arc<TableSchema>> {
    Ok(Arc::new(parse_schema(&read_file(path)?)?))
}

fn build_config(a: &BuildArgs) -> CliResult<InductionConfig> {
    let base = match &a.config {
        Some(path) => parse_config(&read_file(path)?)?,
        None => InductionConfig::default(),
    };
    let overrides = ConfigDoc {
        algorithm: a.algo.clone(),
        iterations: a.iters,
        structure: a.structure.clone(),
        criterion: None,
        tie_break: None,
        inconsistency: a.input.inconsistency.clone(),
    };
    // check the spellings first so that typos are usage errors
    if let Some(x) = &a.algo {
        parse_algorithm(x).map_err(|e| usage(e.to_string()))?;
    }
    if let Some(x) = &a.structure {
        parse_structure(x).map_err(|e| usage(e.to_string()))?;
    }
    let mut base = base;
    if a.iters.is_some() && a.algo.is_none() && base.algorithm == infodd_core::Algorithm::Greedy {
        base.algorithm = infodd_core::Algorithm::Iter;
    }
    let mut config = overrides.apply(base).map_err(|e| usage(e.to_string()))?;
    if let Some(c) = a.criterion {
        config.criterion = c.0;
    }
    Ok(config)
}

fn build(a: BuildArgs, out: &mut dyn Write) -> CliResult {
    let config = build_config(&a)?;
    let table = load_input_with(&a.input, config.inconsistency)?;
    let diagram = induce(&table, &config).map_err(Error::from)?;
    let cost = diagram.cost();
    log::info!("built {} nonterminals, {} levels, {} terminals", cost.nonterminals, cost.levels, cost.terminals);
    write_output(a.out.as_deref(), &serialize(&diagram), out)
}

fn bench(a: BenchArgs, out: &mut dyn Write) -> CliResult {
    if a.iters == 0 {
        return Err(usage("--iters must be at least 1"));
    }
    let policy = parse_policy(&a.inconsistency).map_err(|e| usage(e.to_string()))?;
    let datasets = load_dir(&a.datasets, policy, a.pad_arity)?;
    let configs = standard_configs(a.iters, a.criterion.0);
    let rows = run_benchmark(&datasets, &configs);
    emit(out, &report_text(&rows, &configs))?;
    if let Some(path) = &a.report {
        std::fs::write(path, report_csv(&rows)).map_err(|e| io_error(&path.display().to_string(), e))?;
    }
    Ok(())
}

/// The catalog and a diagram for it, read from `diagram` or built greedily.
fn catalog_diagram(catalog: &Path, diagram: Option<&Path>) -> CliResult<(Catalog, Diagram)> {
    let catalog = parse_catalog(&read_file(catalog)?, ConsistencyPolicy::Strict)?;
    let diagram = match diagram {
        Some(path) => deserialize(&read_file(path)?, Some(catalog.schema.clone()))?,
        None => induce(&catalog.table, &InductionConfig::default()).map_err(Error::from)?,
    };
    Ok((catalog, diagram))
}

fn serve_cmd(a: ServeArgs) -> CliResult {
    let (catalog, diagram) = catalog_diagram(&a.catalog, a.diagram.as_deref())?;
    let app =
        AppState::new(catalog.name, diagram).with_idle_timeout(std::time::Duration::from_secs(a.idle_minutes * 60));
    let static_dir = a.static_dir.filter(|d| d.is_dir());
    let runtime = tokio::runtime::Runtime::new().map_err(|e| io_error("runtime", e))?;
    runtime
        .block_on(serve(SocketAddr::new(a.host, a.port), app, static_dir))
        .map_err(|e| io_error(&format!("{}:{}", a.host, a.port), e))
}

fn fetch(a: FetchArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    if a.synthesize_tests {
        for path in synthesize_monks_tests(&a.dir)? {
            emit(out, &format!("wrote {}\n", path.display()))?;
        }
        return Ok(());
    }
    let manifest = match &a.manifest {
        Some(p) => parse_manifest(&read_file(p)?)?,
        None => parse_manifest(MANIFEST_JSON)?,
    };
    for f in fetch_all(&manifest, &a.dir)? {
        emit(out, &format!("{}  {}\n", f.sha256, f.path.display()))?;
        if !f.pinned {
            let _ = writeln!(err, "warning: {} has no pinned checksum", f.path.display());
        }
    }
    Ok(())
}

/// Terminal dialogue: answer with an option number, `u` to undo, `r` to
/// restart, `q` to quit. Ends at end of input.
pub fn navigate(diagram: &Diagram, input: &mut dyn BufRead, out: &mut dyn Write) -> std::io::Result<()> {
    let mut session = Session::new(diagram);
    print_view(&session.view(), out)?;
    let mut line = String::new();
    loop {
        write!(out, "> ")?;
        out.flush()?;
        line.clear();
        if input.read_line(&mut line)? == 0 {
            writeln!(out)?;
            return Ok(());
        }
        let cmd = line.trim();
        match cmd {
            "" => continue,
            "q" | "quit" => return Ok(()),
            "u" | "undo" => match session.undo() {
                Ok(q) => print_view(&View::Question(q), out)?,
                Err(e) => writeln!(out, "{e}")?,
            },
            "r" | "restart" => print_view(&session.restart(), out)?,
            _ => match cmd.parse::<u32>() {
                Ok(n) if n >= 1 => match session.answer(n - 1) {
                    Ok(view) => print_view(&view, out)?,
                    Err(e) => writeln!(out, "{e}")?,
                },
                _ => writeln!(out, "type an option number, u (undo), r (restart) or q (quit)")?,
            },
        }
    }
}

fn print_view(view: &View, out: &mut dyn Write) -> std::io::Result<()> {
    match view {
        View::Question(q) => {
            writeln!(out, "{}?", q.variable)?;
            for (i, o) in q.options.iter().enumerate() {
                writeln!(out, "  {}) {o}", i + 1)?;
            }
        }
        View::Resolved(ResultView::Product { id, label }) => writeln!(out, "result: {label} (#{id})")?,
        View::Resolved(ResultView::NoMatch) => writeln!(out, "no product matches your choices (u to undo)")?,
    }
    Ok(())
}
