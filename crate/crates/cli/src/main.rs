//! Batch command-line surface for the matsym toolkit.
//!
//! Subcommands: `solve`, `verify`, `compare`, `sweep`, `problem`. Outputs are
//! machine-readable: stats as CSV rows, reports as JSON. Exit codes are a
//! stable contract: 0 success, 1 infeasible, 2 usage error, 3 budget or
//! limit exceeded.

mod source;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};

use matsym::model::json::model_to_json;
use matsym::oracle::{self, Budgets};
use matsym::solver::{self, SearchConfig, SearchMode, SolveError, ValOrder, VarOrder};
use matsym::symbreak::{self, SchemeSpec};
use matsym::{ConstraintSet, FlattenOrder, MatrixModel, SearchStats, Value};

use source::ModelSource;

const EXIT_INFEASIBLE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;

/// Failures carrying their process exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn budget(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_BUDGET,
            message: message.into(),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Parser)]
#[command(
    name = "matsym",
    about = "Symmetry-breaking toolkit for matrix models",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a model with an optional symmetry-breaking scheme appended.
    Solve(SolveArgs),
    /// Brute-force soundness/completeness report for a scheme on a model.
    Verify(VerifyArgs),
    /// Run several schemes on one model and emit one stats row each.
    Compare(CompareArgs),
    /// Scan small shapes for the first incompleteness witness of a scheme.
    Sweep(SweepArgs),
    /// Build a named problem and print its model JSON.
    Problem(ProblemArgs),
}

#[derive(Args)]
struct SchemeArgs {
    /// Scheme list, `+`-composed (e.g. doublelex+allperm); `none` for bare.
    #[arg(long, default_value = "none")]
    scheme: String,
    /// Use strict lex (<) instead of non-strict (<=) in lex-based schemes.
    #[arg(long)]
    strict: bool,
    /// Flattening for the full lex-leader scheme.
    #[arg(long, value_parser = parse_flattening, default_value = "rowwise")]
    flattening: FlattenOrder,
    /// Group-size guard for the full lex-leader scheme.
    #[arg(long)]
    guard: Option<u64>,
}

impl SchemeArgs {
    fn parse(&self) -> CliResult<Vec<SchemeSpec>> {
        let guard = resolve_u64(
            self.guard,
            "MATSYM_LEXLEADER_GUARD",
            symbreak::DEFAULT_LEXLEADER_GUARD,
        )?;
        let schemes = symbreak::parse_scheme_list(&self.scheme)
            .map_err(|e| CliError::usage(e.to_string()))?;
        Ok(schemes
            .into_iter()
            .map(|s| {
                s.strict(self.strict)
                    .flattening(self.flattening)
                    .guard(guard)
            })
            .collect())
    }
}

#[derive(Args)]
struct SearchArgs {
    /// Variable order: rowwise | colwise | snake | smallest-domain.
    #[arg(long, default_value = "rowwise")]
    var_order: String,
    /// Value order: asc | desc.
    #[arg(long, default_value = "asc")]
    val_order: String,
    /// Stop after visiting this many search nodes.
    #[arg(long)]
    node_limit: Option<u64>,
    /// Wall-clock limit in seconds.
    #[arg(long)]
    time_limit: Option<f64>,
}

impl SearchArgs {
    fn config(&self, mode: SearchMode) -> CliResult<SearchConfig> {
        let var_order = VarOrder::parse(&self.var_order).ok_or_else(|| {
            CliError::usage(format!("unknown variable order {:?}", self.var_order))
        })?;
        let val_order = match self.val_order.as_str() {
            "asc" => ValOrder::Ascending,
            "desc" => ValOrder::Descending,
            other => return Err(CliError::usage(format!("unknown value order {other:?}"))),
        };
        if self.node_limit == Some(0) {
            return Err(CliError::usage("node limit must be positive"));
        }
        if matches!(self.time_limit, Some(t) if t <= 0.0) {
            return Err(CliError::usage("time limit must be positive"));
        }
        Ok(SearchConfig {
            var_order,
            val_order,
            mode,
            node_limit: self.node_limit,
            time_limit: self.time_limit.map(Duration::from_secs_f64),
        })
    }
}

#[derive(Args)]
struct BudgetArgs {
    /// Cap on the number of full assignments the oracle may enumerate.
    #[arg(long)]
    enum_budget: Option<u64>,
    /// Cap on the symmetry-group order the oracle may enumerate.
    #[arg(long)]
    group_budget: Option<u64>,
}

impl BudgetArgs {
    fn budgets(&self) -> CliResult<Budgets> {
        let defaults = Budgets::default();
        Ok(Budgets {
            enumeration: resolve_u64(self.enum_budget, "MATSYM_ENUM_BUDGET", defaults.enumeration)?,
            group: resolve_u64(self.group_budget, "MATSYM_GROUP_BUDGET", defaults.group)?,
        })
    }
}

/// Flag value if given, else environment override, else default.
fn resolve_u64(flag: Option<u64>, env: &str, default: u64) -> CliResult<u64> {
    if let Some(v) = flag {
        return Ok(v);
    }
    match std::env::var(env) {
        Ok(text) => text
            .parse()
            .map_err(|_| CliError::usage(format!("{env} must be an integer, got {text:?}"))),
        Err(_) => Ok(default),
    }
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    source: ModelSource,
    #[command(flatten)]
    scheme: SchemeArgs,
    #[command(flatten)]
    search: SearchArgs,
    /// Count solutions only (no solution stream).
    #[arg(long, conflicts_with = "all")]
    count: bool,
    /// Enumerate and print every solution.
    #[arg(long)]
    all: bool,
    /// Write the stats CSV here instead of stdout.
    #[arg(long)]
    stats: Option<PathBuf>,
    /// Write the solution stream here instead of stdout.
    #[arg(long)]
    solutions: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    source: ModelSource,
    #[command(flatten)]
    scheme: SchemeArgs,
    #[command(flatten)]
    budgets: BudgetArgs,
    /// Maximum number of symmetric survivor pairs to include.
    #[arg(long, default_value_t = 5)]
    witness_limit: usize,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    source: ModelSource,
    /// Comma-separated scheme lists, e.g. `none,doublelex,doublelex+allperm`.
    #[arg(long)]
    schemes: String,
    #[command(flatten)]
    scheme_options: SchemeOptionArgs,
    #[command(flatten)]
    search: SearchArgs,
    /// Write the comparison CSV here instead of stdout.
    #[arg(long)]
    stats: Option<PathBuf>,
}

/// Scheme options without the scheme list itself (compare carries its own).
#[derive(Args)]
struct SchemeOptionArgs {
    #[arg(long)]
    strict: bool,
    #[arg(long, value_parser = parse_flattening, default_value = "rowwise")]
    flattening: FlattenOrder,
    #[arg(long)]
    guard: Option<u64>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    scheme: SchemeArgs,
    /// Domain is 0..domain-size.
    #[arg(long, default_value_t = 2)]
    domain_size: usize,
    /// Largest cell count to scan.
    #[arg(long, default_value_t = 9)]
    max_cells: usize,
    #[command(flatten)]
    budgets: BudgetArgs,
}

#[derive(Args)]
struct ProblemArgs {
    /// Problem name: bibd | rack | random.
    name: String,
    #[command(flatten)]
    source: ModelSource,
    /// Write the model JSON here instead of stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn parse_flattening(s: &str) -> Result<FlattenOrder, String> {
    match s {
        "rowwise" => Ok(FlattenOrder::RowWise),
        "colwise" => Ok(FlattenOrder::ColWise),
        "snake" => Ok(FlattenOrder::Snake),
        other => Err(format!("unknown flattening {other:?}")),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Compare(args) => cmd_compare(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Problem(args) => cmd_problem(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

const CSV_HEADER: &str = "instance,scheme,nodes,failures,solutions,seconds";

fn csv_row(instance: &str, scheme: &str, stats: &SearchStats) -> String {
    // commas in labels would break the fixed column schema
    let clean = |s: &str| s.replace(',', ";");
    format!(
        "{},{},{},{},{},{:.6}",
        clean(instance),
        clean(scheme),
        stats.nodes,
        stats.failures,
        stats.solutions,
        stats.elapsed.as_secs_f64()
    )
}

fn write_text(path: &Option<PathBuf>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, text)
            .map_err(|e| CliError::usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            std::io::stdout().flush().ok();
            Ok(())
        }
    }
}

fn generate_scheme_set(model: &MatrixModel, schemes: &[SchemeSpec]) -> CliResult<ConstraintSet> {
    symbreak::generate_list(model, schemes).map_err(|e| match e {
        symbreak::GenError::GroupTooLarge { .. } => CliError::budget(e.to_string()),
        other => CliError::usage(other.to_string()),
    })
}

fn map_solve_error(e: SolveError) -> CliError {
    match e {
        SolveError::LimitExceeded { ref stats } => CliError {
            code: EXIT_BUDGET,
            message: format!(
                "{e} ({} failures, {} solutions so far)",
                stats.failures, stats.solutions
            ),
        },
        SolveError::Model(m) => CliError::usage(m.to_string()),
    }
}

fn cmd_solve(args: SolveArgs) -> CliResult<u8> {
    let model = args.source.build()?;
    let schemes = args.scheme.parse()?;
    let extra = generate_scheme_set(&model, &schemes)?;
    let mode = if args.count {
        SearchMode::CountOnly
    } else if args.all {
        SearchMode::EnumerateAll
    } else {
        SearchMode::FirstSolution
    };
    let config = args.search.config(mode)?;

    let mut stream = String::new();
    let stats = solver::solve(&model, &extra, &config, |s| {
        stream.push_str(&format_solution(s));
        stream.push('\n');
    })
    .map_err(map_solve_error)?;

    if !matches!(mode, SearchMode::CountOnly) {
        write_text(&args.solutions, &stream)?;
    }
    let csv = format!(
        "{CSV_HEADER}\n{}\n",
        csv_row(model.name(), &symbreak::scheme_list_label(&schemes), &stats)
    );
    write_text(&args.stats, &csv)?;
    Ok(if stats.solutions == 0 {
        EXIT_INFEASIBLE
    } else {
        0
    })
}

fn format_solution(values: &[Value]) -> String {
    serde_json::to_string(values).expect("integer arrays serialise")
}

fn cmd_verify(args: VerifyArgs) -> CliResult<u8> {
    let model = args.source.build()?;
    let schemes = args.scheme.parse()?;
    let budgets = args.budgets.budgets()?;
    let report = oracle::check_soundness(&model, &schemes, &budgets, args.witness_limit)
        .map_err(map_oracle_error)?;
    println!(
        "{}",
        serde_json::to_string_pretty(&report).expect("report serialises")
    );
    Ok(0)
}

fn map_oracle_error(e: oracle::OracleError) -> CliError {
    match e {
        oracle::OracleError::BudgetExceeded { .. } => CliError::budget(e.to_string()),
        oracle::OracleError::Gen(symbreak::GenError::GroupTooLarge { .. }) => {
            CliError::budget(e.to_string())
        }
        oracle::OracleError::Gen(other) => CliError::usage(other.to_string()),
    }
}

fn cmd_compare(args: CompareArgs) -> CliResult<u8> {
    let model = args.source.build()?;
    let config = args.search.config(SearchMode::CountOnly)?;
    let guard = resolve_u64(
        args.scheme_options.guard,
        "MATSYM_LEXLEADER_GUARD",
        symbreak::DEFAULT_LEXLEADER_GUARD,
    )?;

    let mut rows = vec![CSV_HEADER.to_string()];
    for list_text in args.schemes.split(',') {
        let schemes: Vec<SchemeSpec> = symbreak::parse_scheme_list(list_text.trim())
            .map_err(|e| CliError::usage(e.to_string()))?
            .into_iter()
            .map(|s| {
                s.strict(args.scheme_options.strict)
                    .flattening(args.scheme_options.flattening)
                    .guard(guard)
            })
            .collect();
        let extra = generate_scheme_set(&model, &schemes)?;
        let stats = solver::count_solutions(&model, &extra, &config).map_err(map_solve_error)?;
        rows.push(csv_row(
            model.name(),
            &symbreak::scheme_list_label(&schemes),
            &stats,
        ));
    }
    let mut csv = rows.join("\n");
    csv.push('\n');
    write_text(&args.stats, &csv)?;
    Ok(0)
}

fn cmd_sweep(args: SweepArgs) -> CliResult<u8> {
    if args.domain_size == 0 {
        return Err(CliError::usage("domain size must be positive"));
    }
    let schemes = args.scheme.parse()?;
    if schemes.is_empty() {
        return Err(CliError::usage("sweep needs a scheme"));
    }
    let budgets = args.budgets.budgets()?;
    let domain =
        matsym::Domain::range(0, args.domain_size as Value - 1).expect("positive domain size");
    let witness =
        oracle::find_smallest_incompleteness_witness(&schemes, &domain, args.max_cells, &budgets)
            .map_err(map_oracle_error)?;
    let json = match witness {
        None => serde_json::json!({ "found": false }),
        Some(w) => serde_json::json!({ "found": true, "witness": w }),
    };
    println!(
        "{}",
        serde_json::to_string_pretty(&json).expect("witness serialises")
    );
    Ok(0)
}

fn cmd_problem(args: ProblemArgs) -> CliResult<u8> {
    let mut source = args.source;
    source.problem = Some(args.name);
    let model = source.build()?;
    let mut text = model_to_json(&model);
    text.push('\n');
    match &args.output {
        Some(p) => fs::write(p, text)
            .map_err(|e| CliError::usage(format!("cannot write {}: {e}", p.display())))?,
        None => print!("{text}"),
    }
    Ok(0)
}
