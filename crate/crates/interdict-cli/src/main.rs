//! `interdict` — command-line front end for the interdiction solver suite:
//! generate instances, solve them exactly, cross-check against the
//! exhaustive oracle, export MILP models, build and validate tree
//! decompositions, and run timed benchmarks with summary statistics.
//!
//! Exit codes: 0 success, 2 input error (unreadable or malformed files,
//! invalid instance data, per-instance benchmark failures), 3 configuration
//! error (flag values, algorithm/kind mismatch), 4 resource guard tripped
//! (the requested computation would be too large).

use clap::{Parser, Subcommand};
use interdict_cli::bench::{
    read_csv, run_benchmark, write_csv, Algorithm, BenchPlan, GridPoint,
};
use interdict_cli::stats::{summarize, summary_csv, Metric};
use interdict_core::graph::{
    count_customer_joints, evaluate_strategy, validate_instance, Instance, InstanceViolation,
    ProblemKind, Solution,
};
use interdict_core::ilp::export_reic_lp;
use interdict_core::instgen::{generate, BudgetRule, Family, GenConfig, WeightDist};
use interdict_core::io::{read_instance, write_instance};
use interdict_core::oracle::{brute_force_reic, brute_force_rfic, OracleError};
use interdict_core::tree_reic::{solve_tree_reic, Condition};
use interdict_core::tree_rfic::solve_tree_rfic;
use interdict_core::treewidth::{
    heuristic_decomposition, read_decomposition, to_extended_nice, tree_decomposition_of_tree,
    validate_decomposition, write_decomposition, TreeDecomposition,
};
use interdict_core::btw_reic::solve_btw_reic;
use interdict_core::SolveError;
use std::env;
use std::fmt::Write as _;
use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const EXIT_INPUT: u8 = 2;
const EXIT_CONFIG: u8 = 3;
const EXIT_GUARD: u8 = 4;

/// Widest bag the decomposition DP accepts before refusing to allocate.
const WIDTH_GUARD: usize = 24;
/// Most table cells the decomposition DP may allocate.
const CELL_GUARD: u128 = 1 << 30;

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure { code: EXIT_INPUT, message: message.into() }
    }

    fn config(message: impl Into<String>) -> Self {
        Failure { code: EXIT_CONFIG, message: message.into() }
    }

    fn guard(message: impl Into<String>) -> Self {
        Failure { code: EXIT_GUARD, message: message.into() }
    }
}

type CmdResult = Result<(), Failure>;

#[derive(Parser)]
#[command(
    name = "interdict",
    version,
    about = "Exact solvers, generators, and benchmarks for covering-objective network interdiction"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random instance and print it in INTERDICT v1 format.
    Generate(GenerateArgs),
    /// Solve an instance exactly and print the optimal strategy.
    Solve(SolveArgs),
    /// Solve by exhaustive enumeration (small instances only).
    Oracle(OracleArgs),
    /// Export an edge-interdiction tree instance as an LP-format MILP.
    ExportLp(ExportLpArgs),
    /// Build a tree decomposition of the instance graph (TREEDEC v1).
    Decompose(DecomposeArgs),
    /// Check instance (and optionally decomposition) invariants.
    Validate(ValidateArgs),
    /// Time solver runs over a parameter grid and emit CSV records.
    Bench(BenchArgs),
    /// Summarize benchmark CSV per group: mean, std, ci95, cv.
    Stats(StatsArgs),
    /// Count customer joints (customers whose deletion leaves >= 3
    /// facility-containing components).
    Joints(JointsArgs),
}

fn parse_family(s: &str) -> Result<Family, String> {
    match s {
        "prufer" => Ok(Family::PruferTree),
        "cluster" => Ok(Family::LeafFacilityCluster),
        "grid" => Ok(Family::WalkerGrid),
        other => Err(format!("unknown family '{other}' (expected prufer, cluster, or grid)")),
    }
}

fn parse_weights(s: &str) -> Result<WeightDist, String> {
    if s == "unit" {
        return Ok(WeightDist::Unit);
    }
    if let Some(max) = s.strip_prefix("uniform:") {
        let max: u32 = max.parse().map_err(|e| format!("uniform weight bound: {e}"))?;
        if max == 0 {
            return Err("uniform weight bound must be at least 1".into());
        }
        return Ok(WeightDist::UniformInt { max });
    }
    Err(format!("unknown weight distribution '{s}' (expected unit or uniform:<max>)"))
}

fn parse_budget(s: &str) -> Result<BudgetRule, String> {
    if let Some(r) = s.strip_prefix("fixed:") {
        return Ok(BudgetRule::Fixed(r.parse().map_err(|e| format!("fixed budget: {e}"))?));
    }
    if let Some(f) = s.strip_prefix("ratio:") {
        let f: f64 = f.parse().map_err(|e| format!("budget ratio: {e}"))?;
        if !(0.0..=1.0).contains(&f) {
            return Err("budget ratio must lie in [0, 1]".into());
        }
        return Ok(BudgetRule::Ratio(f));
    }
    match s.parse() {
        Ok(r) => Ok(BudgetRule::Fixed(r)),
        Err(_) => {
            Err(format!("unknown budget rule '{s}' (expected fixed:<r>, ratio:<f>, or <r>)"))
        }
    }
}

fn parse_kind(s: &str) -> Result<ProblemKind, String> {
    match s {
        "edge" => Ok(ProblemKind::EdgeInterdiction),
        "facility" => Ok(ProblemKind::FacilityInterdiction),
        other => Err(format!("unknown kind '{other}' (expected edge or facility)")),
    }
}

#[derive(clap::Args)]
struct GenerateArgs {
    /// Instance family: prufer, cluster, or grid.
    #[arg(long, default_value = "prufer", value_parser = parse_family)]
    family: Family,
    /// Node count (trees) or satellites per plane (grids).
    #[arg(long, default_value_t = 10)]
    n: usize,
    /// Orbital planes (grids only).
    #[arg(long, default_value_t = 1)]
    planes: usize,
    /// Facility probability per node (trees) or per leaf (clusters).
    #[arg(long, default_value_t = 0.3)]
    p: f64,
    /// Customer weights: unit or uniform:<max>.
    #[arg(long, default_value = "unit", value_parser = parse_weights)]
    weights: WeightDist,
    /// Removal budget: fixed:<r>, ratio:<f>, or a bare integer.
    #[arg(long, default_value = "2", value_parser = parse_budget)]
    budget: BudgetRule,
    /// Problem kind: edge or facility.
    #[arg(long, default_value = "edge", value_parser = parse_kind)]
    kind: ProblemKind,
    /// Close each grid plane into a ring.
    #[arg(long)]
    ring: bool,
    /// Ground-station facilities attached to random satellites (grids only).
    #[arg(long, default_value_t = 1)]
    ground_stations: usize,
    /// Generator seed (INTERDICT_SEED overrides).
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct SolveArgs {
    /// Instance file (INTERDICT v1).
    #[arg(long = "in")]
    input: PathBuf,
    /// Solver: tree, btw, or rfic.
    #[arg(long)]
    algo: Algorithm,
    /// Tree decomposition file (TREEDEC v1) for --algo btw; built
    /// automatically when absent.
    #[arg(long)]
    decomp: Option<PathBuf>,
    /// Also write a machine-readable solution report here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print the best objective per budget from the DP table.
    #[arg(long)]
    emit_table: bool,
}

#[derive(clap::Args)]
struct OracleArgs {
    /// Instance file (INTERDICT v1).
    #[arg(long = "in")]
    input: PathBuf,
}

#[derive(clap::Args)]
struct ExportLpArgs {
    /// Instance file (INTERDICT v1).
    #[arg(long = "in")]
    input: PathBuf,
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct DecomposeArgs {
    /// Instance file (INTERDICT v1).
    #[arg(long = "in")]
    input: PathBuf,
    /// auto (tree constructor when the graph is a tree, else min-degree
    /// heuristic), tree, or heuristic.
    #[arg(long, default_value = "auto")]
    method: String,
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct ValidateArgs {
    /// Instance file (INTERDICT v1).
    #[arg(long = "in")]
    input: PathBuf,
    /// Also validate this decomposition against the instance graph.
    #[arg(long)]
    decomp: Option<PathBuf>,
}

#[derive(clap::Args)]
struct BenchArgs {
    /// Instance family: prufer, cluster, or grid.
    #[arg(long, default_value = "prufer", value_parser = parse_family)]
    family: Family,
    /// Node counts, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<usize>,
    /// Facility probabilities, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [0.3])]
    p: Vec<f64>,
    /// Removal budgets, comma separated (alternative: --r-ratio).
    #[arg(long, value_delimiter = ',', conflicts_with = "r_ratio")]
    r: Vec<usize>,
    /// Budget as a fraction of n, rounded to nearest.
    #[arg(long)]
    r_ratio: Option<f64>,
    /// Customer weights: unit or uniform:<max>.
    #[arg(long, default_value = "unit", value_parser = parse_weights)]
    weights: WeightDist,
    /// Solver to time: tree, btw, or rfic (sets the problem kind).
    #[arg(long, default_value = "tree")]
    algo: Algorithm,
    /// Timed repetitions per grid cell (same instance re-solved).
    #[arg(long, default_value_t = 1)]
    reps: usize,
    /// Master seed; per-cell seeds are derived from it (INTERDICT_SEED
    /// overrides).
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Cross-check objectives against the oracle on instances with <= 12
    /// nodes.
    #[arg(long)]
    verify_small: bool,
    /// Orbital planes (grid family).
    #[arg(long, default_value_t = 1)]
    planes: usize,
    /// Close each grid plane into a ring.
    #[arg(long)]
    ring: bool,
    /// Ground stations (grid family).
    #[arg(long, default_value_t = 1)]
    ground_stations: usize,
    /// Write CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct StatsArgs {
    /// Benchmark CSV (stdin when absent).
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// Group-by fields, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = ["family".to_string(), "n".to_string(), "r".to_string(), "algorithm".to_string()])]
    group_by: Vec<String>,
    /// Column to summarize: runtime_ns or objective.
    #[arg(long, default_value = "runtime_ns")]
    metric: Metric,
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct JointsArgs {
    /// Instance file (INTERDICT v1).
    #[arg(long = "in")]
    input: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(args) => cmd_generate(args),
        Command::Solve(args) => cmd_solve(args),
        Command::Oracle(args) => cmd_oracle(args),
        Command::ExportLp(args) => cmd_export_lp(args),
        Command::Decompose(args) => cmd_decompose(args),
        Command::Validate(args) => cmd_validate(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Stats(args) => cmd_stats(args),
        Command::Joints(args) => cmd_joints(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

// ---------------------------------------------------------------------------
// Shared plumbing

fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))
}

fn load_instance(path: &Path) -> Result<Instance, Failure> {
    let text = read_file(path)?;
    read_instance(&text)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn write_or_print(out: Option<&Path>, text: &str) -> CmdResult {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Environment override for generator seeds.
fn effective_seed(flag: u64) -> Result<u64, Failure> {
    match env::var("INTERDICT_SEED") {
        Ok(raw) => raw
            .parse()
            .map_err(|e| Failure::config(format!("INTERDICT_SEED: {e}"))),
        Err(_) => Ok(flag),
    }
}

/// Family-specific size minima, checked up front so the generator's
/// assertions never fire on user input.
fn check_family_size(family: Family, n: usize, planes: usize) -> CmdResult {
    let fail = |msg: &str| Err(Failure::config(msg.to_string()));
    match family {
        Family::PruferTree if n < 2 => fail("family prufer needs --n >= 2"),
        Family::LeafFacilityCluster if n < 3 => fail("family cluster needs --n >= 3"),
        Family::WalkerGrid if n < 2 => fail("family grid needs --n >= 2 satellites per plane"),
        Family::WalkerGrid if planes < 1 => fail("family grid needs --planes >= 1"),
        _ => Ok(()),
    }
}

fn check_probability(p: f64) -> CmdResult {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Failure::config(format!("facility probability {p} must lie in [0, 1]")))
    }
}

fn map_solve_error(e: SolveError) -> Failure {
    match e {
        SolveError::WrongKind { .. } | SolveError::TargetOutOfRange { .. } => {
            Failure::config(e.to_string())
        }
        SolveError::NotConnected
        | SolveError::NotATree
        | SolveError::InvalidDecomposition(_)
        | SolveError::BagMismatch(_) => Failure::input(e.to_string()),
    }
}

fn removal_noun(kind: ProblemKind) -> &'static str {
    match kind {
        ProblemKind::EdgeInterdiction => "edges",
        ProblemKind::FacilityInterdiction => "facilities",
    }
}

fn id_list(ids: &[usize]) -> String {
    if ids.is_empty() {
        "(none)".to_string()
    } else {
        ids.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
    }
}

/// Human-readable strategy block printed by `solve` and `oracle`.
fn print_solution(instance: &Instance, solution: &Solution) {
    println!("objective: {}", solution.objective);
    match instance.kind {
        ProblemKind::EdgeInterdiction => {
            let described: Vec<String> = solution
                .removed
                .iter()
                .map(|&ix| {
                    let (u, v) = instance.graph.edge(ix);
                    format!("{ix}({u}-{v})")
                })
                .collect();
            println!(
                "removed edges: {}",
                if described.is_empty() { "(none)".into() } else { described.join(" ") }
            );
        }
        ProblemKind::FacilityInterdiction => {
            println!("removed facilities: {}", id_list(&solution.removed));
        }
    }
    println!("disconnected customers: {}", id_list(&solution.disconnected));
}

/// Machine-readable report written by `solve --out`.
fn solution_report(instance: &Instance, solution: &Solution) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "objective {}", solution.objective);
    let _ = writeln!(
        out,
        "removed {} {}",
        removal_noun(instance.kind),
        id_list(&solution.removed)
    );
    let _ = writeln!(out, "disconnected {}", id_list(&solution.disconnected));
    out
}

// ---------------------------------------------------------------------------
// Subcommands

fn cmd_generate(args: GenerateArgs) -> CmdResult {
    check_probability(args.p)?;
    check_family_size(args.family, args.n, args.planes)?;
    let config = GenConfig {
        family: args.family,
        n: args.n,
        planes: args.planes,
        facility_probability: args.p,
        weights: args.weights,
        budget: args.budget,
        kind: args.kind,
        ring: args.ring,
        ground_stations: args.ground_stations,
        seed: effective_seed(args.seed)?,
    };
    let instance = generate(&config);
    write_or_print(args.out.as_deref(), &write_instance(&instance))
}

/// Rejects instances whose weights are broken before any solver runs;
/// shape violations are left to the individual solvers.
fn check_weights(instance: &Instance) -> CmdResult {
    let broken: Vec<String> = validate_instance(instance)
        .into_iter()
        .filter(|v| {
            matches!(
                v,
                InstanceViolation::NegativeWeight { .. } | InstanceViolation::NonFiniteWeight { .. }
            )
        })
        .map(|v| v.to_string())
        .collect();
    if broken.is_empty() {
        Ok(())
    } else {
        Err(Failure::input(broken.join("; ")))
    }
}

fn build_decomposition(
    instance: &Instance,
    decomp: Option<&Path>,
) -> Result<TreeDecomposition, Failure> {
    match decomp {
        Some(path) => {
            let text = read_file(path)?;
            let dec = read_decomposition(&text)
                .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
            let violations = validate_decomposition(&instance.graph, &dec);
            if violations.is_empty() {
                Ok(dec)
            } else {
                let listed: Vec<String> =
                    violations.iter().map(|v| v.to_string()).collect();
                Err(Failure::input(format!(
                    "{} does not decompose this graph: {}",
                    path.display(),
                    listed.join("; ")
                )))
            }
        }
        None if instance.graph.is_tree() => tree_decomposition_of_tree(&instance.graph)
            .map_err(|e| Failure::input(e.to_string())),
        None => Ok(heuristic_decomposition(&instance.graph)),
    }
}

fn check_dp_size(dec: &TreeDecomposition, nice_nodes: usize, budget: usize) -> CmdResult {
    let width = dec.width();
    if width > WIDTH_GUARD {
        return Err(Failure::guard(format!(
            "decomposition width {width} exceeds the DP guard ({WIDTH_GUARD}); \
             supply a narrower decomposition via --decomp"
        )));
    }
    let cells = (nice_nodes as u128) << (width + 1);
    let cells = cells.saturating_mul(budget as u128 + 1);
    if cells > CELL_GUARD {
        return Err(Failure::guard(format!(
            "the DP would allocate about {cells} table cells (limit {CELL_GUARD})"
        )));
    }
    Ok(())
}

fn cmd_solve(args: SolveArgs) -> CmdResult {
    let instance = load_instance(&args.input)?;
    check_weights(&instance)?;
    if instance.kind != args.algo.kind() {
        return Err(Failure::config(format!(
            "--algo {} solves {} instances; {} is {}",
            args.algo.name(),
            args.algo.kind(),
            args.input.display(),
            instance.kind
        )));
    }
    let (solution, table_rows) = match args.algo {
        Algorithm::Tree => {
            let (solution, table) = solve_tree_reic(&instance).map_err(map_solve_error)?;
            let rows = args.emit_table.then(|| tree_table_rows(&table));
            (solution, rows)
        }
        Algorithm::Rfic => {
            let (solution, table) = solve_tree_rfic(&instance).map_err(map_solve_error)?;
            let rows = args.emit_table.then(|| tree_table_rows(&table));
            (solution, rows)
        }
        Algorithm::Btw => {
            let dec = build_decomposition(&instance, args.decomp.as_deref())?;
            let nice = to_extended_nice(&instance.graph, &dec)
                .map_err(|e| Failure::input(e.to_string()))?;
            check_dp_size(&dec, nice.nodes.len(), instance.budget)?;
            let (solution, table) =
                solve_btw_reic(&instance, &nice).map_err(map_solve_error)?;
            let rows = args.emit_table.then(|| {
                (0..=table.budget())
                    .map(|b| table.value(table.root(), 0, b).as_finite().unwrap_or(f64::NAN))
                    .collect()
            });
            (solution, rows)
        }
    };
    print_solution(&instance, &solution);
    if let Some(rows) = table_rows {
        println!("best objective by budget:");
        for (b, value) in rows.iter().enumerate() {
            println!("  r={b}: {value}");
        }
    }
    if let Some(out) = args.out.as_deref() {
        write_or_print(Some(out), &solution_report(&instance, &solution))?;
    }
    Ok(())
}

/// Best root objective per budget from either tree DP table.
fn tree_table_rows(table: &interdict_core::tree_reic::TreeDpTable) -> Vec<f64> {
    (0..=table.budget())
        .map(|b| {
            Condition::ALL
                .iter()
                .map(|&c| table.value(table.root(), c, b))
                .max()
                .and_then(|v| v.as_finite())
                .unwrap_or(f64::NAN)
        })
        .collect()
}

fn cmd_oracle(args: OracleArgs) -> CmdResult {
    let instance = load_instance(&args.input)?;
    check_weights(&instance)?;
    let solution = match instance.kind {
        ProblemKind::EdgeInterdiction => brute_force_reic(&instance),
        ProblemKind::FacilityInterdiction => brute_force_rfic(&instance),
    }
    .map_err(|e| match e {
        OracleError::TooLarge(_) => Failure::guard(e.to_string()),
        OracleError::WrongKind { .. } => Failure::config(e.to_string()),
    })?;
    print_solution(&instance, &solution);
    // The oracle re-derives its answer through the independent evaluator as
    // a final sanity check; a mismatch would mean corrupted state.
    let report = evaluate_strategy(&instance, &solution.removed)
        .map_err(|e| Failure::input(format!("{e:?}")))?;
    if report.objective != solution.objective {
        return Err(Failure::input("oracle solution failed re-evaluation".to_string()));
    }
    Ok(())
}

fn cmd_export_lp(args: ExportLpArgs) -> CmdResult {
    let instance = load_instance(&args.input)?;
    check_weights(&instance)?;
    let model = export_reic_lp(&instance).map_err(map_solve_error)?;
    write_or_print(args.out.as_deref(), &model)
}

fn cmd_decompose(args: DecomposeArgs) -> CmdResult {
    let instance = load_instance(&args.input)?;
    let dec = match args.method.as_str() {
        "auto" => {
            if instance.graph.is_tree() {
                tree_decomposition_of_tree(&instance.graph)
                    .map_err(|e| Failure::input(e.to_string()))?
            } else {
                heuristic_decomposition(&instance.graph)
            }
        }
        "tree" => tree_decomposition_of_tree(&instance.graph)
            .map_err(|e| Failure::input(e.to_string()))?,
        "heuristic" => heuristic_decomposition(&instance.graph),
        other => {
            return Err(Failure::config(format!(
                "unknown method '{other}' (expected auto, tree, or heuristic)"
            )))
        }
    };
    write_or_print(args.out.as_deref(), &write_decomposition(&dec))
}

fn cmd_validate(args: ValidateArgs) -> CmdResult {
    let instance = load_instance(&args.input)?;
    let mut errors = 0usize;
    for violation in validate_instance(&instance) {
        match violation {
            InstanceViolation::NegativeWeight { .. } | InstanceViolation::NonFiniteWeight { .. } => {
                println!("instance: {violation}");
                errors += 1;
            }
            // Shape findings only matter for the tree solvers, so they are
            // notes, not failures.
            InstanceViolation::NotConnected | InstanceViolation::NotATree => {
                println!("instance: note: {violation} (tree solvers will refuse it)");
            }
        }
    }
    if errors == 0 {
        println!(
            "instance: ok ({} nodes, {} edges, {} facilities, budget {}, {})",
            instance.node_count(),
            instance.graph.edge_count(),
            instance.facilities().len(),
            instance.budget,
            instance.kind
        );
    }
    if let Some(path) = args.decomp.as_deref() {
        let text = read_file(path)?;
        let dec = read_decomposition(&text)
            .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
        let violations = validate_decomposition(&instance.graph, &dec);
        for violation in &violations {
            println!("decomposition: {violation}");
        }
        errors += violations.len();
        if violations.is_empty() {
            println!(
                "decomposition: ok ({} bags, width {})",
                dec.bag_count(),
                dec.width()
            );
        }
    }
    if errors == 0 {
        Ok(())
    } else {
        Err(Failure::input(format!("{errors} violation(s) found")))
    }
}

fn cmd_bench(args: BenchArgs) -> CmdResult {
    if args.reps == 0 {
        return Err(Failure::config("--reps must be at least 1".to_string()));
    }
    if args.r.is_empty() && args.r_ratio.is_none() {
        return Err(Failure::config("supply --r or --r-ratio".to_string()));
    }
    if let Some(ratio) = args.r_ratio {
        if !(0.0..=1.0).contains(&ratio) {
            return Err(Failure::config("--r-ratio must lie in [0, 1]".to_string()));
        }
    }
    for &p in &args.p {
        check_probability(p)?;
    }
    for &n in &args.n {
        check_family_size(args.family, n, args.planes)?;
    }
    let mut grid = Vec::new();
    for &n in &args.n {
        for &p in &args.p {
            let budgets: Vec<usize> = match args.r_ratio {
                Some(ratio) => vec![(ratio * n as f64).round() as usize],
                None => args.r.clone(),
            };
            for r in budgets {
                grid.push(GridPoint { n, p, r });
            }
        }
    }
    let plan = BenchPlan {
        family: args.family,
        grid,
        reps: args.reps,
        algorithm: args.algo,
        master_seed: effective_seed(args.seed)?,
        weights: args.weights,
        planes: args.planes,
        ring: args.ring,
        ground_stations: args.ground_stations,
        verify_small: args.verify_small,
    };
    let outcome = run_benchmark(&plan, args.jobs).map_err(Failure::config)?;
    let mut csv = Vec::new();
    write_csv(&outcome.records, &mut csv).map_err(Failure::input)?;
    write_or_print(
        args.out.as_deref(),
        std::str::from_utf8(&csv).expect("CSV output is UTF-8"),
    )?;
    for failure in &outcome.failures {
        eprintln!(
            "instance {} (seed {}): {}",
            failure.instance_id, failure.seed, failure.message
        );
    }
    if outcome.failures.is_empty() {
        Ok(())
    } else {
        Err(Failure::input(format!(
            "{} of {} instances failed; partial results were written",
            outcome.failures.len(),
            outcome.failures.len() + outcome.records.len()
        )))
    }
}

fn cmd_stats(args: StatsArgs) -> CmdResult {
    let text = match args.input.as_deref() {
        Some(path) => read_file(path)?,
        None => {
            let mut text = String::new();
            std::io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| Failure::input(format!("cannot read stdin: {e}")))?;
            text
        }
    };
    let rows = read_csv(text.as_bytes()).map_err(Failure::input)?;
    let summaries = summarize(&rows, &args.group_by, args.metric).map_err(Failure::config)?;
    write_or_print(args.out.as_deref(), &summary_csv(&args.group_by, &summaries))
}

fn cmd_joints(args: JointsArgs) -> CmdResult {
    let instance = load_instance(&args.input)?;
    println!("{}", count_customer_joints(&instance));
    Ok(())
}
