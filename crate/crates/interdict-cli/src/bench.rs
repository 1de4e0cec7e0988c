//! Benchmark runner: generates a deterministic set of instances from a
//! parameter grid, times each solve on a monotonic clock, and emits
//! plot-ready CSV records.
//!
//! Repetitions of one grid point re-solve the *same* instance (same derived
//! seed), so objectives are constant across reps and the runtime spread
//! measures timing noise only. Records are merged in instance order no
//! matter which worker finishes first.

use interdict_core::graph::{Instance, ProblemKind, Solution};
use interdict_core::instgen::{generate, BudgetRule, Family, GenConfig, WeightDist};
use interdict_core::oracle::{brute_force_reic, brute_force_rfic};
use interdict_core::treewidth::{
    heuristic_decomposition, to_extended_nice, tree_decomposition_of_tree,
};
use interdict_core::btw_reic::solve_btw_reic;
use interdict_core::tree_reic::solve_tree_reic;
use interdict_core::tree_rfic::solve_tree_rfic;
use rayon::prelude::*;
use std::io;
use std::str::FromStr;
use std::time::Instant;

/// The exact column order of benchmark CSV output.
pub const CSV_HEADER: &str = "instance_id,family,n,m,p,r,seed,algorithm,objective,runtime_ns";

/// Largest instance the embedded oracle check will verify.
pub const VERIFY_SMALL_MAX_NODES: usize = 12;

/// One timed solve.
#[derive(Clone, Debug, PartialEq)]
pub struct BenchRecord {
    pub instance_id: usize,
    pub family: String,
    /// Actual node count of the generated instance.
    pub n: usize,
    /// Edge count.
    pub m: usize,
    /// Facility probability the instance was drawn with.
    pub p: f64,
    /// Removal budget.
    pub r: usize,
    /// Derived per-instance generator seed.
    pub seed: u64,
    pub algorithm: String,
    pub objective: f64,
    pub runtime_ns: u128,
}

/// Which solver the benchmark times.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algorithm {
    /// Edge interdiction via the direct tree DP.
    Tree,
    /// Edge interdiction via the tree-decomposition DP.
    Btw,
    /// Facility interdiction via the tree DP.
    Rfic,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Tree => "tree",
            Algorithm::Btw => "btw",
            Algorithm::Rfic => "rfic",
        }
    }

    /// The problem kind this algorithm consumes.
    pub fn kind(self) -> ProblemKind {
        match self {
            Algorithm::Tree | Algorithm::Btw => ProblemKind::EdgeInterdiction,
            Algorithm::Rfic => ProblemKind::FacilityInterdiction,
        }
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "tree" => Ok(Algorithm::Tree),
            "btw" => Ok(Algorithm::Btw),
            "rfic" => Ok(Algorithm::Rfic),
            other => Err(format!("unknown algorithm '{other}' (expected tree, btw, or rfic)")),
        }
    }
}

/// One cell of the parameter grid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridPoint {
    pub n: usize,
    pub p: f64,
    pub r: usize,
}

/// Everything `run_benchmark` needs, already validated.
#[derive(Clone, Debug)]
pub struct BenchPlan {
    pub family: Family,
    pub grid: Vec<GridPoint>,
    pub reps: usize,
    pub algorithm: Algorithm,
    pub master_seed: u64,
    pub weights: WeightDist,
    /// Grid-family knobs; ignored by tree families.
    pub planes: usize,
    pub ring: bool,
    pub ground_stations: usize,
    /// Check objectives against the exhaustive oracle on instances with at
    /// most [`VERIFY_SMALL_MAX_NODES`] nodes.
    pub verify_small: bool,
}

/// A solve (or verification) that did not produce a record.
#[derive(Clone, Debug)]
pub struct BenchFailure {
    pub instance_id: usize,
    pub seed: u64,
    pub message: String,
}

/// Records in instance order plus whatever failed along the way.
#[derive(Debug, Default)]
pub struct BenchOutcome {
    pub records: Vec<BenchRecord>,
    pub failures: Vec<BenchFailure>,
}

/// SplitMix64 step: a well-mixed 64-bit permutation used to derive
/// per-instance seeds from the master seed.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// The generator seed for grid cell `grid_index` under `master_seed`; shared
/// by every repetition of that cell.
pub fn instance_seed(master_seed: u64, grid_index: usize) -> u64 {
    splitmix64(master_seed ^ splitmix64(grid_index as u64))
}

fn family_name(family: Family) -> &'static str {
    match family {
        Family::PruferTree => "prufer",
        Family::LeafFacilityCluster => "cluster",
        Family::WalkerGrid => "grid",
    }
}

/// Solves `instance` with `algorithm`, timing only the solver call (not
/// generation or decomposition construction).
fn timed_solve(instance: &Instance, algorithm: Algorithm) -> Result<(Solution, u128), String> {
    match algorithm {
        Algorithm::Tree => {
            let start = Instant::now();
            let (solution, _) = solve_tree_reic(instance).map_err(|e| e.to_string())?;
            Ok((solution, start.elapsed().as_nanos().max(1)))
        }
        Algorithm::Rfic => {
            let start = Instant::now();
            let (solution, _) = solve_tree_rfic(instance).map_err(|e| e.to_string())?;
            Ok((solution, start.elapsed().as_nanos().max(1)))
        }
        Algorithm::Btw => {
            let dec = if instance.graph.is_tree() {
                tree_decomposition_of_tree(&instance.graph).map_err(|e| e.to_string())?
            } else {
                heuristic_decomposition(&instance.graph)
            };
            let nice = to_extended_nice(&instance.graph, &dec).map_err(|e| e.to_string())?;
            let start = Instant::now();
            let (solution, _) = solve_btw_reic(instance, &nice).map_err(|e| e.to_string())?;
            Ok((solution, start.elapsed().as_nanos().max(1)))
        }
    }
}

fn oracle_check(instance: &Instance, objective: f64) -> Result<(), String> {
    let reference = match instance.kind {
        ProblemKind::EdgeInterdiction => brute_force_reic(instance),
        ProblemKind::FacilityInterdiction => brute_force_rfic(instance),
    }
    .map_err(|e| format!("oracle check failed to run: {e}"))?;
    if reference.objective == objective {
        Ok(())
    } else {
        Err(format!(
            "objective {objective} disagrees with the exhaustive oracle ({})",
            reference.objective
        ))
    }
}

fn run_one(plan: &BenchPlan, grid_index: usize, rep: usize) -> Result<BenchRecord, BenchFailure> {
    let point = plan.grid[grid_index];
    let seed = instance_seed(plan.master_seed, grid_index);
    let instance_id = grid_index * plan.reps + rep;
    let fail = |message: String| BenchFailure { instance_id, seed, message };
    let config = GenConfig {
        family: plan.family,
        n: point.n,
        planes: plan.planes,
        facility_probability: point.p,
        weights: plan.weights,
        budget: BudgetRule::Fixed(point.r),
        kind: plan.algorithm.kind(),
        ring: plan.ring,
        ground_stations: plan.ground_stations,
        seed,
    };
    let instance = generate(&config);
    let (solution, runtime_ns) = timed_solve(&instance, plan.algorithm).map_err(&fail)?;
    if plan.verify_small && instance.node_count() <= VERIFY_SMALL_MAX_NODES {
        oracle_check(&instance, solution.objective).map_err(&fail)?;
    }
    Ok(BenchRecord {
        instance_id,
        family: family_name(plan.family).to_string(),
        n: instance.node_count(),
        m: instance.graph.edge_count(),
        p: point.p,
        r: point.r,
        seed,
        algorithm: plan.algorithm.name().to_string(),
        objective: solution.objective,
        runtime_ns,
    })
}

/// Runs the whole grid × repetition schedule on `jobs` worker threads.
/// Failed instances are collected (not fatal) and the remaining records keep
/// their deterministic order.
pub fn run_benchmark(plan: &BenchPlan, jobs: usize) -> Result<BenchOutcome, String> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| format!("could not build the worker pool: {e}"))?;
    let schedule: Vec<(usize, usize)> = (0..plan.grid.len())
        .flat_map(|g| (0..plan.reps).map(move |rep| (g, rep)))
        .collect();
    let results: Vec<Result<BenchRecord, BenchFailure>> = pool.install(|| {
        schedule
            .par_iter()
            .map(|&(grid_index, rep)| run_one(plan, grid_index, rep))
            .collect()
    });
    let mut outcome = BenchOutcome::default();
    for result in results {
        match result {
            Ok(record) => outcome.records.push(record),
            Err(failure) => outcome.failures.push(failure),
        }
    }
    Ok(outcome)
}

/// Writes `records` as CSV with the pinned header.
pub fn write_csv<W: io::Write>(records: &[BenchRecord], out: W) -> Result<(), String> {
    let mut writer = csv::Writer::from_writer(out);
    writer
        .write_record(CSV_HEADER.split(','))
        .map_err(|e| e.to_string())?;
    for record in records {
        writer
            .write_record([
                record.instance_id.to_string(),
                record.family.clone(),
                record.n.to_string(),
                record.m.to_string(),
                record.p.to_string(),
                record.r.to_string(),
                record.seed.to_string(),
                record.algorithm.clone(),
                record.objective.to_string(),
                record.runtime_ns.to_string(),
            ])
            .map_err(|e| e.to_string())?;
    }
    writer.flush().map_err(|e| e.to_string())
}

/// Reads CSV produced by [`write_csv`] (column order may differ as long as
/// the header names every required field).
pub fn read_csv<R: io::Read>(input: R) -> Result<Vec<BenchRecord>, String> {
    let mut reader = csv::Reader::from_reader(input);
    let headers = reader.headers().map_err(|e| e.to_string())?.clone();
    let column = |name: &str| -> Result<usize, String> {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| format!("missing column '{name}'"))
    };
    let columns: Vec<usize> =
        CSV_HEADER.split(',').map(column).collect::<Result<_, _>>()?;
    let mut records = Vec::new();
    for (row_ix, row) in reader.records().enumerate() {
        let row = row.map_err(|e| e.to_string())?;
        let line = row_ix + 2;
        let text = |slot: usize, what: &str| -> Result<String, String> {
            match row.get(columns[slot]) {
                Some(value) if !value.is_empty() => Ok(value.to_string()),
                _ => Err(format!("row {line}: missing {what}")),
            }
        };
        fn number<T: FromStr>(raw: String, line: usize, what: &str) -> Result<T, String>
        where
            T::Err: std::fmt::Display,
        {
            raw.parse().map_err(|e| format!("row {line}: {what}: {e}"))
        }
        records.push(BenchRecord {
            instance_id: number(text(0, "instance_id")?, line, "instance_id")?,
            family: text(1, "family")?,
            n: number(text(2, "n")?, line, "n")?,
            m: number(text(3, "m")?, line, "m")?,
            p: number(text(4, "p")?, line, "p")?,
            r: number(text(5, "r")?, line, "r")?,
            seed: number(text(6, "seed")?, line, "seed")?,
            algorithm: text(7, "algorithm")?,
            objective: number(text(8, "objective")?, line, "objective")?,
            runtime_ns: number(text(9, "runtime_ns")?, line, "runtime_ns")?,
        });
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_plan(algorithm: Algorithm) -> BenchPlan {
        BenchPlan {
            family: Family::PruferTree,
            grid: vec![GridPoint { n: 10, p: 0.4, r: 2 }, GridPoint { n: 12, p: 0.4, r: 3 }],
            reps: 3,
            algorithm,
            master_seed: 77,
            weights: WeightDist::UniformInt { max: 9 },
            planes: 1,
            ring: false,
            ground_stations: 1,
            verify_small: true,
        }
    }

    #[test]
    fn splitmix64_is_deterministic_and_spreads() {
        assert_eq!(splitmix64(42), splitmix64(42));
        let outputs: std::collections::HashSet<u64> = (0..1000).map(splitmix64).collect();
        assert_eq!(outputs.len(), 1000, "consecutive inputs must not collide");
    }

    #[test]
    fn records_are_ordered_and_objectives_repeat_across_reps() {
        let plan = small_plan(Algorithm::Tree);
        let outcome = run_benchmark(&plan, 4).unwrap();
        assert!(outcome.failures.is_empty(), "failures: {:?}", outcome.failures);
        assert_eq!(outcome.records.len(), 6);
        for (ix, record) in outcome.records.iter().enumerate() {
            assert_eq!(record.instance_id, ix, "merge order must follow instance ids");
            assert!(record.runtime_ns > 0);
            assert!(record.objective >= 0.0);
        }
        for cell in outcome.records.chunks(3) {
            assert!(cell.iter().all(|r| r.objective == cell[0].objective));
            assert!(cell.iter().all(|r| r.seed == cell[0].seed));
        }
        assert_ne!(
            outcome.records[0].seed, outcome.records[3].seed,
            "different grid cells draw different instances"
        );
    }

    #[test]
    fn rerun_reproduces_objective_columns() {
        let plan = small_plan(Algorithm::Tree);
        let first = run_benchmark(&plan, 1).unwrap();
        let second = run_benchmark(&plan, 3).unwrap();
        let objectives = |o: &BenchOutcome| -> Vec<f64> {
            o.records.iter().map(|r| r.objective).collect()
        };
        assert_eq!(objectives(&first), objectives(&second));
    }

    #[test]
    fn btw_and_tree_agree_on_benchmarked_trees() {
        let tree = run_benchmark(&small_plan(Algorithm::Tree), 2).unwrap();
        let btw = run_benchmark(&small_plan(Algorithm::Btw), 2).unwrap();
        assert!(btw.failures.is_empty());
        for (a, b) in tree.records.iter().zip(&btw.records) {
            assert_eq!(a.objective, b.objective);
            assert_eq!(a.seed, b.seed);
        }
    }

    #[test]
    fn facility_benchmark_passes_its_oracle_check() {
        let plan = BenchPlan { algorithm: Algorithm::Rfic, ..small_plan(Algorithm::Rfic) };
        let outcome = run_benchmark(&plan, 2).unwrap();
        assert!(outcome.failures.is_empty(), "failures: {:?}", outcome.failures);
        assert_eq!(outcome.records.len(), 6);
        assert!(outcome.records.iter().all(|r| r.algorithm == "rfic"));
    }

    #[test]
    fn csv_round_trips() {
        let plan = small_plan(Algorithm::Tree);
        let outcome = run_benchmark(&plan, 1).unwrap();
        let mut buffer = Vec::new();
        write_csv(&outcome.records, &mut buffer).unwrap();
        let text = String::from_utf8(buffer.clone()).unwrap();
        assert!(text.starts_with(CSV_HEADER), "header must be pinned exactly");
        let back = read_csv(buffer.as_slice()).unwrap();
        assert_eq!(back, outcome.records);
    }

    #[test]
    fn read_csv_reports_missing_columns_and_bad_numbers() {
        let missing = "instance_id,family,n\n1,prufer,10\n";
        assert!(read_csv(missing.as_bytes()).unwrap_err().contains("missing column"));
        let bad = format!("{CSV_HEADER}\n0,prufer,ten,9,0.3,2,5,tree,1.0,100\n");
        assert!(read_csv(bad.as_bytes()).unwrap_err().contains("n:"));
    }
}
