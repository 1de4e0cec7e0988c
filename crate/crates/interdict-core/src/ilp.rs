//! LP-format export of the edge-interdiction integer program, plus
//! ingestion of external solver results for cross-checking.
//!
//! The model minimizes the weight still covered: binary `x_v` says customer
//! `v` keeps facility service, binary `y_e` says edge `e` is cut. For every
//! customer–facility pair the unique tree path must either be cut somewhere
//! or the customer pays `x_v = 1`; at most `r` edges may be cut. The
//! maximized interdiction objective is then `total_weight − model optimum`,
//! recorded in a header comment because the LP format has no constant term.
//! Paths are only unique on trees, so the exporter is tree-only.

use crate::graph::{Instance, ProblemKind, Solution};
use crate::io::{ContentLines, ParseError};
use crate::SolveError;
use std::collections::HashMap;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ImportError {
    #[error("{0}")]
    Parse(#[from] ParseError),
    /// The listing was readable but contradicts the instance (fractional
    /// binaries, budget overruns, or coverage claims the removal set does
    /// not produce).
    #[error("solution inconsistent with the instance: {0}")]
    Inconsistent(String),
    #[error("importer expects a {expected} instance")]
    WrongKind { expected: ProblemKind },
}

/// Appends `terms` to `out` as an LP expression, sign-aware, wrapped a few
/// terms per line with continuation lines indented.
fn push_terms(out: &mut String, terms: &[(f64, String)]) {
    const PER_LINE: usize = 8;
    for (i, (coeff, name)) in terms.iter().enumerate() {
        if i > 0 {
            if i % PER_LINE == 0 {
                out.push_str("\n   ");
            }
            out.push_str(if *coeff < 0.0 { " - " } else { " + " });
        } else if *coeff < 0.0 {
            out.push_str("- ");
        }
        let magnitude = coeff.abs();
        if magnitude == 1.0 {
            out.push_str(name);
        } else {
            let _ = write!(out, "{magnitude} {name}");
        }
    }
}

/// Emits the integer program for an edge-interdiction instance on a
/// connected tree in LP model format. Variables are `x_<nodeid>` per
/// customer and `y_<edgeid>` per edge; constraints are one coverage row per
/// customer–facility pair (`cover_<customer>_<facility>`) and one budget
/// row. Header comments record the total customer weight and how to read
/// the optimum back as an interdiction objective.
pub fn export_reic_lp(instance: &Instance) -> Result<String, SolveError> {
    if instance.kind != ProblemKind::EdgeInterdiction {
        return Err(SolveError::WrongKind { expected: ProblemKind::EdgeInterdiction });
    }
    if !instance.graph.is_connected() {
        return Err(SolveError::NotConnected);
    }
    if !instance.graph.is_tree() {
        return Err(SolveError::NotATree);
    }
    let n = instance.node_count();
    let customers = instance.customers();
    let facilities = instance.facilities();
    let total_weight = instance.total_customer_weight();

    // Per-facility BFS parents; the path from a customer to the facility is
    // read off by walking parent pointers.
    let mut parent_edge: Vec<Vec<Option<(usize, usize)>>> = Vec::with_capacity(facilities.len());
    for &s in &facilities {
        let mut parents: Vec<Option<(usize, usize)>> = vec![None; n];
        let mut queue = std::collections::VecDeque::from([s]);
        let mut seen = vec![false; n];
        seen[s] = true;
        while let Some(v) = queue.pop_front() {
            for &(u, edge) in instance.graph.neighbors(v) {
                if !seen[u] {
                    seen[u] = true;
                    parents[u] = Some((v, edge));
                    queue.push_back(u);
                }
            }
        }
        parent_edge.push(parents);
    }

    let mut out = String::new();
    out.push_str("\\ edge-interdiction covering model\n");
    let _ = writeln!(out, "\\ total_weight = {total_weight}");
    out.push_str("\\ REIC objective = total_weight - model optimum\n");
    out.push_str("Minimize\n obj: ");
    let objective_terms: Vec<(f64, String)> =
        customers.iter().map(|&v| (instance.weight(v), format!("x_{v}"))).collect();
    if objective_terms.is_empty() {
        out.push('0');
    } else {
        push_terms(&mut out, &objective_terms);
    }
    out.push_str("\nSubject To\n");
    for &v in &customers {
        for (si, &s) in facilities.iter().enumerate() {
            let _ = write!(out, " cover_{v}_{s}: ");
            let mut terms = vec![(1.0, format!("x_{v}"))];
            let mut at = v;
            while at != s {
                let (up, edge) = parent_edge[si][at].expect("connected tree reaches s");
                terms.push((1.0, format!("y_{edge}")));
                at = up;
            }
            push_terms(&mut out, &terms);
            out.push_str(" >= 1\n");
        }
    }
    let edge_count = instance.graph.edge_count();
    if edge_count > 0 {
        out.push_str(" budget: ");
        let budget_terms: Vec<(f64, String)> =
            (0..edge_count).map(|e| (1.0, format!("y_{e}"))).collect();
        push_terms(&mut out, &budget_terms);
        let _ = writeln!(out, " <= {}", instance.budget);
    }
    if !customers.is_empty() || edge_count > 0 {
        out.push_str("Binary\n");
        for &v in &customers {
            let _ = writeln!(out, " x_{v}");
        }
        for e in 0..edge_count {
            let _ = writeln!(out, " y_{e}");
        }
    }
    out.push_str("End\n");
    Ok(out)
}

/// Reads a `name value` listing (one pair per line; blank lines and `#`
/// comments ignored) of the model's variables, turns the `y` assignments
/// into a removal set, and re-scores it with the evaluator. Rejects unknown
/// variables, repeated assignments, fractional binaries, removal sets over
/// budget, and `x` claims the removal set contradicts.
pub fn import_solution(instance: &Instance, listing: &str) -> Result<Solution, ImportError> {
    if instance.kind != ProblemKind::EdgeInterdiction {
        return Err(ImportError::WrongKind { expected: ProblemKind::EdgeInterdiction });
    }
    enum Var {
        Customer(usize),
        Edge(usize),
    }
    let mut vars: HashMap<String, Var> = HashMap::new();
    for v in instance.customers() {
        vars.insert(format!("x_{v}"), Var::Customer(v));
    }
    for e in 0..instance.graph.edge_count() {
        vars.insert(format!("y_{e}"), Var::Edge(e));
    }

    let near = |value: f64, target: f64| (value - target).abs() <= 1e-6;
    let mut removed: Vec<usize> = Vec::new();
    let mut claims: Vec<(usize, bool)> = Vec::new();
    let mut assigned: HashMap<String, f64> = HashMap::new();
    let mut lines = ContentLines::new(listing);
    while let Some((no, line)) = lines.next_content() {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let [name, value] = tokens.as_slice() else {
            return Err(ParseError {
                line: no,
                message: format!("expected `name value`, found `{line}`"),
            }
            .into());
        };
        let value: f64 = value.parse().map_err(|_| ParseError {
            line: no,
            message: format!("`{value}` is not a number"),
        })?;
        let var = vars.get(*name).ok_or_else(|| ParseError {
            line: no,
            message: format!("`{name}` is not a variable of this instance"),
        })?;
        if assigned.insert(name.to_string(), value).is_some() {
            return Err(ParseError {
                line: no,
                message: format!("`{name}` assigned twice"),
            }
            .into());
        }
        if !near(value, 0.0) && !near(value, 1.0) {
            return Err(ImportError::Inconsistent(format!(
                "`{name} = {value}` is not within 1e-6 of a binary value"
            )));
        }
        match var {
            Var::Edge(e) => {
                if value > 0.5 {
                    removed.push(*e);
                }
            }
            Var::Customer(v) => claims.push((*v, value > 0.5)),
        }
    }
    if removed.len() > instance.budget {
        return Err(ImportError::Inconsistent(format!(
            "{} edges removed exceeds the budget {}",
            removed.len(),
            instance.budget
        )));
    }
    removed.sort_unstable();
    let report = crate::graph::evaluate_strategy(instance, &removed)
        .expect("edge indices come from the instance");
    for (v, covered_claim) in claims {
        let disconnected = report.disconnected.contains(&v);
        if !covered_claim && !disconnected {
            return Err(ImportError::Inconsistent(format!(
                "x_{v} = 0 claims customer {v} is stranded, but the removal set leaves it covered"
            )));
        }
    }
    Ok(Solution {
        removed,
        objective: report.objective,
        disconnected: report.disconnected,
    })
}
