//! Reading and writing the line-based instance file format.
//!
//! Files are UTF-8 text; a line whose first non-blank character is `#` is a
//! comment and blank lines are ignored. The payload is:
//!
//! ```text
//! INTERDICT v1
//! problem edge            # or: problem facility
//! nodes <n>
//! node <id> F             # facility
//! node <id> C <weight>    # customer with demand weight
//! edges <m>
//! edge <u> <v>
//! budget <r>
//! ```
//!
//! The writer emits sections in exactly this order with node ids ascending
//! and each edge as `u v` with `u < v`; weights use the shortest decimal that
//! round-trips. Reading what the writer produced and writing it again yields
//! byte-identical text.

use crate::graph::{Graph, Instance, NodeId, NodeRole, ProblemKind};
use std::fmt::Write as _;
use thiserror::Error;

/// A parse failure with the 1-based line number it occurred on.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError { line, message: message.into() }
    }
}

/// Iterates over content lines, skipping blanks and `#` comments, tracking
/// 1-based line numbers for error reporting.
pub(crate) struct ContentLines<'a> {
    lines: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> ContentLines<'a> {
    pub(crate) fn new(text: &'a str) -> Self {
        ContentLines { lines: text.lines().enumerate() }
    }

    pub(crate) fn next_content(&mut self) -> Option<(usize, &'a str)> {
        for (i, raw) in self.lines.by_ref() {
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            return Some((i + 1, trimmed));
        }
        None
    }

    pub(crate) fn expect_content(&mut self, what: &str) -> Result<(usize, &'a str), ParseError> {
        self.next_content()
            .ok_or_else(|| ParseError::new(0, format!("unexpected end of file, expected {what}")))
    }
}

pub(crate) fn parse_count(line_no: usize, token: &str, what: &str) -> Result<usize, ParseError> {
    token
        .parse::<usize>()
        .map_err(|_| ParseError::new(line_no, format!("invalid {what} `{token}`")))
}

/// Parses an instance from text.
pub fn read_instance(text: &str) -> Result<Instance, ParseError> {
    let mut lines = ContentLines::new(text);

    let (no, line) = lines.expect_content("`INTERDICT v1` header")?;
    if line != "INTERDICT v1" {
        return Err(ParseError::new(no, format!("expected `INTERDICT v1` header, found `{line}`")));
    }

    let (no, line) = lines.expect_content("`problem` line")?;
    let kind = match line.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["problem", "edge"] => ProblemKind::EdgeInterdiction,
        ["problem", "facility"] => ProblemKind::FacilityInterdiction,
        _ => {
            return Err(ParseError::new(
                no,
                format!("expected `problem edge` or `problem facility`, found `{line}`"),
            ))
        }
    };

    let (no, line) = lines.expect_content("`nodes` line")?;
    let n = match line.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["nodes", count] => parse_count(no, count, "node count")?,
        _ => return Err(ParseError::new(no, format!("expected `nodes <n>`, found `{line}`"))),
    };

    let mut roles: Vec<Option<NodeRole>> = vec![None; n];
    let mut weights = vec![0.0f64; n];
    for _ in 0..n {
        let (no, line) = lines.expect_content("a `node` line")?;
        let tokens: Vec<_> = line.split_whitespace().collect();
        let (id, role, weight) = match tokens.as_slice() {
            ["node", id, "F"] => (*id, NodeRole::Facility, 0.0),
            ["node", id, "C", w] => {
                let weight = w.parse::<f64>().map_err(|_| {
                    ParseError::new(no, format!("invalid weight `{w}`"))
                })?;
                if !weight.is_finite() {
                    return Err(ParseError::new(no, format!("weight `{w}` is not finite")));
                }
                (*id, NodeRole::Customer, weight)
            }
            _ => {
                return Err(ParseError::new(
                    no,
                    format!("expected `node <id> F` or `node <id> C <weight>`, found `{line}`"),
                ))
            }
        };
        let id = parse_count(no, id, "node id")?;
        if id >= n {
            return Err(ParseError::new(no, format!("node id {id} outside 0..{n}")));
        }
        if roles[id].is_some() {
            return Err(ParseError::new(no, format!("node {id} declared twice")));
        }
        roles[id] = Some(role);
        weights[id] = weight;
    }
    let roles: Vec<NodeRole> = roles
        .into_iter()
        .map(|r| r.expect("all n slots were filled exactly once"))
        .collect();

    let (no, line) = lines.expect_content("`edges` line")?;
    let m = match line.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["edges", count] => parse_count(no, count, "edge count")?,
        _ => return Err(ParseError::new(no, format!("expected `edges <m>`, found `{line}`"))),
    };

    let mut edges: Vec<(NodeId, NodeId)> = Vec::with_capacity(m);
    let mut seen = std::collections::HashSet::new();
    for _ in 0..m {
        let (no, line) = lines.expect_content("an `edge` line")?;
        let tokens: Vec<_> = line.split_whitespace().collect();
        let (u, v) = match tokens.as_slice() {
            ["edge", u, v] => (
                parse_count(no, u, "edge endpoint")?,
                parse_count(no, v, "edge endpoint")?,
            ),
            _ => return Err(ParseError::new(no, format!("expected `edge <u> <v>`, found `{line}`"))),
        };
        if u >= n || v >= n {
            return Err(ParseError::new(no, format!("edge ({u}, {v}) references a node outside 0..{n}")));
        }
        if u == v {
            return Err(ParseError::new(no, format!("edge ({u}, {v}) is a self-loop")));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(ParseError::new(no, format!("edge ({u}, {v}) appears more than once")));
        }
        edges.push((u, v));
    }

    let (no, line) = lines.expect_content("`budget` line")?;
    let budget = match line.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["budget", r] => parse_count(no, r, "budget")?,
        _ => return Err(ParseError::new(no, format!("expected `budget <r>`, found `{line}`"))),
    };

    if let Some((no, line)) = lines.next_content() {
        return Err(ParseError::new(no, format!("unexpected trailing content `{line}`")));
    }

    let graph = Graph::new(n, &edges)
        .expect("edge sanity was checked line by line during parsing");
    Ok(Instance::new(graph, roles, weights, budget, kind))
}

/// Serializes an instance in canonical form (see the module docs).
pub fn write_instance(instance: &Instance) -> String {
    let mut out = String::new();
    out.push_str("INTERDICT v1\n");
    match instance.kind {
        ProblemKind::EdgeInterdiction => out.push_str("problem edge\n"),
        ProblemKind::FacilityInterdiction => out.push_str("problem facility\n"),
    }
    let _ = writeln!(out, "nodes {}", instance.node_count());
    for v in 0..instance.node_count() {
        match instance.roles[v] {
            NodeRole::Facility => {
                let _ = writeln!(out, "node {v} F");
            }
            NodeRole::Customer => {
                let _ = writeln!(out, "node {v} C {}", instance.weights[v]);
            }
        }
    }
    let _ = writeln!(out, "edges {}", instance.graph.edge_count());
    for &(u, v) in instance.graph.edges() {
        let _ = writeln!(out, "edge {u} {v}");
    }
    let _ = writeln!(out, "budget {}", instance.budget);
    out
}
