//! Undirected graphs, interdiction instances, and strategy evaluation.
//!
//! An [`Instance`] is a weighted undirected graph whose nodes are either
//! facilities or customers, together with an interdiction budget and a
//! problem kind (remove edges, or remove facility nodes). A customer is
//! *covered* when some surviving facility can still reach it; the interdictor
//! maximizes the total weight of customers covered by **no** facility.
//! [`evaluate_strategy`] scores an explicit removal set by flood-fill, which
//! every solver in this crate uses to cross-check its reconstructed optima.

use std::collections::VecDeque;
use std::fmt;
use thiserror::Error;

/// Nodes are dense indices `0..n`.
pub type NodeId = usize;

/// What a node represents: a service point or a demand point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NodeRole {
    Facility,
    Customer,
}

/// Which resource the interdictor removes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ProblemKind {
    EdgeInterdiction,
    FacilityInterdiction,
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProblemKind::EdgeInterdiction => write!(f, "edge interdiction"),
            ProblemKind::FacilityInterdiction => write!(f, "facility interdiction"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge ({0}, {1}) is a self-loop")]
    SelfLoop(NodeId, NodeId),
    #[error("edge ({0}, {1}) appears more than once")]
    DuplicateEdge(NodeId, NodeId),
    #[error("edge ({0}, {1}) references a node outside 0..{2}")]
    NodeOutOfRange(NodeId, NodeId, usize),
}

/// A simple undirected graph with dense node ids and indexed edges.
///
/// Edges are stored normalized as `(min, max)` pairs in insertion order; the
/// insertion position is the edge's stable index, used by solvers to report
/// removal sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    node_count: usize,
    edges: Vec<(NodeId, NodeId)>,
    /// For every node, its `(neighbor, edge index)` pairs in edge-insertion order.
    adjacency: Vec<Vec<(NodeId, usize)>>,
}

impl Graph {
    /// Builds a simple graph, normalizing each edge to `(min, max)`.
    pub fn new(node_count: usize, edges: &[(NodeId, NodeId)]) -> Result<Self, GraphError> {
        let mut graph = Graph {
            node_count,
            edges: Vec::with_capacity(edges.len()),
            adjacency: vec![Vec::new(); node_count],
        };
        for &(a, b) in edges {
            if a >= node_count || b >= node_count {
                return Err(GraphError::NodeOutOfRange(a, b, node_count));
            }
            if a == b {
                return Err(GraphError::SelfLoop(a, b));
            }
            let (u, v) = (a.min(b), a.max(b));
            if graph.adjacency[u].iter().any(|&(w, _)| w == v) {
                return Err(GraphError::DuplicateEdge(u, v));
            }
            let ix = graph.edges.len();
            graph.edges.push((u, v));
            graph.adjacency[u].push((v, ix));
            graph.adjacency[v].push((u, ix));
        }
        Ok(graph)
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as normalized `(min, max)` pairs in index order.
    pub fn edges(&self) -> &[(NodeId, NodeId)] {
        &self.edges
    }

    /// The endpoints of edge `ix`.
    pub fn edge(&self, ix: usize) -> (NodeId, NodeId) {
        self.edges[ix]
    }

    /// `(neighbor, edge index)` pairs of `v` in edge-insertion order.
    pub fn neighbors(&self, v: NodeId) -> &[(NodeId, usize)] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.adjacency[v].len()
    }

    /// The index of edge `{u, v}`, if present.
    pub fn edge_index(&self, u: NodeId, v: NodeId) -> Option<usize> {
        if u >= self.node_count || v >= self.node_count {
            return None;
        }
        // Scan the smaller adjacency list.
        let (a, b) = if self.degree(u) <= self.degree(v) { (u, v) } else { (v, u) };
        self.adjacency[a].iter().find(|&&(w, _)| w == b).map(|&(_, ix)| ix)
    }

    /// Component label per node, labels numbered by first appearance.
    pub fn components(&self) -> Vec<usize> {
        let mut label = vec![usize::MAX; self.node_count];
        let mut next = 0;
        let mut queue = VecDeque::new();
        for start in 0..self.node_count {
            if label[start] != usize::MAX {
                continue;
            }
            label[start] = next;
            queue.push_back(start);
            while let Some(v) = queue.pop_front() {
                for &(w, _) in &self.adjacency[v] {
                    if label[w] == usize::MAX {
                        label[w] = next;
                        queue.push_back(w);
                    }
                }
            }
            next += 1;
        }
        label
    }

    pub fn component_count(&self) -> usize {
        self.components().iter().copied().max().map_or(0, |m| m + 1)
    }

    pub fn is_connected(&self) -> bool {
        self.node_count == 0 || self.component_count() == 1
    }

    /// A tree is connected with exactly `n - 1` edges.
    pub fn is_tree(&self) -> bool {
        self.node_count > 0 && self.edge_count() == self.node_count - 1 && self.is_connected()
    }

    /// A forest has `n - c` edges for `c` components (equivalently: no cycle).
    pub fn is_forest(&self) -> bool {
        self.edge_count() + self.component_count() == self.node_count
    }
}

/// A full problem instance: graph, roles, weights, budget, kind.
///
/// Weights are customer demands; facility entries are forced to `0.0` so the
/// objective only ever counts customers.
#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    pub graph: Graph,
    pub roles: Vec<NodeRole>,
    pub weights: Vec<f64>,
    pub budget: usize,
    pub kind: ProblemKind,
}

impl Instance {
    /// Assembles an instance, zeroing the weight of every facility node.
    ///
    /// # Panics
    /// If `roles` or `weights` disagree with the graph's node count.
    pub fn new(
        graph: Graph,
        roles: Vec<NodeRole>,
        mut weights: Vec<f64>,
        budget: usize,
        kind: ProblemKind,
    ) -> Self {
        assert_eq!(roles.len(), graph.node_count(), "one role per node");
        assert_eq!(weights.len(), graph.node_count(), "one weight per node");
        for (w, role) in weights.iter_mut().zip(&roles) {
            if *role == NodeRole::Facility {
                *w = 0.0;
            }
        }
        Instance { graph, roles, weights, budget, kind }
    }

    pub fn node_count(&self) -> usize {
        self.graph.node_count()
    }

    pub fn is_facility(&self, v: NodeId) -> bool {
        self.roles[v] == NodeRole::Facility
    }

    pub fn is_customer(&self, v: NodeId) -> bool {
        self.roles[v] == NodeRole::Customer
    }

    /// Facility ids in ascending order.
    pub fn facilities(&self) -> Vec<NodeId> {
        (0..self.node_count()).filter(|&v| self.is_facility(v)).collect()
    }

    /// Customer ids in ascending order.
    pub fn customers(&self) -> Vec<NodeId> {
        (0..self.node_count()).filter(|&v| self.is_customer(v)).collect()
    }

    pub fn weight(&self, v: NodeId) -> f64 {
        self.weights[v]
    }

    /// Total customer demand: the objective of removing everything.
    pub fn total_customer_weight(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// Ways an instance can be malformed beyond what [`Graph::new`] rejects.
#[derive(Clone, Debug, PartialEq)]
pub enum InstanceViolation {
    NegativeWeight { node: NodeId, weight: f64 },
    NonFiniteWeight { node: NodeId },
    NotConnected,
    NotATree,
}

impl fmt::Display for InstanceViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InstanceViolation::NegativeWeight { node, weight } => {
                write!(f, "node {node} has negative weight {weight}")
            }
            InstanceViolation::NonFiniteWeight { node } => {
                write!(f, "node {node} has a non-finite weight")
            }
            InstanceViolation::NotConnected => write!(f, "graph is not connected"),
            InstanceViolation::NotATree => write!(f, "graph is not a tree"),
        }
    }
}

/// Checks weight sanity; an empty result means the instance is well-formed
/// for the general solvers.
pub fn validate_instance(instance: &Instance) -> Vec<InstanceViolation> {
    let mut violations = Vec::new();
    for v in 0..instance.node_count() {
        let w = instance.weights[v];
        if !w.is_finite() {
            violations.push(InstanceViolation::NonFiniteWeight { node: v });
        } else if w < 0.0 {
            violations.push(InstanceViolation::NegativeWeight { node: v, weight: w });
        }
    }
    violations
}

/// [`validate_instance`] plus the structural requirements of the tree solvers.
pub fn validate_tree_instance(instance: &Instance) -> Vec<InstanceViolation> {
    let mut violations = validate_instance(instance);
    if !instance.graph.is_connected() {
        violations.push(InstanceViolation::NotConnected);
    } else if !instance.graph.is_tree() {
        violations.push(InstanceViolation::NotATree);
    }
    violations
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("removal set references edge index {0}, but the graph has {1} edges")]
    UnknownEdge(usize, usize),
    #[error("removal set references node {0}, which is not a facility")]
    NotAFacility(NodeId),
}

/// The outcome of scoring one removal set.
#[derive(Clone, Debug, PartialEq)]
pub struct CoverageReport {
    /// Total weight of customers no surviving facility can reach.
    pub objective: f64,
    /// Those customers, ascending.
    pub disconnected: Vec<NodeId>,
    /// Per node: whether some surviving facility reaches it.
    pub covered: Vec<bool>,
}

/// Scores a removal set by multi-source flood-fill from the surviving
/// facilities.
///
/// For edge interdiction, `removed` holds edge indices; for facility
/// interdiction it holds facility node ids (a removed facility is deleted
/// outright, so nothing routes through it). Duplicates are tolerated; budget
/// compliance is the caller's concern.
pub fn evaluate_strategy(instance: &Instance, removed: &[usize]) -> Result<CoverageReport, EvalError> {
    let n = instance.node_count();
    let g = &instance.graph;
    let mut edge_removed = vec![false; g.edge_count()];
    let mut node_removed = vec![false; n];
    match instance.kind {
        ProblemKind::EdgeInterdiction => {
            for &ix in removed {
                if ix >= g.edge_count() {
                    return Err(EvalError::UnknownEdge(ix, g.edge_count()));
                }
                edge_removed[ix] = true;
            }
        }
        ProblemKind::FacilityInterdiction => {
            for &v in removed {
                if v >= n || instance.roles[v] != NodeRole::Facility {
                    return Err(EvalError::NotAFacility(v));
                }
                node_removed[v] = true;
            }
        }
    }

    let mut covered = vec![false; n];
    let mut queue = VecDeque::new();
    for v in 0..n {
        if instance.roles[v] == NodeRole::Facility && !node_removed[v] {
            covered[v] = true;
            queue.push_back(v);
        }
    }
    while let Some(v) = queue.pop_front() {
        for &(w, ix) in g.neighbors(v) {
            if !edge_removed[ix] && !node_removed[w] && !covered[w] {
                covered[w] = true;
                queue.push_back(w);
            }
        }
    }

    let mut objective = 0.0;
    let mut disconnected = Vec::new();
    for (v, &is_covered) in covered.iter().enumerate() {
        if instance.roles[v] == NodeRole::Customer && !is_covered {
            objective += instance.weights[v];
            disconnected.push(v);
        }
    }
    Ok(CoverageReport { objective, disconnected, covered })
}

/// An optimal (or candidate) interdiction: the removal set, its objective,
/// and the customers it disconnects.
#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    /// Removed edge indices (edge interdiction) or facility ids (facility
    /// interdiction), ascending.
    pub removed: Vec<usize>,
    pub objective: f64,
    /// Customers covered by no surviving facility, ascending.
    pub disconnected: Vec<NodeId>,
}

/// Counts customers whose deletion would split the facilities around them
/// into three or more groups: for each customer `v`, delete `v` and count the
/// connected components of the remainder that contain at least one facility;
/// `v` is a *joint* when that count is `>= 3`.
///
/// Joints are where a single node funnels many facility clusters, a quick
/// structural indicator of how entangled an instance is.
pub fn count_customer_joints(instance: &Instance) -> usize {
    let n = instance.node_count();
    let g = &instance.graph;
    let mut joints = 0;
    let mut label = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for v in 0..n {
        if instance.roles[v] != NodeRole::Customer {
            continue;
        }
        label.iter_mut().for_each(|l| *l = usize::MAX);
        let mut facility_components = 0;
        let mut next = 0;
        for start in 0..n {
            if start == v || label[start] != usize::MAX {
                continue;
            }
            label[start] = next;
            let mut has_facility = false;
            queue.push_back(start);
            while let Some(x) = queue.pop_front() {
                if instance.roles[x] == NodeRole::Facility {
                    has_facility = true;
                }
                for &(w, _) in g.neighbors(x) {
                    if w != v && label[w] == usize::MAX {
                        label[w] = next;
                        queue.push_back(w);
                    }
                }
            }
            if has_facility {
                facility_components += 1;
            }
            next += 1;
        }
        if facility_components >= 3 {
            joints += 1;
        }
    }
    joints
}
