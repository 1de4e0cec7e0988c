//! Tree decompositions: validation, constructors for special graph families,
//! a min-degree heuristic for arbitrary graphs, the transform into the
//! operation-per-node ("nice") form the bounded-treewidth solver consumes,
//! and a line-based file format.
//!
//! A tree decomposition covers a graph with *bags* of vertices arranged in a
//! tree such that every vertex appears somewhere, every edge has a bag
//! containing both endpoints, and the bags containing any one vertex form a
//! connected subtree. Its *width* is the largest bag size minus one. The nice
//! form refines this into a rooted tree of five primitive node kinds — leaf,
//! introduce-vertex, introduce-edge, forget, join — with empty root and leaf
//! bags and **each graph edge introduced exactly once**, which is what lets
//! the solver charge every edge-cut decision to a unique node.

use crate::graph::{Graph, NodeId};
use crate::io::{parse_count, ContentLines, ParseError};
use std::collections::HashSet;
use std::fmt;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecompositionError {
    #[error("input graph is not a forest")]
    NotAForest,
    #[error("invalid tree decomposition: {0}")]
    Invalid(String),
}

/// Bags of graph vertices arranged in a tree, with an optional preferred
/// root. Bag contents are kept sorted and deduplicated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomposition {
    bags: Vec<Vec<NodeId>>,
    links: Vec<(usize, usize)>,
    root: Option<usize>,
}

impl TreeDecomposition {
    pub fn new(bags: Vec<Vec<NodeId>>, links: Vec<(usize, usize)>, root: Option<usize>) -> Self {
        let bags = bags
            .into_iter()
            .map(|mut bag| {
                bag.sort_unstable();
                bag.dedup();
                bag
            })
            .collect();
        TreeDecomposition { bags, links, root }
    }

    pub fn bags(&self) -> &[Vec<NodeId>] {
        &self.bags
    }

    pub fn bag_count(&self) -> usize {
        self.bags.len()
    }

    /// Links between bags (indices into `bags`).
    pub fn links(&self) -> &[(usize, usize)] {
        &self.links
    }

    pub fn root(&self) -> Option<usize> {
        self.root
    }

    /// Largest bag size minus one; an all-empty decomposition reports 0.
    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(0).saturating_sub(1)
    }
}

/// Ways a decomposition can fail to decompose a particular graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecompositionViolation {
    /// The bags/links themselves are broken (bad indices, not a tree).
    MalformedTree(String),
    /// A graph vertex appears in no bag.
    VertexNotCovered(NodeId),
    /// No bag contains both endpoints of this graph edge.
    EdgeNotCovered(NodeId, NodeId),
    /// The bags containing this vertex do not form a connected subtree.
    OccurrenceDisconnected(NodeId),
}

impl fmt::Display for DecompositionViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecompositionViolation::MalformedTree(msg) => write!(f, "malformed bag tree: {msg}"),
            DecompositionViolation::VertexNotCovered(v) => {
                write!(f, "vertex {v} appears in no bag")
            }
            DecompositionViolation::EdgeNotCovered(u, v) => {
                write!(f, "no bag contains both endpoints of edge ({u}, {v})")
            }
            DecompositionViolation::OccurrenceDisconnected(v) => {
                write!(f, "the bags containing vertex {v} are not connected")
            }
        }
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}

/// Checks the three defining conditions (vertex coverage, edge coverage,
/// connected occurrences) plus basic structural sanity. Empty result means
/// the decomposition is valid for `graph`.
pub fn validate_decomposition(graph: &Graph, dec: &TreeDecomposition) -> Vec<DecompositionViolation> {
    use DecompositionViolation::*;
    let mut violations = Vec::new();
    let t = dec.bag_count();
    let n = graph.node_count();

    if t == 0 {
        violations.push(MalformedTree("a decomposition needs at least one bag".into()));
        return violations;
    }
    for (i, bag) in dec.bags().iter().enumerate() {
        for &v in bag {
            if v >= n {
                violations.push(MalformedTree(format!(
                    "bag {i} references vertex {v}, but the graph has {n} vertices"
                )));
            }
        }
    }
    let mut links_ok = true;
    if dec.links().len() != t - 1 {
        violations.push(MalformedTree(format!(
            "{} bags need exactly {} links, found {}",
            t,
            t - 1,
            dec.links().len()
        )));
        links_ok = false;
    }
    for &(a, b) in dec.links() {
        if a >= t || b >= t {
            violations.push(MalformedTree(format!("link ({a}, {b}) references a missing bag")));
            links_ok = false;
        }
    }
    if links_ok {
        let mut uf = UnionFind::new(t);
        for &(a, b) in dec.links() {
            uf.union(a, b);
        }
        let components: HashSet<usize> = (0..t).map(|i| uf.find(i)).collect();
        if components.len() > 1 {
            violations.push(MalformedTree("the bags do not form a single tree".into()));
            links_ok = false;
        }
    }

    // Per-vertex occurrence lists, in bag order.
    let mut bags_of: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, bag) in dec.bags().iter().enumerate() {
        for &v in bag {
            if v < n {
                bags_of[v].push(i);
            }
        }
    }
    for (v, occurrences) in bags_of.iter().enumerate() {
        if occurrences.is_empty() {
            violations.push(VertexNotCovered(v));
        }
    }
    for &(u, v) in graph.edges() {
        let covered = bags_of[u]
            .iter()
            .any(|&i| dec.bags()[i].binary_search(&v).is_ok());
        if !covered {
            violations.push(EdgeNotCovered(u, v));
        }
    }
    if links_ok {
        // For each vertex, union its bags along links whose both ends hold it.
        let membership: Vec<HashSet<usize>> =
            dec.bags().iter().map(|bag| bag.iter().copied().collect()).collect();
        for (v, occurrences) in bags_of.iter().enumerate() {
            if occurrences.len() < 2 {
                continue;
            }
            let mut uf = UnionFind::new(t);
            for &(a, b) in dec.links() {
                if membership[a].contains(&v) && membership[b].contains(&v) {
                    uf.union(a, b);
                }
            }
            let roots: HashSet<usize> = occurrences.iter().map(|&i| uf.find(i)).collect();
            if roots.len() > 1 {
                violations.push(OccurrenceDisconnected(v));
            }
        }
    }
    violations
}

/// The width-1 decomposition of a forest: one bag per edge, singleton bags
/// for isolated vertices, bags of a component linked through the first bag
/// that mentions their shared vertex, components chained to the first.
pub fn tree_decomposition_of_tree(graph: &Graph) -> Result<TreeDecomposition, DecompositionError> {
    if !graph.is_forest() {
        return Err(DecompositionError::NotAForest);
    }
    let n = graph.node_count();
    if n == 0 {
        return Ok(TreeDecomposition::new(vec![Vec::new()], Vec::new(), None));
    }
    let mut bags: Vec<Vec<NodeId>> = Vec::new();
    let mut links: Vec<(usize, usize)> = Vec::new();
    // First bag that contains each vertex; later bags of the vertex link here.
    let mut anchor: Vec<Option<usize>> = vec![None; n];
    let mut component_anchors: Vec<usize> = Vec::new();
    let mut seen = vec![false; n];
    let mut queue = std::collections::VecDeque::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let component_first_bag = bags.len();
        if graph.degree(start) == 0 {
            anchor[start] = Some(bags.len());
            bags.push(vec![start]);
        } else {
            queue.push_back(start);
            while let Some(v) = queue.pop_front() {
                for &(u, _) in graph.neighbors(v) {
                    if seen[u] {
                        continue;
                    }
                    seen[u] = true;
                    let bag_ix = bags.len();
                    bags.push(vec![v, u]);
                    if let Some(a) = anchor[v] {
                        links.push((a, bag_ix));
                    } else {
                        anchor[v] = Some(bag_ix);
                    }
                    anchor[u] = Some(bag_ix);
                    queue.push_back(u);
                }
            }
        }
        component_anchors.push(component_first_bag);
    }
    for &a in &component_anchors[1..] {
        links.push((component_anchors[0], a));
    }
    Ok(TreeDecomposition::new(bags, links, None))
}

/// A path decomposition of the `planes × per_plane` grid graph (vertex
/// `(i, j)` is id `i·per_plane + j`; rows are paths, columns are rungs) with
/// width `min(planes, per_plane)` (0 for the single-vertex grid): the sweep
/// walks the shorter dimension one step at a time while holding a full slice
/// of the longer one.
///
/// # Panics
/// If either dimension is zero.
pub fn grid_decomposition(planes: usize, per_plane: usize) -> TreeDecomposition {
    assert!(planes >= 1 && per_plane >= 1, "grid dimensions must be positive");
    let id = |i: usize, j: usize| i * per_plane + j;
    let mut bags: Vec<Vec<NodeId>> = Vec::new();
    if planes == 1 && per_plane == 1 {
        bags.push(vec![0]);
    } else if planes <= per_plane {
        for j in 0..per_plane - 1 {
            for i in 0..planes {
                let mut bag: Vec<NodeId> = (i..planes).map(|x| id(x, j)).collect();
                bag.extend((0..=i).map(|x| id(x, j + 1)));
                bags.push(bag);
            }
        }
    } else {
        for i in 0..planes - 1 {
            for j in 0..per_plane {
                let mut bag: Vec<NodeId> = (j..per_plane).map(|x| id(i, x)).collect();
                bag.extend((0..=j).map(|x| id(i + 1, x)));
                bags.push(bag);
            }
        }
    }
    let links = (1..bags.len()).map(|b| (b - 1, b)).collect();
    TreeDecomposition::new(bags, links, None)
}

/// A valid decomposition of an arbitrary graph from the min-degree
/// elimination heuristic (ties broken toward the lowest vertex id). The
/// width is whatever the ordering yields — at least the true treewidth,
/// with no optimality guarantee; read it off with
/// [`TreeDecomposition::width`].
pub fn heuristic_decomposition(graph: &Graph) -> TreeDecomposition {
    let n = graph.node_count();
    if n == 0 {
        return TreeDecomposition::new(vec![Vec::new()], Vec::new(), None);
    }
    let mut adj: Vec<HashSet<usize>> = vec![HashSet::new(); n];
    for &(u, v) in graph.edges() {
        adj[u].insert(v);
        adj[v].insert(u);
    }
    let mut alive = vec![true; n];
    let mut elim_order = vec![0usize; n];
    let mut neighbors_at_elim: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut bags: Vec<Vec<NodeId>> = Vec::with_capacity(n);
    for step in 0..n {
        let v = (0..n)
            .filter(|&x| alive[x])
            .min_by_key(|&x| (adj[x].len(), x))
            .expect("an alive vertex remains");
        let mut neighbors: Vec<usize> = adj[v].iter().copied().collect();
        neighbors.sort_unstable();
        // The eliminated vertex's bag: itself plus its current neighborhood,
        // which is turned into a clique so later bags stay consistent.
        let mut bag = neighbors.clone();
        bag.push(v);
        for (i, &a) in neighbors.iter().enumerate() {
            for &b in &neighbors[i + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
            adj[a].remove(&v);
        }
        alive[v] = false;
        adj[v].clear();
        elim_order[v] = step;
        neighbors_at_elim[v] = neighbors;
        bags.push(bag);
        debug_assert_eq!(bags.len(), step + 1, "vertex v's bag index equals its step");
    }
    // Bag of v hangs under the bag of its earliest-eliminated neighbor;
    // neighborless eliminations finish a component, and components chain to
    // the first.
    let bag_of = |v: usize| elim_order[v];
    let mut links: Vec<(usize, usize)> = Vec::new();
    let mut component_roots: Vec<usize> = Vec::new();
    for (v, neighbors) in neighbors_at_elim.iter().enumerate() {
        match neighbors.iter().min_by_key(|&&u| elim_order[u]) {
            Some(&u) => links.push((bag_of(u), bag_of(v))),
            None => component_roots.push(bag_of(v)),
        }
    }
    for &root in &component_roots[1..] {
        links.push((component_roots[0], root));
    }
    TreeDecomposition::new(bags, links, None)
}

/// The five primitive node kinds of a nice decomposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NiceNodeKind {
    /// An empty starting bag.
    Leaf,
    /// Adds one vertex to the child's bag — without any of its edges.
    IntroduceVertex(NodeId),
    /// Brings one graph edge into play; both endpoints are in the bag.
    IntroduceEdge(NodeId, NodeId),
    /// Drops one vertex from the child's bag, fixing its fate.
    Forget(NodeId),
    /// Merges two independently solved copies of the same bag.
    Join,
}

/// One node of a nice decomposition: its kind, its bag (sorted), and its
/// children (indices into the owning [`NiceDecomposition`]).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiceNode {
    pub kind: NiceNodeKind,
    pub bag: Vec<NodeId>,
    pub children: Vec<usize>,
}

/// A rooted tree of [`NiceNode`]s. Constructors in this module emit children
/// before their parent in `nodes`; consumers that accept arbitrary instances
/// should traverse from `root` rather than rely on index order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiceDecomposition {
    pub nodes: Vec<NiceNode>,
    pub root: usize,
}

impl NiceDecomposition {
    /// Largest bag size minus one.
    pub fn width(&self) -> usize {
        self.nodes.iter().map(|t| t.bag.len()).max().unwrap_or(0).saturating_sub(1)
    }
}

/// Checks every structural invariant of a nice decomposition of `graph`:
/// tree shape, per-kind bag deltas, empty root and leaf bags, each graph
/// edge introduced exactly once, every vertex covered, and connected
/// occurrences. Returns human-readable violations; empty means valid.
pub fn validate_nice_decomposition(graph: &Graph, nice: &NiceDecomposition) -> Vec<String> {
    let mut violations = Vec::new();
    let len = nice.nodes.len();
    if len == 0 {
        return vec!["a nice decomposition needs at least one node".into()];
    }
    if nice.root >= len {
        return vec![format!("root index {} out of range", nice.root)];
    }
    let mut indegree = vec![0usize; len];
    for (i, node) in nice.nodes.iter().enumerate() {
        for &c in &node.children {
            if c >= len {
                violations.push(format!("node {i} references missing child {c}"));
            } else {
                indegree[c] += 1;
            }
        }
        if !node.bag.windows(2).all(|w| w[0] < w[1]) {
            violations.push(format!("node {i} bag is not sorted strictly ascending"));
        }
    }
    if !violations.is_empty() {
        return violations;
    }
    for (i, &d) in indegree.iter().enumerate() {
        if i == nice.root && d != 0 {
            violations.push(format!("root {i} has a parent"));
        } else if i != nice.root && d != 1 {
            violations.push(format!("node {i} has {d} parents, expected exactly 1"));
        }
    }
    // Reachability from the root covers every node iff the above held and
    // there is no cycle.
    let mut reached = vec![false; len];
    let mut stack = vec![nice.root];
    while let Some(t) = stack.pop() {
        if !reached[t] {
            reached[t] = true;
            stack.extend(nice.nodes[t].children.iter().copied());
        }
    }
    if reached.iter().filter(|&&x| x).count() != len {
        violations.push("not every node is reachable from the root".into());
    }
    if !violations.is_empty() {
        return violations;
    }

    let n = graph.node_count();
    let without = |bag: &[NodeId], v: NodeId| -> Vec<NodeId> {
        bag.iter().copied().filter(|&x| x != v).collect()
    };
    let mut edge_seen: std::collections::HashMap<(NodeId, NodeId), usize> =
        std::collections::HashMap::new();
    let mut vertex_covered = vec![false; n];
    let mut forget_count = vec![0usize; n];
    for (i, node) in nice.nodes.iter().enumerate() {
        for &v in &node.bag {
            if v >= n {
                violations.push(format!("node {i} bag mentions vertex {v} outside the graph"));
            } else {
                vertex_covered[v] = true;
            }
        }
        let child_bag = |c: usize| &nice.nodes[node.children[c]].bag;
        match node.kind {
            NiceNodeKind::Leaf => {
                if !node.children.is_empty() {
                    violations.push(format!("leaf node {i} has children"));
                }
                if !node.bag.is_empty() {
                    violations.push(format!("leaf node {i} has a nonempty bag"));
                }
            }
            NiceNodeKind::IntroduceVertex(v) => {
                if node.children.len() != 1 {
                    violations.push(format!("introduce-vertex node {i} needs exactly one child"));
                } else if !node.bag.contains(&v) || without(&node.bag, v) != *child_bag(0) {
                    violations.push(format!(
                        "introduce-vertex node {i} must extend its child's bag by vertex {v}"
                    ));
                }
            }
            NiceNodeKind::IntroduceEdge(u, v) => {
                if node.children.len() != 1 {
                    violations.push(format!("introduce-edge node {i} needs exactly one child"));
                } else if node.bag != *child_bag(0) {
                    violations.push(format!("introduce-edge node {i} must keep its child's bag"));
                }
                if !node.bag.contains(&u) || !node.bag.contains(&v) {
                    violations.push(format!(
                        "introduce-edge node {i} must hold both endpoints of ({u}, {v})"
                    ));
                }
                if graph.edge_index(u, v).is_none() {
                    violations.push(format!("({u}, {v}) at node {i} is not a graph edge"));
                } else {
                    *edge_seen.entry((u.min(v), u.max(v))).or_insert(0) += 1;
                }
            }
            NiceNodeKind::Forget(v) => {
                if node.children.len() != 1 {
                    violations.push(format!("forget node {i} needs exactly one child"));
                } else if !child_bag(0).contains(&v) || without(child_bag(0), v) != node.bag {
                    violations.push(format!(
                        "forget node {i} must shrink its child's bag by vertex {v}"
                    ));
                }
                if v < n {
                    forget_count[v] += 1;
                }
            }
            NiceNodeKind::Join => {
                if node.children.len() != 2 {
                    violations.push(format!("join node {i} needs exactly two children"));
                } else if *child_bag(0) != node.bag || *child_bag(1) != node.bag {
                    violations.push(format!("join node {i} children must share its bag"));
                }
            }
        }
    }
    if !nice.nodes[nice.root].bag.is_empty() {
        violations.push("the root bag must be empty".into());
    }
    for &(u, v) in graph.edges() {
        match edge_seen.get(&(u, v)) {
            Some(1) => {}
            Some(k) => violations.push(format!("edge ({u}, {v}) introduced {k} times")),
            None => violations.push(format!("edge ({u}, {v}) is never introduced")),
        }
    }
    for v in 0..n {
        if !vertex_covered[v] {
            violations.push(format!("vertex {v} appears in no bag"));
        } else if forget_count[v] != 1 {
            // With an empty root bag, the bags holding v form one connected
            // subtree exactly when v is forgotten exactly once.
            violations.push(format!(
                "vertex {v} is forgotten {} times; its bags cannot form one connected subtree",
                forget_count[v]
            ));
        }
    }
    violations
}

/// State for emitting nice nodes bottom-up.
struct NiceBuilder<'g> {
    graph: &'g Graph,
    nodes: Vec<NiceNode>,
    introduced: HashSet<(NodeId, NodeId)>,
}

impl<'g> NiceBuilder<'g> {
    fn push(&mut self, kind: NiceNodeKind, bag: Vec<NodeId>, children: Vec<usize>) -> usize {
        self.nodes.push(NiceNode { kind, bag, children });
        self.nodes.len() - 1
    }

    /// Emits `Leaf` followed by one introduce per bag vertex, ascending.
    fn leaf_chain(&mut self, target: &[NodeId]) -> usize {
        let mut top = self.push(NiceNodeKind::Leaf, Vec::new(), Vec::new());
        let mut bag = Vec::with_capacity(target.len());
        for &v in target {
            bag.push(v);
            top = self.push(NiceNodeKind::IntroduceVertex(v), bag.clone(), vec![top]);
        }
        top
    }

    /// Emits forgets/introduces on top of `top` until its bag equals
    /// `target`. Just before a vertex is forgotten, every not-yet-introduced
    /// graph edge from it into the current bag is introduced — each edge
    /// surfaces exactly once this way, at the forget of whichever endpoint
    /// leaves first.
    fn bridge(&mut self, mut top: usize, from: &[NodeId], target: &[NodeId]) -> usize {
        let mut bag: Vec<NodeId> = from.to_vec();
        let extras: Vec<NodeId> =
            bag.iter().copied().filter(|v| target.binary_search(v).is_err()).collect();
        for w in extras {
            for &(x, _) in self.graph.neighbors(w) {
                let key = (w.min(x), w.max(x));
                if bag.binary_search(&x).is_ok() && !self.introduced.contains(&key) {
                    self.introduced.insert(key);
                    top = self.push(
                        NiceNodeKind::IntroduceEdge(key.0, key.1),
                        bag.clone(),
                        vec![top],
                    );
                }
            }
            bag.retain(|&v| v != w);
            top = self.push(NiceNodeKind::Forget(w), bag.clone(), vec![top]);
        }
        for &v in target {
            if bag.binary_search(&v).is_err() {
                let pos = bag.partition_point(|&x| x < v);
                bag.insert(pos, v);
                top = self.push(NiceNodeKind::IntroduceVertex(v), bag.clone(), vec![top]);
            }
        }
        debug_assert_eq!(bag, target);
        top
    }
}

/// Converts a validated decomposition into the nice form: every bag becomes
/// a chain of single-vertex steps, multiple children are merged with
/// left-leaning binary joins, each graph edge is introduced exactly once,
/// and the root bag is emptied. Width is preserved and the node count is
/// linear in (width × bag count).
pub fn to_extended_nice(
    graph: &Graph,
    dec: &TreeDecomposition,
) -> Result<NiceDecomposition, DecompositionError> {
    let violations = validate_decomposition(graph, dec);
    if let Some(first) = violations.first() {
        return Err(DecompositionError::Invalid(first.to_string()));
    }
    let t = dec.bag_count();
    let root_bag = dec.root().unwrap_or(0);
    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); t];
    for &(a, b) in dec.links() {
        adjacency[a].push(b);
        adjacency[b].push(a);
    }
    // Iterative post-order over the bag tree from the root.
    let mut parent = vec![usize::MAX; t];
    let mut order = Vec::with_capacity(t);
    let mut stack = vec![root_bag];
    let mut seen = vec![false; t];
    seen[root_bag] = true;
    while let Some(b) = stack.pop() {
        order.push(b);
        for &c in &adjacency[b] {
            if !seen[c] {
                seen[c] = true;
                parent[c] = b;
                stack.push(c);
            }
        }
    }
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); t];
    for &b in &order {
        if parent[b] != usize::MAX {
            children[parent[b]].push(b);
        }
    }

    let mut builder = NiceBuilder { graph, nodes: Vec::new(), introduced: HashSet::new() };
    let mut top_of: Vec<usize> = vec![usize::MAX; t];
    for &b in order.iter().rev() {
        let bag = &dec.bags()[b];
        if children[b].is_empty() {
            top_of[b] = builder.leaf_chain(bag);
        } else {
            let mut acc = usize::MAX;
            for &c in &children[b] {
                let bridged = builder.bridge(top_of[c], &dec.bags()[c].clone(), bag);
                acc = if acc == usize::MAX {
                    bridged
                } else {
                    builder.push(NiceNodeKind::Join, bag.clone(), vec![acc, bridged])
                };
            }
            top_of[b] = acc;
        }
    }
    let root = builder.bridge(top_of[root_bag], &dec.bags()[root_bag].clone(), &[]);
    debug_assert_eq!(
        builder.introduced.len(),
        graph.edge_count(),
        "every graph edge must surface at exactly one introduce-edge node"
    );
    Ok(NiceDecomposition { nodes: builder.nodes, root })
}

/// Parses the line-based decomposition format:
///
/// ```text
/// TREEDEC v1
/// bags <t> width <w>
/// bag <id> <v...>
/// link <a> <b>
/// root <id>        # optional
/// ```
///
/// with `t` bag lines, `t−1` link lines, `#` comments and blank lines
/// ignored, and `<w>` required to match the width computed from the bags.
pub fn read_decomposition(text: &str) -> Result<TreeDecomposition, ParseError> {
    let mut lines = ContentLines::new(text);
    let (no, line) = lines.expect_content("`TREEDEC v1` header")?;
    if line != "TREEDEC v1" {
        return Err(ParseError {
            line: no,
            message: format!("expected `TREEDEC v1` header, found `{line}`"),
        });
    }
    let (no, line) = lines.expect_content("`bags` line")?;
    let (t, width) = match line.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["bags", t, "width", w] => {
            (parse_count(no, t, "bag count")?, parse_count(no, w, "width")?)
        }
        _ => {
            return Err(ParseError {
                line: no,
                message: format!("expected `bags <t> width <w>`, found `{line}`"),
            })
        }
    };
    if t == 0 {
        return Err(ParseError { line: no, message: "a decomposition needs at least one bag".into() });
    }
    let mut bags: Vec<Option<Vec<NodeId>>> = vec![None; t];
    for _ in 0..t {
        let (no, line) = lines.expect_content("a `bag` line")?;
        let mut tokens = line.split_whitespace();
        if tokens.next() != Some("bag") {
            return Err(ParseError {
                line: no,
                message: format!("expected `bag <id> <v...>`, found `{line}`"),
            });
        }
        let id = match tokens.next() {
            Some(tok) => parse_count(no, tok, "bag id")?,
            None => {
                return Err(ParseError { line: no, message: "bag line is missing its id".into() })
            }
        };
        if id >= t {
            return Err(ParseError { line: no, message: format!("bag id {id} outside 0..{t}") });
        }
        if bags[id].is_some() {
            return Err(ParseError { line: no, message: format!("bag {id} declared twice") });
        }
        let mut bag = Vec::new();
        for tok in tokens {
            bag.push(parse_count(no, tok, "bag vertex")?);
        }
        bags[id] = Some(bag);
    }
    let bags: Vec<Vec<NodeId>> =
        bags.into_iter().map(|b| b.expect("all t slots were filled exactly once")).collect();
    let mut links = Vec::with_capacity(t - 1);
    for _ in 0..t - 1 {
        let (no, line) = lines.expect_content("a `link` line")?;
        match line.split_whitespace().collect::<Vec<_>>().as_slice() {
            ["link", a, b] => {
                let a = parse_count(no, a, "link endpoint")?;
                let b = parse_count(no, b, "link endpoint")?;
                if a >= t || b >= t {
                    return Err(ParseError {
                        line: no,
                        message: format!("link ({a}, {b}) references a missing bag"),
                    });
                }
                links.push((a, b));
            }
            _ => {
                return Err(ParseError {
                    line: no,
                    message: format!("expected `link <a> <b>`, found `{line}`"),
                })
            }
        }
    }
    let mut root = None;
    if let Some((no, line)) = lines.next_content() {
        match line.split_whitespace().collect::<Vec<_>>().as_slice() {
            ["root", id] => {
                let id = parse_count(no, id, "root id")?;
                if id >= t {
                    return Err(ParseError {
                        line: no,
                        message: format!("root id {id} outside 0..{t}"),
                    });
                }
                root = Some(id);
            }
            _ => {
                return Err(ParseError {
                    line: no,
                    message: format!("unexpected trailing content `{line}`"),
                })
            }
        }
        if let Some((no, line)) = lines.next_content() {
            return Err(ParseError {
                line: no,
                message: format!("unexpected trailing content `{line}`"),
            });
        }
    }
    let dec = TreeDecomposition::new(bags, links, root);
    if dec.width() != width {
        return Err(ParseError {
            line: 0,
            message: format!(
                "declared width {width} does not match the computed width {}",
                dec.width()
            ),
        });
    }
    Ok(dec)
}

/// Serializes a decomposition in the format read by [`read_decomposition`].
pub fn write_decomposition(dec: &TreeDecomposition) -> String {
    let mut out = String::new();
    out.push_str("TREEDEC v1\n");
    let _ = writeln!(out, "bags {} width {}", dec.bag_count(), dec.width());
    for (i, bag) in dec.bags().iter().enumerate() {
        let _ = write!(out, "bag {i}");
        for v in bag {
            let _ = write!(out, " {v}");
        }
        out.push('\n');
    }
    for &(a, b) in dec.links() {
        let _ = writeln!(out, "link {a} {b}");
    }
    if let Some(root) = dec.root() {
        let _ = writeln!(out, "root {root}");
    }
    out
}
