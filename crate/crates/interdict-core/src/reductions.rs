//! Problem transformations built on the interdiction solvers.
//!
//! Three constructions live here:
//!
//! * **Small-set bipartite vertex expansion (SSBVE) on trees.** Picking `k`
//!   left vertices with the smallest combined neighborhood is the mirror
//!   image of removing `|U| − k` facilities to strand the most unit-weight
//!   customers, so the tree facility-interdiction solver answers it exactly.
//! * **The bipartite normal form for facility interdiction.** Collapsing
//!   each customer component into one aggregated customer adjacent to the
//!   facilities on its boundary preserves the objective of *every* removal
//!   strategy, because a customer reaches a surviving facility exactly when
//!   its component touches one.
//! * **A clique gadget.** Subdividing every edge of a graph with a
//!   unit-weight customer turns "remove `k` facilities" into "pick `k`
//!   original vertices"; the stranded weight counts the edges inside the
//!   pick, so the objective hits `k·(k−1)/2` precisely when the graph has a
//!   `k`-clique.

use crate::graph::{Graph, Instance, NodeId, NodeRole, ProblemKind};
use crate::io::write_instance;
use crate::tree_rfic::solve_tree_rfic;
use crate::SolveError;
use std::collections::{BTreeSet, HashMap, VecDeque};

/// A bipartite selection problem: choose `k` left vertices minimizing the
/// size of their combined right-side neighborhood.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteInstance {
    u_count: usize,
    v_count: usize,
    edges: Vec<(usize, usize)>,
    k: usize,
}

impl BipartiteInstance {
    /// `edges` pair a left index (`< u_count`) with a right index
    /// (`< v_count`).
    ///
    /// # Panics
    /// If an edge index is out of range or duplicated.
    pub fn new(u_count: usize, v_count: usize, edges: Vec<(usize, usize)>, k: usize) -> Self {
        let mut seen = std::collections::HashSet::new();
        for &(u, v) in &edges {
            assert!(u < u_count, "left index {u} out of range 0..{u_count}");
            assert!(v < v_count, "right index {v} out of range 0..{v_count}");
            assert!(seen.insert((u, v)), "duplicate edge ({u}, {v})");
        }
        BipartiteInstance { u_count, v_count, edges, k }
    }

    pub fn u_count(&self) -> usize {
        self.u_count
    }

    pub fn v_count(&self) -> usize {
        self.v_count
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Number of left vertices to keep.
    pub fn k(&self) -> usize {
        self.k
    }

    /// The equivalent facility-interdiction instance: left vertices become
    /// facilities `0..u_count`, right vertices become unit-weight customers
    /// `u_count..u_count+v_count`, and the budget is `|U| − k` (keeping `k`
    /// facilities mirrors choosing `k` left vertices).
    pub fn to_rfic_instance(&self) -> Result<Instance, SolveError> {
        if self.k > self.u_count {
            return Err(SolveError::TargetOutOfRange { k: self.k, u_count: self.u_count });
        }
        let n = self.u_count + self.v_count;
        let edges: Vec<(usize, usize)> =
            self.edges.iter().map(|&(u, v)| (u, self.u_count + v)).collect();
        let graph = Graph::new(n, &edges).expect("validated bipartite edges");
        let roles = (0..n)
            .map(|x| if x < self.u_count { NodeRole::Facility } else { NodeRole::Customer })
            .collect();
        let weights = (0..n).map(|x| if x < self.u_count { 0.0 } else { 1.0 }).collect();
        Ok(Instance::new(
            graph,
            roles,
            weights,
            self.u_count - self.k,
            ProblemKind::FacilityInterdiction,
        ))
    }
}

/// Size of the right-side neighborhood of the given left vertices.
fn neighborhood_size(bip: &BipartiteInstance, kept: &[usize]) -> usize {
    let mut in_kept = vec![false; bip.u_count];
    for &u in kept {
        in_kept[u] = true;
    }
    let mut reached = vec![false; bip.v_count];
    for &(u, v) in &bip.edges {
        if in_kept[u] {
            reached[v] = true;
        }
    }
    reached.iter().filter(|&&x| x).count()
}

/// Picks `k` left vertices of a bipartite **tree** minimizing the size of
/// their combined right-side neighborhood. Returns the chosen left vertices
/// (ascending) and that minimal neighborhood size.
///
/// Runs the tree facility-interdiction solver with budget `|U| − k`; with
/// `n` total vertices that costs `O(n·(n−k)²)`. When the solver strands the
/// optimum with fewer removals than the budget, the kept set is trimmed to
/// its `k` smallest members, which cannot enlarge the neighborhood beyond
/// the optimum.
pub fn solve_ssbve_tree(bip: &BipartiteInstance) -> Result<(Vec<NodeId>, usize), SolveError> {
    let instance = bip.to_rfic_instance()?;
    let (solution, _) = solve_tree_rfic(&instance)?;
    let mut removed = vec![false; bip.u_count];
    for &x in &solution.removed {
        removed[x] = true;
    }
    let kept: Vec<usize> =
        (0..bip.u_count).filter(|&u| !removed[u]).take(bip.k).collect();
    debug_assert_eq!(kept.len(), bip.k);
    let size = neighborhood_size(bip, &kept);
    debug_assert_eq!(
        size as f64,
        bip.v_count as f64 - solution.objective,
        "trimming surplus kept vertices must not change the neighborhood"
    );
    Ok((kept, size))
}

/// Rewrites a facility-interdiction instance into its bipartite normal
/// form: facilities keep their relative order at ids `0..|S|`, and each
/// connected component of the customers (the graph minus all facilities)
/// collapses into one aggregated customer carrying the component's total
/// weight, adjacent to every facility the component touches. Components are
/// numbered by their smallest original member.
///
/// Returns the rewritten instance together with the facility map: entry `i`
/// is the original id of new facility `i`. For every removal strategy the
/// objectives of the two instances coincide.
pub fn to_bip_rfic(instance: &Instance) -> Result<(Instance, Vec<NodeId>), SolveError> {
    if instance.kind != ProblemKind::FacilityInterdiction {
        return Err(SolveError::WrongKind { expected: ProblemKind::FacilityInterdiction });
    }
    let n = instance.node_count();
    let facilities = instance.facilities();
    let new_id: HashMap<usize, usize> =
        facilities.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    let s = facilities.len();

    let mut component = vec![usize::MAX; n];
    let mut weights: Vec<f64> = vec![0.0; s];
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut queue = VecDeque::new();
    let mut next = s;
    for start in 0..n {
        if instance.is_facility(start) || component[start] != usize::MAX {
            continue;
        }
        let cid = next;
        next += 1;
        let mut weight = 0.0;
        let mut boundary: BTreeSet<usize> = BTreeSet::new();
        component[start] = cid;
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            weight += instance.weight(v);
            for &(u, _) in instance.graph.neighbors(v) {
                if instance.is_facility(u) {
                    boundary.insert(new_id[&u]);
                } else if component[u] == usize::MAX {
                    component[u] = cid;
                    queue.push_back(u);
                }
            }
        }
        weights.push(weight);
        edges.extend(boundary.into_iter().map(|f| (f, cid)));
    }

    let graph = Graph::new(next, &edges).expect("normal-form edges are simple");
    let roles = (0..next)
        .map(|x| if x < s { NodeRole::Facility } else { NodeRole::Customer })
        .collect();
    let bip = Instance::new(
        graph,
        roles,
        weights,
        instance.budget,
        ProblemKind::FacilityInterdiction,
    );
    Ok((bip, facilities))
}

/// Builds the facility-interdiction instance that detects `k`-cliques in
/// `graph`: every original vertex becomes a facility, every original edge is
/// subdivided by a fresh unit-weight customer adjacent to its endpoints,
/// and the budget is `k`. Removing a vertex set `R` strands exactly the
/// customers of edges inside `R`, so the optimal objective reaches
/// `k·(k−1)/2` precisely when `graph` contains a `k`-clique.
pub fn clique_gadget(graph: &Graph, k: usize) -> Instance {
    let n = graph.node_count();
    let m = graph.edge_count();
    let mut edges = Vec::with_capacity(2 * m);
    for (ix, &(u, v)) in graph.edges().iter().enumerate() {
        edges.push((u, n + ix));
        edges.push((v, n + ix));
    }
    let gadget = Graph::new(n + m, &edges).expect("subdivision edges are simple");
    let roles = (0..n + m)
        .map(|x| if x < n { NodeRole::Facility } else { NodeRole::Customer })
        .collect();
    let weights = (0..n + m).map(|x| if x < n { 0.0 } else { 1.0 }).collect();
    Instance::new(gadget, roles, weights, k, ProblemKind::FacilityInterdiction)
}

/// Serializes the facility-interdiction form of a bipartite instance,
/// inserting an informational `# bipartite U=<ids>` comment after the
/// header so readers can recover the left side. The comment is ignored by
/// the instance parser.
pub fn write_bip_instance(bip: &BipartiteInstance) -> Result<String, SolveError> {
    let instance = bip.to_rfic_instance()?;
    let text = write_instance(&instance);
    let (header, rest) = text.split_once('\n').expect("writer emits a header line");
    let ids: Vec<String> = (0..bip.u_count).map(|u| u.to_string()).collect();
    Ok(format!("{header}\n# bipartite U={}\n{rest}", ids.join(",")))
}
