//! Exact edge interdiction on trees in `O(n·r²)` time.
//!
//! The tree is rooted at node 0 and processed leaves-first. Every node `v` is
//! scored under four *service conditions* describing how facilities may reach
//! it after the removals ([`Condition`]): whether a facility is assumed
//! reachable through the parent edge, and whether the chosen removals must
//! leave (or must not leave) a facility inside `v`'s subtree connected to
//! `v`. For each condition and each budget `b ≤ r` the table stores the
//! maximum weight of customers in `v`'s subtree that no facility can reach.
//!
//! A node combines its children by multiple-choice knapsack: each child is a
//! bucket whose items enumerate "give the child `c` budget and keep its edge"
//! and "spend one unit cutting its edge plus `c−1` inside" for every `c`.
//! The condition in which a connected facility must come from below uses the
//! constrained knapsack — at least one kept child must supply the facility.
//! Each node costs `O(k·r²)` for `k` children, `O(n·r²)` overall, and the
//! recorded knapsack choices are walked backwards afterwards to reconstruct
//! an optimal removal set.

use crate::graph::{evaluate_strategy, Instance, NodeId, ProblemKind, Solution};
use crate::knapsack::{BucketFold, DpValue, KnapsackItem};
use crate::SolveError;
use std::collections::VecDeque;

/// Plane index: no facility reaches the node from either side.
pub(crate) const PLANE_ISOLATED: usize = 0;
/// Plane index: a facility is assumed reachable through the parent edge only.
pub(crate) const PLANE_ABOVE: usize = 1;
/// Plane index: a facility inside the subtree stays connected to the node.
/// The objective is the same whether or not one is also reachable from
/// above — a customer already served from below gains nothing from the
/// parent side — so both conditions share this single stored plane.
pub(crate) const PLANE_BELOW: usize = 2;

/// How facilities may reach a node, seen from its subtree boundary.
///
/// The first half of the name says whether a facility is assumed reachable
/// through the parent edge; the second whether the removal strategy must
/// leave a facility inside the subtree connected to the node.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Condition {
    /// Nothing from above, and the subtree must not connect a facility.
    Isolated,
    /// Nothing from above, but the subtree must connect a facility.
    ServedFromBelow,
    /// Covered through the parent edge; the subtree must not add a facility.
    ServedFromAbove,
    /// Covered through the parent edge and from inside the subtree.
    ServedBothSides,
}

impl Condition {
    pub const ALL: [Condition; 4] = [
        Condition::Isolated,
        Condition::ServedFromBelow,
        Condition::ServedFromAbove,
        Condition::ServedBothSides,
    ];

    pub(crate) fn plane(self) -> usize {
        match self {
            Condition::Isolated => PLANE_ISOLATED,
            Condition::ServedFromAbove => PLANE_ABOVE,
            Condition::ServedFromBelow | Condition::ServedBothSides => PLANE_BELOW,
        }
    }
}

/// One way a parent may consume a child subtree: read the child under
/// `child_plane`, optionally paying one budget unit to cut the connecting
/// edge, optionally witnessing the parent's served-from-below requirement.
#[derive(Clone, Copy, Debug)]
pub(crate) struct OptionSpec {
    pub child_plane: usize,
    pub cuts_edge: bool,
    pub property: bool,
}

impl OptionSpec {
    pub(crate) const fn keep(child_plane: usize) -> Self {
        OptionSpec { child_plane, cuts_edge: false, property: false }
    }
    pub(crate) const fn cut(child_plane: usize) -> Self {
        OptionSpec { child_plane, cuts_edge: true, property: false }
    }
    pub(crate) const fn keep_witness(child_plane: usize) -> Self {
        OptionSpec { child_plane, cuts_edge: false, property: true }
    }
}

/// Child options per context. Keep-options precede cut-options so that
/// reconstruction ties break toward not removing an edge.
///
/// A customer disconnected on both sides keeps only children that are
/// themselves facility-free, or pays to cut a child that carries one.
const OPTS_ISOLATED: &[OptionSpec] =
    &[OptionSpec::keep(PLANE_ISOLATED), OptionSpec::cut(PLANE_BELOW)];
/// A node covered from above passes coverage into kept children; cut
/// children fall back to their own best isolated-or-self-served value.
const OPTS_ABOVE: &[OptionSpec] = &[
    OptionSpec::keep(PLANE_ABOVE),
    OptionSpec::cut(PLANE_ISOLATED),
    OptionSpec::cut(PLANE_BELOW),
];
/// A facility node covers kept children itself; a cut child must cope alone.
const OPTS_BELOW_FACILITY: &[OptionSpec] = &[
    OptionSpec::keep(PLANE_ABOVE),
    OptionSpec::keep(PLANE_BELOW),
    OptionSpec::cut(PLANE_ISOLATED),
];
/// A customer served from below needs at least one kept child to witness the
/// connected facility (the flagged option); the rest behave as when covered
/// from above.
const OPTS_BELOW_CUSTOMER: &[OptionSpec] = &[
    OptionSpec::keep(PLANE_ABOVE),
    OptionSpec::keep_witness(PLANE_BELOW),
    OptionSpec::cut(PLANE_ISOLATED),
    OptionSpec::cut(PLANE_BELOW),
];

/// The tree rooted for DP: traversal order and parent/child structure.
pub(crate) struct Rooted {
    /// Nodes in breadth-first order from the root.
    pub order: Vec<NodeId>,
    /// `(child, connecting edge index)` per node, adjacency order.
    pub children: Vec<Vec<(NodeId, usize)>>,
}

/// Checks kind/shape and roots the tree at node 0.
pub(crate) fn root_tree(instance: &Instance, expected: ProblemKind) -> Result<Rooted, SolveError> {
    if instance.kind != expected {
        return Err(SolveError::WrongKind { expected });
    }
    let g = &instance.graph;
    let n = g.node_count();
    if n == 0 {
        return Err(SolveError::NotATree);
    }
    let mut order = Vec::with_capacity(n);
    let mut children: Vec<Vec<(NodeId, usize)>> = vec![Vec::new(); n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    seen[0] = true;
    queue.push_back(0);
    while let Some(v) = queue.pop_front() {
        order.push(v);
        for &(u, ix) in g.neighbors(v) {
            if !seen[u] {
                seen[u] = true;
                children[v].push((u, ix));
                queue.push_back(u);
            }
        }
    }
    if order.len() < n {
        return Err(SolveError::NotConnected);
    }
    if g.edge_count() != n - 1 {
        return Err(SolveError::NotATree);
    }
    Ok(Rooted { order, children })
}

/// The completed DP table: per node, per condition, per budget, the best
/// disconnected weight achievable inside that node's subtree, together with
/// the recorded knapsack choices that reconstruction walks backwards.
#[derive(Clone, Debug)]
pub struct TreeDpTable {
    budget: usize,
    root: NodeId,
    children: Vec<Vec<(NodeId, usize)>>,
    /// `planes[v][plane][b]`; facility nodes keep `-inf` in the first two.
    planes: Vec<[Vec<DpValue>; 3]>,
    /// The child-combination state per populated plane of each node.
    folds: Vec<[Option<BucketFold>; 3]>,
    is_facility: Vec<bool>,
}

impl TreeDpTable {
    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn node_count(&self) -> usize {
        self.planes.len()
    }

    /// `(child, connecting edge index)` pairs of `v` in the rooted tree.
    pub fn children(&self, v: NodeId) -> &[(NodeId, usize)] {
        &self.children[v]
    }

    /// The optimal subtree objective for `v` under `condition` with budget `b`.
    pub fn value(&self, v: NodeId, condition: Condition, b: usize) -> DpValue {
        self.planes[v][condition.plane()][b]
    }

    pub(crate) fn fold(&self, v: NodeId, plane: usize) -> Option<&BucketFold> {
        self.folds[v][plane].as_ref()
    }

    pub(crate) fn is_facility(&self, v: NodeId) -> bool {
        self.is_facility[v]
    }

    pub(crate) fn new_shell(budget: usize, root: NodeId, children: Vec<Vec<(NodeId, usize)>>, is_facility: Vec<bool>) -> Self {
        let n = children.len();
        TreeDpTable {
            budget,
            root,
            children,
            planes: vec![
                [Vec::new(), Vec::new(), Vec::new()];
                n
            ],
            folds: (0..n).map(|_| [None, None, None]).collect(),
            is_facility,
        }
    }

    pub(crate) fn set_plane(&mut self, v: NodeId, plane: usize, values: Vec<DpValue>) {
        self.planes[v][plane] = values;
    }

    pub(crate) fn set_fold(&mut self, v: NodeId, plane: usize, fold: BucketFold) {
        self.folds[v][plane] = Some(fold);
    }
}

/// Builds the knapsack state combining `v`'s children under one option set:
/// bucket `i` is child `i`, and its items enumerate every option × every
/// child budget `c` (a cut option at `c` hands the child `c−1`, so it is
/// unusable at `c = 0`).
pub(crate) fn fold_children(
    table: &TreeDpTable,
    v: NodeId,
    opts: &[OptionSpec],
    scratch: &mut Vec<KnapsackItem>,
) -> BucketFold {
    let r = table.budget;
    let mut fold = BucketFold::new(r);
    for &(u, _) in &table.children[v] {
        scratch.clear();
        // Cheapest child budgets first, so equal-value ties resolve toward
        // spending nothing; within one budget, option order decides (keeping
        // an edge precedes cutting it).
        for c in 0..=r {
            for opt in opts {
                let child_plane = &table.planes[u][opt.child_plane];
                let value = if opt.cuts_edge {
                    if c == 0 { DpValue::NegInf } else { child_plane[c - 1] }
                } else {
                    child_plane[c]
                };
                scratch.push(KnapsackItem { cost: c, value, property: opt.property });
            }
        }
        fold.push_bucket(scratch).expect("option × budget buckets are never empty");
    }
    fold
}

/// Decodes one recorded knapsack item back into (option, child budget).
pub(crate) fn decode_item(opts: &[OptionSpec], item: usize) -> (OptionSpec, usize) {
    let opt = opts[item % opts.len()];
    let c = item / opts.len();
    (opt, c)
}

fn options_for(table: &TreeDpTable, v: NodeId, plane: usize) -> &'static [OptionSpec] {
    if table.is_facility(v) {
        debug_assert_eq!(plane, PLANE_BELOW, "facility nodes only populate the served plane");
        OPTS_BELOW_FACILITY
    } else {
        match plane {
            PLANE_ISOLATED => OPTS_ISOLATED,
            PLANE_ABOVE => OPTS_ABOVE,
            _ => OPTS_BELOW_CUSTOMER,
        }
    }
}

/// Best value the subtree of `child` can contribute to a parent evaluated
/// under `context`, per child budget `0..=r`, maximized over keeping or
/// cutting the connecting edge.
///
/// For the served-from-below contexts the parent's own solver additionally
/// distinguishes which kept child witnesses the connected facility; the
/// per-budget maximum reported here is the same either way.
pub fn child_options(
    table: &TreeDpTable,
    child: NodeId,
    context: Condition,
    r: usize,
) -> Vec<DpValue> {
    let opts: &[OptionSpec] = match context {
        Condition::Isolated => OPTS_ISOLATED,
        Condition::ServedFromAbove => OPTS_ABOVE,
        Condition::ServedFromBelow | Condition::ServedBothSides => OPTS_BELOW_CUSTOMER,
    };
    (0..=r)
        .map(|b| {
            opts.iter()
                .map(|opt| {
                    let plane = &table.planes[child][opt.child_plane];
                    if opt.cuts_edge {
                        if b == 0 { DpValue::NegInf } else { plane[b - 1] }
                    } else {
                        plane[b]
                    }
                })
                .max()
                .expect("every context offers at least one option")
        })
        .collect()
}

/// Solves edge interdiction on a tree exactly: finds at most `budget` edges
/// whose removal maximizes the weight of customers no facility can reach.
/// Returns the optimum with one optimal removal set, plus the full DP table.
pub fn solve_tree_reic(instance: &Instance) -> Result<(Solution, TreeDpTable), SolveError> {
    let rooted = root_tree(instance, ProblemKind::EdgeInterdiction)?;
    let r = instance.budget;
    let n = instance.node_count();
    let is_facility: Vec<bool> = (0..n).map(|v| instance.is_facility(v)).collect();
    let mut table = TreeDpTable::new_shell(r, 0, rooted.children, is_facility);
    let mut scratch = Vec::new();

    for &v in rooted.order.iter().rev() {
        if table.is_facility(v) {
            // A facility can never be isolated from itself, and it serves
            // the subtree unconditionally.
            let fold = fold_children(&table, v, OPTS_BELOW_FACILITY, &mut scratch);
            table.set_plane(v, PLANE_ISOLATED, vec![DpValue::NegInf; r + 1]);
            table.set_plane(v, PLANE_ABOVE, vec![DpValue::NegInf; r + 1]);
            table.set_plane(v, PLANE_BELOW, (0..=r).map(|b| fold.best_any(b)).collect());
            table.set_fold(v, PLANE_BELOW, fold);
        } else {
            let w = instance.weight(v);
            let fold0 = fold_children(&table, v, OPTS_ISOLATED, &mut scratch);
            let fold1 = fold_children(&table, v, OPTS_ABOVE, &mut scratch);
            let fold2 = fold_children(&table, v, OPTS_BELOW_CUSTOMER, &mut scratch);
            // An isolated customer counts its own weight on top of whatever
            // its children salvage.
            table.set_plane(v, PLANE_ISOLATED, (0..=r).map(|b| fold0.best_any(b).plus_f64(w)).collect());
            table.set_plane(v, PLANE_ABOVE, (0..=r).map(|b| fold1.best_any(b)).collect());
            table.set_plane(v, PLANE_BELOW, (0..=r).map(|b| fold2.best_satisfying(b)).collect());
            table.set_fold(v, PLANE_ISOLATED, fold0);
            table.set_fold(v, PLANE_ABOVE, fold1);
            table.set_fold(v, PLANE_BELOW, fold2);
        }
    }

    let objective = Condition::ALL
        .iter()
        .map(|&c| table.value(0, c, r))
        .max()
        .expect("four conditions");
    // With no parent above the root, the conditions assuming outside coverage
    // can never win; the maximum is always attained without them.
    debug_assert_eq!(
        objective,
        table
            .value(0, Condition::Isolated, r)
            .max(table.value(0, Condition::ServedFromBelow, r)),
        "root optimum must be attained without assumed outside coverage"
    );
    let objective = objective
        .as_finite()
        .expect("doing nothing is always feasible, so the optimum is finite");

    // Walk the recorded choices back down, collecting cut edges.
    let start_plane = if table.value(0, Condition::Isolated, r)
        >= table.value(0, Condition::ServedFromBelow, r)
    {
        PLANE_ISOLATED
    } else {
        PLANE_BELOW
    };
    let mut removed = Vec::new();
    let mut stack = vec![(0usize, start_plane, r)];
    while let Some((v, plane, b)) = stack.pop() {
        let fold = table.fold(v, plane).expect("reconstruction only enters populated planes");
        let want = !table.is_facility(v) && plane == PLANE_BELOW;
        let steps = fold
            .trace(want, b)
            .expect("reconstruction only enters finite states");
        let opts = options_for(&table, v, plane);
        for step in steps {
            let (u, edge_ix) = table.children[v][step.bucket];
            let (opt, c) = decode_item(opts, step.item);
            debug_assert_eq!(c, step.cost);
            if opt.cuts_edge {
                debug_assert!(c >= 1, "a cut option is unusable without budget");
                removed.push(edge_ix);
                stack.push((u, opt.child_plane, c - 1));
            } else {
                stack.push((u, opt.child_plane, c));
            }
        }
    }
    removed.sort_unstable();
    debug_assert!(removed.windows(2).all(|w| w[0] != w[1]), "each edge is cut at most once");
    debug_assert!(removed.len() <= r);

    let report = evaluate_strategy(instance, &removed)
        .expect("reconstruction only removes real edges");
    debug_assert!(
        (report.objective - objective).abs() <= 1e-9 * objective.abs().max(1.0),
        "re-scoring the reconstructed strategy must reproduce the DP optimum"
    );
    let solution = Solution { removed, objective, disconnected: report.disconnected };
    Ok((solution, table))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Graph, NodeRole};
    use crate::oracle::brute_force_reic;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn instance(
        n: usize,
        edges: &[(usize, usize)],
        facilities: &[usize],
        weights: &[f64],
        r: usize,
    ) -> Instance {
        let mut roles = vec![NodeRole::Customer; n];
        for &f in facilities {
            roles[f] = NodeRole::Facility;
        }
        Instance::new(
            Graph::new(n, edges).unwrap(),
            roles,
            weights.to_vec(),
            r,
            ProblemKind::EdgeInterdiction,
        )
    }

    fn random_tree(rng: &mut ChaCha8Rng, n: usize, p_facility: f64, max_w: u32, r: usize) -> Instance {
        let edges: Vec<_> = (1..n).map(|v| (rng.random_range(0..v), v)).collect();
        let facilities: Vec<usize> =
            (0..n).filter(|_| rng.random_bool(p_facility)).collect();
        let weights: Vec<f64> = (0..n).map(|_| rng.random_range(1..=max_w) as f64).collect();
        instance(n, &edges, &facilities, &weights, r)
    }

    #[test]
    fn single_edge_cut_isolates_the_customer() {
        let inst = instance(2, &[(0, 1)], &[0], &[0.0, 3.0], 1);
        let (sol, table) = solve_tree_reic(&inst).unwrap();
        assert_eq!(sol.objective, 3.0);
        assert_eq!(sol.removed, vec![0]);
        assert_eq!(sol.disconnected, vec![1]);
        assert_eq!(table.value(0, Condition::ServedFromBelow, 0), DpValue::finite(0.0));
        assert_eq!(table.value(0, Condition::Isolated, 1), DpValue::NegInf);
    }

    #[test]
    fn customer_between_two_facilities_needs_both_edges_cut() {
        let inst = instance(3, &[(0, 1), (1, 2)], &[0, 2], &[0.0, 5.0, 0.0], 1);
        let (sol, _) = solve_tree_reic(&inst).unwrap();
        assert_eq!(sol.objective, 0.0);
        assert!(sol.removed.is_empty());

        let inst = instance(3, &[(0, 1), (1, 2)], &[0, 2], &[0.0, 5.0, 0.0], 2);
        let (sol, _) = solve_tree_reic(&inst).unwrap();
        assert_eq!(sol.objective, 5.0);
        assert_eq!(sol.removed, vec![0, 1]);
        assert_eq!(sol.disconnected, vec![1]);
    }

    #[test]
    fn no_facilities_means_everything_is_already_disconnected() {
        let inst = instance(3, &[(0, 1), (1, 2)], &[], &[2.0, 5.0, 1.0], 0);
        let (sol, _) = solve_tree_reic(&inst).unwrap();
        assert_eq!(sol.objective, 8.0);
        assert!(sol.removed.is_empty());
        assert_eq!(sol.disconnected, vec![0, 1, 2]);
    }

    #[test]
    fn zero_budget_on_a_covered_tree_scores_zero() {
        let inst = instance(4, &[(0, 1), (1, 2), (1, 3)], &[2], &[4.0, 4.0, 0.0, 4.0], 0);
        let (sol, _) = solve_tree_reic(&inst).unwrap();
        assert_eq!(sol.objective, 0.0);
    }

    #[test]
    fn single_node_trees() {
        let customer = instance(1, &[], &[], &[9.0], 3);
        let (sol, _) = solve_tree_reic(&customer).unwrap();
        assert_eq!(sol.objective, 9.0);
        let facility = instance(1, &[], &[0], &[0.0], 3);
        let (sol, _) = solve_tree_reic(&facility).unwrap();
        assert_eq!(sol.objective, 0.0);
    }

    #[test]
    fn rejects_wrong_kind_disconnected_and_cyclic_inputs() {
        let mut inst = instance(2, &[(0, 1)], &[0], &[0.0, 1.0], 1);
        inst.kind = ProblemKind::FacilityInterdiction;
        assert_eq!(
            solve_tree_reic(&inst).unwrap_err(),
            SolveError::WrongKind { expected: ProblemKind::EdgeInterdiction }
        );

        let disconnected = instance(3, &[(0, 1)], &[0], &[0.0, 1.0, 1.0], 1);
        assert_eq!(solve_tree_reic(&disconnected).unwrap_err(), SolveError::NotConnected);

        let cyclic = instance(3, &[(0, 1), (1, 2), (0, 2)], &[0], &[0.0, 1.0, 1.0], 1);
        assert_eq!(solve_tree_reic(&cyclic).unwrap_err(), SolveError::NotATree);
    }

    #[test]
    fn matches_exhaustive_search_on_random_trees() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..150 {
            let n = rng.random_range(2..=10);
            let r = rng.random_range(0..=3);
            let inst = random_tree(&mut rng, n, 0.4, 5, r);
            let (sol, _) = solve_tree_reic(&inst).unwrap();
            let oracle = brute_force_reic(&inst).unwrap();
            assert_eq!(sol.objective, oracle.objective, "mismatch on {inst:?}");
            // The reconstructed strategy must earn the claimed objective.
            let report = evaluate_strategy(&inst, &sol.removed).unwrap();
            assert_eq!(report.objective, sol.objective);
            assert!(sol.removed.len() <= r);
        }
    }

    #[test]
    fn stored_values_are_monotone_and_served_conditions_alias() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let n = rng.random_range(2..=12);
            let inst = random_tree(&mut rng, n, 0.3, 4, 3);
            let (_, table) = solve_tree_reic(&inst).unwrap();
            for v in 0..n {
                for b in 0..=3 {
                    assert_eq!(
                        table.value(v, Condition::ServedFromBelow, b),
                        table.value(v, Condition::ServedBothSides, b),
                    );
                    if b > 0 {
                        for c in Condition::ALL {
                            assert!(table.value(v, c, b) >= table.value(v, c, b - 1));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn finite_entries_never_exceed_subtree_customer_weight() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..20 {
            let n = rng.random_range(2..=12);
            let inst = random_tree(&mut rng, n, 0.3, 6, 3);
            let (_, table) = solve_tree_reic(&inst).unwrap();
            // Subtree weights by reverse breadth-first accumulation.
            let rooted = root_tree(&inst, ProblemKind::EdgeInterdiction).unwrap();
            let mut subtree = inst.weights.clone();
            for &v in rooted.order.iter().rev() {
                for &(u, _) in &rooted.children[v] {
                    subtree[v] += subtree[u];
                }
            }
            for (v, &limit) in subtree.iter().enumerate() {
                for c in Condition::ALL {
                    for b in 0..=3 {
                        if let Some(x) = table.value(v, c, b).as_finite() {
                            assert!(x <= limit + 1e-9);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn objective_saturates_once_budget_covers_every_edge() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let n = rng.random_range(2..=9);
            let mut inst = random_tree(&mut rng, n, 0.5, 5, 0);
            let mut prev = -1.0;
            let mut saturated = None;
            for r in 0..=n + 1 {
                inst.budget = r;
                let (sol, _) = solve_tree_reic(&inst).unwrap();
                assert!(sol.objective >= prev);
                prev = sol.objective;
                if r >= n - 1 {
                    let expected = *saturated.get_or_insert(sol.objective);
                    assert_eq!(sol.objective, expected, "no gain past r = n-1");
                }
            }
            assert_eq!(prev, inst.total_customer_weight());
        }
    }

    #[test]
    fn facility_leaf_child_options_under_the_isolated_context() {
        // Facility 0 — customer 1 — facility leaf 2, rooted at 0.
        let inst = instance(3, &[(0, 1), (1, 2)], &[0, 2], &[0.0, 5.0, 0.0], 2);
        let (_, table) = solve_tree_reic(&inst).unwrap();
        let opts = child_options(&table, 2, Condition::Isolated, 2);
        // With no budget the facility leaf can be neither kept nor cut away.
        assert_eq!(opts[0], DpValue::NegInf);
        // One unit cuts the edge above it, stranding nobody.
        assert_eq!(opts[1], DpValue::finite(0.0));
        assert_eq!(opts[2], DpValue::finite(0.0));
    }

    #[test]
    fn child_options_equal_direct_expression_evaluation() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let n = rng.random_range(2..=10);
            let r = 3;
            let inst = random_tree(&mut rng, n, 0.4, 5, r);
            let (_, table) = solve_tree_reic(&inst).unwrap();
            use Condition::*;
            for child in 1..n {
                let at = |c: Condition, b: usize| table.value(child, c, b);
                let cutting =
                    |c: Condition, b: usize| if b == 0 { DpValue::NegInf } else { at(c, b - 1) };
                for b in 0..=r {
                    assert_eq!(
                        child_options(&table, child, Isolated, r)[b],
                        at(Isolated, b).max(cutting(ServedFromBelow, b)),
                    );
                    assert_eq!(
                        child_options(&table, child, ServedFromAbove, r)[b],
                        at(ServedFromAbove, b)
                            .max(cutting(Isolated, b))
                            .max(cutting(ServedFromBelow, b)),
                    );
                    for ctx in [ServedFromBelow, ServedBothSides] {
                        assert_eq!(
                            child_options(&table, child, ctx, r)[b],
                            at(ServedFromAbove, b)
                                .max(at(ServedBothSides, b))
                                .max(cutting(Isolated, b))
                                .max(cutting(ServedFromBelow, b)),
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn root_optimum_ignores_assumed_outside_coverage() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..30 {
            let n = rng.random_range(2..=10);
            let inst = random_tree(&mut rng, n, 0.4, 5, 2);
            let (sol, table) = solve_tree_reic(&inst).unwrap();
            let root_max = Condition::ALL
                .iter()
                .map(|&c| table.value(0, c, 2))
                .max()
                .unwrap();
            let without_outside = table
                .value(0, Condition::Isolated, 2)
                .max(table.value(0, Condition::ServedFromBelow, 2));
            assert_eq!(root_max, without_outside);
            assert_eq!(DpValue::finite(sol.objective), root_max);
        }
    }
}
