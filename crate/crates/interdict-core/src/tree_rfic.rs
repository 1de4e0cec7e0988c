//! Exact facility interdiction on trees in `O(n·r²)` time.
//!
//! Same skeleton as the edge solver ([`crate::tree_reic`]): root at node 0,
//! score every node under the four service conditions of [`Condition`], and
//! combine children by (constrained) multiple-choice knapsack. The difference
//! is what budget buys: edges are never touched, and instead a facility node
//! may spend one unit to delete itself. Consequences of deletion are local —
//! a deleted facility neither serves anyone nor forwards coverage — so the
//! option tables are all "keep the edge", and reconstruction collects the
//! facility nodes entered in a condition that forces their removal.

use crate::graph::{evaluate_strategy, Instance, NodeId, ProblemKind, Solution};
use crate::knapsack::{DpValue, KnapsackItem};
use crate::tree_reic::{
    decode_item, fold_children, root_tree, Condition, OptionSpec, TreeDpTable, PLANE_ABOVE,
    PLANE_BELOW, PLANE_ISOLATED,
};
use crate::SolveError;

/// A customer with no facility on either side keeps all child edges, and no
/// child may connect a facility.
const OPTS_CUSTOMER_ISOLATED: &[OptionSpec] = &[OptionSpec::keep(PLANE_ISOLATED)];
/// A customer covered from above passes coverage down every child edge; no
/// child may contribute a facility of its own (the node's condition promises
/// none from below).
const OPTS_CUSTOMER_ABOVE: &[OptionSpec] = &[OptionSpec::keep(PLANE_ABOVE)];
/// A customer served from below needs at least one child to witness a
/// surviving facility; the others are covered through this node.
const OPTS_CUSTOMER_BELOW: &[OptionSpec] =
    &[OptionSpec::keep(PLANE_ABOVE), OptionSpec::keep_witness(PLANE_BELOW)];
/// A deleted facility drops out of the tree: children lose their parent edge
/// in effect and fend for themselves, served from below or not at all.
const OPTS_FACILITY_REMOVED: &[OptionSpec] =
    &[OptionSpec::keep(PLANE_ISOLATED), OptionSpec::keep(PLANE_BELOW)];
/// A surviving facility serves every child; children may also have their own.
const OPTS_FACILITY_KEPT: &[OptionSpec] =
    &[OptionSpec::keep(PLANE_ABOVE), OptionSpec::keep(PLANE_BELOW)];

fn options_for(table: &TreeDpTable, v: NodeId, plane: usize) -> &'static [OptionSpec] {
    if table.is_facility(v) {
        if plane == PLANE_BELOW {
            OPTS_FACILITY_KEPT
        } else {
            OPTS_FACILITY_REMOVED
        }
    } else {
        match plane {
            PLANE_ISOLATED => OPTS_CUSTOMER_ISOLATED,
            PLANE_ABOVE => OPTS_CUSTOMER_ABOVE,
            _ => OPTS_CUSTOMER_BELOW,
        }
    }
}

/// Solves facility interdiction on a tree exactly: finds at most `budget`
/// facilities whose deletion maximizes the weight of customers no surviving
/// facility can reach. Returns the optimum with one optimal removal set,
/// plus the full DP table.
pub fn solve_tree_rfic(instance: &Instance) -> Result<(Solution, TreeDpTable), SolveError> {
    let rooted = root_tree(instance, ProblemKind::FacilityInterdiction)?;
    let r = instance.budget;
    let n = instance.node_count();
    let is_facility: Vec<bool> = (0..n).map(|v| instance.is_facility(v)).collect();
    let mut table = TreeDpTable::new_shell(r, 0, rooted.children, is_facility);
    let mut scratch: Vec<KnapsackItem> = Vec::new();

    for &v in rooted.order.iter().rev() {
        if table.is_facility(v) {
            // Conditions without a facility at v require deleting v: one
            // budget unit up front, the rest shared among the children.
            let removed_fold = fold_children(&table, v, OPTS_FACILITY_REMOVED, &mut scratch);
            let removed_values: Vec<DpValue> = (0..=r)
                .map(|b| if b == 0 { DpValue::NegInf } else { removed_fold.best_any(b - 1) })
                .collect();
            let kept_fold = fold_children(&table, v, OPTS_FACILITY_KEPT, &mut scratch);
            table.set_plane(v, PLANE_ISOLATED, removed_values.clone());
            table.set_plane(v, PLANE_ABOVE, removed_values);
            table.set_plane(v, PLANE_BELOW, (0..=r).map(|b| kept_fold.best_any(b)).collect());
            // Both removal conditions replay the same fold at budget b−1.
            table.set_fold(v, PLANE_ISOLATED, removed_fold);
            table.set_fold(v, PLANE_BELOW, kept_fold);
        } else {
            let w = instance.weight(v);
            let fold0 = fold_children(&table, v, OPTS_CUSTOMER_ISOLATED, &mut scratch);
            let fold1 = fold_children(&table, v, OPTS_CUSTOMER_ABOVE, &mut scratch);
            let fold2 = fold_children(&table, v, OPTS_CUSTOMER_BELOW, &mut scratch);
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
        // Entering a facility outside its served plane means it was deleted:
        // record it, pay one budget unit, and replay the fold on the rest.
        let b = if table.is_facility(v) && plane != PLANE_BELOW {
            debug_assert!(b >= 1, "removal conditions are infeasible at zero budget");
            removed.push(v);
            b - 1
        } else {
            b
        };
        let fold_plane = if table.is_facility(v) && plane == PLANE_ABOVE {
            PLANE_ISOLATED
        } else {
            plane
        };
        let fold = table.fold(v, fold_plane).expect("reconstruction only enters populated planes");
        let want = !table.is_facility(v) && plane == PLANE_BELOW;
        let steps = fold
            .trace(want, b)
            .expect("reconstruction only enters finite states");
        let opts = options_for(&table, v, plane);
        for step in steps {
            let (u, _) = table.children(v)[step.bucket];
            let (opt, c) = decode_item(opts, step.item);
            debug_assert_eq!(c, step.cost);
            stack.push((u, opt.child_plane, c));
        }
    }
    removed.sort_unstable();
    debug_assert!(removed.len() <= r);

    let report = evaluate_strategy(instance, &removed)
        .expect("reconstruction only removes facility nodes");
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
    use crate::oracle::brute_force_rfic;
    use crate::tree_reic::Condition;
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
            ProblemKind::FacilityInterdiction,
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
    fn removing_the_only_facility_frees_the_customer() {
        let inst = instance(2, &[(0, 1)], &[0], &[0.0, 3.0], 1);
        let (sol, table) = solve_tree_rfic(&inst).unwrap();
        assert_eq!(sol.objective, 3.0);
        assert_eq!(sol.removed, vec![0]);
        assert_eq!(sol.disconnected, vec![1]);
        // The facility root must be deleted to satisfy the no-facility
        // condition, which takes one budget unit.
        assert_eq!(table.value(0, Condition::Isolated, 0), DpValue::NegInf);
        assert_eq!(table.value(0, Condition::Isolated, 1), DpValue::finite(3.0));
    }

    #[test]
    fn star_of_three_facility_leaves_needs_all_three_removed() {
        let star = |r| instance(4, &[(0, 1), (0, 2), (0, 3)], &[1, 2, 3], &[7.0, 0.0, 0.0, 0.0], r);
        let (sol, _) = solve_tree_rfic(&star(2)).unwrap();
        assert_eq!(sol.objective, 0.0);
        assert!(sol.removed.is_empty());
        let (sol, _) = solve_tree_rfic(&star(3)).unwrap();
        assert_eq!(sol.objective, 7.0);
        assert_eq!(sol.removed, vec![1, 2, 3]);
        assert_eq!(sol.disconnected, vec![0]);
    }

    #[test]
    fn facility_leaf_base_case_costs_one_unit_to_silence() {
        // Customer root with a facility leaf below it.
        let inst = instance(2, &[(0, 1)], &[1], &[4.0, 0.0], 2);
        let (_, table) = solve_tree_rfic(&inst).unwrap();
        assert_eq!(table.value(1, Condition::Isolated, 0), DpValue::NegInf);
        assert_eq!(table.value(1, Condition::Isolated, 1), DpValue::finite(0.0));
        assert_eq!(table.value(1, Condition::Isolated, 2), DpValue::finite(0.0));
        assert_eq!(table.value(1, Condition::ServedFromBelow, 0), DpValue::finite(0.0));
    }

    #[test]
    fn no_facilities_means_everything_is_already_disconnected() {
        let inst = instance(3, &[(0, 1), (1, 2)], &[], &[2.0, 5.0, 1.0], 0);
        let (sol, _) = solve_tree_rfic(&inst).unwrap();
        assert_eq!(sol.objective, 8.0);
        assert!(sol.removed.is_empty());
    }

    #[test]
    fn rejects_wrong_kind_disconnected_and_cyclic_inputs() {
        let mut inst = instance(2, &[(0, 1)], &[0], &[0.0, 1.0], 1);
        inst.kind = ProblemKind::EdgeInterdiction;
        assert_eq!(
            solve_tree_rfic(&inst).unwrap_err(),
            SolveError::WrongKind { expected: ProblemKind::FacilityInterdiction }
        );
        let disconnected = instance(3, &[(0, 1)], &[0], &[0.0, 1.0, 1.0], 1);
        assert_eq!(solve_tree_rfic(&disconnected).unwrap_err(), SolveError::NotConnected);
        let cyclic = instance(3, &[(0, 1), (1, 2), (0, 2)], &[0], &[0.0, 1.0, 1.0], 1);
        assert_eq!(solve_tree_rfic(&cyclic).unwrap_err(), SolveError::NotATree);
    }

    #[test]
    fn matches_exhaustive_search_on_random_trees() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..150 {
            let n = rng.random_range(2..=10);
            let inst0 = random_tree(&mut rng, n, 0.5, 5, 0);
            let s = inst0.facilities().len();
            let r = rng.random_range(0..=s);
            let mut inst = inst0;
            inst.budget = r;
            let (sol, _) = solve_tree_rfic(&inst).unwrap();
            let oracle = brute_force_rfic(&inst).unwrap();
            assert_eq!(sol.objective, oracle.objective, "mismatch on {inst:?}");
            let report = evaluate_strategy(&inst, &sol.removed).unwrap();
            assert_eq!(report.objective, sol.objective);
            assert!(sol.removed.len() <= r);
            assert!(sol.removed.iter().all(|&v| inst.is_facility(v)));
        }
    }

    #[test]
    fn served_conditions_alias_and_values_are_monotone() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..20 {
            let n = rng.random_range(2..=12);
            let inst = random_tree(&mut rng, n, 0.5, 4, 3);
            let (_, table) = solve_tree_rfic(&inst).unwrap();
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
    fn budget_of_facility_count_frees_every_customer() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..30 {
            let n = rng.random_range(2..=10);
            let mut inst = random_tree(&mut rng, n, 0.5, 5, 0);
            let s = inst.facilities().len();
            let mut prev = -1.0;
            for r in 0..=s + 1 {
                inst.budget = r;
                let (sol, _) = solve_tree_rfic(&inst).unwrap();
                assert!(sol.objective >= prev, "objective must grow with budget");
                prev = sol.objective;
            }
            assert_eq!(prev, inst.total_customer_weight());
        }
    }
}
