//! Exhaustive reference solvers for small instances.
//!
//! These enumerate every removal set of size at most the budget, score each
//! with [`evaluate_strategy`], and return the first maximizer in
//! colexicographic subset order. They exist to cross-check the dynamic
//! programs, so they are guarded, never approximate: instances beyond the
//! size limits are rejected outright.

use crate::graph::{evaluate_strategy, Instance, ProblemKind, Solution};
use thiserror::Error;

/// Hard ceiling on the number of candidate subsets an oracle will score.
const MAX_SUBSETS: u128 = 1_000_000;
/// Edge-count ceiling for the edge-removal oracle.
const MAX_EDGES: usize = 24;
/// Facility-count ceiling for the facility-removal oracle.
const MAX_FACILITIES: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    /// The instance exceeds the enumeration guards.
    #[error("instance too large for exhaustive search: {0}")]
    TooLarge(String),
    /// The instance's problem kind does not match the oracle called.
    #[error("oracle expects a {expected} instance")]
    WrongKind { expected: ProblemKind },
}

/// Σ_{i ≤ r} C(m, i), computed exactly in `u128`.
fn subset_count(m: usize, r: usize) -> u128 {
    let mut total: u128 = 0;
    let mut binom: u128 = 1;
    for i in 0..=r.min(m) {
        total = total.saturating_add(binom);
        binom = binom.saturating_mul((m - i) as u128) / (i as u128 + 1);
    }
    total
}

/// Yields all `size`-subsets of `0..m` as bitmasks in colexicographic order
/// (Gosper's hack), invoking `visit` on each.
fn for_each_subset(m: usize, size: usize, mut visit: impl FnMut(u32)) {
    debug_assert!(m <= 32);
    if size > m {
        return;
    }
    if size == 0 {
        visit(0);
        return;
    }
    let limit: u64 = 1u64 << m;
    let mut mask: u64 = (1u64 << size) - 1;
    while mask < limit {
        visit(mask as u32);
        let lowest = mask & mask.wrapping_neg();
        let ripple = mask + lowest;
        mask = ripple | (((mask ^ ripple) >> 2) / lowest);
    }
}

fn mask_to_indices(mask: u32, universe: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    let mut bits = mask;
    while bits != 0 {
        let bit = bits.trailing_zeros() as usize;
        out.push(universe[bit]);
        bits &= bits - 1;
    }
    out
}

fn best_over_universe(instance: &Instance, universe: &[usize], budget: usize) -> Solution {
    let mut best_objective = f64::NEG_INFINITY;
    let mut best_mask = 0u32;
    for size in 0..=budget.min(universe.len()) {
        for_each_subset(universe.len(), size, |mask| {
            let removed = mask_to_indices(mask, universe);
            let report = evaluate_strategy(instance, &removed)
                .expect("the removal universe only contains valid candidates");
            // Strict improvement only: the first maximizer in enumeration
            // order (smallest size, then colex) wins ties.
            if report.objective > best_objective {
                best_objective = report.objective;
                best_mask = mask;
            }
        });
    }
    let removed = mask_to_indices(best_mask, universe);
    let report = evaluate_strategy(instance, &removed).expect("winning subset is valid");
    Solution {
        removed,
        objective: report.objective,
        disconnected: report.disconnected,
    }
}

/// Exhaustively solves edge interdiction: tries every edge subset of size at
/// most the budget and returns the best.
pub fn brute_force_reic(instance: &Instance) -> Result<Solution, OracleError> {
    if instance.kind != ProblemKind::EdgeInterdiction {
        return Err(OracleError::WrongKind { expected: ProblemKind::EdgeInterdiction });
    }
    let m = instance.graph.edge_count();
    if m > MAX_EDGES {
        return Err(OracleError::TooLarge(format!("{m} edges exceeds the {MAX_EDGES}-edge limit")));
    }
    let count = subset_count(m, instance.budget);
    if count > MAX_SUBSETS {
        return Err(OracleError::TooLarge(format!(
            "{count} candidate edge subsets exceed the {MAX_SUBSETS} limit"
        )));
    }
    let universe: Vec<usize> = (0..m).collect();
    Ok(best_over_universe(instance, &universe, instance.budget))
}

/// Exhaustively solves facility interdiction: tries every facility subset of
/// size at most the budget and returns the best.
pub fn brute_force_rfic(instance: &Instance) -> Result<Solution, OracleError> {
    if instance.kind != ProblemKind::FacilityInterdiction {
        return Err(OracleError::WrongKind { expected: ProblemKind::FacilityInterdiction });
    }
    let facilities = instance.facilities();
    if facilities.len() > MAX_FACILITIES {
        return Err(OracleError::TooLarge(format!(
            "{} facilities exceed the {MAX_FACILITIES}-facility limit",
            facilities.len()
        )));
    }
    let count = subset_count(facilities.len(), instance.budget);
    if count > MAX_SUBSETS {
        return Err(OracleError::TooLarge(format!(
            "{count} candidate facility subsets exceed the {MAX_SUBSETS} limit"
        )));
    }
    Ok(best_over_universe(instance, &facilities, instance.budget))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Graph, NodeRole};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Facility 0 joined to customer 1 of weight 3 by a single edge.
    fn facility_customer(kind: ProblemKind, budget: usize) -> Instance {
        Instance::new(
            Graph::new(2, &[(0, 1)]).unwrap(),
            vec![NodeRole::Facility, NodeRole::Customer],
            vec![0.0, 3.0],
            budget,
            kind,
        )
    }

    #[test]
    fn cutting_one_edge_isolates_the_customer() {
        let inst = facility_customer(ProblemKind::EdgeInterdiction, 1);
        let sol = brute_force_reic(&inst).unwrap();
        assert_eq!(sol.objective, 3.0);
        assert_eq!(sol.removed, vec![0]);
        assert_eq!(sol.disconnected, vec![1]);
    }

    #[test]
    fn removing_the_only_facility_isolates_the_customer() {
        let inst = facility_customer(ProblemKind::FacilityInterdiction, 1);
        let sol = brute_force_rfic(&inst).unwrap();
        assert_eq!(sol.objective, 3.0);
        assert_eq!(sol.removed, vec![0]);
    }

    #[test]
    fn zero_budget_on_a_connected_graph_scores_zero() {
        let inst = facility_customer(ProblemKind::EdgeInterdiction, 0);
        let sol = brute_force_reic(&inst).unwrap();
        assert_eq!(sol.objective, 0.0);
        assert!(sol.removed.is_empty());
    }

    #[test]
    fn star_center_stays_covered_when_a_facility_leaf_survives() {
        // Customer center (weight 7) with three facility leaves; budget 2
        // cannot remove all three facilities.
        let inst = Instance::new(
            Graph::new(4, &[(0, 1), (0, 2), (0, 3)]).unwrap(),
            vec![NodeRole::Customer, NodeRole::Facility, NodeRole::Facility, NodeRole::Facility],
            vec![7.0, 0.0, 0.0, 0.0],
            2,
            ProblemKind::FacilityInterdiction,
        );
        let sol = brute_force_rfic(&inst).unwrap();
        assert_eq!(sol.objective, 0.0);
        assert!(sol.removed.is_empty());
    }

    #[test]
    fn four_cycle_needs_two_cuts_to_strand_anyone() {
        // Facility 0 on a 4-cycle with customers 1 (w=1), 2 (w=4), 3 (w=2).
        // One cut leaves the cycle connected; the best pair of cuts severs
        // both edges at the facility, stranding all three customers.
        let cycle = |r| {
            Instance::new(
                Graph::new(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap(),
                vec![
                    NodeRole::Facility,
                    NodeRole::Customer,
                    NodeRole::Customer,
                    NodeRole::Customer,
                ],
                vec![0.0, 1.0, 4.0, 2.0],
                r,
                ProblemKind::EdgeInterdiction,
            )
        };
        let sol = brute_force_reic(&cycle(1)).unwrap();
        assert_eq!(sol.objective, 0.0);
        let sol = brute_force_reic(&cycle(2)).unwrap();
        assert_eq!(sol.objective, 7.0);
        assert_eq!(sol.removed, vec![0, 3], "both edges incident to the facility");
        let report = evaluate_strategy(&cycle(2), &sol.removed).unwrap();
        assert_eq!(report.objective, sol.objective);
    }

    #[test]
    fn oracles_reject_mismatched_kinds() {
        let edge = facility_customer(ProblemKind::EdgeInterdiction, 1);
        let fac = facility_customer(ProblemKind::FacilityInterdiction, 1);
        assert!(matches!(brute_force_reic(&fac), Err(OracleError::WrongKind { .. })));
        assert!(matches!(brute_force_rfic(&edge), Err(OracleError::WrongKind { .. })));
    }

    #[test]
    fn guards_reject_oversized_instances() {
        // 26 edges: a path on 27 nodes.
        let n = 27;
        let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
        let mut roles = vec![NodeRole::Customer; n];
        roles[0] = NodeRole::Facility;
        let inst = Instance::new(
            Graph::new(n, &edges).unwrap(),
            roles,
            vec![1.0; n],
            1,
            ProblemKind::EdgeInterdiction,
        );
        assert!(matches!(brute_force_reic(&inst), Err(OracleError::TooLarge(_))));

        // 24 edges but a budget that pushes the subset count past a million.
        let n = 25;
        let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
        let mut roles = vec![NodeRole::Customer; n];
        roles[0] = NodeRole::Facility;
        let inst = Instance::new(
            Graph::new(n, &edges).unwrap(),
            roles,
            vec![1.0; n],
            8,
            ProblemKind::EdgeInterdiction,
        );
        assert!(subset_count(24, 8) > 1_000_000);
        assert!(subset_count(24, 7) <= 1_000_000);
        assert!(matches!(brute_force_reic(&inst), Err(OracleError::TooLarge(_))));
    }

    #[test]
    fn subset_counts_are_exact() {
        assert_eq!(subset_count(4, 0), 1);
        assert_eq!(subset_count(4, 2), 1 + 4 + 6);
        assert_eq!(subset_count(4, 9), 16);
        assert_eq!(subset_count(24, 4), 1 + 24 + 276 + 2024 + 10626);
    }

    #[test]
    fn colex_enumeration_is_complete_and_ordered() {
        let mut seen = Vec::new();
        for_each_subset(5, 2, |m| seen.push(m));
        assert_eq!(seen.len(), 10);
        let mut sorted = seen.clone();
        sorted.sort_unstable();
        assert_eq!(seen, sorted, "colex order on same-size masks is numeric order");
        assert!(seen.iter().all(|m| m.count_ones() == 2));
    }

    #[test]
    fn objective_is_monotone_in_budget() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..30 {
            let n = rng.random_range(2..=7);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in (u + 1)..n {
                    if rng.random_bool(0.5) {
                        edges.push((u, v));
                    }
                }
            }
            let mut roles: Vec<NodeRole> = (0..n)
                .map(|_| if rng.random_bool(0.4) { NodeRole::Facility } else { NodeRole::Customer })
                .collect();
            roles[0] = NodeRole::Facility;
            let weights: Vec<f64> = (0..n).map(|_| rng.random_range(1..6) as f64).collect();
            let total: f64 = roles
                .iter()
                .zip(&weights)
                .filter(|(r, _)| **r == NodeRole::Customer)
                .map(|(_, w)| *w)
                .sum();
            let mut prev = -1.0;
            for r in 0..=edges.len().min(5) {
                let inst = Instance::new(
                    Graph::new(n, &edges).unwrap(),
                    roles.clone(),
                    weights.clone(),
                    r,
                    ProblemKind::EdgeInterdiction,
                );
                let sol = brute_force_reic(&inst).unwrap();
                assert!(sol.objective >= prev, "objective must not drop as budget grows");
                assert!(sol.objective <= total + 1e-12);
                prev = sol.objective;
            }
        }
    }

    #[test]
    fn relabeling_nodes_preserves_the_optimum() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..25 {
            let n = rng.random_range(3..=8);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in (u + 1)..n {
                    if rng.random_bool(0.45) {
                        edges.push((u, v));
                    }
                }
            }
            let mut roles: Vec<NodeRole> = (0..n)
                .map(|_| if rng.random_bool(0.4) { NodeRole::Facility } else { NodeRole::Customer })
                .collect();
            roles[rng.random_range(0..n)] = NodeRole::Facility;
            let weights: Vec<f64> = (0..n).map(|_| rng.random_range(1..9) as f64).collect();

            // A rotation permutation keeps things simple and reproducible.
            let perm: Vec<usize> = (0..n).map(|v| (v + 1) % n).collect();
            let p_edges: Vec<_> = edges.iter().map(|&(u, v)| (perm[u], perm[v])).collect();
            let mut p_roles = vec![NodeRole::Customer; n];
            let mut p_weights = vec![0.0; n];
            for v in 0..n {
                p_roles[perm[v]] = roles[v];
                p_weights[perm[v]] = weights[v];
            }

            for (kind, budget) in [
                (ProblemKind::EdgeInterdiction, 2),
                (ProblemKind::FacilityInterdiction, 1),
            ] {
                let a = Instance::new(
                    Graph::new(n, &edges).unwrap(),
                    roles.clone(),
                    weights.clone(),
                    budget,
                    kind,
                );
                let b = Instance::new(
                    Graph::new(n, &p_edges).unwrap(),
                    p_roles.clone(),
                    p_weights.clone(),
                    budget,
                    kind,
                );
                let (sa, sb) = match kind {
                    ProblemKind::EdgeInterdiction => {
                        (brute_force_reic(&a).unwrap(), brute_force_reic(&b).unwrap())
                    }
                    ProblemKind::FacilityInterdiction => {
                        (brute_force_rfic(&a).unwrap(), brute_force_rfic(&b).unwrap())
                    }
                };
                assert_eq!(sa.objective, sb.objective, "optima differ under relabeling");
            }
        }
    }
}
