//! Edge interdiction on graphs of small treewidth.
//!
//! The solver walks an extended nice tree decomposition bottom-up. A state
//! assigns each bag vertex a label — 1 for "assumed connected to some
//! surviving facility", 0 for "guaranteed disconnected" — packed as a bitmask
//! over the sorted bag. Facilities must carry label 1, so any state labeling
//! a bag facility 0 is `NegInf`. A customer's weight is banked the moment it
//! is introduced with label 0; an edge whose endpoints disagree must be cut
//! when it is introduced, spending one unit of budget. Because every edge
//! surfaces at exactly one introduce-edge node, each cut is charged once, and
//! a 0-labeled vertex really is separated from every facility in the final
//! graph. Values are maxima over removal sets of size **at most** the budget
//! coordinate, so tables are monotone in the budget by construction.
//!
//! With width `k`, `n` graph vertices, and budget `r`, the run costs
//! `O(k·2^k·n·r²)` time and `O(2^k·n·r)` table memory.

use crate::graph::{Instance, ProblemKind, Solution};
use crate::knapsack::DpValue;
use crate::treewidth::{validate_nice_decomposition, NiceDecomposition, NiceNodeKind};
use crate::SolveError;

/// Per-node DP tables: `value(t, mask, b)` is the best total weight of
/// customers guaranteed disconnected among vertices handled in the subtree
/// of nice node `t`, given bag labeling `mask` and at most `b` edge
/// removals. Bit `i` of `mask` refers to the `i`-th smallest bag vertex.
#[derive(Clone, Debug)]
pub struct BtwDpTable {
    budget: usize,
    root: usize,
    values: Vec<Vec<Vec<DpValue>>>,
}

impl BtwDpTable {
    pub fn budget(&self) -> usize {
        self.budget
    }

    /// Index of the root nice node.
    pub fn root(&self) -> usize {
        self.root
    }

    pub fn node_count(&self) -> usize {
        self.values.len()
    }

    /// Number of labelings stored for nice node `t` (2 to the bag size).
    pub fn mask_count(&self, t: usize) -> usize {
        self.values[t].len()
    }

    pub fn value(&self, t: usize, mask: usize, b: usize) -> DpValue {
        self.values[t][mask][b]
    }
}

/// Drops the bit at `pos`, closing the gap above it.
fn mask_without_bit(mask: usize, pos: usize) -> usize {
    (mask & ((1 << pos) - 1)) | ((mask >> (pos + 1)) << pos)
}

/// Opens a gap at `pos` and writes `bit` there.
fn mask_with_bit(mask: usize, pos: usize, bit: usize) -> usize {
    let low = mask & ((1 << pos) - 1);
    let high = (mask >> pos) << (pos + 1);
    low | high | (bit << pos)
}

/// Total weight that labeling `mask` marks as guaranteed disconnected
/// inside the bag; `bag_customer_weights[i]` must be the weight of the
/// `i`-th bag vertex for customers and 0 for facilities.
fn zero_label_weight(mask: usize, bag_customer_weights: &[f64]) -> f64 {
    bag_customer_weights
        .iter()
        .enumerate()
        .filter(|&(i, _)| (mask >> i) & 1 == 0)
        .map(|(_, &w)| w)
        .sum()
}

/// Merges the tables of a join node's two children, which must carry the
/// same bag: for each labeling and budget `b`, the best split of `b` between
/// the children, minus the bag's 0-labeled customer weight that both sides
/// banked. `NegInf` propagates through sums.
///
/// `left` and `right` are indexed `[mask][budget]`; `bag_customer_weights`
/// holds one entry per bag vertex (0 for facilities) and fixes the expected
/// mask count.
pub fn join_merge(
    left: &[Vec<DpValue>],
    right: &[Vec<DpValue>],
    bag_customer_weights: &[f64],
    budget: usize,
) -> Result<Vec<Vec<DpValue>>, SolveError> {
    let masks = 1usize << bag_customer_weights.len();
    if left.len() != masks || right.len() != masks {
        return Err(SolveError::BagMismatch(format!(
            "join expects {masks} labelings per side for a bag of {} vertices, found {} and {}",
            bag_customer_weights.len(),
            left.len(),
            right.len()
        )));
    }
    for (side, table) in [("left", left), ("right", right)] {
        if let Some(m) = table.iter().position(|row| row.len() != budget + 1) {
            return Err(SolveError::BagMismatch(format!(
                "{side} child stores {} budget entries for labeling {m}, expected {}",
                table[m].len(),
                budget + 1
            )));
        }
    }
    let mut merged = vec![vec![DpValue::NegInf; budget + 1]; masks];
    for mask in 0..masks {
        let correction = zero_label_weight(mask, bag_customer_weights);
        for b in 0..=budget {
            let mut best = DpValue::NegInf;
            for b1 in 0..=b {
                let cand = left[mask][b1].plus(right[mask][b - b1]);
                if cand > best {
                    best = cand;
                }
            }
            merged[mask][b] = best.plus_f64(-correction);
        }
    }
    Ok(merged)
}

/// Children-first evaluation order over the nice tree.
fn post_order(nice: &NiceDecomposition) -> Vec<usize> {
    let mut order = Vec::with_capacity(nice.nodes.len());
    let mut stack = vec![(nice.root, false)];
    while let Some((t, expanded)) = stack.pop() {
        if expanded {
            order.push(t);
        } else {
            stack.push((t, true));
            stack.extend(nice.nodes[t].children.iter().map(|&c| (c, false)));
        }
    }
    order
}

fn bag_customer_weights(instance: &Instance, bag: &[usize]) -> Vec<f64> {
    bag.iter()
        .map(|&v| if instance.is_customer(v) { instance.weight(v) } else { 0.0 })
        .collect()
}

/// Maximizes the weight of customers disconnected from every facility by
/// removing at most `instance.budget` edges, using a nice tree decomposition
/// of the instance graph. The graph need not be connected. Returns the
/// removal set (as edge indices, ascending) together with the full DP
/// tables.
///
/// Errors with [`SolveError::WrongKind`] unless the instance is an
/// edge-interdiction instance and [`SolveError::InvalidDecomposition`] if
/// `nice` fails validation against the instance graph.
pub fn solve_btw_reic(
    instance: &Instance,
    nice: &NiceDecomposition,
) -> Result<(Solution, BtwDpTable), SolveError> {
    if instance.kind != ProblemKind::EdgeInterdiction {
        return Err(SolveError::WrongKind { expected: ProblemKind::EdgeInterdiction });
    }
    let violations = validate_nice_decomposition(&instance.graph, nice);
    if let Some(first) = violations.into_iter().next() {
        return Err(SolveError::InvalidDecomposition(first));
    }
    let r = instance.budget;
    let mut values: Vec<Vec<Vec<DpValue>>> = vec![Vec::new(); nice.nodes.len()];
    for t in post_order(nice) {
        let node = &nice.nodes[t];
        let bag = &node.bag;
        let masks = 1usize << bag.len();
        let pos_of = |v: usize| bag.binary_search(&v).expect("validated bag membership");
        values[t] = match node.kind {
            NiceNodeKind::Leaf => vec![vec![DpValue::ZERO; r + 1]],
            NiceNodeKind::IntroduceVertex(v) => {
                let child = &values[node.children[0]];
                let pos = pos_of(v);
                let facility = instance.is_facility(v);
                let weight = instance.weight(v);
                (0..masks)
                    .map(|mask| {
                        let child_row = &child[mask_without_bit(mask, pos)];
                        if (mask >> pos) & 1 == 1 {
                            child_row.clone()
                        } else if facility {
                            vec![DpValue::NegInf; r + 1]
                        } else {
                            child_row.iter().map(|&x| x.plus_f64(weight)).collect()
                        }
                    })
                    .collect()
            }
            NiceNodeKind::IntroduceEdge(u, v) => {
                let child = &values[node.children[0]];
                let (pu, pv) = (pos_of(u), pos_of(v));
                (0..masks)
                    .map(|mask| {
                        if (mask >> pu) & 1 == (mask >> pv) & 1 {
                            child[mask].clone()
                        } else {
                            // Mismatched labels force a cut here.
                            (0..=r)
                                .map(|b| {
                                    if b == 0 {
                                        DpValue::NegInf
                                    } else {
                                        child[mask][b - 1]
                                    }
                                })
                                .collect()
                        }
                    })
                    .collect()
            }
            NiceNodeKind::Forget(v) => {
                let child_bag = &nice.nodes[node.children[0]].bag;
                let pos = child_bag.binary_search(&v).expect("validated forget vertex");
                let child = &values[node.children[0]];
                (0..masks)
                    .map(|mask| {
                        let row0 = &child[mask_with_bit(mask, pos, 0)];
                        let row1 = &child[mask_with_bit(mask, pos, 1)];
                        (0..=r).map(|b| row0[b].max(row1[b])).collect()
                    })
                    .collect()
            }
            NiceNodeKind::Join => {
                let weights = bag_customer_weights(instance, bag);
                join_merge(&values[node.children[0]], &values[node.children[1]], &weights, r)?
            }
        };
    }

    let objective = values[nice.root][0][r];
    debug_assert!(
        objective >= DpValue::ZERO,
        "cutting nothing always yields a feasible all-connected state"
    );
    let objective = objective.as_finite().expect("root value is finite");

    // Retrace one optimal state path, re-deriving each argmax; edges are
    // collected at introduce-edge nodes whose endpoint labels disagree.
    let mut removed: Vec<usize> = Vec::new();
    let mut stack: Vec<(usize, usize, usize)> = vec![(nice.root, 0, r)];
    while let Some((t, mask, b)) = stack.pop() {
        let node = &nice.nodes[t];
        let val = values[t][mask][b];
        let bag = &node.bag;
        let pos_of = |v: usize| bag.binary_search(&v).expect("validated bag membership");
        match node.kind {
            NiceNodeKind::Leaf => debug_assert_eq!(val, DpValue::ZERO),
            NiceNodeKind::IntroduceVertex(v) => {
                stack.push((node.children[0], mask_without_bit(mask, pos_of(v)), b));
            }
            NiceNodeKind::IntroduceEdge(u, v) => {
                if (mask >> pos_of(u)) & 1 == (mask >> pos_of(v)) & 1 {
                    stack.push((node.children[0], mask, b));
                } else {
                    debug_assert!(b > 0, "a finite mismatched state has budget to cut");
                    removed.push(
                        instance.graph.edge_index(u, v).expect("validated graph edge"),
                    );
                    stack.push((node.children[0], mask, b - 1));
                }
            }
            NiceNodeKind::Forget(v) => {
                let child_bag = &nice.nodes[node.children[0]].bag;
                let pos = child_bag.binary_search(&v).expect("validated forget vertex");
                let child = node.children[0];
                // Prefer the guaranteed-disconnected extension on ties.
                let m0 = mask_with_bit(mask, pos, 0);
                if values[child][m0][b] == val {
                    stack.push((child, m0, b));
                } else {
                    let m1 = mask_with_bit(mask, pos, 1);
                    debug_assert_eq!(values[child][m1][b], val);
                    stack.push((child, m1, b));
                }
            }
            NiceNodeKind::Join => {
                let correction = zero_label_weight(mask, &bag_customer_weights(instance, bag));
                let (l, rc) = (node.children[0], node.children[1]);
                let split = (0..=b)
                    .find(|&b1| {
                        values[l][mask][b1]
                            .plus(values[rc][mask][b - b1])
                            .plus_f64(-correction)
                            == val
                    })
                    .expect("the merged value came from some split");
                stack.push((l, mask, split));
                stack.push((rc, mask, b - split));
            }
        }
    }
    removed.sort_unstable();

    let report = crate::graph::evaluate_strategy(instance, &removed)
        .expect("reconstructed edges are valid indices");
    debug_assert!(
        (report.objective - objective).abs() <= 1e-9 * objective.abs().max(1.0),
        "re-scored strategy ({}) must reproduce the table objective ({})",
        report.objective,
        objective
    );

    let solution =
        Solution { removed, objective, disconnected: report.disconnected };
    Ok((solution, BtwDpTable { budget: r, root: nice.root, values }))
}
