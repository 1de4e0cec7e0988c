//! Seeded, reproducible instance generators.
//!
//! Three families:
//!
//! * **Prüfer trees** — uniformly random labeled trees (decoded from a
//!   random Prüfer sequence), each node independently a facility;
//! * **Leaf-facility clusters** — random trees whose facilities sit only on
//!   leaves, with at least one facility forced;
//! * **Walker grids** — `planes × n` satellite meshes (paths or rings per
//!   plane, rungs between planes) with facility ground stations hung off
//!   random satellites.
//!
//! Randomness comes from a ChaCha generator seeded with the configured
//! 64-bit seed and split into fixed, independent streams — tree shape,
//! roles, weights, and attachment points — so a field's draws never shift
//! when an unrelated field changes. Equal configurations produce
//! byte-identical instances across runs and platforms.

use crate::graph::{Graph, Instance, NodeRole, ProblemKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::cmp::Reverse;
use std::collections::BinaryHeap;

/// Instance family to generate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    PruferTree,
    LeafFacilityCluster,
    WalkerGrid,
}

/// How customer weights are drawn.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum WeightDist {
    /// Every customer weighs 1.
    Unit,
    /// Integer weights drawn uniformly from `1..=max`.
    UniformInt { max: u32 },
}

/// How the removal budget is derived from the instance size.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BudgetRule {
    Fixed(usize),
    /// Budget = fraction × node count, rounded to nearest.
    Ratio(f64),
}

impl BudgetRule {
    pub fn apply(&self, node_count: usize) -> usize {
        match *self {
            BudgetRule::Fixed(r) => r,
            BudgetRule::Ratio(f) => (f * node_count as f64).round() as usize,
        }
    }
}

/// Full description of one generated instance.
#[derive(Clone, Debug, PartialEq)]
pub struct GenConfig {
    pub family: Family,
    /// Node count for tree families; satellites per plane for grids.
    pub n: usize,
    /// Number of orbital planes (grids only).
    pub planes: usize,
    /// Per-node (trees) or per-leaf (clusters) facility probability.
    pub facility_probability: f64,
    pub weights: WeightDist,
    pub budget: BudgetRule,
    pub kind: ProblemKind,
    /// Close each plane into a ring (grids only; planes of 2 satellites
    /// stay paths to avoid a duplicate edge).
    pub ring: bool,
    /// Facility leaves attached to random satellites (grids only).
    pub ground_stations: usize,
    pub seed: u64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            family: Family::PruferTree,
            n: 10,
            planes: 1,
            facility_probability: 0.3,
            weights: WeightDist::Unit,
            budget: BudgetRule::Fixed(2),
            kind: ProblemKind::EdgeInterdiction,
            ring: false,
            ground_stations: 1,
            seed: 0,
        }
    }
}

const STREAM_SHAPE: u64 = 0;
const STREAM_ROLE: u64 = 1;
const STREAM_WEIGHT: u64 = 2;
const STREAM_ATTACH: u64 = 3;

fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn draw_weights(dist: WeightDist, n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    match dist {
        WeightDist::Unit => vec![1.0; n],
        WeightDist::UniformInt { max } => {
            (0..n).map(|_| rng.random_range(1..=max) as f64).collect()
        }
    }
}

/// Turns a Prüfer sequence over `0..n` into the edge list of the unique
/// labeled tree it encodes; `seq.len()` must be `n − 2`.
fn decode_prufer(seq: &[usize], n: usize) -> Vec<(usize, usize)> {
    debug_assert_eq!(seq.len() + 2, n);
    let mut degree = vec![1usize; n];
    for &s in seq {
        degree[s] += 1;
    }
    let mut leaves: BinaryHeap<Reverse<usize>> =
        (0..n).filter(|&v| degree[v] == 1).map(Reverse).collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &s in seq {
        let Reverse(l) = leaves.pop().expect("a leaf always remains mid-decode");
        edges.push((l.min(s), l.max(s)));
        degree[l] -= 1;
        degree[s] -= 1;
        if degree[s] == 1 {
            leaves.push(Reverse(s));
        }
    }
    let Reverse(a) = leaves.pop().expect("two leaves close the decode");
    let Reverse(b) = leaves.pop().expect("two leaves close the decode");
    debug_assert!(leaves.is_empty());
    edges.push((a.min(b), a.max(b)));
    edges
}

/// A uniformly random labeled tree on `config.n ≥ 2` nodes; each node is a
/// facility independently with `facility_probability`.
pub fn gen_prufer_tree(config: &GenConfig) -> Instance {
    let n = config.n;
    assert!(n >= 2, "a labeled tree needs at least two nodes");
    let mut shape = stream(config.seed, STREAM_SHAPE);
    let seq: Vec<usize> = (0..n.saturating_sub(2)).map(|_| shape.random_range(0..n)).collect();
    let graph = Graph::new(n, &decode_prufer(&seq, n)).expect("decoded trees are simple");
    let mut role = stream(config.seed, STREAM_ROLE);
    let roles = (0..n)
        .map(|_| {
            if role.random_bool(config.facility_probability) {
                NodeRole::Facility
            } else {
                NodeRole::Customer
            }
        })
        .collect();
    let mut weight = stream(config.seed, STREAM_WEIGHT);
    let weights = draw_weights(config.weights, n, &mut weight);
    Instance::new(graph, roles, weights, config.budget.apply(n), config.kind)
}

/// A uniformly random labeled tree on `config.n ≥ 3` nodes whose facilities
/// are a random subset of its leaves (each leaf kept with
/// `facility_probability`, one forced if the draw selects none); every
/// inner node is a customer.
pub fn gen_leaf_facility_cluster(config: &GenConfig) -> Instance {
    let n = config.n;
    assert!(n >= 3, "leaf-facility clusters need at least three nodes");
    let mut shape = stream(config.seed, STREAM_SHAPE);
    let seq: Vec<usize> = (0..n - 2).map(|_| shape.random_range(0..n)).collect();
    let graph = Graph::new(n, &decode_prufer(&seq, n)).expect("decoded trees are simple");
    let leaves: Vec<usize> = (0..n).filter(|&v| graph.degree(v) == 1).collect();
    let mut role = stream(config.seed, STREAM_ROLE);
    let mut facility = vec![false; n];
    for &leaf in &leaves {
        facility[leaf] = role.random_bool(config.facility_probability);
    }
    if !facility.iter().any(|&f| f) {
        facility[leaves[role.random_range(0..leaves.len())]] = true;
    }
    let roles = facility
        .iter()
        .map(|&f| if f { NodeRole::Facility } else { NodeRole::Customer })
        .collect();
    let mut weight = stream(config.seed, STREAM_WEIGHT);
    let weights = draw_weights(config.weights, n, &mut weight);
    Instance::new(graph, roles, weights, config.budget.apply(n), config.kind)
}

/// A `planes × n` satellite mesh: satellite `(i, j)` is node `i·n + j`,
/// each plane is a path over `j` (closed into a ring when `ring` is set and
/// the plane has ≥ 3 satellites), and consecutive planes are joined column
/// by column. `ground_stations` facility leaves are then attached to
/// satellites drawn at random; all satellites are customers.
pub fn gen_walker_grid(config: &GenConfig) -> Instance {
    let (k, n) = (config.planes, config.n);
    assert!(k >= 1, "at least one orbital plane");
    assert!(n >= 2, "at least two satellites per plane");
    let sat = k * n;
    let id = |i: usize, j: usize| i * n + j;
    let mut edges = Vec::new();
    for i in 0..k {
        for j in 0..n - 1 {
            edges.push((id(i, j), id(i, j + 1)));
        }
        if config.ring && n >= 3 {
            edges.push((id(i, 0), id(i, n - 1)));
        }
    }
    for i in 0..k - 1 {
        for j in 0..n {
            edges.push((id(i, j), id(i + 1, j)));
        }
    }
    let mut attach = stream(config.seed, STREAM_ATTACH);
    for g in 0..config.ground_stations {
        edges.push((attach.random_range(0..sat), sat + g));
    }
    let total = sat + config.ground_stations;
    let graph = Graph::new(total, &edges).expect("mesh edges are simple");
    let roles = (0..total)
        .map(|v| if v < sat { NodeRole::Customer } else { NodeRole::Facility })
        .collect();
    let mut weight = stream(config.seed, STREAM_WEIGHT);
    let weights = draw_weights(config.weights, total, &mut weight);
    Instance::new(graph, roles, weights, config.budget.apply(total), config.kind)
}

/// Dispatches on `config.family`.
pub fn generate(config: &GenConfig) -> Instance {
    match config.family {
        Family::PruferTree => gen_prufer_tree(config),
        Family::LeafFacilityCluster => gen_leaf_facility_cluster(config),
        Family::WalkerGrid => gen_walker_grid(config),
    }
}
