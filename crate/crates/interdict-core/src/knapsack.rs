//! Multiple-choice knapsack engines with exact reconstruction.
//!
//! Items are grouped into buckets; a selection picks **exactly one item per
//! bucket** subject to a total-cost capacity. Two variants are offered:
//!
//! * [`solve_mckp`] — plain multiple-choice knapsack (property flags ignored);
//! * [`solve_cmckp`] — additionally requires that at least one chosen item
//!   carries its `property` flag.
//!
//! Values live in a max-plus algebra with a `-inf` sentinel ([`DpValue`]), so
//! callers encode forbidden choices as unusable items instead of special
//! cases. Tables report, for every capacity `c ≤ C`, the best value over
//! selections of total cost **at most** `c`; values are therefore monotone
//! nondecreasing in capacity.
//!
//! The incremental [`BucketFold`] interface lets callers stream buckets one at
//! a time (the tree solvers fold child tables without materializing a
//! [`CmckpInstance`]) and later walk the recorded choices backwards to
//! reconstruct an optimal selection.

use std::cmp::Ordering;
use thiserror::Error;

/// A value in the max-plus algebra used by all dynamic programs here: either
/// a finite objective or negative infinity ("no feasible solution").
///
/// `NegInf` is a tagged sentinel, never a large negative float; addition
/// saturates, so infeasibility can never be diluted into a finite value.
/// Finite payloads are finite `f64`s by construction (never NaN), which makes
/// the total order below well-defined.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DpValue {
    NegInf,
    Finite(f64),
}

impl DpValue {
    pub const ZERO: DpValue = DpValue::Finite(0.0);

    /// Wraps a finite value.
    pub fn finite(x: f64) -> Self {
        debug_assert!(x.is_finite(), "DpValue::finite requires a finite payload");
        DpValue::Finite(x)
    }

    pub fn is_finite(self) -> bool {
        matches!(self, DpValue::Finite(_))
    }

    pub fn as_finite(self) -> Option<f64> {
        match self {
            DpValue::Finite(x) => Some(x),
            DpValue::NegInf => None,
        }
    }

    /// Saturating addition: `-inf` absorbs everything.
    #[must_use]
    pub fn plus(self, rhs: DpValue) -> DpValue {
        match (self, rhs) {
            (DpValue::Finite(a), DpValue::Finite(b)) => DpValue::Finite(a + b),
            _ => DpValue::NegInf,
        }
    }

    /// Adds a finite offset, preserving `-inf`.
    #[must_use]
    pub fn plus_f64(self, rhs: f64) -> DpValue {
        match self {
            DpValue::Finite(a) => DpValue::Finite(a + rhs),
            DpValue::NegInf => DpValue::NegInf,
        }
    }
}

// Finite payloads are never NaN, so equality is reflexive.
impl Eq for DpValue {}

impl PartialOrd for DpValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for DpValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (DpValue::NegInf, DpValue::NegInf) => Ordering::Equal,
            (DpValue::NegInf, DpValue::Finite(_)) => Ordering::Less,
            (DpValue::Finite(_), DpValue::NegInf) => Ordering::Greater,
            (DpValue::Finite(a), DpValue::Finite(b)) => a.total_cmp(b),
        }
    }
}

/// One item: a nonnegative integer cost, a max-plus value, and a flag telling
/// whether the item satisfies the property tracked by the constrained solver.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KnapsackItem {
    pub cost: usize,
    pub value: DpValue,
    pub property: bool,
}

impl KnapsackItem {
    /// An item without the property flag.
    pub fn new(cost: usize, value: DpValue) -> Self {
        KnapsackItem { cost, value, property: false }
    }

    /// An item carrying the property flag.
    pub fn flagged(cost: usize, value: DpValue) -> Self {
        KnapsackItem { cost, value, property: true }
    }
}

/// A full problem statement: buckets of items and a capacity.
#[derive(Clone, Debug)]
pub struct CmckpInstance {
    pub buckets: Vec<Vec<KnapsackItem>>,
    pub capacity: usize,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KnapsackError {
    /// Every bucket must offer at least one item; an empty bucket makes the
    /// exactly-one-per-bucket constraint unsatisfiable.
    #[error("bucket {0} is empty")]
    EmptyBucket(usize),
    /// No selection is feasible at the requested capacity.
    #[error("no feasible selection at capacity {0}")]
    Infeasible(usize),
    /// The requested capacity exceeds the capacity the table was built for.
    #[error("capacity {requested} exceeds table capacity {capacity}")]
    CapacityOutOfRange { requested: usize, capacity: usize },
}

/// The per-bucket choice recorded while folding, enough to walk a solution
/// backwards without re-reading the items.
#[derive(Clone, Copy, Debug)]
struct Choice {
    item: u32,
    cost: u32,
    prev_plane: u8,
}

/// One step of a reconstructed selection: which item a bucket contributed and
/// at what cost.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub bucket: usize,
    pub item: usize,
    pub cost: usize,
}

/// Incremental knapsack state: two value planes over capacities `0..=C`.
///
/// Plane 0 holds the best value over selections with **no** property item;
/// plane 1 over selections with **at least one**. Both planes are monotone
/// nondecreasing in capacity (inductively: the initial planes are constant and
/// folding preserves monotonicity). Folding a bucket costs `O(N_i · C)`.
///
/// Ties between equal-value choices resolve deterministically: within a
/// bucket, the lowest item index wins (scan order), and a property item
/// prefers extending a chain that already satisfies the constraint.
#[derive(Clone, Debug)]
pub struct BucketFold {
    capacity: usize,
    plane0: Vec<DpValue>,
    plane1: Vec<DpValue>,
    choices: Vec<[Vec<Option<Choice>>; 2]>,
}

impl BucketFold {
    pub fn new(capacity: usize) -> Self {
        BucketFold {
            capacity,
            plane0: vec![DpValue::ZERO; capacity + 1],
            plane1: vec![DpValue::NegInf; capacity + 1],
            choices: Vec::new(),
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn bucket_count(&self) -> usize {
        self.choices.len()
    }

    /// Best value at capacity `c`, property constraint ignored.
    pub fn best_any(&self, c: usize) -> DpValue {
        self.plane0[c].max(self.plane1[c])
    }

    /// Best value at capacity `c` among selections with ≥1 property item.
    pub fn best_satisfying(&self, c: usize) -> DpValue {
        self.plane1[c]
    }

    /// Folds the next bucket into the running planes.
    pub fn push_bucket(&mut self, items: &[KnapsackItem]) -> Result<(), KnapsackError> {
        if items.is_empty() {
            return Err(KnapsackError::EmptyBucket(self.bucket_count()));
        }
        let cap = self.capacity;
        let mut new0 = vec![DpValue::NegInf; cap + 1];
        let mut new1 = vec![DpValue::NegInf; cap + 1];
        let mut ch0: Vec<Option<Choice>> = vec![None; cap + 1];
        let mut ch1: Vec<Option<Choice>> = vec![None; cap + 1];
        for c in 0..=cap {
            let mut best0 = DpValue::NegInf;
            let mut pick0 = None;
            let mut best1 = DpValue::NegInf;
            let mut pick1 = None;
            for (j, it) in items.iter().enumerate() {
                if it.cost > c {
                    continue;
                }
                let rem = c - it.cost;
                let choice = |plane: u8| Choice {
                    item: j as u32,
                    cost: it.cost as u32,
                    prev_plane: plane,
                };
                if it.property {
                    // A property item lands in plane 1 from either plane.
                    // Extending an already-satisfying chain is tried first:
                    // on ties this avoids switching earlier buckets onto the
                    // (often costlier) no-property-yet chain.
                    let from1 = self.plane1[rem].plus(it.value);
                    if from1 > best1 {
                        best1 = from1;
                        pick1 = Some(choice(1));
                    }
                    let from0 = self.plane0[rem].plus(it.value);
                    if from0 > best1 {
                        best1 = from0;
                        pick1 = Some(choice(0));
                    }
                } else {
                    let stay0 = self.plane0[rem].plus(it.value);
                    if stay0 > best0 {
                        best0 = stay0;
                        pick0 = Some(choice(0));
                    }
                    let stay1 = self.plane1[rem].plus(it.value);
                    if stay1 > best1 {
                        best1 = stay1;
                        pick1 = Some(choice(1));
                    }
                }
            }
            new0[c] = best0;
            ch0[c] = pick0;
            new1[c] = best1;
            ch1[c] = pick1;
        }
        self.plane0 = new0;
        self.plane1 = new1;
        self.choices.push([ch0, ch1]);
        Ok(())
    }

    /// Walks the recorded choices backwards from the best state at `capacity`
    /// (plane 1 when `want_property`, otherwise the better of the planes with
    /// plane 0 preferred on ties) and returns one chosen item per bucket, in
    /// bucket order.
    pub fn trace(&self, want_property: bool, capacity: usize) -> Result<Vec<TraceStep>, KnapsackError> {
        if capacity > self.capacity {
            return Err(KnapsackError::CapacityOutOfRange {
                requested: capacity,
                capacity: self.capacity,
            });
        }
        let mut plane = if want_property {
            1
        } else if self.plane0[capacity] >= self.plane1[capacity] {
            0
        } else {
            1
        };
        let start = if plane == 0 { self.plane0[capacity] } else { self.plane1[capacity] };
        if !start.is_finite() {
            return Err(KnapsackError::Infeasible(capacity));
        }
        let mut c = capacity;
        let mut steps = Vec::with_capacity(self.bucket_count());
        for bucket in (0..self.bucket_count()).rev() {
            let ch = self.choices[bucket][plane][c]
                .expect("a finite plane value always has a recorded choice");
            steps.push(TraceStep {
                bucket,
                item: ch.item as usize,
                cost: ch.cost as usize,
            });
            c -= ch.cost as usize;
            plane = ch.prev_plane as usize;
        }
        debug_assert_eq!(plane, 0, "every feasible chain starts in plane 0");
        steps.reverse();
        Ok(steps)
    }
}

/// A solved table: final value planes plus the per-bucket choices needed to
/// reconstruct an optimal selection at any capacity.
#[derive(Clone, Debug)]
pub struct KnapsackTable {
    fold: BucketFold,
    constrained: bool,
}

impl KnapsackTable {
    pub fn capacity(&self) -> usize {
        self.fold.capacity()
    }

    pub fn bucket_count(&self) -> usize {
        self.fold.bucket_count()
    }

    /// Whether the table enforces the ≥1-property-item constraint.
    pub fn is_constrained(&self) -> bool {
        self.constrained
    }

    /// Optimal value over selections of total cost ≤ `c`.
    pub fn value(&self, c: usize) -> DpValue {
        assert!(c <= self.capacity(), "capacity {} out of range", c);
        if self.constrained {
            self.fold.best_satisfying(c)
        } else {
            self.fold.best_any(c)
        }
    }

    /// All values for capacities `0..=C`.
    pub fn values(&self) -> Vec<DpValue> {
        (0..=self.capacity()).map(|c| self.value(c)).collect()
    }
}

/// Solves the plain multiple-choice knapsack: exactly one item per bucket,
/// total cost ≤ capacity, property flags ignored.
pub fn solve_mckp(instance: &CmckpInstance) -> Result<KnapsackTable, KnapsackError> {
    let mut fold = BucketFold::new(instance.capacity);
    for bucket in &instance.buckets {
        let stripped: Vec<KnapsackItem> = bucket
            .iter()
            .map(|it| KnapsackItem { property: false, ..*it })
            .collect();
        fold.push_bucket(&stripped)?;
    }
    Ok(KnapsackTable { fold, constrained: false })
}

/// Solves the constrained variant: additionally, at least one chosen item must
/// carry the property flag. Infeasible capacities report `-inf`.
pub fn solve_cmckp(instance: &CmckpInstance) -> Result<KnapsackTable, KnapsackError> {
    let mut fold = BucketFold::new(instance.capacity);
    for bucket in &instance.buckets {
        fold.push_bucket(bucket)?;
    }
    Ok(KnapsackTable { fold, constrained: true })
}

/// Returns the chosen item index per bucket for an optimal selection at
/// `capacity`, or [`KnapsackError::Infeasible`] when the table value there is
/// `-inf`.
pub fn reconstruct(table: &KnapsackTable, capacity: usize) -> Result<Vec<usize>, KnapsackError> {
    let steps = table.fold.trace(table.constrained, capacity)?;
    Ok(steps.into_iter().map(|s| s.item).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn fin(x: f64) -> DpValue {
        DpValue::finite(x)
    }

    /// Exhaustive reference: best value per capacity over the cartesian
    /// product of bucket items, optionally restricted to selections with at
    /// least one property item.
    fn enumerate_best(
        buckets: &[Vec<KnapsackItem>],
        capacity: usize,
        require_property: bool,
    ) -> Vec<DpValue> {
        let mut best = vec![DpValue::NegInf; capacity + 1];
        let mut consider = |cost: usize, value: DpValue, has: bool| {
            if cost > capacity || (require_property && !has) {
                return;
            }
            for slot in best.iter_mut().skip(cost) {
                if value > *slot {
                    *slot = value;
                }
            }
        };
        if buckets.is_empty() {
            consider(0, DpValue::ZERO, false);
            return best;
        }
        let mut idx = vec![0usize; buckets.len()];
        loop {
            let mut cost = 0usize;
            let mut value = DpValue::ZERO;
            let mut has = false;
            for (i, &j) in idx.iter().enumerate() {
                let it = buckets[i][j];
                cost += it.cost;
                value = value.plus(it.value);
                has |= it.property;
            }
            consider(cost, value, has);
            // Odometer increment over bucket item indices.
            let mut pos = 0;
            loop {
                if pos == buckets.len() {
                    return best;
                }
                idx[pos] += 1;
                if idx[pos] < buckets[pos].len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
        }
    }

    fn random_instance(rng: &mut ChaCha8Rng) -> CmckpInstance {
        let k = rng.random_range(1..=4);
        let capacity = rng.random_range(0..=12);
        let buckets = (0..k)
            .map(|_| {
                let items = rng.random_range(1..=4);
                (0..items)
                    .map(|_| KnapsackItem {
                        cost: rng.random_range(0..=6),
                        value: if rng.random_bool(0.1) {
                            DpValue::NegInf
                        } else {
                            fin(rng.random_range(0..=20) as f64)
                        },
                        property: rng.random_bool(0.5),
                    })
                    .collect()
            })
            .collect();
        CmckpInstance { buckets, capacity }
    }

    fn rescore(instance: &CmckpInstance, picks: &[usize]) -> (usize, DpValue, bool) {
        let mut cost = 0;
        let mut value = DpValue::ZERO;
        let mut has = false;
        for (i, &j) in picks.iter().enumerate() {
            let it = instance.buckets[i][j];
            cost += it.cost;
            value = value.plus(it.value);
            has |= it.property;
        }
        (cost, value, has)
    }

    #[test]
    fn neg_inf_saturates_addition() {
        assert_eq!(DpValue::NegInf.plus(fin(3.0)), DpValue::NegInf);
        assert_eq!(fin(3.0).plus(DpValue::NegInf), DpValue::NegInf);
        assert_eq!(fin(2.0).plus(fin(3.0)), fin(5.0));
        assert_eq!(DpValue::NegInf.plus_f64(100.0), DpValue::NegInf);
        assert!(DpValue::NegInf < fin(-1e300));
        assert!(fin(1.0) > fin(0.0));
        assert_eq!(DpValue::NegInf.max(fin(0.0)), fin(0.0));
    }

    #[test]
    fn single_zero_cost_bucket() {
        let inst = CmckpInstance {
            buckets: vec![vec![KnapsackItem::new(0, fin(5.0))]],
            capacity: 0,
        };
        let table = solve_mckp(&inst).unwrap();
        assert_eq!(table.values(), vec![fin(5.0)]);

        let inst = CmckpInstance {
            buckets: vec![vec![KnapsackItem::flagged(0, fin(5.0))]],
            capacity: 0,
        };
        let table = solve_cmckp(&inst).unwrap();
        assert_eq!(table.values(), vec![fin(5.0)]);
        assert_eq!(reconstruct(&table, 0).unwrap(), vec![0]);
    }

    #[test]
    fn one_affordable_upgrade() {
        let bucket = vec![KnapsackItem::new(0, fin(0.0)), KnapsackItem::new(1, fin(10.0))];
        let inst = CmckpInstance {
            buckets: vec![bucket.clone(), bucket],
            capacity: 1,
        };
        let table = solve_mckp(&inst).unwrap();
        assert_eq!(table.values(), vec![fin(0.0), fin(10.0)]);
    }

    #[test]
    fn cmckp_without_flagged_items_is_infeasible() {
        let inst = CmckpInstance {
            buckets: vec![
                vec![KnapsackItem::new(0, fin(1.0)), KnapsackItem::new(1, fin(2.0))],
                vec![KnapsackItem::new(0, fin(3.0))],
            ],
            capacity: 5,
        };
        let table = solve_cmckp(&inst).unwrap();
        assert!(table.values().iter().all(|v| *v == DpValue::NegInf));
        assert_eq!(reconstruct(&table, 5), Err(KnapsackError::Infeasible(5)));
    }

    #[test]
    fn empty_bucket_is_rejected() {
        let inst = CmckpInstance {
            buckets: vec![vec![KnapsackItem::new(0, fin(1.0))], vec![]],
            capacity: 3,
        };
        assert_eq!(solve_mckp(&inst).unwrap_err(), KnapsackError::EmptyBucket(1));
        assert_eq!(solve_cmckp(&inst).unwrap_err(), KnapsackError::EmptyBucket(1));
    }

    #[test]
    fn zero_buckets_mean_zero_value() {
        let inst = CmckpInstance { buckets: vec![], capacity: 4 };
        let table = solve_mckp(&inst).unwrap();
        assert!(table.values().iter().all(|v| *v == fin(0.0)));
        let table = solve_cmckp(&inst).unwrap();
        assert!(table.values().iter().all(|v| *v == DpValue::NegInf));
    }

    #[test]
    fn matches_enumeration_on_random_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for _ in 0..300 {
            let inst = random_instance(&mut rng);
            let mckp = solve_mckp(&inst).unwrap();
            let cmckp = solve_cmckp(&inst).unwrap();
            let plain = enumerate_best(&inst.buckets, inst.capacity, false);
            let constrained = enumerate_best(&inst.buckets, inst.capacity, true);
            assert_eq!(mckp.values(), plain, "MCKP vs enumeration on {inst:?}");
            assert_eq!(cmckp.values(), constrained, "CMCKP vs enumeration on {inst:?}");
            for c in 0..=inst.capacity {
                // The constrained optimum can never beat the unconstrained one.
                assert!(cmckp.value(c) <= mckp.value(c));
                if c > 0 {
                    // Values are monotone in capacity.
                    assert!(mckp.value(c) >= mckp.value(c - 1));
                    assert!(cmckp.value(c) >= cmckp.value(c - 1));
                }
            }
        }
    }

    #[test]
    fn all_flagged_cmckp_equals_mckp() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let mut inst = random_instance(&mut rng);
            for bucket in &mut inst.buckets {
                for it in bucket {
                    it.property = true;
                }
            }
            let mckp = solve_mckp(&inst).unwrap();
            let cmckp = solve_cmckp(&inst).unwrap();
            assert_eq!(mckp.values(), cmckp.values());
        }
    }

    #[test]
    fn reconstruction_rescore_matches_table() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..200 {
            let inst = random_instance(&mut rng);
            for (table, constrained) in
                [(solve_mckp(&inst).unwrap(), false), (solve_cmckp(&inst).unwrap(), true)]
            {
                for c in 0..=inst.capacity {
                    match reconstruct(&table, c) {
                        Ok(picks) => {
                            assert_eq!(picks.len(), inst.buckets.len());
                            let (cost, value, has) = rescore(&inst, &picks);
                            assert!(cost <= c, "selection must respect the capacity");
                            assert!(!constrained || has, "property constraint violated");
                            assert_eq!(value, table.value(c));
                        }
                        Err(KnapsackError::Infeasible(_)) => {
                            assert_eq!(table.value(c), DpValue::NegInf);
                        }
                        Err(e) => panic!("unexpected error {e}"),
                    }
                }
            }
        }
    }

    #[test]
    fn ties_prefer_the_lowest_item_index() {
        let inst = CmckpInstance {
            buckets: vec![vec![
                KnapsackItem::new(1, fin(4.0)),
                KnapsackItem::new(1, fin(4.0)),
                KnapsackItem::new(0, fin(4.0)),
            ]],
            capacity: 2,
        };
        let table = solve_mckp(&inst).unwrap();
        // Item 0 ties with items 1 and 2 at capacity 2; the scan keeps item 0.
        assert_eq!(reconstruct(&table, 2).unwrap(), vec![0]);
    }

    #[test]
    fn unusable_neg_inf_items_are_never_chosen() {
        let inst = CmckpInstance {
            buckets: vec![vec![
                KnapsackItem::new(0, DpValue::NegInf),
                KnapsackItem::new(2, fin(1.0)),
            ]],
            capacity: 2,
        };
        let table = solve_mckp(&inst).unwrap();
        assert_eq!(table.values(), vec![DpValue::NegInf, DpValue::NegInf, fin(1.0)]);
        assert_eq!(reconstruct(&table, 2).unwrap(), vec![1]);
        assert_eq!(reconstruct(&table, 1), Err(KnapsackError::Infeasible(1)));
    }
}
