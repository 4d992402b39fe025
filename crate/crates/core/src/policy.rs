//! Capacity-oblivious packing: indispensable items, the start-item list and the
//! robust policy that is never worse than AGreedy for any capacity.
//!
//! The policy only learns the capacity through [`FitQuery::fits`], one attempt at
//! a time. An item that fits is packed irrevocably; an item that does not fit is
//! discarded together with every item at least as large.

use serde::Serialize;

use crate::greedy::{densest, greedy_sequence, GreedyChoice, Solution};
use crate::submodular::{Instance, ItemSet};

/// Outcome of the indispensability test for one item.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndispensabilityResult {
    pub indispensable: bool,
    /// Greedy prefix `G_k` in front of the item at capacity `s(item)`, in greedy
    /// order. Empty unless indispensable.
    pub greedy_prefix: Vec<usize>,
}

impl IndispensabilityResult {
    fn negative() -> Self {
        IndispensabilityResult {
            indispensable: false,
            greedy_prefix: Vec::new(),
        }
    }

    pub fn prefix_set(&self) -> ItemSet {
        self.greedy_prefix.iter().copied().collect()
    }
}

/// Half-open capacity range `[gamma1, gamma2)` on which AGreedy returns the item.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct IndispensabilityInterval {
    pub gamma1: u64,
    pub gamma2: u64,
}

impl IndispensabilityInterval {
    pub fn contains(&self, gamma: u64) -> bool {
        (self.gamma1..self.gamma2).contains(&gamma)
    }
}

/// Whether AGreedy at capacity `s(item)` returns `{item}` instead of `G_k`.
///
/// Builds the greedy order over items no larger than `item`. The item is
/// indispensable iff it is the first item that overflows, it is not at position
/// one, and its marginal on the packed prefix strictly exceeds the prefix value.
/// An order that runs out of items before `item` overflows gives `false`.
pub fn is_indispensable(inst: &Instance, item: usize) -> IndispensabilityResult {
    let run = greedy_sequence(inst, inst.size(item));
    if run.k >= 1
        && run.overflow_item == Some(item)
        && run.agreedy_choice() == GreedyChoice::Overflow(item)
    {
        IndispensabilityResult {
            indispensable: true,
            greedy_prefix: run.order[..run.k].to_vec(),
        }
    } else {
        IndispensabilityResult::negative()
    }
}

/// Distinct item sizes strictly between `lo` and `hi`, ascending.
///
/// The greedy order for capacity `γ` depends only on `N_γ`, which changes only
/// at item sizes, so these are the only capacities where the order can change.
pub(crate) fn sizes_between(inst: &Instance, lo: u64, hi: u64) -> Vec<u64> {
    let mut sizes: Vec<u64> = inst
        .items()
        .iter()
        .map(|it| it.size)
        .filter(|&s| s > lo && s < hi)
        .collect();
    sizes.sort_unstable();
    sizes.dedup();
    sizes
}

/// Smallest capacity in `(from, below)` at which the first `len` entries of the
/// greedy order differ from `reference`.
pub(crate) fn first_order_change(
    inst: &Instance,
    reference: &[usize],
    from: u64,
    below: u64,
) -> Option<u64> {
    sizes_between(inst, from, below).into_iter().find(|&gamma| {
        let run = greedy_sequence(inst, gamma);
        run.order.get(..reference.len()) != Some(reference)
    })
}

/// Capacities for which `item` is indispensable, or `None` if it never is.
///
/// `γ1 = s(item)`; `γ2` is the smaller of `s(G_k) + s(item)` and the first
/// capacity above `γ1` where the leading `k + 1` greedy entries change.
pub fn indispensability_interval(inst: &Instance, item: usize) -> Option<IndispensabilityInterval> {
    let res = is_indispensable(inst, item);
    if !res.indispensable {
        return None;
    }
    let gamma1 = inst.size(item);
    let limit = gamma1 + inst.size_of(res.prefix_set());
    let mut reference = res.greedy_prefix.clone();
    reference.push(item);
    let gamma2 = first_order_change(inst, &reference, gamma1, limit).unwrap_or(limit);
    Some(IndispensabilityInterval { gamma1, gamma2 })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StartReason {
    Indispensable,
    FirstGreedy,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StartEntry {
    pub item: usize,
    pub reason: StartReason,
    /// Greedy prefix to try after this entry is packed (empty for first-greedy entries).
    pub prefix: Vec<usize>,
}

/// Candidate opening items, smallest size first, sizes strictly increasing.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct StartList {
    pub entries: Vec<StartEntry>,
}

impl StartList {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Builds the start-item list.
///
/// Items are scanned by ascending size (ties by id). Indispensable items are
/// always added; an item that is first in the greedy order for its own size
/// is added only once the list is nonempty.
pub fn start_item_list(inst: &Instance) -> StartList {
    let mut by_size: Vec<usize> = (0..inst.n()).collect();
    by_size.sort_by_key(|&i| (inst.size(i), i));

    let mut list = StartList::default();
    for i in by_size {
        let size = inst.size(i);
        if list
            .entries
            .last()
            .is_some_and(|e| inst.size(e.item) == size)
        {
            continue;
        }
        let res = is_indispensable(inst, i);
        if res.indispensable {
            list.entries.push(StartEntry {
                item: i,
                reason: StartReason::Indispensable,
                prefix: res.greedy_prefix,
            });
        } else if !list.is_empty() && greedy_sequence(inst, size).order.first() == Some(&i) {
            list.entries.push(StartEntry {
                item: i,
                reason: StartReason::FirstGreedy,
                prefix: vec![],
            });
        }
    }
    list
}

/// The only channel through which a policy learns about the capacity.
pub trait FitQuery {
    /// Whether a knapsack holding `load` total size is within capacity.
    fn fits(&mut self, load: u64) -> bool;
}

/// Answers fit queries against a hidden capacity and counts them.
#[derive(Debug)]
pub struct FitOracle {
    capacity: u64,
    queries: usize,
}

impl FitOracle {
    pub fn query_count(&self) -> usize {
        self.queries
    }
}

impl FitQuery for FitOracle {
    fn fits(&mut self, load: u64) -> bool {
        self.queries += 1;
        load <= self.capacity
    }
}

/// # Panics
///
/// If `gamma` is zero.
pub fn make_fit_oracle(gamma: u64) -> FitOracle {
    assert!(gamma >= 1, "capacity must be at least 1");
    FitOracle {
        capacity: gamma,
        queries: 0,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    StartItem,
    GreedyPrefix,
    MainGreedy,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Attempt {
    pub item: usize,
    pub fitted: bool,
    pub phase: Phase,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PolicyTrace {
    pub attempts: Vec<Attempt>,
    pub packed: Solution,
    pub query_count: usize,
}

impl PolicyTrace {
    /// Fit answers in query order.
    pub fn answers(&self) -> Vec<bool> {
        self.attempts.iter().map(|a| a.fitted).collect()
    }

    /// Id-based form for serialization.
    pub fn to_json(&self, inst: &Instance) -> serde_json::Value {
        serde_json::json!({
            "attempts": self.attempts.iter().map(|a| serde_json::json!({
                "item": inst.id(a.item),
                "fitted": a.fitted,
                "phase": a.phase,
            })).collect::<Vec<_>>(),
            "packed": self.packed.ids(inst),
            "value": self.packed.value,
            "total_size": self.packed.total_size,
            "query_count": self.query_count,
        })
    }
}

/// The robust policy for one instance, with its start list precomputed.
#[derive(Clone, Debug)]
pub struct RobustPolicy<'a> {
    inst: &'a Instance,
    start: StartList,
}

impl<'a> RobustPolicy<'a> {
    pub fn new(inst: &'a Instance) -> Self {
        RobustPolicy {
            inst,
            start: start_item_list(inst),
        }
    }

    pub fn start_list(&self) -> &StartList {
        &self.start
    }

    /// Runs the policy against a capacity it can only probe through `oracle`.
    pub fn execute<Q: FitQuery>(&self, oracle: &mut Q) -> PolicyTrace {
        let inst = self.inst;
        let mut pool = inst.all();
        let mut packed = ItemSet::EMPTY;
        let mut load = 0u64;
        let mut attempts = Vec::new();
        let below = |pool: ItemSet, size: u64| -> ItemSet {
            pool.iter().filter(|&i| inst.size(i) < size).collect()
        };

        // Largest start entry that fits opens the packing.
        let mut prefix: &[usize] = &[];
        for entry in self.start.entries.iter().rev() {
            let size = inst.size(entry.item);
            let fitted = oracle.fits(load + size);
            attempts.push(Attempt {
                item: entry.item,
                fitted,
                phase: Phase::StartItem,
            });
            if fitted {
                packed.insert(entry.item);
                load += size;
                pool.remove(entry.item);
                prefix = &entry.prefix;
                break;
            }
            pool = below(pool, size);
        }

        // The greedy prefix that preceded the opening item at its own capacity.
        for &i in prefix {
            if !pool.contains(i) {
                continue;
            }
            let fitted = oracle.fits(load + inst.size(i));
            attempts.push(Attempt {
                item: i,
                fitted,
                phase: Phase::GreedyPrefix,
            });
            if fitted {
                packed.insert(i);
                load += inst.size(i);
            }
            pool.remove(i);
        }

        // Adaptive greedy over what is left.
        while let Some((i, _)) = densest(inst, packed, pool) {
            let size = inst.size(i);
            let fitted = oracle.fits(load + size);
            attempts.push(Attempt {
                item: i,
                fitted,
                phase: Phase::MainGreedy,
            });
            if fitted {
                packed.insert(i);
                load += size;
                pool.remove(i);
            } else {
                pool = below(pool, size);
            }
        }

        PolicyTrace {
            query_count: attempts.len(),
            attempts,
            packed: Solution::new(inst, packed),
        }
    }
}

/// Builds the policy for `inst` and runs it once against `oracle`.
pub fn execute_policy<Q: FitQuery>(inst: &Instance, oracle: &mut Q) -> PolicyTrace {
    RobustPolicy::new(inst).execute(oracle)
}
