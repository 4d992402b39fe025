//! Greedy ordering and the two known-capacity algorithms, MGreedy and AGreedy.
//!
//! Both algorithms discard items larger than the capacity, order the rest by
//! marginal density and keep the longest fitting prefix `G_k`. They differ only
//! in when they return the first overflowing item `i_{k+1}` instead.

use serde::Serialize;

use crate::numeric::definitely_greater;
use crate::submodular::{Instance, ItemSet};

/// Greedy order of every item that fits an empty knapsack of the given capacity.
///
/// The order is continued past the first overflowing item, so `order[..k]` is the
/// packed prefix `G_k` and `order[k]`, when present, is `i_{k+1}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GreedyRun {
    pub capacity: u64,
    /// Items with size at most the capacity.
    pub eligible: ItemSet,
    pub order: Vec<usize>,
    /// `δ_j = f(G_j) − f(G_{j−1})`.
    pub marginals: Vec<f64>,
    /// `f(G_j)`.
    pub prefix_values: Vec<f64>,
    /// `s(G_j)`.
    pub prefix_sizes: Vec<u64>,
    /// Largest `j` with `s(G_j) ≤ capacity`.
    pub k: usize,
    pub overflow_item: Option<usize>,
}

impl GreedyRun {
    /// `G_j`, the first `j` items of the order.
    pub fn prefix(&self, j: usize) -> ItemSet {
        self.order[..j].iter().copied().collect()
    }

    /// `f(G_j)`, with `f(G_0) = 0`.
    pub fn prefix_value(&self, j: usize) -> f64 {
        if j == 0 {
            0.0
        } else {
            self.prefix_values[j - 1]
        }
    }

    /// `s(G_j)`, with `s(G_0) = 0`.
    pub fn prefix_size(&self, j: usize) -> u64 {
        if j == 0 {
            0
        } else {
            self.prefix_sizes[j - 1]
        }
    }

    /// The fitting prefix `G_k`.
    pub fn packed(&self) -> ItemSet {
        self.prefix(self.k)
    }

    /// Position (0-based) of an item in the order.
    pub fn position(&self, item: usize) -> Option<usize> {
        self.order.iter().position(|&i| i == item)
    }

    /// Which solution AGreedy returns for this run.
    pub fn agreedy_choice(&self) -> GreedyChoice {
        match self.overflow_item {
            Some(o) if definitely_greater(self.marginals[self.k], self.prefix_value(self.k)) => {
                GreedyChoice::Overflow(o)
            }
            _ => GreedyChoice::Prefix,
        }
    }

    /// Which solution MGreedy returns for this run.
    pub fn mgreedy_choice(&self, inst: &Instance) -> GreedyChoice {
        match self.overflow_item {
            Some(o) if definitely_greater(inst.singleton_value(o), self.prefix_value(self.k)) => {
                GreedyChoice::Overflow(o)
            }
            _ => GreedyChoice::Prefix,
        }
    }
}

/// Return value of the known-capacity algorithms: `G_k` or `{i_{k+1}}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "choice", content = "item")]
pub enum GreedyChoice {
    Prefix,
    Overflow(usize),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Solution {
    pub items: ItemSet,
    pub value: f64,
    pub total_size: u64,
}

impl Solution {
    pub fn new(inst: &Instance, items: ItemSet) -> Self {
        Solution {
            items,
            value: inst.value(items),
            total_size: inst.size_of(items),
        }
    }

    pub fn ids<'a>(&self, inst: &'a Instance) -> Vec<&'a str> {
        inst.ids_of(self.items)
    }
}

/// Picks the item of `pool` with the largest marginal density relative to `base`.
///
/// Densities within tolerance of each other count as tied and the lowest index
/// (smallest id) wins.
pub(crate) fn densest(inst: &Instance, base: ItemSet, pool: ItemSet) -> Option<(usize, f64)> {
    let f_base = inst.value(base);
    let mut best: Option<(usize, f64, f64)> = None;
    for i in pool.iter() {
        let gain = inst.value(base.with(i)) - f_base;
        let density = gain / inst.size(i) as f64;
        match best {
            Some((_, d, _)) if !definitely_greater(density, d) => {}
            _ => best = Some((i, density, gain)),
        }
    }
    best.map(|(i, _, gain)| (i, gain))
}

/// Greedy sequence over `N_γ`, continued past the first overflow.
///
/// # Panics
///
/// If `gamma` is zero.
pub fn greedy_sequence(inst: &Instance, gamma: u64) -> GreedyRun {
    assert!(gamma >= 1, "capacity must be at least 1");
    let eligible: ItemSet = (0..inst.n()).filter(|&i| inst.size(i) <= gamma).collect();
    let mut remaining = eligible;
    let mut set = ItemSet::EMPTY;
    let mut run = GreedyRun {
        capacity: gamma,
        eligible,
        order: Vec::with_capacity(eligible.len()),
        marginals: Vec::with_capacity(eligible.len()),
        prefix_values: Vec::with_capacity(eligible.len()),
        prefix_sizes: Vec::with_capacity(eligible.len()),
        k: 0,
        overflow_item: None,
    };
    let mut size = 0;
    while let Some((i, _)) = densest(inst, set, remaining) {
        let before = inst.value(set);
        set.insert(i);
        remaining.remove(i);
        let after = inst.value(set);
        size += inst.size(i);
        run.order.push(i);
        run.marginals.push(after - before);
        run.prefix_values.push(after);
        run.prefix_sizes.push(size);
    }
    run.k = run.prefix_sizes.iter().take_while(|&&s| s <= gamma).count();
    run.overflow_item = run.order.get(run.k).copied();
    run
}

fn resolve(inst: &Instance, run: &GreedyRun, choice: GreedyChoice) -> Solution {
    match choice {
        GreedyChoice::Prefix => Solution::new(inst, run.packed()),
        GreedyChoice::Overflow(o) => Solution::new(inst, ItemSet::singleton(o)),
    }
}

/// MGreedy: `G_k`, or `{i_{k+1}}` when its value strictly exceeds `f(G_k)`.
pub fn mgreedy(inst: &Instance, gamma: u64) -> Solution {
    let run = greedy_sequence(inst, gamma);
    resolve(inst, &run, run.mgreedy_choice(inst))
}

/// AGreedy: `G_k`, or `{i_{k+1}}` when its marginal on `G_k` strictly exceeds `f(G_k)`.
pub fn agreedy(inst: &Instance, gamma: u64) -> Solution {
    let run = greedy_sequence(inst, gamma);
    resolve(inst, &run, run.agreedy_choice())
}
