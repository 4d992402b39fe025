//! Robust policies for monotone submodular maximization when the knapsack
//! capacity is unknown.
//!
//! A policy fixes an order of packing attempts without knowing the capacity; an
//! attempt either fits (the item stays packed) or overflows (the item is
//! discarded). The crate provides the greedy baselines, the robust policy, an
//! exact evaluator for small instances, and the closed-form robustness bound.

pub mod bounds;
pub mod error;
pub mod exact;
pub mod fixtures;
pub mod generate;
pub mod greedy;
pub mod numeric;
pub mod policy;
pub mod submodular;
pub mod verify;

pub use error::{Error, Result};
pub use exact::{brute_force_opt, robustness_sweep, SweepReport};
pub use generate::{generate, GeneratorKind, GeneratorSpec};
pub use greedy::{agreedy, greedy_sequence, mgreedy, GreedyRun, Solution};
pub use policy::{
    execute_policy, indispensability_interval, is_indispensable, make_fit_oracle, start_item_list,
    FitOracle, FitQuery, PolicyTrace, RobustPolicy,
};
pub use submodular::{Instance, Item, ItemSet, ValueOracle};
