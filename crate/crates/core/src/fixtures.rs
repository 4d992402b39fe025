//! Small hand-checkable instances used across tests, docs and the CLI.

use crate::submodular::{make_coverage_oracle, make_modular_oracle, Instance, Item};

/// Modular: `a` (size 1, weight 1.0), `b` (size 2, weight 1.9).
///
/// `b` is indispensable with interval `[2, 3)`.
pub fn ex1() -> Instance {
    Instance::new(
        vec![Item::new("a", 1), Item::new("b", 2)],
        make_modular_oracle([("a", 1.0), ("b", 1.9)]).expect("valid weights"),
    )
    .expect("valid fixture")
}

/// EX1 plus a heavy item `c` (size 3, weight 10.0).
pub fn ex1_with_heavy() -> Instance {
    Instance::new(
        vec![Item::new("a", 1), Item::new("b", 2), Item::new("c", 3)],
        make_modular_oracle([("a", 1.0), ("b", 1.9), ("c", 10.0)]).expect("valid weights"),
    )
    .expect("valid fixture")
}

/// Coverage with curvature 1: item `1` (size 1) covers `{x}`, item `2` (size 3)
/// covers `{x, y}`.
pub fn ex2() -> Instance {
    Instance::new(
        vec![Item::new("1", 1), Item::new("2", 3)],
        make_coverage_oracle(
            [("x", 1.0), ("y", 1.0)],
            [("1", vec!["x"]), ("2", vec!["x", "y"])],
        )
        .expect("valid coverage"),
    )
    .expect("valid fixture")
}

/// Coverage where MGreedy and AGreedy disagree at capacity 2:
/// `a` (size 1) covers `{x}`, `b` (size 2) covers `{x, y}`, weights x = 1.0, y = 0.9.
pub fn ex3() -> Instance {
    Instance::new(
        vec![Item::new("a", 1), Item::new("b", 2)],
        make_coverage_oracle(
            [("x", 1.0), ("y", 0.9)],
            [("a", vec!["x"]), ("b", vec!["x", "y"])],
        )
        .expect("valid coverage"),
    )
    .expect("valid fixture")
}
