use rand::{RngExt, SeedableRng};
use rand_pcg::Pcg64;
use serde::Serialize;

use super::{Instance, ItemSet};
use crate::numeric::TOL;

/// Largest instance for which the pairwise submodularity condition is enumerated.
pub const EXHAUSTIVE_VALIDATION_MAX: usize = 12;

const SAMPLED_TRIALS: usize = 200_000;
const SAMPLED_SEED: u64 = 0x0005_eed0_f5ab;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum ValidationMode {
    Exhaustive,
    Sampled { trials: usize, seed: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    Normalization,
    Monotonicity,
    Submodularity,
}

/// Witness of a failed structural condition.
///
/// `slack` is the amount by which the inequality fails (positive).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub set: Vec<String>,
    pub items: Vec<String>,
    pub slack: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidationReport {
    pub normalized: bool,
    pub monotone: bool,
    pub submodular: bool,
    pub mode: ValidationMode,
    pub first_violation: Option<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.normalized && self.monotone && self.submodular
    }

    pub fn describe(&self, _inst: &Instance) -> String {
        match &self.first_violation {
            None => "oracle is normalized, monotone and submodular".into(),
            Some(v) => {
                let a = v.set.join(",");
                match v.kind {
                    ViolationKind::Normalization => {
                        format!("f(∅) deviates from 0 by {}", v.slack)
                    }
                    ViolationKind::Monotonicity => format!(
                        "not monotone: f({{{a}}} ∪ {{{}}}) < f({{{a}}}) by {}",
                        v.items[0], v.slack
                    ),
                    ViolationKind::Submodularity => format!(
                        "not submodular: f(A∪{{{u1}}}) + f(A∪{{{u2}}}) < f(A∪{{{u1},{u2}}}) + f(A) \
                         by {s} with A = {{{a}}}",
                        u1 = v.items[0],
                        u2 = v.items[1],
                        s = v.slack
                    ),
                }
            }
        }
    }
}

fn violated(lhs: f64, rhs: f64) -> Option<f64> {
    let scale = 1.0_f64.max(lhs.abs()).max(rhs.abs());
    (lhs - rhs < -TOL * scale).then_some(rhs - lhs)
}

struct Checker<'a> {
    inst: &'a Instance,
    report: ValidationReport,
}

impl Checker<'_> {
    fn note(&mut self, kind: ViolationKind, set: ItemSet, items: &[usize], slack: f64) {
        match kind {
            ViolationKind::Normalization => self.report.normalized = false,
            ViolationKind::Monotonicity => self.report.monotone = false,
            ViolationKind::Submodularity => self.report.submodular = false,
        }
        if self.report.first_violation.is_none() {
            self.report.first_violation = Some(Violation {
                kind,
                set: self
                    .inst
                    .ids_of(set)
                    .into_iter()
                    .map(String::from)
                    .collect(),
                items: items.iter().map(|&i| self.inst.id(i).to_string()).collect(),
                slack,
            });
        }
    }

    fn check_monotone(&mut self, a: ItemSet, j: usize) {
        let (lo, hi) = (self.inst.value(a), self.inst.value(a.with(j)));
        if let Some(s) = violated(hi, lo) {
            self.note(ViolationKind::Monotonicity, a, &[j], s);
        }
    }

    // f(A ∪ {u1}) + f(A ∪ {u2}) ≥ f(A ∪ {u1, u2}) + f(A)
    fn check_pair(&mut self, a: ItemSet, u1: usize, u2: usize) {
        let f = |s: ItemSet| self.inst.value(s);
        let lhs = f(a.with(u1)) + f(a.with(u2));
        let rhs = f(a.with(u1).with(u2)) + f(a);
        if let Some(s) = violated(lhs, rhs) {
            self.note(ViolationKind::Submodularity, a, &[u1, u2], s);
        }
    }
}

/// Checks normalization, monotonicity and the pairwise submodularity condition.
///
/// Enumerates every `A ⊂ N` and every unordered pair outside `A` when
/// `n ≤ 12`; larger instances are checked on a fixed-seed random sample.
pub fn validate_oracle(inst: &Instance) -> ValidationReport {
    let mode = if inst.n() <= EXHAUSTIVE_VALIDATION_MAX {
        ValidationMode::Exhaustive
    } else {
        ValidationMode::Sampled {
            trials: SAMPLED_TRIALS,
            seed: SAMPLED_SEED,
        }
    };
    validate_oracle_with(inst, mode)
}

pub fn validate_oracle_with(inst: &Instance, mode: ValidationMode) -> ValidationReport {
    let mut ck = Checker {
        inst,
        report: ValidationReport {
            normalized: true,
            monotone: true,
            submodular: true,
            mode,
            first_violation: None,
        },
    };
    let empty = inst.value(ItemSet::EMPTY);
    if empty.abs() > TOL {
        ck.note(
            ViolationKind::Normalization,
            ItemSet::EMPTY,
            &[],
            empty.abs(),
        );
    }
    let n = inst.n();
    match mode {
        ValidationMode::Exhaustive => {
            for bits in 0..(1u64 << n) {
                let a = ItemSet::from_bits(bits);
                let outside: Vec<usize> = (0..n).filter(|&i| !a.contains(i)).collect();
                for (x, &u1) in outside.iter().enumerate() {
                    ck.check_monotone(a, u1);
                    for &u2 in &outside[x + 1..] {
                        ck.check_pair(a, u1, u2);
                    }
                }
            }
        }
        ValidationMode::Sampled { trials, seed } => {
            if n >= 2 {
                let mut rng = Pcg64::seed_from_u64(seed);
                for _ in 0..trials {
                    let u1 = rng.random_range(0..n);
                    let mut u2 = rng.random_range(0..n - 1);
                    if u2 >= u1 {
                        u2 += 1;
                    }
                    let mut a = ItemSet::from_bits(rng.random::<u64>() & ItemSet::full(n).bits());
                    a.remove(u1);
                    a.remove(u2);
                    ck.check_monotone(a, u1);
                    ck.check_pair(a, u1, u2);
                }
            }
        }
    }
    ck.report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::submodular::{make_modular_oracle, make_table_oracle, Item};

    #[test]
    fn modular_five_items_valid() {
        let ids = ["a", "b", "c", "d", "e"];
        let inst = Instance::new(
            ids.iter().map(|&i| Item::new(i, 1)).collect(),
            make_modular_oracle(ids.iter().map(|&i| (i, 1.5))).unwrap(),
        )
        .unwrap();
        let r = validate_oracle(&inst);
        assert!(r.is_valid());
        assert_eq!(r.mode, ValidationMode::Exhaustive);
    }

    #[test]
    fn coverage_fixture_valid() {
        assert!(validate_oracle(&fixtures::ex2()).is_valid());
        assert!(validate_oracle(&fixtures::ex3()).is_valid());
    }

    #[test]
    fn supermodular_pair_witness() {
        let t = make_table_oracle([("", 0.0), ("a", 1.0), ("b", 1.0), ("a,b", 3.0)]).unwrap();
        let inst = Instance::new_unchecked(vec![Item::new("a", 1), Item::new("b", 1)], t).unwrap();
        let r = validate_oracle(&inst);
        assert!(r.normalized && r.monotone && !r.submodular);
        let v = r.first_violation.unwrap();
        assert_eq!(v.kind, ViolationKind::Submodularity);
        assert!(v.set.is_empty());
        assert_eq!(v.items, vec!["a", "b"]);
        assert!((v.slack - 1.0).abs() < 1e-12);
    }

    #[test]
    fn non_monotone_detected() {
        let t = make_table_oracle([("", 0.0), ("a", 2.0), ("b", 1.0), ("a,b", 1.5)]).unwrap();
        let inst = Instance::new_unchecked(vec![Item::new("a", 1), Item::new("b", 1)], t).unwrap();
        let r = validate_oracle(&inst);
        assert!(!r.monotone);
    }

    #[test]
    fn sampled_mode_for_large_instances() {
        let ids: Vec<String> = (0..14).map(|i| format!("i{i:02}")).collect();
        let inst = Instance::new(
            ids.iter().map(|i| Item::new(i.clone(), 1)).collect(),
            make_modular_oracle(ids.iter().map(|i| (i.clone(), 1.0))).unwrap(),
        )
        .unwrap();
        let r = validate_oracle(&inst);
        assert!(r.is_valid());
        assert!(matches!(r.mode, ValidationMode::Sampled { .. }));
    }
}
