//! Checkers for the inequalities the robustness guarantee rests on.
//!
//! Every checker records a normalized slack `(lhs − rhs) / max(1, |lhs|, |rhs|)`
//! for each inequality `lhs ≥ rhs` it evaluates. A trial fails when its slack
//! drops below `−1e-9`.

use rand::{RngExt, SeedableRng};
use rand_pcg::Pcg64;
use serde::Serialize;

use super::{guard, ExactSolver};
use crate::error::Result;
use crate::greedy::{greedy_sequence, GreedyChoice, GreedyRun};
use crate::numeric::TOL;
use crate::policy::{first_order_change, indispensability_interval, is_indispensable};
use crate::submodular::{Instance, ItemSet};

/// Largest instance for which the curvature inequalities are enumerated
/// rather than sampled.
pub const EXHAUSTIVE_CURVATURE_MAX: usize = 8;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Failure {
    pub witness: String,
    pub slack: f64,
}

/// Optimum bookkeeping for the per-step greedy bounds at one capacity.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IncrementData {
    pub gamma: u64,
    /// Ids of the (tie-broken) optimum the indicators refer to.
    pub opt: Vec<String>,
    /// `χ_j`: whether the `j`-th greedy item is in the optimum.
    pub chi: Vec<bool>,
    /// `s*_j = s(OPT ∩ G_j)`.
    pub s_star: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub trials: usize,
    pub failures: Vec<Failure>,
    pub worst_slack: f64,
    /// Cases excluded by a precondition, with the reason.
    pub skipped: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub increments: Vec<IncrementData>,
}

const MAX_RECORDED_FAILURES: usize = 50;

impl CheckReport {
    pub fn new(name: impl Into<String>) -> Self {
        CheckReport {
            name: name.into(),
            trials: 0,
            failures: Vec::new(),
            worst_slack: 0.0,
            skipped: Vec::new(),
            increments: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn record_slack(&mut self, slack: f64, witness: impl FnOnce() -> String) {
        if self.trials == 0 || slack < self.worst_slack {
            self.worst_slack = slack;
        }
        self.trials += 1;
        if slack < -TOL {
            if self.failures.len() < MAX_RECORDED_FAILURES {
                self.failures.push(Failure {
                    witness: witness(),
                    slack,
                });
            } else if let Some(last) = self.failures.last_mut() {
                // keep the count honest without unbounded growth
                last.witness = format!("{} (+ more failures)", last.witness);
            }
        }
    }

    /// Records `lhs ≥ rhs`.
    pub fn check_ge(&mut self, lhs: f64, rhs: f64, witness: impl FnOnce() -> String) {
        let scale = 1.0_f64.max(lhs.abs()).max(rhs.abs());
        self.record_slack((lhs - rhs) / scale, witness);
    }

    /// Records a boolean condition (slack 0 when it holds, −1 otherwise).
    pub fn check(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.record_slack(if ok { 0.0 } else { -1.0 }, witness);
    }

    pub fn skip(&mut self, why: String) {
        self.skipped.push(why);
    }

    /// Folds another report of the same check into this one.
    pub fn absorb(&mut self, other: CheckReport) {
        if other.trials > 0 && (self.trials == 0 || other.worst_slack < self.worst_slack) {
            self.worst_slack = other.worst_slack;
        }
        self.trials += other.trials;
        let room = MAX_RECORDED_FAILURES.saturating_sub(self.failures.len());
        let overflow = other.failures.len() > room;
        self.failures
            .extend(other.failures.into_iter().take(room.max(1)));
        if overflow {
            if let Some(last) = self.failures.last_mut() {
                last.witness = format!("{} (+ more failures)", last.witness);
            }
        }
        self.skipped.extend(other.skipped);
        self.increments.extend(other.increments);
    }
}

fn show(inst: &Instance, set: ItemSet) -> String {
    format!("{{{}}}", inst.ids_of(set).join(","))
}

/// `(1/c)(1 − e^{−cz})`, continued by `z` at `c → 0`.
pub(crate) fn curved_fraction(c: f64, z: f64) -> f64 {
    if c <= TOL {
        z
    } else {
        -(-c * z).exp_m1() / c
    }
}

/// Instance data shared by the capacity-wise checks: the exhaustive optimum
/// table and the curvature.
pub struct ExactContext<'a> {
    pub inst: &'a Instance,
    pub solver: ExactSolver,
    pub curvature: f64,
}

impl<'a> ExactContext<'a> {
    pub fn new(inst: &'a Instance) -> Result<Self> {
        Ok(ExactContext {
            inst,
            solver: ExactSolver::new(inst)?,
            curvature: inst.curvature()?,
        })
    }

    /// Greedy prefixes against the curvature-dependent fraction of OPT:
    /// `f(G_j) ≥ (1/c)(1 − exp(−c s(G_j)/γ)) f(OPT)` for `j ≤ k`.
    pub fn prefix_bound(&self, gamma: u64) -> CheckReport {
        let inst = self.inst;
        let c = self.curvature;
        let opt = self.solver.opt(inst, gamma).value;
        let run = greedy_sequence(inst, gamma);
        let mut report = CheckReport::new("greedy_prefix_bound");
        for j in 1..=run.k {
            let z = run.prefix_size(j) as f64 / gamma as f64;
            let bound = curved_fraction(c, z) * opt;
            report.check_ge(run.prefix_value(j), bound, || {
                format!(
                    "gamma={gamma} j={j} f(G_j)={} bound={bound} (c={c}, s(G_j)={})",
                    run.prefix_value(j),
                    run.prefix_size(j)
                )
            });
        }
        report
    }

    /// Both per-step lower bounds on the greedy increments, for `j ≤ k + 1`.
    ///
    /// Capacities where the fitting prefix equals the optimum set are skipped.
    pub fn increment_bounds(&self, gamma: u64) -> CheckReport {
        let inst = self.inst;
        let c = self.curvature;
        let opt = self.solver.opt(inst, gamma);
        let run = greedy_sequence(inst, gamma);
        let mut report = CheckReport::new("greedy_increment_bounds");
        if run.packed() == opt.items {
            report.skip(format!(
                "gamma={gamma}: G_k equals OPT {}",
                show(inst, opt.items)
            ));
            return report;
        }
        let last = if run.overflow_item.is_some() {
            run.k + 1
        } else {
            run.k
        };
        let chi: Vec<bool> = run.order[..last]
            .iter()
            .map(|&i| opt.items.contains(i))
            .collect();
        let mut s_star = Vec::with_capacity(last);
        let mut acc = 0;
        for (m, &in_opt) in chi.iter().enumerate() {
            if in_opt {
                acc += inst.size(run.order[m]);
            }
            s_star.push(acc);
        }
        let g = gamma as f64;
        let f_opt = opt.value;
        for j in 1..=last {
            let s_j = inst.size(run.order[j - 1]) as f64;
            let delta_j = run.marginals[j - 1];
            let gap = f_opt - run.prefix_value(j - 1);
            let chi_gap = f_opt
                - (0..j - 1)
                    .filter(|&m| chi[m])
                    .map(|m| run.marginals[m])
                    .sum::<f64>();
            let s_star_prev = if j >= 2 { s_star[j - 2] } else { 0 } as f64;

            let curved = c * s_j / g * gap;
            let flat_coef = (1.0 - c) * s_j;
            let flat = if flat_coef == 0.0 {
                Some(0.0)
            } else if g - s_star_prev > 0.0 {
                Some(flat_coef / (g - s_star_prev) * chi_gap)
            } else {
                None
            };
            match flat {
                Some(flat) => report.check_ge(delta_j, curved + flat, || {
                    format!(
                        "(i) gamma={gamma} j={j} delta={delta_j} bound={}",
                        curved + flat
                    )
                }),
                None => report.skip(format!("(i) gamma={gamma} j={j}: gamma - s*_(j-1) = 0")),
            }

            let denom = g - (1.0 - c) * run.prefix_size(j - 1) as f64;
            if denom > 0.0 {
                let bound = s_j / denom * gap;
                report.check_ge(delta_j, bound, || {
                    format!("(ii) gamma={gamma} j={j} delta={delta_j} bound={bound}")
                });
            } else {
                report.skip(format!("(ii) gamma={gamma} j={j}: zero denominator"));
            }
        }
        report.increments.push(IncrementData {
            gamma,
            opt: inst
                .ids_of(opt.items)
                .into_iter()
                .map(String::from)
                .collect(),
            chi,
            s_star,
        });
        report
    }
}

pub fn check_theorem6(inst: &Instance, gamma: u64) -> Result<CheckReport> {
    Ok(ExactContext::new(inst)?.prefix_bound(gamma))
}

pub fn check_lemma2(inst: &Instance, gamma: u64) -> Result<CheckReport> {
    Ok(ExactContext::new(inst)?.increment_bounds(gamma))
}

/// The three curvature inequalities, one report each.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurvatureLemmaReport {
    /// `(1 − c) f({j}) ≤ f(A ∪ {j}) − f(A)`.
    pub marginal_lower: CheckReport,
    /// `f(A ∪ B) ≥ f(A) + (1 − c) Σ_{i∈B} f({i})` for disjoint `A, B`.
    pub disjoint_union: CheckReport,
    /// `f(B) ≤ f(A) + Σ_{u∈B∖A} (f(A ∪ {u}) − f(A))` for `A ⊆ B`.
    pub nested_upper: CheckReport,
}

impl CurvatureLemmaReport {
    pub fn passed(&self) -> bool {
        self.marginal_lower.passed() && self.disjoint_union.passed() && self.nested_upper.passed()
    }

    pub fn reports(&self) -> [&CheckReport; 3] {
        [
            &self.marginal_lower,
            &self.disjoint_union,
            &self.nested_upper,
        ]
    }

    pub fn absorb(&mut self, other: CurvatureLemmaReport) {
        self.marginal_lower.absorb(other.marginal_lower);
        self.disjoint_union.absorb(other.disjoint_union);
        self.nested_upper.absorb(other.nested_upper);
    }
}

struct LemmaChecker<'a> {
    inst: &'a Instance,
    c: f64,
    report: CurvatureLemmaReport,
}

impl LemmaChecker<'_> {
    fn marginal(&mut self, a: ItemSet, j: usize) {
        let inst = self.inst;
        let gain = inst.marginal(a, j);
        let floor = (1.0 - self.c) * inst.singleton_value(j);
        self.report.marginal_lower.check_ge(gain, floor, || {
            format!(
                "A={} j={}: marginal {gain} < {floor}",
                show(inst, a),
                inst.id(j)
            )
        });
    }

    fn disjoint(&mut self, a: ItemSet, b: ItemSet) {
        let inst = self.inst;
        let lhs = inst.value(a.union(b));
        let rhs =
            inst.value(a) + (1.0 - self.c) * b.iter().map(|i| inst.singleton_value(i)).sum::<f64>();
        self.report.disjoint_union.check_ge(lhs, rhs, || {
            format!(
                "A={} B={}: f(A∪B)={lhs} < {rhs}",
                show(inst, a),
                show(inst, b)
            )
        });
    }

    fn nested(&mut self, a: ItemSet, b: ItemSet) {
        let inst = self.inst;
        let rhs = inst.value(b);
        let lhs = inst.value(a)
            + b.difference(a)
                .iter()
                .map(|u| inst.marginal(a, u))
                .sum::<f64>();
        self.report.nested_upper.check_ge(lhs, rhs, || {
            format!(
                "A={} B={}: f(B)={rhs} > {lhs}",
                show(inst, a),
                show(inst, b)
            )
        });
    }
}

fn lemma_checker(inst: &Instance) -> Result<LemmaChecker<'_>> {
    Ok(LemmaChecker {
        inst,
        c: inst.curvature()?,
        report: CurvatureLemmaReport {
            marginal_lower: CheckReport::new("curvature_marginal_lower"),
            disjoint_union: CheckReport::new("curvature_disjoint_union"),
            nested_upper: CheckReport::new("nested_marginal_upper"),
        },
    })
}

/// Checks the curvature inequalities: exhaustively when `n ≤ 8`, otherwise on
/// `trials` seeded random samples per inequality.
pub fn check_curvature_lemma(
    inst: &Instance,
    trials: usize,
    seed: u64,
) -> Result<CurvatureLemmaReport> {
    if inst.n() > EXHAUSTIVE_CURVATURE_MAX {
        return check_curvature_lemma_sampled(inst, trials, seed);
    }
    let mut ck = lemma_checker(inst)?;
    let n = inst.n();
    for bits in 0..(1u64 << n) {
        let a = ItemSet::from_bits(bits);
        for j in (0..n).filter(|&j| !a.contains(j)) {
            ck.marginal(a, j);
        }
    }
    // Each item goes to A, to B, or to neither: 3^n assignments.
    for code in 0..3usize.pow(n as u32) {
        let (mut a, mut b, mut rest) = (ItemSet::EMPTY, ItemSet::EMPTY, code);
        for i in 0..n {
            match rest % 3 {
                1 => a.insert(i),
                2 => b.insert(i),
                _ => {}
            }
            rest /= 3;
        }
        ck.disjoint(a, b);
        ck.nested(a, a.union(b));
    }
    Ok(ck.report)
}

/// Random-sample version of [`check_curvature_lemma`] regardless of size.
pub fn check_curvature_lemma_sampled(
    inst: &Instance,
    trials: usize,
    seed: u64,
) -> Result<CurvatureLemmaReport> {
    let mut ck = lemma_checker(inst)?;
    let n = inst.n();
    if n == 0 {
        return Ok(ck.report);
    }
    let mut rng = Pcg64::seed_from_u64(seed);
    for _ in 0..trials {
        let j = rng.random_range(0..n);
        let mut a = ItemSet::EMPTY;
        let (mut x, mut y) = (ItemSet::EMPTY, ItemSet::EMPTY);
        for i in 0..n {
            if i != j && rng.random_bool(0.5) {
                a.insert(i);
            }
            match rng.random_range(0..3u8) {
                1 => x.insert(i),
                2 => y.insert(i),
                _ => {}
            }
        }
        ck.marginal(a, j);
        ck.disjoint(x, y);
        ck.nested(x, x.union(y));
    }
    Ok(ck.report)
}

/// Properties of indispensable items, checked against direct AGreedy runs at
/// every breakpoint.
///
/// For each indispensable item: the prefix is nonempty and strictly smaller in
/// total size than the item; AGreedy returns the item exactly on its interval;
/// and at the first capacity where the leading greedy entries change, the first
/// larger item is either at the front or indispensable for that capacity.
pub fn check_indispensable_properties(inst: &Instance) -> Result<CheckReport> {
    guard(inst)?;
    let gammas = super::breakpoints(inst)?;
    let runs: Vec<GreedyRun> = gammas.iter().map(|&g| greedy_sequence(inst, g)).collect();
    let choice_at = |gamma: u64| -> GreedyChoice {
        match gammas.binary_search(&gamma) {
            Ok(t) => runs[t].agreedy_choice(),
            Err(_) => greedy_sequence(inst, gamma).agreedy_choice(),
        }
    };

    let mut report = CheckReport::new("indispensable_items");
    for item in 0..inst.n() {
        let res = is_indispensable(inst, item);
        if !res.indispensable {
            continue;
        }
        let id = inst.id(item);
        let s_item = inst.size(item);
        let s_prefix = inst.size_of(res.prefix_set());
        report.check(!res.greedy_prefix.is_empty() && s_item > s_prefix, || {
            format!("{id}: size {s_item} not above prefix size {s_prefix}")
        });

        let interval = indispensability_interval(inst, item).expect("item is indispensable");
        let mut probes: Vec<u64> = gammas.clone();
        probes.extend([interval.gamma1, interval.gamma2 - 1, interval.gamma2]);
        if interval.gamma1 > 1 {
            probes.push(interval.gamma1 - 1);
        }
        probes.sort_unstable();
        probes.dedup();
        for gamma in probes {
            let returns_item = choice_at(gamma) == GreedyChoice::Overflow(item);
            report.check(returns_item == interval.contains(gamma), || {
                format!(
                    "{id}: interval [{}, {}) but AGreedy at {gamma} {} it",
                    interval.gamma1,
                    interval.gamma2,
                    if returns_item {
                        "returns"
                    } else {
                        "does not return"
                    }
                )
            });
        }

        let mut reference = res.greedy_prefix.clone();
        reference.push(item);
        if let Some(changed) = first_order_change(inst, &reference, s_item, u64::MAX) {
            let run = greedy_sequence(inst, changed);
            let first_larger = run.order.iter().position(|&i| inst.size(i) > s_item);
            let ok = match first_larger {
                Some(0) => true,
                Some(p) => run.agreedy_choice() == GreedyChoice::Overflow(run.order[p]),
                None => false,
            };
            report.check(ok, || {
                format!("{id}: at capacity {changed} the first larger item is neither first nor indispensable")
            });
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{ex1, ex2, ex3};
    use crate::submodular::{make_modular_oracle, make_table_oracle, Item};

    #[test]
    fn curved_fraction_limits() {
        assert_eq!(curved_fraction(0.0, 0.3), 0.3);
        let v = curved_fraction(1.0, 1.0);
        assert!((v - (1.0 - (-1.0f64).exp())).abs() < 1e-15);
    }

    #[test]
    fn prefix_bound_ex1_limit_form() {
        let r = check_theorem6(&ex1(), 3).unwrap();
        assert_eq!(r.trials, 2);
        assert!(r.passed());
        // j = 1: f(G_1) = 1.0 against (1/3) * 2.9
        let slack1 = (1.0 - 2.9 / 3.0) / 1.0;
        assert!(r.worst_slack <= slack1 + 1e-12);
    }

    #[test]
    fn prefix_bound_ex2_full_curvature() {
        let r = check_theorem6(&ex2(), 4).unwrap();
        assert!(r.passed());
        assert!(r.worst_slack >= 0.0);
    }

    #[test]
    fn increment_bound_examples() {
        let r = check_lemma2(&ex1(), 2).unwrap();
        assert!(r.passed(), "{:?}", r.failures);
        assert_eq!(r.trials, 4);
        let d = &r.increments[0];
        assert_eq!(d.opt, vec!["b"]);
        assert_eq!(d.chi, vec![false, true]);
        assert_eq!(d.s_star, vec![0, 2]);

        let r = check_lemma2(&ex3(), 2).unwrap();
        assert!(r.passed());
        assert!(r.trials > 0);
    }

    #[test]
    fn increment_bounds_skip_optimal_prefix() {
        let r = check_lemma2(&ex1(), 3).unwrap();
        assert_eq!(r.trials, 0);
        assert_eq!(r.skipped.len(), 1);
        assert!(r.passed());
    }

    #[test]
    fn curvature_lemma_modular_is_tight() {
        let inst = Instance::new(
            vec![Item::new("a", 1), Item::new("b", 2), Item::new("c", 2)],
            make_modular_oracle([("a", 1.0), ("b", 2.5), ("c", 0.7)]).unwrap(),
        )
        .unwrap();
        let r = check_curvature_lemma(&inst, 100, 1).unwrap();
        assert!(r.passed());
        assert!(r.marginal_lower.worst_slack.abs() < 1e-12);
        assert_eq!(r.marginal_lower.trials, 3 * 4);
        assert_eq!(r.disjoint_union.trials, 27);
    }

    #[test]
    fn curvature_lemma_coverage_exhaustive() {
        assert!(check_curvature_lemma(&ex2(), 10, 0).unwrap().passed());
    }

    #[test]
    fn curvature_lemma_negative_control() {
        // marginal of c is 0.2 on {a} but 1.0 on {a, b}
        let t = make_table_oracle([
            ("", 0.0),
            ("a", 1.0),
            ("b", 1.0),
            ("c", 1.0),
            ("a,b", 2.0),
            ("a,c", 1.2),
            ("b,c", 2.0),
            ("a,b,c", 3.0),
        ])
        .unwrap();
        let inst = Instance::new_unchecked(
            vec![Item::new("a", 1), Item::new("b", 1), Item::new("c", 1)],
            t,
        )
        .unwrap();
        assert_eq!(inst.curvature().unwrap(), 0.0);
        let r = check_curvature_lemma(&inst, 10, 0).unwrap();
        assert!(!r.passed());
        assert!(!r.marginal_lower.passed());
        assert!(r.marginal_lower.worst_slack < -0.5);
        let s = check_curvature_lemma_sampled(&inst, 500, 9).unwrap();
        assert!(!s.passed());
    }

    #[test]
    fn indispensable_properties_fixtures() {
        let r = check_indispensable_properties(&ex1()).unwrap();
        assert!(r.passed(), "{:?}", r.failures);
        assert!(r.trials >= 4);
        let r = check_indispensable_properties(&ex3()).unwrap();
        assert_eq!(r.trials, 0);
        let single = Instance::new(
            vec![Item::new("a", 2)],
            make_modular_oracle([("a", 1.0)]).unwrap(),
        )
        .unwrap();
        assert_eq!(check_indispensable_properties(&single).unwrap().trials, 0);
    }
}
