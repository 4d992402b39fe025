//! Exhaustive ground truth: brute-force optima, capacity breakpoints and
//! robustness sweeps over every capacity regime of an instance.

mod checks;

pub use checks::{
    check_curvature_lemma, check_curvature_lemma_sampled, check_indispensable_properties,
    check_lemma2, check_theorem6, CheckReport, CurvatureLemmaReport, ExactContext, Failure,
    IncrementData, EXHAUSTIVE_CURVATURE_MAX,
};

use std::fmt::Write as _;

use serde::Serialize;

use crate::bounds;
use crate::error::{Error, Result};
use crate::greedy::{agreedy, mgreedy, Solution};
use crate::numeric::{approx_eq, definitely_greater};
use crate::policy::{make_fit_oracle, RobustPolicy};
use crate::submodular::{Instance, ItemSet, EXHAUSTIVE_MAX_ITEMS};

pub(crate) fn guard(inst: &Instance) -> Result<()> {
    if inst.n() > EXHAUSTIVE_MAX_ITEMS {
        Err(Error::TooLarge {
            n: inst.n(),
            max: EXHAUSTIVE_MAX_ITEMS,
        })
    } else {
        Ok(())
    }
}

/// All `2^n` subsets ranked once, so the optimum for any capacity is a lookup.
///
/// Subsets are scanned by ascending total size; `best[t]` is the incumbent after
/// the first `t` of them. A subset replaces the incumbent if its value is
/// strictly larger (beyond tolerance), or tied and lexicographically smaller.
pub struct ExactSolver {
    values: Vec<f64>,
    /// Masks sorted by (size, mask).
    by_size: Vec<u32>,
    sizes_sorted: Vec<u64>,
    best: Vec<u32>,
}

impl ExactSolver {
    pub fn new(inst: &Instance) -> Result<Self> {
        guard(inst)?;
        let n = inst.n();
        let count = 1usize << n;
        let values: Vec<f64> = (0..count as u64)
            .map(|m| inst.value(ItemSet::from_bits(m)))
            .collect();
        let mut sizes = vec![0u64; count];
        for m in 1..count {
            let low = m.trailing_zeros() as usize;
            sizes[m] = sizes[m & (m - 1)] + inst.size(low);
        }
        let mut by_size: Vec<u32> = (0..count as u32).collect();
        by_size.sort_by_key(|&m| (sizes[m as usize], m));
        let sizes_sorted: Vec<u64> = by_size.iter().map(|&m| sizes[m as usize]).collect();

        let mut best = Vec::with_capacity(count + 1);
        let mut incumbent = 0u32; // the empty set, first in the order
        best.push(incumbent);
        for &m in &by_size {
            let (v, b) = (values[m as usize], values[incumbent as usize]);
            let better = definitely_greater(v, b)
                || (approx_eq(v, b)
                    && ItemSet::from_bits(m as u64)
                        .lex_cmp(ItemSet::from_bits(incumbent as u64))
                        .is_lt());
            if better {
                incumbent = m;
            }
            best.push(incumbent);
        }
        Ok(ExactSolver {
            values,
            by_size,
            sizes_sorted,
            best,
        })
    }

    /// Best feasible subset for capacity `gamma`.
    pub fn opt(&self, inst: &Instance, gamma: u64) -> Solution {
        let t = self.sizes_sorted.partition_point(|&s| s <= gamma);
        let mask = self.best[t];
        Solution {
            items: ItemSet::from_bits(mask as u64),
            value: self.values[mask as usize],
            total_size: inst.size_of(ItemSet::from_bits(mask as u64)),
        }
    }

    /// Distinct nonempty subset sums, ascending.
    pub fn breakpoints(&self) -> Vec<u64> {
        let mut out: Vec<u64> = self
            .by_size
            .iter()
            .zip(&self.sizes_sorted)
            .filter(|(&m, _)| m != 0)
            .map(|(_, &s)| s)
            .collect();
        out.dedup();
        out
    }
}

/// Optimal feasible solution by enumerating every subset.
///
/// Ties within tolerance go to the lexicographically smallest id sequence.
pub fn brute_force_opt(inst: &Instance, gamma: u64) -> Result<Solution> {
    Ok(ExactSolver::new(inst)?.opt(inst, gamma))
}

/// Sorted distinct nonempty subset sums of the item sizes.
///
/// Every capacity regime `[σ_t, σ_{t+1})` has constant feasible family, greedy
/// runs and policy behaviour, so these are the only capacities worth probing.
pub fn breakpoints(inst: &Instance) -> Result<Vec<u64>> {
    guard(inst)?;
    let n = inst.n();
    let mut sums = vec![0u64; 1 << n];
    for m in 1..sums.len() {
        let low = m.trailing_zeros() as usize;
        sums[m] = sums[m & (m - 1)] + inst.size(low);
    }
    sums.remove(0);
    sums.sort_unstable();
    sums.dedup();
    Ok(sums)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub gamma: u64,
    pub opt_value: f64,
    pub mg_value: f64,
    pub ag_value: f64,
    pub policy_value: f64,
    pub ratio_mg: f64,
    pub ratio_ag: f64,
    pub ratio_policy: f64,
    #[serde(skip)]
    pub opt: Solution,
    #[serde(skip)]
    pub mg: Solution,
    #[serde(skip)]
    pub ag: Solution,
    #[serde(skip)]
    pub policy: Solution,
}

fn ratio(value: f64, opt: f64) -> f64 {
    if opt <= 0.0 {
        1.0
    } else {
        value / opt
    }
}

impl SweepRow {
    fn new(gamma: u64, opt: Solution, mg: Solution, ag: Solution, policy: Solution) -> Self {
        SweepRow {
            gamma,
            opt_value: opt.value,
            mg_value: mg.value,
            ag_value: ag.value,
            policy_value: policy.value,
            ratio_mg: ratio(mg.value, opt.value),
            ratio_ag: ratio(ag.value, opt.value),
            ratio_policy: ratio(policy.value, opt.value),
            opt,
            mg,
            ag,
            policy,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    /// Minimum policy ratio over all capacity regimes.
    pub empirical_robustness: f64,
    pub curvature: f64,
    pub alpha_bound: f64,
    pub instance_digest: String,
}

pub const SWEEP_CSV_HEADER: &str =
    "gamma,opt_value,mg_value,ag_value,policy_value,ratio_mg,ratio_ag,ratio_policy";

impl SweepReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(SWEEP_CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                r.gamma,
                r.opt_value,
                r.mg_value,
                r.ag_value,
                r.policy_value,
                r.ratio_mg,
                r.ratio_ag,
                r.ratio_policy
            );
        }
        let _ = writeln!(out, "# curvature={}", self.curvature);
        let _ = writeln!(out, "# alpha_bound={}", self.alpha_bound);
        let _ = writeln!(out, "# empirical_robustness={}", self.empirical_robustness);
        let _ = writeln!(out, "# instance_digest={}", self.instance_digest);
        out
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SweepOptions {
    /// Compute rows on the rayon pool. Output is identical either way.
    pub parallel: bool,
}

pub fn robustness_sweep(inst: &Instance) -> Result<SweepReport> {
    robustness_sweep_with(inst, SweepOptions::default())
}

/// Evaluates OPT, MGreedy, AGreedy and the robust policy at every breakpoint.
pub fn robustness_sweep_with(inst: &Instance, opts: SweepOptions) -> Result<SweepReport> {
    let solver = ExactSolver::new(inst)?;
    let curvature = inst.curvature()?;
    let alpha_bound = bounds::alpha(curvature)?;
    let policy = RobustPolicy::new(inst);
    let gammas = solver.breakpoints();

    let row = |&gamma: &u64| {
        let trace = policy.execute(&mut make_fit_oracle(gamma));
        SweepRow::new(
            gamma,
            solver.opt(inst, gamma),
            mgreedy(inst, gamma),
            agreedy(inst, gamma),
            trace.packed,
        )
    };
    let rows: Vec<SweepRow> = if opts.parallel {
        parallel_rows(&gammas, row)
    } else {
        gammas.iter().map(row).collect()
    };

    let empirical_robustness = rows.iter().map(|r| r.ratio_policy).fold(1.0, f64::min);
    Ok(SweepReport {
        rows,
        empirical_robustness,
        curvature,
        alpha_bound,
        instance_digest: inst.digest(),
    })
}

#[cfg(feature = "parallel")]
fn parallel_rows<F>(gammas: &[u64], row: F) -> Vec<SweepRow>
where
    F: Fn(&u64) -> SweepRow + Sync + Send,
{
    use rayon::prelude::*;
    gammas.par_iter().map(row).collect()
}

#[cfg(not(feature = "parallel"))]
fn parallel_rows<F>(gammas: &[u64], row: F) -> Vec<SweepRow>
where
    F: Fn(&u64) -> SweepRow,
{
    gammas.iter().map(row).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{ex1, ex3};
    use crate::submodular::{make_modular_oracle, Item};

    #[test]
    fn brute_force_examples() {
        let inst = ex1();
        let s = brute_force_opt(&inst, 2).unwrap();
        assert_eq!(s.ids(&inst), ["b"]);
        assert_eq!(s.value, 1.9);
        let s = brute_force_opt(&inst, 3).unwrap();
        assert_eq!(s.ids(&inst), ["a", "b"]);
        assert!((s.value - 2.9).abs() < 1e-12);
    }

    #[test]
    fn brute_force_below_smallest_size() {
        let inst = Instance::new(
            vec![Item::new("a", 3), Item::new("b", 4)],
            make_modular_oracle([("a", 1.0), ("b", 1.0)]).unwrap(),
        )
        .unwrap();
        let s = brute_force_opt(&inst, 2).unwrap();
        assert!(s.items.is_empty());
        assert_eq!(s.value, 0.0);
    }

    #[test]
    fn brute_force_tie_prefers_smaller_ids() {
        let inst = Instance::new(
            vec![Item::new("a", 1), Item::new("b", 1), Item::new("c", 1)],
            make_modular_oracle([("a", 1.0), ("b", 1.0), ("c", 1.0)]).unwrap(),
        )
        .unwrap();
        let s = brute_force_opt(&inst, 2).unwrap();
        assert_eq!(s.ids(&inst), ["a", "b"]);
    }

    #[test]
    fn guard_rejects_large_instances() {
        let ids: Vec<String> = (0..23).map(|i| format!("i{i:02}")).collect();
        let inst = Instance::new(
            ids.iter().map(|i| Item::new(i.clone(), 1)).collect(),
            make_modular_oracle(ids.iter().map(|i| (i.clone(), 1.0))).unwrap(),
        )
        .unwrap();
        assert!(matches!(
            brute_force_opt(&inst, 3),
            Err(Error::TooLarge { n: 23, .. })
        ));
        assert!(matches!(breakpoints(&inst), Err(Error::TooLarge { .. })));
    }

    fn sized(sizes: &[u64]) -> Instance {
        let ids: Vec<String> = (0..sizes.len()).map(|i| format!("i{i}")).collect();
        Instance::new(
            ids.iter()
                .zip(sizes)
                .map(|(i, &s)| Item::new(i.clone(), s))
                .collect(),
            make_modular_oracle(ids.iter().map(|i| (i.clone(), 1.0))).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn breakpoint_examples() {
        assert_eq!(breakpoints(&sized(&[1, 2])).unwrap(), vec![1, 2, 3]);
        assert_eq!(breakpoints(&sized(&[1, 1])).unwrap(), vec![1, 2]);
        assert_eq!(breakpoints(&sized(&[5])).unwrap(), vec![5]);
        let inst = sized(&[3, 5, 5, 7]);
        assert_eq!(
            ExactSolver::new(&inst).unwrap().breakpoints(),
            breakpoints(&inst).unwrap()
        );
    }

    #[test]
    fn sweep_ex1() {
        let r = robustness_sweep(&ex1()).unwrap();
        assert_eq!(
            r.rows.iter().map(|r| r.gamma).collect::<Vec<_>>(),
            vec![1, 2, 3]
        );
        for row in &r.rows {
            assert!((row.ratio_policy - 1.0).abs() < 1e-12);
        }
        assert!((r.empirical_robustness - 1.0).abs() < 1e-12);
        assert_eq!(r.curvature, 0.0);
        assert!((r.alpha_bound - 0.5).abs() < 1e-12);
    }

    #[test]
    fn sweep_ex3() {
        let r = robustness_sweep(&ex3()).unwrap();
        let row = r.rows.iter().find(|r| r.gamma == 2).unwrap();
        assert_eq!(row.policy_value, 1.0);
        assert!((row.opt_value - 1.9).abs() < 1e-12);
        assert!((row.ratio_policy - 1.0 / 1.9).abs() < 1e-12);
        assert!((r.empirical_robustness - 1.0 / 1.9).abs() < 1e-12);
        assert!(r.empirical_robustness >= r.alpha_bound);
    }

    #[test]
    fn single_item_sweep() {
        let r = robustness_sweep(&sized(&[4])).unwrap();
        assert_eq!(r.rows.len(), 1);
        assert_eq!(r.rows[0].ratio_policy, 1.0);
        assert_eq!(r.rows[0].ratio_ag, 1.0);
    }

    #[test]
    fn csv_layout() {
        let csv = robustness_sweep(&ex1()).unwrap().to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], SWEEP_CSV_HEADER);
        assert_eq!(lines[1], "1,1,1,1,1,1,1,1");
        assert!(lines[4].starts_with("# curvature=0"));
        assert!(lines[6].starts_with("# empirical_robustness=1"));
    }

    #[test]
    fn parallel_matches_sequential() {
        let inst = ex3();
        let a = robustness_sweep_with(&inst, SweepOptions { parallel: false }).unwrap();
        let b = robustness_sweep_with(&inst, SweepOptions { parallel: true }).unwrap();
        assert_eq!(a.to_csv(), b.to_csv());
    }
}
