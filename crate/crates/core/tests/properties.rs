use proptest::prelude::*;

use robust_knapsack::bounds::{alpha, residual, solve_x};
use robust_knapsack::exact::{breakpoints, check_curvature_lemma, ExactSolver};
use robust_knapsack::generate::{generate, GeneratorKind, GeneratorSpec};
use robust_knapsack::greedy::{agreedy, greedy_sequence, mgreedy};
use robust_knapsack::numeric::TOL;
use robust_knapsack::policy::{
    indispensability_interval, is_indispensable, make_fit_oracle, start_item_list, FitQuery,
    RobustPolicy,
};
use robust_knapsack::submodular::{make_modular_oracle, validate_oracle, Instance, Item, ItemSet};

const KINDS: [GeneratorKind; 4] = [
    GeneratorKind::Modular,
    GeneratorKind::Coverage,
    GeneratorKind::ConcaveModular,
    GeneratorKind::Planted,
];

fn instances() -> impl Strategy<Value = Instance> {
    (0..4usize, 2..=7usize, 2..=9u64, any::<u64>()).prop_map(|(k, n, size_max, seed)| {
        generate(&GeneratorSpec::new(KINDS[k], n, size_max, seed)).expect("generator succeeds")
    })
}

fn modular_instances() -> impl Strategy<Value = Instance> {
    prop::collection::vec((1..=8u64, 1..=50u32), 1..=7).prop_map(|spec| {
        let items = spec
            .iter()
            .enumerate()
            .map(|(i, &(s, _))| Item::new(format!("m{i}"), s));
        let weights = spec
            .iter()
            .enumerate()
            .map(|(i, &(_, w))| (format!("m{i}"), w as f64 / 10.0));
        Instance::new(items.collect(), make_modular_oracle(weights).unwrap()).unwrap()
    })
}

fn ge(lhs: f64, rhs: f64) -> bool {
    lhs - rhs >= -TOL * 1.0_f64.max(lhs.abs()).max(rhs.abs())
}

/// Replays a fixed answer sequence, ignoring the load.
struct Scripted {
    answers: Vec<bool>,
    next: usize,
}

impl FitQuery for Scripted {
    fn fits(&mut self, _load: u64) -> bool {
        let a = self.answers[self.next];
        self.next += 1;
        a
    }
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 64,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn generated_oracles_are_valid(inst in instances()) {
        prop_assert!(validate_oracle(&inst).is_valid());
        prop_assert!(inst.is_normalized());
        let c = inst.curvature().unwrap();
        prop_assert!((0.0..=1.0).contains(&c));
    }

    #[test]
    fn curvature_inequalities_hold(inst in instances(), seed in any::<u64>()) {
        let report = check_curvature_lemma(&inst, 500, seed).unwrap();
        for r in report.reports() {
            prop_assert!(r.passed(), "{}: {:?}", r.name, r.failures.first());
        }
    }

    #[test]
    fn value_ordering_at_every_breakpoint(inst in instances()) {
        let solver = ExactSolver::new(&inst).unwrap();
        let a = alpha(inst.curvature().unwrap()).unwrap();
        let policy = RobustPolicy::new(&inst);
        for gamma in solver.breakpoints() {
            let opt = solver.opt(&inst, gamma).value;
            let mg = mgreedy(&inst, gamma);
            let ag = agreedy(&inst, gamma);
            let pol = policy.execute(&mut make_fit_oracle(gamma)).packed;
            prop_assert!(mg.total_size <= gamma && ag.total_size <= gamma && pol.total_size <= gamma);
            prop_assert!(ge(opt, mg.value), "gamma {gamma}");
            prop_assert!(ge(mg.value, ag.value), "gamma {gamma}");
            prop_assert!(ge(pol.value, ag.value), "gamma {gamma}");
            prop_assert!(ge(ag.value, a * opt), "gamma {gamma}");
        }
    }

    #[test]
    fn modular_greedy_variants_agree(inst in modular_instances(), gamma in 1..=30u64) {
        prop_assert_eq!(mgreedy(&inst, gamma), agreedy(&inst, gamma));
    }

    #[test]
    fn modular_robustness_at_least_half(inst in modular_instances()) {
        let solver = ExactSolver::new(&inst).unwrap();
        let policy = RobustPolicy::new(&inst);
        for gamma in solver.breakpoints() {
            let opt = solver.opt(&inst, gamma).value;
            let pol = policy.execute(&mut make_fit_oracle(gamma)).packed.value;
            prop_assert!(ge(pol, 0.5 * opt), "gamma {gamma}: {pol} vs {opt}");
        }
    }

    #[test]
    fn policy_depends_only_on_answers(inst in instances(), gamma in 1..=60u64) {
        let policy = RobustPolicy::new(&inst);
        let mut oracle = make_fit_oracle(gamma);
        let trace = policy.execute(&mut oracle);
        prop_assert_eq!(oracle.query_count(), trace.attempts.len());
        prop_assert_eq!(&trace, &policy.execute(&mut make_fit_oracle(gamma)));
        let mut replay = Scripted { answers: trace.answers(), next: 0 };
        prop_assert_eq!(&trace, &policy.execute(&mut replay));
        prop_assert_eq!(replay.next, trace.answers().len());
    }

    #[test]
    fn policy_constant_between_breakpoints(inst in instances()) {
        let points = breakpoints(&inst).unwrap();
        let policy = RobustPolicy::new(&inst);
        for w in points.windows(2) {
            let lo = policy.execute(&mut make_fit_oracle(w[0]));
            let hi = policy.execute(&mut make_fit_oracle(w[1] - 1));
            prop_assert_eq!(lo, hi);
        }
    }

    #[test]
    fn indispensable_interval_is_exact(inst in instances()) {
        let total = inst.total_size();
        for item in 0..inst.n() {
            let res = is_indispensable(&inst, item);
            let interval = indispensability_interval(&inst, item);
            prop_assert_eq!(res.indispensable, interval.is_some());
            let Some(iv) = interval else { continue };
            prop_assert!(inst.size(item) > inst.size_of(res.prefix_set()));
            prop_assert!(iv.gamma1 < iv.gamma2);
            for gamma in 1..=total + 1 {
                let returned = agreedy(&inst, gamma).items == ItemSet::singleton(item)
                    && greedy_sequence(&inst, gamma).overflow_item == Some(item);
                prop_assert_eq!(returned, iv.contains(gamma), "item {} gamma {}", inst.id(item), gamma);
            }
        }
    }

    #[test]
    fn start_list_sizes_increase(inst in instances()) {
        let list = start_item_list(&inst);
        let sizes: Vec<u64> = list.entries.iter().map(|e| inst.size(e.item)).collect();
        prop_assert!(sizes.windows(2).all(|w| w[0] < w[1]), "{sizes:?}");
    }

    #[test]
    fn generation_is_reproducible(k in 0..4usize, n in 2..=10usize, seed in any::<u64>()) {
        let spec = GeneratorSpec::new(KINDS[k], n, 10, seed);
        prop_assert_eq!(generate(&spec).unwrap().to_json(), generate(&spec).unwrap().to_json());
    }

    #[test]
    fn json_round_trip(inst in instances()) {
        let back = Instance::from_json(&inst.to_json()).unwrap();
        prop_assert_eq!(back.to_json(), inst.to_json());
        prop_assert_eq!(back.digest(), inst.digest());
    }

    #[test]
    fn alpha_root_and_range(c in 0.0..=1.0f64) {
        let x = solve_x(c).unwrap();
        prop_assert!((0.0..=1.0).contains(&x));
        if c > 1e-9 {
            prop_assert!(residual(c, x).abs() < 1e-9);
        }
        let a = alpha(c).unwrap();
        prop_assert!((0.3577..=0.5).contains(&a), "alpha({c}) = {a}");
    }

    #[test]
    fn alpha_decreases_with_curvature(c in 0.0..=0.99f64, d in 0.001..=0.01f64) {
        prop_assert!(alpha(c).unwrap() >= alpha((c + d).min(1.0)).unwrap());
    }
}
