//! One-shot verification of an instance against every checker in the crate.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::Result;
use crate::exact::{
    check_curvature_lemma, check_indispensable_properties, robustness_sweep, CheckReport,
    ExactContext,
};
use crate::numeric::definitely_greater;
use crate::submodular::{validate_oracle, Instance, ValidationReport};

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub validation: ValidationReport,
    pub checks: Vec<CheckReport>,
    /// Observations that are not pass/fail, such as strict MGreedy wins.
    pub notes: Vec<String>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.validation.is_valid() && self.checks.iter().all(CheckReport::passed)
    }

    /// Plain-text summary with one line per check and any failure witnesses.
    pub fn render(&self, inst: &Instance) -> String {
        let mut out = String::new();
        let status = |ok: bool| if ok { "PASS" } else { "FAIL" };
        let _ = writeln!(
            out,
            "{} oracle: {}",
            status(self.validation.is_valid()),
            self.validation.describe(inst)
        );
        for c in &self.checks {
            let _ = writeln!(
                out,
                "{} {}: {} trials, worst slack {:.3e}, {} skipped",
                status(c.passed()),
                c.name,
                c.trials,
                c.worst_slack,
                c.skipped.len()
            );
            for f in &c.failures {
                let _ = writeln!(out, "    witness: {} (slack {:.3e})", f.witness, f.slack);
            }
        }
        for note in &self.notes {
            let _ = writeln!(out, "note: {note}");
        }
        out
    }
}

/// Runs oracle validation, the curvature inequalities, the per-capacity greedy
/// bounds, the indispensable-item properties and the sweep comparisons.
///
/// When the oracle itself is invalid the remaining checks are not attempted.
pub fn verify_instance(inst: &Instance, trials: usize, seed: u64) -> Result<VerifyReport> {
    let validation = validate_oracle(inst);
    if !validation.is_valid() {
        return Ok(VerifyReport {
            validation,
            checks: Vec::new(),
            notes: vec!["remaining checks skipped: oracle is not a valid objective".into()],
        });
    }

    let mut checks = Vec::new();
    let lemma = check_curvature_lemma(inst, trials, seed)?;
    checks.extend(lemma.reports().into_iter().cloned());

    let ctx = ExactContext::new(inst)?;
    let mut prefix = CheckReport::new("greedy_prefix_bound");
    let mut increments = CheckReport::new("greedy_increment_bounds");
    for gamma in ctx.solver.breakpoints() {
        prefix.absorb(ctx.prefix_bound(gamma));
        increments.absorb(ctx.increment_bounds(gamma));
    }
    checks.push(prefix);
    checks.push(increments);
    checks.push(check_indispensable_properties(inst)?);

    let sweep = robustness_sweep(inst)?;
    let alpha = sweep.alpha_bound;
    let mut opt_mg = CheckReport::new("opt_ge_mgreedy");
    let mut mg_ag = CheckReport::new("mgreedy_ge_agreedy");
    let mut pol_ag = CheckReport::new("policy_ge_agreedy");
    let mut ag_alpha = CheckReport::new("agreedy_ge_alpha_opt");
    let mut notes = Vec::new();
    for r in &sweep.rows {
        let g = r.gamma;
        opt_mg.check_ge(r.opt_value, r.mg_value, || {
            format!("gamma={g}: opt {} < mgreedy {}", r.opt_value, r.mg_value)
        });
        mg_ag.check_ge(r.mg_value, r.ag_value, || {
            format!("gamma={g}: mgreedy {} < agreedy {}", r.mg_value, r.ag_value)
        });
        pol_ag.check_ge(r.policy_value, r.ag_value, || {
            format!(
                "gamma={g}: policy {} < agreedy {}",
                r.policy_value, r.ag_value
            )
        });
        ag_alpha.check_ge(r.ag_value, alpha * r.opt_value, || {
            format!(
                "gamma={g}: agreedy {} < alpha {alpha} * opt {}",
                r.ag_value, r.opt_value
            )
        });
        if definitely_greater(r.mg_value, r.ag_value) {
            notes.push(format!(
                "strict MGreedy > AGreedy at gamma={g}: {} vs {}",
                r.mg_value, r.ag_value
            ));
        }
    }
    let mut robust = CheckReport::new("empirical_robustness_ge_alpha");
    robust.check_ge(sweep.empirical_robustness, alpha, || {
        format!(
            "empirical robustness {} < alpha {alpha}",
            sweep.empirical_robustness
        )
    });
    checks.extend([opt_mg, mg_ag, pol_ag, ag_alpha, robust]);
    notes.push(format!(
        "curvature={} alpha={} empirical_robustness={}",
        sweep.curvature, alpha, sweep.empirical_robustness
    ));

    Ok(VerifyReport {
        validation,
        checks,
        notes,
    })
}
