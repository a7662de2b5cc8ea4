//! Runs every cause/repair/diagnosis reduction on one input and compares
//! it against the brute-force oracle.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use serde_json::{json, Value};

use crate::bridge::{
    c_repairs_from_mrc, causes_from_repairs_with, cqa_from_causes, repairs_from_causes_with,
    repairs_from_contingencies, CausePackage,
};
use crate::causality::actual_causes_with;
use crate::diagnosis::{build_diagnosis_problem, causes_from_diagnoses_with};
use crate::error::{Error, Result};
use crate::hitting::{minimal_hitting_sets, Budget};
use crate::oracle::{brute_c_repairs, brute_causes, brute_consistent_answer, brute_s_repairs, OracleBudget};
use crate::query::{dc_of_query, evaluate_bcq, ConjunctiveQuery, DenialConstraint};
use crate::relational::{GroundAtom, Instance};
use crate::repair::{is_consistent, s_repairs_with, ConflictHypergraph};
use crate::report::{CauseSet, RepairSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
    Skip,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Skip => "SKIP",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub claim: &'static str,
    pub verdict: Verdict,
    /// Counterexample on failure, reason on skip.
    #[serde(skip_serializing_if = "Value::is_null")]
    pub detail: Value,
}

impl CheckResult {
    fn new(name: &'static str, claim: &'static str, verdict: Verdict, detail: Value) -> Self {
        CheckResult {
            name,
            claim,
            verdict,
            detail,
        }
    }

    fn skip(name: &'static str, claim: &'static str, reason: &str) -> Self {
        Self::new(name, claim, Verdict::Skip, json!({ "reason": reason }))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrosscheckReport {
    pub checks: Vec<CheckResult>,
}

impl CrosscheckReport {
    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| c.verdict == Verdict::Fail)
    }

    pub fn all_passed(&self) -> bool {
        self.failures().next().is_none()
    }
}

#[derive(Debug, Clone)]
pub struct CrosscheckInput {
    pub instance: Instance,
    pub query: Option<ConjunctiveQuery>,
    pub constraints: Vec<DenialConstraint>,
}

fn strings(set: &BTreeSet<GroundAtom>) -> Vec<String> {
    set.iter().map(ToString::to_string).collect()
}

fn family_json(family: &[BTreeSet<GroundAtom>]) -> Value {
    json!(family.iter().map(strings).collect::<Vec<_>>())
}

/// Set difference both ways between two families of sets.
fn family_diff(expected: &[BTreeSet<GroundAtom>], actual: &[BTreeSet<GroundAtom>]) -> Value {
    let e: BTreeSet<_> = expected.iter().collect();
    let a: BTreeSet<_> = actual.iter().collect();
    let missing: Vec<_> = e.difference(&a).map(|s| strings(s)).collect();
    let unexpected: Vec<_> = a.difference(&e).map(|s| strings(s)).collect();
    json!({
        "expected": family_json(expected),
        "actual": family_json(actual),
        "missing": missing,
        "unexpected": unexpected,
    })
}

fn compare_repairs(name: &'static str, claim: &'static str, expected: &RepairSet, actual: &RepairSet) -> CheckResult {
    let (e, a) = (expected.deletion_sets(), actual.deletion_sets());
    if e == a {
        CheckResult::new(name, claim, Verdict::Pass, Value::Null)
    } else {
        CheckResult::new(name, claim, Verdict::Fail, family_diff(&e, &a))
    }
}

fn causes_json(c: &CauseSet) -> Value {
    json!(c
        .reports
        .iter()
        .map(|r| json!({
            "cause": r.cause.to_string(),
            "responsibility": r.responsibility.to_string(),
            "minimal_contingencies": family_json(&r.minimal_contingencies),
        }))
        .collect::<Vec<_>>())
}

fn compare_causes(name: &'static str, claim: &'static str, expected: &CauseSet, actual: &CauseSet) -> CheckResult {
    if expected.reports == actual.reports {
        CheckResult::new(name, claim, Verdict::Pass, Value::Null)
    } else {
        CheckResult::new(
            name,
            claim,
            Verdict::Fail,
            json!({ "expected": causes_json(expected), "actual": causes_json(actual) }),
        )
    }
}

/// First failing per-constraint result, or a pass.
fn per_constraint(
    name: &'static str,
    claim: &'static str,
    sigma: &[DenialConstraint],
    mut check: impl FnMut(&DenialConstraint) -> Result<CheckResult>,
) -> Result<CheckResult> {
    if sigma.is_empty() {
        return Ok(CheckResult::skip(name, claim, "no constraints"));
    }
    for k in sigma {
        let r = check(k)?;
        if r.verdict == Verdict::Fail {
            let detail = json!({ "constraint": k.to_string(), "diff": r.detail });
            return Ok(CheckResult::new(name, claim, Verdict::Fail, detail));
        }
    }
    Ok(CheckResult::new(name, claim, Verdict::Pass, Value::Null))
}

pub const REPAIRS_FROM_CAUSES: &str = "repairs-from-causes";
const REPAIRS_FROM_CAUSES_CLAIM: &str = "repairs assembled from per-constraint causes are exactly the S-repairs";
const DUALITY: &str = "hitting-set-duality";
const DUALITY_CLAIM: &str = "S-repair deletion sets are the minimal hitting sets of the conflict hypergraph";

/// Repairs built from `pkg` against powerset repairs; a rejected package
/// is reported as a failure.
pub fn check_repairs_from_package(
    d: &Instance,
    sigma: &[DenialConstraint],
    pkg: &CausePackage,
    budget: &mut Budget,
    oracle: &OracleBudget,
) -> Result<CheckResult> {
    let expected = brute_s_repairs(d, sigma, oracle)?;
    match repairs_from_causes_with(d, sigma, pkg, budget) {
        Ok(actual) => Ok(compare_repairs(
            REPAIRS_FROM_CAUSES,
            REPAIRS_FROM_CAUSES_CLAIM,
            &expected,
            &actual,
        )),
        Err(Error::InconsistentPackage(msg)) => Ok(CheckResult::new(
            REPAIRS_FROM_CAUSES,
            REPAIRS_FROM_CAUSES_CLAIM,
            Verdict::Fail,
            json!({ "rejected_package": msg, "expected": family_json(&expected.deletion_sets()) }),
        )),
        Err(e) => Err(e),
    }
}

/// Literal S-repair test: consistent, and putting back any deleted tuple
/// breaks consistency.
fn is_literal_s_repair(d: &Instance, sigma: &[DenialConstraint], deleted: &BTreeSet<GroundAtom>) -> bool {
    let kept = d.without(deleted);
    is_consistent(&kept, sigma)
        && deleted.iter().all(|t| {
            let back = d.without(deleted.iter().filter(|x| *x != t));
            !is_consistent(&back, sigma)
        })
}

pub fn check_hitting_set_duality(d: &Instance, sigma: &[DenialConstraint], budget: &mut Budget) -> Result<CheckResult> {
    let graph = ConflictHypergraph::build(d, sigma)?;
    let hitting = minimal_hitting_sets(&graph.edges, budget)?;
    let deletions = s_repairs_with(d, sigma, budget)?.deletion_sets();
    let not_repairs: Vec<_> = hitting
        .iter()
        .filter(|h| !is_literal_s_repair(d, sigma, h))
        .cloned()
        .collect();
    let not_hitting: Vec<_> = deletions
        .iter()
        .filter(|s| !graph.edges.iter().all(|e| !e.is_disjoint(s)) || !hitting.contains(s))
        .cloned()
        .collect();
    if not_repairs.is_empty() && not_hitting.is_empty() && hitting == deletions {
        Ok(CheckResult::new(DUALITY, DUALITY_CLAIM, Verdict::Pass, Value::Null))
    } else {
        Ok(CheckResult::new(
            DUALITY,
            DUALITY_CLAIM,
            Verdict::Fail,
            json!({
                "edges": family_json(&graph.edges),
                "hitting_sets_not_repairs": family_json(&not_repairs),
                "repairs_not_hitting_sets": family_json(&not_hitting),
                "diff": family_diff(&hitting, &deletions),
            }),
        ))
    }
}

pub fn run_crosscheck(input: &CrosscheckInput, node_limit: u64, oracle: &OracleBudget) -> Result<CrosscheckReport> {
    let d = &input.instance;
    let all = d.all_endogenous();
    let mut budget = Budget::new(node_limit);
    let mut checks = Vec::new();

    let sigma: Vec<DenialConstraint> = match (&input.query, input.constraints.is_empty()) {
        (Some(q), true) => vec![dc_of_query(q)?],
        _ => input.constraints.clone(),
    };

    const CAUSES_FROM_REPAIRS_CLAIM: &str =
        "causes and responsibilities read off S-repair differences equal the definitional ones";
    const DIAG: &str = "causes and responsibilities from minimal diagnoses equal the definitional ones";
    match &input.query {
        Some(q) => {
            let brute = brute_causes(d, q, oracle)?;
            checks.push(compare_causes(
                "causes",
                "hitting-set causes equal the definitional causes",
                &brute,
                &actual_causes_with(d, q, &mut budget)?,
            ));
            checks.push(compare_causes(
                "causes-from-repairs",
                CAUSES_FROM_REPAIRS_CLAIM,
                &brute,
                &causes_from_repairs_with(d, q, &mut budget)?,
            ));
            if evaluate_bcq(d, q)? {
                let m = build_diagnosis_problem(d, q)?;
                checks.push(compare_causes(
                    "causes-from-diagnoses",
                    DIAG,
                    &brute,
                    &causes_from_diagnoses_with(&m, &mut budget)?,
                ));
            } else {
                checks.push(CheckResult::skip(
                    "causes-from-diagnoses",
                    DIAG,
                    "query is false, nothing to diagnose",
                ));
            }
        }
        None => {
            for (name, claim) in [
                ("causes", "hitting-set causes equal the definitional causes"),
                ("causes-from-repairs", CAUSES_FROM_REPAIRS_CLAIM),
                ("causes-from-diagnoses", DIAG),
            ] {
                checks.push(CheckResult::skip(name, claim, "no query given"));
            }
        }
    }

    checks.push(per_constraint(
        "repairs-from-contingencies",
        "for one constraint, deleting each cause with each minimal contingency gives exactly the S-repairs",
        &sigma,
        |k| {
            let expected = brute_s_repairs(&all, std::slice::from_ref(k), oracle)?;
            let actual = repairs_from_contingencies(&all, k)?;
            Ok(compare_repairs("", "", &expected, &actual))
        },
    )?);

    if sigma.is_empty() {
        checks.push(CheckResult::skip(
            REPAIRS_FROM_CAUSES,
            REPAIRS_FROM_CAUSES_CLAIM,
            "no constraints",
        ));
    } else {
        let pkg = CausePackage::compute_with(&all, &sigma, &mut budget)?;
        checks.push(check_repairs_from_package(&all, &sigma, &pkg, &mut budget, oracle)?);
    }

    checks.push(per_constraint(
        "c-repairs-from-mrc",
        "most responsible causes with their smallest contingencies give exactly the C-repairs",
        &sigma,
        |k| {
            let expected = brute_c_repairs(&all, std::slice::from_ref(k), oracle)?;
            Ok(compare_repairs("", "", &expected, &c_repairs_from_mrc(&all, k)?))
        },
    )?);

    checks.push(per_constraint(
        "cqa-from-causes",
        "a tuple is consistently true iff it is not a cause of the violation",
        &sigma,
        |k| {
            let ks = std::slice::from_ref(k);
            let wrong: Vec<Value> = all
                .iter()
                .map(|a| -> Result<Option<Value>> {
                    let expected = brute_consistent_answer(&all, ks, a, oracle)?;
                    let actual = cqa_from_causes(&all, k, a)?;
                    Ok((expected != actual)
                        .then(|| json!({ "atom": a.to_string(), "expected": expected, "actual": actual })))
                })
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .flatten()
                .collect();
            let verdict = if wrong.is_empty() { Verdict::Pass } else { Verdict::Fail };
            Ok(CheckResult::new("", "", verdict, json!(wrong)))
        },
    )?);

    if sigma.is_empty() {
        checks.push(CheckResult::skip(DUALITY, DUALITY_CLAIM, "no constraints"));
    } else {
        checks.push(check_hitting_set_duality(&all, &sigma, &mut budget)?);
    }

    Ok(CrosscheckReport { checks })
}
