//! Reductions between causes and repairs.
//!
//! Causes come out of S-repair difference sets, and S-repairs come out of
//! per-constraint cause packages. Minimum-size contingencies of the most
//! responsible causes give the C-repairs, and a ground atom is a consistent
//! answer exactly when it is not a cause of any violation.

use std::collections::{BTreeMap, BTreeSet};

use crate::causality::{actual_causes_with, most_responsible};
use crate::error::{Error, Result};
use crate::hitting::{minimal_hitting_sets, Budget};
use crate::query::{dc_of_query, evaluate_bcq, violation_view, ConjunctiveQuery, DenialConstraint};
use crate::relational::{GroundAtom, Instance};
use crate::repair::s_repairs_with;
use crate::report::{CauseReport, CauseSet, RepairKind, RepairSet};
use crate::sets::minimal_sets;

/// `DF(D, D^n, κ, t)`: S-repair difference sets that contain `t` and lie
/// inside `D^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DFCollection {
    pub tuple: GroundAtom,
    pub difference_sets: Vec<BTreeSet<GroundAtom>>,
}

/// Difference sets `D ∖ D'` of the S-repairs that only delete endogenous
/// tuples.
fn endogenous_differences(
    d: &Instance,
    kappa: &DenialConstraint,
    budget: &mut Budget,
) -> Result<Vec<BTreeSet<GroundAtom>>> {
    let repairs = s_repairs_with(d, std::slice::from_ref(kappa), budget)?;
    Ok(repairs
        .deletion_sets()
        .into_iter()
        .filter(|s| s.iter().all(|a| d.is_endogenous(a)))
        .collect())
}

pub fn df_sets(d: &Instance, kappa: &DenialConstraint, t: &GroundAtom) -> Result<DFCollection> {
    if !d.is_endogenous(t) {
        return Err(Error::NotEndogenous(t.clone()));
    }
    let difference_sets = endogenous_differences(d, kappa, &mut Budget::default())?
        .into_iter()
        .filter(|s| s.contains(t))
        .collect();
    Ok(DFCollection {
        tuple: t.clone(),
        difference_sets,
    })
}

/// Causes of `Q` read off the S-repairs of `D` under `κ(Q)`: `t` is a
/// cause iff some difference set contains it, with contingency `s ∖ {t}`.
pub fn causes_from_repairs(d: &Instance, q: &ConjunctiveQuery) -> Result<CauseSet> {
    causes_from_repairs_with(d, q, &mut Budget::default())
}

pub fn causes_from_repairs_with(d: &Instance, q: &ConjunctiveQuery, budget: &mut Budget) -> Result<CauseSet> {
    let kappa = dc_of_query(q)?;
    let mut by_tuple: BTreeMap<GroundAtom, Vec<BTreeSet<GroundAtom>>> = BTreeMap::new();
    for s in endogenous_differences(d, &kappa, budget)? {
        for t in &s {
            let mut rest = s.clone();
            rest.remove(t);
            by_tuple.entry(t.clone()).or_default().push(rest);
        }
    }
    let reports = by_tuple
        .into_iter()
        .map(|(t, sets)| CauseReport::new(t, sets))
        .collect();
    Ok(CauseSet::new(reports, q.clone(), d))
}

/// Causes of one violation view with their minimal contingency sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ViewCauses {
    pub constraint: DenialConstraint,
    pub entries: Vec<(GroundAtom, Vec<BTreeSet<GroundAtom>>)>,
}

impl ViewCauses {
    pub fn causes(&self) -> BTreeSet<GroundAtom> {
        self.entries.iter().map(|(t, _)| t.clone()).collect()
    }

    /// `{t} ∪ C` for every cause `t` and contingency `C`.
    pub fn deletion_choices(&self) -> Vec<BTreeSet<GroundAtom>> {
        self.entries
            .iter()
            .flat_map(|(t, sets)| {
                sets.iter().map(move |c| {
                    let mut s = c.clone();
                    s.insert(t.clone());
                    s
                })
            })
            .collect()
    }
}

/// Per-constraint causes of the violation views, computed with every tuple
/// endogenous.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CausePackage {
    pub views: Vec<ViewCauses>,
}

impl CausePackage {
    pub fn compute(d: &Instance, sigma: &[DenialConstraint]) -> Result<Self> {
        Self::compute_with(d, sigma, &mut Budget::default())
    }

    pub fn compute_with(d: &Instance, sigma: &[DenialConstraint], budget: &mut Budget) -> Result<Self> {
        let all = d.all_endogenous();
        let mut views = Vec::new();
        for dc in sigma {
            let causes = actual_causes_with(&all, &violation_view(dc), budget)?;
            views.push(ViewCauses {
                constraint: dc.clone(),
                entries: causes
                    .reports
                    .into_iter()
                    .map(|r| (r.cause, r.minimal_contingencies))
                    .collect(),
            });
        }
        Ok(CausePackage { views })
    }

    /// Checks the package against `D` and `Σ`: it must cover the same
    /// constraints, every violated view must have causes, and each
    /// `(t, C)` must make `t` counterfactual in `D ∖ C`.
    pub fn validate(&self, d: &Instance, sigma: &[DenialConstraint]) -> Result<()> {
        let bad = |msg: String| Err(Error::InconsistentPackage(msg));
        let ours: Vec<String> = self.views.iter().map(|v| v.constraint.to_string()).collect();
        let theirs: Vec<String> = sigma.iter().map(|k| k.to_string()).collect();
        if ours.iter().collect::<BTreeSet<_>>() != theirs.iter().collect::<BTreeSet<_>>() {
            return bad("package covers a different set of constraints".into());
        }
        for view in &self.views {
            let v = violation_view(&view.constraint);
            if evaluate_bcq(d, &v)? && view.entries.is_empty() {
                return bad(format!("violated constraint {} has no causes", view.constraint));
            }
            for (t, sets) in &view.entries {
                if sets.is_empty() {
                    return bad(format!("{t} has no contingency set"));
                }
                for c in sets {
                    if let Some(a) = c.iter().chain([t]).find(|a| !d.contains(a)) {
                        return bad(format!("{a} is not in the instance"));
                    }
                    if c.contains(t) {
                        return bad(format!("{t} occurs in its own contingency set"));
                    }
                    let rest = d.without(c);
                    if !evaluate_bcq(&rest, &v)? || evaluate_bcq(&rest.without([t]), &v)? {
                        return bad(format!(
                            "{t} is not counterfactual for {} once {c:?} is removed",
                            view.constraint
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}

fn check_input(d: &Instance, sigma: &[DenialConstraint], pkg: &CausePackage) -> Result<()> {
    if !d.is_fully_endogenous() {
        return Err(Error::PartitionedInstance);
    }
    pkg.validate(d, sigma)
}

/// S-repairs from a cause package.
///
/// Every S-repair deletes one set `{t} ∪ C` per violated view, so the
/// deletion sets are the subset-minimal unions over one choice per view.
/// Partial unions that strictly contain another are dropped early, as no
/// completion of them can be minimal.
pub fn repairs_from_causes(d: &Instance, sigma: &[DenialConstraint], pkg: &CausePackage) -> Result<RepairSet> {
    repairs_from_causes_with(d, sigma, pkg, &mut Budget::default())
}

pub fn repairs_from_causes_with(
    d: &Instance,
    sigma: &[DenialConstraint],
    pkg: &CausePackage,
    budget: &mut Budget,
) -> Result<RepairSet> {
    check_input(d, sigma, pkg)?;
    let mut partial: Vec<BTreeSet<GroundAtom>> = vec![BTreeSet::new()];
    for view in pkg.views.iter().filter(|v| !v.entries.is_empty()) {
        let choices = view.deletion_choices();
        let mut next = Vec::new();
        for base in &partial {
            for choice in &choices {
                budget.tick()?;
                next.push(base.union(choice).cloned().collect());
            }
        }
        partial = minimal_sets(next);
    }
    Ok(RepairSet::from_deletions(d, RepairKind::Subset, partial))
}

/// The hitting-set formulation: minimal hitting sets `h` of the per-view
/// cause sets, then for each `h` one `{t} ∪ C` per violated view with
/// `t ∈ h`. It can miss S-repairs when a view's cause set is hit only
/// through tuples whose contingencies are needed elsewhere; see the tests.
pub fn repairs_from_causes_via_hitting_sets(
    d: &Instance,
    sigma: &[DenialConstraint],
    pkg: &CausePackage,
) -> Result<RepairSet> {
    check_input(d, sigma, pkg)?;
    let mut budget = Budget::default();
    let cause_sets: Vec<BTreeSet<GroundAtom>> = pkg
        .views
        .iter()
        .map(ViewCauses::causes)
        .filter(|s| !s.is_empty())
        .collect();
    let violated: Vec<&ViewCauses> = pkg.views.iter().filter(|v| !v.entries.is_empty()).collect();
    let mut deletions = Vec::new();
    for h in minimal_hitting_sets(&cause_sets, &mut budget)? {
        let mut partial: Vec<BTreeSet<GroundAtom>> = vec![BTreeSet::new()];
        for view in &violated {
            let options: Vec<BTreeSet<GroundAtom>> = view
                .entries
                .iter()
                .filter(|(t, _)| h.contains(t))
                .flat_map(|(t, sets)| {
                    sets.iter().map(move |c| {
                        let mut s = c.clone();
                        s.insert(t.clone());
                        s
                    })
                })
                .collect();
            partial = partial
                .iter()
                .flat_map(|base| options.iter().map(move |o| base.union(o).cloned().collect()))
                .collect();
        }
        deletions.extend(partial);
    }
    Ok(RepairSet::from_deletions(
        d,
        RepairKind::Subset,
        minimal_sets(deletions),
    ))
}

/// `{D ∖ ({t} ∪ C) : t cause of V^κ, C ∈ CT(t)}` with every tuple
/// endogenous; for a single constraint these are the S-repairs.
pub fn repairs_from_contingencies(d: &Instance, kappa: &DenialConstraint) -> Result<RepairSet> {
    let pkg = CausePackage::compute(d, std::slice::from_ref(kappa))?;
    let view = &pkg.views[0];
    let deletions = if view.entries.is_empty() {
        vec![BTreeSet::new()]
    } else {
        view.deletion_choices()
    };
    Ok(RepairSet::from_deletions(d, RepairKind::Subset, deletions))
}

/// C-repairs built from the most responsible causes of `V^κ` and their
/// smallest contingency sets.
pub fn c_repairs_from_mrc(d: &Instance, kappa: &DenialConstraint) -> Result<RepairSet> {
    let causes = actual_causes_with(&d.all_endogenous(), &violation_view(kappa), &mut Budget::default())?;
    let mrc = most_responsible(&causes);
    let mut deletions = Vec::new();
    for report in causes.reports.iter().filter(|r| mrc.contains(&r.cause)) {
        let smallest = report.minimal_contingencies.iter().map(BTreeSet::len).min();
        for c in &report.minimal_contingencies {
            if Some(c.len()) == smallest {
                let mut s = c.clone();
                s.insert(report.cause.clone());
                deletions.push(s);
            }
        }
    }
    if deletions.is_empty() {
        deletions.push(BTreeSet::new());
    }
    Ok(RepairSet::from_deletions(d, RepairKind::Cardinality, deletions))
}

/// `A` is consistently true iff `A ∈ D` and `A` is not a cause of `V^κ`
/// with every tuple endogenous.
pub fn cqa_from_causes(d: &Instance, kappa: &DenialConstraint, atom: &GroundAtom) -> Result<bool> {
    if !d.contains(atom) {
        return Ok(false);
    }
    let causes = actual_causes_with(&d.all_endogenous(), &violation_view(kappa), &mut Budget::default())?;
    Ok(causes.get(atom).is_none())
}
