//! Brute-force reference implementations that follow the definitions
//! directly over powersets. Only intended for small inputs and tests.
//!
//! Nothing here may depend on the engines; the equivalence tests would be
//! vacuous otherwise.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::query::{evaluate_bcq, holds_in, violation_view, ConjunctiveQuery, DenialConstraint};
use crate::relational::{GroundAtom, Instance};
use crate::report::{CauseReport, CauseSet, Diagnosis, RepairKind, RepairSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleBudget {
    pub max_subset_universe: usize,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_subset_universe: 12,
        }
    }
}

impl OracleBudget {
    fn admit(&self, size: usize) -> Result<()> {
        if size > self.max_subset_universe {
            Err(Error::BudgetExceeded {
                size,
                budget: self.max_subset_universe,
            })
        } else {
            Ok(())
        }
    }
}

fn members(universe: &[GroundAtom], mask: u32) -> impl Iterator<Item = &GroundAtom> + Clone {
    universe
        .iter()
        .enumerate()
        .filter(move |(i, _)| mask >> i & 1 == 1)
        .map(|(_, a)| a)
}

fn to_set(universe: &[GroundAtom], mask: u32) -> BTreeSet<GroundAtom> {
    members(universe, mask).cloned().collect()
}

fn is_strict_submask(small: u32, big: u32) -> bool {
    small != big && small & big == small
}

/// Members of `masks` with no strict submask in `masks`.
fn minimal_masks(masks: &[u32]) -> Vec<u32> {
    masks
        .iter()
        .copied()
        .filter(|&m| !masks.iter().any(|&o| is_strict_submask(o, m)))
        .collect()
}

/// `Q` evaluated on `D ∖ m` for every `m ⊆ D^n`.
fn truth_after_deleting(d: &Instance, q: &ConjunctiveQuery, endo: &[GroundAtom]) -> Vec<bool> {
    (0u32..1 << endo.len())
        .map(|m| {
            let removed = to_set(endo, m);
            holds_in(d.iter().filter(|a| !removed.contains(*a)), q)
        })
        .collect()
}

/// For every endogenous `t`, every `Γ ⊆ D^n ∖ {t}` such that `t` is a
/// counterfactual cause in `D ∖ Γ`; keeps the subset-minimal ones.
pub fn brute_causes(d: &Instance, q: &ConjunctiveQuery, budget: &OracleBudget) -> Result<CauseSet> {
    q.is_boolean().then_some(()).ok_or(Error::NotBoolean)?;
    let endo: Vec<GroundAtom> = d.endogenous().iter().cloned().collect();
    budget.admit(endo.len())?;
    let truth = truth_after_deleting(d, q, &endo);
    let mut reports = Vec::new();
    for (i, t) in endo.iter().enumerate() {
        let bit = 1u32 << i;
        let contingencies: Vec<u32> = (0u32..1 << endo.len())
            .filter(|&g| g & bit == 0 && truth[g as usize] && !truth[(g | bit) as usize])
            .collect();
        let minimal = minimal_masks(&contingencies);
        if !minimal.is_empty() {
            let sets = minimal.iter().map(|&g| to_set(&endo, g)).collect();
            reports.push(CauseReport::new(t.clone(), sets));
        }
    }
    Ok(CauseSet::new(reports, q.clone(), d))
}

fn consistent_subsets(
    d: &Instance,
    sigma: &[DenialConstraint],
    budget: &OracleBudget,
) -> Result<(Vec<GroundAtom>, Vec<u32>)> {
    let all: Vec<GroundAtom> = d.atom_set().into_iter().collect();
    budget.admit(all.len())?;
    let views: Vec<ConjunctiveQuery> = sigma.iter().map(violation_view).collect();
    let consistent = (0u32..1 << all.len())
        .filter(|&kept| views.iter().all(|v| !holds_in(members(&all, kept), v)))
        .collect();
    Ok((all, consistent))
}

/// Consistent subsets of `D` that are maximal under inclusion.
pub fn brute_s_repairs(d: &Instance, sigma: &[DenialConstraint], budget: &OracleBudget) -> Result<RepairSet> {
    let (all, consistent) = consistent_subsets(d, sigma, budget)?;
    let full = ((1u64 << all.len()) - 1) as u32;
    let maximal = consistent
        .iter()
        .filter(|&&m| !consistent.iter().any(|&o| is_strict_submask(m, o)));
    let deletions = maximal.map(|&kept| to_set(&all, full & !kept));
    Ok(RepairSet::from_deletions(d, RepairKind::Subset, deletions))
}

/// Consistent subsets of `D` of maximum cardinality.
pub fn brute_c_repairs(d: &Instance, sigma: &[DenialConstraint], budget: &OracleBudget) -> Result<RepairSet> {
    let (all, consistent) = consistent_subsets(d, sigma, budget)?;
    let full = ((1u64 << all.len()) - 1) as u32;
    let best = consistent.iter().map(|m| m.count_ones()).max().unwrap_or(0);
    let deletions = consistent
        .iter()
        .filter(|m| m.count_ones() == best)
        .map(|&kept| to_set(&all, full & !kept));
    Ok(RepairSet::from_deletions(d, RepairKind::Cardinality, deletions))
}

/// Subset-minimal `Δ ⊆ D^n` with `D ∖ Δ ⊭ Q`. The observation `D ⊨ Q`
/// is required.
pub fn brute_min_diagnoses(d: &Instance, q: &ConjunctiveQuery, budget: &OracleBudget) -> Result<Vec<Diagnosis>> {
    if !evaluate_bcq(d, q)? {
        return Err(Error::ObservationAbsent);
    }
    let endo: Vec<GroundAtom> = d.endogenous().iter().cloned().collect();
    budget.admit(endo.len())?;
    let truth = truth_after_deleting(d, q, &endo);
    let diagnoses: Vec<u32> = (0u32..1 << endo.len()).filter(|&m| !truth[m as usize]).collect();
    let mut out: Vec<Diagnosis> = minimal_masks(&diagnoses)
        .into_iter()
        .map(|m| Diagnosis {
            abnormal: to_set(&endo, m),
        })
        .collect();
    out.sort();
    Ok(out)
}

/// True iff `atom` is in every S-repair found by powerset search.
pub fn brute_consistent_answer(
    d: &Instance,
    sigma: &[DenialConstraint],
    atom: &GroundAtom,
    budget: &OracleBudget,
) -> Result<bool> {
    Ok(d.contains(atom)
        && brute_s_repairs(d, sigma, budget)?
            .repairs
            .iter()
            .all(|r| r.instance.contains(atom)))
}
