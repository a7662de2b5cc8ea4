//! Actual causes, contingency sets, and responsibility for a boolean query.
//!
//! Deleting endogenous tuples falsifies `Q` exactly when the deletion meets
//! the endogenous part of every minimal witness image. A set `Γ ∪ {t}`
//! with `Γ` a subset-minimal contingency set for `t` is therefore a minimal
//! hitting set of those parts that contains `t`, and conversely. Causes and
//! contingencies are read off the minimal hitting sets.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::hitting::{minimal_hitting_sets, Budget};
use crate::query::{evaluate_bcq, minimal_images, ConjunctiveQuery};
use crate::relational::{GroundAtom, Instance};
use crate::report::{CauseReport, CauseSet, Responsibility};

/// Endogenous parts of the minimal witness images of `Q` in `D`.
#[derive(Debug, Clone)]
pub(crate) struct Conflicts {
    pub satisfied: bool,
    /// Some witness image lies entirely in `D^x`, so no endogenous
    /// deletion can make the query false.
    pub unfalsifiable: bool,
    pub edges: Vec<BTreeSet<GroundAtom>>,
}

impl Conflicts {
    pub fn of(d: &Instance, q: &ConjunctiveQuery) -> Result<Self> {
        let images = minimal_images(d, q)?;
        let edges: Vec<BTreeSet<GroundAtom>> = images
            .into_iter()
            .map(|img| img.into_iter().filter(|a| d.is_endogenous(a)).collect())
            .collect();
        Ok(Conflicts {
            satisfied: !edges.is_empty(),
            unfalsifiable: edges.iter().any(BTreeSet::is_empty),
            edges: crate::sets::minimal_sets(edges),
        })
    }

    /// Minimal endogenous deletion sets that falsify the query; empty when
    /// the query is already false or cannot be falsified.
    pub fn minimal_falsifiers(&self, budget: &mut Budget) -> Result<Vec<BTreeSet<GroundAtom>>> {
        if !self.satisfied || self.unfalsifiable {
            return Ok(Vec::new());
        }
        minimal_hitting_sets(&self.edges, budget)
    }
}

pub(crate) fn require_endogenous(d: &Instance, t: &GroundAtom) -> Result<()> {
    if !d.contains(t) {
        Err(Error::NotInInstance(t.clone()))
    } else if !d.is_endogenous(t) {
        Err(Error::NotEndogenous(t.clone()))
    } else {
        Ok(())
    }
}

fn contingency_families(
    d: &Instance,
    q: &ConjunctiveQuery,
    budget: &mut Budget,
) -> Result<BTreeMap<GroundAtom, Vec<BTreeSet<GroundAtom>>>> {
    let mut families: BTreeMap<GroundAtom, Vec<BTreeSet<GroundAtom>>> = BTreeMap::new();
    for falsifier in Conflicts::of(d, q)?.minimal_falsifiers(budget)? {
        for t in &falsifier {
            let mut rest = falsifier.clone();
            rest.remove(t);
            families.entry(t.clone()).or_default().push(rest);
        }
    }
    Ok(families)
}

/// `D ⊨ Q` and `D ∖ {t} ⊭ Q`.
pub fn is_counterfactual_cause(d: &Instance, q: &ConjunctiveQuery, t: &GroundAtom) -> Result<bool> {
    require_endogenous(d, t)?;
    Ok(evaluate_bcq(d, q)? && !evaluate_bcq(&d.without([t]), q)?)
}

pub fn is_actual_cause(d: &Instance, q: &ConjunctiveQuery, t: &GroundAtom) -> Result<bool> {
    Ok(!minimal_contingency_sets(d, q, t)?.is_empty())
}

/// The subset-minimal contingency sets of `t`; empty iff `t` is not an
/// actual cause. A counterfactual cause has `{∅}`.
pub fn minimal_contingency_sets(
    d: &Instance,
    q: &ConjunctiveQuery,
    t: &GroundAtom,
) -> Result<Vec<BTreeSet<GroundAtom>>> {
    minimal_contingency_sets_with(d, q, t, &mut Budget::default())
}

pub fn minimal_contingency_sets_with(
    d: &Instance,
    q: &ConjunctiveQuery,
    t: &GroundAtom,
    budget: &mut Budget,
) -> Result<Vec<BTreeSet<GroundAtom>>> {
    require_endogenous(d, t)?;
    q.require_boolean()?;
    let mut sets = contingency_families(d, q, budget)?.remove(t).unwrap_or_default();
    sets.sort();
    Ok(sets)
}

/// `ρ(t)`: `1/(1+k)` for the smallest contingency size `k`, zero for
/// tuples that are not actual causes.
pub fn responsibility(d: &Instance, q: &ConjunctiveQuery, t: &GroundAtom) -> Result<Responsibility> {
    responsibility_with(d, q, t, &mut Budget::default())
}

pub fn responsibility_with(
    d: &Instance,
    q: &ConjunctiveQuery,
    t: &GroundAtom,
    budget: &mut Budget,
) -> Result<Responsibility> {
    require_endogenous(d, t)?;
    if !evaluate_bcq(d, q)? {
        return Err(Error::QueryNotSatisfied);
    }
    let sets = minimal_contingency_sets_with(d, q, t, budget)?;
    Ok(sets
        .iter()
        .map(BTreeSet::len)
        .min()
        .map(Responsibility::from_contingency_size)
        .unwrap_or_else(Responsibility::zero))
}

/// `CS(D^n, D^x, Q)` with contingencies and responsibilities. Empty when
/// `D ⊭ Q`.
pub fn actual_causes(d: &Instance, q: &ConjunctiveQuery) -> Result<CauseSet> {
    actual_causes_with(d, q, &mut Budget::default())
}

pub fn actual_causes_with(d: &Instance, q: &ConjunctiveQuery, budget: &mut Budget) -> Result<CauseSet> {
    q.require_boolean()?;
    let reports = contingency_families(d, q, budget)?
        .into_iter()
        .map(|(t, sets)| CauseReport::new(t, sets))
        .collect();
    Ok(CauseSet::new(reports, q.clone(), d))
}

/// Causes of maximal responsibility.
pub fn most_responsible_causes(d: &Instance, q: &ConjunctiveQuery) -> Result<BTreeSet<GroundAtom>> {
    Ok(most_responsible(&actual_causes(d, q)?))
}

/// Causes of maximal responsibility within an already computed cause set.
pub fn most_responsible(causes: &CauseSet) -> BTreeSet<GroundAtom> {
    let Some(best) = causes.reports.iter().map(|r| r.responsibility).max() else {
        return BTreeSet::new();
    };
    causes
        .reports
        .iter()
        .filter(|r| r.responsibility == best)
        .map(|r| r.cause.clone())
        .collect()
}
