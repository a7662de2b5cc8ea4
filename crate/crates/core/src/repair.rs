//! S-repairs and C-repairs under denial constraints.
//!
//! Repairs delete tuples only, and every tuple is deletable regardless of
//! its tag. The deletion sets of the S-repairs are exactly the minimal
//! hitting sets of the conflict hypergraph.

use std::collections::BTreeSet;

use crate::error::Result;
use crate::hitting::Budget;
use crate::query::{holds_in, minimal_images, violation_view, DenialConstraint};
use crate::relational::{GroundAtom, Instance};
use crate::report::{RepairKind, RepairSet};
use crate::sets::{minimal_sets, minimum_cardinality};

pub use crate::hitting::minimal_hitting_sets;

/// Tuples as vertices, inclusion-minimal violation sets as edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConflictHypergraph {
    pub vertices: BTreeSet<GroundAtom>,
    pub edges: Vec<BTreeSet<GroundAtom>>,
}

impl ConflictHypergraph {
    pub fn build(d: &Instance, sigma: &[DenialConstraint]) -> Result<Self> {
        let mut images = Vec::new();
        for dc in sigma {
            images.extend(minimal_images(d, &violation_view(dc))?);
        }
        Ok(ConflictHypergraph {
            vertices: d.atom_set(),
            edges: minimal_sets(images),
        })
    }

    /// Vertices that occur in no edge.
    pub fn isolated(&self) -> BTreeSet<GroundAtom> {
        let covered: BTreeSet<&GroundAtom> = self.edges.iter().flatten().collect();
        self.vertices.iter().filter(|v| !covered.contains(v)).cloned().collect()
    }
}

pub fn is_consistent(d: &Instance, sigma: &[DenialConstraint]) -> bool {
    sigma.iter().all(|dc| !holds_in(d.iter(), &violation_view(dc)))
}

pub fn s_repairs(d: &Instance, sigma: &[DenialConstraint]) -> Result<RepairSet> {
    s_repairs_with(d, sigma, &mut Budget::default())
}

pub fn s_repairs_with(d: &Instance, sigma: &[DenialConstraint], budget: &mut Budget) -> Result<RepairSet> {
    let graph = ConflictHypergraph::build(d, sigma)?;
    let deletions = minimal_hitting_sets(&graph.edges, budget)?;
    Ok(RepairSet::from_deletions(d, RepairKind::Subset, deletions))
}

/// Minimum-cardinality members of the S-repairs.
pub fn c_repairs(d: &Instance, sigma: &[DenialConstraint]) -> Result<RepairSet> {
    c_repairs_with(d, sigma, &mut Budget::default())
}

pub fn c_repairs_with(d: &Instance, sigma: &[DenialConstraint], budget: &mut Budget) -> Result<RepairSet> {
    let s = s_repairs_with(d, sigma, budget)?;
    let smallest = minimum_cardinality(&s.deletion_sets());
    Ok(RepairSet::from_deletions(d, RepairKind::Cardinality, smallest))
}

pub fn repairs(d: &Instance, sigma: &[DenialConstraint], kind: RepairKind, budget: &mut Budget) -> Result<RepairSet> {
    match kind {
        RepairKind::Subset => s_repairs_with(d, sigma, budget),
        RepairKind::Cardinality => c_repairs_with(d, sigma, budget),
    }
}

/// True iff `atom` survives in every repair of the given kind. Atoms not
/// in `D` are never consistent answers.
pub fn consistent_answer_ground(
    d: &Instance,
    sigma: &[DenialConstraint],
    atom: &GroundAtom,
    kind: RepairKind,
) -> Result<bool> {
    consistent_answer_ground_with(d, sigma, atom, kind, &mut Budget::default())
}

pub fn consistent_answer_ground_with(
    d: &Instance,
    sigma: &[DenialConstraint],
    atom: &GroundAtom,
    kind: RepairKind,
    budget: &mut Budget,
) -> Result<bool> {
    if !d.contains(atom) {
        return Ok(false);
    }
    let set = repairs(d, sigma, kind, budget)?;
    Ok(set.repairs.iter().all(|r| !r.deleted.contains(atom)))
}
