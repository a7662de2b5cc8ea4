//! Result types shared by the engines and the brute-force oracles.

use std::collections::BTreeSet;
use std::fmt;

use num_rational::Ratio;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::query::ConjunctiveQuery;
use crate::relational::{GroundAtom, Instance};

/// Exact responsibility: `0` or `1/k` for `k ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Responsibility(Ratio<u64>);

impl Responsibility {
    pub fn zero() -> Self {
        Responsibility(Ratio::from_integer(0))
    }

    /// `1 / (|Γ| + 1)` for a smallest contingency set `Γ`.
    pub fn from_contingency_size(size: usize) -> Self {
        Responsibility(Ratio::new(1, size as u64 + 1))
    }

    pub fn ratio(&self) -> Ratio<u64> {
        self.0
    }

    pub fn numer(&self) -> u64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> u64 {
        *self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.numer() == 0
    }

    pub fn to_f64(&self) -> f64 {
        self.numer() as f64 / self.denom() as f64
    }
}

impl fmt::Display for Responsibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Serialize for Responsibility {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("Responsibility", 3)?;
        s.serialize_field("num", &self.numer())?;
        s.serialize_field("den", &self.denom())?;
        s.serialize_field("decimal", &self.to_f64())?;
        s.end()
    }
}

/// An actual cause with all of its subset-minimal contingency sets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CauseReport {
    pub cause: GroundAtom,
    pub responsibility: Responsibility,
    pub minimal_contingencies: Vec<BTreeSet<GroundAtom>>,
}

impl CauseReport {
    /// Sorts the contingency sets and derives the responsibility from the
    /// smallest one. `contingencies` must be non-empty.
    pub fn new(cause: GroundAtom, mut contingencies: Vec<BTreeSet<GroundAtom>>) -> Self {
        contingencies.sort();
        contingencies.dedup();
        let smallest = contingencies
            .iter()
            .map(BTreeSet::len)
            .min()
            .expect("an actual cause has at least one contingency set");
        CauseReport {
            cause,
            responsibility: Responsibility::from_contingency_size(smallest),
            minimal_contingencies: contingencies,
        }
    }

    pub fn is_counterfactual(&self) -> bool {
        self.minimal_contingencies.first().is_some_and(BTreeSet::is_empty)
    }
}

/// `CS(D^n, D^x, Q)` with full reports, ordered by cause.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CauseSet {
    pub reports: Vec<CauseReport>,
    pub query: ConjunctiveQuery,
    /// Fingerprint of the instance the causes were computed on.
    pub instance_id: String,
}

impl CauseSet {
    pub fn new(mut reports: Vec<CauseReport>, query: ConjunctiveQuery, instance: &Instance) -> Self {
        reports.sort_by(|a, b| a.cause.cmp(&b.cause));
        CauseSet {
            reports,
            query,
            instance_id: instance.fingerprint(),
        }
    }

    pub fn causes(&self) -> BTreeSet<GroundAtom> {
        self.reports.iter().map(|r| r.cause.clone()).collect()
    }

    pub fn get(&self, atom: &GroundAtom) -> Option<&CauseReport> {
        self.reports.iter().find(|r| &r.cause == atom)
    }

    /// `ρ(t)`, zero for tuples that are not causes.
    pub fn responsibility_of(&self, atom: &GroundAtom) -> Responsibility {
        self.get(atom)
            .map(|r| r.responsibility)
            .unwrap_or_else(Responsibility::zero)
    }

    pub fn is_empty(&self) -> bool {
        self.reports.is_empty()
    }

    pub fn len(&self) -> usize {
        self.reports.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum RepairKind {
    #[serde(rename = "s")]
    Subset,
    #[serde(rename = "c")]
    Cardinality,
}

impl fmt::Display for RepairKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RepairKind::Subset => "S",
            RepairKind::Cardinality => "C",
        })
    }
}

/// A repair `D' ⊆ D` together with `D ∖ D'`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Repair {
    pub instance: Instance,
    pub deleted: BTreeSet<GroundAtom>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepairSet {
    pub kind: RepairKind,
    pub repairs: Vec<Repair>,
}

impl RepairSet {
    /// One repair per distinct deletion set, ordered by deletion set.
    pub fn from_deletions(
        d: &Instance,
        kind: RepairKind,
        deletions: impl IntoIterator<Item = BTreeSet<GroundAtom>>,
    ) -> Self {
        let deletions: BTreeSet<BTreeSet<GroundAtom>> = deletions.into_iter().collect();
        RepairSet {
            kind,
            repairs: deletions
                .into_iter()
                .map(|deleted| Repair {
                    instance: d.without(&deleted),
                    deleted,
                })
                .collect(),
        }
    }

    pub fn deletion_sets(&self) -> Vec<BTreeSet<GroundAtom>> {
        self.repairs.iter().map(|r| r.deleted.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.repairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.repairs.is_empty()
    }
}

/// A set of endogenous tuples assumed abnormal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Diagnosis {
    pub abnormal: BTreeSet<GroundAtom>,
}
