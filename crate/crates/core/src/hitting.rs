//! Enumeration of subset-minimal hitting sets.
//!
//! The search branches on the uncovered edge with the fewest selectable
//! vertices. Siblings are explored in canonical order, and each vertex is
//! excluded from the subtrees of the siblings that follow it, so every
//! minimal hitting set is reached along exactly one path. A partial set is
//! abandoned as soon as one of its vertices has no private edge left (an
//! edge it alone hits), since no extension of such a set can be minimal.

use std::collections::BTreeSet;

use crate::error::{Error, Result};

/// Default cap on explored search nodes.
pub const DEFAULT_NODE_LIMIT: u64 = 1 << 20;

/// Counts explored nodes and fails once the limit is passed.
#[derive(Debug, Clone)]
pub struct Budget {
    limit: u64,
    explored: u64,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget { limit, explored: 0 }
    }

    pub fn tick(&mut self) -> Result<()> {
        self.explored += 1;
        if self.explored > self.limit {
            Err(Error::ResourceExceeded { limit: self.limit })
        } else {
            Ok(())
        }
    }

    pub fn explored(&self) -> u64 {
        self.explored
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(DEFAULT_NODE_LIMIT)
    }
}

struct Search<'b> {
    edges: Vec<Vec<usize>>,
    incident: Vec<Vec<usize>>,
    hits: Vec<u32>,
    chosen: Vec<usize>,
    excluded: Vec<bool>,
    found: Vec<Vec<usize>>,
    budget: &'b mut Budget,
}

impl Search<'_> {
    fn add(&mut self, v: usize) {
        self.chosen.push(v);
        for &e in &self.incident[v] {
            self.hits[e] += 1;
        }
    }

    fn remove(&mut self, v: usize) {
        self.chosen.pop();
        for &e in &self.incident[v] {
            self.hits[e] -= 1;
        }
    }

    fn all_have_private_edges(&self) -> bool {
        self.chosen
            .iter()
            .all(|&u| self.incident[u].iter().any(|&e| self.hits[e] == 1))
    }

    fn run(&mut self) -> Result<()> {
        self.budget.tick()?;
        let target = self
            .edges
            .iter()
            .enumerate()
            .filter(|(e, _)| self.hits[*e] == 0)
            .map(|(e, vs)| (vs.iter().filter(|&&v| !self.excluded[v]).count(), e))
            .min();
        let Some((available, edge)) = target else {
            let mut set = self.chosen.clone();
            set.sort_unstable();
            self.found.push(set);
            return Ok(());
        };
        if available == 0 {
            return Ok(());
        }
        let candidates: Vec<usize> = self.edges[edge]
            .iter()
            .copied()
            .filter(|&v| !self.excluded[v])
            .collect();
        let mut newly_excluded = Vec::new();
        let mut outcome = Ok(());
        for v in candidates {
            self.add(v);
            if self.all_have_private_edges() {
                outcome = self.run();
            }
            self.remove(v);
            if outcome.is_err() {
                break;
            }
            self.excluded[v] = true;
            newly_excluded.push(v);
        }
        for v in newly_excluded {
            self.excluded[v] = false;
        }
        outcome
    }
}

/// All inclusion-minimal sets meeting every member of `collection`, in
/// canonical order. An empty collection yields `{∅}`; a collection with an
/// empty member yields nothing.
pub fn minimal_hitting_sets<T: Ord + Clone>(
    collection: &[BTreeSet<T>],
    budget: &mut Budget,
) -> Result<Vec<BTreeSet<T>>> {
    if collection.iter().any(BTreeSet::is_empty) {
        return Ok(Vec::new());
    }
    let universe: Vec<T> = collection
        .iter()
        .flatten()
        .cloned()
        .collect::<BTreeSet<T>>()
        .into_iter()
        .collect();
    let position = |x: &T| universe.binary_search(x).expect("element of the universe");
    let edges: Vec<Vec<usize>> = crate::sets::minimal_sets(
        collection
            .iter()
            .map(|e| e.iter().map(position).collect::<BTreeSet<usize>>()),
    )
    .into_iter()
    .map(|e| e.into_iter().collect())
    .collect();
    let mut incident = vec![Vec::new(); universe.len()];
    for (i, e) in edges.iter().enumerate() {
        for &v in e {
            incident[v].push(i);
        }
    }
    let mut search = Search {
        hits: vec![0; edges.len()],
        edges,
        incident,
        chosen: Vec::new(),
        excluded: vec![false; universe.len()],
        found: Vec::new(),
        budget,
    };
    search.run()?;
    let mut out: Vec<BTreeSet<T>> = search
        .found
        .into_iter()
        .map(|s| s.into_iter().map(|i| universe[i].clone()).collect())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    out.sort();
    Ok(out)
}
