//! Small set-algebra helpers over `BTreeSet`s.

use std::collections::BTreeSet;

/// Keeps the inclusion-minimal members of a family, each once, sorted.
pub fn minimal_sets<T: Ord + Clone>(family: impl IntoIterator<Item = BTreeSet<T>>) -> Vec<BTreeSet<T>> {
    let mut all: Vec<BTreeSet<T>> = family.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
    all.sort_by_key(BTreeSet::len);
    let mut kept: Vec<BTreeSet<T>> = Vec::new();
    for s in all {
        if !kept.iter().any(|k| k.is_subset(&s)) {
            kept.push(s);
        }
    }
    kept.sort();
    kept
}

/// Members of minimum cardinality, sorted.
pub fn minimum_cardinality<T: Ord + Clone>(family: &[BTreeSet<T>]) -> Vec<BTreeSet<T>> {
    let Some(min) = family.iter().map(BTreeSet::len).min() else {
        return Vec::new();
    };
    let mut out: Vec<BTreeSet<T>> = family.iter().filter(|s| s.len() == min).cloned().collect();
    out.sort();
    out.dedup();
    out
}

/// True iff `candidate` meets every member of `family`.
pub fn hits_all<T: Ord>(candidate: &BTreeSet<T>, family: &[BTreeSet<T>]) -> bool {
    family.iter().all(|e| !e.is_disjoint(candidate))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[u8]) -> BTreeSet<u8> {
        v.iter().copied().collect()
    }

    #[test]
    fn minimal_sets_drops_supersets_and_duplicates() {
        assert_eq!(
            minimal_sets([s(&[1, 2]), s(&[1]), s(&[2, 3]), s(&[1]), s(&[1, 2, 3])]),
            vec![s(&[1]), s(&[2, 3])]
        );
        assert_eq!(minimal_sets([s(&[]), s(&[1])]), vec![s(&[])]);
        assert!(minimal_sets(Vec::<BTreeSet<u8>>::new()).is_empty());
    }

    #[test]
    fn minimum_cardinality_and_hitting() {
        let fam = [s(&[1, 2]), s(&[3]), s(&[4])];
        assert_eq!(minimum_cardinality(&fam), vec![s(&[3]), s(&[4])]);
        assert!(hits_all(&s(&[1, 3, 4]), &fam));
        assert!(!hits_all(&s(&[1, 3]), &fam));
        assert!(hits_all(&s(&[]), &[]));
    }
}
