//! Random small instances, queries and constraints for the property and
//! acceptance suites. Signature: P/1, R/2, S/1, T/2 over constants a, b, c.

#![allow(dead_code)]

use dbcause::query::{ConjunctiveQuery, DenialConstraint, QueryAtom, Term};
use dbcause::relational::{make_instance, GroundAtom, Instance, Tag};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

pub const PREDICATES: [(&str, usize); 4] = [("P", 1), ("R", 2), ("S", 1), ("T", 2)];
pub const CONSTANTS: [&str; 3] = ["a", "b", "c"];
pub const VARIABLES: [&str; 3] = ["X", "Y", "Z"];
pub const MAX_TUPLES: usize = 12;
pub const MAX_ENDOGENOUS: usize = 10;

#[derive(Debug, Clone)]
pub struct Case {
    pub instance: Instance,
    pub query: ConjunctiveQuery,
    pub constraints: Vec<DenialConstraint>,
}

pub fn ground_atom() -> impl Strategy<Value = GroundAtom> {
    (0..PREDICATES.len(), 0..CONSTANTS.len(), 0..CONSTANTS.len()).prop_map(|(p, a, b)| {
        let (name, arity) = PREDICATES[p];
        GroundAtom::new(name, [CONSTANTS[a], CONSTANTS[b]].into_iter().take(arity))
    })
}

fn tag() -> impl Strategy<Value = Tag> {
    prop_oneof![4 => Just(Tag::Endogenous), 1 => Just(Tag::Exogenous)]
}

/// At most `MAX_TUPLES` distinct tuples, at most `MAX_ENDOGENOUS` of them
/// endogenous (surplus ones are made exogenous).
pub fn instance() -> impl Strategy<Value = Instance> {
    prop::collection::vec((ground_atom(), tag()), 0..=MAX_TUPLES).prop_map(|facts| {
        let mut seen = std::collections::BTreeSet::new();
        let mut endogenous = 0;
        let mut tagged = Vec::new();
        for (atom, mut tag) in facts {
            if !seen.insert(atom.clone()) {
                continue;
            }
            if tag == Tag::Endogenous {
                if endogenous == MAX_ENDOGENOUS {
                    tag = Tag::Exogenous;
                } else {
                    endogenous += 1;
                }
            }
            tagged.push((atom, tag));
        }
        make_instance(tagged).expect("fixed signature")
    })
}

fn term() -> impl Strategy<Value = Term> {
    prop_oneof![
        5 => (0..VARIABLES.len()).prop_map(|i| Term::var(VARIABLES[i])),
        1 => (0..CONSTANTS.len()).prop_map(|i| Term::constant(CONSTANTS[i])),
    ]
}

fn query_atom() -> impl Strategy<Value = QueryAtom> {
    (0..PREDICATES.len(), term(), term()).prop_map(|(p, x, y)| {
        let (name, arity) = PREDICATES[p];
        QueryAtom::new(name, [x, y].into_iter().take(arity).collect())
    })
}

/// A boolean conjunctive query with one to three atoms.
pub fn query() -> impl Strategy<Value = ConjunctiveQuery> {
    prop::collection::vec(query_atom(), 1..=3).prop_map(|atoms| ConjunctiveQuery::boolean(atoms).unwrap())
}

pub fn constraint() -> impl Strategy<Value = DenialConstraint> {
    prop::collection::vec(query_atom(), 1..=3).prop_map(|atoms| DenialConstraint::new(atoms).unwrap())
}

pub fn case() -> impl Strategy<Value = Case> {
    (instance(), query(), prop::collection::vec(constraint(), 1..=3)).prop_map(|(instance, query, constraints)| Case {
        instance,
        query,
        constraints,
    })
}

/// A runner with a fixed seed, so that repeated runs see the same cases.
pub fn seeded_runner(cases: u32) -> TestRunner {
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}
