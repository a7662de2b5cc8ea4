//! Conjunctive queries, denial constraints, and the conversions between them.
//!
//! A denial constraint `← A1, ..., An` and the boolean query
//! `∃x̄ (A1 ∧ ... ∧ An)` share one atom list: the query is the constraint's
//! violation view, and the constraint is the query's negation.

mod eval;
mod parse;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::relational::{Constant, GroundAtom, PredicateSig, Schema};

pub use eval::{answers, evaluate_bcq, holds_in, minimal_images, witnesses};
pub use parse::{parse_dc, parse_dcs, parse_ground_atom, parse_query, parse_query_with_schema};
pub(crate) use parse::{Parser, TokenKind};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Variable(String),
    Constant(Constant),
}

impl Term {
    pub fn var(name: &str) -> Self {
        Term::Variable(name.to_string())
    }

    pub fn constant(symbol: &str) -> Self {
        Term::Constant(Constant::new(symbol))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Variable(v) => f.write_str(v),
            Term::Constant(c) => write!(f, "{c}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QueryAtom {
    predicate: PredicateSig,
    args: Vec<Term>,
}

impl QueryAtom {
    pub fn new(predicate: &str, args: Vec<Term>) -> Self {
        QueryAtom {
            predicate: PredicateSig::new(predicate, args.len()),
            args,
        }
    }

    pub fn predicate(&self) -> &PredicateSig {
        &self.predicate
    }

    pub fn name(&self) -> &str {
        &self.predicate.name
    }

    pub fn args(&self) -> &[Term] {
        &self.args
    }

    pub fn variables(&self) -> impl Iterator<Item = &str> + '_ {
        self.args.iter().filter_map(|t| match t {
            Term::Variable(v) => Some(v.as_str()),
            Term::Constant(_) => None,
        })
    }

    /// Applies an assignment. Unbound variables make this `None`.
    pub fn ground(&self, assignment: &BTreeMap<String, Constant>) -> Option<GroundAtom> {
        let args = self
            .args
            .iter()
            .map(|t| match t {
                Term::Constant(c) => Some(c.clone()),
                Term::Variable(v) => assignment.get(v).cloned(),
            })
            .collect::<Option<Vec<_>>>()?;
        Some(GroundAtom::new(self.name(), args))
    }

    fn substitute(&self, binding: &BTreeMap<&str, &Constant>) -> QueryAtom {
        let args = self
            .args
            .iter()
            .map(|t| match t {
                Term::Variable(v) => match binding.get(v.as_str()) {
                    Some(&c) => Term::Constant(c.clone()),
                    None => t.clone(),
                },
                Term::Constant(_) => t.clone(),
            })
            .collect();
        QueryAtom {
            predicate: self.predicate.clone(),
            args,
        }
    }
}

impl fmt::Display for QueryAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.predicate.name)?;
        for (i, t) in self.args.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{t}")?;
        }
        f.write_str(")")
    }
}

fn check_atoms(atoms: &[QueryAtom]) -> Result<()> {
    if atoms.is_empty() {
        return Err(Error::syntax(1, 1, "a rule body needs at least one atom"));
    }
    let mut schema = Schema::new();
    for a in atoms {
        schema.declare(a.predicate())?;
    }
    Ok(())
}

fn write_body(f: &mut fmt::Formatter<'_>, atoms: &[QueryAtom]) -> fmt::Result {
    for (i, a) in atoms.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{a}")?;
    }
    Ok(())
}

/// `Q(x̄) : ∃ȳ (P1(t̄1) ∧ ... ∧ Pm(t̄m))`. Boolean iff `free_vars` is empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConjunctiveQuery {
    free_vars: Vec<String>,
    atoms: Vec<QueryAtom>,
}

impl ConjunctiveQuery {
    pub fn new(free_vars: Vec<String>, atoms: Vec<QueryAtom>) -> Result<Self> {
        check_atoms(&atoms)?;
        for v in &free_vars {
            if !atoms.iter().any(|a| a.variables().any(|x| x == v)) {
                return Err(Error::syntax(
                    1,
                    1,
                    format!("head variable {v} does not occur in the body"),
                ));
            }
        }
        Ok(ConjunctiveQuery { free_vars, atoms })
    }

    pub fn boolean(atoms: Vec<QueryAtom>) -> Result<Self> {
        Self::new(Vec::new(), atoms)
    }

    pub fn free_vars(&self) -> &[String] {
        &self.free_vars
    }

    pub fn atoms(&self) -> &[QueryAtom] {
        &self.atoms
    }

    pub fn is_boolean(&self) -> bool {
        self.free_vars.is_empty()
    }

    /// Distinct variables in order of first occurrence.
    pub fn variables(&self) -> Vec<&str> {
        let mut seen = Vec::new();
        for v in self.atoms.iter().flat_map(QueryAtom::variables) {
            if !seen.contains(&v) {
                seen.push(v);
            }
        }
        seen
    }

    pub(crate) fn require_boolean(&self) -> Result<()> {
        if self.is_boolean() {
            Ok(())
        } else {
            Err(Error::NotBoolean)
        }
    }
}

impl fmt::Display for ConjunctiveQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q({}) :- ", self.free_vars.join(","))?;
        write_body(f, &self.atoms)?;
        f.write_str(".")
    }
}

/// `∀x̄ ¬(A1 ∧ ... ∧ An)`, written `:- A1, ..., An.`
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DenialConstraint {
    atoms: Vec<QueryAtom>,
}

impl DenialConstraint {
    pub fn new(atoms: Vec<QueryAtom>) -> Result<Self> {
        check_atoms(&atoms)?;
        Ok(DenialConstraint { atoms })
    }

    pub fn atoms(&self) -> &[QueryAtom] {
        &self.atoms
    }
}

impl fmt::Display for DenialConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(":- ")?;
        write_body(f, &self.atoms)?;
        f.write_str(".")
    }
}

/// A satisfying assignment together with the set of tuples it uses.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Witness {
    pub assignment: BTreeMap<String, Constant>,
    pub image: BTreeSet<GroundAtom>,
}

/// `κ(Q)`: the constraint that forbids a boolean query from being true.
pub fn dc_of_query(q: &ConjunctiveQuery) -> Result<DenialConstraint> {
    q.require_boolean()?;
    Ok(DenialConstraint { atoms: q.atoms.clone() })
}

/// `V^κ`: true in exactly the instances that violate `κ`.
pub fn violation_view(dc: &DenialConstraint) -> ConjunctiveQuery {
    ConjunctiveQuery {
        free_vars: Vec::new(),
        atoms: dc.atoms.clone(),
    }
}

/// `κ^⟨ā⟩`: the constraint for one candidate answer of an open query.
pub fn ground_answer_dc(q: &ConjunctiveQuery, answer: &[Constant]) -> Result<DenialConstraint> {
    if answer.len() != q.free_vars.len() {
        return Err(Error::ArityMismatch {
            predicate: "q".to_string(),
            expected: q.free_vars.len(),
            found: answer.len(),
        });
    }
    let binding: BTreeMap<&str, &Constant> = q.free_vars.iter().map(String::as_str).zip(answer.iter()).collect();
    Ok(DenialConstraint {
        atoms: q.atoms.iter().map(|a| a.substitute(&binding)).collect(),
    })
}
