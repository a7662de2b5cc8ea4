//! Consistency-based diagnosis of an unexpectedly true boolean query.
//!
//! The system description is the completion of `D` plus the query's
//! constraint guarded by abnormality atoms. Its only model restricted to
//! the non-abnormal tuples is `D ∖ Δ`, so `Δ` restores consistency with the
//! observation exactly when `D ∖ Δ ⊭ Q`. That check is what
//! [`is_diagnosis`] runs; the rendered axioms are for display.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::causality::Conflicts;
use crate::error::{Error, Result};
use crate::hitting::Budget;
use crate::query::{evaluate_bcq, ConjunctiveQuery, QueryAtom, Term};
use crate::relational::{Constant, GroundAtom, Instance, PredicateSig};
use crate::report::{CauseReport, CauseSet, Diagnosis};
use crate::sets::minimum_cardinality;

/// `∀x̄ ¬(P1(x̄1) ∧ ¬ab_P1(x̄1) ∧ ... ∧ Pm(x̄m) ∧ ¬ab_Pm(x̄m))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtendedConstraint {
    atoms: Vec<QueryAtom>,
    names: BTreeMap<String, String>,
}

impl ExtendedConstraint {
    fn new(q: &ConjunctiveQuery) -> Self {
        ExtendedConstraint {
            atoms: q.atoms().to_vec(),
            names: display_names(q),
        }
    }

    pub fn atoms(&self) -> &[QueryAtom] {
        &self.atoms
    }

    /// The `¬ab_P(x̄)` guards, one per query atom.
    pub fn abnormality_guards(&self) -> Vec<String> {
        self.atoms
            .iter()
            .map(|a| format!("¬{}", self.render_atom(&format!("ab_{}", a.name()), a)))
            .collect()
    }

    fn render_atom(&self, name: &str, atom: &QueryAtom) -> String {
        let args: Vec<String> = atom
            .args()
            .iter()
            .map(|t| match t {
                Term::Variable(v) => self.names[v].clone(),
                Term::Constant(c) => c.to_string(),
            })
            .collect();
        format!("{name}({})", args.join(","))
    }
}

impl fmt::Display for ExtendedConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = Vec::new();
        for a in &self.atoms {
            for v in a.variables() {
                let shown = &self.names[v];
                if !seen.contains(shown) {
                    seen.push(shown.clone());
                }
            }
        }
        let conjuncts: Vec<String> = self
            .atoms
            .iter()
            .zip(self.abnormality_guards())
            .map(|(a, guard)| format!("{} ∧ {guard}", self.render_atom(a.name(), a)))
            .collect();
        write!(f, "{}¬({})", quantifier(&seen), conjuncts.join(" ∧ "))
    }
}

/// Query variables shown in lower case, unless that would clash.
fn display_names(q: &ConjunctiveQuery) -> BTreeMap<String, String> {
    let constants: BTreeSet<String> = q
        .atoms()
        .iter()
        .flat_map(|a| a.args())
        .filter_map(|t| match t {
            Term::Constant(c) => Some(c.to_string()),
            Term::Variable(_) => None,
        })
        .collect();
    let vars = q.variables();
    let lowered: Vec<String> = vars.iter().map(|v| v.to_lowercase()).collect();
    let clash =
        lowered.iter().any(|l| constants.contains(l)) || lowered.iter().collect::<BTreeSet<_>>().len() != lowered.len();
    vars.iter()
        .zip(lowered)
        .map(|(v, l)| (v.to_string(), if clash { v.to_string() } else { l }))
        .collect()
}

fn quantifier(vars: &[String]) -> String {
    if vars.is_empty() {
        String::new()
    } else if vars.iter().all(|v| v.chars().count() == 1) {
        format!("∀{}", vars.concat())
    } else {
        format!("∀{}", vars.join(","))
    }
}

fn positional_vars(arity: usize) -> Vec<String> {
    const NAMES: [&str; 6] = ["x", "y", "z", "w", "u", "v"];
    if arity <= NAMES.len() {
        NAMES[..arity].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=arity).map(|i| format!("x{i}")).collect()
    }
}

fn pattern(name: &str, vars: &[String]) -> String {
    format!("{name}({})", vars.join(","))
}

/// The sentences of the system description, as display text except for
/// the extended constraint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemDescription {
    pub completion_axioms: Vec<String>,
    pub unique_names: Vec<String>,
    pub extended_constraint: ExtendedConstraint,
    pub inclusion_dependencies: Vec<String>,
    pub normality_defaults: Vec<String>,
}

impl SystemDescription {
    fn new(d: &Instance, q: &ConjunctiveQuery) -> Self {
        let mut predicates: BTreeSet<PredicateSig> = d.schema().signatures().collect();
        predicates.extend(q.atoms().iter().map(|a| a.predicate().clone()));

        let mut completion_axioms = Vec::new();
        let mut inclusion_dependencies = Vec::new();
        let mut normality_defaults = Vec::new();
        for sig in &predicates {
            let vars = positional_vars(sig.arity);
            let head = pattern(&sig.name, &vars);
            let ab = pattern(&format!("ab_{}", sig.name), &vars);
            let q = quantifier(&vars);
            let mut sorted: Vec<&GroundAtom> = d.iter().filter(|a| a.predicate() == sig).collect();
            sorted.sort();
            completion_axioms.push(if sorted.is_empty() {
                format!("{q} ¬{head}")
            } else {
                let disjuncts: Vec<String> = sorted
                    .iter()
                    .map(|t| {
                        let eqs: Vec<String> = vars.iter().zip(t.args()).map(|(v, c)| format!("{v} = {c}")).collect();
                        if eqs.len() > 1 && sorted.len() > 1 {
                            format!("({})", eqs.join(" ∧ "))
                        } else {
                            eqs.join(" ∧ ")
                        }
                    })
                    .collect();
                if vars.is_empty() {
                    head.clone()
                } else {
                    format!("{q}({head} ↔ {})", disjuncts.join(" ∨ "))
                }
            });
            inclusion_dependencies.push(format!("{q}({ab} → {head})"));
            normality_defaults.push(format!("{q}({ab} → false)"));
        }

        let atoms = d.atom_set();
        let mut constants: Vec<&Constant> = Vec::new();
        for a in &atoms {
            for c in a.args() {
                if !constants.contains(&c) {
                    constants.push(c);
                }
            }
        }
        let mut unique_names = Vec::new();
        for (i, a) in constants.iter().enumerate() {
            for b in &constants[i + 1..] {
                unique_names.push(format!("{a} ≠ {b}"));
            }
        }

        SystemDescription {
            completion_axioms,
            unique_names,
            extended_constraint: ExtendedConstraint::new(q),
            inclusion_dependencies,
            normality_defaults,
        }
    }

    /// Multi-line text listing every sentence group.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let groups: [(&str, Vec<String>); 5] = [
            ("predicate completion", self.completion_axioms.clone()),
            ("unique names", self.unique_names.clone()),
            ("extended constraint", vec![self.extended_constraint.to_string()]),
            ("inclusion dependencies", self.inclusion_dependencies.clone()),
            ("normality assumption", self.normality_defaults.clone()),
        ];
        for (title, lines) in groups {
            out.push_str(title);
            out.push_str(":\n");
            for l in lines {
                out.push_str("  ");
                out.push_str(&l);
                out.push('\n');
            }
        }
        out
    }
}

#[derive(Debug, Clone, Serialize)]
struct RenderedSd<'a> {
    completion_axioms: &'a [String],
    unique_names: &'a [String],
    extended_constraint: String,
    inclusion_dependencies: &'a [String],
    normality_defaults: &'a [String],
}

impl Serialize for SystemDescription {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        RenderedSd {
            completion_axioms: &self.completion_axioms,
            unique_names: &self.unique_names,
            extended_constraint: self.extended_constraint.to_string(),
            inclusion_dependencies: &self.inclusion_dependencies,
            normality_defaults: &self.normality_defaults,
        }
        .serialize(serializer)
    }
}

/// `M = (SD, D^n, Q)` for an observed `D ⊨ Q`.
#[derive(Debug, Clone)]
pub struct DiagnosisProblem {
    pub instance: Instance,
    pub query: ConjunctiveQuery,
    pub system_description: SystemDescription,
}

pub fn build_diagnosis_problem(d: &Instance, q: &ConjunctiveQuery) -> Result<DiagnosisProblem> {
    if !evaluate_bcq(d, q)? {
        return Err(Error::ObservationAbsent);
    }
    Ok(DiagnosisProblem {
        instance: d.clone(),
        query: q.clone(),
        system_description: SystemDescription::new(d, q),
    })
}

fn require_abnormal_candidates<'a>(
    m: &DiagnosisProblem,
    atoms: impl IntoIterator<Item = &'a GroundAtom>,
) -> Result<()> {
    match atoms.into_iter().find(|a| !m.instance.is_endogenous(a)) {
        Some(a) => Err(Error::NotEndogenous(a.clone())),
        None => Ok(()),
    }
}

/// `(D ∖ Δ) ⊭ Q`.
pub fn is_diagnosis(m: &DiagnosisProblem, delta: &BTreeSet<GroundAtom>) -> Result<bool> {
    require_abnormal_candidates(m, delta)?;
    Ok(!evaluate_bcq(&m.instance.without(delta), &m.query)?)
}

pub fn minimal_diagnoses(m: &DiagnosisProblem) -> Result<Vec<Diagnosis>> {
    minimal_diagnoses_with(m, &mut Budget::default())
}

pub fn minimal_diagnoses_with(m: &DiagnosisProblem, budget: &mut Budget) -> Result<Vec<Diagnosis>> {
    Ok(Conflicts::of(&m.instance, &m.query)?
        .minimal_falsifiers(budget)?
        .into_iter()
        .map(|abnormal| Diagnosis { abnormal })
        .collect())
}

/// `D(M, t)`: the minimal diagnoses that contain `t`.
pub fn diagnoses_containing(m: &DiagnosisProblem, t: &GroundAtom) -> Result<Vec<Diagnosis>> {
    require_abnormal_candidates(m, [t])?;
    Ok(minimal_diagnoses(m)?
        .into_iter()
        .filter(|d| d.abnormal.contains(t))
        .collect())
}

/// `MCD(M, t)`: the members of `D(M, t)` of least cardinality.
pub fn mcd(m: &DiagnosisProblem, t: &GroundAtom) -> Result<Vec<Diagnosis>> {
    let containing: Vec<BTreeSet<GroundAtom>> = diagnoses_containing(m, t)?.into_iter().map(|d| d.abnormal).collect();
    Ok(minimum_cardinality(&containing)
        .into_iter()
        .map(|abnormal| Diagnosis { abnormal })
        .collect())
}

/// Causes are the tuples in some minimal diagnosis; each `Δ ∈ D(M, t)`
/// contributes the contingency set `Δ ∖ {t}`.
pub fn causes_from_diagnoses(m: &DiagnosisProblem) -> Result<CauseSet> {
    causes_from_diagnoses_with(m, &mut Budget::default())
}

pub fn causes_from_diagnoses_with(m: &DiagnosisProblem, budget: &mut Budget) -> Result<CauseSet> {
    let mut by_tuple: BTreeMap<GroundAtom, Vec<BTreeSet<GroundAtom>>> = BTreeMap::new();
    for diagnosis in minimal_diagnoses_with(m, budget)? {
        for t in &diagnosis.abnormal {
            let mut rest = diagnosis.abnormal.clone();
            rest.remove(t);
            by_tuple.entry(t.clone()).or_default().push(rest);
        }
    }
    let reports = by_tuple
        .into_iter()
        .map(|(t, sets)| CauseReport::new(t, sets))
        .collect();
    Ok(CauseSet::new(reports, m.query.clone(), &m.instance))
}
