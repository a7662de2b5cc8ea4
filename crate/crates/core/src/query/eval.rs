//! Naive backtracking join. Query atoms are visited in ascending order of
//! relation size; ties keep the written order.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::ControlFlow;

use crate::error::Result;
use crate::relational::{Constant, GroundAtom, Instance};
use crate::sets::minimal_sets;

use super::{ConjunctiveQuery, QueryAtom, Term, Witness};

type Binding<'q, 'a> = Vec<(&'q str, &'a Constant)>;

struct Index<'a> {
    by_pred: BTreeMap<(String, usize), Vec<&'a GroundAtom>>,
}

impl<'a> Index<'a> {
    fn new(atoms: impl IntoIterator<Item = &'a GroundAtom>) -> Self {
        let mut by_pred: BTreeMap<(String, usize), Vec<&GroundAtom>> = BTreeMap::new();
        for a in atoms {
            by_pred
                .entry((a.name().to_string(), a.args().len()))
                .or_default()
                .push(a);
        }
        for v in by_pred.values_mut() {
            v.sort();
        }
        Index { by_pred }
    }

    fn relation(&self, atom: &QueryAtom) -> &[&'a GroundAtom] {
        self.by_pred
            .get(&(atom.name().to_string(), atom.args().len()))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }
}

fn lookup<'a>(binding: &Binding<'_, 'a>, var: &str) -> Option<&'a Constant> {
    binding.iter().find(|(v, _)| *v == var).map(|(_, c)| *c)
}

/// Extends `binding` so that `pattern` maps onto `fact`; on failure the
/// binding is left as it was.
fn unify<'q, 'a>(pattern: &'q QueryAtom, fact: &'a GroundAtom, binding: &mut Binding<'q, 'a>) -> bool {
    let mark = binding.len();
    for (term, c) in pattern.args().iter().zip(fact.args()) {
        let ok = match term {
            Term::Constant(k) => k == c,
            Term::Variable(v) => match lookup(binding, v) {
                Some(bound) => bound == c,
                None => {
                    binding.push((v.as_str(), c));
                    true
                }
            },
        };
        if !ok {
            binding.truncate(mark);
            return false;
        }
    }
    true
}

fn search<'q, 'a>(
    order: &[&'q QueryAtom],
    index: &Index<'a>,
    binding: &mut Binding<'q, 'a>,
    used: &mut Vec<&'a GroundAtom>,
    visit: &mut dyn FnMut(&Binding<'q, 'a>, &[&'a GroundAtom]) -> ControlFlow<()>,
) -> ControlFlow<()> {
    let Some((first, rest)) = order.split_first() else {
        return visit(binding, used);
    };
    for &fact in index.relation(first) {
        let mark = binding.len();
        if unify(first, fact, binding) {
            used.push(fact);
            let flow = search(rest, index, binding, used, visit);
            used.pop();
            binding.truncate(mark);
            flow?;
        }
    }
    ControlFlow::Continue(())
}

fn run<'q, 'a>(
    atoms: impl IntoIterator<Item = &'a GroundAtom>,
    q: &'q ConjunctiveQuery,
    mut visit: impl FnMut(&Binding<'q, 'a>, &[&'a GroundAtom]) -> ControlFlow<()>,
) {
    let index = Index::new(atoms);
    let mut order: Vec<&QueryAtom> = q.atoms().iter().collect();
    order.sort_by_key(|a| index.relation(a).len());
    let _ = search(&order, &index, &mut Vec::new(), &mut Vec::new(), &mut visit);
}

/// True iff some assignment maps every query atom into `atoms`. Free
/// variables, if any, are treated existentially.
pub fn holds_in<'a>(atoms: impl IntoIterator<Item = &'a GroundAtom>, q: &ConjunctiveQuery) -> bool {
    let mut found = false;
    run(atoms, q, |_, _| {
        found = true;
        ControlFlow::Break(())
    });
    found
}

/// `D ⊨ Q` for a boolean query; endogenous and exogenous tuples both count.
pub fn evaluate_bcq(d: &Instance, q: &ConjunctiveQuery) -> Result<bool> {
    q.require_boolean()?;
    Ok(holds_in(d.iter(), q))
}

/// All bindings of the free variables that make `q` true. A boolean query
/// yields `{()}` when true and `∅` otherwise.
pub fn answers(d: &Instance, q: &ConjunctiveQuery) -> BTreeSet<Vec<Constant>> {
    let mut out = BTreeSet::new();
    run(d.iter(), q, |binding, _| {
        let tuple = q
            .free_vars()
            .iter()
            .map(|v| lookup(binding, v).cloned().expect("free variables occur in the body"))
            .collect();
        out.insert(tuple);
        ControlFlow::Continue(())
    });
    out
}

/// Every satisfying assignment with its image, in canonical order. With
/// `minimal_only`, one witness is kept per inclusion-minimal image.
pub fn witnesses(d: &Instance, q: &ConjunctiveQuery, minimal_only: bool) -> Result<Vec<Witness>> {
    q.require_boolean()?;
    let mut all = Vec::new();
    run(d.iter(), q, |binding, used| {
        all.push(Witness {
            assignment: binding.iter().map(|(v, c)| (v.to_string(), (*c).clone())).collect(),
            image: used.iter().map(|&a| a.clone()).collect(),
        });
        ControlFlow::Continue(())
    });
    all.sort_by(|a, b| (&a.image, &a.assignment).cmp(&(&b.image, &b.assignment)));
    if !minimal_only {
        return Ok(all);
    }
    let keep: BTreeSet<BTreeSet<GroundAtom>> = minimal_sets(all.iter().map(|w| w.image.clone())).into_iter().collect();
    let mut seen = BTreeSet::new();
    all.retain(|w| keep.contains(&w.image) && seen.insert(w.image.clone()));
    Ok(all)
}

/// The inclusion-minimal witness images of a boolean query.
pub fn minimal_images(d: &Instance, q: &ConjunctiveQuery) -> Result<Vec<BTreeSet<GroundAtom>>> {
    Ok(witnesses(d, q, true)?.into_iter().map(|w| w.image).collect())
}
