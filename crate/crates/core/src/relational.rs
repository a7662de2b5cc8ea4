//! Relational instances with an endogenous/exogenous partition.
//!
//! Every collection here is a `BTreeSet`, so iteration follows the canonical
//! order: predicate name, then arity, then the argument tuple, each compared
//! lexicographically. All enumeration outputs in the crate inherit this order.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Serialize, Serializer};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// An uninterpreted domain element. Equal iff the symbols are identical.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Constant(String);

impl Constant {
    pub fn new(symbol: impl Into<String>) -> Self {
        let symbol = symbol.into();
        debug_assert!(!symbol.is_empty(), "constants are non-empty tokens");
        Constant(symbol)
    }

    pub fn symbol(&self) -> &str {
        &self.0
    }

    /// True when the symbol can be written without quotes.
    fn is_bare(&self) -> bool {
        let mut chars = self.0.chars();
        match chars.next() {
            Some(c) if c.is_ascii_lowercase() || c.is_ascii_digit() => {}
            _ => return false,
        }
        chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
    }
}

impl fmt::Display for Constant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_bare() {
            f.write_str(&self.0)
        } else {
            f.write_str("\"")?;
            for c in self.0.chars() {
                match c {
                    '"' => f.write_str("\\\"")?,
                    '\\' => f.write_str("\\\\")?,
                    c => write!(f, "{c}")?,
                }
            }
            f.write_str("\"")
        }
    }
}

impl From<&str> for Constant {
    fn from(s: &str) -> Self {
        Constant::new(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct PredicateSig {
    pub name: String,
    pub arity: usize,
}

impl PredicateSig {
    pub fn new(name: impl Into<String>, arity: usize) -> Self {
        PredicateSig {
            name: name.into(),
            arity,
        }
    }
}

impl fmt::Display for PredicateSig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.name, self.arity)
    }
}

/// A tuple `P(c1, ..., cn)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroundAtom {
    predicate: PredicateSig,
    args: Vec<Constant>,
}

impl GroundAtom {
    pub fn new<C: Into<Constant>>(predicate: &str, args: impl IntoIterator<Item = C>) -> Self {
        let args: Vec<Constant> = args.into_iter().map(Into::into).collect();
        GroundAtom {
            predicate: PredicateSig::new(predicate, args.len()),
            args,
        }
    }

    /// Builds an atom against an explicit signature.
    pub fn with_signature(predicate: PredicateSig, args: Vec<Constant>) -> Result<Self> {
        if predicate.arity != args.len() {
            return Err(Error::ArityMismatch {
                predicate: predicate.name,
                expected: predicate.arity,
                found: args.len(),
            });
        }
        Ok(GroundAtom { predicate, args })
    }

    pub fn predicate(&self) -> &PredicateSig {
        &self.predicate
    }

    pub fn name(&self) -> &str {
        &self.predicate.name
    }

    pub fn args(&self) -> &[Constant] {
        &self.args
    }
}

impl fmt::Display for GroundAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.predicate.name)?;
        for (i, c) in self.args.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

impl Serialize for GroundAtom {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Tag {
    #[default]
    Endogenous,
    Exogenous,
}

/// Predicate name to arity.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Schema {
    arities: BTreeMap<String, usize>,
}

impl Schema {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registers a signature; a name may only ever carry one arity.
    pub fn declare(&mut self, sig: &PredicateSig) -> Result<()> {
        match self.arities.get(&sig.name) {
            Some(&arity) if arity != sig.arity => Err(Error::ArityMismatch {
                predicate: sig.name.clone(),
                expected: arity,
                found: sig.arity,
            }),
            Some(_) => Ok(()),
            None => {
                self.arities.insert(sig.name.clone(), sig.arity);
                Ok(())
            }
        }
    }

    pub fn arity(&self, name: &str) -> Option<usize> {
        self.arities.get(name).copied()
    }

    pub fn signatures(&self) -> impl Iterator<Item = PredicateSig> + '_ {
        self.arities
            .iter()
            .map(|(name, &arity)| PredicateSig::new(name.clone(), arity))
    }
}

/// A finite set of ground atoms split into `D^n` (endogenous) and `D^x`
/// (exogenous). Immutable; every operation returns a new instance.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Instance {
    endogenous: BTreeSet<GroundAtom>,
    exogenous: BTreeSet<GroundAtom>,
    schema: Schema,
}

impl Instance {
    pub fn empty() -> Self {
        Self::default()
    }

    /// All atoms endogenous.
    pub fn from_atoms(atoms: impl IntoIterator<Item = GroundAtom>) -> Result<Self> {
        make_instance(atoms.into_iter().map(|a| (a, Tag::Endogenous)))
    }

    pub fn endogenous(&self) -> &BTreeSet<GroundAtom> {
        &self.endogenous
    }

    pub fn exogenous(&self) -> &BTreeSet<GroundAtom> {
        &self.exogenous
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    /// Both parts, unordered across the partition boundary.
    pub fn iter(&self) -> impl Iterator<Item = &GroundAtom> + '_ {
        self.endogenous.iter().chain(self.exogenous.iter())
    }

    /// All atoms in canonical order, tags dropped.
    pub fn atom_set(&self) -> BTreeSet<GroundAtom> {
        self.iter().cloned().collect()
    }

    pub fn len(&self) -> usize {
        self.endogenous.len() + self.exogenous.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, atom: &GroundAtom) -> bool {
        self.endogenous.contains(atom) || self.exogenous.contains(atom)
    }

    pub fn tag_of(&self, atom: &GroundAtom) -> Option<Tag> {
        if self.endogenous.contains(atom) {
            Some(Tag::Endogenous)
        } else if self.exogenous.contains(atom) {
            Some(Tag::Exogenous)
        } else {
            None
        }
    }

    pub fn is_endogenous(&self, atom: &GroundAtom) -> bool {
        self.endogenous.contains(atom)
    }

    /// True when `D^x` is empty, i.e. `D^n = D`.
    pub fn is_fully_endogenous(&self) -> bool {
        self.exogenous.is_empty()
    }

    /// The same atoms with every tuple endogenous.
    pub fn all_endogenous(&self) -> Instance {
        Instance {
            endogenous: self.atom_set(),
            exogenous: BTreeSet::new(),
            schema: self.schema.clone(),
        }
    }

    /// `D ∖ S`, keeping the tag of every survivor.
    pub fn without<'a>(&self, removed: impl IntoIterator<Item = &'a GroundAtom>) -> Instance {
        let removed: BTreeSet<&GroundAtom> = removed.into_iter().collect();
        Instance {
            endogenous: self
                .endogenous
                .iter()
                .filter(|a| !removed.contains(a))
                .cloned()
                .collect(),
            exogenous: self
                .exogenous
                .iter()
                .filter(|a| !removed.contains(a))
                .cloned()
                .collect(),
            schema: self.schema.clone(),
        }
    }

    /// Inserts one tuple with the given tag.
    pub fn with_atom(&self, atom: GroundAtom, tag: Tag) -> Result<Instance> {
        make_instance(
            self.endogenous
                .iter()
                .map(|a| (a.clone(), Tag::Endogenous))
                .chain(self.exogenous.iter().map(|a| (a.clone(), Tag::Exogenous)))
                .chain(std::iter::once((atom, tag))),
        )
    }

    /// Short content digest of the canonical facts rendering.
    pub fn fingerprint(&self) -> String {
        let digest = Sha256::digest(self.to_string().as_bytes());
        digest[..8].iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Renders in the facts-file format, endogenous section first.
impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[endogenous]")?;
        for a in &self.endogenous {
            writeln!(f, "{a}.")?;
        }
        writeln!(f, "[exogenous]")?;
        for a in &self.exogenous {
            writeln!(f, "{a}.")?;
        }
        Ok(())
    }
}

/// Builds an instance from tagged atoms. Identical `(atom, tag)` pairs
/// collapse; the same atom under both tags is rejected.
pub fn make_instance(atoms: impl IntoIterator<Item = (GroundAtom, Tag)>) -> Result<Instance> {
    let mut instance = Instance::empty();
    for (atom, tag) in atoms {
        instance.schema.declare(atom.predicate())?;
        let (mine, other) = match tag {
            Tag::Endogenous => (&mut instance.endogenous, &instance.exogenous),
            Tag::Exogenous => (&mut instance.exogenous, &instance.endogenous),
        };
        if other.contains(&atom) {
            return Err(Error::ConflictingTag(atom));
        }
        mine.insert(atom);
    }
    Ok(instance)
}

/// Tuple deletion; atoms of `removed` that are not in `d` are ignored.
pub fn delete(d: &Instance, removed: &BTreeSet<GroundAtom>) -> Instance {
    d.without(removed)
}

/// `(D ∖ D') ∪ (D' ∖ D)` over the underlying atom sets; tags are ignored.
pub fn symmetric_difference(d: &Instance, other: &Instance) -> BTreeSet<GroundAtom> {
    let left = d.atom_set();
    let right = other.atom_set();
    left.symmetric_difference(&right).cloned().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn atom(p: &str, args: &[&str]) -> GroundAtom {
        GroundAtom::new(p, args.iter().copied())
    }

    #[test]
    fn make_instance_partitions_atoms() {
        let d = make_instance([
            (atom("S", &["a3"]), Tag::Endogenous),
            (atom("S", &["a4"]), Tag::Endogenous),
            (atom("R", &["a4", "a3"]), Tag::Exogenous),
        ])
        .unwrap();
        assert_eq!(
            d.endogenous(),
            &BTreeSet::from([atom("S", &["a3"]), atom("S", &["a4"])])
        );
        assert_eq!(d.exogenous(), &BTreeSet::from([atom("R", &["a4", "a3"])]));
    }

    #[test]
    fn empty_and_duplicate_input() {
        assert!(make_instance([]).unwrap().is_empty());
        let d = make_instance([
            (atom("R", &["a", "b"]), Tag::Endogenous),
            (atom("R", &["a", "b"]), Tag::Endogenous),
        ])
        .unwrap();
        assert_eq!(d.len(), 1);
    }

    #[test]
    fn conflicting_tag_and_arity_are_rejected() {
        let err = make_instance([
            (atom("R", &["a", "b"]), Tag::Endogenous),
            (atom("R", &["a", "b"]), Tag::Exogenous),
        ])
        .unwrap_err();
        assert!(matches!(err, Error::ConflictingTag(_)));

        let err = make_instance([
            (atom("R", &["a", "b"]), Tag::Endogenous),
            (atom("R", &["a"]), Tag::Endogenous),
        ])
        .unwrap_err();
        assert!(matches!(
            err,
            Error::ArityMismatch {
                expected: 2,
                found: 1,
                ..
            }
        ));

        let sig = PredicateSig::new("P", 2);
        assert!(GroundAtom::with_signature(sig, vec![Constant::new("a")]).is_err());
    }

    #[test]
    fn delete_keeps_tags_and_ignores_foreign_atoms() {
        let d = make_instance([
            (atom("S", &["a3"]), Tag::Endogenous),
            (atom("R", &["a4", "a3"]), Tag::Exogenous),
        ])
        .unwrap();
        let gone = delete(&d, &BTreeSet::from([atom("S", &["a3"]), atom("T", &["z"])]));
        assert_eq!(gone.len(), 1);
        assert_eq!(gone.tag_of(&atom("R", &["a4", "a3"])), Some(Tag::Exogenous));
        assert_eq!(delete(&d, &BTreeSet::new()), d);
        assert!(delete(&d, &d.atom_set()).is_empty());
    }

    #[test]
    fn symmetric_difference_ignores_tags() {
        let d = Instance::from_atoms([atom("R", &["a", "b"])]).unwrap();
        let d2 = Instance::from_atoms([atom("R", &["b", "c"])]).unwrap();
        assert_eq!(
            symmetric_difference(&d, &d2),
            BTreeSet::from([atom("R", &["a", "b"]), atom("R", &["b", "c"])])
        );
        assert!(symmetric_difference(&d, &d).is_empty());
        let exo = make_instance([(atom("R", &["a", "b"]), Tag::Exogenous)]).unwrap();
        assert!(symmetric_difference(&d, &exo).is_empty());
    }

    #[test]
    fn constants_quote_when_needed() {
        assert_eq!(Constant::new("a3").to_string(), "a3");
        assert_eq!(Constant::new("Alice").to_string(), "\"Alice\"");
        assert_eq!(Constant::new("x y\"").to_string(), "\"x y\\\"\"");
    }

    #[test]
    fn canonical_order_is_name_then_args() {
        let mut atoms = vec![atom("S", &["a"]), atom("R", &["b", "a"]), atom("R", &["a", "z"])];
        atoms.sort();
        assert_eq!(
            atoms,
            vec![atom("R", &["a", "z"]), atom("R", &["b", "a"]), atom("S", &["a"])]
        );
    }
}
