//! Facts files.
//!
//! ```text
//! % two causes, one exogenous join tuple
//! [endogenous]
//! S(a3).
//! S(a4).
//! R(a4,a3). @exo
//! ```
//!
//! A `[endogenous]` or `[exogenous]` line sets the tag for the facts that
//! follow (endogenous before any section). `@exo` or `@endo` after a fact,
//! on the same line, overrides it.

use std::path::Path;

use crate::error::{Error, Result};
use crate::query::{Parser, TokenKind};
use crate::relational::{make_instance, GroundAtom, Instance, Tag};

fn tag_named(p: &mut Parser, word: &str) -> Result<Tag> {
    match word {
        "endogenous" | "endo" => Ok(Tag::Endogenous),
        "exogenous" | "exo" => Ok(Tag::Exogenous),
        other => Err(p.error_here(format!("unknown tag `{other}`"))),
    }
}

pub fn parse_facts(text: &str) -> Result<Instance> {
    let mut p = Parser::new(text)?;
    let mut section = Tag::Endogenous;
    let mut facts = Vec::new();
    loop {
        match p.peek().kind.clone() {
            TokenKind::Eof => break,
            TokenKind::LBracket => {
                p.next();
                let name = p.word("a section name")?;
                if !matches!(name.as_str(), "endogenous" | "exogenous") {
                    return Err(p.error_here(format!("unknown section `[{name}]`")));
                }
                section = tag_named(&mut p, &name)?;
                p.expect(TokenKind::RBracket)?;
            }
            TokenKind::Word(_) => {
                let name = p.word("a predicate name")?;
                let args = p.ground_args()?;
                let dot = p.expect(TokenKind::Dot)?;
                let mut tag = section;
                if p.peek().kind == TokenKind::At {
                    if p.peek().line != dot.line {
                        return Err(p.error_here("a tag must follow its fact on the same line"));
                    }
                    p.next();
                    let word = p.word("`exo` or `endo`")?;
                    if !matches!(word.as_str(), "exo" | "endo") {
                        return Err(Error::syntax(
                            dot.line,
                            dot.column + 1,
                            format!("unknown tag `@{word}`"),
                        ));
                    }
                    tag = tag_named(&mut p, &word)?;
                }
                facts.push((GroundAtom::new(&name, args), tag));
            }
            _ => return Err(p.error_here("expected a fact or a section header")),
        }
    }
    make_instance(facts)
}

pub fn load_facts(path: impl AsRef<Path>) -> Result<Instance> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_facts(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Position;

    fn atom(p: &str, args: &[&str]) -> GroundAtom {
        GroundAtom::new(p, args.iter().copied())
    }

    #[test]
    fn sections_and_overrides() {
        let d = parse_facts(
            "% two causes, one exogenous join tuple\n[endogenous]\nS(a3).\nS(a4).\nR(a4,a3). @exo\n[exogenous]\nT(b). @endo\nT(c).\n",
        )
        .unwrap();
        assert!(d.is_endogenous(&atom("S", &["a3"])));
        assert!(!d.is_endogenous(&atom("R", &["a4", "a3"])));
        assert!(d.is_endogenous(&atom("T", &["b"])));
        assert!(!d.is_endogenous(&atom("T", &["c"])));
        assert_eq!(d.len(), 5);
    }

    #[test]
    fn default_tag_is_endogenous() {
        let d = parse_facts("P(a,b). R(\"x y\",c).").unwrap();
        assert!(d.is_fully_endogenous());
        assert!(d.contains(&atom("R", &["x y", "c"])));
    }

    #[test]
    fn round_trips_through_display() {
        let d = parse_facts("[exogenous]\nR(a4,a3).\n[endogenous]\nS(a3).\nS(\"A b\").").unwrap();
        assert_eq!(parse_facts(&d.to_string()).unwrap(), d);
        assert!(parse_facts("").unwrap().is_empty());
    }

    #[test]
    fn malformed_input() {
        assert!(matches!(
            parse_facts("S(X)."),
            Err(Error::Syntax {
                position: Position { line: 1, column: 3 },
                ..
            })
        ));
        assert!(matches!(parse_facts("S(a)"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_facts("[middle]\n"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_facts("S(a). @foo"), Err(Error::Syntax { .. })));
        assert!(matches!(
            parse_facts("S(a).\n@exo"),
            Err(Error::Syntax {
                position: Position { line: 2, .. },
                ..
            })
        ));
        assert!(matches!(parse_facts("S(a). S(a,b)."), Err(Error::ArityMismatch { .. })));
        assert!(matches!(parse_facts("S(a). S(a). @exo"), Err(Error::ConflictingTag(_))));
    }

    #[test]
    fn missing_file_is_an_io_error() {
        assert!(matches!(load_facts("/nonexistent/x.facts"), Err(Error::Io(_))));
    }
}
