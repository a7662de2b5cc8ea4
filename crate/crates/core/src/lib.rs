//! Actual causes and responsibilities for conjunctive query answers,
//! repairs under denial constraints, and consistency-based diagnosis.
//!
//! ```
//! use dbcause::causality::actual_causes;
//! use dbcause::facts::parse_facts;
//! use dbcause::query::parse_query;
//!
//! let d = parse_facts("S(a3). S(a4). R(a4,a3). @exo")?;
//! let q = parse_query("q() :- S(X), R(X,Y), S(Y).")?;
//! let causes = actual_causes(&d, &q)?;
//! for report in &causes.reports {
//!     println!("{} {}", report.cause, report.responsibility);
//! }
//! assert_eq!(causes.len(), 2);
//! # Ok::<(), dbcause::error::Error>(())
//! ```

pub mod bridge;
pub mod causality;
pub mod cli;
pub mod crosscheck;
pub mod diagnosis;
pub mod error;
pub mod facts;
pub mod hitting;
pub mod oracle;
pub mod query;
pub mod relational;
pub mod repair;
pub mod report;
pub mod sets;
