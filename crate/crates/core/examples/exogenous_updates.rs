// Exogenous tuples are never causes, and inserting one can remove causes.

use dbcause::causality::{actual_causes, is_counterfactual_cause};
use dbcause::error::Result;
use dbcause::facts::parse_facts;
use dbcause::query::{parse_ground_atom, parse_query};
use dbcause::relational::Tag;

fn run_example() -> Result<()> {
    let d = parse_facts("S(a3). S(a4). R(a4,a3). @exo")?;
    let q = parse_query("q() :- S(X), R(X,Y), S(Y).")?;
    let before = actual_causes(&d, &q)?;
    println!("before: {:?}", before.causes());

    let s4 = parse_ground_atom("S(a4)")?;
    assert!(is_counterfactual_cause(&d, &q, &s4)?);

    // A second, purely exogenous witness keeps the query true without S(a4).
    let updated = d.with_atom(parse_ground_atom("R(a3,a3)")?, Tag::Exogenous)?;
    let after = actual_causes(&updated, &q)?;
    println!("after inserting exogenous R(a3,a3): {:?}", after.causes());
    assert!(!after.causes().contains(&s4));
    assert!(after.causes().is_subset(&before.causes()));

    // The same tuple inserted as endogenous only weakens S(a4).
    let endo = d.with_atom(parse_ground_atom("R(a3,a3)")?, Tag::Endogenous)?;
    let weakened = actual_causes(&endo, &q)?;
    println!(
        "after inserting endogenous R(a3,a3): ρ(S(a4)) = {}",
        weakened.responsibility_of(&s4)
    );
    assert_eq!(weakened.responsibility_of(&s4).to_string(), "1/2");
    Ok(())
}

fn main() {
    run_example().unwrap();
}
