// Causes for each answer of a query with free variables: every answer is
// turned into a boolean query by binding the free variables.

use dbcause::causality::actual_causes;
use dbcause::error::Result;
use dbcause::facts::parse_facts;
use dbcause::query::{answers, ground_answer_dc, parse_query, violation_view};

fn run_example() -> Result<()> {
    let d = parse_facts("R(a4,a3). R(a2,a1). R(a3,a3). S(a4). S(a2). S(a3).")?;
    let q = parse_query("q(X) :- S(X), R(X,Y), S(Y).")?;
    let ans = answers(&d, &q);
    assert_eq!(ans.len(), 2);
    for a in ans {
        let grounded = violation_view(&ground_answer_dc(&q, &a)?);
        let causes = actual_causes(&d, &grounded)?;
        println!("{grounded}");
        for r in &causes.reports {
            println!("  {} ρ = {}", r.cause, r.responsibility);
        }
        assert!(!causes.is_empty());
    }
    Ok(())
}

fn main() {
    run_example().unwrap();
}
