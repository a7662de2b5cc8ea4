// Actual causes of a boolean query, with contingency sets and
// responsibilities.

use dbcause::causality::{actual_causes, most_responsible, responsibility};
use dbcause::error::Result;
use dbcause::facts::parse_facts;
use dbcause::query::{parse_ground_atom, parse_query};

const FACTS: &str = "
R(a4,a3). R(a2,a1). R(a3,a3).
S(a4). S(a2). S(a3).
";

fn run_example() -> Result<()> {
    let d = parse_facts(FACTS)?;
    let q = parse_query("q() :- S(X), R(X,Y), S(Y).")?;
    let causes = actual_causes(&d, &q)?;
    println!("{q}");
    for r in &causes.reports {
        let contingencies: Vec<String> = r
            .minimal_contingencies
            .iter()
            .map(|g| format!("{:?}", g.iter().map(ToString::to_string).collect::<Vec<_>>()))
            .collect();
        println!(
            "  {:<9} ρ = {:<4} {}",
            r.cause.to_string(),
            r.responsibility.to_string(),
            contingencies.join(" ")
        );
    }
    let top = most_responsible(&causes);
    println!("most responsible: {top:?}");

    assert_eq!(causes.len(), 4);
    assert_eq!(responsibility(&d, &q, &parse_ground_atom("S(a3)")?)?.to_string(), "1");
    assert_eq!(responsibility(&d, &q, &parse_ground_atom("S(a4)")?)?.to_string(), "1/2");
    // R(a2,a1) joins no S(a1), so it takes part in no witness.
    assert!(responsibility(&d, &q, &parse_ground_atom("R(a2,a1)")?)?.is_zero());
    assert_eq!(top.len(), 1);
    Ok(())
}

fn main() {
    run_example().unwrap();
}
