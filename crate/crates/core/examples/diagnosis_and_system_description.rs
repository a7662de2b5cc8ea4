// Minimal diagnoses of an unexpected query answer and the causes they
// determine, together with the logical system description.

use dbcause::diagnosis::{build_diagnosis_problem, causes_from_diagnoses, minimal_diagnoses};
use dbcause::error::Result;
use dbcause::facts::parse_facts;
use dbcause::query::parse_query;

fn run_example() -> Result<()> {
    let d = parse_facts("S(a3). S(a4). R(a4,a3). @exo")?;
    let q = parse_query("q() :- S(X), R(X,Y), S(Y).")?;
    let m = build_diagnosis_problem(&d, &q)?;
    print!("{}", m.system_description.render());
    let diagnoses = minimal_diagnoses(&m)?;
    for diag in &diagnoses {
        println!(
            "diagnosis {:?}",
            diag.abnormal.iter().map(ToString::to_string).collect::<Vec<_>>()
        );
    }
    let causes = causes_from_diagnoses(&m)?;
    for r in &causes.reports {
        println!("cause {} ρ = {}", r.cause, r.responsibility);
    }
    assert_eq!(diagnoses.len(), 2);
    assert!(causes.reports.iter().all(|r| r.responsibility.to_string() == "1"));
    Ok(())
}

fn main() {
    run_example().unwrap();
}
