// Consistent query answering: an atom is consistently true iff it is in
// every repair, iff it is not a cause of the constraint violation.

use dbcause::bridge::cqa_from_causes;
use dbcause::error::Result;
use dbcause::facts::parse_facts;
use dbcause::query::{parse_dc, parse_ground_atom};
use dbcause::repair::consistent_answer_ground;
use dbcause::report::RepairKind;

fn run_example() -> Result<()> {
    let d = parse_facts("P(a,b). R(b,c). R(a,d).")?;
    let kappa = parse_dc(":- P(X,Y), R(Y,Z).")?;
    let sigma = vec![kappa.clone()];
    for text in ["R(a,d)", "P(a,b)", "R(b,c)"] {
        let atom = parse_ground_atom(text)?;
        let s = consistent_answer_ground(&d, &sigma, &atom, RepairKind::Subset)?;
        let c = consistent_answer_ground(&d, &sigma, &atom, RepairKind::Cardinality)?;
        let via_causes = cqa_from_causes(&d, &kappa, &atom)?;
        println!("{text}: S-semantics {s}, C-semantics {c}, from causes {via_causes}");
        assert_eq!(s, via_causes);
        assert_eq!(s, text == "R(a,d)");
    }
    Ok(())
}

fn main() {
    run_example().unwrap();
}
