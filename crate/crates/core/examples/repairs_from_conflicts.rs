// S-repairs and C-repairs as hitting sets of the conflict hypergraph, and
// the same repairs recovered from causes.

use dbcause::bridge::{c_repairs_from_mrc, repairs_from_contingencies};
use dbcause::error::Result;
use dbcause::facts::parse_facts;
use dbcause::query::parse_dc;
use dbcause::repair::{c_repairs, s_repairs, ConflictHypergraph};

fn show(label: &str, deletions: &[std::collections::BTreeSet<dbcause::relational::GroundAtom>]) {
    println!("{label}:");
    for del in deletions {
        println!("  delete {:?}", del.iter().map(ToString::to_string).collect::<Vec<_>>());
    }
}

fn run_example() -> Result<()> {
    let d = parse_facts("R(a4,a3). R(a2,a1). R(a3,a3). S(a4). S(a2). S(a3).")?;
    let kappa = parse_dc(":- S(X), R(X,Y), S(Y).")?;
    let sigma = vec![kappa.clone()];

    let h = ConflictHypergraph::build(&d, &sigma)?;
    println!("conflict edges: {}", h.edges.len());
    for e in &h.edges {
        println!("  {:?}", e.iter().map(ToString::to_string).collect::<Vec<_>>());
    }

    let s = s_repairs(&d, &sigma)?;
    let c = c_repairs(&d, &sigma)?;
    show("S-repairs", &s.deletion_sets());
    show("C-repairs", &c.deletion_sets());
    assert_eq!(s.len(), 3);
    assert_eq!(c.len(), 1);

    assert_eq!(repairs_from_contingencies(&d, &kappa)?, s);
    assert_eq!(c_repairs_from_mrc(&d, &kappa)?, c);
    println!("both recovered from causes and contingency sets");

    let d4 = parse_facts("P(a,b). R(b,c). R(b,b).")?;
    let sigma4 = vec![parse_dc(":- P(X,Y), R(Y,Z).")?];
    show(
        "C-repairs of the second instance",
        &c_repairs(&d4, &sigma4)?.deletion_sets(),
    );
    Ok(())
}

fn main() {
    run_example().unwrap();
}
