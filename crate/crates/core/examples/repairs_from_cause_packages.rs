// Repairs under several constraints, assembled from the causes of each
// constraint's violation view.

use dbcause::bridge::{repairs_from_causes, CausePackage};
use dbcause::error::Result;
use dbcause::facts::parse_facts;
use dbcause::query::parse_dcs;
use dbcause::repair::s_repairs;

fn run_example() -> Result<()> {
    let d = parse_facts("P(a,b). R(b,c). S(c,d).")?;
    let sigma = parse_dcs(":- P(X,Y), R(Y,Z).\n:- R(X,Y), S(Y,Z).")?;
    let pkg = CausePackage::compute(&d, &sigma)?;
    for view in &pkg.views {
        println!("{}", view.constraint);
        for (cause, contingencies) in &view.entries {
            println!("  {cause} with {} minimal contingency set(s)", contingencies.len());
        }
    }
    let repairs = repairs_from_causes(&d, &sigma, &pkg)?;
    for r in &repairs.repairs {
        println!(
            "repair {}",
            r.instance
                .atom_set()
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(" ")
        );
    }
    assert_eq!(repairs, s_repairs(&d, &sigma)?);
    assert_eq!(repairs.len(), 2);
    Ok(())
}

fn main() {
    run_example().unwrap();
}
