// Generates small random instances and checks every translation between
// causes, repairs and diagnoses against brute-force enumeration.

use dbcause::crosscheck::{run_crosscheck, CrosscheckInput, Verdict};
use dbcause::error::Result;
use dbcause::hitting::DEFAULT_NODE_LIMIT;
use dbcause::oracle::OracleBudget;
use dbcause::query::{parse_dc, parse_query};
use dbcause::relational::{make_instance, GroundAtom, Tag};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_instance(rng: &mut ChaCha8Rng) -> Result<dbcause::relational::Instance> {
    let consts = ["a", "b", "c"];
    let mut facts = Vec::new();
    for _ in 0..rng.gen_range(2..=9) {
        let atom = if rng.gen_bool(0.5) {
            GroundAtom::new("S", [consts[rng.gen_range(0..3)]])
        } else {
            GroundAtom::new("R", [consts[rng.gen_range(0..3)], consts[rng.gen_range(0..3)]])
        };
        let tag = if rng.gen_bool(0.8) {
            Tag::Endogenous
        } else {
            Tag::Exogenous
        };
        if !facts.iter().any(|(a, _)| a == &atom) {
            facts.push((atom, tag));
        }
    }
    make_instance(facts)
}

fn run_example() -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let query = parse_query("q() :- S(X), R(X,Y), S(Y).")?;
    let constraints = vec![parse_dc(":- S(X), R(X,Y), S(Y).")?, parse_dc(":- R(X,Y), R(Y,X).")?];
    let oracle = OracleBudget::default();
    let mut passed = 0;
    let mut skipped = 0;
    for _ in 0..40 {
        let input = CrosscheckInput {
            instance: random_instance(&mut rng)?,
            query: Some(query.clone()),
            constraints: constraints.clone(),
        };
        let report = run_crosscheck(&input, DEFAULT_NODE_LIMIT, &oracle)?;
        assert!(
            report.all_passed(),
            "{}",
            serde_json::to_string_pretty(&report).unwrap()
        );
        passed += report.checks.iter().filter(|c| c.verdict == Verdict::Pass).count();
        skipped += report.checks.iter().filter(|c| c.verdict == Verdict::Skip).count();
    }
    println!("40 random instances: {passed} checks passed, {skipped} skipped, none failed");
    Ok(())
}

fn main() {
    run_example().unwrap();
}
