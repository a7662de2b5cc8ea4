//! Acceptance criteria. Prints one `[PASS]`/`[FAIL]` line per criterion and
//! fails unless every criterion passes, except those listed in
//! `KNOWN_UNATTAINABLE`.
//!
//! Run with `cargo test -p dbcause --release --test acceptance -- --nocapture`.

mod common;

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use dbcause::bridge::{c_repairs_from_mrc, causes_from_repairs, cqa_from_causes, repairs_from_causes, CausePackage};
use dbcause::causality::{actual_causes, most_responsible};
use dbcause::diagnosis::{build_diagnosis_problem, causes_from_diagnoses, minimal_diagnoses};
use dbcause::facts::load_facts;
use dbcause::hitting::Budget;
use dbcause::oracle::{brute_c_repairs, brute_causes, brute_consistent_answer, brute_s_repairs, OracleBudget};
use dbcause::query::{evaluate_bcq, parse_dc, parse_dcs, parse_ground_atom, parse_query, violation_view};
use dbcause::relational::{GroundAtom, Tag};
use dbcause::repair::{c_repairs, minimal_hitting_sets, s_repairs, ConflictHypergraph};
use proptest::strategy::{Strategy, ValueTree};
use serde_json::Value;

/// Example reproductions must finish within this bound.
const EXAMPLE_TIME_LIMIT: Duration = Duration::from_secs(1);
/// Random cases per equivalence suite.
const SUITE_CASES: u32 = 500;
/// Random single-tuple insertions per direction.
const INSERTIONS: usize = 200;
/// Bound on the total runtime of the random suites.
const SUITES_TIME_LIMIT: Duration = Duration::from_secs(300);

/// Criteria that cannot hold as stated. The exogenous-insertion inclusion
/// is false in general: inserting T(d) into {R(a,b), T(b), R(c,d)} makes
/// R(c,d) a cause of `q() :- R(X,Y), T(Y).` with contingency {R(a,b)}.
const KNOWN_UNATTAINABLE: &[&str] = &["AC7f-exo"];

const JOIN_QUERY: &str = "q() :- S(X),R(X,Y),S(Y).";

struct Outcome {
    id: &'static str,
    passed: bool,
}

fn report(outcomes: &mut Vec<Outcome>, id: &'static str, name: &str, passed: bool, detail: String) {
    println!("[{}] {id} {name}: {detail}", if passed { "PASS" } else { "FAIL" });
    outcomes.push(Outcome { id, passed });
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn atom(text: &str) -> GroundAtom {
    parse_ground_atom(text).unwrap()
}

fn atoms(texts: &[&str]) -> BTreeSet<GroundAtom> {
    texts.iter().map(|t| atom(t)).collect()
}

fn family(sets: &[&[&str]]) -> BTreeSet<BTreeSet<GroundAtom>> {
    sets.iter().map(|s| atoms(s)).collect()
}

/// Runs the CLI in-process and parses its JSON output.
fn cli_json(args: &[&str]) -> (i32, Value, Duration) {
    let start = Instant::now();
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv: Vec<&str> = std::iter::once("dbcause")
        .chain(args.iter().copied())
        .chain(["--json"])
        .collect();
    let code = dbcause::cli::run(argv, &mut out, &mut err);
    let elapsed = start.elapsed();
    let value = serde_json::from_slice(&out).unwrap_or(Value::Null);
    (code, value, elapsed)
}

fn string_set(v: &Value) -> BTreeSet<GroundAtom> {
    v.as_array()
        .map(|a| a.iter().map(|s| atom(s.as_str().unwrap())).collect())
        .unwrap_or_default()
}

fn deletion_family(result: &Value) -> BTreeSet<BTreeSet<GroundAtom>> {
    result["repairs"]
        .as_array()
        .map(|rs| rs.iter().map(|r| string_set(&r["deleted"])).collect())
        .unwrap_or_default()
}

fn ac1_example_causes(outcomes: &mut Vec<Outcome>) {
    let facts = data("ex1.facts");
    let (code, v, elapsed) = cli_json(&["causes", "--facts", facts.to_str().unwrap(), "--query", JOIN_QUERY]);
    let expected: Vec<(&str, u64, BTreeSet<BTreeSet<GroundAtom>>)> = vec![
        ("R(a3,a3)", 2, family(&[&["R(a4,a3)"], &["S(a4)"]])),
        ("R(a4,a3)", 2, family(&[&["R(a3,a3)"]])),
        ("S(a3)", 1, family(&[&[]])),
        ("S(a4)", 2, family(&[&["R(a3,a3)"]])),
    ];
    let actual: Vec<(String, u64, u64, BTreeSet<BTreeSet<GroundAtom>>)> = v["result"]["causes"]
        .as_array()
        .map(|cs| {
            cs.iter()
                .map(|c| {
                    let contingencies = c["minimal_contingencies"]
                        .as_array()
                        .unwrap()
                        .iter()
                        .map(string_set)
                        .collect();
                    let rho = &c["responsibility"];
                    (
                        c["cause"].as_str().unwrap().to_string(),
                        rho["num"].as_u64().unwrap(),
                        rho["den"].as_u64().unwrap(),
                        contingencies,
                    )
                })
                .collect()
        })
        .unwrap_or_default();
    let matches = actual.len() == expected.len()
        && actual
            .iter()
            .zip(&expected)
            .all(|(a, e)| a.0 == e.0 && a.1 == 1 && a.2 == e.1 && a.3 == e.2);
    report(
        outcomes,
        "AC1",
        "six-tuple instance causes",
        code == 0 && matches && elapsed < EXAMPLE_TIME_LIMIT,
        format!(
            "{} causes, exact responsibilities and contingency families {}, {:.1} ms",
            actual.len(),
            if matches { "match" } else { "differ" },
            elapsed.as_secs_f64() * 1e3
        ),
    );
}

fn ac2_example_repairs(outcomes: &mut Vec<Outcome>) {
    let facts = data("ex3.facts");
    let f = facts.to_str().unwrap();
    let dc = ":- S(X),R(X,Y),S(Y).";
    let (code_s, s, t_s) = cli_json(&["repairs", "--kind", "s", "--facts", f, "--dc", dc]);
    let (code_c, c, t_c) = cli_json(&["repairs", "--kind", "c", "--facts", f, "--dc", dc]);
    let d1: &[&str] = &["S(a3)"];
    let d2: &[&str] = &["R(a4,a3)", "R(a3,a3)"];
    let d3: &[&str] = &["S(a4)", "R(a3,a3)"];
    let s_ok = deletion_family(&s["result"]) == family(&[d1, d2, d3]);
    let c_ok = deletion_family(&c["result"]) == family(&[d1]);
    let time_ok = t_s < EXAMPLE_TIME_LIMIT && t_c < EXAMPLE_TIME_LIMIT;
    report(
        outcomes,
        "AC2",
        "S-repairs and C-repairs under the query's constraint",
        code_s == 0 && code_c == 0 && s_ok && c_ok && time_ok,
        format!(
            "S-repairs {}, C-repairs {}, {:.1} ms + {:.1} ms",
            if s_ok { "are the three expected sets" } else { "differ" },
            if c_ok { "is the single expected set" } else { "differ" },
            t_s.as_secs_f64() * 1e3,
            t_c.as_secs_f64() * 1e3
        ),
    );
}

fn ac3_single_conflict(outcomes: &mut Vec<Outcome>) {
    let d = load_facts(data("ex4.facts")).unwrap();
    let kappa = parse_dc(":- P(X,Y),R(Y,Z).").unwrap();
    let sigma = vec![kappa.clone()];
    let causes = actual_causes(&d, &violation_view(&kappa)).unwrap();
    let ct = |t: &str| -> BTreeSet<BTreeSet<GroundAtom>> {
        causes
            .get(&atom(t))
            .map(|r| r.minimal_contingencies.iter().cloned().collect())
            .unwrap_or_default()
    };
    let mut checks = vec![
        ("causes", causes.causes() == atoms(&["P(a,b)", "R(b,c)", "R(b,b)"])),
        ("contingencies of P(a,b)", ct("P(a,b)") == family(&[&[]])),
        ("contingencies of R(b,c)", ct("R(b,c)") == family(&[&["R(b,b)"]])),
        ("contingencies of R(b,b)", ct("R(b,b)") == family(&[&["R(b,c)"]])),
        ("most responsible", most_responsible(&causes) == atoms(&["P(a,b)"])),
    ];
    let s: BTreeSet<_> = s_repairs(&d, &sigma).unwrap().deletion_sets().into_iter().collect();
    let c: BTreeSet<_> = c_repairs(&d, &sigma).unwrap().deletion_sets().into_iter().collect();
    checks.push(("S-repairs", s == family(&[&["P(a,b)"], &["R(b,c)", "R(b,b)"]])));
    checks.push(("C-repair", c == family(&[&["P(a,b)"]])));
    let failed: Vec<&str> = checks.iter().filter(|(_, ok)| !ok).map(|(n, _)| *n).collect();
    report(
        outcomes,
        "AC3",
        "single-conflict causes, contingencies and repairs",
        failed.is_empty(),
        if failed.is_empty() {
            "all 7 values match".into()
        } else {
            format!("mismatched: {failed:?}")
        },
    );
}

fn ac4_consistent_answers(outcomes: &mut Vec<Outcome>) {
    let facts = data("ex5.facts");
    let mut detail = Vec::new();
    let mut ok = true;
    for (a, expected) in [("R(a,d)", true), ("P(a,b)", false), ("R(b,c)", false)] {
        let (code, v, _) = cli_json(&[
            "cqa",
            "--facts",
            facts.to_str().unwrap(),
            "--dc",
            ":- P(X,Y),R(Y,Z).",
            "--atom",
            a,
        ]);
        let got = v["result"]["consistent"].as_bool();
        ok &= code == 0 && got == Some(expected);
        detail.push(format!("{a}={}", got.map_or("?".into(), |b| b.to_string())));
    }
    report(outcomes, "AC4", "consistent answers", ok, detail.join(", "));
}

fn ac5_cause_package_repairs(outcomes: &mut Vec<Outcome>) {
    let d = load_facts(data("ex6.facts")).unwrap();
    let sigma = parse_dcs(&std::fs::read_to_string(data("ex6.dc")).unwrap()).unwrap();
    let pkg = CausePackage::compute(&d, &sigma).unwrap();
    let repairs = repairs_from_causes(&d, &sigma, &pkg).unwrap();
    let got: BTreeSet<BTreeSet<GroundAtom>> = repairs.repairs.iter().map(|r| r.instance.atom_set()).collect();
    let expected = family(&[&["P(a,b)", "S(c,d)"], &["R(b,c)"]]);
    report(
        outcomes,
        "AC5",
        "repairs assembled from a two-constraint cause package",
        got == expected,
        format!(
            "{} repairs: D∖{{R(b,c)}} and D∖{{P(a,b),S(c,d)}} {}",
            got.len(),
            if got == expected { "exactly" } else { "not matched" }
        ),
    );
}

fn ac6_diagnosis(outcomes: &mut Vec<Outcome>) {
    let d = load_facts(data("ex7.facts")).unwrap();
    let q = parse_query(JOIN_QUERY).unwrap();
    let m = build_diagnosis_problem(&d, &q).unwrap();
    let diagnoses: BTreeSet<_> = minimal_diagnoses(&m).unwrap().into_iter().map(|x| x.abnormal).collect();
    let causes = causes_from_diagnoses(&m).unwrap();
    let diag_ok = diagnoses == family(&[&["S(a3)"], &["S(a4)"]]);
    let causes_ok = causes.causes() == atoms(&["S(a3)", "S(a4)"])
        && causes
            .reports
            .iter()
            .all(|r| r.responsibility.numer() == 1 && r.responsibility.denom() == 1);
    report(
        outcomes,
        "AC6",
        "minimal diagnoses and the causes they give",
        diag_ok && causes_ok,
        format!(
            "diagnoses {}, causes {}",
            if diag_ok { "{{S(a3)},{S(a4)}}" } else { "differ" },
            if causes_ok {
                "S(a3), S(a4) with ρ = 1"
            } else {
                "differ"
            }
        ),
    );
}

/// Draws `n` values from `strategy` with a fixed seed.
fn sample<S: Strategy>(strategy: &S, n: usize) -> Vec<S::Value> {
    let mut runner = common::seeded_runner(n as u32);
    (0..n)
        .map(|_| strategy.new_tree(&mut runner).unwrap().current())
        .collect()
}

fn suite(outcomes: &mut Vec<Outcome>, id: &'static str, name: &str, mut check: impl FnMut(&common::Case) -> bool) {
    let cases = sample(&common::case(), SUITE_CASES as usize);
    let violations = cases.iter().filter(|c| !check(c)).count();
    report(
        outcomes,
        id,
        name,
        violations == 0,
        format!("{} cases, {violations} violations", cases.len()),
    );
}

fn ac7_equivalence_suites(outcomes: &mut Vec<Outcome>) {
    let start = Instant::now();
    let oracle = OracleBudget::default();
    suite(outcomes, "AC7a", "causes from repairs equal brute-force causes", |c| {
        causes_from_repairs(&c.instance, &c.query).unwrap().reports
            == brute_causes(&c.instance, &c.query, &oracle).unwrap().reports
    });
    suite(
        outcomes,
        "AC7b",
        "repairs from cause packages equal brute-force S-repairs",
        |c| {
            let d = c.instance.all_endogenous();
            let pkg = CausePackage::compute(&d, &c.constraints).unwrap();
            repairs_from_causes(&d, &c.constraints, &pkg).unwrap()
                == brute_s_repairs(&d, &c.constraints, &oracle).unwrap()
        },
    );
    suite(
        outcomes,
        "AC7c",
        "C-repairs from most responsible causes equal brute-force C-repairs",
        |c| {
            let d = c.instance.all_endogenous();
            c.constraints.iter().all(|k| {
                c_repairs_from_mrc(&d, k).unwrap() == brute_c_repairs(&d, std::slice::from_ref(k), &oracle).unwrap()
            })
        },
    );
    suite(
        outcomes,
        "AC7d",
        "consistent answers from causes equal membership in all S-repairs",
        |c| {
            let d = c.instance.all_endogenous();
            c.constraints.iter().all(|k| {
                d.iter().all(|t| {
                    cqa_from_causes(&d, k, t).unwrap()
                        == brute_consistent_answer(&d, std::slice::from_ref(k), t, &oracle).unwrap()
                })
            })
        },
    );
    suite(
        outcomes,
        "AC7e",
        "causes from diagnoses equal brute-force causes",
        |c| {
            let brute = brute_causes(&c.instance, &c.query, &oracle).unwrap();
            match build_diagnosis_problem(&c.instance, &c.query) {
                Ok(m) => causes_from_diagnoses(&m).unwrap().reports == brute.reports,
                Err(_) => brute.is_empty(),
            }
        },
    );

    // Insertions into instances where the query holds and the new tuple is
    // not yet present.
    let strategy = (common::instance(), common::query(), common::ground_atom());
    let mut trials = Vec::new();
    let mut runner = common::seeded_runner(INSERTIONS as u32);
    while trials.len() < INSERTIONS {
        let (d, q, t) = strategy.new_tree(&mut runner).unwrap().current();
        if !d.contains(&t) && d.len() < common::MAX_TUPLES && evaluate_bcq(&d, &q).unwrap() {
            trials.push((d, q, t));
        }
    }
    let mut endo_violations = 0;
    let mut exo_violations = 0;
    let mut first_exo = None;
    for (d, q, t) in &trials {
        let before = actual_causes(d, q).unwrap().causes();
        let endo = actual_causes(&d.with_atom(t.clone(), Tag::Endogenous).unwrap(), q)
            .unwrap()
            .causes();
        let exo = actual_causes(&d.with_atom(t.clone(), Tag::Exogenous).unwrap(), q)
            .unwrap()
            .causes();
        endo_violations += usize::from(!before.is_subset(&endo));
        if !exo.is_subset(&before) {
            exo_violations += 1;
            first_exo.get_or_insert_with(|| {
                format!(
                    "{q} on {} + exogenous {t}",
                    d.atom_set()
                        .iter()
                        .map(ToString::to_string)
                        .collect::<Vec<_>>()
                        .join(" ")
                )
            });
        }
    }
    report(
        outcomes,
        "AC7f-endo",
        "endogenous insertion keeps every cause",
        endo_violations == 0,
        format!("{INSERTIONS} insertions, {endo_violations} violations"),
    );
    report(
        outcomes,
        "AC7f-exo",
        "exogenous insertion adds no cause",
        exo_violations == 0,
        format!(
            "{INSERTIONS} insertions, {exo_violations} violations{}",
            first_exo.map(|e| format!("; first: {e}")).unwrap_or_default()
        ),
    );
    let elapsed = start.elapsed();
    report(
        outcomes,
        "AC7-time",
        "random suites finish in time",
        elapsed < SUITES_TIME_LIMIT,
        format!("{:.1} s", elapsed.as_secs_f64()),
    );
}

fn ac8_duality(outcomes: &mut Vec<Outcome>) {
    suite(
        outcomes,
        "AC8",
        "S-repair deletion sets equal minimal hitting sets of conflicts",
        |c| {
            let h = ConflictHypergraph::build(&c.instance, &c.constraints).unwrap();
            let mhs: BTreeSet<_> = minimal_hitting_sets(&h.edges, &mut Budget::default())
                .unwrap()
                .into_iter()
                .collect();
            let deletions: BTreeSet<_> = s_repairs(&c.instance, &c.constraints)
                .unwrap()
                .deletion_sets()
                .into_iter()
                .collect();
            mhs.is_subset(&deletions) && deletions.is_subset(&mhs)
        },
    );
}

/// Query, constraint file or text, and a sample tuple per data file.
const INPUTS: &[(&str, &str, &str, &str)] = &[
    ("ex1.facts", JOIN_QUERY, ":- S(X),R(X,Y),S(Y).", "R(a4,a3)"),
    ("ex2.facts", JOIN_QUERY, ":- S(X),R(X,Y),S(Y).", "S(a4)"),
    ("ex2_updated.facts", JOIN_QUERY, ":- S(X),R(X,Y),S(Y).", "S(a4)"),
    ("ex3.facts", JOIN_QUERY, ":- S(X),R(X,Y),S(Y).", "S(a3)"),
    ("ex4.facts", "q() :- P(X,Y),R(Y,Z).", ":- P(X,Y),R(Y,Z).", "P(a,b)"),
    ("ex5.facts", "q() :- P(X,Y),R(Y,Z).", ":- P(X,Y),R(Y,Z).", "R(a,d)"),
    (
        "ex6.facts",
        "q() :- P(X,Y),R(Y,Z),S(Z,W).",
        "@crates/core/data/ex6.dc",
        "R(b,c)",
    ),
    ("ex7.facts", JOIN_QUERY, ":- S(X),R(X,Y),S(Y).", "S(a3)"),
    ("empty.facts", JOIN_QUERY, ":- S(X),R(X,Y),S(Y).", "S(a3)"),
];

fn ac9_determinism(outcomes: &mut Vec<Outcome>) {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../..");
    let mut runs = 0;
    let mut differing = Vec::new();
    for (file, q, dc, tuple) in INPUTS {
        let facts = format!("crates/core/data/{file}");
        let commands: Vec<Vec<&str>> = vec![
            vec!["check"],
            vec!["eval"],
            vec!["causes"],
            vec!["responsibility", "--tuple", tuple],
            vec!["repairs", "--kind", "s", "--dc", dc],
            vec!["repairs", "--kind", "c", "--dc", dc],
            vec!["cqa", "--atom", tuple, "--semantics", "s", "--dc", dc],
            vec!["cqa", "--atom", tuple, "--semantics", "c", "--dc", dc],
            vec!["diagnose", "--show-sd"],
            vec!["crosscheck", "--dc", dc],
        ];
        for cmd in commands {
            for json in [true, false] {
                let mut args: Vec<&str> = cmd.clone();
                args.extend(["--facts", &facts, "--query", q]);
                if json {
                    args.push("--json");
                }
                let run = || {
                    let o = Command::new(env!("CARGO_BIN_EXE_dbcause"))
                        .args(&args)
                        .current_dir(&root)
                        .output()
                        .unwrap();
                    (o.status.code(), o.stdout, o.stderr)
                };
                runs += 1;
                if run() != run() {
                    differing.push(format!("{file}: {}", args.join(" ")));
                }
            }
        }
    }
    report(
        outcomes,
        "AC9",
        "CLI output is byte-identical across runs",
        differing.is_empty(),
        if differing.is_empty() {
            format!("{runs} invocations, each run twice")
        } else {
            format!("differs: {differing:?}")
        },
    );
}

#[test]
fn acceptance() {
    let mut outcomes = Vec::new();
    ac1_example_causes(&mut outcomes);
    ac2_example_repairs(&mut outcomes);
    ac3_single_conflict(&mut outcomes);
    ac4_consistent_answers(&mut outcomes);
    ac5_cause_package_repairs(&mut outcomes);
    ac6_diagnosis(&mut outcomes);
    ac7_equivalence_suites(&mut outcomes);
    ac8_duality(&mut outcomes);
    ac9_determinism(&mut outcomes);

    let failed: Vec<&str> = outcomes.iter().filter(|o| !o.passed).map(|o| o.id).collect();
    let unexpected: Vec<&&str> = failed.iter().filter(|id| !KNOWN_UNATTAINABLE.contains(id)).collect();
    println!(
        "{} of {} criteria passed; known unattainable: {:?}",
        outcomes.len() - failed.len(),
        outcomes.len(),
        KNOWN_UNATTAINABLE
    );
    assert!(unexpected.is_empty(), "failed criteria: {unexpected:?}");
}
