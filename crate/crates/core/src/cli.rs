//! Command-line driver. [`run`] parses arguments, runs one command, and
//! writes either a human summary or a single JSON document.
//!
//! Exit codes: 0 success, 1 a crosscheck failed, 2 invalid input,
//! 3 an enumeration or oracle budget was exceeded.

use std::collections::BTreeSet;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::causality::{actual_causes_with, responsibility_with};
use crate::crosscheck::{run_crosscheck, CrosscheckInput, Verdict};
use crate::diagnosis::{build_diagnosis_problem, causes_from_diagnoses_with, minimal_diagnoses_with};
use crate::error::{Error, Result};
use crate::facts::load_facts;
use crate::hitting::{Budget, DEFAULT_NODE_LIMIT};
use crate::oracle::OracleBudget;
use crate::query::{
    answers, dc_of_query, evaluate_bcq, ground_answer_dc, parse_dcs, parse_ground_atom, parse_query, violation_view,
    witnesses, ConjunctiveQuery, DenialConstraint,
};
use crate::relational::{Constant, GroundAtom, Instance};
use crate::repair::{consistent_answer_ground_with, is_consistent, repairs};
use crate::report::{CauseSet, RepairKind, RepairSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    S,
    C,
}

impl From<KindArg> for RepairKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::S => RepairKind::Subset,
            KindArg::C => RepairKind::Cardinality,
        }
    }
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Parse and validate the inputs
    Check,
    /// Evaluate the query: truth value and minimal witnesses, or answers
    Eval,
    /// Actual causes with contingency sets and responsibilities
    Causes,
    /// Responsibility of one tuple
    Responsibility {
        /// Ground atom, e.g. "R(a4,a3)"
        #[arg(long)]
        tuple: String,
    },
    /// S-repairs or C-repairs under the denial constraints
    Repairs {
        #[arg(long, value_enum, default_value = "s")]
        kind: KindArg,
    },
    /// Consistent answer for a ground atom
    Cqa {
        #[arg(long)]
        atom: String,
        #[arg(long, value_enum, default_value = "s")]
        semantics: KindArg,
    },
    /// Minimal diagnoses and the causes they determine
    Diagnose {
        /// Include the system description
        #[arg(long)]
        show_sd: bool,
    },
    /// Compare every reduction against brute-force enumeration
    Crosscheck {
        /// Largest tuple set the brute-force oracle will enumerate
        #[arg(long, default_value_t = 12)]
        oracle_budget: usize,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Check => "check",
            Command::Eval => "eval",
            Command::Causes => "causes",
            Command::Responsibility { .. } => "responsibility",
            Command::Repairs { .. } => "repairs",
            Command::Cqa { .. } => "cqa",
            Command::Diagnose { .. } => "diagnose",
            Command::Crosscheck { .. } => "crosscheck",
        }
    }
}

#[derive(Debug, Clone, Parser)]
#[command(
    name = "dbcause",
    version,
    about = "Causes, repairs and diagnoses for conjunctive queries over relational instances"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Facts file
    #[arg(long, global = true)]
    pub facts: Option<PathBuf>,
    /// Query text, or @PATH to read it from a file
    #[arg(long, global = true)]
    pub query: Option<String>,
    /// Denial constraint text, or @PATH to a file of constraints (repeatable)
    #[arg(long = "dc", global = true)]
    pub dcs: Vec<String>,
    /// Comma-separated answer tuple that grounds an open query
    #[arg(long, global = true)]
    pub answer: Option<String>,
    /// Emit one JSON document instead of text
    #[arg(long, global = true)]
    pub json: bool,
    /// Limit on explored hitting-set search nodes
    #[arg(long, global = true, default_value_t = DEFAULT_NODE_LIMIT)]
    pub budget: u64,
    /// Report wall-clock time in the stats
    #[arg(long, global = true)]
    pub timings: bool,
}

struct Inputs {
    instance: Instance,
    query: Option<ConjunctiveQuery>,
    constraints: Vec<DenialConstraint>,
    answer: Option<Vec<Constant>>,
}

struct Output {
    result: Value,
    text: String,
    code: i32,
}

impl Output {
    fn ok(result: Value, text: String) -> Self {
        Output { result, text, code: 0 }
    }
}

fn read_arg(text: &str) -> Result<String> {
    match text.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{path}: {e}"))),
        None => Ok(text.to_string()),
    }
}

fn load(cfg: &RunConfig) -> Result<Inputs> {
    let facts = cfg
        .facts
        .as_ref()
        .ok_or_else(|| Error::Io("--facts is required".into()))?;
    let instance = load_facts(facts)?;
    let query = cfg
        .query
        .as_deref()
        .map(read_arg)
        .transpose()?
        .map(|t| parse_query(&t))
        .transpose()?;
    let mut constraints = Vec::new();
    for dc in &cfg.dcs {
        constraints.extend(parse_dcs(&read_arg(dc)?)?);
    }
    let schema = instance.schema();
    let atoms = query
        .iter()
        .flat_map(|q| q.atoms())
        .chain(constraints.iter().flat_map(|k| k.atoms()));
    for a in atoms {
        if let Some(arity) = schema.arity(a.name()) {
            if arity != a.args().len() {
                return Err(Error::ArityMismatch {
                    predicate: a.name().to_string(),
                    expected: arity,
                    found: a.args().len(),
                });
            }
        }
    }
    let answer = cfg.answer.as_ref().map(|a| {
        a.split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(Constant::new)
            .collect::<Vec<_>>()
    });
    Ok(Inputs {
        instance,
        query,
        constraints,
        answer,
    })
}

fn require_query(inputs: &Inputs) -> Result<&ConjunctiveQuery> {
    inputs
        .query
        .as_ref()
        .ok_or_else(|| Error::Io("--query is required for this command".into()))
}

/// The boolean queries a command runs on: the query itself, the query
/// grounded with `--answer`, or (when `all_answers`) one grounding per
/// answer of an open query.
fn boolean_targets(inputs: &Inputs, all_answers: bool) -> Result<Vec<(Option<Vec<Constant>>, ConjunctiveQuery)>> {
    let q = require_query(inputs)?;
    if q.is_boolean() {
        return Ok(vec![(None, q.clone())]);
    }
    let ground = |a: Vec<Constant>| -> Result<_> {
        let view = violation_view(&ground_answer_dc(q, &a)?);
        Ok((Some(a), view))
    };
    match &inputs.answer {
        Some(a) => Ok(vec![ground(a.clone())?]),
        None if all_answers => answers(&inputs.instance, q).into_iter().map(ground).collect(),
        None => Err(Error::NotBoolean),
    }
}

/// Explicit constraints, or `κ(Q)` when only a boolean query is given.
fn constraint_set(inputs: &Inputs) -> Result<Vec<DenialConstraint>> {
    if !inputs.constraints.is_empty() {
        return Ok(inputs.constraints.clone());
    }
    match &inputs.query {
        Some(q) => Ok(vec![dc_of_query(q)?]),
        None => Err(Error::Io(
            "--dc or a boolean --query is required for this command".into(),
        )),
    }
}

fn atoms_json<'a>(atoms: impl IntoIterator<Item = &'a GroundAtom>) -> Value {
    json!(atoms.into_iter().map(ToString::to_string).collect::<Vec<_>>())
}

fn braces<'a>(atoms: impl IntoIterator<Item = &'a GroundAtom>) -> String {
    let parts: Vec<String> = atoms.into_iter().map(ToString::to_string).collect();
    format!("{{{}}}", parts.join(", "))
}

fn answer_json(a: &Option<Vec<Constant>>) -> Value {
    match a {
        Some(a) => json!(a.iter().map(Constant::symbol).collect::<Vec<_>>()),
        None => Value::Null,
    }
}

fn causes_json(c: &CauseSet) -> Value {
    json!(c
        .reports
        .iter()
        .map(|r| json!({
            "cause": r.cause.to_string(),
            "counterfactual": r.is_counterfactual(),
            "responsibility": r.responsibility,
            "minimal_contingencies": r.minimal_contingencies.iter().map(atoms_json).collect::<Vec<_>>(),
        }))
        .collect::<Vec<_>>())
}

fn causes_text(c: &CauseSet) -> String {
    if c.is_empty() {
        return "  no actual causes\n".into();
    }
    let width = c.reports.iter().map(|r| r.cause.to_string().len()).max().unwrap_or(0);
    let mut out = String::new();
    for r in &c.reports {
        let contingencies: Vec<String> = r.minimal_contingencies.iter().map(braces).collect();
        out.push_str(&format!(
            "  {:<width$}  ρ = {:<4}  contingencies: {}\n",
            r.cause.to_string(),
            r.responsibility.to_string(),
            contingencies.join(" | "),
        ));
    }
    out
}

fn repairs_json(r: &RepairSet) -> Value {
    json!({
        "kind": r.kind,
        "repairs": r.repairs.iter().map(|x| json!({
            "deleted": atoms_json(&x.deleted),
            "retained": atoms_json(&x.instance.atom_set()),
        })).collect::<Vec<_>>(),
    })
}

fn plural(n: usize) -> &'static str {
    if n == 1 {
        ""
    } else {
        "s"
    }
}

fn label(answer: &Option<Vec<Constant>>, q: &ConjunctiveQuery) -> String {
    match answer {
        Some(a) => {
            let parts: Vec<&str> = a.iter().map(Constant::symbol).collect();
            format!("answer ({}) of {q}", parts.join(","))
        }
        None => q.to_string(),
    }
}

fn cmd_check(inputs: &Inputs) -> Result<Output> {
    let d = &inputs.instance;
    let predicates: Vec<String> = d.schema().signatures().map(|s| s.to_string()).collect();
    let mut unknown = BTreeSet::new();
    let atoms = inputs
        .query
        .iter()
        .flat_map(|q| q.atoms())
        .chain(inputs.constraints.iter().flat_map(|k| k.atoms()));
    for a in atoms {
        if d.schema().arity(a.name()).is_none() {
            unknown.insert(a.name().to_string());
        }
    }
    let holds = match &inputs.query {
        Some(q) if q.is_boolean() => Some(evaluate_bcq(d, q)?),
        _ => None,
    };
    let consistent = (!inputs.constraints.is_empty()).then(|| is_consistent(d, &inputs.constraints));
    let mut text = format!(
        "{} endogenous and {} exogenous tuples over {}\n",
        d.endogenous().len(),
        d.exogenous().len(),
        if predicates.is_empty() {
            "no predicates".to_string()
        } else {
            predicates.join(", ")
        }
    );
    if let Some(q) = &inputs.query {
        text.push_str(&format!("query: {q}"));
        if let Some(h) = holds {
            text.push_str(if h { " (true)" } else { " (false)" });
        }
        text.push('\n');
    }
    for k in &inputs.constraints {
        text.push_str(&format!("constraint: {k}\n"));
    }
    if let Some(c) = consistent {
        text.push_str(if c {
            "instance is consistent\n"
        } else {
            "instance is inconsistent\n"
        });
    }
    for u in &unknown {
        text.push_str(&format!("note: predicate {u} has no facts\n"));
    }
    Ok(Output::ok(
        json!({
            "endogenous": d.endogenous().len(),
            "exogenous": d.exogenous().len(),
            "predicates": predicates,
            "query_holds": holds,
            "consistent": consistent,
            "predicates_without_facts": unknown,
        }),
        text,
    ))
}

fn cmd_eval(inputs: &Inputs) -> Result<Output> {
    let q = require_query(inputs)?;
    let d = &inputs.instance;
    if q.is_boolean() {
        let ws = witnesses(d, q, true)?;
        let holds = !ws.is_empty();
        let mut text = format!("{q} is {}\n", if holds { "true" } else { "false" });
        for w in &ws {
            text.push_str(&format!("  witness {}\n", braces(&w.image)));
        }
        let ws_json: Vec<Value> = ws
            .iter()
            .map(|w| {
                json!({
                    "assignment": w.assignment.iter().map(|(k, v)| (k.clone(), json!(v.symbol()))).collect::<serde_json::Map<_, _>>(),
                    "image": atoms_json(&w.image),
                })
            })
            .collect();
        Ok(Output::ok(
            json!({ "holds": holds, "minimal_witnesses": ws_json }),
            text,
        ))
    } else {
        let ans = answers(d, q);
        let mut text = format!("{} answer{} to {q}\n", ans.len(), plural(ans.len()));
        for a in &ans {
            let parts: Vec<&str> = a.iter().map(Constant::symbol).collect();
            text.push_str(&format!("  ({})\n", parts.join(",")));
        }
        let ans_json: Vec<Vec<&str>> = ans.iter().map(|a| a.iter().map(Constant::symbol).collect()).collect();
        Ok(Output::ok(json!({ "answers": ans_json }), text))
    }
}

fn cmd_causes(inputs: &Inputs, budget: &mut Budget) -> Result<Output> {
    let targets = boolean_targets(inputs, true)?;
    let mut groups = Vec::new();
    let mut text = String::new();
    for (answer, q) in &targets {
        let causes = actual_causes_with(&inputs.instance, q, budget)?;
        text.push_str(&format!(
            "{} actual cause{} for {}\n",
            causes.len(),
            plural(causes.len()),
            label(answer, q)
        ));
        text.push_str(&causes_text(&causes));
        groups.push(json!({ "answer": answer_json(answer), "query": q.to_string(), "causes": causes_json(&causes) }));
    }
    let q = require_query(inputs)?;
    let result = if q.is_boolean() || inputs.answer.is_some() {
        groups.pop().unwrap_or(Value::Null)
    } else {
        if targets.is_empty() {
            text.push_str(&format!("{q} has no answers\n"));
        }
        json!({ "per_answer": groups })
    };
    Ok(Output::ok(result, text))
}

fn cmd_responsibility(inputs: &Inputs, tuple: &str, budget: &mut Budget) -> Result<Output> {
    let t = parse_ground_atom(tuple)?;
    let (answer, q) = boolean_targets(inputs, false)?.remove(0);
    let rho = responsibility_with(&inputs.instance, &q, &t, budget)?;
    let text = format!("ρ({t}) = {rho} for {}\n", label(&answer, &q));
    Ok(Output::ok(
        json!({ "tuple": t.to_string(), "responsibility": rho }),
        text,
    ))
}

fn cmd_repairs(inputs: &Inputs, kind: KindArg, budget: &mut Budget) -> Result<Output> {
    let sigma = constraint_set(inputs)?;
    let set = repairs(&inputs.instance, &sigma, kind.into(), budget)?;
    let mut text = format!("{} {}-repair{}\n", set.len(), set.kind, plural(set.len()));
    for r in &set.repairs {
        text.push_str(&format!("  delete {}\n", braces(&r.deleted)));
    }
    Ok(Output::ok(repairs_json(&set), text))
}

fn cmd_cqa(inputs: &Inputs, atom: &str, semantics: KindArg, budget: &mut Budget) -> Result<Output> {
    let a = parse_ground_atom(atom)?;
    let sigma = constraint_set(inputs)?;
    let kind: RepairKind = semantics.into();
    let consistent = consistent_answer_ground_with(&inputs.instance, &sigma, &a, kind, budget)?;
    let text = format!(
        "{a} is {} under {kind}-repair semantics\n",
        if consistent {
            "consistently true"
        } else {
            "not consistently true"
        }
    );
    Ok(Output::ok(
        json!({ "atom": a.to_string(), "semantics": kind, "consistent": consistent }),
        text,
    ))
}

fn cmd_diagnose(inputs: &Inputs, show_sd: bool, budget: &mut Budget) -> Result<Output> {
    let (answer, q) = boolean_targets(inputs, false)?.remove(0);
    let m = build_diagnosis_problem(&inputs.instance, &q)?;
    let diagnoses = minimal_diagnoses_with(&m, budget)?;
    let causes = causes_from_diagnoses_with(&m, budget)?;
    let mut text = format!(
        "{} minimal diagnos{} for {}\n",
        diagnoses.len(),
        if diagnoses.len() == 1 { "is" } else { "es" },
        label(&answer, &q)
    );
    for d in &diagnoses {
        text.push_str(&format!("  abnormal {}\n", braces(&d.abnormal)));
    }
    text.push_str("causes from diagnoses:\n");
    text.push_str(&causes_text(&causes));
    let mut result = json!({
        "minimal_diagnoses": diagnoses.iter().map(|d| atoms_json(&d.abnormal)).collect::<Vec<_>>(),
        "causes": causes_json(&causes),
    });
    if show_sd {
        text.push_str("system description:\n");
        for line in m.system_description.render().lines() {
            text.push_str(&format!("  {line}\n"));
        }
        result["system_description"] = serde_json::to_value(&m.system_description).expect("serializable");
    }
    Ok(Output::ok(result, text))
}

fn cmd_crosscheck(inputs: &Inputs, oracle_budget: usize, budget: &mut Budget) -> Result<Output> {
    let query = match &inputs.query {
        Some(_) => boolean_targets(inputs, false)?.pop().map(|(_, q)| q),
        None => None,
    };
    let input = CrosscheckInput {
        instance: inputs.instance.clone(),
        query,
        constraints: inputs.constraints.clone(),
    };
    let oracle = OracleBudget {
        max_subset_universe: oracle_budget,
    };
    let report = run_crosscheck(&input, budget.limit(), &oracle)?;
    let mut text = String::new();
    for c in &report.checks {
        text.push_str(&format!("[{}] {}: {}\n", c.verdict, c.name, c.claim));
        if c.verdict != Verdict::Pass {
            text.push_str(&format!("       {}\n", c.detail));
        }
    }
    let code = if report.all_passed() { 0 } else { 1 };
    Ok(Output {
        result: serde_json::to_value(&report).expect("serializable"),
        text,
        code,
    })
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::ResourceExceeded { .. } | Error::BudgetExceeded { .. } => 3,
        _ => 2,
    }
}

fn input_json(cfg: &RunConfig, inputs: &Inputs) -> Value {
    json!({
        "command": cfg.command.name(),
        "facts": cfg.facts.as_ref().map(|p| p.display().to_string()),
        "instance_id": inputs.instance.fingerprint(),
        "query": inputs.query.as_ref().map(ToString::to_string),
        "constraints": inputs.constraints.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "answer": answer_json(&inputs.answer),
    })
}

fn execute(cfg: &RunConfig, out: &mut dyn Write) -> Result<i32> {
    let started = Instant::now();
    let inputs = load(cfg)?;
    let mut budget = Budget::new(cfg.budget);
    let output = match &cfg.command {
        Command::Check => cmd_check(&inputs)?,
        Command::Eval => cmd_eval(&inputs)?,
        Command::Causes => cmd_causes(&inputs, &mut budget)?,
        Command::Responsibility { tuple } => cmd_responsibility(&inputs, tuple, &mut budget)?,
        Command::Repairs { kind } => cmd_repairs(&inputs, *kind, &mut budget)?,
        Command::Cqa { atom, semantics } => cmd_cqa(&inputs, atom, *semantics, &mut budget)?,
        Command::Diagnose { show_sd } => cmd_diagnose(&inputs, *show_sd, &mut budget)?,
        Command::Crosscheck { oracle_budget } => cmd_crosscheck(&inputs, *oracle_budget, &mut budget)?,
    };
    let write = |out: &mut dyn Write, s: &str| out.write_all(s.as_bytes()).map_err(|e| Error::Io(e.to_string()));
    if cfg.json {
        let mut stats = json!({ "nodes_explored": budget.explored() });
        if cfg.timings {
            stats["wall_time_ms"] = json!(started.elapsed().as_secs_f64() * 1000.0);
        }
        let doc = json!({ "input": input_json(cfg, &inputs), "result": output.result, "stats": stats });
        write(out, &serde_json::to_string_pretty(&doc).expect("serializable"))?;
        write(out, "\n")?;
    } else {
        write(out, &output.text)?;
        if cfg.timings {
            write(out, &format!("({:.3} ms)\n", started.elapsed().as_secs_f64() * 1000.0))?;
        }
    }
    Ok(output.code)
}

/// Runs one invocation; `args` includes the program name.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(cfg) => cfg,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
                2
            } else {
                let _ = out.write_all(text.as_bytes());
                0
            };
        }
    };
    match execute(&cfg, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = if cfg.json {
                let doc = json!({ "error": { "kind": e.kind(), "message": e.to_string() } });
                writeln!(err, "{}", serde_json::to_string_pretty(&doc).expect("serializable"))
            } else {
                writeln!(err, "error: {e}")
            };
            exit_code(&e)
        }
    }
}
