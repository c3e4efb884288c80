//! Command-line front end: runs demos and attacks, prints a human summary,
//! and emits machine-readable JSON reports.
//!
//! Exit codes: 0 on success, 1 on attack-failure outcomes
//! (insufficient-plaintext, wrong-structure), 2 on usage errors.

use std::io::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::attack::{
    miller_rabin_bb, run_field_attack, run_group_attack, verify_encrypts, MrVerdict, Outcome,
};
use crate::blackbox::{identity_element, QueryBudgetReport};
use crate::constructions::{
    amalgamate, augment, conjugation_graph, graph_subgroup, reify, ConjugationGraph,
    ProtoInvolution,
};
use crate::element::CryptoElement;
use crate::encrypt::encrypt;
use crate::error::{Error, Result};
use crate::explicit::{
    make_cyclic_group, make_symmetric_group, parse_structure, ExplicitStructure, FieldSpec,
};
use crate::recognition::{recognize_field, RecognitionMethod};
use crate::sampling::{uniformity_report, uniformity_report_frozen, DEFAULT_BURN_IN};
use crate::util::derive_seed;

#[derive(Parser)]
#[command(
    name = "bba",
    about = "Black-box algebra toolbox: encrypted-structure demos and known-plaintext attacks",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Seed driving all randomness (env BBA_SEED overrides).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the JSON report to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Print a human-readable summary to stderr.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum MethodArg {
    Table,
    Bsgs,
}

impl From<MethodArg> for RecognitionMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Table => RecognitionMethod::Table,
            MethodArg::Bsgs => RecognitionMethod::Bsgs,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Recover the decryption map of an encrypted finite field.
    FieldAttack(FieldAttackArgs),
    /// Recover the decryption map of an encrypted finite group.
    GroupAttack(GroupAttackArgs),
    /// Decide whether an encrypted box matches a claimed structure.
    Verify(VerifyArgs),
    /// Primality testing through the multiplicative group as a black box.
    MillerRabin(MillerRabinArgs),
    /// Chi-square uniformity diagnostics of the product replacement sampler.
    PrStats(PrStatsArgs),
    /// Constructive recognition of an encrypted field, with query costs.
    RecognizeField(RecognizeFieldArgs),
    /// Proto-involution machinery walkthroughs.
    Demo(DemoArgs),
}

#[derive(Args)]
struct FieldAttackArgs {
    /// Field spec `p^n[/modulus]`, e.g. `3^4` or `3^4/x^4+x+2`.
    #[arg(long)]
    spec: String,
    /// Known plaintext pairs handed to the attacker.
    #[arg(long, default_value_t = 1)]
    known: usize,
    #[arg(long, value_enum, default_value_t = MethodArg::Table)]
    method: MethodArg,
}

#[derive(Args)]
struct GroupAttackArgs {
    /// Structure descriptor, e.g. `s:4`, `z:15`, `d:4`, `pgl2-3`.
    #[arg(long)]
    structure: String,
    /// Known plaintext pairs (taken on generators).
    #[arg(long, default_value_t = 2)]
    known: usize,
}

#[derive(Args)]
struct VerifyArgs {
    /// Structure the box actually encrypts.
    #[arg(long)]
    x: String,
    /// Structure the box is claimed to encrypt.
    #[arg(long)]
    a: String,
    /// Monte-Carlo rounds for the statistical path.
    #[arg(long, default_value_t = 40)]
    confidence: u32,
}

#[derive(Args)]
struct MillerRabinArgs {
    #[arg(long)]
    n: u64,
    #[arg(long, default_value_t = 40)]
    rounds: u32,
}

#[derive(Args)]
struct PrStatsArgs {
    /// Structure descriptor to sample over.
    #[arg(long)]
    structure: String,
    /// Sample count; default 1000·|G|.
    #[arg(long)]
    samples: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_BURN_IN)]
    burn_in: u64,
    /// Use the deliberately broken sampler (no steps, slot 0 only).
    #[arg(long, default_value_t = false)]
    degenerate: bool,
}

#[derive(Args)]
struct RecognizeFieldArgs {
    #[arg(long)]
    spec: String,
    #[arg(long, value_enum, default_value_t = MethodArg::Table)]
    method: MethodArg,
}

#[derive(Args)]
struct DemoArgs {
    #[arg(value_enum)]
    which: DemoKind,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum DemoKind {
    /// Join local proto-involutions into one on the whole group.
    Amalgamate,
    /// Turn a proto-involution into an actual involution codeword.
    Reify,
    /// Extend a group by the automorphism a proto-involution encodes.
    Augment,
}

/// The JSON report every subcommand emits.
#[derive(Serialize)]
struct Report {
    subcommand: String,
    config: Value,
    success: bool,
    outcome: String,
    delta: Option<String>,
    query_budget: BudgetCounters,
    verification: VerificationCounts,
    wall_time_s: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    details: Option<Value>,
}

#[derive(Serialize, Default, Clone, Copy)]
struct BudgetCounters {
    sample_calls: u64,
    apply_calls: u64,
    equal_calls: u64,
}

impl From<QueryBudgetReport> for BudgetCounters {
    fn from(b: QueryBudgetReport) -> Self {
        BudgetCounters {
            sample_calls: b.sample_calls,
            apply_calls: b.apply_calls,
            equal_calls: b.equal_calls,
        }
    }
}

#[derive(Serialize, Default, Clone, Copy)]
struct VerificationCounts {
    checked: u64,
    mismatches: u64,
}

/// Entry point for the binary.
pub fn run_from_env() -> i32 {
    let args: Vec<String> = std::env::args().collect();
    run(&args)
}

/// Parses and executes; returns the process exit code.
pub fn run(argv: &[String]) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return 2;
        }
    };
    let seed = match std::env::var("BBA_SEED") {
        Ok(s) => match s.parse::<u64>() {
            Ok(v) => v,
            Err(_) => {
                eprintln!("error: BBA_SEED must be an integer, got `{s}`");
                return 2;
            }
        },
        Err(_) => cli.seed,
    };
    match execute(&cli.command, seed) {
        Ok((report, exit)) => {
            let rendered = serde_json::to_string_pretty(&report).expect("report serializes");
            if cli.verbose > 0 {
                eprintln!(
                    "{}: outcome {}, success {}",
                    report.subcommand, report.outcome, report.success
                );
            }
            match &cli.out {
                Some(path) => {
                    if let Err(e) = std::fs::File::create(path)
                        .and_then(|mut f| writeln!(f, "{rendered}"))
                    {
                        eprintln!("error: cannot write report to {}: {e}", path.display());
                        return 2;
                    }
                    println!("report written to {}", path.display());
                }
                None => println!("{rendered}"),
            }
            exit
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn execute(command: &Command, seed: u64) -> Result<(Report, i32)> {
    match command {
        Command::FieldAttack(args) => field_attack_report(args, seed),
        Command::GroupAttack(args) => group_attack_report(args, seed),
        Command::Verify(args) => verify_report(args, seed),
        Command::MillerRabin(args) => miller_rabin_report(args, seed),
        Command::PrStats(args) => pr_stats_report(args, seed),
        Command::RecognizeField(args) => recognize_report(args, seed),
        Command::Demo(args) => demo_report(args.which, seed),
    }
}

fn attack_details(run: &crate::attack::AttackRun) -> Option<Value> {
    let mut map = serde_json::Map::new();
    if !run.survivors.is_empty() {
        map.insert("survivors".into(), json!(run.survivors));
    }
    if let Some(detail) = &run.failure_detail {
        map.insert("detail".into(), json!(detail));
    }
    if map.is_empty() {
        None
    } else {
        Some(Value::Object(map))
    }
}

fn outcome_string(outcome: Outcome) -> String {
    match outcome {
        Outcome::Success => "success".into(),
        Outcome::InsufficientPlaintext => "insufficient-plaintext".into(),
        Outcome::WrongStructure => "wrong-structure".into(),
    }
}

fn field_attack_report(args: &FieldAttackArgs, seed: u64) -> Result<(Report, i32)> {
    let spec = FieldSpec::parse(&args.spec)?;
    let run = run_field_attack(&spec, seed, args.known, args.method.into())?;
    let exit = if run.outcome == Outcome::Success { 0 } else { 1 };
    let details = attack_details(&run);
    Ok((
        Report {
            subcommand: "field-attack".into(),
            config: json!({
                "structure": format!("f:{}^{}/{}", spec.p, spec.n, spec.modulus_string()),
                "seed": seed,
                "known": args.known,
                "method": format!("{:?}", args.method).to_lowercase(),
            }),
            success: run.report.success,
            outcome: outcome_string(run.outcome),
            delta: run.report.delta.clone(),
            query_budget: run.report.query_budget.into(),
            verification: VerificationCounts {
                checked: run.report.verification.checked,
                mismatches: run.report.verification.mismatches,
            },
            wall_time_s: run.report.query_budget.wall_time_s,
            details,
        },
        exit,
    ))
}

fn group_attack_report(args: &GroupAttackArgs, seed: u64) -> Result<(Report, i32)> {
    let structure = parse_structure(&args.structure)?;
    let run = run_group_attack(&structure, seed, args.known)?;
    let exit = if run.outcome == Outcome::Success { 0 } else { 1 };
    let details = attack_details(&run);
    Ok((
        Report {
            subcommand: "group-attack".into(),
            config: json!({
                "structure": args.structure,
                "seed": seed,
                "known": args.known,
            }),
            success: run.report.success,
            outcome: outcome_string(run.outcome),
            delta: run.report.delta.clone(),
            query_budget: run.report.query_budget.into(),
            verification: VerificationCounts {
                checked: run.report.verification.checked,
                mismatches: run.report.verification.mismatches,
            },
            wall_time_s: run.report.query_budget.wall_time_s,
            details,
        },
        exit,
    ))
}

fn verify_report(args: &VerifyArgs, seed: u64) -> Result<(Report, i32)> {
    let started = Instant::now();
    let hidden = parse_structure(&args.x)?;
    let claimed = parse_structure(&args.a)?;
    let (mut bb, _oracle) = encrypt(&hidden, derive_seed(seed, "verify-encrypt"))?;
    let isomorphic = verify_encrypts(&mut bb, &claimed, args.confidence, seed)?;
    Ok((
        Report {
            subcommand: "verify".into(),
            config: json!({
                "structure": args.x,
                "claimed": args.a,
                "seed": seed,
                "confidence": args.confidence,
            }),
            success: true,
            outcome: if isomorphic { "isomorphic".into() } else { "not-isomorphic".into() },
            delta: None,
            query_budget: QueryBudgetReport::from_counters(bb.counters(), 0.0).into(),
            verification: VerificationCounts::default(),
            wall_time_s: started.elapsed().as_secs_f64(),
            details: Some(json!({ "isomorphic": isomorphic })),
        },
        0,
    ))
}

fn miller_rabin_report(args: &MillerRabinArgs, seed: u64) -> Result<(Report, i32)> {
    let started = Instant::now();
    let (verdict, counters) = miller_rabin_bb(args.n, args.rounds, seed)?;
    Ok((
        Report {
            subcommand: "miller-rabin".into(),
            config: json!({
                "n": args.n,
                "rounds": args.rounds,
                "seed": seed,
            }),
            success: true,
            outcome: match verdict {
                MrVerdict::Composite => "composite".into(),
                MrVerdict::ProbablyPrime => "probably-prime".into(),
            },
            delta: None,
            query_budget: QueryBudgetReport::from_counters(counters, 0.0).into(),
            verification: VerificationCounts::default(),
            wall_time_s: started.elapsed().as_secs_f64(),
            details: None,
        },
        0,
    ))
}

fn pr_stats_report(args: &PrStatsArgs, seed: u64) -> Result<(Report, i32)> {
    let started = Instant::now();
    let structure = parse_structure(&args.structure)?;
    if structure.order() > 10_000 {
        return Err(Error::InvalidArgument(
            "uniformity diagnostics enumerate the group; pick order <= 10000".into(),
        ));
    }
    let (bb, oracle) = encrypt(&structure, derive_seed(seed, "pr-stats"))?;
    let gens: Vec<CryptoElement> = structure
        .generators()
        .iter()
        .map(|&g| oracle.encrypt_element(g))
        .collect::<Result<_>>()?;
    let samples = args.samples.unwrap_or(1000 * structure.order());
    let report = if args.degenerate {
        uniformity_report_frozen(&bb, &gens, samples, seed, structure.order() + 1)?
    } else {
        uniformity_report(&bb, &gens, samples, args.burn_in, seed, structure.order() + 1)?
    };
    let pass = report.p_value > 1e-3;
    Ok((
        Report {
            subcommand: "pr-stats".into(),
            config: json!({
                "structure": args.structure,
                "seed": seed,
                "samples": samples,
                "burn_in": args.burn_in,
                "degenerate": args.degenerate,
            }),
            success: true,
            outcome: if pass { "uniform".into() } else { "non-uniform".into() },
            delta: None,
            query_budget: BudgetCounters::default(),
            verification: VerificationCounts::default(),
            wall_time_s: started.elapsed().as_secs_f64(),
            details: Some(json!({
                "chi_square": report.chi_square,
                "p_value": report.p_value,
                "degrees_of_freedom": report.degrees_of_freedom,
                "closure_size": report.closure_size,
            })),
        },
        0,
    ))
}

fn recognize_report(args: &RecognizeFieldArgs, seed: u64) -> Result<(Report, i32)> {
    let started = Instant::now();
    let spec = FieldSpec::parse(&args.spec)?;
    let field = crate::explicit::make_field(&spec)?;
    let (mut bb, _oracle) = encrypt(&field, derive_seed(seed, "recognize"))?;
    let result = recognize_field(&mut bb, &spec, args.method.into())?;
    Ok((
        Report {
            subcommand: "recognize-field".into(),
            config: json!({
                "structure": format!("f:{}^{}/{}", spec.p, spec.n, spec.modulus_string()),
                "seed": seed,
                "method": format!("{:?}", args.method).to_lowercase(),
            }),
            success: true,
            outcome: "recognized".into(),
            delta: None,
            query_budget: result.cost.into(),
            verification: VerificationCounts { checked: result.order(), mismatches: 0 },
            wall_time_s: started.elapsed().as_secs_f64(),
            details: Some(json!({
                "minimal_polynomial": result.details.minimal_polynomial,
                "retries": result.details.retries,
                "sampler": bb.sampler_provenance(),
            })),
        },
        0,
    ))
}

fn demo_report(which: DemoKind, seed: u64) -> Result<(Report, i32)> {
    let started = Instant::now();
    let (name, details) = match which {
        DemoKind::Amalgamate => ("amalgamate", demo_amalgamate(seed)?),
        DemoKind::Reify => ("reify", demo_reify(seed)?),
        DemoKind::Augment => ("augment", demo_augment(seed)?),
    };
    Ok((
        Report {
            subcommand: format!("demo-{name}"),
            config: json!({ "seed": seed }),
            success: true,
            outcome: "demonstrated".into(),
            delta: None,
            query_budget: BudgetCounters::default(),
            verification: VerificationCounts::default(),
            wall_time_s: started.elapsed().as_secs_f64(),
            details: Some(details),
        },
        0,
    ))
}

/// Builds the standard demo fixture: the 24-element symmetric group with
/// two proto-involutions for conjugation by (1 2)(3 4), one per subgroup.
fn demo_parts(
    seed: u64,
) -> Result<(crate::BlackBox, crate::encrypt::EncryptionOracle, ExplicitStructure, Vec<ProtoInvolution>)>
{
    let s4 = make_symmetric_group(4)?;
    let (bb, oracle) = encrypt(&s4, derive_seed(seed, "demo-s4"))?;
    let t = oracle.encrypt_element(
        s4.index_of_label("(1 2)(3 4)").expect("element exists"),
    )?;
    let mut parts = Vec::new();
    for (i, labels) in [
        ["(1 2)", "(3 4)"],
        ["(1 3)(2 4)", "(1 4)(2 3)"],
    ]
    .iter()
    .enumerate()
    {
        let gens: Vec<CryptoElement> = labels
            .iter()
            .map(|l| {
                oracle.encrypt_element(s4.index_of_label(l).expect("element exists"))
            })
            .collect::<Result<_>>()?;
        match conjugation_graph(&bb, &t, &gens, derive_seed(seed, &format!("demo-part-{i}")))? {
            ConjugationGraph::Involutive(p) => parts.push(p),
            ConjugationGraph::General(_) => {
                return Err(Error::ContractViolation(
                    "conjugation by an involution must be involutive".into(),
                ))
            }
        }
    }
    Ok((bb, oracle, s4, parts))
}

fn demo_amalgamate(seed: u64) -> Result<Value> {
    let (bb, _oracle, _s4, parts) = demo_parts(seed)?;
    let mut amalgam = amalgamate(&bb, &parts, derive_seed(seed, "demo-amalgam"), 2000)?;
    let members = amalgam.graph_mut().enumerate(2000)?;
    Ok(json!({
        "parts": parts.len(),
        "amalgam_members": members.len(),
        "generating_pairs": amalgam.generating_pairs().len(),
    }))
}

fn demo_reify(seed: u64) -> Result<Value> {
    let (bb, oracle, s4, parts) = demo_parts(seed)?;
    let amalgam = amalgamate(&bb, &parts, derive_seed(seed, "demo-amalgam"), 2000)?;
    let t = reify(&bb, &amalgam, 2000, derive_seed(seed, "demo-reify"))?;
    // reading the recovered codeword back is legitimate here: the demo
    // owns both sides, there is no attacker
    let index = oracle.hidden_decrypt(&t)?;
    Ok(json!({
        "reified_element": s4.describe(index),
        "codeword": t.to_hex(),
    }))
}

fn demo_augment(seed: u64) -> Result<Value> {
    let z3 = make_cyclic_group(3)?;
    let (bb, oracle) = encrypt(&z3, derive_seed(seed, "demo-z3"))?;
    let one = oracle.encrypt_element(1)?;
    let two = oracle.encrypt_element(2)?;
    let graph = graph_subgroup(&bb, &bb, &[(one.clone(), two.clone())], derive_seed(seed, "demo-graph"))?;
    let proto = ProtoInvolution::validate(graph, 200, 100)?;
    let mut augmented = augment(&proto, derive_seed(seed, "demo-augment"))?;
    let e = identity_element(&mut augmented)?;
    let (pair_id, zero_tag) = crate::constructions::split_pair(&e, 2 * bb.string_len_bytes());
    let gens = vec![
        crate::constructions::join_pair(&crate::constructions::join_pair(&one, &two), &zero_tag),
        crate::constructions::join_pair(&pair_id, &CryptoElement::from_bytes(vec![1])),
    ];
    let elements = crate::blackbox::enumerate_closure(&mut augmented, &gens, 20)?;
    let mut table = vec![vec![0usize; elements.len()]; elements.len()];
    for (i, p) in elements.iter().enumerate() {
        for (j, q) in elements.iter().enumerate() {
            let r = augmented.compose(p, q)?;
            table[i][j] = elements
                .iter()
                .position(|x| augmented.equal(x, &r).unwrap_or(false))
                .ok_or_else(|| Error::ContractViolation("product left the closure".into()))?;
        }
    }
    let s3 = make_symmetric_group(3)?;
    let iso = crate::attack::isomorphism_by_tables(
        &|i, j| table[i][j],
        elements.len(),
        &|i, j| s3.compose(i as u64, j as u64).expect("s3 composition") as usize,
    );
    Ok(json!({
        "augmented_order": elements.len(),
        "isomorphic_to_s3": iso.is_some(),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_argv(args: &[&str]) -> i32 {
        let argv: Vec<String> =
            std::iter::once("bba".to_string()).chain(args.iter().map(|s| s.to_string())).collect();
        run(&argv)
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run_argv(&["no-such-command"]), 2);
        assert_eq!(run_argv(&["group-attack", "--structure", "bogus:9"]), 2);
    }

    #[test]
    fn miller_rabin_runs() {
        assert_eq!(run_argv(&["miller-rabin", "--n", "97", "--rounds", "10"]), 0);
    }

    #[test]
    fn field_attack_without_pairs_exits_1() {
        assert_eq!(
            run_argv(&["field-attack", "--spec", "3^2", "--seed", "7", "--known", "0"]),
            1
        );
    }
}
