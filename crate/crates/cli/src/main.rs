//! `smbribe`: solve, check, generate and benchmark Stable Marriage manipulation problems.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use smbribe::engine::{blocking_pairs, is_stable, is_unique_stable};
use smbribe::format::{parse_instance, parse_matching, serialize_actions, serialize_instance, serialize_matching};
use smbribe::solvers::{solve, Algo, Caps};
use smbribe::testkit::random::gen_instance;
use smbribe::testkit::{self, enumerate_stable, oracle_min_manipulation, GadgetOutput, SetSystem, SimpleGraph};
use smbribe::{
    ActionKind, AgentRef, Budget, Goal, Instance, ManipulationResult, Matching, PresenceMask, Quality, Side, SolveRequest,
    Status, Target,
};

const EXIT_OK: u8 = 0;
const EXIT_FAILS: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_OVER_BUDGET: u8 = 3;
const EXIT_NEVER: u8 = 4;

#[derive(Parser)]
#[command(name = "smbribe", version, about = "Bribery and control for Stable Marriage")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Find a minimum-cost manipulation.
    Solve(SolveArgs),
    /// Report blocking pairs, stability and optionally uniqueness of a matching.
    Check(CheckArgs),
    /// Print a uniform random complete instance.
    Gen(GenArgs),
    /// Print a reduction instance.
    Gadget(GadgetArgs),
    /// Solve by exhaustive enumeration.
    Oracle(SolveArgs),
    /// List every stable matching.
    Enum(EnumArgs),
    /// Solve random instances and summarise their costs.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum GoalArg {
    ConstEx,
    DestEx,
    ExactEx,
    ExactUni,
}

#[derive(Clone, Copy, ValueEnum)]
enum ActionArg {
    Swap,
    Reorder,
    Accdel,
    Delete,
    Add,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgoArg {
    Auto,
    Approx2,
    Xp,
    Bruteforce,
    Fpt,
}

impl From<GoalArg> for Goal {
    fn from(g: GoalArg) -> Goal {
        match g {
            GoalArg::ConstEx => Goal::ConstEx,
            GoalArg::DestEx => Goal::DestEx,
            GoalArg::ExactEx => Goal::ExactEx,
            GoalArg::ExactUni => Goal::ExactUni,
        }
    }
}

impl From<ActionArg> for ActionKind {
    fn from(a: ActionArg) -> ActionKind {
        match a {
            ActionArg::Swap => ActionKind::Swap,
            ActionArg::Reorder => ActionKind::Reorder,
            ActionArg::Accdel => ActionKind::AccDelete,
            ActionArg::Delete => ActionKind::Delete,
            ActionArg::Add => ActionKind::Add,
        }
    }
}

impl From<AlgoArg> for Algo {
    fn from(a: AlgoArg) -> Algo {
        match a {
            AlgoArg::Auto => Algo::Auto,
            AlgoArg::Approx2 => Algo::Approx2,
            AlgoArg::Xp => Algo::Xp,
            AlgoArg::Bruteforce => Algo::Bruteforce,
            AlgoArg::Fpt => Algo::Fpt,
        }
    }
}

fn parse_budget(s: &str) -> Result<Budget, String> {
    match s {
        "inf" => Ok(Budget::Unbounded),
        _ => s.parse().map(Budget::Finite).map_err(|_| format!("`{s}` is neither a count nor `inf`")),
    }
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long, value_enum)]
    goal: GoalArg,
    #[arg(long, value_enum)]
    action: ActionArg,
    #[arg(long)]
    instance: PathBuf,
    /// Target pair as `MAN,WOMAN` labels.
    #[arg(long, conflicts_with = "matching")]
    pair: Option<String>,
    /// Target matching file.
    #[arg(long)]
    matching: Option<PathBuf>,
    #[arg(long, default_value = "inf", value_parser = parse_budget)]
    budget: Budget,
    #[arg(long, value_enum, default_value = "auto")]
    algo: AlgoArg,
    /// Also write the actions as `.sma` lines to this file.
    #[arg(long)]
    actions_out: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    matching: PathBuf,
    /// Also require the matching to be the only stable one.
    #[arg(long)]
    unique: bool,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 0.0)]
    addable_frac: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum GadgetKind {
    CliqueAdd,
    CliqueAccdel,
    IsDelete,
    HsReorder,
    HsAdd,
    DummyBlock,
}

#[derive(Args)]
struct GadgetArgs {
    #[arg(value_enum)]
    kind: GadgetKind,
    /// Number of graph vertices, numbered from 1.
    #[arg(long)]
    vertices: Option<usize>,
    /// Graph edges as `1-2,2-3`.
    #[arg(long, default_value = "")]
    edges: String,
    /// Universe size; elements are numbered from 1.
    #[arg(long)]
    universe: Option<usize>,
    /// Sets as `1,2,3;1,2`.
    #[arg(long, default_value = "")]
    sets: String,
    /// Clique, independent set or hitting set size.
    #[arg(long)]
    k: Option<usize>,
    /// Block size for `dummy-block`.
    #[arg(long)]
    r: Option<usize>,
    /// Write the target matching here when the gadget has one.
    #[arg(long)]
    matching_out: Option<PathBuf>,
}

#[derive(Args)]
struct EnumArgs {
    #[arg(long)]
    instance: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_enum)]
    goal: GoalArg,
    #[arg(long, value_enum)]
    action: ActionArg,
    #[arg(long, value_delimiter = ',', default_value = "30,50,100,200")]
    n_list: Vec<usize>,
    #[arg(long, default_value_t = 50)]
    reps: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value = "inf", value_parser = parse_budget)]
    budget: Budget,
}

/// A failure with its exit code.
struct Fail(u8, String);

impl<E: std::fmt::Display> From<E> for Fail {
    fn from(e: E) -> Self {
        Fail(EXIT_USAGE, e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let echo = command_echo();
    let started = Instant::now();
    let outcome = match cli.command {
        Command::Solve(a) => cmd_solve(&a, false, &echo, started),
        Command::Oracle(a) => cmd_solve(&a, true, &echo, started),
        Command::Check(a) => cmd_check(&a, &echo, started),
        Command::Gen(a) => cmd_gen(&a, &echo, started),
        Command::Gadget(a) => cmd_gadget(&a, &echo, started),
        Command::Enum(a) => cmd_enum(&a, &echo, started),
        Command::Bench(a) => cmd_bench(&a, &echo, started),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(Fail(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

fn command_echo() -> String {
    let args: Vec<String> = std::env::args().skip(1).collect();
    std::iter::once("smbribe".to_string()).chain(args).collect::<Vec<_>>().join(" ")
}

fn read(path: &Path) -> Result<String, Fail> {
    fs::read_to_string(path).map_err(|e| Fail(EXIT_USAGE, format!("{}: {e}", path.display())))
}

fn load_instance(path: &Path) -> Result<Instance, Fail> {
    parse_instance(&read(path)?).map_err(|e| Fail(EXIT_USAGE, format!("{}: {e}", path.display())))
}

fn load_matching(path: &Path, inst: &Instance) -> Result<Matching, Fail> {
    parse_matching(&read(path)?, inst).map_err(|e| Fail(EXIT_USAGE, format!("{}: {e}", path.display())))
}

fn digest(inst: &Instance) -> String {
    Sha256::digest(serialize_instance(inst).as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

/// Writes to stdout; a closed pipe ends output quietly.
fn emit(text: &str) {
    use std::io::Write;
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn print_json(doc: &Value) {
    emit(&(serde_json::to_string_pretty(doc).expect("json values serialize") + "\n"));
}

fn manifest(echo: &str, seed: Option<u64>, inst: Option<&Instance>, started: Instant) -> Value {
    json!({
        "command": echo,
        "seed": seed,
        "instance_sha256": inst.map(digest),
        "duration_ms": started.elapsed().as_micros() as f64 / 1e3,
    })
}

/// Manifest for commands whose stdout is not JSON, as one stderr line.
fn side_manifest(manifest: Value) {
    eprintln!("{}", serde_json::to_string(&json!({ "manifest": manifest })).expect("json values serialize"));
}

/// `"man woman"`, as in `.smm` pair lines.
fn pair_name(inst: &Instance, man: usize, woman: usize) -> Value {
    json!(format!("{} {}", inst.label(AgentRef::man(man)), inst.label(AgentRef::woman(woman))))
}

fn pair_names(inst: &Instance, m: &Matching) -> Value {
    m.pairs().map(|(a, b)| pair_name(inst, a, b)).collect()
}

fn status_name(s: Status) -> &'static str {
    match s {
        Status::Feasible => "feasible",
        Status::InfeasibleWithinBudget => "infeasible-within-budget",
        Status::InfeasibleAlways => "infeasible-always",
    }
}

fn quality_name(q: Quality) -> &'static str {
    match q {
        Quality::Exact => "exact",
        Quality::Approx2 => "approx2",
        Quality::ExactWithinParameter => "exact-within-parameter",
    }
}

fn exit_for(s: Status) -> u8 {
    match s {
        Status::Feasible => EXIT_OK,
        Status::InfeasibleWithinBudget => EXIT_OVER_BUDGET,
        Status::InfeasibleAlways => EXIT_NEVER,
    }
}

fn build_request(a: &SolveArgs) -> Result<SolveRequest, Fail> {
    let inst = load_instance(&a.instance)?;
    let goal = Goal::from(a.goal);
    let target = match (goal, &a.pair, &a.matching) {
        (Goal::ConstEx | Goal::DestEx, Some(pair), None) => {
            let (m, w) = pair.split_once(',').ok_or_else(|| Fail(EXIT_USAGE, format!("--pair `{pair}` is not MAN,WOMAN")))?;
            let find = |name: &str, side: Side| match inst.find_label(name.trim()) {
                Some(r) if r.side == side => Ok(r.index),
                _ => Err(Fail(EXIT_USAGE, format!("--pair: no {side:?} named `{}`", name.trim()))),
            };
            Target::Pair { man: find(m, Side::Man)?, woman: find(w, Side::Woman)? }
        }
        (Goal::ExactEx | Goal::ExactUni, None, Some(path)) => Target::Matching(load_matching(path, &inst)?),
        (Goal::ConstEx | Goal::DestEx, _, _) => return Err(Fail(EXIT_USAGE, "this goal needs --pair".into())),
        _ => return Err(Fail(EXIT_USAGE, "this goal needs --matching".into())),
    };
    Ok(SolveRequest::new(inst, goal, a.action.into(), a.budget, target))
}

fn result_doc(req: &SolveRequest, r: &ManipulationResult, manifest: Value) -> Value {
    let inst = &req.instance;
    let actions: Vec<String> = serialize_actions(&r.actions, inst).lines().map(String::from).collect();
    json!({
        "format": "result 1",
        "status": status_name(r.status),
        "cost": r.cost,
        "quality": quality_name(r.quality),
        "actions": actions,
        "witness": r.witness.as_ref().map(|w| pair_names(inst, &w.matching)),
        "manifest": manifest,
    })
}

fn cmd_solve(a: &SolveArgs, oracle: bool, echo: &str, started: Instant) -> Result<u8, Fail> {
    let req = build_request(a)?;
    let caps = Caps::from_env();
    let result = if oracle { oracle_min_manipulation(&req, caps)? } else { solve(&req, a.algo.into(), caps)? };
    if let Some(path) = &a.actions_out {
        fs::write(path, serialize_actions(&result.actions, &req.instance))?;
    }
    print_json(&result_doc(&req, &result, manifest(echo, None, Some(&req.instance), started)));
    Ok(exit_for(result.status))
}

fn cmd_check(a: &CheckArgs, echo: &str, started: Instant) -> Result<u8, Fail> {
    let inst = load_instance(&a.instance)?;
    let m = load_matching(&a.matching, &inst)?;
    let mask = PresenceMask::all(&inst);
    let bp = blocking_pairs(&inst, &mask, &m);
    let stable = is_stable(&inst, &mask, &m);
    let unique = a.unique.then(|| is_unique_stable(&inst, &mask, &m));
    let names: Value = bp.iter().map(|(x, y)| pair_name(&inst, x, y)).collect();
    print_json(&json!({
        "format": "check 1",
        "blocking_pairs": names,
        "stable": stable,
        "unique": unique,
        "manifest": manifest(echo, None, Some(&inst), started),
    }));
    Ok(if stable && unique != Some(false) { EXIT_OK } else { EXIT_FAILS })
}

fn cmd_gen(a: &GenArgs, echo: &str, started: Instant) -> Result<u8, Fail> {
    if !(0.0..=1.0).contains(&a.addable_frac) {
        return Err(Fail(EXIT_USAGE, "--addable-frac must lie in [0, 1]".into()));
    }
    let inst = gen_instance(a.n, a.seed, a.addable_frac);
    emit(&serialize_instance(&inst));
    side_manifest(manifest(echo, Some(a.seed), Some(&inst), started));
    Ok(EXIT_OK)
}

fn parse_numbers(text: &str, what: &str) -> Result<Vec<usize>, Fail> {
    text.split(',')
        .map(|t| match t.trim().parse::<usize>() {
            Ok(v) if v >= 1 => Ok(v - 1),
            _ => Err(Fail(EXIT_USAGE, format!("{what}: `{t}` is not a number from 1"))),
        })
        .collect()
}

fn graph_arg(a: &GadgetArgs) -> Result<SimpleGraph, Fail> {
    let n = a.vertices.ok_or_else(|| Fail(EXIT_USAGE, "this gadget needs --vertices".into()))?;
    let mut edges = Vec::new();
    for e in a.edges.split(',').filter(|e| !e.trim().is_empty()) {
        let ends = e.split_once('-').ok_or_else(|| Fail(EXIT_USAGE, format!("--edges: `{e}` is not U-V")))?;
        let uv = parse_numbers(&format!("{},{}", ends.0, ends.1), "--edges")?;
        if uv.iter().any(|&v| v >= n) {
            return Err(Fail(EXIT_USAGE, format!("--edges: `{e}` leaves vertices 1..={n}")));
        }
        edges.push((uv[0], uv[1]));
    }
    Ok(SimpleGraph::new(n, edges)?)
}

fn sets_arg(a: &GadgetArgs) -> Result<SetSystem, Fail> {
    let z = a.universe.ok_or_else(|| Fail(EXIT_USAGE, "this gadget needs --universe".into()))?;
    let sets: Vec<Vec<usize>> =
        a.sets.split(';').filter(|s| !s.trim().is_empty()).map(|s| parse_numbers(s, "--sets")).collect::<Result<_, _>>()?;
    if sets.iter().flatten().any(|&e| e >= z) {
        return Err(Fail(EXIT_USAGE, format!("--sets: elements must lie in 1..={z}")));
    }
    Ok(SetSystem::new(z, sets)?)
}

fn needed(v: Option<usize>, flag: &str) -> Result<usize, Fail> {
    v.ok_or_else(|| Fail(EXIT_USAGE, format!("this gadget needs {flag}")))
}

fn goal_name(g: Goal) -> &'static str {
    match g {
        Goal::ConstEx => "const-ex",
        Goal::DestEx => "dest-ex",
        Goal::ExactEx => "exact-ex",
        Goal::ExactUni => "exact-uni",
    }
}

fn cmd_gadget(a: &GadgetArgs, echo: &str, started: Instant) -> Result<u8, Fail> {
    let out: GadgetOutput = match a.kind {
        GadgetKind::CliqueAdd => testkit::gadget_clique_add(&graph_arg(a)?, needed(a.k, "--k")?)?,
        GadgetKind::CliqueAccdel => testkit::gadget_clique_accdel_reorder(&graph_arg(a)?, needed(a.k, "--k")?)?,
        GadgetKind::IsDelete => testkit::gadget_is_delete(&graph_arg(a)?, needed(a.k, "--k")?)?,
        GadgetKind::HsReorder => testkit::gadget_hs_reorder(&sets_arg(a)?, needed(a.k, "--k")?),
        GadgetKind::HsAdd => testkit::gadget_hs_add(&sets_arg(a)?, needed(a.k, "--k")?),
        GadgetKind::DummyBlock => {
            let r = needed(a.r, "--r")?;
            if r == 0 {
                return Err(Fail(EXIT_USAGE, "--r must be at least 1".into()));
            }
            let block = testkit::dummy_block(r);
            emit(&format!("# dummy block, r={r}\n{}", serialize_instance(&block)));
            side_manifest(manifest(echo, None, Some(&block), started));
            return Ok(EXIT_OK);
        }
    };
    let inst = &out.instance;
    let target = match &out.target {
        Target::Pair { man, woman } => format!("pair {},{}", inst.label(AgentRef::man(*man)), inst.label(AgentRef::woman(*woman))),
        Target::Matching(_) => "matching".to_string(),
    };
    emit(&format!("# {}\n# goal {}, target {target}, budget {}\n", out.note, goal_name(out.goal), out.budget));
    emit(&serialize_instance(inst));
    if let (Some(path), Target::Matching(m)) = (&a.matching_out, &out.target) {
        fs::write(path, serialize_matching(m, inst))?;
    }
    side_manifest(manifest(echo, None, Some(inst), started));
    Ok(EXIT_OK)
}

fn cmd_enum(a: &EnumArgs, echo: &str, started: Instant) -> Result<u8, Fail> {
    let inst = load_instance(&a.instance)?;
    let all = enumerate_stable(&inst, &PresenceMask::all(&inst), Caps::from_env())?;
    let matchings: Vec<Value> = all.iter().map(|m| pair_names(&inst, m)).collect();
    print_json(&json!({
        "format": "enum 1",
        "count": all.len(),
        "matchings": matchings,
        "manifest": manifest(echo, None, Some(&inst), started),
    }));
    Ok(EXIT_OK)
}

fn cmd_bench(a: &BenchArgs, echo: &str, started: Instant) -> Result<u8, Fail> {
    let report = testkit::run_bench(a.goal.into(), a.action.into(), &a.n_list, a.reps, a.seed, a.budget)?;
    let mut out = String::from("n\trep\tseed\tstatus\tcost\n");
    for row in &report.rows {
        let cost = row.cost.map_or("-".to_string(), |c| c.to_string());
        out += &format!("{}\t{}\t{}\t{}\t{}\n", row.n, row.rep, row.seed, status_name(row.status), cost);
    }
    out += "\nn\tsolved\tmean_cost\tmedian_cost\tmedian_fraction\n";
    for s in &report.summaries {
        out += &format!("{}\t{}\t{:.3}\t{:.1}\t{:.4}\n", s.n, s.solved, s.mean_cost, s.median_cost, s.median_fraction);
    }
    emit(&out);
    side_manifest(manifest(echo, Some(a.seed), None, started));
    Ok(EXIT_OK)
}
