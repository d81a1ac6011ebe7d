//! Acceptance checks: one PASS/FAIL line per criterion.
//!
//! Criterion 9 is advisory; its failure is reported but does not fail the run.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use smbribe::engine::blocking_pairs;
use smbribe::format::{parse_instance, parse_matching, serialize_instance};
use smbribe::graphkit::{min_cut, CostDigraph, Weight};
use smbribe::solvers::*;
use smbribe::testkit::properties::*;
use smbribe::testkit::random::{gen_instance, random_perfect_matching, random_smi};
use smbribe::testkit::rng::SplitMix64;
use smbribe::testkit::{oracle_sweep, run_bench, SweepReport};
use smbribe::{Action, ActionKind, AgentRef, Instance, PresenceMask};

type Outcome = Result<String, String>;
type Solver = fn(&SolveRequest) -> Result<ManipulationResult, SolveError>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn read(name: &str) -> String {
    std::fs::read_to_string(fixture(name)).unwrap()
}

fn label_of(inst: &Instance, a: AgentRef) -> String {
    inst.label(a).to_string()
}

fn reaches(g: &CostDigraph, removed: &BTreeSet<usize>) -> bool {
    let mut seen = vec![false; g.vertex_count];
    let mut stack = vec![g.source.unwrap()];
    seen[stack[0]] = true;
    while let Some(u) = stack.pop() {
        for (i, a) in g.arcs.iter().enumerate() {
            if a.from == u && !removed.contains(&i) && !seen[a.to] {
                seen[a.to] = true;
                stack.push(a.to);
            }
        }
    }
    seen[g.sink]
}

/// Every inclusion-minimal finite arc set of weight `value` separating source from sink.
fn minimum_cuts(g: &CostDigraph, value: u64) -> Vec<BTreeSet<usize>> {
    let finite: Vec<usize> = (0..g.arcs.len()).filter(|&i| g.arcs[i].weight.finite().is_some()).collect();
    assert!(finite.len() <= 20, "too many arcs to enumerate");
    let mut cuts: Vec<BTreeSet<usize>> = Vec::new();
    for mask in 0u32..1 << finite.len() {
        let set: BTreeSet<usize> = (0..finite.len()).filter(|b| mask >> b & 1 == 1).map(|b| finite[b]).collect();
        let weight: u64 = set.iter().map(|&i| g.arcs[i].weight.finite().unwrap()).sum();
        if weight == value && !reaches(g, &set) {
            let minimal = set.iter().all(|i| {
                let mut smaller = set.clone();
                smaller.remove(i);
                reaches(g, &smaller)
            });
            if minimal {
                cuts.push(set);
            }
        }
    }
    cuts
}

fn criterion_1() -> Outcome {
    let inst = parse_instance(&read("ex5.smi")).map_err(|e| e.to_string())?;
    let target = parse_matching(&read("ex5.smm"), &inst).map_err(|e| e.to_string())?;
    let req = SolveRequest::new(inst.clone(), Goal::ExactEx, ActionKind::Swap, Budget::Finite(3), Target::Matching(target.clone()));

    let start = Instant::now();
    let bp = blocking_pairs(&inst, &PresenceMask::all(&inst), &target);
    let result = exact_ex_swap(&req).map_err(|e| e.to_string())?;
    let graph = swap_cut_graph(&inst, &target);
    let cut = min_cut(&graph.graph).map_err(|e| e.to_string())?;
    let took = start.elapsed();

    let names: BTreeSet<(String, String)> =
        bp.iter().map(|(m, w)| (label_of(&inst, AgentRef::man(m)), label_of(&inst, AgentRef::woman(w)))).collect();
    let expected: BTreeSet<(String, String)> =
        [("m1", "w1"), ("m1", "w2"), ("m3", "w2")].iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
    ensure(names == expected, || format!("blocking pairs {names:?}"))?;

    ensure(result.status == Status::Feasible && result.cost == Some(3), || format!("swap result {:?}/{:?}", result.status, result.cost))?;
    let find = |name: &str| inst.find_label(name).unwrap();
    let plan = vec![
        Action::Swap { agent: find("m1"), position: 1 },
        Action::Swap { agent: find("m1"), position: 0 },
        Action::Swap { agent: find("w2"), position: 1 },
    ];
    verify(&req, &plan).map_err(|e| format!("w3 up twice for m1 and m3 over m2 for w2: {e}"))?;
    verify(&req, &result.actions).map_err(|e| format!("solver actions: {e}"))?;
    let touched: BTreeSet<AgentRef> = result.actions.iter().map(|a| match a {
        Action::Swap { agent, .. } => *agent,
        _ => unreachable!(),
    }).collect();
    ensure(touched == BTreeSet::from([find("m1"), find("w2")]), || format!("swapped agents {touched:?}"))?;

    ensure(cut.value == Weight::Finite(3), || format!("cut value {:?}", cut.value))?;
    let node = |a: &str, b: &str| graph.node(find(a), find(b).index).unwrap();
    let arc = |from: usize, to: usize| graph.graph.arcs.iter().position(|x| x.from == from && x.to == to).unwrap();
    let want = BTreeSet::from([arc(0, node("m1", "w1")), arc(node("w2", "m3"), node("w2", "m1"))]);
    let got: BTreeSet<usize> = cut.arcs.iter().copied().collect();
    ensure(got == want, || format!("cut arcs {got:?}, expected {want:?}"))?;
    let all = minimum_cuts(&graph.graph, 3);
    ensure(all == [want], || format!("{} minimum cuts", all.len()))?;

    ensure(took < Duration::from_millis(10), || format!("took {took:?}"))?;
    Ok(format!("3 blocking pairs, swap cost 3, unique cut of value 3, {:.3} ms", took.as_secs_f64() * 1e3))
}

fn approx_failure(f: &str) -> bool {
    f.starts_with("const_ex_reorder_approx2")
}

fn criterion_2(sweep: &SweepReport, took: Duration) -> Outcome {
    let failures: Vec<&String> = sweep.failures.iter().filter(|f| !approx_failure(f)).collect();
    ensure(sweep.instances >= 500, || format!("{} instances", sweep.instances))?;
    ensure(failures.is_empty(), || format!("{} mismatches, first:\n{}", failures.len(), failures[0]))?;
    ensure(took < Duration::from_secs(300), || format!("took {took:?}"))?;
    Ok(format!("{} instances, {} comparisons, {:.1} s", sweep.instances, sweep.comparisons, took.as_secs_f64()))
}

fn criterion_3(sweep: &SweepReport) -> Outcome {
    let failures: Vec<&String> = sweep.failures.iter().filter(|f| approx_failure(f)).collect();
    ensure(failures.is_empty(), || format!("{} violations, first:\n{}", failures.len(), failures[0]))?;
    ensure(sweep.approx_checked > 0, || "no feasible optimum to compare against".into())?;
    Ok(format!("{} instances, bound checked against {} feasible optima", sweep.instances, sweep.approx_checked))
}

fn report(name: &str, r: &PropertyReport) -> Result<(), String> {
    ensure(r.holds(), || format!("{name}: {} of {} violated, first:\n{}", r.violations.len(), r.trials, r.violations[0]))
}

fn criterion_4() -> Outcome {
    let deletion = deletion_gain_trials(10_000, 4001);
    let reorder = reorder_gain_trials(10_000, 4002);
    let rural = rural_hospitals_trials(1_000, 4003, Caps::from_env()).map_err(|e| e.to_string())?;
    report("deletion", &deletion)?;
    report("reorder", &reorder)?;
    report("rural hospitals", &rural)?;
    Ok(format!("{} deletion, {} reorder, {} rural-hospitals trials", deletion.trials, reorder.trials, rural.trials))
}

fn criterion_5() -> Outcome {
    let r = uniqueness_crosscheck(1_000, 5001, Caps::from_env()).map_err(|e| e.to_string())?;
    report("uniqueness", &r)?;
    Ok(format!("{} stable matchings on 1000 instances with n <= 5", r.trials))
}

fn criterion_6() -> Outcome {
    let caps = Caps::from_env();
    let clique = clique_add_faithfulness(4, 3, caps).map_err(|e| e.to_string())?;
    let is = is_delete_faithfulness(3, caps).map_err(|e| e.to_string())?;
    let hs = hitting_set_faithfulness(3, caps).map_err(|e| e.to_string())?;
    report("clique-add", &clique)?;
    report("is-delete", &is)?;
    report("hitting set", &hs)?;
    Ok(format!("clique-add {}, is-delete {}, hs-reorder/hs-add {} checks", clique.trials, is.trials, hs.trials))
}

fn criterion_7() -> Outcome {
    let r = dummy_block_robustness(3, 2, Caps::from_env()).map_err(|e| e.to_string())?;
    report("dummy block", &r)?;
    Ok(format!("{} swap lists of length <= 2", r.trials))
}

fn criterion_8() -> Outcome {
    let n = 200;
    let mut rng = SplitMix64::new(8001);
    let plain = gen_instance(n, rng.next_u64(), 0.0);
    let addable = gen_instance(n, rng.next_u64(), 0.3);
    let pair = Target::Pair { man: rng.below(n as u64) as usize, woman: rng.below(n as u64) as usize };
    let m = Target::Matching(random_perfect_matching(n, &mut rng));
    let req = |inst: &Instance, goal, action, target: &Target| SolveRequest::new(inst.clone(), goal, action, Budget::Unbounded, target.clone());
    let runs: [(&str, SolveRequest, Solver); 7] = [
        ("const_ex_delete", req(&plain, Goal::ConstEx, ActionKind::Delete, &pair), const_ex_delete),
        ("const_ex_reorder_approx2", req(&plain, Goal::ConstEx, ActionKind::Reorder, &pair), const_ex_reorder_approx2),
        ("exact_ex_accdel", req(&plain, Goal::ExactEx, ActionKind::AccDelete, &m), exact_ex_accdel),
        ("exact_ex_reorder", req(&plain, Goal::ExactEx, ActionKind::Reorder, &m), exact_ex_reorder),
        ("exact_ex_swap", req(&plain, Goal::ExactEx, ActionKind::Swap, &m), exact_ex_swap),
        ("exact_ex_add", req(&addable, Goal::ExactEx, ActionKind::Add, &m), exact_ex_add),
        ("exact_uni_accdel", req(&plain, Goal::ExactUni, ActionKind::AccDelete, &m), exact_uni_accdel),
    ];
    let mut slowest = ("", Duration::ZERO);
    for (name, r, solver) in runs {
        let start = Instant::now();
        solver(&r).map_err(|e| format!("{name}: {e}"))?;
        let took = start.elapsed();
        ensure(took < Duration::from_secs(1), || format!("{name} took {took:?}"))?;
        if took > slowest.1 {
            slowest = (name, took);
        }
    }
    Ok(format!("7 solvers at n = 200, slowest {} in {:.1} ms", slowest.0, slowest.1.as_secs_f64() * 1e3))
}

fn smbribe(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_smbribe")).args(args).output().expect("binary runs")
}

fn criterion_9() -> Outcome {
    let out = smbribe(&["bench", "--goal", "const-ex", "--action", "delete", "--n-list", "100", "--reps", "50", "--seed", "1"]);
    ensure(out.status.success(), || String::from_utf8_lossy(&out.stderr).into_owned())?;
    let text = String::from_utf8(out.stdout).map_err(|e| e.to_string())?;
    let summary = text.split("\n\n").nth(1).ok_or("no summary table")?;
    let row: Vec<&str> = summary.lines().nth(1).ok_or("no summary row")?.split('\t').collect();
    let median: f64 = row[3].parse().map_err(|_| format!("bad median `{}`", row[3]))?;
    ensure(median <= 0.2 * 100.0, || format!("median cost {median} at n = 100"))?;
    Ok(format!("median cost {median} at n = 100 ({:.0}% of n)", median))
}

fn strip_duration(out: &[u8]) -> String {
    String::from_utf8_lossy(out).lines().filter(|l| !l.contains("\"duration_ms\"")).collect::<Vec<_>>().join("\n")
}

fn criterion_10() -> Outcome {
    let mut rng = SplitMix64::new(10_001);
    for i in 0..1000 {
        let inst = if i % 2 == 0 {
            gen_instance(1 + rng.below(8) as usize, rng.next_u64(), 0.3)
        } else {
            let (men, women) = (rng.below(8) as usize, rng.below(8) as usize);
            let density = rng.next_f64();
            random_smi(men, women, density, &mut rng)
        };
        let text = serialize_instance(&inst);
        let back = parse_instance(&text).map_err(|e| format!("instance {i}: {e}"))?;
        ensure(back == inst && serialize_instance(&back) == text, || format!("instance {i} changed:\n{text}"))?;
    }

    for seed in ["0", "7", "42"] {
        let (a, b) = (smbribe(&["gen", "--n", "12", "--seed", seed]), smbribe(&["gen", "--n", "12", "--seed", seed]));
        ensure(a.status.success() && a.stdout == b.stdout, || format!("gen --seed {seed} differs"))?;
    }
    let (smi, smm) = (fixture("ex5.smi"), fixture("ex5.smm"));
    let (smi, smm) = (smi.to_str().unwrap(), smm.to_str().unwrap());
    let solves: [&[&str]; 3] = [
        &["solve", "--goal", "exact-ex", "--action", "swap", "--instance", smi, "--matching", smm],
        &["solve", "--goal", "exact-uni", "--action", "reorder", "--instance", smi, "--matching", smm, "--budget", "3"],
        &["bench", "--goal", "exact-ex", "--action", "reorder", "--n-list", "20", "--reps", "5", "--seed", "9"],
    ];
    for args in solves {
        let (a, b) = (smbribe(args), smbribe(args));
        ensure(strip_duration(&a.stdout) == strip_duration(&b.stdout), || format!("`{}` differs between runs", args.join(" ")))?;
    }
    let bench = || run_bench(Goal::ConstEx, ActionKind::Reorder, &[10], 5, 3, Budget::Finite(2));
    ensure(bench().map_err(|e| e.to_string())? == bench().map_err(|e| e.to_string())?, || "library bench differs".into())?;
    Ok("1000 instances round-trip; gen, solve and bench repeat byte for byte".into())
}

fn run(number: usize, title: &str, advisory: bool, f: impl FnOnce() -> Outcome) -> bool {
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
    });
    let tag = if advisory { " (advisory)" } else { "" };
    match outcome {
        Ok(detail) => {
            println!("PASS {number} {title}{tag}: {detail}");
            true
        }
        Err(why) => {
            println!("FAIL {number} {title}{tag}: {why}");
            advisory
        }
    }
}

fn main() {
    let sweep_start = Instant::now();
    let sweep = oracle_sweep(500, 2_000, Caps::from_env());
    let sweep_took = sweep_start.elapsed();
    let sweep = || sweep.clone().map_err(|e| e.to_string());

    let results = [
        run(1, "small example, swap plan and cut", false, criterion_1),
        run(2, "oracle equivalence sweep", false, || criterion_2(&sweep()?, sweep_took)),
        run(3, "approximation bound", false, || criterion_3(&sweep()?)),
        run(4, "structural invariants", false, criterion_4),
        run(5, "rotation and uniqueness cross-check", false, criterion_5),
        run(6, "gadget faithfulness", false, criterion_6),
        run(7, "dummy block robustness", false, criterion_7),
        run(8, "performance at n = 200", false, criterion_8),
        run(9, "random-instance deletion cost", true, criterion_9),
        run(10, "round trip and determinism", false, criterion_10),
    ];
    if results.iter().any(|ok| !ok) {
        std::process::exit(1);
    }
}
