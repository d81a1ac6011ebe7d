//! Seeded comparison of the exact solvers against the exhaustive oracle.

use super::oracle_min_manipulation;
use super::random::{gen_instance, random_perfect_matching};
use super::rng::SplitMix64;
use crate::format::serialize_instance;
use crate::model::ActionKind;
use crate::solvers::{self, Budget, Caps, Goal, ManipulationResult, SolveError, SolveRequest, Status, Target};

type SolverFn = fn(&SolveRequest) -> Result<ManipulationResult, SolveError>;

/// The solvers whose results must equal the oracle's, with their cells.
pub const EXACT_SOLVERS: [(&str, Goal, ActionKind, SolverFn); 10] = [
    ("const_ex_delete", Goal::ConstEx, ActionKind::Delete, solvers::const_ex_delete),
    ("dest_ex_delete", Goal::DestEx, ActionKind::Delete, solvers::dest_ex_delete),
    ("const_ex_reorder_xp", Goal::ConstEx, ActionKind::Reorder, solvers::const_ex_reorder_xp),
    ("exact_ex_accdel", Goal::ExactEx, ActionKind::AccDelete, solvers::exact_ex_accdel),
    ("exact_ex_reorder", Goal::ExactEx, ActionKind::Reorder, solvers::exact_ex_reorder),
    ("exact_ex_swap", Goal::ExactEx, ActionKind::Swap, solvers::exact_ex_swap),
    ("exact_ex_add", Goal::ExactEx, ActionKind::Add, solvers::exact_ex_add),
    ("exact_ex_delete_fpt", Goal::ExactEx, ActionKind::Delete, solvers::exact_ex_delete_fpt),
    ("exact_uni_accdel", Goal::ExactUni, ActionKind::AccDelete, solvers::exact_uni_accdel),
    ("exact_uni_reorder_xp", Goal::ExactUni, ActionKind::Reorder, solvers::exact_uni_reorder_xp),
];

#[derive(Debug, Clone, Default)]
pub struct SweepReport {
    pub instances: usize,
    pub comparisons: usize,
    /// Approximation runs whose bound could be checked against a known optimum.
    pub approx_checked: usize,
    pub failures: Vec<String>,
}

/// Solver and oracle verdicts agree when statuses match and, if feasible, costs match.
pub fn agrees(solver: &ManipulationResult, oracle: &ManipulationResult) -> bool {
    solver.status == oracle.status && (solver.status != Status::Feasible || solver.cost == oracle.cost)
}

/// Runs every exact solver and the 2-approximation on `instances` random
/// instances with `n` in 2..=4 and budgets in 0..=2.
///
/// Per instance the draws are: `n`, an instance seed, then for each solver a
/// budget followed by a pair (two draws) or a perfect matching.
pub fn oracle_sweep(instances: usize, seed: u64, caps: Caps) -> Result<SweepReport, SolveError> {
    let mut rng = SplitMix64::new(seed);
    let mut report = SweepReport { instances, ..SweepReport::default() };
    for _ in 0..instances {
        let n = 2 + rng.below(3) as usize;
        let inst_seed = rng.next_u64();
        let plain = gen_instance(n, inst_seed, 0.0);
        let with_addable = gen_instance(n, inst_seed, 0.4);
        let context = |name: &str, req: &SolveRequest| {
            format!("{name} seed={inst_seed} n={n} budget={} target={:?}\n{}", req.budget, req.target, serialize_instance(&req.instance))
        };

        for (name, goal, action, solver) in EXACT_SOLVERS {
            let budget = Budget::Finite(rng.below(3) as usize);
            let target = match goal {
                Goal::ConstEx | Goal::DestEx => Target::Pair { man: rng.below(n as u64) as usize, woman: rng.below(n as u64) as usize },
                Goal::ExactEx | Goal::ExactUni => Target::Matching(random_perfect_matching(n, &mut rng)),
            };
            let inst = if action == ActionKind::Add { with_addable.clone() } else { plain.clone() };
            let req = SolveRequest::new(inst, goal, action, budget, target);
            let got = solver(&req)?;
            let want = oracle_min_manipulation(&req, caps)?;
            report.comparisons += 1;
            if !agrees(&got, &want) {
                report.failures.push(format!(
                    "{}: solver {:?}/{:?} oracle {:?}/{:?}",
                    context(name, &req),
                    got.status,
                    got.cost,
                    want.status,
                    want.cost
                ));
            }

            if name == "const_ex_reorder_xp" {
                check_approx(&req, &want, caps, &mut report, &context("const_ex_reorder_approx2", &req))?;
            }
        }
    }
    Ok(report)
}

/// The 2-approximation is always feasible, costs what minimum deletion costs
/// (both equal the number of conflicting agents), and is within twice the
/// optimum whenever the oracle found one within the budget.
fn check_approx(
    req: &SolveRequest,
    reorder_opt: &ManipulationResult,
    caps: Caps,
    report: &mut SweepReport,
    context: &str,
) -> Result<(), SolveError> {
    let approx = solvers::const_ex_reorder_approx2(req)?;
    let deletion = SolveRequest { action: ActionKind::Delete, budget: Budget::Unbounded, ..req.clone() };
    let conflicting = oracle_min_manipulation(&deletion, caps)?.cost;
    let mut problems = Vec::new();
    if approx.status != Status::Feasible || approx.witness.is_none() {
        problems.push(format!("not feasible: {:?}", approx.status));
    }
    if approx.cost != conflicting {
        problems.push(format!("cost {:?} but minimum deletion {:?}", approx.cost, conflicting));
    }
    if reorder_opt.status == Status::Feasible {
        report.approx_checked += 1;
        let (a, opt) = (approx.cost.unwrap_or(usize::MAX), reorder_opt.cost.expect("feasible has cost"));
        if a > 2 * opt {
            problems.push(format!("cost {a} exceeds twice the optimum {opt}"));
        }
    }
    if !problems.is_empty() {
        report.failures.push(format!("{context}: {}", problems.join("; ")));
    }
    Ok(())
}
