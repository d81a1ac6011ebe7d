//! Seeded property checks: structural facts about stable matchings and the
//! faithfulness of the reduction gadgets. Each check reports its violations
//! rather than panicking, so callers can print one verdict per property.

use std::collections::BTreeSet;

use super::random::{gen_instance, random_smi};
use super::rng::SplitMix64;
use super::{
    dummy_block, enumerate_stable, gadget_clique_accdel_reorder, gadget_clique_add, gadget_hs_add, gadget_hs_reorder,
    gadget_is_delete, oracle_min_manipulation, SetSystem, SimpleGraph,
};
use crate::engine::{exposed_rotation, gale_shapley, is_stable, is_unique_stable};
use crate::format::serialize_instance;
use crate::model::{apply_actions, Action, ActionKind, AgentRef, Instance, Matching, PresenceMask, Side};
use crate::solvers::{self, Budget, Caps, SolveError, Status};

#[derive(Clone, Debug, Default)]
pub struct PropertyReport {
    pub trials: usize,
    pub violations: Vec<String>,
}

impl PropertyReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.trials += 1;
        if !ok {
            self.violations.push(describe());
        }
    }
}

fn assigned(m: &Matching, side: Side, count: usize) -> Vec<bool> {
    (0..count).map(|a| m.partner(side, a).is_some()).collect()
}

/// Agents of `side` single in `before` but matched in `after`.
fn newly_assigned(before: &Matching, after: &Matching, side: Side, count: usize) -> usize {
    let (b, a) = (assigned(before, side, count), assigned(after, side, count));
    (0..count).filter(|&i| !b[i] && a[i]).count()
}

fn random_state(rng: &mut SplitMix64) -> Instance {
    let men = 1 + rng.below(6) as usize;
    let women = 1 + rng.below(6) as usize;
    let density = 0.3 + 0.6 * rng.next_f64();
    random_smi(men, women, density, rng)
}

/// Deleting one agent from an instance with incomplete lists newly matches at most one agent.
pub fn deletion_gain_trials(trials: usize, seed: u64) -> PropertyReport {
    let mut rng = SplitMix64::new(seed);
    let mut report = PropertyReport::default();
    for _ in 0..trials {
        let inst = random_state(&mut rng);
        let mask = PresenceMask::initial(&inst);
        let side = if rng.below(2) == 0 { Side::Man } else { Side::Woman };
        let victim = AgentRef::new(side, rng.below(inst.count(side) as u64) as usize);
        let before = gale_shapley(&inst, &mask, Side::Man);
        let after = gale_shapley(&inst, &mask.without(victim), Side::Man);
        let gained = newly_assigned(&before, &after, Side::Man, inst.men_count())
            + newly_assigned(&before, &after, Side::Woman, inst.women_count());
        report.check(gained <= 1, || format!("deleting {victim:?} matched {gained} agents\n{}", serialize_instance(&inst)));
    }
    report
}

/// Reordering one agent's list, possibly extending it by new mutually
/// acceptable partners, newly matches at most one man and at most one woman.
pub fn reorder_gain_trials(trials: usize, seed: u64) -> PropertyReport {
    let mut rng = SplitMix64::new(seed);
    let mut report = PropertyReport::default();
    for _ in 0..trials {
        let inst = random_state(&mut rng);
        let side = if rng.below(2) == 0 { Side::Man } else { Side::Woman };
        let a = rng.below(inst.count(side) as u64) as usize;
        let changed = reorder_and_extend(&inst, side, a, &mut rng);
        let mask = PresenceMask::initial(&inst);
        let before = gale_shapley(&inst, &mask, Side::Man);
        let after = gale_shapley(&changed, &mask, Side::Man);
        let men = newly_assigned(&before, &after, Side::Man, inst.men_count());
        let women = newly_assigned(&before, &after, Side::Woman, inst.women_count());
        report.check(men <= 1 && women <= 1, || {
            format!("changing {side} {a} matched {men} men and {women} women\n{}", serialize_instance(&inst))
        });
    }
    report
}

/// `a`'s list shuffled after each unlisted agent joins it with probability
/// one half; every joiner inserts `a` at a random position of its own list.
fn reorder_and_extend(inst: &Instance, side: Side, a: usize, rng: &mut SplitMix64) -> Instance {
    let other = side.other();
    let mut lists: [Vec<Vec<usize>>; 2] =
        [Side::Man, Side::Woman].map(|s| (0..inst.count(s)).map(|i| inst.prefs(s, i).to_vec()).collect());
    let (own, theirs) = if side == Side::Man { (0, 1) } else { (1, 0) };
    for b in 0..inst.count(other) {
        if !lists[own][a].contains(&b) && rng.below(2) == 0 {
            lists[own][a].push(b);
            let at = rng.below(lists[theirs][b].len() as u64 + 1) as usize;
            lists[theirs][b].insert(at, a);
        }
    }
    rng.shuffle(&mut lists[own][a]);
    let [men, women] = lists;
    Instance::new(men, women).expect("extension keeps acceptability mutual")
}

/// Every stable matching of an instance matches the same agents.
pub fn rural_hospitals_trials(instances: usize, seed: u64, caps: Caps) -> Result<PropertyReport, SolveError> {
    let mut rng = SplitMix64::new(seed);
    let mut report = PropertyReport::default();
    for _ in 0..instances {
        let inst = random_state(&mut rng);
        let all = enumerate_stable(&inst, &PresenceMask::initial(&inst), caps)?;
        let matched = |m: &Matching| -> (Vec<bool>, Vec<bool>) {
            (assigned(m, Side::Man, inst.men_count()), assigned(m, Side::Woman, inst.women_count()))
        };
        let sets: BTreeSet<_> = all.iter().map(matched).collect();
        report.check(!all.is_empty() && sets.len() == 1, || {
            format!("{} stable matchings with {} matched sets\n{}", all.len(), sets.len(), serialize_instance(&inst))
        });
    }
    Ok(report)
}

/// Random instances with at most five agents per side: complete ones for
/// even trials, incomplete ones for odd trials.
fn small_instance(trial: usize, rng: &mut SplitMix64) -> Instance {
    let n = 1 + rng.below(5) as usize;
    if trial % 2 == 0 {
        gen_instance(n, rng.next_u64(), 0.0)
    } else {
        let density = 0.4 + 0.6 * rng.next_f64();
        random_smi(n, 1 + rng.below(5) as usize, density, rng)
    }
}

/// For each stable matching `M` found by enumeration: `M` is unique
/// exactly when no rotation is exposed on either side, exactly when
/// enumeration found one matching. Unstable matchings are never unique.
pub fn uniqueness_crosscheck(instances: usize, seed: u64, caps: Caps) -> Result<PropertyReport, SolveError> {
    let mut rng = SplitMix64::new(seed);
    let mut report = PropertyReport::default();
    for trial in 0..instances {
        let inst = small_instance(trial, &mut rng);
        let mask = PresenceMask::initial(&inst);
        let all = enumerate_stable(&inst, &mask, caps)?;
        let only_one = all.len() == 1;
        for m in &all {
            let unique = is_unique_stable(&inst, &mask, m);
            let no_rotation = [Side::Man, Side::Woman]
                .into_iter()
                .all(|s| exposed_rotation(&inst, &mask, m, s).expect("stable matching").is_none());
            report.check(unique == no_rotation && unique == only_one, || {
                format!(
                    "unique={unique} no_rotation={no_rotation} stable_count={}\n{}",
                    all.len(),
                    serialize_instance(&inst)
                )
            });
        }
        let empty = Matching::for_instance(&inst);
        if !is_stable(&inst, &mask, &empty) {
            report.check(!is_unique_stable(&inst, &mask, &empty), || "an unstable matching counted as unique".into());
        }
    }
    Ok(report)
}

/// Every swap list of length at most `max_swaps` applied to a block of `r`
/// cyclic couples leaves every stable matching containing all couples.
pub fn dummy_block_robustness(r: usize, max_swaps: usize, caps: Caps) -> Result<PropertyReport, SolveError> {
    let block = dummy_block(r);
    let mask = PresenceMask::initial(&block);
    let moves: Vec<Action> = [Side::Man, Side::Woman]
        .into_iter()
        .flat_map(|s| (0..r).flat_map(move |i| (0..r - 1).map(move |position| Action::Swap { agent: AgentRef::new(s, i), position })))
        .collect();
    let mut report = PropertyReport::default();
    let mut seq = Vec::new();
    swap_lists(&block, &mask, &moves, max_swaps, &mut seq, caps, &mut report)?;
    Ok(report)
}

fn swap_lists(
    block: &Instance,
    mask: &PresenceMask,
    moves: &[Action],
    left: usize,
    seq: &mut Vec<Action>,
    caps: Caps,
    report: &mut PropertyReport,
) -> Result<(), SolveError> {
    let (inst, _) = apply_actions(block, mask, seq).expect("valid swaps");
    let all = enumerate_stable(&inst, mask, caps)?;
    let keeps = all.iter().all(|m| (0..block.men_count()).all(|i| m.contains(i, i)));
    report.check(keeps, || format!("swaps {seq:?} admit a stable matching breaking a couple"));
    if left == 0 {
        return Ok(());
    }
    for mv in moves {
        seq.push(mv.clone());
        swap_lists(block, mask, moves, left - 1, seq, caps, report)?;
        seq.pop();
    }
    Ok(())
}

/// A swap list of exactly `swaps` swaps after which some stable matching
/// of the block breaks a couple, if one exists.
pub fn dummy_block_breaker(r: usize, swaps: usize, caps: Caps) -> Result<Option<Vec<Action>>, SolveError> {
    let block = dummy_block(r);
    let mask = PresenceMask::initial(&block);
    let moves: Vec<Action> = [Side::Man, Side::Woman]
        .into_iter()
        .flat_map(|s| (0..r).flat_map(move |i| (0..r - 1).map(move |position| Action::Swap { agent: AgentRef::new(s, i), position })))
        .collect();
    let mut found = None;
    let mut err = None;
    crate::combinatorics::for_each_tuple(&vec![moves.len(); swaps], &mut |choice| {
        let seq: Vec<Action> = choice.iter().map(|&c| moves[c].clone()).collect();
        let (inst, _) = apply_actions(&block, &mask, &seq).expect("valid swaps");
        match enumerate_stable(&inst, &mask, caps) {
            Ok(all) if all.iter().any(|m| (0..r).any(|i| !m.contains(i, i))) => {
                found = Some(seq);
                false
            }
            Ok(_) => true,
            Err(e) => {
                err = Some(e);
                false
            }
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(found),
    }
}

/// Every simple graph on `n` labelled vertices.
pub fn all_graphs(n: usize) -> Vec<SimpleGraph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    (0u32..1 << pairs.len())
        .map(|set| {
            let edges = (0..pairs.len()).filter(|i| set >> i & 1 == 1).map(|i| pairs[i]);
            SimpleGraph::new(n, edges).expect("distinct pairs")
        })
        .collect()
}

/// Every family of one or two nonempty subsets of a universe of `z` elements.
pub fn all_set_systems(z: usize) -> Vec<SetSystem> {
    let subsets: Vec<Vec<usize>> =
        (1u32..1 << z).map(|s| (0..z).filter(|e| s >> e & 1 == 1).collect()).collect();
    let mut out: Vec<SetSystem> = subsets.iter().map(|s| SetSystem::new(z, vec![s.clone()]).expect("nonempty")).collect();
    for a in &subsets {
        for b in &subsets {
            out.push(SetSystem::new(z, vec![a.clone(), b.clone()]).expect("nonempty"));
        }
    }
    out
}

fn feasible(status: Status) -> bool {
    status == Status::Feasible
}

/// Clique to Constructive-Exists-Add: feasible within the gadget budget
/// exactly when a `k`-clique exists; without a clique, no number of
/// additions helps.
pub fn clique_add_faithfulness(max_vertices: usize, max_k: usize, caps: Caps) -> Result<PropertyReport, SolveError> {
    let mut report = PropertyReport::default();
    for n in 1..=max_vertices {
        for g in all_graphs(n) {
            for k in 2..=max_k {
                let out = gadget_clique_add(&g, k).expect("k at least 2");
                let has_clique = g.find_clique(k).is_some();
                let got = solvers::const_ex_bruteforce(&out.request(ActionKind::Add), caps)?;
                report.check(feasible(got.status) == has_clique, || format!("{}: {:?}", out.note, got.status));
                if !has_clique {
                    let mut unbounded = out.request(ActionKind::Add);
                    unbounded.budget = Budget::Unbounded;
                    let got = solvers::const_ex_bruteforce(&unbounded, caps)?;
                    report.check(got.status == Status::InfeasibleAlways, || format!("{} unbounded: {:?}", out.note, got.status));
                }
            }
        }
    }
    Ok(report)
}

/// Clique to Constructive-Exists-AccDelete/Reorder at `k = 2`: a clique's
/// forward actions fit the budget and work. Without a clique the minimum
/// is exactly `2q`, the cost of detaching every penalizing agent from the
/// target pair; for `k <= 3` that is within the budget `q + k`, so only
/// larger `k` separate the two cases, beyond exhaustive reach.
pub fn clique_accdel_faithfulness(max_vertices: usize, caps: Caps) -> Result<PropertyReport, SolveError> {
    let mut report = PropertyReport::default();
    let k = 2;
    let bypass = k * (k - 1);
    for n in 1..=max_vertices {
        for g in all_graphs(n) {
            let out = gadget_clique_accdel_reorder(&g, k).expect("k at least 2");
            match g.find_clique(k) {
                Some(clique) => {
                    for action in [ActionKind::AccDelete, ActionKind::Reorder] {
                        let req = out.request(action);
                        let acts = super::clique_forward_actions(&out.instance, &g, &clique, action);
                        let ok = req.budget.allows(acts.len()) && solvers::verify(&req, &acts).is_ok();
                        report.check(ok, || format!("{} {action:?}: forward actions fail", out.note));
                    }
                }
                None => {
                    let accdel = solvers::const_ex_bruteforce(&out.request(ActionKind::AccDelete), caps)?;
                    let reorder = solvers::const_ex_reorder_xp(&out.request(ActionKind::Reorder))?;
                    report.check(accdel.cost == Some(bypass) && reorder.cost == Some(bypass), || {
                        format!("{}: accdel {:?}, reorder {:?}", out.note, accdel.cost, reorder.cost)
                    });
                }
            }
        }
    }
    Ok(report)
}

/// Independent Set to Exact-Exists-Delete (and Exact-Unique-Delete on the
/// smallest graphs): feasible exactly when an independent set of size `k` exists.
pub fn is_delete_faithfulness(max_vertices: usize, caps: Caps) -> Result<PropertyReport, SolveError> {
    let mut report = PropertyReport::default();
    for n in 1..=max_vertices {
        for g in all_graphs(n) {
            for k in 0..=n {
                let out = gadget_is_delete(&g, k).expect("any k");
                let has_set = g.find_independent_set(k).is_some();
                let req = out.request(ActionKind::Delete);
                let got = solvers::exact_ex_delete_fpt(&req)?;
                report.check(feasible(got.status) == has_set, || format!("{}: fpt {:?}", out.note, got.status));
                if n <= 2 {
                    let oracle = oracle_min_manipulation(&req, caps)?;
                    report.check(feasible(oracle.status) == has_set, || format!("{}: oracle {:?}", out.note, oracle.status));
                    let mut unique = req.clone();
                    unique.goal = solvers::Goal::ExactUni;
                    let got = solvers::exact_uni_bruteforce(&unique, caps)?;
                    report.check(feasible(got.status) == has_set, || format!("{}: unique {:?}", out.note, got.status));
                }
            }
        }
    }
    Ok(report)
}

/// Hitting Set to Exact-Unique-Reorder and Exact-Unique-Add: feasible
/// exactly when a hitting set of size `k` exists; the reorder target is
/// stable before any manipulation.
pub fn hitting_set_faithfulness(max_universe: usize, caps: Caps) -> Result<PropertyReport, SolveError> {
    let mut report = PropertyReport::default();
    for z in 1..=max_universe {
        for s in all_set_systems(z) {
            for k in 0..=z {
                let has_set = s.find_hitting_set(k).is_some();

                let out = gadget_hs_reorder(&s, k);
                let target = out.request(ActionKind::Reorder).matching().cloned().expect("matching target");
                let stable = is_stable(&out.instance, &PresenceMask::initial(&out.instance), &target);
                report.check(stable, || format!("{}: target not stable", out.note));
                let got = solvers::exact_uni_reorder_xp(&out.request(ActionKind::Reorder))?;
                report.check(feasible(got.status) == has_set, || format!("{}: reorder {:?}", out.note, got.status));

                let out = gadget_hs_add(&s, k);
                let req = out.request(ActionKind::Add);
                let got = solvers::exact_uni_bruteforce(&req, caps)?;
                report.check(feasible(got.status) == has_set, || format!("{}: add {:?}", out.note, got.status));
                let oracle = oracle_min_manipulation(&req, caps)?;
                report.check(feasible(oracle.status) == has_set, || format!("{}: add oracle {:?}", out.note, oracle.status));
            }
        }
    }
    Ok(report)
}
