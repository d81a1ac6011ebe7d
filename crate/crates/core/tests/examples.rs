//! Small worked instances from the literature, checked end to end.

use std::collections::BTreeSet;

use smbribe::engine::{self, blocking_pairs, exposed_rotation, gale_shapley, is_stable, is_unique_stable, stable_pair};
use smbribe::format::{parse_instance, parse_matching, serialize_instance};
use smbribe::graphkit::{min_cut, Weight};
use smbribe::solvers::{self, swap_cut_graph, Caps, SwapNode};
use smbribe::testkit::{enumerate_stable, oracle_min_manipulation};
use smbribe::{
    apply_action, Action, ActionKind, AgentRef, Budget, Goal, Instance, Matching, PresenceMask, Side, SolveRequest,
    Status, Target,
};

const EX3: &str = include_str!("../../../fixtures/ex3.smi");
const EX5: &str = include_str!("../../../fixtures/ex5.smi");
const EX5_TARGET: &str = include_str!("../../../fixtures/ex5.smm");
const ROT2: &str = include_str!("../../../fixtures/rot2.smi");
const ONE: &str = include_str!("../../../fixtures/one.smi");

fn agent(inst: &Instance, name: &str) -> AgentRef {
    inst.find_label(name).unwrap_or_else(|| panic!("no agent {name}"))
}

fn idx(inst: &Instance, name: &str) -> usize {
    agent(inst, name).index
}

fn matching(inst: &Instance, pairs: &[(&str, &str)]) -> Matching {
    Matching::from_pairs(inst.men_count(), inst.women_count(), pairs.iter().map(|(m, w)| (idx(inst, m), idx(inst, w))))
        .unwrap()
}

fn names(inst: &Instance, side: Side, list: &[usize]) -> Vec<String> {
    list.iter().map(|&i| inst.label(AgentRef::new(side, i)).to_string()).collect()
}

fn pair_request(inst: &Instance, goal: Goal, action: ActionKind, budget: usize, m: &str, w: &str) -> SolveRequest {
    let target = Target::Pair { man: idx(inst, m), woman: idx(inst, w) };
    SolveRequest::new(inst.clone(), goal, action, Budget::Finite(budget), target)
}

fn ex5_request(action: ActionKind, budget: usize) -> SolveRequest {
    let inst = parse_instance(EX5).unwrap();
    let target = parse_matching(EX5_TARGET, &inst).unwrap();
    SolveRequest::new(inst, Goal::ExactEx, action, Budget::Finite(budget), Target::Matching(target))
}

#[test]
fn smallest_instance_parses() {
    let inst = parse_instance(ONE).unwrap();
    assert_eq!((inst.men_count(), inst.women_count()), (1, 1));
    assert_eq!(inst.rank(agent(&inst, "a"), agent(&inst, "x")).unwrap(), Some(1));
    assert_eq!(parse_instance(&serialize_instance(&inst)).unwrap(), inst);
}

#[test]
fn ranks_follow_list_positions() {
    let inst = parse_instance(EX5).unwrap();
    let m1 = agent(&inst, "m1");
    assert_eq!(inst.rank(m1, agent(&inst, "w1")).unwrap(), Some(1));
    assert_eq!(inst.rank(m1, agent(&inst, "w2")).unwrap(), Some(2));
    assert!(inst.rank(m1, agent(&inst, "m2")).is_err());
    assert_eq!(parse_instance(&serialize_instance(&inst)).unwrap(), inst);
}

#[test]
fn duplicate_list_entry_is_rejected() {
    let err = parse_instance("men: a\nwomen: x\npref a: x x\npref x: a\n").unwrap_err();
    assert_eq!(err.line, 3);
    assert!(matches!(err.kind, smbribe::format::ParseErrorKind::DuplicateEntry(ref s) if s == "x"));
}

#[test]
fn swapping_neighbours() {
    let inst = Instance::new(vec![vec![0, 1, 2]], vec![vec![0]; 3]).unwrap();
    let mask = PresenceMask::initial(&inst);
    let swap = |position| apply_action(&inst, &mask, &Action::Swap { agent: AgentRef::man(0), position }).unwrap().0;
    assert_eq!(swap(0).prefs(Side::Man, 0), [1, 0, 2]);
    assert_eq!(swap(1).prefs(Side::Man, 0), [0, 2, 1]);
    assert!(apply_action(&inst, &mask, &Action::Swap { agent: AgentRef::man(0), position: 2 }).is_err());
}

#[test]
fn deleting_an_acceptable_pair() {
    // Men m, m1, m2, m3 and women w, w1, w2, w3 (indices 0..4 on each side).
    let men = vec![vec![1, 2, 0, 3], vec![0, 1, 2, 3], vec![0, 1, 2, 3], vec![0, 1, 2, 3]];
    let women = vec![vec![0, 1, 2, 3], vec![0, 1, 2, 3], vec![0, 1, 2, 3], vec![0, 1, 2, 3]];
    let inst = Instance::complete(men, women);
    let (after, _) =
        apply_action(&inst, &PresenceMask::initial(&inst), &Action::AccDelete { man: 0, woman: 0 }).unwrap();
    assert_eq!(after.prefs(Side::Man, 0), [1, 2, 3]);
    assert_eq!(after.prefs(Side::Woman, 0), [1, 2, 3]);
    assert_eq!(after.rank(AgentRef::man(0), AgentRef::woman(0)).unwrap(), None);
    assert_eq!(after.rank(AgentRef::woman(0), AgentRef::man(0)).unwrap(), None);
}

#[test]
fn deleting_an_agent_masks_it_everywhere() {
    let inst = parse_instance(EX3).unwrap();
    let m1 = agent(&inst, "m1");
    let (after, mask) = apply_action(&inst, &PresenceMask::initial(&inst), &Action::DeleteAgent(m1)).unwrap();
    assert!(!mask.is_present(m1));
    let effective = |side: Side, name: &str| {
        let a = agent(&after, name);
        let list: Vec<usize> = after.prefs(side, a.index).iter().copied().filter(|&b| mask.contains(side.other(), b)).collect();
        names(&after, side.other(), &list)
    };
    assert_eq!(effective(Side::Woman, "w1"), ["m2", "m3"]);
    assert_eq!(effective(Side::Woman, "w2"), ["m2", "m3"]);
    assert_eq!(effective(Side::Woman, "w3"), ["m3", "m2"]);
    assert_eq!(effective(Side::Man, "m2"), ["w3", "w1", "w2"]);
    assert_eq!(effective(Side::Man, "m3"), ["w1", "w2", "w3"]);
}

#[test]
fn deletion_example_stable_matchings() {
    let inst = parse_instance(EX3).unwrap();
    let mask = PresenceMask::initial(&inst);
    let by_men = matching(&inst, &[("m1", "w1"), ("m2", "w3"), ("m3", "w2")]);
    let by_women = matching(&inst, &[("m1", "w1"), ("m2", "w2"), ("m3", "w3")]);
    assert_eq!(gale_shapley(&inst, &mask, Side::Man), by_men);
    assert_eq!(gale_shapley(&inst, &mask, Side::Woman), by_women);
    let all: BTreeSet<Vec<(usize, usize)>> =
        enumerate_stable(&inst, &mask, Caps::default()).unwrap().iter().map(|m| m.pairs().collect()).collect();
    let expected: BTreeSet<Vec<(usize, usize)>> = [by_men, by_women].iter().map(|m| m.pairs().collect()).collect();
    assert_eq!(all, expected);
    assert!(stable_pair(&inst, &mask, idx(&inst, "m1"), idx(&inst, "w1")));
    assert!(!stable_pair(&inst, &mask, idx(&inst, "m3"), idx(&inst, "w1")));
}

#[test]
fn deletion_example_solvers() {
    let inst = parse_instance(EX3).unwrap();
    let one = pair_request(&inst, Goal::ConstEx, ActionKind::Delete, 1, "m3", "w1");
    let got = solvers::const_ex_delete(&one).unwrap();
    assert_eq!((got.status, got.cost), (Status::Feasible, Some(1)));
    assert_eq!(got.actions, [Action::DeleteAgent(agent(&inst, "m1"))]);
    assert_eq!(oracle_min_manipulation(&one, Caps::default()).unwrap().cost, Some(1));

    let zero = pair_request(&inst, Goal::ConstEx, ActionKind::Delete, 0, "m3", "w1");
    assert_eq!(solvers::const_ex_delete(&zero).unwrap().status, Status::InfeasibleWithinBudget);

    let already = pair_request(&inst, Goal::ConstEx, ActionKind::Delete, 0, "m2", "w2");
    let got = solvers::const_ex_delete(&already).unwrap();
    assert_eq!((got.status, got.cost, got.actions.len()), (Status::Feasible, Some(0), 0));

    let reorder = pair_request(&inst, Goal::ConstEx, ActionKind::Reorder, 1, "m3", "w1");
    let approx = solvers::const_ex_reorder_approx2(&reorder).unwrap();
    assert_eq!(approx.cost, Some(1));
    assert!(matches!(approx.actions[..], [Action::Reorder { agent: a, .. }] if a == agent(&inst, "m1")));
    let xp = solvers::const_ex_reorder_xp(&reorder).unwrap();
    assert_eq!((xp.status, xp.cost), (Status::Feasible, Some(1)));
    let xp0 = solvers::const_ex_reorder_xp(&pair_request(&inst, Goal::ConstEx, ActionKind::Reorder, 0, "m3", "w1")).unwrap();
    assert_eq!(xp0.status, Status::InfeasibleWithinBudget);
}

#[test]
fn swap_example_blocking_pairs() {
    let req = ex5_request(ActionKind::AccDelete, 3);
    let inst = &req.instance;
    let target = req.matching().unwrap();
    let bp: BTreeSet<(usize, usize)> = blocking_pairs(inst, &req.initial_mask(), target).iter().collect();
    let expected: BTreeSet<(usize, usize)> =
        [("m1", "w1"), ("m1", "w2"), ("m3", "w2")].iter().map(|(m, w)| (idx(inst, m), idx(inst, w))).collect();
    assert_eq!(bp, expected);
    assert!(!is_stable(inst, &req.initial_mask(), target));

    let accdel = solvers::exact_ex_accdel(&req).unwrap();
    assert_eq!(accdel.cost, Some(3));
}

#[test]
fn swap_example_reorder_cover() {
    let req = ex5_request(ActionKind::Reorder, 2);
    let got = solvers::exact_ex_reorder(&req).unwrap();
    assert_eq!((got.status, got.cost), (Status::Feasible, Some(2)));
    let touched: BTreeSet<AgentRef> = got
        .actions
        .iter()
        .map(|a| match a {
            Action::Reorder { agent, .. } => *agent,
            other => panic!("unexpected {other:?}"),
        })
        .collect();
    // Any minimum cover of the blocking pairs, e.g. {m1, w2} or {m1, m3}.
    let bp = blocking_pairs(&req.instance, &req.initial_mask(), req.matching().unwrap());
    assert!(bp.iter().all(|(m, w)| touched.contains(&AgentRef::man(m)) || touched.contains(&AgentRef::woman(w))));
}

#[test]
fn swap_example_optimum() {
    let req = ex5_request(ActionKind::Swap, 3);
    let inst = &req.instance;
    let got = solvers::exact_ex_swap(&req).unwrap();
    assert_eq!((got.status, got.cost), (Status::Feasible, Some(3)));
    // w3 rises twice in m1's list, then m2 passes m3 in w2's list.
    let (m1, w2) = (agent(inst, "m1"), agent(inst, "w2"));
    assert_eq!(
        got.actions,
        [
            Action::Swap { agent: m1, position: 1 },
            Action::Swap { agent: m1, position: 0 },
            Action::Swap { agent: w2, position: 1 },
        ]
    );
    let witness = got.witness.unwrap();
    assert_eq!(names(&witness.instance, Side::Woman, witness.instance.prefs(Side::Man, m1.index)), ["w3", "w1", "w2"]);
    assert_eq!(names(&witness.instance, Side::Man, witness.instance.prefs(Side::Woman, w2.index)), ["m1", "m2", "m3"]);

    assert_eq!(oracle_min_manipulation(&req, Caps::default()).unwrap().cost, Some(3));
    let short = ex5_request(ActionKind::Swap, 2);
    assert_eq!(solvers::exact_ex_swap(&short).unwrap().status, Status::InfeasibleWithinBudget);
}

#[test]
fn swap_example_cut_graph() {
    let req = ex5_request(ActionKind::Swap, 3);
    let inst = &req.instance;
    let cg = swap_cut_graph(inst, req.matching().unwrap());
    let node = |a: &str, b: &str| {
        let a = agent(inst, a);
        cg.node(a, idx(inst, b)).unwrap_or_else(|| panic!("no vertex for {a:?}"))
    };
    let (s, t) = (0, 1);
    assert_eq!(cg.nodes[s], SwapNode::Source);
    assert_eq!(cg.nodes[t], SwapNode::Sink);
    assert_eq!(cg.graph.vertex_count, 8);

    let arcs: BTreeSet<(usize, usize, Weight)> = cg.graph.arcs.iter().map(|a| (a.from, a.to, a.weight)).collect();
    let f = Weight::Finite;
    let expected = BTreeSet::from([
        (s, node("m1", "w1"), f(2)),
        (node("m1", "w1"), node("m1", "w2"), f(1)),
        (s, node("m3", "w2"), f(2)),
        (node("w1", "m1"), t, f(2)),
        (node("w2", "m1"), t, f(2)),
        (node("w2", "m3"), node("w2", "m1"), f(1)),
        (node("m1", "w1"), node("w1", "m1"), Weight::Infinite),
        (node("m1", "w2"), node("w2", "m1"), Weight::Infinite),
        (node("m3", "w2"), node("w2", "m3"), Weight::Infinite),
    ]);
    assert_eq!(arcs, expected);

    let cut = min_cut(&cg.graph).unwrap();
    assert_eq!(cut.value, f(3));
    let cut_arcs: BTreeSet<(usize, usize)> = cut.arcs.iter().map(|&i| (cg.graph.arcs[i].from, cg.graph.arcs[i].to)).collect();
    assert_eq!(cut_arcs, BTreeSet::from([(s, node("m1", "w1")), (node("w2", "m3"), node("w2", "m1"))]));
}

#[test]
fn rotation_pair_is_not_unique() {
    let inst = parse_instance(ROT2).unwrap();
    let mask = PresenceMask::initial(&inst);
    let by_men = gale_shapley(&inst, &mask, Side::Man);
    assert_eq!(by_men, matching(&inst, &[("m1", "w1"), ("m2", "w2")]));
    assert!(!is_unique_stable(&inst, &mask, &by_men));
    assert_eq!(enumerate_stable(&inst, &mask, Caps::default()).unwrap().len(), 2);
    assert_eq!(exposed_rotation(&inst, &mask, &by_men, Side::Man).unwrap(), Some(vec![(0, 0), (1, 1)]));
    assert_eq!(exposed_rotation(&inst, &mask, &by_men, Side::Woman).unwrap(), None);
    let succ = engine::rotation_successors(&inst, &mask, &by_men, Side::Man).unwrap();
    assert_eq!(succ.successor, [Some(1), Some(0)]);
}

#[test]
fn rotation_pair_made_unique() {
    let inst = parse_instance(ROT2).unwrap();
    let by_men = gale_shapley(&inst, &PresenceMask::initial(&inst), Side::Man);
    let req = |action, budget| {
        SolveRequest::new(inst.clone(), Goal::ExactUni, action, Budget::Finite(budget), Target::Matching(by_men.clone()))
    };
    let accdel = solvers::exact_uni_accdel(&req(ActionKind::AccDelete, 1)).unwrap();
    assert_eq!((accdel.status, accdel.cost), (Status::Feasible, Some(1)));
    let dropped = &accdel.actions[0];
    assert!(
        [Action::AccDelete { man: 0, woman: 1 }, Action::AccDelete { man: 1, woman: 0 }].contains(dropped),
        "{dropped:?}"
    );
    let reorder = solvers::exact_uni_reorder_xp(&req(ActionKind::Reorder, 1)).unwrap();
    assert_eq!((reorder.status, reorder.cost), (Status::Feasible, Some(1)));
    assert_eq!(solvers::exact_uni_reorder_xp(&req(ActionKind::Reorder, 0)).unwrap().status, Status::InfeasibleWithinBudget);
    for r in [accdel, reorder] {
        let w = r.witness.unwrap();
        assert!(is_unique_stable(&w.instance, &w.mask, &w.matching));
    }
}

#[test]
fn single_couple() {
    let inst = parse_instance(ONE).unwrap();
    let mask = PresenceMask::initial(&inst);
    let pair = matching(&inst, &[("a", "x")]);
    assert!(is_stable(&inst, &mask, &pair));
    assert!(is_unique_stable(&inst, &mask, &pair));
    assert_eq!(gale_shapley(&inst, &mask, Side::Man), pair);
    assert_eq!(engine::rotation_successors(&inst, &mask, &pair, Side::Man).unwrap().get(0), None);
    assert_eq!(exposed_rotation(&inst, &mask, &pair, Side::Man).unwrap(), None);
    assert!(stable_pair(&inst, &mask, 0, 0));
    assert_eq!(enumerate_stable(&inst, &mask, Caps::default()).unwrap(), [pair]);
}
