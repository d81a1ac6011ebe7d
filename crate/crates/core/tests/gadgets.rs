use smbribe::engine::is_stable;
use smbribe::model::{ActionKind, PresenceMask, Side};
use smbribe::solvers::{const_ex_bruteforce, verify, Budget, Caps, Status};
use smbribe::testkit::*;

#[test]
fn clique_add_counts_agents() {
    let k3 = SimpleGraph::complete(3);
    let out = gadget_clique_add(&k3, 2).unwrap();
    assert_eq!(out.instance.men_count(), 13);
    assert_eq!(out.budget, Budget::Finite(3));
    assert_eq!(out.instance.addable(Side::Man).len(), 6);
    assert!(out.instance.addable(Side::Woman).is_empty());
    let got = const_ex_bruteforce(&out.request(ActionKind::Add), Caps::default()).unwrap();
    assert_eq!((got.status, got.cost), (Status::Feasible, Some(3)));
}

#[test]
fn clique_add_on_a_path() {
    let path = SimpleGraph::new(3, [(0, 1), (1, 2)]).unwrap();
    let got = const_ex_bruteforce(&gadget_clique_add(&path, 2).unwrap().request(ActionKind::Add), Caps::default()).unwrap();
    assert_eq!(got.status, Status::Feasible);
    let mut three = gadget_clique_add(&path, 3).unwrap().request(ActionKind::Add);
    three.budget = Budget::Unbounded;
    assert_eq!(const_ex_bruteforce(&three, Caps::default()).unwrap().status, Status::InfeasibleAlways);
}

#[test]
fn clique_accdel_counts_agents_and_forward_actions_work() {
    let k2 = SimpleGraph::new(2, [(0, 1)]).unwrap();
    let out = gadget_clique_accdel_reorder(&k2, 2).unwrap();
    let total = out.instance.men_count() + out.instance.women_count();
    assert_eq!(total, 2 * 4 + 6 + 2 + 2);
    assert_eq!(out.budget, Budget::Finite(3));
    let clique = k2.find_clique(2).unwrap();
    for action in [ActionKind::AccDelete, ActionKind::Reorder] {
        let acts = clique_forward_actions(&out.instance, &k2, &clique, action);
        assert_eq!(acts.len(), 3);
        assert!(verify(&out.request(action), &acts).is_ok(), "{action:?}");
    }
}

#[test]
fn gadget_parameters_are_checked() {
    assert!(gadget_clique_add(&SimpleGraph::complete(2), 1).is_err());
    assert!(gadget_clique_accdel_reorder(&SimpleGraph::complete(2), 1).is_err());
    assert!(SimpleGraph::new(2, [(0, 0)]).is_err());
    assert!(SimpleGraph::new(2, [(0, 1), (1, 0)]).is_err());
    assert!(SetSystem::new(2, vec![vec![]]).is_err());
    assert!(SetSystem::new(2, vec![vec![2]]).is_err());
}

#[test]
fn hitting_set_targets_are_stable_and_forward_actions_work() {
    for s in properties::all_set_systems(3) {
        let hitting = s.find_hitting_set(s.sets().len().min(3)).unwrap();
        let k = hitting.len();
        let out = gadget_hs_reorder(&s, k);
        let req = out.request(ActionKind::Reorder);
        assert!(is_stable(&out.instance, &PresenceMask::initial(&out.instance), req.matching().unwrap()));
        assert!(verify(&req, &hs_forward_actions(&out, &s, &hitting, ActionKind::Reorder)).is_ok());
        let out = gadget_hs_add(&s, k);
        assert!(verify(&out.request(ActionKind::Add), &hs_forward_actions(&out, &s, &hitting, ActionKind::Add)).is_ok());
    }
}

#[test]
fn dummy_block_shapes() {
    let one = dummy_block(1);
    assert_eq!(one.prefs(Side::Man, 0), [0]);
    let three = dummy_block(3);
    let all = enumerate_stable(&three, &PresenceMask::initial(&three), Caps::default()).unwrap();
    assert!(all.iter().all(|m| (0..3).all(|i| m.contains(i, i))));
}
