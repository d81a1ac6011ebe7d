use super::{conclude, delete_actions, move_to_front, require_complete, Goal, ManipulationResult, Quality, SolveError, SolveRequest, Status};
use crate::combinatorics::{for_each_subset, for_each_tuple};
use crate::engine::{self, pinned_core};
use crate::model::{Action, ActionKind, AgentRef, Side};

/// Constructive-Exists by deleting agents, in polynomial time.
///
/// Deletes exactly the agents that would otherwise block the target pair:
/// those preferred by a target agent over its target partner that the
/// pruned proposal phase leaves single.
pub fn const_ex_delete(req: &SolveRequest) -> Result<ManipulationResult, SolveError> {
    req.expect(Goal::ConstEx, &[ActionKind::Delete])?;
    require_complete(&req.instance)?;
    let (m, w) = req.pair().expect("pair target");
    let core = pinned_core(&req.instance, &req.initial_mask(), m, w);
    conclude(req, delete_actions(core.conflicting()), Quality::Exact)
}

/// Destructive-Exists by deleting agents.
///
/// Costs nothing unless the pair is in both extreme stable matchings, in
/// which case it is in every stable matching and deleting the man suffices.
pub fn dest_ex_delete(req: &SolveRequest) -> Result<ManipulationResult, SolveError> {
    req.expect(Goal::DestEx, &[ActionKind::Delete])?;
    let (m, w) = req.pair().expect("pair target");
    let mask = req.initial_mask();
    let fixed = engine::gale_shapley(&req.instance, &mask, Side::Man).contains(m, w)
        && engine::gale_shapley(&req.instance, &mask, Side::Woman).contains(m, w);
    let actions = if fixed { vec![Action::DeleteAgent(AgentRef::man(m))] } else { Vec::new() };
    conclude(req, actions, Quality::Exact)
}

/// Constructive-Exists by reordering, within a factor of two of optimal.
///
/// Each conflicting agent moves the agents left single by the pruned
/// proposal phase to the front of its list. The budget is ignored: the
/// result is always feasible and its cost may exceed the request's budget.
pub fn const_ex_reorder_approx2(req: &SolveRequest) -> Result<ManipulationResult, SolveError> {
    req.expect(Goal::ConstEx, &[ActionKind::Reorder])?;
    require_complete(&req.instance)?;
    let inst = &req.instance;
    let (m, w) = req.pair().expect("pair target");
    let core = pinned_core(inst, &req.initial_mask(), m, w);
    let mut conflicting = core.conflicting();
    conflicting.sort();

    let single = |side: Side| -> Vec<usize> {
        let skip = if side == Side::Man { m } else { w };
        (0..inst.count(side)).filter(|&a| a != skip && core.matching.partner(side, a).is_none()).collect()
    };
    let singles = [single(Side::Man), single(Side::Woman)];
    let actions: Vec<Action> = conflicting
        .into_iter()
        .map(|a| {
            let front = &singles[a.side.other().idx()];
            Action::Reorder { agent: a, list: move_to_front(inst.prefs(a.side, a.index), front) }
        })
        .collect();

    let unbounded = SolveRequest { budget: super::Budget::Unbounded, ..req.clone() };
    conclude(&unbounded, actions, Quality::Approx2)
}

/// Constructive-Exists by reordering, exactly, in time `n^O(budget)`.
///
/// For each size up to the budget, tries every set of non-target agents and
/// every choice of top entry for them.
pub fn const_ex_reorder_xp(req: &SolveRequest) -> Result<ManipulationResult, SolveError> {
    req.expect(Goal::ConstEx, &[ActionKind::Reorder])?;
    require_complete(&req.instance)?;
    let budget = req.finite_budget()?;
    let inst = &req.instance;
    let mask = req.initial_mask();
    let (m, w) = req.pair().expect("pair target");
    let candidates: Vec<AgentRef> = (0..inst.men_count())
        .filter(|&x| x != m)
        .map(AgentRef::man)
        .chain((0..inst.women_count()).filter(|&x| x != w).map(AgentRef::woman))
        .collect();

    for k in 0..=budget.min(candidates.len()) {
        let mut found = None;
        for_each_subset(candidates.len(), k, &mut |subset| {
            let agents: Vec<AgentRef> = subset.iter().map(|&i| candidates[i]).collect();
            let sizes: Vec<usize> = agents.iter().map(|a| inst.prefs(a.side, a.index).len()).collect();
            for_each_tuple(&sizes, &mut |tops| {
                let mut next = inst.clone();
                for (a, &t) in agents.iter().zip(tops) {
                    let list = inst.prefs(a.side, a.index);
                    next.replace_list(a.side, a.index, move_to_front(list, &[list[t]]));
                }
                if engine::stable_pair(&next, &mask, m, w) {
                    found = Some(
                        agents
                            .iter()
                            .map(|&a| Action::Reorder { agent: a, list: next.prefs(a.side, a.index).to_vec() })
                            .collect::<Vec<_>>(),
                    );
                    return false;
                }
                true
            });
            found.is_none()
        });
        if let Some(actions) = found {
            return conclude(req, actions, Quality::Exact);
        }
    }
    Ok(ManipulationResult::infeasible(Status::InfeasibleWithinBudget, None, Quality::Exact))
}
