use std::collections::HashMap;

use super::{goal_witness, verify, Budget, Caps, Goal, ManipulationResult, Quality, SolveError, SolveRequest, Status};
use crate::combinatorics::all_permutations;
use crate::model::{apply_in_place, Action, ActionKind, AgentRef, Instance, PresenceMask, Side};

/// Constructive-Exists by exhaustive search, for the swap, acceptability
/// deletion and addition actions.
pub fn const_ex_bruteforce(req: &SolveRequest, caps: Caps) -> Result<ManipulationResult, SolveError> {
    req.expect(Goal::ConstEx, &[ActionKind::Swap, ActionKind::AccDelete, ActionKind::Add])?;
    bruteforce(req, caps)
}

/// Exact-Unique by exhaustive search, for the swap, deletion and addition actions.
pub fn exact_uni_bruteforce(req: &SolveRequest, caps: Caps) -> Result<ManipulationResult, SolveError> {
    req.expect(Goal::ExactUni, &[ActionKind::Swap, ActionKind::Delete, ActionKind::Add])?;
    bruteforce(req, caps)
}

/// Breadth-first search over manipulated states for any goal and action.
///
/// The first goal state found has the fewest actions. States are visited in
/// a fixed order, so results are reproducible. Unbounded budgets are accepted
/// for the finite action kinds (adding, deleting agents or acceptabilities);
/// exhausting their state space proves infeasibility at every budget.
/// Additions are searched past the budget, so a solution that is too
/// expensive is reported with its cost rather than as within-budget failure.
pub fn bruteforce(req: &SolveRequest, caps: Caps) -> Result<ManipulationResult, SolveError> {
    req.validate()?;
    let finite_space = matches!(req.action, ActionKind::Add | ActionKind::Delete | ActionKind::AccDelete);
    if req.budget == Budget::Unbounded && !finite_space {
        return Err(SolveError::UnboundedBudget);
    }
    let pinned: Vec<AgentRef> = match (req.goal, req.action, req.pair()) {
        (Goal::ConstEx, ActionKind::Reorder, Some((m, w))) => vec![AgentRef::man(m), AgentRef::woman(w)],
        _ => Vec::new(),
    };

    type State = (Instance, PresenceMask);
    let start: State = (req.instance.clone(), req.initial_mask());
    // Parent index and the action leading to each discovered state.
    let mut states: Vec<(State, Option<(usize, Action)>)> = vec![(start.clone(), None)];
    let mut seen: HashMap<State, usize> = HashMap::from([(start, 0)]);
    let path = |states: &Vec<(State, Option<(usize, Action)>)>, mut i: usize| {
        let mut acts = Vec::new();
        while let Some((p, a)) = &states[i].1 {
            acts.push(a.clone());
            i = *p;
        }
        acts.reverse();
        acts
    };

    if goal_witness(req, &states[0].0 .0, &states[0].0 .1).is_some() {
        return finish(req, Vec::new());
    }
    let mut frontier = 0..1;
    let mut depth = 0;
    let past_budget = req.action == ActionKind::Add;
    while !frontier.is_empty() && (past_budget || req.budget.allows(depth + 1)) {
        depth += 1;
        let next_start = states.len();
        for i in frontier.clone() {
            for act in moves(&states[i].0 .0, &states[i].0 .1, req.action, &pinned) {
                let mut next = states[i].0.clone();
                if apply_in_place(&mut next.0, &mut next.1, &act).is_err() || seen.contains_key(&next) {
                    continue;
                }
                if states.len() as u64 >= caps.max_states {
                    return Err(SolveError::CapExceeded { cap: caps.max_states });
                }
                let hit = goal_witness(req, &next.0, &next.1).is_some();
                seen.insert(next.clone(), states.len());
                states.push((next, Some((i, act))));
                if hit && !req.budget.allows(depth) {
                    return Ok(ManipulationResult {
                        status: Status::InfeasibleWithinBudget,
                        cost: Some(depth),
                        actions: Vec::new(),
                        witness: None,
                        quality: Quality::ExactWithinParameter,
                    });
                }
                if hit {
                    return finish(req, path(&states, states.len() - 1));
                }
            }
        }
        frontier = next_start..states.len();
    }
    let status = if frontier.is_empty() { Status::InfeasibleAlways } else { Status::InfeasibleWithinBudget };
    Ok(ManipulationResult { status, cost: None, actions: Vec::new(), witness: None, quality: Quality::ExactWithinParameter })
}

fn finish(req: &SolveRequest, actions: Vec<Action>) -> Result<ManipulationResult, SolveError> {
    let witness = verify(req, &actions).map_err(SolveError::Unverified)?;
    Ok(ManipulationResult {
        status: Status::Feasible,
        cost: Some(actions.len()),
        actions,
        witness: Some(witness),
        quality: Quality::ExactWithinParameter,
    })
}

/// All single actions of `kind` applicable in a state, in a fixed order.
pub(crate) fn moves(inst: &Instance, mask: &PresenceMask, kind: ActionKind, pinned: &[AgentRef]) -> Vec<Action> {
    let present = || {
        [Side::Man, Side::Woman]
            .into_iter()
            .flat_map(move |s| mask.present(s).map(move |i| AgentRef::new(s, i)))
            .collect::<Vec<_>>()
    };
    match kind {
        ActionKind::Swap => present()
            .into_iter()
            .flat_map(|a| (0..inst.prefs(a.side, a.index).len().saturating_sub(1)).map(move |position| Action::Swap { agent: a, position }))
            .collect(),
        ActionKind::Reorder => present()
            .into_iter()
            .filter(|a| !pinned.contains(a))
            .flat_map(|a| {
                let list = inst.prefs(a.side, a.index).to_vec();
                all_permutations(&list)
                    .into_iter()
                    .filter(move |p| *p != list)
                    .map(move |list| Action::Reorder { agent: a, list })
            })
            .collect(),
        ActionKind::AccDelete => mask
            .present(Side::Man)
            .flat_map(|m| {
                inst.prefs(Side::Man, m)
                    .iter()
                    .filter(|&&w| mask.contains(Side::Woman, w))
                    .map(move |&w| Action::AccDelete { man: m, woman: w })
                    .collect::<Vec<_>>()
            })
            .collect(),
        ActionKind::Delete => present().into_iter().map(Action::DeleteAgent).collect(),
        ActionKind::Add => [Side::Man, Side::Woman]
            .into_iter()
            .flat_map(|s| inst.addable(s).iter().map(move |&i| AgentRef::new(s, i)))
            .filter(|a| !mask.is_present(*a))
            .map(Action::AddAgent)
            .collect(),
    }
}
