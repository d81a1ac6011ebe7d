use crate::combinatorics::{all_permutations, for_each_subset, for_each_tuple};
use super::enumerate::{is_stable_by_definition, visit_stable};
use crate::model::{apply_in_place, Action, ActionKind, AgentRef, Instance, Matching, PresenceMask, Side};
use crate::solvers::{verify, Budget, Caps, Goal, ManipulationResult, Quality, SolveError, SolveRequest, Status, Target};

/// Minimum manipulation by exhaustive enumeration of action sets.
///
/// Deletions, additions and acceptability deletions range over subsets,
/// reorders over subsets of agents times all permutations of their lists,
/// and swaps over all swap sequences. Goals are decided from first
/// principles with [`visit_stable`] rather than with the engine; the
/// engine only re-verifies the final witness.
///
/// For additions the search continues past the budget until a solution is
/// found or every subset has been tried, so `InfeasibleAlways` is exact.
pub fn oracle_min_manipulation(req: &SolveRequest, caps: Caps) -> Result<ManipulationResult, SolveError> {
    req.validate()?;
    let space = Space::new(req);
    let limit = match (req.budget, req.action) {
        (Budget::Finite(l), ActionKind::Add) => space.universe_size().max(l),
        (Budget::Finite(l), _) => l,
        (Budget::Unbounded, ActionKind::Swap) => return Err(SolveError::UnboundedBudget),
        (Budget::Unbounded, _) => space.universe_size(),
    };
    let limit = if req.action == ActionKind::Swap { limit } else { limit.min(space.universe_size()) };
    let mut oracle = Oracle { req, caps, visited: 0 };
    for k in 0..=limit {
        if let Some(actions) = oracle.search(&space, k)? {
            if !req.budget.allows(k) {
                return Ok(infeasible(Status::InfeasibleWithinBudget, Some(k)));
            }
            let witness = verify(req, &actions).map_err(SolveError::Unverified)?;
            return Ok(ManipulationResult {
                status: Status::Feasible,
                cost: Some(k),
                actions,
                witness: Some(witness),
                quality: Quality::Exact,
            });
        }
    }
    let exhausted = req.action != ActionKind::Swap && limit == space.universe_size();
    Ok(infeasible(if exhausted { Status::InfeasibleAlways } else { Status::InfeasibleWithinBudget }, None))
}

fn infeasible(status: Status, cost: Option<usize>) -> ManipulationResult {
    ManipulationResult { status, cost, actions: Vec::new(), witness: None, quality: Quality::Exact }
}

/// The elements an action set is drawn from.
struct Space {
    kind: ActionKind,
    agents: Vec<AgentRef>,
    pairs: Vec<(usize, usize)>,
}

impl Space {
    fn new(req: &SolveRequest) -> Self {
        let inst = &req.instance;
        let mask = req.initial_mask();
        let everyone = || {
            [Side::Man, Side::Woman]
                .into_iter()
                .flat_map(|s| (0..inst.count(s)).map(move |i| AgentRef::new(s, i)))
                .collect::<Vec<_>>()
        };
        let agents = match req.action {
            ActionKind::Delete => everyone().into_iter().filter(|a| mask.is_present(*a)).collect(),
            ActionKind::Add => everyone().into_iter().filter(|a| !mask.is_present(*a)).collect(),
            ActionKind::Reorder => {
                let pinned = match (req.goal, &req.target) {
                    (Goal::ConstEx, Target::Pair { man, woman }) => vec![AgentRef::man(*man), AgentRef::woman(*woman)],
                    _ => Vec::new(),
                };
                everyone().into_iter().filter(|a| !pinned.contains(a)).collect()
            }
            _ => Vec::new(),
        };
        let pairs = match req.action {
            ActionKind::AccDelete => (0..inst.men_count())
                .flat_map(|m| (0..inst.women_count()).filter(move |&w| inst.acceptable(m, w)).map(move |w| (m, w)))
                .collect(),
            _ => Vec::new(),
        };
        Space { kind: req.action, agents, pairs }
    }

    fn universe_size(&self) -> usize {
        match self.kind {
            ActionKind::AccDelete => self.pairs.len(),
            _ => self.agents.len(),
        }
    }
}

struct Oracle<'a> {
    req: &'a SolveRequest,
    caps: Caps,
    visited: u64,
}

impl Oracle<'_> {
    fn tick(&mut self) -> Result<(), SolveError> {
        self.visited += 1;
        if self.visited > self.caps.max_states {
            return Err(SolveError::CapExceeded { cap: self.caps.max_states });
        }
        Ok(())
    }

    /// A goal-achieving action list of exactly `k` actions, if any.
    fn search(&mut self, space: &Space, k: usize) -> Result<Option<Vec<Action>>, SolveError> {
        let start = (self.req.instance.clone(), self.req.initial_mask());
        match space.kind {
            ActionKind::Swap => self.swaps(&start.0, &start.1, k, &mut Vec::new()),
            ActionKind::AccDelete => {
                let acts: Vec<Action> =
                    space.pairs.iter().map(|&(man, woman)| Action::AccDelete { man, woman }).collect();
                self.subsets(&start, &acts, k)
            }
            ActionKind::Delete => {
                let acts: Vec<Action> = space.agents.iter().map(|&a| Action::DeleteAgent(a)).collect();
                self.subsets(&start, &acts, k)
            }
            ActionKind::Add => {
                let acts: Vec<Action> = space.agents.iter().map(|&a| Action::AddAgent(a)).collect();
                self.subsets(&start, &acts, k)
            }
            ActionKind::Reorder => self.reorders(&start, &space.agents, k),
        }
    }

    fn subsets(&mut self, start: &(Instance, PresenceMask), acts: &[Action], k: usize) -> Result<Option<Vec<Action>>, SolveError> {
        let mut chosen = Vec::with_capacity(k);
        self.subsets_from(start, acts, k, 0, &mut chosen)
    }

    fn subsets_from(
        &mut self,
        start: &(Instance, PresenceMask),
        acts: &[Action],
        k: usize,
        from: usize,
        chosen: &mut Vec<Action>,
    ) -> Result<Option<Vec<Action>>, SolveError> {
        if chosen.len() == k {
            self.tick()?;
            let (mut inst, mut mask) = start.clone();
            for a in chosen.iter() {
                apply_in_place(&mut inst, &mut mask, a).expect("subset actions are independent");
            }
            return Ok(self.holds(&inst, &mask)?.then(|| chosen.clone()));
        }
        for i in from..acts.len() {
            if acts.len() - i < k - chosen.len() {
                break;
            }
            chosen.push(acts[i].clone());
            if let Some(found) = self.subsets_from(start, acts, k, i + 1, chosen)? {
                return Ok(Some(found));
            }
            chosen.pop();
        }
        Ok(None)
    }

    fn reorders(&mut self, start: &(Instance, PresenceMask), agents: &[AgentRef], k: usize) -> Result<Option<Vec<Action>>, SolveError> {
        let mut found = None;
        let mut err = None;
        for_each_subset(agents.len(), k, &mut |subset| {
            let picked: Vec<AgentRef> = subset.iter().map(|&i| agents[i]).collect();
            let perms: Vec<Vec<Vec<usize>>> = picked
                .iter()
                .map(|a| {
                    let list = start.0.prefs(a.side, a.index).to_vec();
                    all_permutations(&list).into_iter().filter(|p| *p != list).collect()
                })
                .collect();
            let sizes: Vec<usize> = perms.iter().map(Vec::len).collect();
            for_each_tuple(&sizes, &mut |choice| {
                let acts: Vec<Action> = picked
                    .iter()
                    .zip(&perms)
                    .zip(choice)
                    .map(|((&agent, p), &c)| Action::Reorder { agent, list: p[c].clone() })
                    .collect();
                if let Err(e) = self.tick() {
                    err = Some(e);
                    return false;
                }
                let (mut inst, mut mask) = start.clone();
                for a in &acts {
                    apply_in_place(&mut inst, &mut mask, a).expect("reorders are permutations");
                }
                match self.holds(&inst, &mask) {
                    Ok(true) => {
                        found = Some(acts);
                        false
                    }
                    Ok(false) => true,
                    Err(e) => {
                        err = Some(e);
                        false
                    }
                }
            });
            found.is_none() && err.is_none()
        });
        match err {
            Some(e) => Err(e),
            None => Ok(found),
        }
    }

    fn swaps(&mut self, inst: &Instance, mask: &PresenceMask, left: usize, path: &mut Vec<Action>) -> Result<Option<Vec<Action>>, SolveError> {
        if left == 0 {
            self.tick()?;
            return Ok(self.holds(inst, mask)?.then(|| path.clone()));
        }
        for side in [Side::Man, Side::Woman] {
            for a in 0..inst.count(side) {
                for position in 0..inst.prefs(side, a).len().saturating_sub(1) {
                    let act = Action::Swap { agent: AgentRef::new(side, a), position };
                    let mut next = inst.clone();
                    let mut next_mask = mask.clone();
                    apply_in_place(&mut next, &mut next_mask, &act).expect("position in range");
                    path.push(act);
                    if let Some(found) = self.swaps(&next, &next_mask, left - 1, path)? {
                        return Ok(Some(found));
                    }
                    path.pop();
                }
            }
        }
        Ok(None)
    }

    /// The goal, decided by enumeration and pairwise checks only.
    fn holds(&mut self, inst: &Instance, mask: &PresenceMask) -> Result<bool, SolveError> {
        let caps = self.caps;
        match (&self.req.goal, &self.req.target) {
            (Goal::ConstEx, Target::Pair { man, woman }) => {
                let (m, w) = (*man, *woman);
                if !(mask.contains(Side::Man, m) && mask.contains(Side::Woman, w) && inst.acceptable(m, w)) {
                    return Ok(false);
                }
                Ok(!visit_stable(inst, mask, caps, Some((m, w)), &mut |_| false)?)
            }
            (Goal::DestEx, Target::Pair { man, woman }) => {
                let (m, w) = (*man, *woman);
                Ok(!visit_stable(inst, mask, caps, None, &mut |s| s.contains(m, w))?)
            }
            (Goal::ExactEx, Target::Matching(target)) => {
                let r = target.restrict(mask);
                Ok(r.validate(inst, mask).is_ok() && is_stable_by_definition(inst, mask, &r))
            }
            (Goal::ExactUni, Target::Matching(target)) => {
                let r = target.restrict(mask);
                if r.validate(inst, mask).is_err() || !is_stable_by_definition(inst, mask, &r) {
                    return Ok(false);
                }
                Ok(visit_stable(inst, mask, caps, None, &mut |s: &Matching| *s == r)?)
            }
            _ => Ok(false),
        }
    }
}
