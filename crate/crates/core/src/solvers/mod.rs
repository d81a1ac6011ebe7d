//! Minimum-cost manipulation solvers, one per supported (goal, action) cell.
//!
//! Every solver returns a [`ManipulationResult`] whose actions have been
//! re-applied from scratch and whose goal has been re-checked before return.

mod constructive;
mod exact;
mod search;
mod unique;

use std::fmt;

use thiserror::Error;

use crate::engine;
use crate::model::{apply_actions, Action, ActionKind, AgentRef, Instance, Matching, PresenceMask, Side};

pub use constructive::{const_ex_delete, const_ex_reorder_approx2, const_ex_reorder_xp, dest_ex_delete};
pub use exact::{
    exact_ex_accdel, exact_ex_add, exact_ex_delete_fpt, exact_ex_reorder, exact_ex_swap, exact_partial,
    swap_cut_graph, SwapCutGraph, SwapNode,
};
pub use search::{bruteforce, const_ex_bruteforce, exact_uni_bruteforce};
pub use unique::{exact_uni_accdel, exact_uni_reorder_xp};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Goal {
    /// Some stable matching contains the target pair.
    ConstEx,
    /// Some stable matching avoids the target pair.
    DestEx,
    /// The target matching, restricted to present agents, is stable.
    ExactEx,
    /// The target matching, restricted to present agents, is the only stable matching.
    ExactUni,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Budget {
    Finite(usize),
    Unbounded,
}

impl Budget {
    pub fn allows(self, cost: usize) -> bool {
        match self {
            Budget::Finite(l) => cost <= l,
            Budget::Unbounded => true,
        }
    }

    pub fn finite(self) -> Option<usize> {
        match self {
            Budget::Finite(l) => Some(l),
            Budget::Unbounded => None,
        }
    }
}

impl fmt::Display for Budget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Budget::Finite(l) => write!(f, "{l}"),
            Budget::Unbounded => f.write_str("inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Target {
    Pair { man: usize, woman: usize },
    Matching(Matching),
}

/// One manipulation problem. The starting state is the instance with every
/// agent present, except that addable agents start absent under Add.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveRequest {
    pub instance: Instance,
    pub goal: Goal,
    pub action: ActionKind,
    pub budget: Budget,
    pub target: Target,
}

impl SolveRequest {
    pub fn new(instance: Instance, goal: Goal, action: ActionKind, budget: Budget, target: Target) -> Self {
        SolveRequest { instance, goal, action, budget, target }
    }

    /// Agents present before any action. Addable agents start absent only
    /// under the Add action; no other action could bring them in.
    pub fn initial_mask(&self) -> PresenceMask {
        if self.action == ActionKind::Add {
            PresenceMask::initial(&self.instance)
        } else {
            PresenceMask::all(&self.instance)
        }
    }

    pub fn pair(&self) -> Option<(usize, usize)> {
        match self.target {
            Target::Pair { man, woman } => Some((man, woman)),
            Target::Matching(_) => None,
        }
    }

    pub fn matching(&self) -> Option<&Matching> {
        match &self.target {
            Target::Matching(m) => Some(m),
            Target::Pair { .. } => None,
        }
    }

    /// Checks the target shape against the goal and the instance.
    pub fn validate(&self) -> Result<(), SolveError> {
        let inst = &self.instance;
        match (&self.goal, &self.target) {
            (Goal::ConstEx | Goal::DestEx, Target::Pair { man, woman }) => {
                if *man >= inst.men_count() || *woman >= inst.women_count() {
                    return Err(SolveError::InvalidRequest("target pair out of range".into()));
                }
            }
            (Goal::ExactEx | Goal::ExactUni, Target::Matching(m)) => {
                if m.men_count() != inst.men_count() || m.women_count() != inst.women_count() {
                    return Err(SolveError::InvalidRequest("target matching has the wrong size".into()));
                }
                m.validate(inst, &PresenceMask::all(inst))
                    .map_err(|e| SolveError::InvalidRequest(format!("target matching: {e}")))?;
            }
            _ => return Err(SolveError::InvalidRequest("target does not fit the goal".into())),
        }
        Ok(())
    }

    fn expect(&self, goal: Goal, actions: &[ActionKind]) -> Result<(), SolveError> {
        if self.goal != goal || !actions.contains(&self.action) {
            return Err(SolveError::Unsupported { goal: self.goal, action: self.action });
        }
        self.validate()
    }

    fn complete_matching(&self) -> Result<&Matching, SolveError> {
        let m = self.matching().expect("validated target");
        if !m.is_perfect() {
            return Err(SolveError::InvalidRequest("target matching must be complete".into()));
        }
        Ok(m)
    }

    fn finite_budget(&self) -> Result<usize, SolveError> {
        self.budget.finite().ok_or(SolveError::UnboundedBudget)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    Feasible,
    InfeasibleWithinBudget,
    InfeasibleAlways,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Quality {
    Exact,
    Approx2,
    ExactWithinParameter,
}

/// The manipulated state and the matching certifying the goal in it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub instance: Instance,
    pub mask: PresenceMask,
    pub matching: Matching,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManipulationResult {
    pub status: Status,
    /// Number of actions used; also reported when the known optimum exceeds the budget.
    pub cost: Option<usize>,
    /// Empty unless feasible.
    pub actions: Vec<Action>,
    pub witness: Option<Witness>,
    pub quality: Quality,
}

impl ManipulationResult {
    pub fn is_feasible(&self) -> bool {
        self.status == Status::Feasible
    }

    fn infeasible(status: Status, cost: Option<usize>, quality: Quality) -> Self {
        ManipulationResult { status, cost, actions: Vec::new(), witness: None, quality }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("invalid request: {0}")]
    InvalidRequest(String),
    #[error("no solver for goal {goal:?} with action {action:?}")]
    Unsupported { goal: Goal, action: ActionKind },
    #[error("the instance must be a complete Stable Marriage instance")]
    NotComplete,
    #[error("both sides must have the same number of agents")]
    UnequalSides,
    #[error("this solver needs a finite budget")]
    UnboundedBudget,
    #[error("search space exceeds the cap of {cap} states")]
    CapExceeded { cap: u64 },
    #[error("{agents} agents exceed the enumeration cap of {cap}")]
    TooManyAgents { agents: usize, cap: usize },
    #[error("internal error: produced solution failed verification ({0})")]
    Unverified(String),
}

/// Limits for enumeration-based routines.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Largest number of agents for stable-matching enumeration.
    pub max_agents: usize,
    /// Largest number of candidate states an exhaustive search may visit.
    pub max_states: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { max_agents: 16, max_states: 10_000_000 }
    }
}

impl Caps {
    /// Defaults, with `SMBRIBE_ORACLE_CAP` overriding both limits when set.
    ///
    /// The variable is either `STATES` or `AGENTS:STATES`.
    pub fn from_env() -> Self {
        let mut caps = Caps::default();
        if let Ok(v) = std::env::var("SMBRIBE_ORACLE_CAP") {
            let v = v.trim();
            match v.split_once(':') {
                Some((a, s)) => {
                    if let (Ok(a), Ok(s)) = (a.trim().parse(), s.trim().parse()) {
                        caps = Caps { max_agents: a, max_states: s };
                    }
                }
                None => {
                    if let Ok(s) = v.parse() {
                        caps.max_states = s;
                    }
                }
            }
        }
        caps
    }
}

/// Algorithm choice for [`solve`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algo {
    Auto,
    Approx2,
    Xp,
    Bruteforce,
    Fpt,
}

/// Dispatches a request to the solver for its cell.
///
/// `Auto` picks the polynomial algorithm where one exists, the XP or FPT
/// algorithm for Constructive-Exists/Exact-Unique Reorder and Exact-Exists
/// Delete, and exhaustive search otherwise. Partial Exact-Exists targets
/// under Swap, AccDelete and Reorder go to [`exact_partial`].
pub fn solve(req: &SolveRequest, algo: Algo, caps: Caps) -> Result<ManipulationResult, SolveError> {
    use ActionKind::*;
    use Goal::*;
    req.validate()?;
    match (algo, req.goal, req.action) {
        (Algo::Bruteforce, _, _) => bruteforce(req, caps),
        (Algo::Approx2, ConstEx, Reorder) => const_ex_reorder_approx2(req),
        (Algo::Xp, ConstEx, Reorder) => const_ex_reorder_xp(req),
        (Algo::Xp, ExactUni, Reorder) => exact_uni_reorder_xp(req),
        (Algo::Fpt, ExactEx, Delete) => exact_ex_delete_fpt(req),
        (Algo::Auto, ConstEx, Delete) => const_ex_delete(req),
        (Algo::Auto, ConstEx, Reorder) => match req.budget {
            Budget::Finite(_) => const_ex_reorder_xp(req),
            Budget::Unbounded => const_ex_reorder_approx2(req),
        },
        (Algo::Auto, DestEx, Delete) => dest_ex_delete(req),
        (Algo::Auto, ExactEx, Swap | AccDelete | Reorder) if req.matching().is_some_and(|m| !m.is_perfect()) => {
            exact_partial(req)
        }
        (Algo::Auto, ExactEx, AccDelete) => exact_ex_accdel(req),
        (Algo::Auto, ExactEx, Reorder) => exact_ex_reorder(req),
        (Algo::Auto, ExactEx, Swap) => exact_ex_swap(req),
        (Algo::Auto, ExactEx, Add) => exact_ex_add(req),
        (Algo::Auto, ExactEx, Delete) => exact_ex_delete_fpt(req),
        (Algo::Auto, ExactUni, AccDelete) => exact_uni_accdel(req),
        (Algo::Auto, ExactUni, Reorder) => exact_uni_reorder_xp(req),
        (Algo::Auto, _, _) => bruteforce(req, caps),
        (_, goal, action) => Err(SolveError::Unsupported { goal, action }),
    }
}

/// The matching certifying the request's goal in a manipulated state, if the goal holds.
pub fn goal_witness(req: &SolveRequest, inst: &Instance, mask: &PresenceMask) -> Option<Matching> {
    match (&req.goal, &req.target) {
        (Goal::ConstEx, Target::Pair { man, woman }) => engine::stable_matching_with(inst, mask, *man, *woman),
        (Goal::DestEx, Target::Pair { man, woman }) => {
            let by_men = engine::gale_shapley(inst, mask, Side::Man);
            if !by_men.contains(*man, *woman) {
                return Some(by_men);
            }
            let by_women = engine::gale_shapley(inst, mask, Side::Woman);
            (!by_women.contains(*man, *woman)).then_some(by_women)
        }
        (Goal::ExactEx, Target::Matching(target)) => {
            let m = target.restrict(mask);
            (m.validate(inst, mask).is_ok() && engine::is_stable(inst, mask, &m)).then_some(m)
        }
        (Goal::ExactUni, Target::Matching(target)) => {
            let m = target.restrict(mask);
            engine::is_unique_stable(inst, mask, &m).then_some(m)
        }
        _ => None,
    }
}

/// Re-applies `actions` from the initial state and checks the goal there.
pub fn verify(req: &SolveRequest, actions: &[Action]) -> Result<Witness, String> {
    if let Some(a) = actions.iter().find(|a| a.kind() != req.action) {
        return Err(format!("action {a:?} does not match {:?}", req.action));
    }
    if req.goal == Goal::ConstEx && req.action == ActionKind::Reorder {
        let (m, w) = req.pair().expect("pair target");
        let pinned = [AgentRef::man(m), AgentRef::woman(w)];
        if actions.iter().any(|a| matches!(a, Action::Reorder { agent, .. } if pinned.contains(agent))) {
            return Err("the target pair may not be reordered".into());
        }
    }
    let (instance, mask) = apply_actions(&req.instance, &req.initial_mask(), actions).map_err(|e| e.to_string())?;
    let matching = goal_witness(req, &instance, &mask).ok_or("goal does not hold after the actions")?;
    Ok(Witness { instance, mask, matching })
}

/// Verifies a candidate optimum and turns it into a result under the budget.
fn conclude(req: &SolveRequest, actions: Vec<Action>, quality: Quality) -> Result<ManipulationResult, SolveError> {
    let cost = actions.len();
    if !req.budget.allows(cost) {
        return Ok(ManipulationResult::infeasible(Status::InfeasibleWithinBudget, Some(cost), quality));
    }
    let witness = verify(req, &actions).map_err(SolveError::Unverified)?;
    Ok(ManipulationResult { status: Status::Feasible, cost: Some(cost), actions, witness: Some(witness), quality })
}

/// Sorted agent list as delete actions.
fn delete_actions(mut agents: Vec<AgentRef>) -> Vec<Action> {
    agents.sort();
    agents.into_iter().map(Action::DeleteAgent).collect()
}

/// `list` with `front` moved ahead of everything else, other entries keeping their order.
fn move_to_front(list: &[usize], front: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = front.to_vec();
    out.extend(list.iter().copied().filter(|x| !front.contains(x)));
    out
}

fn require_complete(inst: &Instance) -> Result<(), SolveError> {
    if inst.is_complete() {
        Ok(())
    } else {
        Err(SolveError::NotComplete)
    }
}
