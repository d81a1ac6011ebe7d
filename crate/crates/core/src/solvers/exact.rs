use super::{
    conclude, delete_actions, move_to_front, require_complete, Budget, Goal, ManipulationResult, Quality, SolveError,
    SolveRequest, Status, Target,
};
use crate::combinatorics::for_each_permutation;
use crate::engine;
use crate::graphkit::{bipartite_min_vertex_cover, min_cut, BipartiteGraph, CostDigraph, Weight};
use crate::model::{Action, ActionKind, AgentRef, Instance, Matching, PresenceMask, Side};

/// Exact-Exists by deleting acceptability: remove every blocking pair.
pub fn exact_ex_accdel(req: &SolveRequest) -> Result<ManipulationResult, SolveError> {
    req.expect(Goal::ExactEx, &[ActionKind::AccDelete])?;
    let target = req.complete_matching()?;
    let bp = engine::blocking_pairs(&req.instance, &req.initial_mask(), target);
    let actions = bp.iter().map(|(man, woman)| Action::AccDelete { man, woman }).collect();
    conclude(req, actions, Quality::Exact)
}

/// Exact-Exists by reordering: one endpoint of every blocking pair puts its
/// target partner first, chosen as a minimum vertex cover.
pub fn exact_ex_reorder(req: &SolveRequest) -> Result<ManipulationResult, SolveError> {
    req.expect(Goal::ExactEx, &[ActionKind::Reorder])?;
    let target = req.complete_matching()?;
    let inst = &req.instance;
    let bp = engine::blocking_pairs(inst, &req.initial_mask(), target);
    let graph = BipartiteGraph::new(inst.men_count(), inst.women_count(), bp.pairs().to_vec());
    let cover = bipartite_min_vertex_cover(&graph);
    let agents = cover.left.iter().map(|&m| AgentRef::man(m)).chain(cover.right.iter().map(|&w| AgentRef::woman(w)));
    let actions = agents
        .map(|a| {
            let partner = target.partner(a.side, a.index).expect("complete target");
            Action::Reorder { agent: a, list: move_to_front(inst.prefs(a.side, a.index), &[partner]) }
        })
        .collect();
    conclude(req, actions, Quality::Exact)
}

/// Vertex of the swap cut graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SwapNode {
    Source,
    Sink,
    /// `agent`'s `step`-th blocking partner (1-based) by decreasing lift cost.
    Chain { agent: AgentRef, step: usize, partner: usize, cost: usize },
}

/// Cut graph whose minimum cuts are the cheapest swap plans.
#[derive(Clone, Debug)]
pub struct SwapCutGraph {
    pub graph: CostDigraph,
    pub nodes: Vec<SwapNode>,
    /// Per cut-able arc, the agent whose chain it belongs to and the lift it stands for.
    pub arc_owner: Vec<Option<(AgentRef, usize)>>,
}

impl SwapCutGraph {
    /// Index of a chain vertex.
    pub fn node(&self, agent: AgentRef, partner: usize) -> Option<usize> {
        self.nodes
            .iter()
            .position(|n| matches!(n, SwapNode::Chain { agent: a, partner: p, .. } if *a == agent && *p == partner))
    }
}

/// Builds the cut graph for lifting target partners past blocking partners.
///
/// Lifting `a`'s target partner over its blocking partner `b` costs the
/// rank gap between them. Each agent's blocking partners form a chain from
/// the costliest lift down; a man's chain hangs off the source and a
/// woman's chain runs into the sink, and every blocking pair joins the two
/// chain vertices it labels by an uncuttable arc.
pub fn swap_cut_graph(inst: &Instance, target: &Matching) -> SwapCutGraph {
    let mask = PresenceMask::all(inst);
    let bp = engine::blocking_pairs(inst, &mask, target);
    let mut nodes = vec![SwapNode::Source, SwapNode::Sink];
    for side in [Side::Man, Side::Woman] {
        for a in 0..inst.count(side) {
            let own = target.partner(side, a).and_then(|p| inst.position(side, a, p));
            let Some(own) = own else { continue };
            let mut partners: Vec<(usize, usize)> = bp
                .iter()
                .filter_map(|(m, w)| match side {
                    Side::Man if m == a => Some(w),
                    Side::Woman if w == a => Some(m),
                    _ => None,
                })
                .map(|b| (own - inst.position(side, a, b).expect("blocking partner is acceptable"), b))
                .collect();
            partners.sort_by(|x, y| y.0.cmp(&x.0).then(x.1.cmp(&y.1)));
            for (i, (cost, partner)) in partners.into_iter().enumerate() {
                nodes.push(SwapNode::Chain { agent: AgentRef::new(side, a), step: i + 1, partner, cost });
            }
        }
    }

    let mut graph = CostDigraph::new(nodes.len(), 1).with_source(0);
    let mut arc_owner = Vec::new();
    for (v, node) in nodes.iter().enumerate() {
        let SwapNode::Chain { agent, step, cost, .. } = *node else { continue };
        let w = Weight::Finite(cost as u64);
        let arc = match (agent.side, step) {
            (Side::Man, 1) => graph.add_arc(0, v, w),
            (Side::Man, _) => graph.add_arc(v - 1, v, w),
            (Side::Woman, 1) => graph.add_arc(v, 1, w),
            (Side::Woman, _) => graph.add_arc(v, v - 1, w),
        };
        arc_owner.resize(arc + 1, None);
        arc_owner[arc] = Some((agent, cost));
    }
    let mut out = SwapCutGraph { graph, nodes, arc_owner };
    for (m, w) in bp.iter() {
        let from = out.node(AgentRef::man(m), w).expect("chain vertex");
        let to = out.node(AgentRef::woman(w), m).expect("chain vertex");
        out.graph.add_arc(from, to, Weight::Infinite);
    }
    out.arc_owner.resize(out.graph.arcs.len(), None);
    out
}

/// Exact-Exists by adjacent swaps, via a minimum cut.
pub fn exact_ex_swap(req: &SolveRequest) -> Result<ManipulationResult, SolveError> {
    req.expect(Goal::ExactEx, &[ActionKind::Swap])?;
    let target = req.complete_matching()?;
    let inst = &req.instance;
    let cg = swap_cut_graph(inst, target);
    let cut = min_cut(&cg.graph).expect("source and sink are set");

    // Lift per agent; a chain can only be cut once in a minimum cut.
    let mut lift: Vec<(AgentRef, usize)> = Vec::new();
    for &arc in &cut.arcs {
        let (agent, cost) = cg.arc_owner[arc].expect("only chain arcs are finite");
        match lift.iter_mut().find(|(a, _)| *a == agent) {
            Some(entry) => entry.1 = entry.1.max(cost),
            None => lift.push((agent, cost)),
        }
    }
    lift.sort();
    debug_assert_eq!(cut.value, Weight::Finite(lift.iter().map(|l| l.1 as u64).sum()));

    let mut actions = Vec::new();
    for (agent, d) in lift {
        let partner = target.partner(agent.side, agent.index).expect("complete target");
        let pos = inst.position(agent.side, agent.index, partner).expect("acceptable partner");
        actions.extend((pos - d..pos).rev().map(|position| Action::Swap { agent, position }));
    }
    conclude(req, actions, Quality::Exact)
}

/// Exact-Exists by adding agents.
///
/// Starting from the addable agents whose target partners are original,
/// repeatedly adds the partner of any single agent some present agent
/// prefers to its own partner; the closure is the unique minimal candidate
/// for the side started from. Both sides are tried and the smaller feasible
/// closure wins, the woman-side one on ties.
pub fn exact_ex_add(req: &SolveRequest) -> Result<ManipulationResult, SolveError> {
    req.expect(Goal::ExactEx, &[ActionKind::Add])?;
    let target = req.complete_matching()?;
    let inst = &req.instance;
    let best = [Side::Woman, Side::Man]
        .into_iter()
        .filter_map(|side| add_closure(inst, target, side))
        .min_by_key(|added| added.len());
    match best {
        Some(added) => conclude(req, added.into_iter().map(Action::AddAgent).collect(), Quality::Exact),
        None => Ok(ManipulationResult::infeasible(Status::InfeasibleAlways, None, Quality::Exact)),
    }
}

/// Closure starting from addable agents of `side`; `None` if the target is then unstable.
fn add_closure(inst: &Instance, target: &Matching, side: Side) -> Option<Vec<AgentRef>> {
    let mut mask = PresenceMask::initial(inst);
    let mut added = Vec::new();
    for &a in inst.addable(side) {
        let p = target.partner(side, a).expect("complete target");
        if !inst.is_addable(AgentRef::new(side.other(), p)) {
            mask.set(AgentRef::new(side, a), true);
            added.push(AgentRef::new(side, a));
        }
    }
    loop {
        let lonely = (0..inst.count(side)).find(|&x| {
            let p = target.partner(side, x).expect("complete target");
            mask.contains(side, x)
                && !mask.contains(side.other(), p)
                && mask.present(side.other()).any(|y| {
                    let own = target.partner(side.other(), y).expect("complete target");
                    inst.prefers(side.other(), y, x, Some(own))
                })
        });
        let Some(x) = lonely else { break };
        let p = AgentRef::new(side.other(), target.partner(side, x).expect("complete target"));
        mask.set(p, true);
        added.push(p);
    }
    let restricted = target.restrict(&mask);
    if restricted.validate(inst, &mask).is_ok() && engine::is_stable(inst, &mask, &restricted) {
        added.sort();
        Some(added)
    } else {
        None
    }
}

/// Exact-Exists by deleting agents, by bounded search on blocking pairs.
///
/// Some endpoint of each blocking pair must go; branching on both endpoints
/// with iterative deepening finds a minimum deletion set in `O(2^budget)`
/// stability checks.
pub fn exact_ex_delete_fpt(req: &SolveRequest) -> Result<ManipulationResult, SolveError> {
    req.expect(Goal::ExactEx, &[ActionKind::Delete])?;
    let target = req.complete_matching()?;
    let budget = req.finite_budget()?;
    let inst = &req.instance;

    fn branch(inst: &Instance, target: &Matching, mask: &mut PresenceMask, left: usize, out: &mut Vec<AgentRef>) -> bool {
        let Some((m, w)) = engine::first_blocking_pair(inst, mask, &target.restrict(mask)) else {
            return true;
        };
        if left == 0 {
            return false;
        }
        for a in [AgentRef::man(m), AgentRef::woman(w)] {
            mask.set(a, false);
            out.push(a);
            if branch(inst, target, mask, left - 1, out) {
                return true;
            }
            out.pop();
            mask.set(a, true);
        }
        false
    }

    for k in 0..=budget {
        let mut mask = req.initial_mask();
        let mut deleted = Vec::new();
        if branch(inst, target, &mut mask, k, &mut deleted) {
            return conclude(req, delete_actions(deleted), Quality::Exact);
        }
    }
    Ok(ManipulationResult::infeasible(Status::InfeasibleWithinBudget, None, Quality::Exact))
}

/// Largest number of unmatched men for which [`exact_partial`] enumerates completions.
pub const PARTIAL_COMPLETION_LIMIT: usize = 8;

/// Exact-Exists for a partial target: the cheapest manipulation over all
/// completions of the target to a complete matching.
///
/// Runs the complete-target solver on each of the `(n - j)!` completions,
/// so it is limited to [`PARTIAL_COMPLETION_LIMIT`] unmatched men.
pub fn exact_partial(req: &SolveRequest) -> Result<ManipulationResult, SolveError> {
    req.expect(Goal::ExactEx, &[ActionKind::Swap, ActionKind::AccDelete, ActionKind::Reorder])?;
    require_complete(&req.instance)?;
    let partial = req.matching().expect("validated target");
    let free_men: Vec<usize> = (0..partial.men_count()).filter(|&m| partial.wife(m).is_none()).collect();
    let free_women: Vec<usize> = (0..partial.women_count()).filter(|&w| partial.husband(w).is_none()).collect();
    if free_men.len() > PARTIAL_COMPLETION_LIMIT {
        return Err(SolveError::InvalidRequest(format!(
            "more than {PARTIAL_COMPLETION_LIMIT} unmatched men in the partial target"
        )));
    }

    let solver = match req.action {
        ActionKind::Swap => exact_ex_swap,
        ActionKind::AccDelete => exact_ex_accdel,
        _ => exact_ex_reorder,
    };
    let mut best: Option<ManipulationResult> = None;
    let mut perm = free_women.clone();
    let mut err = None;
    for_each_permutation(&mut perm, &mut |order| {
        let mut full = partial.clone();
        for (&m, &w) in free_men.iter().zip(order) {
            full.set(m, w);
        }
        let sub = SolveRequest { target: Target::Matching(full), budget: Budget::Unbounded, ..req.clone() };
        match solver(&sub) {
            Ok(r) if best.as_ref().map_or(true, |b| r.cost < b.cost) => best = Some(r),
            Ok(_) => {}
            Err(e) => err = Some(e),
        }
        err.is_none()
    });
    if let Some(e) = err {
        return Err(e);
    }
    let best = best.expect("at least one completion");
    let cost = best.cost.expect("complete targets are always reachable");
    if !req.budget.allows(cost) {
        return Ok(ManipulationResult::infeasible(Status::InfeasibleWithinBudget, Some(cost), Quality::Exact));
    }
    Ok(best)
}
