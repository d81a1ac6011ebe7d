use super::{conclude, require_complete, Goal, ManipulationResult, Quality, SolveError, SolveRequest, Status};
use crate::combinatorics::{for_each_subset, for_each_tuple};
use crate::engine;
use crate::graphkit::{min_anti_arborescence, CostDigraph, Weight};
use crate::model::{apply_actions, Action, ActionKind, AgentRef, Instance, Matching, Side};

/// Exact-Unique by deleting acceptability, in polynomial time.
///
/// After removing the blocking pairs, the target is unique exactly when no
/// rotation is exposed. For each side, arcs from a pair to the pair its
/// agent could next rotate into are priced by the acceptabilities that must
/// go first; a minimum anti-arborescence into the sink then picks the
/// cheapest way to route every pair out of all cycles.
pub fn exact_uni_accdel(req: &SolveRequest) -> Result<ManipulationResult, SolveError> {
    req.expect(Goal::ExactUni, &[ActionKind::AccDelete])?;
    let target = req.complete_matching()?;
    let mask = req.initial_mask();
    let bp = engine::blocking_pairs(&req.instance, &mask, target);
    let mut actions: Vec<Action> = bp.iter().map(|(man, woman)| Action::AccDelete { man, woman }).collect();
    let (pruned, _) = apply_actions(&req.instance, &mask, &actions).map_err(|e| SolveError::Unverified(e.to_string()))?;

    for side in [Side::Man, Side::Woman] {
        let (graph, drops) = rotation_graph(&pruned, target, side);
        let tree = min_anti_arborescence(&graph).expect("every vertex has a sink arc");
        for arc in tree.arcs {
            for &other in &drops[arc] {
                let (man, woman) = if side == Side::Man { (graph.arcs[arc].from, other) } else { (other, graph.arcs[arc].from) };
                actions.push(Action::AccDelete { man, woman });
            }
        }
    }
    conclude(req, actions, Quality::Exact)
}

/// Graph on the agents of `side` plus a sink; per arc, the entries to delete if it is used.
fn rotation_graph(inst: &Instance, target: &Matching, side: Side) -> (CostDigraph, Vec<Vec<usize>>) {
    let n = inst.count(side);
    let mut graph = CostDigraph::new(n + 1, n);
    let mut drops = Vec::new();
    for a in 0..n {
        let own = target.partner(side, a).expect("complete target");
        let list = inst.prefs(side, a);
        let start = inst.position(side, a, own).expect("target pair survives") + 1;
        let mut eager: Vec<usize> = Vec::new();
        for &b in &list[start..] {
            let their = target.partner(side.other(), b).expect("complete target");
            if inst.prefers(side.other(), b, a, Some(their)) {
                graph.add_arc(a, their, Weight::Finite(eager.len() as u64));
                drops.push(eager.clone());
                eager.push(b);
            }
        }
        graph.add_arc(a, n, Weight::Finite(eager.len() as u64));
        drops.push(eager);
    }
    (graph, drops)
}

/// Exact-Unique by reordering, exactly, in time `n^O(budget)`.
///
/// Guesses the reordered agents and the successor each one will have after
/// its target partner, then checks that both rotation graphs can route every
/// pair to the sink without exposing a rotation. Lists are rebuilt from the
/// routing found.
pub fn exact_uni_reorder_xp(req: &SolveRequest) -> Result<ManipulationResult, SolveError> {
    req.expect(Goal::ExactUni, &[ActionKind::Reorder])?;
    require_complete(&req.instance)?;
    let target = req.complete_matching()?;
    let budget = req.finite_budget()?;
    let inst = &req.instance;
    let n = inst.men_count();
    let bp = engine::blocking_pairs(inst, &req.initial_mask(), target);
    let agents: Vec<AgentRef> = (0..n).map(AgentRef::man).chain((0..n).map(AgentRef::woman)).collect();

    for k in 0..=budget.min(agents.len()) {
        let mut found = None;
        for_each_subset(agents.len(), k, &mut |subset| {
            let mut chosen = [vec![false; n], vec![false; n]];
            for &i in subset {
                chosen[agents[i].side.idx()][agents[i].index] = true;
            }
            if bp.iter().any(|(m, w)| !chosen[0][m] && !chosen[1][w]) {
                return true;
            }
            let picked: Vec<AgentRef> = subset.iter().map(|&i| agents[i]).collect();
            // Successor options: every other opposite agent, then none.
            let options: Vec<Vec<Option<usize>>> = picked
                .iter()
                .map(|a| {
                    let own = target.partner(a.side, a.index).expect("complete target");
                    (0..n).filter(|&b| b != own).map(Some).chain([None]).collect()
                })
                .collect();
            let sizes: Vec<usize> = options.iter().map(Vec::len).collect();
            for_each_tuple(&sizes, &mut |choice| {
                let mut succ: [Vec<Option<usize>>; 2] = [vec![None; n], vec![None; n]];
                for ((a, opts), &c) in picked.iter().zip(&options).zip(choice) {
                    succ[a.side.idx()][a.index] = opts[c];
                }
                let guess = Guess { inst, target, chosen: &chosen, succ: &succ };
                if let Some(actions) = guess.realize(&picked) {
                    found = Some(actions);
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

struct Guess<'a> {
    inst: &'a Instance,
    target: &'a Matching,
    chosen: &'a [Vec<bool>; 2],
    succ: &'a [Vec<Option<usize>>; 2],
}

impl Guess<'_> {
    fn partner(&self, side: Side, a: usize) -> usize {
        self.target.partner(side, a).expect("complete target")
    }

    fn in_x(&self, side: Side, a: usize) -> bool {
        self.chosen[side.idx()][a]
    }

    fn successor(&self, side: Side, a: usize) -> Option<usize> {
        self.succ[side.idx()][a]
    }

    /// `b` on the other side would leave its target partner for `a`.
    fn eager(&self, side: Side, b: usize, a: usize) -> bool {
        self.inst.prefers(side.other(), b, a, Some(self.partner(side.other(), b)))
    }

    fn consistent(&self, picked: &[AgentRef]) -> bool {
        let n = self.inst.men_count();
        picked.iter().all(|a| {
            let (side, x) = (a.side, a.index);
            match self.successor(side, x) {
                // A fixed successor must want the agent, or be reordered itself.
                Some(b) => {
                    (self.in_x(side.other(), b) || self.eager(side, b, x))
                        && !(self.in_x(side.other(), b) && self.successor(side.other(), b) == Some(x))
                }
                // No successor: nobody outside the guess may want the agent.
                None => (0..n).all(|b| self.in_x(side.other(), b) || !self.eager(side, b, x)),
            }
        })
    }

    /// Rotation graph of `side` under the guess.
    fn graph(&self, side: Side) -> CostDigraph {
        let n = self.inst.count(side);
        let mut g = CostDigraph::new(n + 1, n);
        let vertex = |b: usize| self.partner(side.other(), b);
        for a in 0..n {
            if self.in_x(side, a) {
                g.add_arc(a, self.successor(side, a).map_or(n, vertex), Weight::ZERO);
                continue;
            }
            let list = self.inst.prefs(side, a);
            let start = self.inst.position(side, a, self.partner(side, a)).expect("complete list") + 1;
            let mut natural = None;
            for &b in &list[start..] {
                if self.in_x(side.other(), b) {
                    if self.successor(side.other(), b) != Some(a) {
                        g.add_arc(a, vertex(b), Weight::ZERO);
                    }
                } else if self.eager(side, b, a) {
                    natural = Some(b);
                    break;
                }
            }
            g.add_arc(a, natural.map_or(n, vertex), Weight::ZERO);
        }
        g
    }

    fn realize(&self, picked: &[AgentRef]) -> Option<Vec<Action>> {
        if !self.consistent(picked) {
            return None;
        }
        let routes = [Side::Man, Side::Woman].map(|side| {
            let g = self.graph(side);
            min_anti_arborescence(&g).map(|t| t.arcs.iter().map(|&i| (g.arcs[i].from, g.arcs[i].to)).collect::<Vec<_>>())
        });
        let [Some(men_routes), Some(women_routes)] = routes else { return None };
        let actions = picked
            .iter()
            .map(|a| {
                let (side, x) = (a.side, a.index);
                let own = self.partner(side, x);
                // Agents of the other side routed into this agent's pair come first.
                let into = if side == Side::Man { &women_routes } else { &men_routes };
                let mut list: Vec<usize> = into.iter().filter(|&&(_, to)| to == own).map(|&(from, _)| from).collect();
                list.sort_unstable();
                list.push(own);
                list.extend(self.successor(side, x));
                let rest: Vec<usize> =
                    self.inst.prefs(side, x).iter().copied().filter(|b| !list.contains(b)).collect();
                list.extend(rest);
                Action::Reorder { agent: *a, list }
            })
            .collect();
        Some(actions)
    }
}
