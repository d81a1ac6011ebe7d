//! Stability machinery: blocking pairs, Gale–Shapley, uniqueness and rotations.

use std::collections::VecDeque;

use thiserror::Error;

use crate::model::{AgentRef, Instance, Matching, PresenceMask, Side};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("the matching is not stable")]
    NotStable,
}

/// Blocking pairs `(man, woman)` in ascending order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BlockingPairSet {
    pairs: Vec<(usize, usize)>,
}

impl BlockingPairSet {
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, man: usize, woman: usize) -> bool {
        self.pairs.binary_search(&(man, woman)).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().copied()
    }
}

/// All pairs of present, mutually acceptable agents that would rather be together.
pub fn blocking_pairs(inst: &Instance, mask: &PresenceMask, m: &Matching) -> BlockingPairSet {
    let mut pairs = Vec::new();
    for man in mask.present(Side::Man) {
        let wife = m.wife(man);
        for &woman in inst.prefs(Side::Man, man) {
            if Some(woman) == wife {
                break;
            }
            if mask.contains(Side::Woman, woman) && inst.prefers(Side::Woman, woman, man, m.husband(woman)) {
                pairs.push((man, woman));
            }
        }
    }
    BlockingPairSet { pairs }
}

pub fn is_stable(inst: &Instance, mask: &PresenceMask, m: &Matching) -> bool {
    first_blocking_pair(inst, mask, m).is_none()
}

pub(crate) fn first_blocking_pair(inst: &Instance, mask: &PresenceMask, m: &Matching) -> Option<(usize, usize)> {
    for man in mask.present(Side::Man) {
        let wife = m.wife(man);
        for &woman in inst.prefs(Side::Man, man) {
            if Some(woman) == wife {
                break;
            }
            if mask.contains(Side::Woman, woman) && inst.prefers(Side::Woman, woman, man, m.husband(woman)) {
                return Some((man, woman));
            }
        }
    }
    None
}

/// Proposer-optimal stable matching among present agents.
///
/// Free proposers are served from a queue in ascending index order.
pub fn gale_shapley(inst: &Instance, mask: &PresenceMask, proposing: Side) -> Matching {
    propose(inst, mask, proposing, |_, _| true)
}

/// Gale–Shapley restricted to pairs `(man, woman)` accepted by `allowed`.
pub(crate) fn propose(
    inst: &Instance,
    mask: &PresenceMask,
    proposing: Side,
    allowed: impl Fn(usize, usize) -> bool,
) -> Matching {
    let receiving = proposing.other();
    let pair = |p: usize, r: usize| match proposing {
        Side::Man => (p, r),
        Side::Woman => (r, p),
    };
    let mut next = vec![0usize; inst.count(proposing)];
    let mut holder: Vec<Option<usize>> = vec![None; inst.count(receiving)];
    let mut free: VecDeque<usize> = mask.present(proposing).collect();

    while let Some(p) = free.pop_front() {
        let list = inst.prefs(proposing, p);
        while next[p] < list.len() {
            let r = list[next[p]];
            next[p] += 1;
            let (a, b) = pair(p, r);
            if !mask.contains(receiving, r) || !allowed(a, b) {
                continue;
            }
            match holder[r] {
                None => {
                    holder[r] = Some(p);
                    break;
                }
                Some(h) if inst.prefers(receiving, r, p, Some(h)) => {
                    holder[r] = Some(p);
                    free.push_back(h);
                    break;
                }
                Some(_) => {}
            }
        }
    }

    let mut m = Matching::for_instance(inst);
    for (r, h) in holder.iter().enumerate() {
        if let Some(p) = *h {
            let (a, b) = pair(p, r);
            m.set(a, b);
        }
    }
    m
}

/// Whether `m` is the only stable matching of the present agents.
pub fn is_unique_stable(inst: &Instance, mask: &PresenceMask, m: &Matching) -> bool {
    m.validate(inst, mask).is_ok()
        && is_stable(inst, mask, m)
        && gale_shapley(inst, mask, Side::Man) == *m
        && gale_shapley(inst, mask, Side::Woman) == *m
}

/// Rotation successors of every agent on one side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuccessorMap {
    pub side: Side,
    /// Indexed by agent; `None` for unassigned agents and agents without a successor.
    pub successor: Vec<Option<usize>>,
}

impl SuccessorMap {
    pub fn get(&self, agent: usize) -> Option<usize> {
        self.successor[agent]
    }
}

/// The first agent after `a`'s partner in `a`'s list who prefers `a` to their own partner.
pub(crate) fn successor_of(inst: &Instance, mask: &PresenceMask, m: &Matching, side: Side, a: usize) -> Option<usize> {
    let partner = m.partner(side, a)?;
    let list = inst.prefs(side, a);
    let start = inst.position(side, a, partner)? + 1;
    list[start..]
        .iter()
        .copied()
        .find(|&b| mask.contains(side.other(), b) && inst.prefers(side.other(), b, a, m.partner(side.other(), b)))
}

pub fn rotation_successors(
    inst: &Instance,
    mask: &PresenceMask,
    m: &Matching,
    side: Side,
) -> Result<SuccessorMap, EngineError> {
    if !is_stable(inst, mask, m) {
        return Err(EngineError::NotStable);
    }
    let successor = (0..inst.count(side))
        .map(|a| if mask.contains(side, a) { successor_of(inst, mask, m, side, a) } else { None })
        .collect();
    Ok(SuccessorMap { side, successor })
}

/// An exposed rotation on `side` as `(agent, partner)` pairs, if one exists.
///
/// Consecutive entries satisfy: the successor of entry `k`'s agent is the
/// partner in entry `k + 1` (cyclically). The cycle found by walking from the
/// lowest-index agent is returned, starting at its lowest-index agent.
pub fn exposed_rotation(
    inst: &Instance,
    mask: &PresenceMask,
    m: &Matching,
    side: Side,
) -> Result<Option<Vec<(usize, usize)>>, EngineError> {
    let succ = rotation_successors(inst, mask, m, side)?;
    let other = side.other();
    // Arc a -> partner of a's successor; `None` plays the role of the sink.
    let next = |a: usize| succ.get(a).and_then(|s| m.partner(other, s));
    let n = inst.count(side);
    // 0 = unvisited, 1 = on the current walk, 2 = finished.
    let mut state = vec![0u8; n];
    for start in 0..n {
        if state[start] != 0 || m.partner(side, start).is_none() {
            continue;
        }
        let mut walk = Vec::new();
        let mut cur = Some(start);
        while let Some(a) = cur {
            match state[a] {
                0 => {
                    state[a] = 1;
                    walk.push(a);
                    cur = next(a);
                }
                1 => {
                    let at = walk.iter().position(|&x| x == a).expect("agent on walk");
                    let mut cycle: Vec<usize> = walk[at..].to_vec();
                    let min_at = cycle.iter().enumerate().min_by_key(|(_, &x)| x).map(|(i, _)| i).unwrap_or(0);
                    cycle.rotate_left(min_at);
                    let pairs = cycle.iter().map(|&x| (x, m.partner(side, x).expect("matched"))).collect();
                    return Ok(Some(pairs));
                }
                _ => break,
            }
        }
        for a in walk {
            state[a] = 2;
        }
    }
    Ok(None)
}

/// The pruned sub-instance used to decide whether a pair can be matched stably.
pub(crate) struct PinnedCore {
    /// Men the woman prefers to the pinned man.
    pub u_star: Vec<usize>,
    /// Women the man prefers to the pinned woman.
    pub w_star: Vec<usize>,
    /// Stable matching of the pruned instance without the pinned pair.
    pub matching: Matching,
}

impl PinnedCore {
    /// Agents of `u_star` and `w_star` left single by `matching`.
    pub fn conflicting(&self) -> Vec<AgentRef> {
        let men = self.u_star.iter().filter(|&&m| self.matching.wife(m).is_none()).map(|&m| AgentRef::man(m));
        let women =
            self.w_star.iter().filter(|&&w| self.matching.husband(w).is_none()).map(|&w| AgentRef::woman(w));
        men.chain(women).collect()
    }
}

pub(crate) fn pinned_core(inst: &Instance, mask: &PresenceMask, man: usize, woman: usize) -> PinnedCore {
    let u_star: Vec<usize> = inst
        .prefs(Side::Woman, woman)
        .iter()
        .copied()
        .take_while(|&m| m != man)
        .filter(|&m| mask.contains(Side::Man, m))
        .collect();
    let w_star: Vec<usize> = inst
        .prefs(Side::Man, man)
        .iter()
        .copied()
        .take_while(|&w| w != woman)
        .filter(|&w| mask.contains(Side::Woman, w))
        .collect();
    let mut in_u = vec![false; inst.men_count()];
    let mut in_w = vec![false; inst.women_count()];
    u_star.iter().for_each(|&m| in_u[m] = true);
    w_star.iter().for_each(|&w| in_w[w] = true);

    let pruned = mask.without(AgentRef::man(man)).without(AgentRef::woman(woman));
    let allowed = |m: usize, w: usize| {
        (!in_u[m] || inst.prefers(Side::Man, m, w, Some(woman))) && (!in_w[w] || inst.prefers(Side::Woman, w, m, Some(man)))
    };
    let matching = propose(inst, &pruned, Side::Man, allowed);
    PinnedCore { u_star, w_star, matching }
}

/// Whether `(man, woman)` belongs to at least one stable matching of the present agents.
pub fn stable_pair(inst: &Instance, mask: &PresenceMask, man: usize, woman: usize) -> bool {
    mask.contains(Side::Man, man)
        && mask.contains(Side::Woman, woman)
        && inst.acceptable(man, woman)
        && pinned_core(inst, mask, man, woman).conflicting().is_empty()
}

/// A stable matching containing `(man, woman)`, if one exists.
pub fn stable_matching_with(inst: &Instance, mask: &PresenceMask, man: usize, woman: usize) -> Option<Matching> {
    if !(mask.contains(Side::Man, man) && mask.contains(Side::Woman, woman) && inst.acceptable(man, woman)) {
        return None;
    }
    let core = pinned_core(inst, mask, man, woman);
    if !core.conflicting().is_empty() {
        return None;
    }
    let mut m = core.matching;
    m.set(man, woman);
    Some(m)
}
