//! Instances, presence masks, matchings and manipulative actions.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// Which side of the market an agent belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Man,
    Woman,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Man => Side::Woman,
            Side::Woman => Side::Man,
        }
    }

    #[inline]
    pub(crate) fn idx(self) -> usize {
        match self {
            Side::Man => 0,
            Side::Woman => 1,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Man => "man",
            Side::Woman => "woman",
        })
    }
}

/// A 0-based reference to one agent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AgentRef {
    pub side: Side,
    pub index: usize,
}

impl AgentRef {
    pub fn new(side: Side, index: usize) -> Self {
        AgentRef { side, index }
    }

    pub fn man(index: usize) -> Self {
        AgentRef::new(Side::Man, index)
    }

    pub fn woman(index: usize) -> Self {
        AgentRef::new(Side::Woman, index)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("{side} {agent} lists index {entry}, but the other side has only {count} agents")]
    OutOfRange {
        side: Side,
        agent: usize,
        entry: usize,
        count: usize,
    },
    #[error("{side} {agent} lists {entry} more than once")]
    DuplicateEntry { side: Side, agent: usize, entry: usize },
    #[error("man {man} and woman {woman} are not mutually acceptable")]
    NotMutual { man: usize, woman: usize },
    #[error("addable {side} {agent} does not exist")]
    UnknownAddable { side: Side, agent: usize },
    #[error("expected {expected} labels for the {side} side, got {got}")]
    LabelCount { side: Side, expected: usize, got: usize },
    #[error("label `{0}` is used more than once")]
    DuplicateLabel(String),
    #[error("label `{0}` is not a valid agent name")]
    InvalidLabel(String),
    #[error("matching pairs ({man}, {woman}) reuse an agent or leave the index range")]
    BadPair { man: usize, woman: usize },
    #[error("matched pair ({man}, {woman}) is not mutually acceptable")]
    UnacceptablePair { man: usize, woman: usize },
    #[error("matched agent {0:?} is not present")]
    AbsentPartner(AgentRef),
}

const ABSENT: u32 = u32::MAX;

/// A Stable Marriage instance with possibly incomplete, strictly ordered lists.
///
/// Men and women are numbered from 0 on each side. Lists hold indices into the
/// opposite side. Acceptability is always mutual.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Instance {
    prefs: [Vec<Vec<usize>>; 2],
    ranks: [Vec<Vec<u32>>; 2],
    addable: [BTreeSet<usize>; 2],
    labels: [Vec<String>; 2],
}

pub(crate) fn valid_name(name: &str) -> bool {
    !name.is_empty()
        && name
            .bytes()
            .all(|b| b.is_ascii_alphanumeric() || matches!(b, b'_' | b'.' | b'-'))
}

fn rank_row(list: &[usize], other_count: usize) -> Vec<u32> {
    let mut row = vec![ABSENT; other_count];
    for (pos, &j) in list.iter().enumerate() {
        row[j] = pos as u32;
    }
    row
}

impl Instance {
    /// Builds and validates an instance with default labels `m1..`, `w1..`.
    pub fn new(men_prefs: Vec<Vec<usize>>, women_prefs: Vec<Vec<usize>>) -> Result<Self, ModelError> {
        let counts = [men_prefs.len(), women_prefs.len()];
        let prefs = [men_prefs, women_prefs];
        for side in [Side::Man, Side::Woman] {
            let other = counts[side.other().idx()];
            for (agent, list) in prefs[side.idx()].iter().enumerate() {
                let mut seen = vec![false; other];
                for &entry in list {
                    if entry >= other {
                        return Err(ModelError::OutOfRange { side, agent, entry, count: other });
                    }
                    if std::mem::replace(&mut seen[entry], true) {
                        return Err(ModelError::DuplicateEntry { side, agent, entry });
                    }
                }
            }
        }
        let ranks = [
            prefs[0].iter().map(|l| rank_row(l, counts[1])).collect::<Vec<_>>(),
            prefs[1].iter().map(|l| rank_row(l, counts[0])).collect::<Vec<_>>(),
        ];
        for (man, row) in ranks[0].iter().enumerate() {
            for (woman, &rank) in row.iter().enumerate() {
                if (rank == ABSENT) != (ranks[1][woman][man] == ABSENT) {
                    return Err(ModelError::NotMutual { man, woman });
                }
            }
        }
        let labels = [
            (1..=counts[0]).map(|i| format!("m{i}")).collect(),
            (1..=counts[1]).map(|i| format!("w{i}")).collect(),
        ];
        Ok(Instance { prefs, ranks, addable: [BTreeSet::new(), BTreeSet::new()], labels })
    }

    /// Complete instance from full permutation lists; panics on invalid input.
    pub fn complete(men_prefs: Vec<Vec<usize>>, women_prefs: Vec<Vec<usize>>) -> Self {
        let inst = Instance::new(men_prefs, women_prefs).expect("invalid preference lists");
        assert!(inst.is_complete(), "lists are not complete");
        inst
    }

    pub fn with_addable(
        mut self,
        men: impl IntoIterator<Item = usize>,
        women: impl IntoIterator<Item = usize>,
    ) -> Result<Self, ModelError> {
        for (side, set) in [(Side::Man, men.into_iter().collect::<BTreeSet<_>>()), (Side::Woman, women.into_iter().collect())] {
            if let Some(&agent) = set.iter().find(|&&a| a >= self.count(side)) {
                return Err(ModelError::UnknownAddable { side, agent });
            }
            self.addable[side.idx()] = set;
        }
        Ok(self)
    }

    pub fn with_labels(mut self, men: Vec<String>, women: Vec<String>) -> Result<Self, ModelError> {
        for (side, labels) in [(Side::Man, &men), (Side::Woman, &women)] {
            if labels.len() != self.count(side) {
                return Err(ModelError::LabelCount { side, expected: self.count(side), got: labels.len() });
            }
        }
        let mut seen = BTreeSet::new();
        for l in men.iter().chain(women.iter()) {
            if !valid_name(l) {
                return Err(ModelError::InvalidLabel(l.clone()));
            }
            if !seen.insert(l.as_str()) {
                return Err(ModelError::DuplicateLabel(l.clone()));
            }
        }
        self.labels = [men, women];
        Ok(self)
    }

    pub fn men_count(&self) -> usize {
        self.prefs[0].len()
    }

    pub fn women_count(&self) -> usize {
        self.prefs[1].len()
    }

    pub fn count(&self, side: Side) -> usize {
        self.prefs[side.idx()].len()
    }

    /// Preference list of one agent, best first.
    pub fn prefs(&self, side: Side, agent: usize) -> &[usize] {
        &self.prefs[side.idx()][agent]
    }

    pub fn addable(&self, side: Side) -> &BTreeSet<usize> {
        &self.addable[side.idx()]
    }

    pub fn is_addable(&self, a: AgentRef) -> bool {
        self.addable[a.side.idx()].contains(&a.index)
    }

    pub fn label(&self, a: AgentRef) -> &str {
        &self.labels[a.side.idx()][a.index]
    }

    pub fn labels(&self, side: Side) -> &[String] {
        &self.labels[side.idx()]
    }

    pub fn find_label(&self, name: &str) -> Option<AgentRef> {
        [Side::Man, Side::Woman].into_iter().find_map(|side| {
            self.labels[side.idx()].iter().position(|l| l == name).map(|i| AgentRef::new(side, i))
        })
    }

    /// 0-based position of `other` in the list of `agent` on `side`.
    #[inline]
    pub fn position(&self, side: Side, agent: usize, other: usize) -> Option<usize> {
        match self.ranks[side.idx()][agent][other] {
            ABSENT => None,
            r => Some(r as usize),
        }
    }

    /// Whether `agent` strictly prefers `a` to `b`, where `None` means staying single.
    #[inline]
    pub fn prefers(&self, side: Side, agent: usize, a: usize, b: Option<usize>) -> bool {
        let row = &self.ranks[side.idx()][agent];
        let ra = row[a];
        ra != ABSENT && b.map_or(true, |b| ra < row[b])
    }

    #[inline]
    pub fn acceptable(&self, man: usize, woman: usize) -> bool {
        self.ranks[0][man][woman] != ABSENT
    }

    /// 1-based rank of `b` in `a`'s list, `None` if `b` is not acceptable to `a`.
    pub fn rank(&self, a: AgentRef, b: AgentRef) -> Result<Option<usize>, SameSideQuery> {
        if a.side == b.side {
            return Err(SameSideQuery(a, b));
        }
        Ok(self.position(a.side, a.index, b.index).map(|p| p + 1))
    }

    /// Equal side sizes and every list a full permutation of the other side.
    pub fn is_complete(&self) -> bool {
        let n = self.men_count();
        n == self.women_count() && self.prefs.iter().flatten().all(|l| l.len() == n)
    }

    pub(crate) fn replace_list(&mut self, side: Side, agent: usize, list: Vec<usize>) {
        let other = self.count(side.other());
        self.ranks[side.idx()][agent] = rank_row(&list, other);
        self.prefs[side.idx()][agent] = list;
    }

    pub(crate) fn remove_pair(&mut self, man: usize, woman: usize) {
        let ml: Vec<usize> = self.prefs[0][man].iter().copied().filter(|&w| w != woman).collect();
        let wl: Vec<usize> = self.prefs[1][woman].iter().copied().filter(|&m| m != man).collect();
        self.replace_list(Side::Man, man, ml);
        self.replace_list(Side::Woman, woman, wl);
    }

    /// Replaces one list by a permutation of itself.
    pub fn with_reordered(&self, side: Side, agent: usize, list: Vec<usize>) -> Instance {
        let mut next = self.clone();
        next.replace_list(side, agent, list);
        next
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("rank query between same-side agents {0:?} and {1:?}")]
pub struct SameSideQuery(pub AgentRef, pub AgentRef);

/// Which agents currently take part in the instance.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PresenceMask {
    present: [Vec<bool>; 2],
}

impl PresenceMask {
    /// Original agents present, addable agents absent.
    pub fn initial(inst: &Instance) -> Self {
        let side_mask = |side: Side| (0..inst.count(side)).map(|i| !inst.addable(side).contains(&i)).collect();
        PresenceMask { present: [side_mask(Side::Man), side_mask(Side::Woman)] }
    }

    pub fn all(inst: &Instance) -> Self {
        PresenceMask { present: [vec![true; inst.men_count()], vec![true; inst.women_count()]] }
    }

    #[inline]
    pub fn contains(&self, side: Side, agent: usize) -> bool {
        self.present[side.idx()][agent]
    }

    pub fn is_present(&self, a: AgentRef) -> bool {
        self.contains(a.side, a.index)
    }

    pub fn set(&mut self, a: AgentRef, present: bool) {
        self.present[a.side.idx()][a.index] = present;
    }

    pub fn without(&self, a: AgentRef) -> Self {
        let mut next = self.clone();
        next.set(a, false);
        next
    }

    pub fn present(&self, side: Side) -> impl Iterator<Item = usize> + '_ {
        self.present[side.idx()].iter().enumerate().filter(|(_, &p)| p).map(|(i, _)| i)
    }

    pub fn absent(&self, side: Side) -> impl Iterator<Item = usize> + '_ {
        self.present[side.idx()].iter().enumerate().filter(|(_, &p)| !p).map(|(i, _)| i)
    }
}

/// A partial one-to-one assignment between men and women.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matching {
    partner: [Vec<Option<usize>>; 2],
}

impl Matching {
    pub fn empty(men: usize, women: usize) -> Self {
        Matching { partner: [vec![None; men], vec![None; women]] }
    }

    pub fn for_instance(inst: &Instance) -> Self {
        Matching::empty(inst.men_count(), inst.women_count())
    }

    pub fn from_pairs(
        men: usize,
        women: usize,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, ModelError> {
        let mut m = Matching::empty(men, women);
        for (man, woman) in pairs {
            if man >= men || woman >= women || m.partner[0][man].is_some() || m.partner[1][woman].is_some() {
                return Err(ModelError::BadPair { man, woman });
            }
            m.set(man, woman);
        }
        Ok(m)
    }

    pub fn men_count(&self) -> usize {
        self.partner[0].len()
    }

    pub fn women_count(&self) -> usize {
        self.partner[1].len()
    }

    #[inline]
    pub fn partner(&self, side: Side, agent: usize) -> Option<usize> {
        self.partner[side.idx()][agent]
    }

    pub fn wife(&self, man: usize) -> Option<usize> {
        self.partner[0][man]
    }

    pub fn husband(&self, woman: usize) -> Option<usize> {
        self.partner[1][woman]
    }

    pub fn contains(&self, man: usize, woman: usize) -> bool {
        self.partner[0][man] == Some(woman)
    }

    /// Pairs `(man, woman)` in ascending man order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.partner[0].iter().enumerate().filter_map(|(m, w)| w.map(|w| (m, w)))
    }

    pub fn len(&self) -> usize {
        self.partner[0].iter().filter(|w| w.is_some()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Pairs `man` with `woman`, dropping any previous partners of either.
    pub fn set(&mut self, man: usize, woman: usize) {
        if let Some(w) = self.partner[0][man].take() {
            self.partner[1][w] = None;
        }
        if let Some(m) = self.partner[1][woman].take() {
            self.partner[0][m] = None;
        }
        self.partner[0][man] = Some(woman);
        self.partner[1][woman] = Some(man);
    }

    pub fn unset(&mut self, side: Side, agent: usize) {
        if let Some(p) = self.partner[side.idx()][agent].take() {
            self.partner[side.other().idx()][p] = None;
        }
    }

    /// The pairs whose two agents are both present.
    pub fn restrict(&self, mask: &PresenceMask) -> Matching {
        let mut m = Matching::empty(self.men_count(), self.women_count());
        for (a, b) in self.pairs() {
            if mask.contains(Side::Man, a) && mask.contains(Side::Woman, b) {
                m.set(a, b);
            }
        }
        m
    }

    /// Every agent on both sides is matched.
    pub fn is_perfect(&self) -> bool {
        self.partner.iter().flatten().all(Option::is_some)
    }

    /// Checks that all pairs are present and mutually acceptable.
    pub fn validate(&self, inst: &Instance, mask: &PresenceMask) -> Result<(), ModelError> {
        if self.men_count() != inst.men_count() || self.women_count() != inst.women_count() {
            return Err(ModelError::BadPair { man: self.men_count(), woman: self.women_count() });
        }
        for (m, w) in self.pairs() {
            if !inst.acceptable(m, w) {
                return Err(ModelError::UnacceptablePair { man: m, woman: w });
            }
            for a in [AgentRef::man(m), AgentRef::woman(w)] {
                if !mask.is_present(a) {
                    return Err(ModelError::AbsentPartner(a));
                }
            }
        }
        Ok(())
    }
}

/// One atomic manipulative step.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Action {
    /// Exchanges entries `position` and `position + 1` of the agent's list.
    Swap { agent: AgentRef, position: usize },
    /// Replaces the agent's list by `list`, a permutation of it.
    Reorder { agent: AgentRef, list: Vec<usize> },
    AccDelete { man: usize, woman: usize },
    DeleteAgent(AgentRef),
    AddAgent(AgentRef),
}

/// The action type a request is restricted to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ActionKind {
    Swap,
    Reorder,
    AccDelete,
    Delete,
    Add,
}

impl Action {
    pub fn kind(&self) -> ActionKind {
        match self {
            Action::Swap { .. } => ActionKind::Swap,
            Action::Reorder { .. } => ActionKind::Reorder,
            Action::AccDelete { .. } => ActionKind::AccDelete,
            Action::DeleteAgent(_) => ActionKind::Delete,
            Action::AddAgent(_) => ActionKind::Add,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ActionError {
    #[error("agent {0:?} does not exist")]
    UnknownAgent(AgentRef),
    #[error("swap position {position} is invalid for a list of length {len}")]
    BadPosition { position: usize, len: usize },
    #[error("reorder list for {0:?} is not a permutation of the current list")]
    NotPermutation(AgentRef),
    #[error("man {man} and woman {woman} are not mutually acceptable")]
    NotAcceptable { man: usize, woman: usize },
    #[error("agent {0:?} is not present")]
    NotPresent(AgentRef),
    #[error("agent {0:?} is already present")]
    AlreadyPresent(AgentRef),
    #[error("agent {0:?} is not addable")]
    NotAddable(AgentRef),
}

fn check_agent(inst: &Instance, a: AgentRef) -> Result<(), ActionError> {
    if a.index < inst.count(a.side) {
        Ok(())
    } else {
        Err(ActionError::UnknownAgent(a))
    }
}

/// Applies one action, returning the manipulated instance and mask.
///
/// Deleting an agent only clears it from the mask; its list stays stored and
/// its entries in other lists are ignored while it is absent.
pub fn apply_action(
    inst: &Instance,
    mask: &PresenceMask,
    act: &Action,
) -> Result<(Instance, PresenceMask), ActionError> {
    let mut inst = inst.clone();
    let mut mask = mask.clone();
    apply_in_place(&mut inst, &mut mask, act)?;
    Ok((inst, mask))
}

/// Applies a sequence of actions in order.
pub fn apply_actions(
    inst: &Instance,
    mask: &PresenceMask,
    acts: &[Action],
) -> Result<(Instance, PresenceMask), ActionError> {
    let mut inst = inst.clone();
    let mut mask = mask.clone();
    for act in acts {
        apply_in_place(&mut inst, &mut mask, act)?;
    }
    Ok((inst, mask))
}

pub(crate) fn apply_in_place(inst: &mut Instance, mask: &mut PresenceMask, act: &Action) -> Result<(), ActionError> {
    match act {
        Action::Swap { agent, position } => {
            check_agent(inst, *agent)?;
            let mut list = inst.prefs(agent.side, agent.index).to_vec();
            if position + 1 >= list.len() {
                return Err(ActionError::BadPosition { position: *position, len: list.len() });
            }
            list.swap(*position, position + 1);
            inst.replace_list(agent.side, agent.index, list);
        }
        Action::Reorder { agent, list } => {
            check_agent(inst, *agent)?;
            let mut old = inst.prefs(agent.side, agent.index).to_vec();
            let mut new = list.clone();
            old.sort_unstable();
            new.sort_unstable();
            if old != new {
                return Err(ActionError::NotPermutation(*agent));
            }
            inst.replace_list(agent.side, agent.index, list.clone());
        }
        Action::AccDelete { man, woman } => {
            check_agent(inst, AgentRef::man(*man))?;
            check_agent(inst, AgentRef::woman(*woman))?;
            if !inst.acceptable(*man, *woman) {
                return Err(ActionError::NotAcceptable { man: *man, woman: *woman });
            }
            inst.remove_pair(*man, *woman);
        }
        Action::DeleteAgent(a) => {
            check_agent(inst, *a)?;
            if !mask.is_present(*a) {
                return Err(ActionError::NotPresent(*a));
            }
            mask.set(*a, false);
        }
        Action::AddAgent(a) => {
            check_agent(inst, *a)?;
            if mask.is_present(*a) {
                return Err(ActionError::AlreadyPresent(*a));
            }
            if !inst.is_addable(*a) {
                return Err(ActionError::NotAddable(*a));
            }
            mask.set(*a, true);
        }
    }
    Ok(())
}
