use crate::model::{Instance, Matching, PresenceMask, Side};
use crate::solvers::{Caps, SolveError};

/// Every stable matching of the present agents, by exhaustive search.
///
/// Men are assigned in index order, each to a free acceptable woman or to
/// nobody; branches already containing a blocking pair among decided agents
/// are cut, and complete assignments are checked pair by pair.
pub fn enumerate_stable(inst: &Instance, mask: &PresenceMask, caps: Caps) -> Result<Vec<Matching>, SolveError> {
    let mut out = Vec::new();
    visit_stable(inst, mask, caps, None, &mut |m| {
        out.push(m.clone());
        true
    })?;
    Ok(out)
}

/// Whether no present, mutually acceptable pair blocks `m`, checked over all pairs.
pub fn is_stable_by_definition(inst: &Instance, mask: &PresenceMask, m: &Matching) -> bool {
    mask.present(Side::Man).all(|man| {
        mask.present(Side::Woman).all(|woman| {
            !(inst.acceptable(man, woman)
                && !m.contains(man, woman)
                && inst.prefers(Side::Man, man, woman, m.wife(man))
                && inst.prefers(Side::Woman, woman, man, m.husband(woman)))
        })
    })
}

/// Calls `f` on each stable matching (containing `forced` when given) until
/// it returns false. Returns whether the search ran to completion.
pub(crate) fn visit_stable(
    inst: &Instance,
    mask: &PresenceMask,
    caps: Caps,
    forced: Option<(usize, usize)>,
    f: &mut dyn FnMut(&Matching) -> bool,
) -> Result<bool, SolveError> {
    let agents = mask.present(Side::Man).count() + mask.present(Side::Woman).count();
    if agents > caps.max_agents {
        return Err(SolveError::TooManyAgents { agents, cap: caps.max_agents });
    }
    let men: Vec<usize> = mask.present(Side::Man).collect();
    let mut search = Search { inst, mask, caps, forced, men: &men, visited: 0, matching: Matching::for_instance(inst) };
    search.run(0, f)
}

struct Search<'a> {
    inst: &'a Instance,
    mask: &'a PresenceMask,
    caps: Caps,
    forced: Option<(usize, usize)>,
    men: &'a [usize],
    visited: u64,
    matching: Matching,
}

impl Search<'_> {
    fn run(&mut self, i: usize, f: &mut dyn FnMut(&Matching) -> bool) -> Result<bool, SolveError> {
        self.visited += 1;
        if self.visited > self.caps.max_states {
            return Err(SolveError::CapExceeded { cap: self.caps.max_states });
        }
        if i == self.men.len() {
            if is_stable_by_definition(self.inst, self.mask, &self.matching) {
                return Ok(f(&self.matching));
            }
            return Ok(true);
        }
        let man = self.men[i];
        let options: Vec<Option<usize>> = match self.forced {
            Some((fm, fw)) if fm == man => vec![Some(fw)],
            _ => self
                .inst
                .prefs(Side::Man, man)
                .iter()
                .copied()
                .filter(|&w| {
                    self.mask.contains(Side::Woman, w)
                        && self.matching.husband(w).is_none()
                        && self.forced.map_or(true, |(_, fw)| fw != w)
                })
                .map(Some)
                .chain([None])
                .collect(),
        };
        for choice in options {
            if let Some(w) = choice {
                if !self.inst.acceptable(man, w) {
                    continue;
                }
                self.matching.set(man, w);
            }
            if self.consistent(i, man) && !self.run(i + 1, f)? {
                return Ok(false);
            }
            self.matching.unset(Side::Man, man);
        }
        Ok(true)
    }

    /// No blocking pair between the newly decided man and women already
    /// taken, nor between his partner and earlier men.
    fn consistent(&self, i: usize, man: usize) -> bool {
        let (inst, m) = (self.inst, &self.matching);
        let wife = m.wife(man);
        let blocked_by_taken = inst.prefs(Side::Man, man).iter().take_while(|&&w| Some(w) != wife).any(|&w| {
            self.mask.contains(Side::Woman, w)
                && m.husband(w).is_some()
                && inst.prefers(Side::Woman, w, man, m.husband(w))
        });
        if blocked_by_taken {
            return false;
        }
        let Some(w) = wife else { return true };
        !self.men[..i].iter().any(|&earlier| {
            inst.acceptable(earlier, w)
                && inst.prefers(Side::Man, earlier, w, m.wife(earlier))
                && inst.prefers(Side::Woman, w, earlier, Some(man))
        })
    }
}
