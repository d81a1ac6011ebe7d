use smbribe::engine::{
    blocking_pairs, exposed_rotation, gale_shapley, is_stable, is_unique_stable, rotation_successors, stable_matching_with,
    stable_pair,
};
use smbribe::model::{AgentRef, Instance, Matching, PresenceMask, Side};
use smbribe::solvers::Caps;
use smbribe::testkit::random::{random_perfect_matching, random_smi};
use smbribe::testkit::rng::SplitMix64;
use smbribe::testkit::{enumerate_stable, is_stable_by_definition};

fn random_instance(rng: &mut SplitMix64) -> Instance {
    let (men, women) = (1 + rng.below(5) as usize, 1 + rng.below(5) as usize);
    let density = 0.3 + 0.7 * rng.next_f64();
    random_smi(men, women, density, rng)
}

/// Any matching over acceptable pairs, including partial ones.
fn random_matching(inst: &Instance, rng: &mut SplitMix64) -> Matching {
    let mut m = Matching::for_instance(inst);
    for man in 0..inst.men_count() {
        let free: Vec<usize> =
            inst.prefs(Side::Man, man).iter().copied().filter(|&w| m.husband(w).is_none()).collect();
        if !free.is_empty() && rng.below(3) != 0 {
            m.set(man, free[rng.below(free.len() as u64) as usize]);
        }
    }
    m
}

fn random_mask(inst: &Instance, rng: &mut SplitMix64) -> PresenceMask {
    let mut mask = PresenceMask::all(inst);
    for side in [Side::Man, Side::Woman] {
        for a in 0..inst.count(side) {
            if rng.below(5) == 0 {
                mask.set(AgentRef::new(side, a), false);
            }
        }
    }
    mask
}

#[test]
fn blocking_pairs_match_a_definitional_scan() {
    let mut rng = SplitMix64::new(21);
    for _ in 0..2000 {
        let inst = random_instance(&mut rng);
        let mask = random_mask(&inst, &mut rng);
        let m = random_matching(&inst, &mut rng).restrict(&mask);
        let got = blocking_pairs(&inst, &mask, &m);
        let mut want = Vec::new();
        for man in mask.present(Side::Man) {
            for woman in mask.present(Side::Woman) {
                let blocks = inst.acceptable(man, woman)
                    && !m.contains(man, woman)
                    && inst.prefers(Side::Man, man, woman, m.wife(man))
                    && inst.prefers(Side::Woman, woman, man, m.husband(woman));
                if blocks {
                    want.push((man, woman));
                }
            }
        }
        let mut have: Vec<_> = got.iter().collect();
        have.sort_unstable();
        assert_eq!(have, want);
        assert_eq!(is_stable(&inst, &mask, &m), want.is_empty());
        assert_eq!(is_stable_by_definition(&inst, &mask, &m), want.is_empty());
    }
}

#[test]
fn gale_shapley_outputs_are_the_optimal_stable_matchings() {
    let mut rng = SplitMix64::new(22);
    for _ in 0..1000 {
        let inst = random_instance(&mut rng);
        let mask = PresenceMask::initial(&inst);
        let all = enumerate_stable(&inst, &mask, Caps::default()).unwrap();
        for side in [Side::Man, Side::Woman] {
            let gs = gale_shapley(&inst, &mask, side);
            assert!(is_stable_by_definition(&inst, &mask, &gs));
            assert!(all.contains(&gs));
            // Every agent of the proposing side weakly prefers its GS partner.
            for m in &all {
                for a in 0..inst.count(side) {
                    let (mine, theirs) = (gs.partner(side, a), m.partner(side, a));
                    assert!(mine == theirs || inst.prefers(side, a, mine.unwrap(), theirs), "{inst:?}");
                }
            }
        }
        assert_eq!(is_unique_stable(&inst, &mask, &all[0]), all.len() == 1);
    }
}

#[test]
fn gale_shapley_respects_the_mask() {
    let mut rng = SplitMix64::new(23);
    for _ in 0..500 {
        let inst = random_instance(&mut rng);
        let mask = random_mask(&inst, &mut rng);
        let gs = gale_shapley(&inst, &mask, Side::Man);
        assert!(gs.pairs().all(|(m, w)| mask.contains(Side::Man, m) && mask.contains(Side::Woman, w)));
        assert!(is_stable_by_definition(&inst, &mask, &gs));
        assert!(enumerate_stable(&inst, &mask, Caps::default()).unwrap().contains(&gs));
    }
}

#[test]
fn stable_pair_agrees_with_enumeration() {
    let mut rng = SplitMix64::new(24);
    for _ in 0..600 {
        let inst = random_instance(&mut rng);
        let mask = PresenceMask::initial(&inst);
        let all = enumerate_stable(&inst, &mask, Caps::default()).unwrap();
        for man in 0..inst.men_count() {
            for woman in 0..inst.women_count() {
                let expected = all.iter().any(|m| m.contains(man, woman));
                assert_eq!(stable_pair(&inst, &mask, man, woman), expected);
                match stable_matching_with(&inst, &mask, man, woman) {
                    Some(m) => assert!(expected && m.contains(man, woman) && is_stable(&inst, &mask, &m)),
                    None => assert!(!expected),
                }
            }
        }
    }
}

#[test]
fn successors_match_a_definitional_scan() {
    let mut rng = SplitMix64::new(25);
    for _ in 0..600 {
        let inst = random_instance(&mut rng);
        let mask = PresenceMask::initial(&inst);
        for m in enumerate_stable(&inst, &mask, Caps::default()).unwrap() {
            for side in [Side::Man, Side::Woman] {
                let succ = rotation_successors(&inst, &mask, &m, side).unwrap();
                for a in 0..inst.count(side) {
                    let want = m.partner(side, a).and_then(|p| {
                        let list = inst.prefs(side, a);
                        let after = list.iter().position(|&b| b == p).unwrap() + 1;
                        list[after..].iter().copied().find(|&b| {
                            let theirs = m.partner(side.other(), b);
                            inst.prefers(side.other(), b, a, theirs)
                        })
                    });
                    assert_eq!(succ.get(a), want);
                }
                if let Some(rotation) = exposed_rotation(&inst, &mask, &m, side).unwrap() {
                    for (k, &(agent, partner)) in rotation.iter().enumerate() {
                        assert_eq!(m.partner(side, agent), Some(partner));
                        let next = rotation[(k + 1) % rotation.len()].1;
                        assert_eq!(succ.get(agent), Some(next));
                    }
                }
            }
        }
    }
}

#[test]
fn rotations_need_a_stable_matching() {
    let inst = Instance::complete(vec![vec![0, 1], vec![0, 1]], vec![vec![0, 1], vec![0, 1]]);
    let mask = PresenceMask::initial(&inst);
    let unstable = Matching::from_pairs(2, 2, [(0, 1), (1, 0)]).unwrap();
    assert!(!is_stable(&inst, &mask, &unstable));
    assert!(rotation_successors(&inst, &mask, &unstable, Side::Man).is_err());
    assert!(exposed_rotation(&inst, &mask, &unstable, Side::Woman).is_err());
    assert!(!is_unique_stable(&inst, &mask, &unstable));
}

#[test]
fn perfect_matchings_are_stable_iff_no_blocking_pair() {
    let mut rng = SplitMix64::new(26);
    for _ in 0..300 {
        let n = 1 + rng.below(5) as usize;
        let inst = smbribe::testkit::random::random_complete_instance(n, &mut rng);
        let mask = PresenceMask::initial(&inst);
        let m = random_perfect_matching(n, &mut rng);
        let all = enumerate_stable(&inst, &mask, Caps::default()).unwrap();
        assert_eq!(all.contains(&m), blocking_pairs(&inst, &mask, &m).is_empty());
    }
}
