//! Seeded random instances and matchings.
//!
//! Draw order is part of the contract: the same seed gives the same
//! instance on every platform.

use super::rng::SplitMix64;
use crate::model::{Instance, Matching};

/// Complete instance with independent uniform lists: each man's, then each woman's.
pub fn random_complete_instance(n: usize, rng: &mut SplitMix64) -> Instance {
    let men = (0..n).map(|_| rng.permutation(n)).collect();
    let women = (0..n).map(|_| rng.permutation(n)).collect();
    Instance::complete(men, women)
}

/// `random_complete_instance` from a fresh seed, then, when `addable_frac > 0`,
/// one `next_f64() < addable_frac` draw per man and then per woman marking it addable.
pub fn gen_instance(n: usize, seed: u64, addable_frac: f64) -> Instance {
    let mut rng = SplitMix64::new(seed);
    let inst = random_complete_instance(n, &mut rng);
    if addable_frac <= 0.0 {
        return inst;
    }
    let men: Vec<usize> = (0..n).filter(|_| rng.next_f64() < addable_frac).collect();
    let women: Vec<usize> = (0..n).filter(|_| rng.next_f64() < addable_frac).collect();
    inst.with_addable(men, women).expect("indices in range")
}

/// Man `i` is matched to woman `p[i]` for a uniform permutation `p`.
pub fn random_perfect_matching(n: usize, rng: &mut SplitMix64) -> Matching {
    let p = rng.permutation(n);
    Matching::from_pairs(n, n, p.into_iter().enumerate()).expect("a permutation is a matching")
}

/// Instance with incomplete lists: each pair (men outer, women inner) is
/// acceptable with probability `density`; lists are then shuffled, men first.
pub fn random_smi(men: usize, women: usize, density: f64, rng: &mut SplitMix64) -> Instance {
    let accept: Vec<Vec<bool>> = (0..men).map(|_| (0..women).map(|_| rng.next_f64() < density).collect()).collect();
    let men_prefs = (0..men)
        .map(|m| {
            let mut l: Vec<usize> = (0..women).filter(|&w| accept[m][w]).collect();
            rng.shuffle(&mut l);
            l
        })
        .collect();
    let women_prefs = (0..women)
        .map(|w| {
            let mut l: Vec<usize> = (0..men).filter(|&m| accept[m][w]).collect();
            rng.shuffle(&mut l);
            l
        })
        .collect();
    Instance::new(men_prefs, women_prefs).expect("acceptability is mutual by construction")
}
