//! Fixtures shared by the criterion benchmarks.

use smbribe::solvers::{Budget, Goal, SolveRequest, Target};
use smbribe::testkit::random::{random_complete_instance, random_perfect_matching};
use smbribe::testkit::rng::SplitMix64;
use smbribe::ActionKind;

/// A uniform-random complete instance of size `n` with a uniform target for `goal`.
pub fn uniform_request(goal: Goal, action: ActionKind, n: usize, seed: u64) -> SolveRequest {
    let mut rng = SplitMix64::new(seed);
    let instance = random_complete_instance(n, &mut rng);
    let target = match goal {
        Goal::ConstEx | Goal::DestEx => {
            Target::Pair { man: rng.below(n as u64) as usize, woman: rng.below(n as u64) as usize }
        }
        Goal::ExactEx | Goal::ExactUni => Target::Matching(random_perfect_matching(n, &mut rng)),
    };
    SolveRequest::new(instance, goal, action, Budget::Unbounded, target)
}
