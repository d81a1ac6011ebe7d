//! The random-instance experiment: solve many uniform instances per size
//! and summarise cost relative to the number of agents per side.

use super::random::{random_complete_instance, random_perfect_matching};
use super::rng::SplitMix64;
use crate::model::ActionKind;
use crate::solvers::{solve, Algo, Budget, Caps, Goal, SolveError, SolveRequest, Status, Target};

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub n: usize,
    pub rep: usize,
    pub seed: u64,
    pub status: Status,
    pub cost: Option<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchSummary {
    pub n: usize,
    pub solved: usize,
    pub mean_cost: f64,
    pub median_cost: f64,
    /// Median cost divided by `n`.
    pub median_fraction: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    pub summaries: Vec<BenchSummary>,
}

/// Runs `reps` instances for each size in `n_list`.
///
/// Instance seeds are drawn in order from `SplitMix64::new(seed)`; each
/// instance and its target (a uniform pair, or a uniform complete matching
/// for the exact goals) come from a generator seeded with its own seed.
pub fn run_bench(
    goal: Goal,
    action: ActionKind,
    n_list: &[usize],
    reps: usize,
    seed: u64,
    budget: Budget,
) -> Result<BenchReport, SolveError> {
    let mut master = SplitMix64::new(seed);
    let mut rows = Vec::new();
    let mut summaries = Vec::new();
    for &n in n_list {
        let mut costs = Vec::new();
        for rep in 0..reps {
            let instance_seed = master.next_u64();
            let mut rng = SplitMix64::new(instance_seed);
            let instance = random_complete_instance(n, &mut rng);
            let target = match goal {
                Goal::ConstEx | Goal::DestEx => {
                    Target::Pair { man: rng.below(n as u64) as usize, woman: rng.below(n as u64) as usize }
                }
                Goal::ExactEx | Goal::ExactUni => Target::Matching(random_perfect_matching(n, &mut rng)),
            };
            let req = SolveRequest::new(instance, goal, action, budget, target);
            let result = solve(&req, Algo::Auto, Caps::from_env())?;
            if let Some(c) = result.cost {
                costs.push(c);
            }
            rows.push(BenchRow { n, rep, seed: instance_seed, status: result.status, cost: result.cost });
        }
        summaries.push(summarize(n, costs));
    }
    Ok(BenchReport { rows, summaries })
}

fn summarize(n: usize, mut costs: Vec<usize>) -> BenchSummary {
    costs.sort_unstable();
    let solved = costs.len();
    let mean_cost = if solved == 0 { 0.0 } else { costs.iter().sum::<usize>() as f64 / solved as f64 };
    let median_cost = match solved {
        0 => 0.0,
        s if s % 2 == 1 => costs[s / 2] as f64,
        s => (costs[s / 2 - 1] + costs[s / 2]) as f64 / 2.0,
    };
    let median_fraction = if n == 0 { 0.0 } else { median_cost / n as f64 };
    BenchSummary { n, solved, mean_cost, median_cost, median_fraction }
}
