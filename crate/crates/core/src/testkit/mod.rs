//! Brute-force oracles, reduction gadgets with known answers, seeded random
//! instances and the benchmark protocol.

mod bench;
mod enumerate;
mod gadgets;
mod oracle;
pub mod properties;
pub mod random;
pub mod rng;
mod sweep;

use thiserror::Error;

use crate::model::{ActionKind, Instance};
use crate::solvers::{Budget, Goal, SolveRequest, Target};

pub use bench::{run_bench, BenchReport, BenchRow, BenchSummary};
pub use enumerate::{enumerate_stable, is_stable_by_definition};
pub use gadgets::{
    clique_forward_actions, dummy_block, gadget_clique_accdel_reorder, gadget_clique_add, gadget_hs_add,
    gadget_hs_reorder, gadget_is_delete, hs_forward_actions,
};
pub use oracle::oracle_min_manipulation;
pub use sweep::{agrees, oracle_sweep, SweepReport, EXACT_SOLVERS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GadgetInputError {
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("element {0} outside the universe")]
    ElementOutOfRange(usize),
    #[error("set {0} is empty")]
    EmptySet(usize),
    #[error("parameter out of range: {0}")]
    Parameter(String),
}

/// Undirected simple graph on vertices `0..vertex_count`; edges stored as `(u, v)` with `u < v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleGraph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
}

impl SimpleGraph {
    pub fn new(vertex_count: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, GadgetInputError> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for (a, b) in edges {
            if a >= vertex_count || b >= vertex_count {
                return Err(GadgetInputError::VertexOutOfRange(a.max(b)));
            }
            if a == b {
                return Err(GadgetInputError::SelfLoop(a));
            }
            let e = (a.min(b), a.max(b));
            if out.contains(&e) {
                return Err(GadgetInputError::DuplicateEdge(e.0, e.1));
            }
            out.push(e);
        }
        Ok(SimpleGraph { vertex_count, edges: out })
    }

    pub fn complete(n: usize) -> Self {
        SimpleGraph::new(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).expect("valid")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Edges in insertion order; this order numbers the edge gadgets.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    /// Indices of the edges at `v`, in edge order.
    pub fn incident(&self, v: usize) -> Vec<usize> {
        (0..self.edges.len()).filter(|&i| self.edges[i].0 == v || self.edges[i].1 == v).collect()
    }

    /// Neighbours of `v` in ascending order.
    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        (0..self.vertex_count).filter(|&u| u != v && self.adjacent(u, v)).collect()
    }

    /// Some `k` pairwise adjacent vertices, lexicographically first.
    pub fn find_clique(&self, k: usize) -> Option<Vec<usize>> {
        self.find_subset(k, true)
    }

    /// Some `k` pairwise non-adjacent vertices, lexicographically first.
    pub fn find_independent_set(&self, k: usize) -> Option<Vec<usize>> {
        self.find_subset(k, false)
    }

    fn find_subset(&self, k: usize, adjacent: bool) -> Option<Vec<usize>> {
        let mut found = None;
        crate::combinatorics::for_each_subset(self.vertex_count, k, &mut |s| {
            let ok = s.iter().enumerate().all(|(i, &u)| s[i + 1..].iter().all(|&v| self.adjacent(u, v) == adjacent));
            if ok {
                found = Some(s.to_vec());
            }
            !ok
        });
        found
    }
}

/// Family of nonempty subsets of the universe `0..universe_size`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetSystem {
    universe_size: usize,
    sets: Vec<Vec<usize>>,
}

impl SetSystem {
    pub fn new(universe_size: usize, sets: Vec<Vec<usize>>) -> Result<Self, GadgetInputError> {
        let mut out = Vec::with_capacity(sets.len());
        for (i, mut s) in sets.into_iter().enumerate() {
            if s.is_empty() {
                return Err(GadgetInputError::EmptySet(i));
            }
            if let Some(&z) = s.iter().find(|&&z| z >= universe_size) {
                return Err(GadgetInputError::ElementOutOfRange(z));
            }
            s.sort_unstable();
            s.dedup();
            out.push(s);
        }
        Ok(SetSystem { universe_size, sets: out })
    }

    pub fn universe_size(&self) -> usize {
        self.universe_size
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    /// Indices of the sets containing `z`.
    pub fn containing(&self, z: usize) -> Vec<usize> {
        (0..self.sets.len()).filter(|&i| self.sets[i].contains(&z)).collect()
    }

    /// Some hitting set of size at most `k`, smallest first.
    pub fn find_hitting_set(&self, k: usize) -> Option<Vec<usize>> {
        (0..=k.min(self.universe_size)).find_map(|size| {
            let mut found = None;
            crate::combinatorics::for_each_subset(self.universe_size, size, &mut |h| {
                let hits = self.sets.iter().all(|s| s.iter().any(|z| h.contains(z)));
                if hits {
                    found = Some(h.to_vec());
                }
                !hits
            });
            found
        })
    }
}

/// A reduction instance together with the goal it was built for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetOutput {
    pub instance: Instance,
    pub goal: Goal,
    pub target: Target,
    pub budget: Budget,
    /// Which construction and parameters produced the instance.
    pub note: String,
}

impl GadgetOutput {
    pub fn request(&self, action: ActionKind) -> SolveRequest {
        SolveRequest::new(self.instance.clone(), self.goal, action, self.budget, self.target.clone())
    }
}
