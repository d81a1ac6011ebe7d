//! Classical graph engines: s–t minimum cut, bipartite vertex cover and
//! minimum-weight spanning anti-arborescence.

mod arborescence;
mod cover;
mod flow;

use std::fmt;
use std::ops::Add;

pub use arborescence::{min_anti_arborescence, AntiArborescence};
pub use cover::{bipartite_min_vertex_cover, maximum_matching, BipartiteGraph, VertexCover};
pub use flow::{min_cut, Cut, MinCutError};

/// Arc weight; sums saturate at `Infinite`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Weight {
    Finite(u64),
    Infinite,
}

impl Weight {
    pub const ZERO: Weight = Weight::Finite(0);

    pub fn finite(self) -> Option<u64> {
        match self {
            Weight::Finite(w) => Some(w),
            Weight::Infinite => None,
        }
    }

    pub fn is_zero(self) -> bool {
        self == Weight::ZERO
    }

    /// `self - rhs` for `rhs <= self`; infinity absorbs finite subtraction.
    pub(crate) fn minus(self, rhs: Weight) -> Weight {
        match (self, rhs) {
            (Weight::Infinite, Weight::Finite(_)) => Weight::Infinite,
            (Weight::Finite(a), Weight::Finite(b)) => Weight::Finite(a - b),
            (_, Weight::Infinite) => Weight::ZERO,
        }
    }
}

impl Add for Weight {
    type Output = Weight;

    fn add(self, rhs: Weight) -> Weight {
        match (self, rhs) {
            (Weight::Finite(a), Weight::Finite(b)) => a.checked_add(b).map_or(Weight::Infinite, Weight::Finite),
            _ => Weight::Infinite,
        }
    }
}

impl std::iter::Sum for Weight {
    fn sum<I: Iterator<Item = Weight>>(iter: I) -> Weight {
        iter.fold(Weight::ZERO, Add::add)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Weight::Finite(w) => write!(f, "{w}"),
            Weight::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Arc {
    pub from: usize,
    pub to: usize,
    pub weight: Weight,
}

/// Weighted digraph with a distinguished sink and an optional source.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CostDigraph {
    pub vertex_count: usize,
    pub arcs: Vec<Arc>,
    pub source: Option<usize>,
    pub sink: usize,
}

impl CostDigraph {
    pub fn new(vertex_count: usize, sink: usize) -> Self {
        assert!(sink < vertex_count, "sink out of range");
        CostDigraph { vertex_count, arcs: Vec::new(), source: None, sink }
    }

    pub fn with_source(mut self, source: usize) -> Self {
        assert!(source < self.vertex_count, "source out of range");
        self.source = Some(source);
        self
    }

    /// Adds an arc and returns its index.
    pub fn add_arc(&mut self, from: usize, to: usize, weight: Weight) -> usize {
        assert!(from < self.vertex_count && to < self.vertex_count, "arc endpoint out of range");
        assert_ne!(from, to, "self-loops are not allowed");
        self.arcs.push(Arc { from, to, weight });
        self.arcs.len() - 1
    }
}
