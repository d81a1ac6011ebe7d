use std::collections::VecDeque;

use thiserror::Error;

use super::{CostDigraph, Weight};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MinCutError {
    #[error("the graph has no source")]
    MissingSource,
    #[error("source and sink coincide")]
    SourceIsSink,
}

/// A minimum s–t cut: its value and the indices of the cut arcs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cut {
    pub value: Weight,
    pub arcs: Vec<usize>,
    /// Vertices reachable from the source in the final residual graph.
    pub source_side: Vec<bool>,
}

struct Residual {
    head: Vec<usize>,
    cap: Vec<Weight>,
    adj: Vec<Vec<usize>>,
}

impl Residual {
    fn new(g: &CostDigraph) -> Self {
        let mut r = Residual { head: Vec::new(), cap: Vec::new(), adj: vec![Vec::new(); g.vertex_count] };
        for a in &g.arcs {
            // Edge 2i is arc i, edge 2i+1 its reverse.
            r.adj[a.from].push(r.head.len());
            r.head.push(a.to);
            r.cap.push(a.weight);
            r.adj[a.to].push(r.head.len());
            r.head.push(a.from);
            r.cap.push(Weight::ZERO);
        }
        r
    }

    fn levels(&self, s: usize) -> Vec<usize> {
        let mut level = vec![usize::MAX; self.adj.len()];
        level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &e in &self.adj[u] {
                let v = self.head[e];
                if !self.cap[e].is_zero() && level[v] == usize::MAX {
                    level[v] = level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        level
    }

    fn push(&mut self, u: usize, t: usize, limit: Weight, level: &[usize], it: &mut [usize]) -> Weight {
        if u == t {
            return limit;
        }
        while it[u] < self.adj[u].len() {
            let e = self.adj[u][it[u]];
            let v = self.head[e];
            if !self.cap[e].is_zero() && level[v] == level[u] + 1 {
                let sent = self.push(v, t, limit.min(self.cap[e]), level, it);
                if !sent.is_zero() {
                    self.cap[e] = self.cap[e].minus(sent);
                    self.cap[e ^ 1] = self.cap[e ^ 1] + sent;
                    return sent;
                }
            }
            it[u] += 1;
        }
        Weight::ZERO
    }
}

/// Minimum s–t cut by Dinic's max-flow algorithm.
///
/// The returned cut is the one closest to the source. Its value is
/// `Infinite` exactly when some source–sink path uses only infinite arcs.
pub fn min_cut(g: &CostDigraph) -> Result<Cut, MinCutError> {
    let s = g.source.ok_or(MinCutError::MissingSource)?;
    let t = g.sink;
    if s == t {
        return Err(MinCutError::SourceIsSink);
    }
    let mut r = Residual::new(g);
    let mut flow = Weight::ZERO;
    loop {
        let level = r.levels(s);
        if level[t] == usize::MAX {
            break;
        }
        let mut it = vec![0usize; g.vertex_count];
        loop {
            let sent = r.push(s, t, Weight::Infinite, &level, &mut it);
            if sent.is_zero() {
                break;
            }
            flow = flow + sent;
            if sent == Weight::Infinite {
                let source_side = vec![false; g.vertex_count];
                return Ok(Cut { value: Weight::Infinite, arcs: Vec::new(), source_side });
            }
        }
    }
    let level = r.levels(s);
    let source_side: Vec<bool> = level.iter().map(|&l| l != usize::MAX).collect();
    let arcs = g
        .arcs
        .iter()
        .enumerate()
        .filter(|(_, a)| source_side[a.from] && !source_side[a.to])
        .map(|(i, _)| i)
        .collect();
    Ok(Cut { value: flow, arcs, source_side })
}
