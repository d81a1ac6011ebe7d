use super::CostDigraph;

/// A spanning anti-arborescence: every vertex but the sink keeps one out-arc.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AntiArborescence {
    pub weight: u64,
    /// Arc indices into the input graph, one per non-sink vertex, by vertex.
    pub arcs: Vec<usize>,
}

#[derive(Clone, Copy)]
struct Edge {
    // Orientation is reversed: the tree grows out of the root.
    from: usize,
    to: usize,
    weight: u64,
    id: usize,
}

/// Minimum-weight spanning anti-arborescence rooted at the sink (Chu–Liu/Edmonds).
///
/// Infinite arcs are never used. Returns `None` when some vertex cannot reach
/// the sink through finite arcs.
pub fn min_anti_arborescence(g: &CostDigraph) -> Option<AntiArborescence> {
    let edges: Vec<Edge> = g
        .arcs
        .iter()
        .enumerate()
        .filter_map(|(id, a)| a.weight.finite().map(|weight| Edge { from: a.to, to: a.from, weight, id }))
        .collect();
    let chosen = arborescence(g.vertex_count, g.sink, &edges)?;
    let mut arcs: Vec<usize> = chosen.iter().map(|&e| edges[e].id).collect();
    arcs.sort_by_key(|&id| g.arcs[id].from);
    let weight = arcs.iter().map(|&id| g.arcs[id].weight.finite().unwrap_or(0)).sum();
    let out = AntiArborescence { weight, arcs };
    debug_assert!(is_anti_arborescence(g, &out.arcs));
    Some(out)
}

/// Returns indices into `edges` forming a minimum arborescence rooted at `root`.
fn arborescence(n: usize, root: usize, edges: &[Edge]) -> Option<Vec<usize>> {
    // Cheapest entering edge per vertex; ties go to the lowest index.
    let mut best: Vec<Option<usize>> = vec![None; n];
    for (i, e) in edges.iter().enumerate() {
        if e.to != root && e.from != e.to && best[e.to].map_or(true, |b| e.weight < edges[b].weight) {
            best[e.to] = Some(i);
        }
    }
    if (0..n).any(|v| v != root && best[v].is_none()) {
        return None;
    }

    // Label the cycles formed by the chosen edges.
    let mut comp = vec![usize::MAX; n];
    let mut mark = vec![usize::MAX; n];
    let mut comps = 0;
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    for start in 0..n {
        let mut v = start;
        while v != root && mark[v] == usize::MAX && comp[v] == usize::MAX {
            mark[v] = start;
            v = edges[best[v].expect("entering edge")].from;
        }
        if v != root && mark[v] == start && comp[v] == usize::MAX {
            let mut cycle = Vec::new();
            let mut u = v;
            loop {
                comp[u] = comps;
                cycle.push(u);
                u = edges[best[u].expect("entering edge")].from;
                if u == v {
                    break;
                }
            }
            cycles.push(cycle);
            comps += 1;
        }
    }
    if cycles.is_empty() {
        return Some((0..n).filter(|&v| v != root).map(|v| best[v].expect("entering edge")).collect());
    }
    for c in comp.iter_mut() {
        if *c == usize::MAX {
            *c = comps;
            comps += 1;
        }
    }

    // Contract and recurse; `id` of a contracted edge points back into `edges`.
    let contracted: Vec<Edge> = edges
        .iter()
        .enumerate()
        .filter(|(_, e)| comp[e.from] != comp[e.to])
        .map(|(i, e)| {
            let reduce = if cycles.iter().any(|c| comp[c[0]] == comp[e.to]) {
                edges[best[e.to].expect("entering edge")].weight
            } else {
                0
            };
            Edge { from: comp[e.from], to: comp[e.to], weight: e.weight - reduce, id: i }
        })
        .collect();
    let sub = arborescence(comps, comp[root], &contracted)?;

    let mut result: Vec<usize> = sub.iter().map(|&e| contracted[e].id).collect();
    for cycle in &cycles {
        let entered = result.iter().map(|&i| edges[i].to).find(|&v| comp[v] == comp[cycle[0]]).expect("cycle entered");
        result.extend(cycle.iter().filter(|&&v| v != entered).map(|&v| best[v].expect("entering edge")));
    }
    Some(result)
}

/// Every non-sink vertex has exactly one chosen out-arc and reaches the sink.
pub(crate) fn is_anti_arborescence(g: &CostDigraph, arcs: &[usize]) -> bool {
    let mut next = vec![None; g.vertex_count];
    for &i in arcs {
        let a = g.arcs[i];
        if a.from == g.sink || next[a.from].replace(a.to).is_some() {
            return false;
        }
    }
    (0..g.vertex_count).all(|v| {
        let mut cur = v;
        for _ in 0..=g.vertex_count {
            if cur == g.sink {
                return true;
            }
            match next[cur] {
                Some(n) => cur = n,
                None => return false,
            }
        }
        false
    })
}
