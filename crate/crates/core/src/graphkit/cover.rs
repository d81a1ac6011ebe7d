use std::collections::VecDeque;

/// Bipartite graph with vertices `0..left_count` and `0..right_count`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BipartiteGraph {
    pub left_count: usize,
    pub right_count: usize,
    pub edges: Vec<(usize, usize)>,
}

impl BipartiteGraph {
    pub fn new(left_count: usize, right_count: usize, edges: Vec<(usize, usize)>) -> Self {
        assert!(edges.iter().all(|&(l, r)| l < left_count && r < right_count), "edge endpoint out of range");
        BipartiteGraph { left_count, right_count, edges }
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.left_count];
        for &(l, r) in &self.edges {
            adj[l].push(r);
        }
        adj
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VertexCover {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

impl VertexCover {
    pub fn len(&self) -> usize {
        self.left.len() + self.right.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

const FREE: usize = usize::MAX;

struct HopcroftKarp {
    adj: Vec<Vec<usize>>,
    mate_l: Vec<usize>,
    mate_r: Vec<usize>,
    dist: Vec<usize>,
}

impl HopcroftKarp {
    fn run(g: &BipartiteGraph) -> Self {
        let mut hk = HopcroftKarp {
            adj: g.adjacency(),
            mate_l: vec![FREE; g.left_count],
            mate_r: vec![FREE; g.right_count],
            dist: vec![0; g.left_count],
        };
        while hk.bfs() {
            for l in 0..g.left_count {
                if hk.mate_l[l] == FREE {
                    hk.dfs(l);
                }
            }
        }
        hk
    }

    fn bfs(&mut self) -> bool {
        let mut queue = VecDeque::new();
        for l in 0..self.adj.len() {
            if self.mate_l[l] == FREE {
                self.dist[l] = 0;
                queue.push_back(l);
            } else {
                self.dist[l] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(l) = queue.pop_front() {
            for &r in &self.adj[l] {
                match self.mate_r[r] {
                    FREE => found = true,
                    l2 if self.dist[l2] == usize::MAX => {
                        self.dist[l2] = self.dist[l] + 1;
                        queue.push_back(l2);
                    }
                    _ => {}
                }
            }
        }
        found
    }

    fn dfs(&mut self, l: usize) -> bool {
        for i in 0..self.adj[l].len() {
            let r = self.adj[l][i];
            let next = self.mate_r[r];
            if next == FREE || (self.dist[next] == self.dist[l] + 1 && self.dfs(next)) {
                self.mate_l[l] = r;
                self.mate_r[r] = l;
                return true;
            }
        }
        self.dist[l] = usize::MAX;
        false
    }
}

/// Maximum matching by Hopcroft–Karp, as `(left, right)` pairs.
pub fn maximum_matching(g: &BipartiteGraph) -> Vec<(usize, usize)> {
    let hk = HopcroftKarp::run(g);
    hk.mate_l.iter().enumerate().filter(|(_, &r)| r != FREE).map(|(l, &r)| (l, r)).collect()
}

/// Minimum vertex cover via König's theorem on a Hopcroft–Karp matching.
pub fn bipartite_min_vertex_cover(g: &BipartiteGraph) -> VertexCover {
    let hk = HopcroftKarp::run(g);
    // Alternating reachability from free left vertices.
    let mut seen_l = vec![false; g.left_count];
    let mut seen_r = vec![false; g.right_count];
    let mut queue: VecDeque<usize> = (0..g.left_count).filter(|&l| hk.mate_l[l] == FREE).collect();
    queue.iter().for_each(|&l| seen_l[l] = true);
    while let Some(l) = queue.pop_front() {
        for &r in &hk.adj[l] {
            if !seen_r[r] && hk.mate_l[l] != r {
                seen_r[r] = true;
                let l2 = hk.mate_r[r];
                if l2 != FREE && !seen_l[l2] {
                    seen_l[l2] = true;
                    queue.push_back(l2);
                }
            }
        }
    }
    VertexCover {
        left: (0..g.left_count).filter(|&l| !seen_l[l]).collect(),
        right: (0..g.right_count).filter(|&r| seen_r[r]).collect(),
    }
}
