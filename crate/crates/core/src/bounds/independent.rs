use crate::graph::{Graph, Vertex};

/// A set of pairwise non-adjacent vertices, sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IndependentSet {
    vertices: Vec<Vertex>,
}

impl IndependentSet {
    /// Validates independence; on failure returns an adjacent (or repeated)
    /// pair.
    pub fn new(g: &Graph, mut vertices: Vec<Vertex>) -> Result<IndependentSet, (Vertex, Vertex)> {
        vertices.sort_unstable();
        for w in vertices.windows(2) {
            if w[0] == w[1] {
                return Err((w[0], w[1]));
            }
        }
        for (i, &u) in vertices.iter().enumerate() {
            for &v in &vertices[i + 1..] {
                if g.has_edge(u, v) {
                    return Err((u, v));
                }
            }
        }
        Ok(IndependentSet { vertices })
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// No vertex outside the set can be added.
    pub fn is_maximal(&self, g: &Graph) -> bool {
        let mut blocked = vec![false; g.vertex_count()];
        for &v in &self.vertices {
            blocked[v] = true;
            for &u in g.neighbors(v) {
                blocked[u] = true;
            }
        }
        blocked.into_iter().all(|b| b)
    }
}

/// Repeatedly takes a vertex of least remaining degree and discards its
/// neighbours. The result is maximal.
pub fn greedy_maximal_independent_set(g: &Graph) -> IndependentSet {
    let n = g.vertex_count();
    let mut alive = vec![true; n];
    let mut degree: Vec<usize> = (0..n).map(|v| g.valence(v)).collect();
    let mut chosen = Vec::new();
    while let Some(v) = (0..n).filter(|&v| alive[v]).min_by_key(|&v| degree[v]) {
        chosen.push(v);
        let mut dead = vec![v];
        dead.extend(g.neighbors(v).iter().copied().filter(|&u| alive[u]));
        for &x in &dead {
            alive[x] = false;
        }
        for &x in &dead {
            for &u in g.neighbors(x) {
                if alive[u] {
                    degree[u] -= 1;
                }
            }
        }
    }
    chosen.sort_unstable();
    IndependentSet { vertices: chosen }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MisStatus {
    Exact,
    /// Node budget ran out; the set is the best found so far.
    LowerBound,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MisResult {
    pub set: IndependentSet,
    pub status: MisStatus,
    pub nodes: u64,
}

impl MisResult {
    pub fn alpha(&self) -> usize {
        self.set.len()
    }

    pub fn is_exact(&self) -> bool {
        self.status == MisStatus::Exact
    }
}

type Bits = Vec<u64>;

fn bit(set: &[u64], v: usize) -> bool {
    set[v / 64] >> (v % 64) & 1 == 1
}

fn clear(set: &mut [u64], v: usize) {
    set[v / 64] &= !(1u64 << (v % 64));
}

fn is_empty(set: &[u64]) -> bool {
    set.iter().all(|&w| w == 0)
}

struct Search {
    order: Vec<Vertex>,
    adj: Vec<Bits>,
    non_adj: Vec<Bits>,
    best: Vec<Vertex>,
    nodes: u64,
    budget: Option<u64>,
    aborted: bool,
}

impl Search {
    /// Partitions `p` into cliques of the graph, greedily in static order.
    /// Returns the vertices grouped by clique with the 1-based clique index
    /// of each; no independent subset of the first `i` entries is larger
    /// than the index of entry `i`.
    fn clique_cover(&self, p: &[u64]) -> Vec<(Vertex, usize)> {
        let mut members: Vec<Vec<Vertex>> = Vec::new();
        let mut common: Vec<Bits> = Vec::new();
        for &v in &self.order {
            if !bit(p, v) {
                continue;
            }
            match common.iter().position(|c| bit(c, v)) {
                Some(k) => {
                    members[k].push(v);
                    for (c, a) in common[k].iter_mut().zip(&self.adj[v]) {
                        *c &= a;
                    }
                }
                None => {
                    members.push(vec![v]);
                    common.push(self.adj[v].clone());
                }
            }
        }
        members
            .into_iter()
            .enumerate()
            .flat_map(|(k, vs)| vs.into_iter().map(move |v| (v, k + 1)))
            .collect()
    }

    fn expand(&mut self, current: &mut Vec<Vertex>, mut p: Bits) {
        self.nodes += 1;
        if self.budget.is_some_and(|b| self.nodes > b) {
            self.aborted = true;
            return;
        }
        let cover = self.clique_cover(&p);
        for &(v, bound) in cover.iter().rev() {
            if current.len() + bound <= self.best.len() {
                return;
            }
            current.push(v);
            let next: Bits = p.iter().zip(&self.non_adj[v]).map(|(a, b)| a & b).collect();
            if is_empty(&next) {
                if current.len() > self.best.len() {
                    self.best = current.clone();
                }
            } else {
                self.expand(current, next);
            }
            current.pop();
            if self.aborted {
                return;
            }
            clear(&mut p, v);
        }
    }
}

/// Maximum independent set by branch and bound.
///
/// Each node takes its candidate vertices from last to first in a greedy
/// clique-cover order; a branch is cut once the chosen vertices plus the
/// number of cliques still available cannot beat the incumbent. The
/// incumbent starts from [`greedy_maximal_independent_set`]. With a node
/// budget the search may stop early and report [`MisStatus::LowerBound`].
pub fn maximum_independent_set(g: &Graph, node_budget: Option<u64>) -> MisResult {
    let n = g.vertex_count();
    let words = n.div_ceil(64).max(1);
    let mut adj = vec![vec![0u64; words]; n];
    for &(u, v) in g.edges() {
        adj[u][v / 64] |= 1 << (v % 64);
        adj[v][u / 64] |= 1 << (u % 64);
    }
    let mut all = vec![0u64; words];
    for v in 0..n {
        all[v / 64] |= 1 << (v % 64);
    }
    let non_adj: Vec<Bits> = (0..n)
        .map(|v| {
            let mut row: Bits = all.iter().zip(&adj[v]).map(|(a, b)| a & !b).collect();
            clear(&mut row, v);
            row
        })
        .collect();
    let mut order: Vec<Vertex> = (0..n).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(g.valence(v)));
    let greedy = greedy_maximal_independent_set(g);
    let mut search = Search {
        order,
        adj,
        non_adj,
        best: greedy.vertices().to_vec(),
        nodes: 0,
        budget: node_budget,
        aborted: false,
    };
    if n > 0 {
        search.expand(&mut Vec::new(), all);
    }
    let mut best = search.best;
    best.sort_unstable();
    MisResult {
        set: IndependentSet { vertices: best },
        status: if search.aborted {
            MisStatus::LowerBound
        } else {
            MisStatus::Exact
        },
        nodes: search.nodes,
    }
}
