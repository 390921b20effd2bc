use std::fmt;

use thiserror::Error;

use crate::graph::{Graph, Vertex};

/// Default vertex-count ceiling for [`treewidth_exact`].
pub const DEFAULT_TREEWIDTH_LIMIT: usize = 16;

/// The dynamic program keeps one byte per vertex subset.
const HARD_LIMIT: usize = 26;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreewidthError {
    #[error("graph has {n} vertices, above the exact-treewidth limit of {limit}")]
    TooLarge { n: usize, limit: usize },
}

/// A tree whose nodes are bags of graph vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub bags: Vec<Vec<Vertex>>,
    pub tree_edges: Vec<(usize, usize)>,
}

/// First failed condition found by [`TreeDecomposition::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// The bags and tree edges do not form a tree.
    NotATree,
    /// A bag names a vertex outside the graph.
    UnknownVertex(Vertex),
    /// Property 1: the vertex lies in no bag.
    VertexUncovered(Vertex),
    /// Property 2: the bags holding the vertex are not connected in the tree.
    DisconnectedTrace(Vertex),
    /// Property 3: no bag holds both ends of the edge.
    EdgeUncovered(Vertex, Vertex),
}

impl Violation {
    /// Numbered property of the definition that failed; 0 for structural
    /// problems.
    pub fn property(&self) -> u8 {
        match self {
            Violation::NotATree | Violation::UnknownVertex(_) => 0,
            Violation::VertexUncovered(_) => 1,
            Violation::DisconnectedTrace(_) => 2,
            Violation::EdgeUncovered(..) => 3,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotATree => write!(f, "tree edges do not form a tree"),
            Violation::UnknownVertex(v) => write!(f, "bag contains unknown vertex {v}"),
            Violation::VertexUncovered(v) => write!(f, "property 1: vertex {v} is in no bag"),
            Violation::DisconnectedTrace(v) => {
                write!(f, "property 2: bags containing vertex {v} are not connected")
            }
            Violation::EdgeUncovered(u, v) => {
                write!(f, "property 3: edge {{{u}, {v}}} is in no bag")
            }
        }
    }
}

impl TreeDecomposition {
    /// Size of the largest bag minus one.
    pub fn width(&self) -> usize {
        self.bags
            .iter()
            .map(Vec::len)
            .max()
            .unwrap_or(0)
            .saturating_sub(1)
    }

    /// Checks tree structure, then vertex coverage, trace connectivity and
    /// edge coverage in that order.
    pub fn validate(&self, g: &Graph) -> Result<(), Violation> {
        let k = self.bags.len();
        if k == 0 || self.tree_edges.len() != k - 1 {
            return Err(Violation::NotATree);
        }
        let mut adj = vec![Vec::new(); k];
        for &(a, b) in &self.tree_edges {
            if a >= k || b >= k || a == b {
                return Err(Violation::NotATree);
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        // k - 1 edges and connected means acyclic
        if reachable(&adj, |_| true, 0).iter().filter(|&&r| r).count() != k {
            return Err(Violation::NotATree);
        }
        let n = g.vertex_count();
        let mut holds = vec![vec![false; k]; n];
        for (i, bag) in self.bags.iter().enumerate() {
            for &v in bag {
                if v >= n {
                    return Err(Violation::UnknownVertex(v));
                }
                holds[v][i] = true;
            }
        }
        for (v, row) in holds.iter().enumerate() {
            if !row.contains(&true) {
                return Err(Violation::VertexUncovered(v));
            }
        }
        for (v, row) in holds.iter().enumerate() {
            let start = row.iter().position(|&h| h).expect("covered");
            let seen = reachable(&adj, |i| row[i], start);
            if (0..k).any(|i| row[i] && !seen[i]) {
                return Err(Violation::DisconnectedTrace(v));
            }
        }
        for &(u, v) in g.edges() {
            if !(0..k).any(|i| holds[u][i] && holds[v][i]) {
                return Err(Violation::EdgeUncovered(u, v));
            }
        }
        Ok(())
    }

    /// `k width`, then `k` bag lines, then `k - 1` tree-edge lines.
    pub fn to_text(&self) -> String {
        let mut lines = vec![format!("{} {}", self.bags.len(), self.width())];
        for bag in &self.bags {
            let items: Vec<String> = bag.iter().map(ToString::to_string).collect();
            lines.push(items.join(" "));
        }
        for (a, b) in &self.tree_edges {
            lines.push(format!("{a} {b}"));
        }
        lines.join("\n")
    }
}

fn reachable(adj: &[Vec<usize>], allowed: impl Fn(usize) -> bool, start: usize) -> Vec<bool> {
    let mut seen = vec![false; adj.len()];
    seen[start] = true;
    let mut stack = vec![start];
    while let Some(a) = stack.pop() {
        for &b in &adj[a] {
            if !seen[b] && allowed(b) {
                seen[b] = true;
                stack.push(b);
            }
        }
    }
    seen
}

/// Degeneracy of `g`, which never exceeds its treewidth.
pub fn treewidth_lower_bound(g: &Graph) -> usize {
    g.degeneracy()
}

/// Exact treewidth by dynamic programming over vertex subsets.
///
/// `best[S]` is the least possible maximum, over an elimination of the
/// vertices of `S` first, of the number of uneliminated neighbours a vertex
/// has when it is removed. Removing `v` last within `S` costs the number of
/// vertices outside `S` reachable from `v` through `S ∖ {v}`.
pub fn treewidth_exact(
    g: &Graph,
    size_limit: usize,
) -> Result<(usize, TreeDecomposition), TreewidthError> {
    let n = g.vertex_count();
    let limit = size_limit.min(HARD_LIMIT);
    if n > limit {
        return Err(TreewidthError::TooLarge { n, limit });
    }
    if n == 0 {
        let td = TreeDecomposition {
            bags: vec![Vec::new()],
            tree_edges: Vec::new(),
        };
        return Ok((0, td));
    }
    let nbr: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &u| m | 1 << u))
        .collect();
    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let mut best = vec![u8::MAX; 1usize << n];
    best[0] = 0;
    for set in 1..=full {
        let mut value = u8::MAX;
        let mut rest = set;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let without = set & !(1 << v);
            let cost = exit_degree(&nbr, without, v);
            value = value.min(best[without as usize].max(cost));
        }
        best[set as usize] = value;
    }
    let mut order = vec![0usize; n];
    let mut set = full;
    for slot in (0..n).rev() {
        let target = best[set as usize];
        let v = (0..n)
            .filter(|&v| set & 1 << v != 0)
            .find(|&v| {
                let without = set & !(1 << v);
                best[without as usize].max(exit_degree(&nbr, without, v)) == target
            })
            .expect("optimal choice exists");
        order[slot] = v;
        set &= !(1 << v);
    }
    let td = decomposition_from_order(g, &order);
    let width = best[full as usize] as usize;
    debug_assert_eq!(td.width(), width);
    Ok((width, td))
}

/// Vertices outside `inside ∪ {v}` adjacent to the component of `v` in the
/// subgraph induced by `inside ∪ {v}`.
fn exit_degree(nbr: &[u32], inside: u32, v: usize) -> u8 {
    let mut comp = 1u32 << v;
    let mut frontier = comp;
    while frontier != 0 {
        let mut grow = 0;
        let mut f = frontier;
        while f != 0 {
            let u = f.trailing_zeros() as usize;
            f &= f - 1;
            grow |= nbr[u];
        }
        frontier = grow & inside & !comp;
        comp |= frontier;
    }
    let mut boundary = 0u32;
    let mut c = comp;
    while c != 0 {
        let u = c.trailing_zeros() as usize;
        c &= c - 1;
        boundary |= nbr[u];
    }
    (boundary & !comp & !inside).count_ones() as u8
}

/// Bags from eliminating vertices in `order`, with each bag attached to the
/// bag of its earliest-eliminated later neighbour (or the next bag in order
/// when it has none).
fn decomposition_from_order(g: &Graph, order: &[Vertex]) -> TreeDecomposition {
    let n = g.vertex_count();
    let mut position = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }
    let mut adj: Vec<Vec<bool>> = vec![vec![false; n]; n];
    for &(u, v) in g.edges() {
        adj[u][v] = true;
        adj[v][u] = true;
    }
    let mut bags = Vec::with_capacity(n);
    let mut tree_edges = Vec::with_capacity(n.saturating_sub(1));
    for (i, &v) in order.iter().enumerate() {
        let later: Vec<Vertex> = (0..n)
            .filter(|&u| adj[v][u] && position[u] > i)
            .collect();
        for (a, &x) in later.iter().enumerate() {
            for &y in &later[a + 1..] {
                adj[x][y] = true;
                adj[y][x] = true;
            }
        }
        let parent = later.iter().map(|&u| position[u]).min();
        match parent {
            Some(p) => tree_edges.push((i, p)),
            None if i + 1 < n => tree_edges.push((i, i + 1)),
            None => {}
        }
        let mut bag = later;
        bag.push(v);
        bag.sort_unstable();
        bags.push(bag);
    }
    TreeDecomposition { bags, tree_edges }
}
