//! Finite simple undirected graphs on the dense vertex set `0..n`.
//!
//! A [`Graph`] is immutable once built. Every constructor funnels through
//! [`Graph::new`], which rejects self-loops, repeated edges and endpoints
//! outside `0..n`.

use std::collections::BTreeSet;
use std::fmt;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Vertex label. Vertices of a graph on `n` vertices are `0..n`.
pub type Vertex = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(Vertex, Vertex),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: Vertex, n: usize },
    #[error("cycle graph needs at least 3 vertices, got {0}")]
    CycleTooSmall(usize),
    #[error("malformed header: {0:?}")]
    MalformedHeader(String),
    #[error("malformed edge line {line}: {text:?}")]
    MalformedEdge { line: usize, text: String },
    #[error("header announces {expected} edges but {found} were given")]
    EdgeCountMismatch { expected: usize, found: usize },
    #[error("invalid G(n,p) parameters: {0}")]
    InvalidParams(String),
}

/// A finite simple undirected graph.
///
/// Edges are stored as `(u, v)` with `u < v`, sorted lexicographically.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: Vec<(Vertex, Vertex)>,
    adj: Vec<Vec<Vertex>>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges)
            .finish()
    }
}

impl Graph {
    /// Builds a graph, validating every edge.
    pub fn new<I>(n: usize, edges: I) -> Result<Graph, GraphError>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            let key = (u.min(v), u.max(v));
            if !set.insert(key) {
                return Err(GraphError::DuplicateEdge(key.0, key.1));
            }
        }
        Ok(Self::from_sorted_unchecked(n, set.into_iter().collect()))
    }

    fn from_sorted_unchecked(n: usize, edges: Vec<(Vertex, Vertex)>) -> Graph {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Graph { n, edges, adj }
    }

    /// The graph on `n` vertices with no edges.
    pub fn empty(n: usize) -> Graph {
        Self::from_sorted_unchecked(n, Vec::new())
    }

    pub fn complete(n: usize) -> Graph {
        let edges = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        Self::from_sorted_unchecked(n, edges)
    }

    pub fn cycle(n: usize) -> Result<Graph, GraphError> {
        if n < 3 {
            return Err(GraphError::CycleTooSmall(n));
        }
        Graph::new(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    pub fn path(n: usize) -> Graph {
        let edges = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_sorted_unchecked(n, edges)
    }

    /// Samples G(n, p): each pair `u < v`, taken in lexicographic order,
    /// draws one uniform `f64` in `[0, 1)` from a ChaCha8 stream seeded with
    /// `params.seed`, and the edge is kept when the draw is below `p`.
    pub fn sample_gnp(params: &GnpParams) -> Graph {
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
        let n = params.n;
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                let x: f64 = rng.gen();
                if x < params.p {
                    edges.push((u, v));
                }
            }
        }
        Self::from_sorted_unchecked(n, edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    /// Valence (degree) of `v`.
    pub fn valence(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    /// Complement graph on the same vertex set.
    pub fn complement(&self) -> Graph {
        let edges = (0..self.n)
            .flat_map(|u| (u + 1..self.n).map(move |v| (u, v)))
            .filter(|&(u, v)| !self.has_edge(u, v))
            .collect();
        Self::from_sorted_unchecked(self.n, edges)
    }

    /// Induced subgraph on `vertices`, relabelled `0..k` in the given order.
    pub fn induced(&self, vertices: &[Vertex]) -> Graph {
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let mut edges: Vec<_> = self
            .edges
            .iter()
            .filter(|&&(u, v)| index[u] != usize::MAX && index[v] != usize::MAX)
            .map(|&(u, v)| (index[u].min(index[v]), index[u].max(index[v])))
            .collect();
        edges.sort_unstable();
        Self::from_sorted_unchecked(vertices.len(), edges)
    }

    pub fn min_degree(&self) -> usize {
        (0..self.n).map(|v| self.valence(v)).min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.valence(v)).max().unwrap_or(0)
    }

    /// Largest minimum degree over all subgraphs, computed by repeatedly
    /// deleting a vertex of minimum remaining degree.
    pub fn degeneracy(&self) -> usize {
        let n = self.n;
        let mut degree: Vec<usize> = (0..n).map(|v| self.valence(v)).collect();
        let mut removed = vec![false; n];
        let mut best = 0;
        for _ in 0..n {
            let v = (0..n)
                .filter(|&v| !removed[v])
                .min_by_key(|&v| degree[v])
                .expect("a vertex remains");
            best = best.max(degree[v]);
            removed[v] = true;
            for &u in &self.adj[v] {
                if !removed[u] {
                    degree[u] -= 1;
                }
            }
        }
        best
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn connected_components(&self) -> Vec<Vec<Vertex>> {
        let mut seen = vec![false; self.n];
        let mut components = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut stack = vec![start];
            let mut comp = Vec::new();
            while let Some(v) = stack.pop() {
                comp.push(v);
                for &u in &self.adj[v] {
                    if !seen[u] {
                        seen[u] = true;
                        stack.push(u);
                    }
                }
            }
            comp.sort_unstable();
            components.push(comp);
        }
        components
    }

    pub fn component_count(&self) -> usize {
        self.connected_components().len()
    }

    /// Connected in the usual sense; the graph on zero vertices is not.
    pub fn is_connected(&self) -> bool {
        self.n > 0 && self.component_count() == 1
    }

    /// First Betti number `|E| - |V| + #components`.
    pub fn genus(&self) -> usize {
        self.edges.len() + self.component_count() - self.n
    }

    /// Parses the edge-list format: a header line `n m` followed by `m`
    /// lines `u v`. Blank lines are ignored and edges may come in any order.
    pub fn parse(text: &str) -> Result<Graph, GraphError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (_, header) = lines
            .next()
            .ok_or_else(|| GraphError::MalformedHeader(String::new()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let bad_header = || GraphError::MalformedHeader(header.to_string());
        if fields.len() != 2 {
            return Err(bad_header());
        }
        let n: usize = fields[0].parse().map_err(|_| bad_header())?;
        let m: usize = fields[1].parse().map_err(|_| bad_header())?;
        let mut edges = Vec::with_capacity(m);
        for (line, text) in lines {
            let bad = || GraphError::MalformedEdge {
                line,
                text: text.to_string(),
            };
            let mut it = text.split_whitespace();
            let u: Vertex = it.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
            let v: Vertex = it.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
            if it.next().is_some() {
                return Err(bad());
            }
            edges.push((u, v));
        }
        if edges.len() != m {
            return Err(GraphError::EdgeCountMismatch {
                expected: m,
                found: edges.len(),
            });
        }
        Graph::new(n, edges)
    }

    /// Canonical edge-list text: header, then sorted `u v` lines with
    /// `u < v`, LF separated, no trailing newline.
    pub fn serialize(&self) -> String {
        let mut out = format!("{} {}", self.n, self.edges.len());
        for (u, v) in &self.edges {
            out.push('\n');
            out.push_str(&format!("{u} {v}"));
        }
        out
    }
}

/// Parameters of the Erdős–Rényi model G(n, p) with `p = c / n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GnpParams {
    pub n: usize,
    pub c: f64,
    pub p: f64,
    pub seed: u64,
}

impl GnpParams {
    /// Parameters from the mean-degree scale `c`; `p = c / n`.
    pub fn new(n: usize, c: f64, seed: u64) -> Result<GnpParams, GraphError> {
        if n == 0 {
            return Err(GraphError::InvalidParams("n must be positive".into()));
        }
        if !c.is_finite() || c < 0.0 {
            return Err(GraphError::InvalidParams(format!("c = {c} must be >= 0")));
        }
        let p = c / n as f64;
        if p > 1.0 {
            return Err(GraphError::InvalidParams(format!(
                "p = c/n = {p} exceeds 1"
            )));
        }
        Ok(GnpParams { n, c, p, seed })
    }

    /// Parameters from the edge probability directly; `c = p * n`.
    pub fn with_probability(n: usize, p: f64, seed: u64) -> Result<GnpParams, GraphError> {
        if n == 0 {
            return Err(GraphError::InvalidParams("n must be positive".into()));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(GraphError::InvalidParams(format!("p = {p} not in [0, 1]")));
        }
        Ok(GnpParams {
            n,
            c: p * n as f64,
            p,
            seed,
        })
    }
}
