//! Brute-force oracles and small-graph corpora shared by the integration
//! tests. Nothing here calls the reduction, rank or gonality code under test;
//! the only library routine used is the firing rule itself.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet, VecDeque};

use chipfire::divisor::apply_firing;
use chipfire::{Divisor, FiringScript, GnpParams, Graph};

/// All labelled simple graphs on `n` vertices.
pub fn all_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    let m = pairs.len();
    (0u64..1 << m).map(move |mask| {
        let edges = (0..m).filter(|i| mask >> i & 1 == 1).map(|i| pairs[i]);
        Graph::new(n, edges).unwrap()
    })
}

pub fn connected_graphs(n: usize) -> impl Iterator<Item = Graph> {
    all_graphs(n).filter(Graph::is_connected)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        let n = used.len();
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                go(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// One representative per isomorphism class of connected graphs on `n`
/// vertices, by minimizing the sorted edge list over all relabellings.
pub fn connected_up_to_isomorphism(n: usize) -> Vec<Graph> {
    let perms = permutations(n);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for g in connected_graphs(n) {
        let canon = perms
            .iter()
            .map(|p| {
                let mut e: Vec<(usize, usize)> = g
                    .edges()
                    .iter()
                    .map(|&(u, v)| (p[u].min(p[v]), p[u].max(p[v])))
                    .collect();
                e.sort_unstable();
                e
            })
            .min()
            .unwrap();
        if seen.insert(canon) {
            out.push(g);
        }
    }
    out
}

/// Random connected graphs by rejection sampling.
pub fn random_connected(n: usize, p: f64, seed: u64) -> Graph {
    (0..)
        .map(|k| Graph::sample_gnp(&GnpParams::with_probability(n, p, seed.wrapping_mul(1_000_003) + k).unwrap()))
        .find(Graph::is_connected)
        .unwrap()
}

/// Scripts with `f(0) = 0` and the other entries in `[-bound, bound]`.
fn bounded_scripts(n: usize, bound: i64) -> impl Iterator<Item = FiringScript> {
    let width = (2 * bound + 1) as u64;
    let count = width.pow(n.saturating_sub(1) as u32);
    (0..count).map(move |mut code| {
        let mut fires = vec![0; n];
        for slot in fires.iter_mut().skip(1) {
            *slot = (code % width) as i64 - bound;
            code /= width;
        }
        FiringScript::new(fires)
    })
}

/// `d1 ~ d2` by exhaustive search over bounded firing scripts.
pub fn bf_equivalent(g: &Graph, d1: &Divisor, d2: &Divisor, bound: i64) -> bool {
    bounded_scripts(g.vertex_count(), bound).any(|f| apply_firing(g, d1, &f).unwrap() == *d2)
}

/// Some bounded script takes `d` to an effective divisor.
pub fn bf_has_effective(g: &Graph, d: &Divisor, bound: i64) -> bool {
    if d.is_effective() {
        return true;
    }
    bounded_scripts(g.vertex_count(), bound).any(|f| apply_firing(g, d, &f).unwrap().is_effective())
}

/// Effective divisors of degree `k` on `n` vertices.
pub fn effective_of_degree(n: usize, k: usize) -> Vec<Divisor> {
    fn go(v: usize, left: usize, cur: &mut Vec<i64>, out: &mut Vec<Divisor>) {
        if v + 1 == cur.len() {
            cur[v] = left as i64;
            out.push(Divisor::new(cur.clone()));
            return;
        }
        for x in 0..=left {
            cur[v] = x as i64;
            go(v + 1, left - x, cur, out);
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        go(0, k, &mut vec![0; n], &mut out);
    }
    out
}

/// Rank straight from the definition, with bounded-script effectivity.
pub fn bf_rank(g: &Graph, d: &Divisor, bound: i64) -> i64 {
    if !bf_has_effective(g, d, bound) {
        return -1;
    }
    let mut k = 0;
    loop {
        let next = k + 1;
        let all = effective_of_degree(g.vertex_count(), next)
            .iter()
            .all(|e| bf_has_effective(g, &d.checked_sub(e).unwrap(), bound));
        if !all {
            return k as i64;
        }
        k = next;
    }
}

/// Every effective divisor equivalent to the effective divisor `d`,
/// explored through legal set-firings (each vertex of the fired set holds
/// at least as many chips as it has edges leaving the set). Firing level
/// sets from the top down shows this reaches the whole effective part of
/// the class.
pub fn effective_class(g: &Graph, d: &Divisor) -> BTreeSet<Vec<i64>> {
    let n = g.vertex_count();
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(d.chips().to_vec());
    queue.push_back(d.chips().to_vec());
    while let Some(cur) = queue.pop_front() {
        for set in 1u32..(1 << n) - 1 {
            let inside = |v: usize| set >> v & 1 == 1;
            let legal = (0..n).filter(|&v| inside(v)).all(|v| {
                let out = g.neighbors(v).iter().filter(|&&u| !inside(u)).count() as i64;
                cur[v] >= out
            });
            if !legal {
                continue;
            }
            let mut next = cur.clone();
            for v in 0..n {
                if inside(v) {
                    for &u in g.neighbors(v) {
                        if !inside(u) {
                            next[v] -= 1;
                            next[u] += 1;
                        }
                    }
                }
            }
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    seen
}

/// Gonality of a connected graph on at most ~8 vertices, from effective
/// classes: a class has positive rank iff its effective members together
/// cover every vertex.
pub fn bf_gonality(g: &Graph) -> usize {
    let n = g.vertex_count();
    for d in 1..=n {
        let mut done: HashSet<Vec<i64>> = HashSet::new();
        for start in effective_of_degree(n, d) {
            if done.contains(start.chips()) {
                continue;
            }
            let class = effective_class(g, &start);
            let covers = (0..n).all(|v| class.iter().any(|c| c[v] >= 1));
            if covers {
                return d;
            }
            done.extend(class);
        }
    }
    unreachable!("all-ones has positive rank")
}

pub fn bf_positive_rank_effective(g: &Graph, d: &Divisor) -> bool {
    let class = effective_class(g, d);
    (0..g.vertex_count()).all(|v| class.iter().any(|c| c[v] >= 1))
}

/// Independence number over all vertex subsets.
pub fn bf_alpha(g: &Graph) -> usize {
    let n = g.vertex_count();
    (0u32..1 << n)
        .filter(|&s| g.edges().iter().all(|&(u, v)| !(s >> u & 1 == 1 && s >> v & 1 == 1)))
        .map(u32::count_ones)
        .max()
        .unwrap_or(0) as usize
}

/// Clique number over all vertex subsets.
pub fn bf_clique(g: &Graph) -> usize {
    let n = g.vertex_count();
    (0u32..1 << n)
        .filter(|&s| {
            (0..n).all(|u| (u + 1..n).all(|v| !(s >> u & 1 == 1 && s >> v & 1 == 1) || g.has_edge(u, v)))
        })
        .map(u32::count_ones)
        .max()
        .unwrap_or(0) as usize
}

/// Treewidth as the best elimination width over every vertex ordering.
pub fn bf_treewidth(g: &Graph) -> usize {
    let n = g.vertex_count();
    permutations(n)
        .into_iter()
        .map(|order| {
            let mut adj = vec![vec![false; n]; n];
            for &(u, v) in g.edges() {
                adj[u][v] = true;
                adj[v][u] = true;
            }
            let mut gone = vec![false; n];
            let mut width = 0;
            for &v in &order {
                let nbrs: Vec<usize> = (0..n).filter(|&u| !gone[u] && adj[v][u]).collect();
                width = width.max(nbrs.len());
                for &a in &nbrs {
                    for &b in &nbrs {
                        if a != b {
                            adj[a][b] = true;
                        }
                    }
                }
                gone[v] = true;
            }
            width
        })
        .min()
        .unwrap_or(0)
}
