//! Divisors, chip-firing and the Baker–Norine rank.
//!
//! Reduction uses two phases. The first pulls chips outward along BFS
//! layers from the base vertex until every other vertex is out of debt; the
//! second runs Dhar's burning algorithm from the base vertex and fires the
//! unburnt set until the whole graph burns.

use std::collections::HashMap;
use std::fmt;
use std::ops::Index;
use std::str::FromStr;

use thiserror::Error;

use crate::graph::{Graph, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DivisorError {
    #[error("graph is disconnected")]
    Disconnected,
    #[error("expected {expected} entries, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: Vertex, n: usize },
    #[error("integer overflow while firing")]
    Overflow,
    #[error("cannot parse divisor: {0}")]
    Parse(String),
}

/// Integer chip count per vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Divisor {
    chips: Vec<i64>,
}

/// Net number of times each vertex fires; negative entries borrow.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiringScript {
    fires: Vec<i64>,
}

impl Divisor {
    pub fn new(chips: Vec<i64>) -> Divisor {
        Divisor { chips }
    }

    pub fn zero(n: usize) -> Divisor {
        Divisor { chips: vec![0; n] }
    }

    /// Sum of the given vertices, with multiplicity.
    pub fn from_vertices(n: usize, vertices: &[Vertex]) -> Divisor {
        let mut chips = vec![0; n];
        for &v in vertices {
            chips[v] += 1;
        }
        Divisor { chips }
    }

    pub fn len(&self) -> usize {
        self.chips.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chips.is_empty()
    }

    pub fn chips(&self) -> &[i64] {
        &self.chips
    }

    pub fn into_chips(self) -> Vec<i64> {
        self.chips
    }

    /// Sum of entries. Panics only if the sum overflows `i64`.
    pub fn degree(&self) -> i64 {
        self.checked_degree().expect("divisor degree overflows i64")
    }

    pub fn checked_degree(&self) -> Option<i64> {
        self.chips.iter().try_fold(0i64, |acc, &c| acc.checked_add(c))
    }

    pub fn is_effective(&self) -> bool {
        self.chips.iter().all(|&c| c >= 0)
    }

    /// `self + k·v`.
    pub fn plus_vertex(&self, v: Vertex, k: i64) -> Result<Divisor, DivisorError> {
        let mut chips = self.chips.clone();
        let slot = chips.get_mut(v).ok_or(DivisorError::VertexOutOfRange {
            vertex: v,
            n: self.chips.len(),
        })?;
        *slot = slot.checked_add(k).ok_or(DivisorError::Overflow)?;
        Ok(Divisor { chips })
    }

    pub fn checked_sub(&self, other: &Divisor) -> Result<Divisor, DivisorError> {
        check_len(other.len(), self.len())?;
        let chips = self
            .chips
            .iter()
            .zip(&other.chips)
            .map(|(a, b)| a.checked_sub(*b).ok_or(DivisorError::Overflow))
            .collect::<Result<_, _>>()?;
        Ok(Divisor { chips })
    }
}

impl Index<Vertex> for Divisor {
    type Output = i64;
    fn index(&self, v: Vertex) -> &i64 {
        &self.chips[v]
    }
}

impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_ints(f, &self.chips)
    }
}

impl FromStr for Divisor {
    type Err = DivisorError;
    fn from_str(s: &str) -> Result<Divisor, DivisorError> {
        parse_ints(s).map(Divisor::new)
    }
}

impl FiringScript {
    pub fn new(fires: Vec<i64>) -> FiringScript {
        FiringScript { fires }
    }

    pub fn zero(n: usize) -> FiringScript {
        FiringScript { fires: vec![0; n] }
    }

    /// Fire every vertex except `v` once.
    pub fn all_but(n: usize, v: Vertex) -> FiringScript {
        let mut fires = vec![1; n];
        fires[v] = 0;
        FiringScript { fires }
    }

    pub fn fires(&self) -> &[i64] {
        &self.fires
    }

    pub fn len(&self) -> usize {
        self.fires.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fires.is_empty()
    }
}

impl fmt::Display for FiringScript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_ints(f, &self.fires)
    }
}

impl FromStr for FiringScript {
    type Err = DivisorError;
    fn from_str(s: &str) -> Result<FiringScript, DivisorError> {
        parse_ints(s).map(FiringScript::new)
    }
}

fn write_ints(f: &mut fmt::Formatter<'_>, values: &[i64]) -> fmt::Result {
    for (i, c) in values.iter().enumerate() {
        if i > 0 {
            f.write_str(" ")?;
        }
        write!(f, "{c}")?;
    }
    Ok(())
}

fn parse_ints(s: &str) -> Result<Vec<i64>, DivisorError> {
    s.split_whitespace()
        .map(|t| {
            t.parse::<i64>()
                .map_err(|_| DivisorError::Parse(format!("bad integer {t:?}")))
        })
        .collect()
}

fn check_len(found: usize, expected: usize) -> Result<(), DivisorError> {
    if found != expected {
        return Err(DivisorError::LengthMismatch { expected, found });
    }
    Ok(())
}

fn check_divisor(g: &Graph, d: &Divisor) -> Result<(), DivisorError> {
    check_len(d.len(), g.vertex_count())
}

fn check_connected(g: &Graph) -> Result<(), DivisorError> {
    if !g.is_connected() {
        return Err(DivisorError::Disconnected);
    }
    Ok(())
}

fn check_vertex(g: &Graph, v: Vertex) -> Result<(), DivisorError> {
    if v >= g.vertex_count() {
        return Err(DivisorError::VertexOutOfRange {
            vertex: v,
            n: g.vertex_count(),
        });
    }
    Ok(())
}

#[inline]
fn add(a: i64, b: i64) -> Result<i64, DivisorError> {
    a.checked_add(b).ok_or(DivisorError::Overflow)
}

#[inline]
fn mul(a: i64, b: i64) -> Result<i64, DivisorError> {
    a.checked_mul(b).ok_or(DivisorError::Overflow)
}

/// `K_G(v) = val(v) - 2`.
pub fn canonical_divisor(g: &Graph) -> Divisor {
    Divisor::new(
        (0..g.vertex_count())
            .map(|v| g.valence(v) as i64 - 2)
            .collect(),
    )
}

/// `D - L·f`: each vertex loses `f(v)·val(v)` chips and gains `f(u)` from
/// every neighbour `u`.
pub fn apply_firing(g: &Graph, d: &Divisor, f: &FiringScript) -> Result<Divisor, DivisorError> {
    check_divisor(g, d)?;
    check_len(f.len(), g.vertex_count())?;
    let mut chips = d.chips.clone();
    for v in 0..g.vertex_count() {
        let mut value = add(chips[v], -mul(f.fires[v], g.valence(v) as i64)?)?;
        for &u in g.neighbors(v) {
            value = add(value, f.fires[u])?;
        }
        chips[v] = value;
    }
    Ok(Divisor::new(chips))
}

/// Dhar's burning algorithm from `q`. A vertex `v != q` catches fire once
/// the number of burnt neighbours exceeds `chips[v]`. Returns the burnt set.
pub fn dhar_burn(g: &Graph, d: &Divisor, q: Vertex) -> Vec<bool> {
    let mut scratch = Scratch::new(g.vertex_count());
    burn(g, &d.chips, q, &mut scratch);
    scratch.burnt
}

/// Whether `d` is `q`-reduced: nonnegative away from `q` and burnt entirely
/// by a fire started at `q`.
pub fn is_q_reduced(g: &Graph, d: &Divisor, q: Vertex) -> bool {
    (0..d.len()).all(|v| v == q || d[v] >= 0) && dhar_burn(g, d, q).iter().all(|&b| b)
}

/// The `q`-reduced divisor in the linear-equivalence class of `d`.
pub fn q_reduce(g: &Graph, d: &Divisor, q: Vertex) -> Result<Divisor, DivisorError> {
    q_reduce_with_script(g, d, q).map(|(reduced, _)| reduced)
}

/// Like [`q_reduce`], also returning a script `f` with
/// `apply_firing(g, d, f) == reduced`.
pub fn q_reduce_with_script(
    g: &Graph,
    d: &Divisor,
    q: Vertex,
) -> Result<(Divisor, FiringScript), DivisorError> {
    check_divisor(g, d)?;
    check_vertex(g, q)?;
    check_connected(g)?;
    let n = g.vertex_count();
    let mut chips = d.chips.clone();
    let mut fires = vec![0; n];
    let mut scratch = Scratch::new(n);
    clear_debt(g, &mut chips, q, Some(&mut fires), &mut scratch)?;
    stabilize(g, &mut chips, q, Some(&mut fires), false, &mut scratch)?;
    Ok((Divisor::new(chips), FiringScript::new(fires)))
}

pub fn linearly_equivalent(g: &Graph, d1: &Divisor, d2: &Divisor) -> Result<bool, DivisorError> {
    check_divisor(g, d1)?;
    check_divisor(g, d2)?;
    check_connected(g)?;
    if d1.checked_degree() != d2.checked_degree() {
        return Ok(false);
    }
    Ok(q_reduce(g, d1, 0)? == q_reduce(g, d2, 0)?)
}

/// An effective divisor equivalent to `d`, if one exists.
pub fn effective_representative(g: &Graph, d: &Divisor) -> Result<Option<Divisor>, DivisorError> {
    Ok(effective_representative_with_script(g, d)?.map(|(e, _)| e))
}

/// Like [`effective_representative`], also returning the script reaching it.
pub fn effective_representative_with_script(
    g: &Graph,
    d: &Divisor,
) -> Result<Option<(Divisor, FiringScript)>, DivisorError> {
    check_divisor(g, d)?;
    check_connected(g)?;
    if d.checked_degree().ok_or(DivisorError::Overflow)? < 0 {
        return Ok(None);
    }
    let (reduced, script) = q_reduce_with_script(g, d, 0)?;
    Ok((reduced[0] >= 0).then_some((reduced, script)))
}

/// `d - v` is equivalent to an effective divisor for every vertex `v`.
pub fn has_positive_rank(g: &Graph, d: &Divisor) -> Result<bool, DivisorError> {
    check_divisor(g, d)?;
    check_connected(g)?;
    if d.checked_degree().ok_or(DivisorError::Overflow)? < 1 {
        return Ok(false);
    }
    let n = g.vertex_count();
    let mut scratch = Scratch::new(n);
    let mut buf = d.chips.clone();
    clear_debt(g, &mut buf, 0, None, &mut scratch)?;
    let base = buf.clone();
    for v in 0..n {
        buf.copy_from_slice(&base);
        if !reaches(g, &mut buf, v, &mut scratch)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Baker–Norine rank of `d` on a connected graph.
pub fn rank(g: &Graph, d: &Divisor) -> Result<i64, DivisorError> {
    RankCalculator::new(g)?.rank(d)
}

/// Rank evaluation with a cache keyed by reduced representative, for
/// callers that query many divisors on one graph.
///
/// Uses `r(D) = -1` when the class of `D` has no effective member and
/// `r(D) = 1 + min_v r(D - v)` otherwise.
pub struct RankCalculator<'g> {
    graph: &'g Graph,
    cache: HashMap<Vec<i64>, i64>,
    scratch: Scratch,
}

impl<'g> RankCalculator<'g> {
    pub fn new(graph: &'g Graph) -> Result<RankCalculator<'g>, DivisorError> {
        check_connected(graph)?;
        Ok(RankCalculator {
            graph,
            cache: HashMap::new(),
            scratch: Scratch::new(graph.vertex_count()),
        })
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn rank(&mut self, d: &Divisor) -> Result<i64, DivisorError> {
        check_divisor(self.graph, d)?;
        let mut chips = d.chips.clone();
        self.reduce(&mut chips)?;
        self.rank_reduced(chips)
    }

    fn reduce(&mut self, chips: &mut [i64]) -> Result<(), DivisorError> {
        clear_debt(self.graph, chips, 0, None, &mut self.scratch)?;
        stabilize(self.graph, chips, 0, None, false, &mut self.scratch)
    }

    fn rank_reduced(&mut self, chips: Vec<i64>) -> Result<i64, DivisorError> {
        if chips[0] < 0 {
            return Ok(-1);
        }
        if let Some(&r) = self.cache.get(&chips) {
            return Ok(r);
        }
        let mut best = i64::MAX;
        for v in 0..chips.len() {
            let mut next = chips.clone();
            next[v] -= 1;
            self.reduce(&mut next)?;
            best = best.min(self.rank_reduced(next)?);
            if best == -1 {
                break;
            }
        }
        let r = best + 1;
        self.cache.insert(chips, r);
        Ok(r)
    }
}

/// Reusable buffers for burning.
#[derive(Debug, Clone)]
pub(crate) struct Scratch {
    burnt: Vec<bool>,
    burnt_nbrs: Vec<i64>,
    queue: Vec<Vertex>,
    dist: Vec<usize>,
}

impl Scratch {
    pub(crate) fn new(n: usize) -> Scratch {
        Scratch {
            burnt: vec![false; n],
            burnt_nbrs: vec![0; n],
            queue: Vec::with_capacity(n),
            dist: vec![usize::MAX; n],
        }
    }
}

/// Burn from `q`; leaves the burnt set in `scratch.burnt` and, for every
/// unburnt vertex, its number of burnt neighbours in `scratch.burnt_nbrs`.
/// Returns the number of burnt vertices.
fn burn(g: &Graph, chips: &[i64], q: Vertex, s: &mut Scratch) -> usize {
    s.burnt.fill(false);
    s.burnt_nbrs.fill(0);
    s.queue.clear();
    s.burnt[q] = true;
    s.queue.push(q);
    let mut head = 0;
    while head < s.queue.len() {
        let v = s.queue[head];
        head += 1;
        for &u in g.neighbors(v) {
            if s.burnt[u] {
                continue;
            }
            s.burnt_nbrs[u] += 1;
            if s.burnt_nbrs[u] > chips[u] {
                s.burnt[u] = true;
                s.queue.push(u);
            }
        }
    }
    s.queue.len()
}

/// Whether a fire started at `q` burns every vertex.
pub(crate) fn burns_completely(g: &Graph, chips: &[i64], q: Vertex, s: &mut Scratch) -> bool {
    burn(g, chips, q, s) == g.vertex_count()
}

/// Make every vertex other than `q` nonnegative. With BFS layers
/// `L_0 = {q}, L_1, ..., L_h`, for `k = h` down to `1` the ball
/// `L_0 ∪ ... ∪ L_{k-1}` fires as many times as the worst debt in `L_k`.
/// Each vertex of `L_k` gains at least one chip per firing and layers
/// beyond `k` are untouched, so one sweep suffices.
pub(crate) fn clear_debt(
    g: &Graph,
    chips: &mut [i64],
    q: Vertex,
    mut fires: Option<&mut [i64]>,
    s: &mut Scratch,
) -> Result<(), DivisorError> {
    if chips.iter().enumerate().all(|(v, &c)| v == q || c >= 0) {
        return Ok(());
    }
    s.dist.fill(usize::MAX);
    s.queue.clear();
    s.dist[q] = 0;
    s.queue.push(q);
    let mut head = 0;
    while head < s.queue.len() {
        let v = s.queue[head];
        head += 1;
        for &u in g.neighbors(v) {
            if s.dist[u] == usize::MAX {
                s.dist[u] = s.dist[v] + 1;
                s.queue.push(u);
            }
        }
    }
    let order = s.queue.clone();
    let height = order.last().map_or(0, |&v| s.dist[v]);
    for k in (1..=height).rev() {
        let debt = order
            .iter()
            .filter(|&&v| s.dist[v] == k)
            .map(|&v| -chips[v])
            .max()
            .unwrap_or(0);
        if debt <= 0 {
            continue;
        }
        for &v in order.iter().take_while(|&&v| s.dist[v] < k) {
            if let Some(f) = fires.as_deref_mut() {
                f[v] = add(f[v], debt)?;
            }
            for &u in g.neighbors(v) {
                if s.dist[u] == k {
                    chips[v] = add(chips[v], -debt)?;
                    chips[u] = add(chips[u], debt)?;
                }
            }
        }
    }
    Ok(())
}

/// Given `chips` nonnegative away from `q`, repeatedly fire the set left
/// unburnt by a fire at `q` until everything burns. Each round fires the
/// unburnt set as many times as stays legal. With `stop_at_q`, returns as
/// soon as `q` holds a chip.
pub(crate) fn stabilize(
    g: &Graph,
    chips: &mut [i64],
    q: Vertex,
    mut fires: Option<&mut [i64]>,
    stop_at_q: bool,
    s: &mut Scratch,
) -> Result<(), DivisorError> {
    let n = g.vertex_count();
    loop {
        if stop_at_q && chips[q] >= 1 {
            return Ok(());
        }
        if burn(g, chips, q, s) == n {
            return Ok(());
        }
        let mut times = i64::MAX;
        for v in 0..n {
            // unburnt vertices touching the fire satisfy burnt_nbrs <= chips
            if !s.burnt[v] && s.burnt_nbrs[v] > 0 {
                times = times.min(chips[v] / s.burnt_nbrs[v]);
            }
        }
        debug_assert!((1..i64::MAX).contains(&times));
        for v in 0..n {
            if s.burnt[v] {
                continue;
            }
            if let Some(f) = fires.as_deref_mut() {
                f[v] = add(f[v], times)?;
            }
            let out = s.burnt_nbrs[v];
            if out > 0 {
                chips[v] = add(chips[v], -mul(times, out)?)?;
                for &u in g.neighbors(v) {
                    if s.burnt[u] {
                        chips[u] = add(chips[u], times)?;
                    }
                }
            }
        }
    }
}

/// For `chips` nonnegative away from vertex 0, decides whether the class
/// contains an effective divisor with a chip on `v`. Clobbers `chips`.
pub(crate) fn reaches(
    g: &Graph,
    chips: &mut [i64],
    v: Vertex,
    s: &mut Scratch,
) -> Result<bool, DivisorError> {
    if chips[v] >= 1 && chips.iter().all(|&c| c >= 0) {
        return Ok(true);
    }
    clear_debt(g, chips, v, None, s)?;
    stabilize(g, chips, v, None, true, s)?;
    Ok(chips[v] >= 1)
}
