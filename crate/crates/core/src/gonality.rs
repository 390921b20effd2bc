//! Gonality search, positive-rank certificates and the Clifford index.
//!
//! On a connected graph every divisor class has exactly one representative
//! that is reduced with respect to vertex 0. Such a representative is
//! `k·v0 + c` where `c` is superstable: `0 <= c(v) < val(v)` and a fire
//! started at vertex 0 burns everything. A positive-rank class needs
//! `k >= 1`, so the search walks over superstables of total at most `d - 1`
//! for each degree `d`.
//!
//! An isolated vertex contributes 0 to the gonality of a graph, and
//! certificates carry no obligation at isolated vertices. This keeps the
//! totals additive over components and agrees with `n - α(G)` on the empty
//! graph.

use std::ops::ControlFlow;

use thiserror::Error;

use crate::bounds::IndependentSet;
use crate::divisor::{
    self, apply_firing, canonical_divisor, Divisor, DivisorError, FiringScript, RankCalculator,
    Scratch,
};
use crate::graph::{Graph, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GonalityError {
    #[error("graph is disconnected")]
    Disconnected,
    #[error("search budget of {budget} candidates exhausted at degree {degree}")]
    BudgetExhausted { degree: usize, budget: u64 },
    #[error("vertices {0} and {1} are adjacent, so the set is not independent")]
    NotIndependent(Vertex, Vertex),
    #[error("vertex {0} is not in the graph")]
    VertexOutOfRange(Vertex),
    #[error("certificate failed verification at vertex {0}")]
    CertificateRejected(Vertex),
    #[error(transparent)]
    Divisor(#[from] DivisorError),
}

/// A divisor together with, for every vertex `v`, a firing script that
/// takes `divisor - v` to an effective divisor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositiveRankCertificate {
    pub divisor: Divisor,
    pub witnesses: Vec<FiringScript>,
}

impl PositiveRankCertificate {
    /// Checks every witness by direct evaluation of the firing rule.
    /// Isolated vertices are exempt.
    pub fn verify(&self, g: &Graph) -> Result<(), GonalityError> {
        let n = g.vertex_count();
        if self.divisor.len() != n || self.witnesses.len() != n {
            return Err(DivisorError::LengthMismatch {
                expected: n,
                found: self.divisor.len().min(self.witnesses.len()),
            }
            .into());
        }
        for (v, script) in self.witnesses.iter().enumerate() {
            if g.valence(v) == 0 {
                continue;
            }
            let lowered = self.divisor.plus_vertex(v, -1)?;
            if !apply_firing(g, &lowered, script)?.is_effective() {
                return Err(GonalityError::CertificateRejected(v));
            }
        }
        Ok(())
    }

    pub fn degree(&self) -> i64 {
        self.divisor.degree()
    }

    /// Divisor line followed by one witness line per vertex.
    pub fn to_text(&self) -> String {
        let mut out = self.divisor.to_string();
        for w in &self.witnesses {
            out.push('\n');
            out.push_str(&w.to_string());
        }
        out
    }

    pub fn parse(text: &str) -> Result<PositiveRankCertificate, DivisorError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let divisor: Divisor = lines
            .next()
            .ok_or_else(|| DivisorError::Parse("empty certificate".into()))?
            .parse()?;
        let witnesses = lines
            .map(str::parse)
            .collect::<Result<Vec<FiringScript>, _>>()?;
        if witnesses.len() != divisor.len() {
            return Err(DivisorError::LengthMismatch {
                expected: divisor.len(),
                found: witnesses.len(),
            });
        }
        if let Some(w) = witnesses.iter().find(|w| w.len() != divisor.len()) {
            return Err(DivisorError::LengthMismatch {
                expected: divisor.len(),
                found: w.len(),
            });
        }
        Ok(PositiveRankCertificate { divisor, witnesses })
    }
}

/// Cap on candidates tested per degree. `None` means unbounded.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_candidates_per_degree: Option<u64>,
}

impl SearchBudget {
    pub const UNLIMITED: SearchBudget = SearchBudget {
        max_candidates_per_degree: None,
    };

    pub fn per_degree(limit: u64) -> SearchBudget {
        SearchBudget {
            max_candidates_per_degree: Some(limit),
        }
    }
}

/// One exhausted or successful degree of the search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DegreeAudit {
    /// Index into `Graph::connected_components`.
    pub component: usize,
    pub degree: usize,
    pub candidates_tested: u64,
    pub found: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GonalityResult {
    pub value: usize,
    pub certificate: PositiveRankCertificate,
    pub degrees_searched: Vec<DegreeAudit>,
}

/// Exact gonality. Disconnected graphs are handled component by component
/// and the values summed.
pub fn gonality(g: &Graph, budget: SearchBudget) -> Result<GonalityResult, GonalityError> {
    let n = g.vertex_count();
    let mut chips = vec![0i64; n];
    let mut witnesses = vec![FiringScript::zero(n); n];
    let mut value = 0;
    let mut audits = Vec::new();
    for (index, comp) in g.connected_components().into_iter().enumerate() {
        if comp.len() == 1 {
            continue;
        }
        let sub = g.induced(&comp);
        let found = connected_gonality(&sub, budget, index, &mut audits)?;
        value += found.degree as usize;
        for (i, &v) in comp.iter().enumerate() {
            chips[v] = found.chips[i];
            let mut fires = vec![0; n];
            for (j, &u) in comp.iter().enumerate() {
                fires[u] = found.witnesses[i][j];
            }
            witnesses[v] = FiringScript::new(fires);
        }
    }
    let certificate = PositiveRankCertificate {
        divisor: Divisor::new(chips),
        witnesses,
    };
    debug_assert!(certificate.verify(g).is_ok());
    Ok(GonalityResult {
        value,
        certificate,
        degrees_searched: audits,
    })
}

struct Found {
    degree: i64,
    chips: Vec<i64>,
    witnesses: Vec<Vec<i64>>,
}

fn connected_gonality(
    g: &Graph,
    budget: SearchBudget,
    component: usize,
    audits: &mut Vec<DegreeAudit>,
) -> Result<Found, GonalityError> {
    let n = g.vertex_count();
    let mut scratch = Scratch::new(n);
    let mut probe = Scratch::new(n);
    let mut buf = vec![0i64; n];
    // all-ones always has positive rank, so the loop ends by d = n
    for d in 1..=n {
        let mut tested = 0u64;
        let mut hit: Option<Vec<i64>> = None;
        let mut over_budget = false;
        for at_base in 1..=d {
            let rest = d - at_base;
            let flow = for_each_superstable(g, rest, &mut scratch, |config| {
                if budget.max_candidates_per_degree.is_some_and(|b| tested >= b) {
                    over_budget = true;
                    return ControlFlow::Break(());
                }
                tested += 1;
                let mut candidate = config.to_vec();
                candidate[0] = at_base as i64;
                if passes(g, &candidate, &mut buf, &mut probe) {
                    hit = Some(candidate);
                    ControlFlow::Break(())
                } else {
                    ControlFlow::Continue(())
                }
            });
            if flow.is_break() {
                break;
            }
        }
        if over_budget {
            return Err(GonalityError::BudgetExhausted {
                degree: d,
                budget: budget.max_candidates_per_degree.unwrap_or(0),
            });
        }
        audits.push(DegreeAudit {
            component,
            degree: d,
            candidates_tested: tested,
            found: hit.is_some(),
        });
        if let Some(chips) = hit {
            let witnesses = witness_scripts(g, &chips)?;
            return Ok(Found {
                degree: d as i64,
                chips,
                witnesses,
            });
        }
    }
    unreachable!("the all-ones divisor has positive rank on a connected graph")
}

/// Positive-rank test for an effective candidate with a chip on vertex 0.
fn passes(g: &Graph, candidate: &[i64], buf: &mut [i64], s: &mut Scratch) -> bool {
    for v in 1..g.vertex_count() {
        if candidate[v] >= 1 {
            continue;
        }
        buf.copy_from_slice(candidate);
        match divisor::reaches(g, buf, v, s) {
            Ok(true) => {}
            _ => return false,
        }
    }
    true
}

fn witness_scripts(g: &Graph, chips: &[i64]) -> Result<Vec<Vec<i64>>, GonalityError> {
    let d = Divisor::new(chips.to_vec());
    (0..g.vertex_count())
        .map(|v| {
            let lowered = d.plus_vertex(v, -1)?;
            let (reduced, script) = divisor::q_reduce_with_script(g, &lowered, v)?;
            if !reduced.is_effective() {
                return Err(GonalityError::CertificateRejected(v));
            }
            Ok(script.fires().to_vec())
        })
        .collect()
}

/// Visits the superstable configurations relative to vertex 0 whose total
/// is exactly `total`, in lexicographic order of `(c(1), ..., c(n-1))`.
/// The slice handed to `visit` has `c(0) = 0`.
///
/// Superstability is closed under lowering entries, so a partial assignment
/// (unassigned entries zero) that fails the burning test prunes its subtree.
pub(crate) fn for_each_superstable<F>(
    g: &Graph,
    total: usize,
    scratch: &mut Scratch,
    mut visit: F,
) -> ControlFlow<()>
where
    F: FnMut(&[i64]) -> ControlFlow<()>,
{
    let n = g.vertex_count();
    let mut capacity = vec![0usize; n + 1];
    for v in (1..n).rev() {
        capacity[v] = capacity[v + 1] + g.valence(v).saturating_sub(1);
    }
    if n == 0 || capacity[1.min(n)] < total {
        return ControlFlow::Continue(());
    }
    let mut config = vec![0i64; n];
    descend(g, 1, total, &capacity, &mut config, scratch, &mut visit)
}

fn descend<F>(
    g: &Graph,
    v: Vertex,
    remaining: usize,
    capacity: &[usize],
    config: &mut [i64],
    scratch: &mut Scratch,
    visit: &mut F,
) -> ControlFlow<()>
where
    F: FnMut(&[i64]) -> ControlFlow<()>,
{
    let n = g.vertex_count();
    if v == n {
        return if remaining == 0 {
            visit(config)
        } else {
            ControlFlow::Continue(())
        };
    }
    let top = g.valence(v).saturating_sub(1).min(remaining);
    let low = remaining.saturating_sub(capacity[v + 1]);
    for x in low..=top {
        config[v] = x as i64;
        if x > 0 && !divisor::burns_completely(g, config, 0, scratch) {
            // larger values at v stay non-superstable
            break;
        }
        descend(g, v + 1, remaining - x, capacity, config, scratch, visit)?;
    }
    config[v] = 0;
    ControlFlow::Continue(())
}

/// `Σ_{v ∉ I} v`.
pub fn complement_divisor(g: &Graph, independent: &[Vertex]) -> Result<Divisor, GonalityError> {
    let n = g.vertex_count();
    check_independent(g, independent)?;
    let mut chips = vec![1; n];
    for &v in independent {
        chips[v] = 0;
    }
    Ok(Divisor::new(chips))
}

fn check_independent(g: &Graph, set: &[Vertex]) -> Result<(), GonalityError> {
    let n = g.vertex_count();
    if let Some(&v) = set.iter().find(|&&v| v >= n) {
        return Err(GonalityError::VertexOutOfRange(v));
    }
    for (i, &u) in set.iter().enumerate() {
        for &v in &set[i + 1..] {
            if u == v || g.has_edge(u, v) {
                return Err(GonalityError::NotIndependent(u.min(v), u.max(v)));
            }
        }
    }
    Ok(())
}

/// Certificate that `Σ_{v ∉ I} v` has positive rank: vertices off `I`
/// need no firing, and a vertex `v ∈ I` collects a chip from each
/// neighbour when every other vertex fires once. Independence of `I` is all
/// the construction needs.
pub fn certify_independence_bound(
    g: &Graph,
    independent: &IndependentSet,
) -> Result<PositiveRankCertificate, GonalityError> {
    let set = independent.vertices();
    let divisor = complement_divisor(g, set)?;
    let n = g.vertex_count();
    let mut witnesses = vec![FiringScript::zero(n); n];
    for &v in set {
        witnesses[v] = FiringScript::all_but(n, v);
    }
    let certificate = PositiveRankCertificate { divisor, witnesses };
    certificate.verify(g)?;
    Ok(certificate)
}

/// Minimizer of `deg(D) - 2 r(D)` over classes with `r(D) > 0` and
/// `r(K - D) > 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliffordWitness {
    pub value: i64,
    /// Reduced with respect to vertex 0.
    pub divisor: Divisor,
    pub rank: i64,
}

/// Default cap on superstable configurations enumerated by
/// [`clifford_index`].
pub const CLIFFORD_CLASS_LIMIT: usize = 200_000;

/// Clifford index by exhaustive enumeration of reduced classes of degree
/// `0..=2g-2`. `None` when no class meets both rank conditions. Ties go to
/// the smaller degree, then the lexicographically smaller divisor.
pub fn clifford_index(
    g: &Graph,
    class_limit: usize,
) -> Result<Option<CliffordWitness>, GonalityError> {
    if !g.is_connected() {
        return Err(GonalityError::Disconnected);
    }
    let genus = g.genus() as i64;
    if genus < 2 {
        return Ok(None);
    }
    let n = g.vertex_count();
    let mut scratch = Scratch::new(n);
    let mut configs: Vec<Vec<i64>> = Vec::new();
    let mut over = false;
    for total in 0..=(2 * genus - 3) as usize {
        let _ = for_each_superstable(g, total, &mut scratch, |c| {
            if configs.len() >= class_limit {
                over = true;
                return ControlFlow::Break(());
            }
            configs.push(c.to_vec());
            ControlFlow::Continue(())
        });
        if over {
            return Err(GonalityError::BudgetExhausted {
                degree: total,
                budget: class_limit as u64,
            });
        }
    }
    let canonical = canonical_divisor(g);
    let mut ranks = RankCalculator::new(g)?;
    let mut best: Option<CliffordWitness> = None;
    for degree in 1..=(2 * genus - 2) {
        for config in &configs {
            let total: i64 = config.iter().sum();
            if total > degree - 1 {
                continue;
            }
            let mut chips = config.clone();
            chips[0] = degree - total;
            let d = Divisor::new(chips);
            let r = ranks.rank(&d)?;
            if r <= 0 {
                continue;
            }
            let value = degree - 2 * r;
            if best.as_ref().is_some_and(|b| b.value <= value) {
                continue;
            }
            if ranks.rank(&canonical.checked_sub(&d)?)? <= 0 {
                continue;
            }
            best = Some(CliffordWitness {
                value,
                divisor: d,
                rank: r,
            });
        }
    }
    Ok(best)
}
