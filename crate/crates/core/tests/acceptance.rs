//! End-to-end acceptance checks. Runs as a plain binary and prints one
//! pass/fail line per criterion; exits non-zero if any fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use chipfire::bounds::{
    frieze_alpha_estimate, greedy_maximal_independent_set, maximum_independent_set, treewidth_exact,
};
use chipfire::divisor::{apply_firing, canonical_divisor, q_reduce, RankCalculator};
use chipfire::experiments::{convergence_report, run_experiment, ExperimentConfig, MeanDegree, Mode};
use chipfire::gonality::{certify_independence_bound, gonality};
use chipfire::{Divisor, FiringScript, GnpParams, Graph, SearchBudget};
use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

type Outcome = Result<String, String>;

fn gon(g: &Graph) -> usize {
    gonality(g, SearchBudget::UNLIMITED).unwrap().value
}

fn within(limit: Duration, start: Instant, detail: String) -> Outcome {
    let took = start.elapsed();
    let detail = format!("{detail} ({:.1}s)", took.as_secs_f64());
    if took <= limit {
        Ok(detail)
    } else {
        Err(format!("{detail}, over the {}s limit", limit.as_secs()))
    }
}

fn complete_graphs() -> Outcome {
    let start = Instant::now();
    for n in 3..=8 {
        let value = gon(&Graph::complete(n));
        if value != n - 1 {
            return Err(format!("gon(K_{n}) = {value}"));
        }
    }
    within(Duration::from_secs(60), start, "gon(K_n) = n-1 for n = 3..8".into())
}

fn extremal_uniqueness() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    for n in [4, 5] {
        let graphs: Vec<Graph> = connected_graphs(n).collect();
        checked += graphs.len();
        let bad = graphs.par_iter().find_any(|g| {
            let complete = g.edge_count() == n * (n - 1) / 2;
            (gon(g) == n - 1) != complete
        });
        if let Some(g) = bad {
            return Err(format!("{g:?} breaks uniqueness"));
        }
    }
    within(
        Duration::from_secs(300),
        start,
        format!("{checked} labelled connected graphs, only K_n reach n-1"),
    )
}

/// 105 connected graphs for each `p`, with `n` cycling through 3..=9.
fn sandwich_corpus() -> Vec<(Graph, f64)> {
    let mut out = Vec::new();
    for (k, p) in [0.3, 0.5, 0.8].into_iter().enumerate() {
        for i in 0..105u64 {
            let n = 3 + (i % 7) as usize;
            out.push((random_connected(n, p, 1000 * k as u64 + i), p));
        }
    }
    out
}

struct CorpusRow {
    n: usize,
    tw: usize,
    gon: usize,
    alpha: usize,
    min_degree: usize,
    certified: bool,
}

fn corpus_rows(corpus: &[(Graph, f64)]) -> Vec<CorpusRow> {
    corpus
        .par_iter()
        .map(|(g, _)| {
            let greedy = greedy_maximal_independent_set(g);
            let certified = greedy.is_maximal(g)
                && certify_independence_bound(g, &greedy).is_ok_and(|c| c.verify(g).is_ok());
            CorpusRow {
                n: g.vertex_count(),
                tw: treewidth_exact(g, 16).unwrap().0,
                gon: gon(g),
                alpha: maximum_independent_set(g, None).alpha(),
                min_degree: g.min_degree(),
                certified,
            }
        })
        .collect()
}

fn sandwich(rows: &[CorpusRow], start: Instant) -> Outcome {
    let fails = rows.iter().filter(|r| !(r.tw <= r.gon && r.gon <= r.n - r.alpha)).count();
    if fails > 0 {
        return Err(format!("{fails} of {} graphs violate tw <= gon <= n - alpha", rows.len()));
    }
    within(
        Duration::from_secs(600),
        start,
        format!("tw <= gon <= n - alpha on {} graphs", rows.len()),
    )
}

fn min_degree_bound(rows: &[CorpusRow]) -> Outcome {
    let fails = rows.iter().filter(|r| r.gon < r.min_degree).count();
    if fails > 0 {
        return Err(format!("{fails} graphs with gon < min degree"));
    }
    Ok(format!("gon >= min degree on {} graphs", rows.len()))
}

fn independence_certificates(rows: &[CorpusRow]) -> Outcome {
    let fails = rows.iter().filter(|r| !r.certified).count();
    if fails > 0 {
        return Err(format!("{fails} certificates rejected"));
    }
    Ok(format!("all witnesses verified on {} graphs", rows.len()))
}

fn riemann_roch() -> Outcome {
    let start = Instant::now();
    let graphs: Vec<Graph> = (2..=6).flat_map(connected_up_to_isomorphism).collect();
    let counts: Result<Vec<usize>, String> = graphs
        .par_iter()
        .map(|g| {
            let n = g.vertex_count();
            let genus = g.genus() as i64;
            let k = canonical_divisor(g);
            let mut calc = RankCalculator::new(g).unwrap();
            let total = 5usize.pow(n as u32);
            for code in 0..total {
                let chips = (0..n).map(|i| (code / 5usize.pow(i as u32) % 5) as i64 - 2).collect();
                let d = Divisor::new(chips);
                let lhs = calc.rank(&d).unwrap() - calc.rank(&k.checked_sub(&d).unwrap()).unwrap();
                if lhs != d.degree() - genus + 1 {
                    return Err(format!("{g:?} D = {d}"));
                }
            }
            Ok(total)
        })
        .collect();
    let checked: usize = counts?.iter().sum();
    within(
        Duration::from_secs(600),
        start,
        format!("{checked} divisors on {} graphs", graphs.len()),
    )
}

fn reduction_laws() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..1000u64 {
        let n = rng.gen_range(2..=8);
        let g = random_connected(n, rng.gen_range(0.3..0.9), i);
        let d = Divisor::new((0..n).map(|_| rng.gen_range(-5..=5)).collect());
        let f = FiringScript::new((0..n).map(|_| rng.gen_range(-3..=3)).collect());
        let q = rng.gen_range(0..n);
        let r = q_reduce(&g, &d, q).unwrap();
        let moved = apply_firing(&g, &d, &f).unwrap();
        if q_reduce(&g, &r, q).unwrap() != r || q_reduce(&g, &moved, q).unwrap() != r {
            return Err(format!("{g:?} D = {d} f = {f} q = {q}"));
        }
    }
    Ok("idempotent and firing-invariant on 1000 instances".into())
}

fn genus_asymptotic() -> Outcome {
    let start = Instant::now();
    let (n, c, trials) = (100, 5.0, 200u64);
    let (mut genus, mut corrected, mut edges) = (0.0, 0.0, 0.0);
    for t in 0..trials {
        let g = Graph::sample_gnp(&GnpParams::new(n, c, 5000 + t).unwrap());
        genus += g.genus() as f64;
        // adding back n - components recovers the edge count
        corrected += (g.genus() + n - g.component_count()) as f64;
        edges += g.edge_count() as f64;
    }
    let (genus, corrected, edges) =
        (genus / trials as f64, corrected / trials as f64, edges / trials as f64);
    let detail = format!("mean genus {genus:.1}, corrected {corrected:.1}, edges {edges:.1}");
    if (corrected - 250.0).abs() > 0.05 * 250.0 || (edges - 247.5).abs() > 0.03 * 247.5 {
        return Err(detail);
    }
    within(Duration::from_secs(60), start, detail)
}

fn frieze() -> Outcome {
    let start = Instant::now();
    let (n, c, trials) = (100, 20.0, 30u64);
    let estimate = frieze_alpha_estimate(n, c).unwrap();
    let alphas: Vec<Option<usize>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let r = maximum_independent_set(&Graph::sample_gnp(&GnpParams::new(n, c, 42 + t).unwrap()), None);
            r.is_exact().then_some(r.alpha())
        })
        .collect();
    if alphas.contains(&None) {
        return Err("a search did not finish".into());
    }
    let mean = alphas.iter().flatten().sum::<usize>() as f64 / trials as f64;
    let tol = 0.75 * n as f64 / c;
    let detail = format!("mean alpha {mean:.2} vs estimate {estimate:.2} (tolerance {tol})");
    if (mean - estimate).abs() > tol {
        return Err(detail);
    }
    within(Duration::from_secs(900), start, detail)
}

fn trend_config() -> ExperimentConfig {
    ExperimentConfig::new(vec![6, 8, 10, 12], MeanDegree::Sqrt, 100, 42, Mode::Exact)
}

fn trend(first_csv: &mut Option<String>) -> Outcome {
    let start = Instant::now();
    let (summary, csv) = run_experiment(&trend_config()).map_err(|e| e.to_string())?;
    *first_csv = Some(csv);
    let report = convergence_report(&summary).map_err(|e| e.to_string())?;
    let means: Vec<String> = report
        .rows
        .iter()
        .map(|r| format!("{:.3}", r.gon_ratio.map_or(f64::NAN, |m| m.mean)))
        .collect();

    let control = ExperimentConfig::new(vec![12], MeanDegree::Probability(0.9), 100, 42, Mode::Exact);
    let (dense, _) = run_experiment(&control).map_err(|e| e.to_string())?;
    let dense_ratio = dense.points[0].gon_ratio.map_or(f64::NAN, |m| m.mean);

    let detail = format!(
        "gon/n = [{}], dense control gon/n = {dense_ratio:.3}",
        means.join(", ")
    );
    if !report.weakly_increasing() {
        return Err(format!("{detail}; series not weakly increasing"));
    }
    if dense_ratio.is_nan() || dense_ratio < 0.7 {
        return Err(format!("{detail}; dense control below 0.7"));
    }
    within(Duration::from_secs(1800), start, detail)
}

fn determinism(first_csv: Option<String>) -> Outcome {
    let first = first_csv.ok_or("the trend experiment did not run")?;
    let (_, again) = run_experiment(&trend_config()).map_err(|e| e.to_string())?;
    if first != again {
        return Err("CSV differs between runs".into());
    }
    Ok(format!("{} identical bytes", first.len()))
}

fn main() -> ExitCode {
    let mut failed = 0;
    let mut report = |id: usize, title: &str, outcome: Outcome| {
        match outcome {
            Ok(detail) => println!("[PASS] criterion {id}: {title}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] criterion {id}: {title}: {detail}");
            }
        }
    };

    report(1, "complete-graph sharpness", complete_graphs());
    report(2, "uniqueness of extremal graphs", extremal_uniqueness());

    let start = Instant::now();
    let corpus = sandwich_corpus();
    let rows = corpus_rows(&corpus);
    report(3, "treewidth / independence sandwich", sandwich(&rows, start));
    report(4, "minimum degree lower bound", min_degree_bound(&rows));
    report(5, "independence certificates", independence_certificates(&rows));

    report(6, "Riemann-Roch", riemann_roch());
    report(7, "reduction laws", reduction_laws());
    report(8, "genus of G(100, 5/100)", genus_asymptotic());
    report(9, "independence number at c = 20", frieze());

    let mut csv = None;
    report(10, "gonality ratio trend", trend(&mut csv));
    report(11, "determinism", determinism(csv));

    if failed == 0 {
        println!("all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
