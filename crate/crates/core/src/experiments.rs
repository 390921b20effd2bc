//! Monte Carlo harness over G(n, c(n)/n).
//!
//! Every trial is a pure function of its parameters and its seed, so trials
//! run in parallel and the CSV is sorted by `(n, trial)` before it is
//! written. Timing columns are left empty unless explicitly requested; with
//! them off, identical configurations give identical bytes.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use thiserror::Error;

use crate::bounds::{
    maximum_independent_set, treewidth_exact, treewidth_lower_bound, DEFAULT_TREEWIDTH_LIMIT,
};
use crate::gonality::{gonality, SearchBudget};
use crate::graph::{GnpParams, Graph, GraphError};

pub const CSV_HEADER: &str = "n,c,p,trial,seed,connected,genus,alpha,alpha_exact,tw_lb,tw_exact,gon_lb,gon_ub,gon_exact,mode,ms_alpha,ms_tw,ms_gon";

/// Largest `n` accepted in exact mode by default.
pub const DEFAULT_EXACT_ENVELOPE: usize = 12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExperimentError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("bound violation at n = {n}, trial {trial}: {detail}")]
    SandwichViolation {
        n: usize,
        trial: usize,
        detail: String,
    },
    #[error("malformed CSV line {line}: {detail}")]
    Csv { line: usize, detail: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Mean-degree scale `c(n)`; the edge probability is `c(n)/n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MeanDegree {
    Constant(f64),
    Log,
    Sqrt,
    /// Fixed edge probability, for dense control series: `c(n) = p·n`.
    Probability(f64),
}

impl MeanDegree {
    pub fn at(&self, n: usize) -> f64 {
        let x = n as f64;
        match *self {
            MeanDegree::Constant(k) => k,
            MeanDegree::Log => x.ln(),
            MeanDegree::Sqrt => x.sqrt(),
            MeanDegree::Probability(p) => p * x,
        }
    }

    pub fn params(&self, n: usize, seed: u64) -> Result<GnpParams, GraphError> {
        match *self {
            MeanDegree::Probability(p) => GnpParams::with_probability(n, p, seed),
            _ => GnpParams::new(n, self.at(n), seed),
        }
    }
}

impl FromStr for MeanDegree {
    type Err = String;

    /// `sqrt`, `log`, a number `k` (constant), or `p=<prob>`.
    fn from_str(s: &str) -> Result<MeanDegree, String> {
        match s.trim() {
            "sqrt" => Ok(MeanDegree::Sqrt),
            "log" => Ok(MeanDegree::Log),
            other => {
                if let Some(p) = other.strip_prefix("p=") {
                    return p
                        .parse()
                        .map(MeanDegree::Probability)
                        .map_err(|_| format!("bad probability {p:?}"));
                }
                let k = other.strip_prefix("const:").unwrap_or(other);
                k.parse()
                    .map(MeanDegree::Constant)
                    .map_err(|_| format!("unknown mean-degree family {s:?}"))
            }
        }
    }
}

impl fmt::Display for MeanDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeanDegree::Constant(k) => write!(f, "{k}"),
            MeanDegree::Log => f.write_str("log"),
            MeanDegree::Sqrt => f.write_str("sqrt"),
            MeanDegree::Probability(p) => write!(f, "p={p}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Exact gonality per trial.
    Exact,
    /// Bounds only.
    Sandwich,
}

impl FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Mode, String> {
        match s {
            "exact" => Ok(Mode::Exact),
            "sandwich" => Ok(Mode::Sandwich),
            _ => Err(format!("unknown mode {s:?}")),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Exact => "exact",
            Mode::Sandwich => "sandwich",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budgets {
    pub gonality: SearchBudget,
    /// Branch-and-bound node cap for the independence number.
    pub mis_nodes: Option<u64>,
    pub treewidth_limit: usize,
}

impl Default for Budgets {
    fn default() -> Budgets {
        Budgets {
            gonality: SearchBudget::UNLIMITED,
            mis_nodes: None,
            treewidth_limit: DEFAULT_TREEWIDTH_LIMIT,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub n_list: Vec<usize>,
    pub c_spec: MeanDegree,
    pub trials: usize,
    pub seed: u64,
    pub mode: Mode,
    pub budgets: Budgets,
    pub exact_envelope: usize,
    pub record_timings: bool,
    /// Worker cap; `None` uses the global rayon pool.
    pub threads: Option<usize>,
}

impl ExperimentConfig {
    pub fn new(n_list: Vec<usize>, c_spec: MeanDegree, trials: usize, seed: u64, mode: Mode) -> Self {
        ExperimentConfig {
            n_list,
            c_spec,
            trials,
            seed,
            mode,
            budgets: Budgets::default(),
            exact_envelope: DEFAULT_EXACT_ENVELOPE,
            record_timings: false,
            threads: None,
        }
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        if self.n_list.contains(&0) {
            return Err(ExperimentError::InvalidConfig("n must be positive".into()));
        }
        if self.mode == Mode::Exact {
            if let Some(&big) = self.n_list.iter().max().filter(|&&m| m > self.exact_envelope) {
                return Err(ExperimentError::InvalidConfig(format!(
                    "exact mode limited to n <= {}, got {big}",
                    self.exact_envelope
                )));
            }
        }
        for &n in &self.n_list {
            self.c_spec
                .params(n, 0)
                .map_err(|e| ExperimentError::InvalidConfig(e.to_string()))?;
        }
        Ok(())
    }
}

/// SplitMix64 finalizer.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// `splitmix64(splitmix64(master ^ splitmix64(n)) ^ trial)`.
pub fn trial_seed(master: u64, n: usize, trial: usize) -> u64 {
    splitmix64(splitmix64(master ^ splitmix64(n as u64)) ^ trial as u64)
}

/// One row of the CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub n: usize,
    pub c: f64,
    pub p: f64,
    pub trial: usize,
    pub seed: u64,
    pub connected: bool,
    pub genus: usize,
    pub alpha: usize,
    pub alpha_exact: bool,
    /// Degeneracy.
    pub tw_lb: usize,
    pub tw_exact: Option<usize>,
    /// Sum of component degeneracies; certified because gonality adds over
    /// components and dominates treewidth, which dominates degeneracy.
    pub gon_lb: usize,
    /// `n - alpha`.
    pub gon_ub: usize,
    /// Empty in sandwich mode or when the search budget ran out.
    pub gon_exact: Option<usize>,
    pub mode: Mode,
    pub ms_alpha: Option<u64>,
    pub ms_tw: Option<u64>,
    pub ms_gon: Option<u64>,
}

fn opt<T: ToString>(value: &Option<T>) -> String {
    value.as_ref().map(ToString::to_string).unwrap_or_default()
}

impl TrialRecord {
    pub fn to_csv_line(&self) -> String {
        [
            self.n.to_string(),
            self.c.to_string(),
            self.p.to_string(),
            self.trial.to_string(),
            self.seed.to_string(),
            self.connected.to_string(),
            self.genus.to_string(),
            self.alpha.to_string(),
            self.alpha_exact.to_string(),
            self.tw_lb.to_string(),
            opt(&self.tw_exact),
            self.gon_lb.to_string(),
            self.gon_ub.to_string(),
            opt(&self.gon_exact),
            self.mode.to_string(),
            opt(&self.ms_alpha),
            opt(&self.ms_tw),
            opt(&self.ms_gon),
        ]
        .join(",")
    }

    fn from_csv_line(line: usize, text: &str) -> Result<TrialRecord, ExperimentError> {
        let fields: Vec<&str> = text.split(',').collect();
        let bad = |detail: String| ExperimentError::Csv { line, detail };
        if fields.len() != 18 {
            return Err(bad(format!("expected 18 fields, found {}", fields.len())));
        }
        fn req<T: FromStr>(s: &str, name: &str, line: usize) -> Result<T, ExperimentError> {
            s.parse().map_err(|_| ExperimentError::Csv {
                line,
                detail: format!("bad {name} {s:?}"),
            })
        }
        fn maybe<T: FromStr>(s: &str, name: &str, line: usize) -> Result<Option<T>, ExperimentError> {
            if s.is_empty() {
                Ok(None)
            } else {
                req(s, name, line).map(Some)
            }
        }
        Ok(TrialRecord {
            n: req(fields[0], "n", line)?,
            c: req(fields[1], "c", line)?,
            p: req(fields[2], "p", line)?,
            trial: req(fields[3], "trial", line)?,
            seed: req(fields[4], "seed", line)?,
            connected: req(fields[5], "connected", line)?,
            genus: req(fields[6], "genus", line)?,
            alpha: req(fields[7], "alpha", line)?,
            alpha_exact: req(fields[8], "alpha_exact", line)?,
            tw_lb: req(fields[9], "tw_lb", line)?,
            tw_exact: maybe(fields[10], "tw_exact", line)?,
            gon_lb: req(fields[11], "gon_lb", line)?,
            gon_ub: req(fields[12], "gon_ub", line)?,
            gon_exact: maybe(fields[13], "gon_exact", line)?,
            mode: fields[14].parse().map_err(bad)?,
            ms_alpha: maybe(fields[15], "ms_alpha", line)?,
            ms_tw: maybe(fields[16], "ms_tw", line)?,
            ms_gon: maybe(fields[17], "ms_gon", line)?,
        })
    }
}

pub fn records_to_csv(records: &[TrialRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&r.to_csv_line());
        out.push('\n');
    }
    out
}

pub fn parse_csv(text: &str) -> Result<Vec<TrialRecord>, ExperimentError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h == CSV_HEADER => {}
        _ => {
            return Err(ExperimentError::Csv {
                line: 1,
                detail: "missing or wrong header".into(),
            })
        }
    }
    lines
        .filter(|(_, l)| !l.is_empty())
        .map(|(i, l)| TrialRecord::from_csv_line(i + 1, l))
        .collect()
}

fn elapsed_ms(start: Instant, record: bool) -> Option<u64> {
    record.then(|| start.elapsed().as_millis() as u64)
}

/// Samples one graph and measures every column.
pub fn run_trial(
    params: &GnpParams,
    trial: usize,
    mode: Mode,
    budgets: &Budgets,
    record_timings: bool,
) -> Result<TrialRecord, ExperimentError> {
    let g = Graph::sample_gnp(params);
    let n = params.n;

    let start = Instant::now();
    let mis = maximum_independent_set(&g, budgets.mis_nodes);
    let ms_alpha = elapsed_ms(start, record_timings);

    let start = Instant::now();
    let tw_lb = treewidth_lower_bound(&g);
    let tw_exact = treewidth_exact(&g, budgets.treewidth_limit).ok().map(|(w, _)| w);
    let ms_tw = elapsed_ms(start, record_timings);

    let components = g.connected_components();
    let gon_lb = components
        .iter()
        .filter(|c| c.len() > 1)
        .map(|c| g.induced(c).degeneracy())
        .sum();

    let start = Instant::now();
    let gon_exact = match mode {
        Mode::Exact => gonality(&g, budgets.gonality).ok().map(|r| r.value),
        Mode::Sandwich => None,
    };
    let ms_gon = match mode {
        Mode::Exact => elapsed_ms(start, record_timings),
        Mode::Sandwich => None,
    };

    let record = TrialRecord {
        n,
        c: params.c,
        p: params.p,
        trial,
        seed: params.seed,
        connected: components.len() == 1,
        genus: g.genus(),
        alpha: mis.alpha(),
        alpha_exact: mis.is_exact(),
        tw_lb,
        tw_exact,
        gon_lb,
        gon_ub: n - mis.alpha(),
        gon_exact,
        mode,
        ms_alpha,
        ms_tw,
        ms_gon,
    };
    check_sandwich(&record)?;
    Ok(record)
}

fn check_sandwich(r: &TrialRecord) -> Result<(), ExperimentError> {
    let fail = |detail: String| {
        Err(ExperimentError::SandwichViolation {
            n: r.n,
            trial: r.trial,
            detail,
        })
    };
    if r.tw_lb > r.gon_ub || r.gon_lb > r.gon_ub {
        return fail(format!("lower bound {} above upper bound {}", r.gon_lb, r.gon_ub));
    }
    if let Some(tw) = r.tw_exact {
        if r.tw_lb > tw {
            return fail(format!("degeneracy {} above treewidth {tw}", r.tw_lb));
        }
    }
    if let Some(gon) = r.gon_exact {
        if gon < r.gon_lb || gon > r.gon_ub {
            return fail(format!("gonality {gon} outside [{}, {}]", r.gon_lb, r.gon_ub));
        }
        if let Some(tw) = r.tw_exact {
            if gon < tw {
                return fail(format!("gonality {gon} below treewidth {tw}"));
            }
        }
    }
    Ok(())
}

/// Mean and sample standard deviation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub count: usize,
    pub mean: f64,
    pub sd: f64,
}

impl Moments {
    pub fn of(values: &[f64]) -> Option<Moments> {
        if values.is_empty() {
            return None;
        }
        let count = values.len();
        let mean = values.iter().sum::<f64>() / count as f64;
        let sd = if count > 1 {
            let ss: f64 = values.iter().map(|x| (x - mean).powi(2)).sum();
            (ss / (count - 1) as f64).sqrt()
        } else {
            0.0
        };
        Some(Moments { count, mean, sd })
    }

    /// Standard error of the mean.
    pub fn se(&self) -> f64 {
        self.sd / (self.count as f64).sqrt()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesPoint {
    pub n: usize,
    pub c: f64,
    pub trials: usize,
    pub connected: usize,
    /// `gon/n` over trials with an exact value.
    pub gon_ratio: Option<Moments>,
    pub tw_lb_ratio: Option<Moments>,
    pub gon_lb_ratio: Option<Moments>,
    pub upper_ratio: Option<Moments>,
    pub genus: Option<Moments>,
    /// `1 - (2/c)(ln c - ln ln c - ln 2 + 1)`, when `c > e`.
    pub frieze_upper_ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSummary {
    pub points: Vec<SeriesPoint>,
}

/// Aggregates records, grouped by `n` in first-appearance order.
pub fn summarize(records: &[TrialRecord]) -> ExperimentSummary {
    let mut ns: Vec<usize> = Vec::new();
    for r in records {
        if !ns.contains(&r.n) {
            ns.push(r.n);
        }
    }
    let points = ns
        .into_iter()
        .map(|n| {
            let rows: Vec<&TrialRecord> = records.iter().filter(|r| r.n == n).collect();
            let ratio = |f: &dyn Fn(&TrialRecord) -> Option<usize>| {
                let values: Vec<f64> = rows.iter().filter_map(|r| f(r)).map(|x| x as f64 / n as f64).collect();
                Moments::of(&values)
            };
            let c = rows[0].c;
            let genus: Vec<f64> = rows.iter().map(|r| r.genus as f64).collect();
            SeriesPoint {
                n,
                c,
                trials: rows.len(),
                connected: rows.iter().filter(|r| r.connected).count(),
                gon_ratio: ratio(&|r| r.gon_exact),
                tw_lb_ratio: ratio(&|r| Some(r.tw_lb)),
                gon_lb_ratio: ratio(&|r| Some(r.gon_lb)),
                upper_ratio: ratio(&|r| Some(r.gon_ub)),
                genus: Moments::of(&genus),
                frieze_upper_ratio: crate::bounds::frieze_alpha_estimate(n, c)
                    .ok()
                    .map(|a| 1.0 - a / n as f64),
            }
        })
        .collect();
    ExperimentSummary { points }
}

/// Runs all trials and returns the summary with the CSV text.
pub fn run_experiment(config: &ExperimentConfig) -> Result<(ExperimentSummary, String), ExperimentError> {
    config.validate()?;
    let jobs: Vec<(usize, usize)> = config
        .n_list
        .iter()
        .flat_map(|&n| (0..config.trials).map(move |t| (n, t)))
        .collect();
    let run = || {
        jobs.par_iter()
            .map(|&(n, t)| {
                let params = config.c_spec.params(n, trial_seed(config.seed, n, t))?;
                run_trial(&params, t, config.mode, &config.budgets, config.record_timings)
            })
            .collect::<Result<Vec<_>, _>>()
    };
    let mut records = match config.threads {
        Some(threads) => rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| ExperimentError::InvalidConfig(e.to_string()))?
            .install(run)?,
        None => run()?,
    };
    records.sort_by_key(|r| (r.n, r.trial));
    let summary = summarize(&records);
    Ok((summary, records_to_csv(&records)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub n: usize,
    pub gon_ratio: Option<Moments>,
    pub lower: f64,
    pub upper: f64,
    pub frieze_upper_ratio: Option<f64>,
    /// `lower <= gon <= upper` in the mean, and `lower <= upper`.
    pub consistent: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub rows: Vec<ReportRow>,
}

impl ConvergenceReport {
    pub fn consistent(&self) -> bool {
        self.rows.iter().all(|r| r.consistent)
    }

    /// Mean `gon/n` never decreases along the series, except for at most
    /// one decrease no larger than the larger standard error of the two
    /// points involved. False when any point lacks exact values.
    pub fn weakly_increasing(&self) -> bool {
        let mut inversions = 0;
        for pair in self.rows.windows(2) {
            let (Some(a), Some(b)) = (pair[0].gon_ratio, pair[1].gon_ratio) else {
                return false;
            };
            if b.mean < a.mean {
                inversions += 1;
                if inversions > 1 || a.mean - b.mean > a.se().max(b.se()) {
                    return false;
                }
            }
        }
        true
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,gon_ratio,gon_ratio_se,lower_ratio,upper_ratio,frieze_upper_ratio,consistent\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                r.n,
                opt(&r.gon_ratio.map(|m| m.mean)),
                opt(&r.gon_ratio.map(|m| m.se())),
                r.lower,
                r.upper,
                opt(&r.frieze_upper_ratio),
                r.consistent
            ));
        }
        out
    }
}

/// Per-`n` ratio series against the certified envelope.
pub fn convergence_report(summary: &ExperimentSummary) -> Result<ConvergenceReport, ExperimentError> {
    if summary.points.len() < 2 {
        return Err(ExperimentError::InvalidConfig(
            "convergence report needs at least two values of n".into(),
        ));
    }
    let rows = summary
        .points
        .iter()
        .map(|p| {
            let lower = p.gon_lb_ratio.map_or(0.0, |m| m.mean);
            let upper = p.upper_ratio.map_or(1.0, |m| m.mean);
            let inside = p
                .gon_ratio
                .map_or(true, |m| lower <= m.mean + 1e-12 && m.mean <= upper + 1e-12);
            ReportRow {
                n: p.n,
                gon_ratio: p.gon_ratio,
                lower,
                upper,
                frieze_upper_ratio: p.frieze_upper_ratio,
                consistent: lower <= upper && inside,
            }
        })
        .collect();
    Ok(ConvergenceReport { rows })
}
