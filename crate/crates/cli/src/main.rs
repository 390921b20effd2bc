//! `chipfire` command-line front end.
//!
//! Exit codes: 0 on success, 1 for usage and domain errors, 2 when a budget
//! ran out or the answer is otherwise inconclusive.

use std::fs;
use std::io::{self, Read};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use chipfire::bounds::{
    frieze_alpha_estimate, maximum_independent_set, treewidth_exact, treewidth_lower_bound,
    DEFAULT_TREEWIDTH_LIMIT,
};
use chipfire::divisor::{q_reduce, rank};
use chipfire::experiments::{convergence_report, run_experiment, ExperimentConfig, MeanDegree, Mode};
use chipfire::gonality::{clifford_index, gonality, GonalityError, CLIFFORD_CLASS_LIMIT};
use chipfire::{Divisor, GnpParams, Graph, PositiveRankCertificate, SearchBudget};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "chipfire", version, about = "Chip-firing, gonality and random-graph bounds")]
struct Cli {
    /// Machine-readable output only: no labels, nothing on stderr
    #[arg(long, global = true)]
    porcelain: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GraphArg {
    /// Graph file ("n m" header then one "u v" edge per line); "-" reads stdin
    graph: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Exact gonality with a positive-rank certificate
    Gonality {
        #[command(flatten)]
        input: GraphArg,
        /// Maximum candidates tested per degree
        #[arg(long)]
        budget: Option<u64>,
        /// Print the witness divisor and per-vertex firing scripts
        #[arg(long)]
        certificate: bool,
        /// Also compute the Clifford index
        #[arg(long)]
        clifford: bool,
        /// Write the certificate here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rank of a divisor
    Rank {
        #[command(flatten)]
        input: GraphArg,
        #[arg(long, allow_hyphen_values = true)]
        divisor: String,
    },
    /// q-reduced representative of a divisor
    Reduce {
        #[command(flatten)]
        input: GraphArg,
        #[arg(long, allow_hyphen_values = true)]
        divisor: String,
        #[arg(long, default_value_t = 0)]
        base: usize,
    },
    /// Degree, treewidth and independence bounds
    Bounds {
        #[command(flatten)]
        input: GraphArg,
        /// Node budget for the independence-number search
        #[arg(long)]
        budget: Option<u64>,
        /// Largest graph given to the exact treewidth search
        #[arg(long, default_value_t = DEFAULT_TREEWIDTH_LIMIT)]
        tw_limit: usize,
        /// With --c, also print the independence estimate for G(n, c/n)
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        c: Option<f64>,
        /// Write the tree decomposition here
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample G(n, p) with p = c/n, or with --p given directly
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long, conflicts_with = "p", required_unless_present = "p")]
        c: Option<f64>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo gonality experiment; writes the per-trial CSV
    Experiment {
        /// Comma-separated vertex counts
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        /// Mean degree: a number, "sqrt", "log", or "p=<prob>"
        #[arg(long, default_value = "sqrt")]
        c: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// exact | sandwich
        #[arg(long, default_value = "exact")]
        mode: String,
        /// Maximum gonality candidates per degree
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        threads: Option<usize>,
        /// Fill the ms_* columns (makes the CSV nondeterministic)
        #[arg(long)]
        timings: bool,
        /// CSV destination; stdout when absent
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the per-n ratio report here
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Re-check a certificate by direct firing
    Verify {
        #[command(flatten)]
        input: GraphArg,
        certificate: PathBuf,
    },
}

enum Failure {
    Domain(String),
    Inconclusive(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Failure {
        Failure::Domain(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn read_text(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))
}

fn load(input: &GraphArg) -> Result<Graph, Failure> {
    Ok(Graph::parse(&read_text(&input.graph)?)?)
}

fn divisor_for(g: &Graph, text: &str) -> Result<Divisor, Failure> {
    let d: Divisor = text.parse()?;
    if d.len() != g.vertex_count() {
        return Err(Failure::Domain(format!(
            "divisor has {} entries, graph has {} vertices",
            d.len(),
            g.vertex_count()
        )));
    }
    Ok(d)
}

fn emit(out: Option<&Path>, text: &str) -> Outcome {
    match out {
        Some(path) => fs::write(path, format!("{text}\n"))
            .map_err(|e| Failure::Domain(format!("{}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Outcome {
    let quiet = cli.porcelain;
    let label = |key: &str, value: &dyn std::fmt::Display| {
        if quiet {
            println!("{value}");
        } else {
            println!("{key} {value}");
        }
    };
    match cli.command {
        Command::Gonality {
            input,
            budget,
            certificate,
            clifford,
            out,
        } => {
            let g = load(&input)?;
            let budget = budget.map_or(SearchBudget::UNLIMITED, SearchBudget::per_degree);
            let result = match gonality(&g, budget) {
                Ok(r) => r,
                Err(e @ GonalityError::BudgetExhausted { .. }) => {
                    return Err(Failure::Inconclusive(e.to_string()))
                }
                Err(e) => return Err(e.into()),
            };
            println!("{}", result.value);
            if !quiet {
                for a in &result.degrees_searched {
                    eprintln!(
                        "component {} degree {}: {} candidates{}",
                        a.component,
                        a.degree,
                        a.candidates_tested,
                        if a.found { ", found" } else { "" }
                    );
                }
            }
            if certificate {
                emit(out.as_deref(), &result.certificate.to_text())?;
            }
            if clifford {
                match clifford_index(&g, CLIFFORD_CLASS_LIMIT)? {
                    Some(w) => label("clifford", &format!("{} rank {} divisor {}", w.value, w.rank, w.divisor)),
                    None => label("clifford", &"none"),
                }
            }
            Ok(())
        }
        Command::Rank { input, divisor } => {
            let g = load(&input)?;
            let d = divisor_for(&g, &divisor)?;
            println!("{}", rank(&g, &d)?);
            Ok(())
        }
        Command::Reduce { input, divisor, base } => {
            let g = load(&input)?;
            let d = divisor_for(&g, &divisor)?;
            if base >= g.vertex_count() {
                return Err(Failure::Domain(format!("base {base} is not a vertex")));
            }
            println!("{}", q_reduce(&g, &d, base)?);
            Ok(())
        }
        Command::Bounds {
            input,
            budget,
            tw_limit,
            n,
            c,
            out,
        } => {
            let g = load(&input)?;
            let frieze = match (n, c) {
                (Some(n), Some(c)) => Some(frieze_alpha_estimate(n, c)?),
                (None, None) => None,
                _ => return Err(Failure::Domain("--n and --c go together".into())),
            };
            let mis = maximum_independent_set(&g, budget);
            label("min_degree", &g.min_degree());
            label("degeneracy", &treewidth_lower_bound(&g));
            match treewidth_exact(&g, tw_limit) {
                Ok((tw, td)) => {
                    label("treewidth", &tw);
                    if let Some(path) = out.as_deref() {
                        emit(Some(path), &td.to_text())?;
                    }
                }
                Err(e) => label("treewidth", &format!("skipped: {e}")),
            }
            let status = if mis.is_exact() { "exact" } else { "lower_bound" };
            label("alpha", &format!("{} {status}", mis.alpha()));
            label("upper", &(g.vertex_count() - mis.alpha()));
            if let Some(f) = frieze {
                label("frieze", &format!("{f:.4}"));
            }
            if mis.is_exact() {
                Ok(())
            } else {
                Err(Failure::Inconclusive("independence search budget exhausted".into()))
            }
        }
        Command::Sample { n, c, p, seed, out } => {
            let params = match (c, p) {
                (Some(c), _) => GnpParams::new(n, c, seed)?,
                (None, Some(p)) => GnpParams::with_probability(n, p, seed)?,
                (None, None) => unreachable!("clap requires one of --c and --p"),
            };
            emit(out.as_deref(), &Graph::sample_gnp(&params).serialize())
        }
        Command::Experiment {
            n,
            c,
            trials,
            seed,
            mode,
            budget,
            threads,
            timings,
            out,
            report,
        } => {
            let c_spec: MeanDegree = c.parse()?;
            let mode: Mode = mode.parse()?;
            let mut config = ExperimentConfig::new(n, c_spec, trials, seed, mode);
            if let Some(b) = budget {
                config.budgets.gonality = SearchBudget::per_degree(b);
            }
            config.threads = threads;
            config.record_timings = timings;
            let (summary, csv) = run_experiment(&config)?;
            match out.as_deref() {
                Some(path) => fs::write(path, &csv).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))?,
                None => print!("{csv}"),
            }
            let missing: usize = summary
                .points
                .iter()
                .map(|p| p.trials - p.gon_ratio.map_or(0, |m| m.count))
                .sum();
            if summary.points.len() >= 2 {
                let ratios = convergence_report(&summary)?;
                if let Some(path) = report.as_deref() {
                    fs::write(path, ratios.to_csv()).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))?;
                }
                if !quiet {
                    eprint!("{}", ratios.to_csv());
                    eprintln!("weakly increasing: {}", ratios.weakly_increasing());
                }
            }
            if mode == Mode::Exact && missing > 0 {
                return Err(Failure::Inconclusive(format!("{missing} trials without an exact gonality")));
            }
            Ok(())
        }
        Command::Verify { input, certificate } => {
            let g = load(&input)?;
            let cert = PositiveRankCertificate::parse(&read_text(&certificate)?)?;
            cert.verify(&g)?;
            label("verified degree", &cert.degree());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => e.exit(),
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Inconclusive(msg)) => {
            eprintln!("inconclusive: {msg}");
            ExitCode::from(2)
        }
    }
}
