//! `treeprob`: exact tree probabilities for random digraphs built from
//! subset tuples.
//!
//! Every invocation with the same flags and seed produces byte-identical
//! output. Exit codes: 0 on success (all cells pass for `verify`), 1 when a
//! `verify` sweep finds a mismatched cell, 2 on usage or domain errors.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use treeprob::counting::{
    cardinality_m, cardinality_m_by_coefficient, cardinality_s, conjecture1_prediction,
    count_assignments, exact_pseudoforest_probability, exact_tree_probability, theorem_prediction,
    tuples,
};
use treeprob::montecarlo::estimate_tree_probability;
use treeprob::ratio::{format_ratio, BigCount};
use treeprob::verify::{
    verify_conjecture1, verify_conjecture2, verify_pdet_lemmas, verify_prop1, verify_theorem,
    GridReport,
};
use treeprob::{ArcRule, AssignmentMode, OccupancyVector, CellSpace, Rational, SubsetMask, MAX_K};

#[derive(Parser)]
#[command(
    name = "treeprob",
    version,
    about = "Exact tree probabilities for random digraphs built from subset tuples",
    long_about = "Builds digraphs from tuples of subsets of [k] via the alpha, beta, gamma, \
                  and delta arc rules, and computes tree probabilities, closed-form \
                  predictions, family cardinalities, event-matrix determinants, Monte Carlo \
                  estimates, and full verification sweeps. Everything except sampling is in \
                  exact rational arithmetic."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format (csv applies to verify reports only).
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,

    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Worker threads for sweeps and sampling (0 = all cores).
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Rule {
    Alpha,
    Beta,
    Gamma,
    Delta,
}

impl From<Rule> for ArcRule {
    fn from(r: Rule) -> ArcRule {
        match r {
            Rule::Alpha => ArcRule::Alpha,
            Rule::Beta => ArcRule::Beta,
            Rule::Gamma => ArcRule::Gamma,
            Rule::Delta => ArcRule::Delta,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Surjection,
    Function,
    Identity,
}

impl From<Mode> for AssignmentMode {
    fn from(m: Mode) -> AssignmentMode {
        match m {
            Mode::Surjection => AssignmentMode::Surjection,
            Mode::Function => AssignmentMode::Function,
            Mode::Identity => AssignmentMode::Identity,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum CountSet {
    /// Tuples with the given occupancy.
    S,
    /// Proper tuples (no entry equals the full set).
    M,
    /// Surjections from the arc origins onto the subset indices.
    Surjections,
    /// All functions from the arc origins to the subset indices.
    Functions,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    /// Closed-form product / alternating sum.
    Formula,
    /// Polynomial coefficient extraction.
    Coefficient,
    /// Explicit enumeration.
    Enumerate,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MatrixName {
    /// Reduced (k-1) x (k-1) difference matrix (alpha, beta, gamma).
    #[value(name = "l-prime")]
    LPrime,
    /// Bordered k x k matrix with a full-space last row (all four rules).
    M,
    /// Row-elimination stage a (alpha, beta).
    #[value(name = "m-a")]
    MA,
    /// Degenerate stage a with pivot swapped; determinant vanishes.
    #[value(name = "n-a")]
    NA,
    /// Gamma pivot matrix at row a.
    #[value(name = "q-a")]
    QA,
    /// Delta expansion matrix for a marker set D.
    #[value(name = "m-d")]
    MD,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Theorem,
    #[value(name = "conjecture1")]
    Conjecture1,
    #[value(name = "conjecture2")]
    Conjecture2,
    Lemmas,
    #[value(name = "prop1")]
    Prop1,
}

#[derive(Subcommand)]
enum Command {
    /// Exact tree probability of a cell, by full enumeration.
    Prob {
        #[arg(long, value_enum)]
        zeta: Rule,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        r: u32,
        /// Comma-separated occupancy vector, e.g. 1,1,1 (length k).
        #[arg(long)]
        p: String,
        #[arg(long, value_enum, default_value = "surjection")]
        mode: Mode,
    },
    /// Closed-form prediction for the cell (conjectured for delta).
    Predict {
        #[arg(long, value_enum)]
        zeta: Rule,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        p: String,
    },
    /// Cardinality of a tuple family or assignment class.
    Count {
        #[arg(long, value_enum)]
        set: CountSet,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        r: u32,
        /// Occupancy vector; required for sets s and m.
        #[arg(long)]
        p: Option<String>,
        #[arg(long, value_enum, default_value = "formula")]
        method: Method,
    },
    /// Pr-determinant of a named event matrix over the (tuple, surjection)
    /// space of a cell.
    Pdet {
        #[arg(long, value_enum)]
        matrix: MatrixName,
        /// Arc rule; required for l-prime, m, m-a, n-a.
        #[arg(long, value_enum)]
        zeta: Option<Rule>,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        p: String,
        /// Stage / pivot index; required for m-a, n-a, q-a.
        #[arg(long)]
        a: Option<u32>,
        /// Comma-separated marker set inside [k-1] for m-d, e.g. 1,3.
        /// Omit for the empty set.
        #[arg(long)]
        d: Option<String>,
    },
    /// Monte Carlo estimate of a cell's tree probability.
    Sample {
        #[arg(long, value_enum)]
        zeta: Rule,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        p: String,
        #[arg(long, value_enum, default_value = "surjection")]
        mode: Mode,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run a verification sweep; exits 1 if any cell fails.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        /// Largest ground-set size to sweep (grid suites).
        #[arg(long = "kmax", default_value_t = 4)]
        kmax: u32,
        /// Randomized case count for prop1 (default 200).
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Exact probability that the digraph is a pseudo-forest (every cycle
    /// a loop). Enumeration only; no closed form is asserted.
    Pseudoforest {
        #[arg(long, value_enum)]
        zeta: Rule,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        p: String,
        #[arg(long, value_enum, default_value = "surjection")]
        mode: Mode,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    let threads = cli.jobs;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| format!("could not configure {threads} worker threads: {e}"))?;

    let format = cli.format;
    let (body, code) = match cli.command {
        Command::Prob { zeta, k, r, p, mode } => {
            let p = parse_occupancy(k, &p)?;
            check_digraph_params(k, r)?;
            let value = exact_tree_probability(zeta.into(), &p, r, mode.into())
                .map_err(|e| e.to_string())?;
            (render_ratio(format, &value)?, ExitCode::SUCCESS)
        }
        Command::Predict { zeta, k, r, p } => {
            let p = parse_occupancy(k, &p)?;
            check_digraph_params(k, r)?;
            let value = match zeta {
                Rule::Delta => conjecture1_prediction(&p, r),
                _ => theorem_prediction(zeta.into(), &p, r),
            }
            .map_err(|e| e.to_string())?;
            (render_ratio(format, &value)?, ExitCode::SUCCESS)
        }
        Command::Count { set, k, r, p, method } => {
            let value = run_count(set, k, r, p.as_deref(), method)?;
            (render_count(format, &value)?, ExitCode::SUCCESS)
        }
        Command::Pdet { matrix, zeta, k, r, p, a, d } => {
            let p = parse_occupancy(k, &p)?;
            check_digraph_params(k, r)?;
            let value = run_pdet(matrix, zeta, k, r, &p, a, d.as_deref())?;
            (render_ratio(format, &value)?, ExitCode::SUCCESS)
        }
        Command::Sample { zeta, k, r, p, mode, trials, seed } => {
            let p = parse_occupancy(k, &p)?;
            check_digraph_params(k, r)?;
            if trials == 0 {
                return Err("--trials must be at least 1".into());
            }
            let est = estimate_tree_probability(zeta.into(), &p, r, mode.into(), trials, seed)
                .map_err(|e| e.to_string())?;
            let body = match format {
                Format::Text => format!(
                    "mean={} stderr={} trials={} seed={}\n",
                    est.mean, est.stderr, est.trials, est.seed
                ),
                Format::Json => format!(
                    "{}\n",
                    serde_json::json!({
                        "mean": est.mean,
                        "stderr": est.stderr,
                        "trials": est.trials,
                        "seed": est.seed,
                    })
                ),
                Format::Csv => return Err("csv output applies to verify reports only".into()),
            };
            (body, ExitCode::SUCCESS)
        }
        Command::Verify { suite, kmax, trials, seed } => {
            if !(2..=MAX_K).contains(&kmax) {
                return Err(format!("--kmax must be between 2 and {MAX_K}"));
            }
            let report = run_suite(suite, kmax, trials, seed);
            let body = match format {
                Format::Text => report.to_text(),
                Format::Json => format!("{}\n", report.to_json()),
                Format::Csv => report.to_csv(),
            };
            let code = if report.all_pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            };
            (body, code)
        }
        Command::Pseudoforest { zeta, k, r, p, mode } => {
            let p = parse_occupancy(k, &p)?;
            check_digraph_params(k, r)?;
            let value = exact_pseudoforest_probability(zeta.into(), &p, r, mode.into())
                .map_err(|e| e.to_string())?;
            (render_ratio(format, &value)?, ExitCode::SUCCESS)
        }
    };

    match cli.output {
        Some(path) => {
            let mut file = std::fs::File::create(&path)
                .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
            file.write_all(body.as_bytes())
                .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
        }
        None => {
            print!("{body}");
        }
    }
    Ok(code)
}

fn parse_occupancy(k: u32, text: &str) -> Result<OccupancyVector, String> {
    if !(1..=MAX_K).contains(&k) {
        return Err(format!("--k must be between 1 and {MAX_K}"));
    }
    let entries: Result<Vec<u32>, String> = text
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<u32>()
                .map_err(|_| format!("--p entry '{t}' is not a non-negative integer"))
        })
        .collect();
    let entries = entries?;
    if entries.len() != k as usize {
        return Err(format!(
            "--p has {} entries but --k is {k}; the lengths must match",
            entries.len()
        ));
    }
    Ok(OccupancyVector::new(entries))
}

fn check_digraph_params(k: u32, r: u32) -> Result<(), String> {
    if k < 2 {
        return Err("--k must be at least 2 for digraph commands".into());
    }
    if r < 1 {
        return Err("--r must be at least 1".into());
    }
    Ok(())
}

fn run_count(
    set: CountSet,
    k: u32,
    r: u32,
    p: Option<&str>,
    method: Method,
) -> Result<BigCount, String> {
    if r < 1 {
        return Err("--r must be at least 1".into());
    }
    match set {
        CountSet::S | CountSet::M => {
            let p = parse_occupancy(
                k,
                p.ok_or("--p is required when counting tuple families (--set s or m)")?,
            )?;
            Ok(match (set, method) {
                (CountSet::S, Method::Formula) => cardinality_s(&p, r),
                (CountSet::S, Method::Enumerate) => BigCount::from(tuples(&p, r, false).count()),
                (CountSet::S, Method::Coefficient) => {
                    return Err("--method coefficient applies to --set m only".into())
                }
                (CountSet::M, Method::Formula) => cardinality_m(&p, r),
                (CountSet::M, Method::Coefficient) => {
                    let cells: u128 = p.counts().iter().map(|&c| c as u128 + 1).product();
                    if cells > 1 << 26 {
                        return Err(format!(
                            "coefficient table would need {cells} cells; use --method formula"
                        ));
                    }
                    cardinality_m_by_coefficient(&p, r)
                }
                (CountSet::M, Method::Enumerate) => BigCount::from(tuples(&p, r, true).count()),
                _ => unreachable!("assignment sets handled below"),
            })
        }
        CountSet::Surjections | CountSet::Functions => {
            if method != Method::Formula {
                return Err("assignment classes are counted by formula only".into());
            }
            if p.is_some() {
                return Err("--p does not apply to assignment counts".into());
            }
            if k < 2 {
                return Err("--k must be at least 2 for assignment counts".into());
            }
            let mode = match set {
                CountSet::Surjections => AssignmentMode::Surjection,
                _ => AssignmentMode::Function,
            };
            count_assignments(k, r, mode).map_err(|e| e.to_string())
        }
    }
}

fn run_pdet(
    matrix: MatrixName,
    zeta: Option<Rule>,
    k: u32,
    r: u32,
    p: &OccupancyVector,
    a: Option<u32>,
    d: Option<&str>,
) -> Result<Rational, String> {
    if k > 8 {
        return Err("--k must be at most 8 for determinant expansion".into());
    }
    let space = CellSpace::build(p, r).map_err(|e| e.to_string())?;

    let need_rule = |allowed: &[ArcRule]| -> Result<ArcRule, String> {
        let rule: ArcRule = zeta
            .ok_or("--zeta is required for this matrix")?
            .into();
        if !allowed.contains(&rule) {
            return Err(format!("--zeta {rule} does not apply to this matrix"));
        }
        Ok(rule)
    };
    let need_a = || a.ok_or_else(|| "--a is required for this matrix".to_string());
    let no_a = |used: bool| -> Result<(), String> {
        if !used && a.is_some() {
            return Err("--a does not apply to this matrix".into());
        }
        Ok(())
    };
    let no_d = |used: bool| -> Result<(), String> {
        if !used && d.is_some() {
            return Err("--d does not apply to this matrix".into());
        }
        Ok(())
    };

    let value = match matrix {
        MatrixName::LPrime => {
            no_a(false)?;
            no_d(false)?;
            let rule = need_rule(&[ArcRule::Alpha, ArcRule::Beta, ArcRule::Gamma])?;
            space.matrix_l_prime(rule).pdet()
        }
        MatrixName::M => {
            no_a(false)?;
            no_d(false)?;
            let rule = need_rule(&ArcRule::ALL)?;
            space.matrix_m(rule).pdet()
        }
        MatrixName::MA => {
            no_d(false)?;
            let rule = need_rule(&[ArcRule::Alpha, ArcRule::Beta])?;
            let a = need_a()?;
            let max = if rule == ArcRule::Alpha { k } else { k - 1 };
            if !(1..=max).contains(&a) {
                return Err(format!("--a must lie in [1,{max}] for this matrix"));
            }
            space.matrix_m_a(rule, a).pdet()
        }
        MatrixName::NA => {
            no_d(false)?;
            let rule = need_rule(&[ArcRule::Alpha, ArcRule::Beta])?;
            let a = need_a()?;
            if !(2..=k.saturating_sub(1)).contains(&a) {
                return Err(format!("--a must lie in [2,{}] for this matrix", k - 1));
            }
            space.matrix_n_a(rule, a).pdet()
        }
        MatrixName::QA => {
            if zeta.is_some() {
                return Err("--zeta does not apply to matrix q-a".into());
            }
            no_d(false)?;
            let a = need_a()?;
            if !(1..=k).contains(&a) {
                return Err(format!("--a must lie in [1,{k}] for this matrix"));
            }
            space.matrix_q_a(a).pdet()
        }
        MatrixName::MD => {
            if zeta.is_some() {
                return Err("--zeta does not apply to matrix m-d".into());
            }
            no_a(false)?;
            let mut markers = SubsetMask::empty(k - 1);
            if let Some(list) = d {
                for item in list.split(',').map(str::trim).filter(|t| !t.is_empty()) {
                    let v: u32 = item
                        .parse()
                        .map_err(|_| format!("--d entry '{item}' is not an integer"))?;
                    if !(1..=k - 1).contains(&v) {
                        return Err(format!("--d entry {v} lies outside [1,{}]", k - 1));
                    }
                    markers.insert(v);
                }
            }
            space.matrix_m_d(&markers).pdet()
        }
    };
    Ok(value)
}

fn run_suite(suite: Suite, kmax: u32, trials: Option<u64>, seed: u64) -> GridReport {
    match suite {
        Suite::Theorem => verify_theorem(kmax),
        Suite::Conjecture1 => verify_conjecture1(kmax),
        Suite::Conjecture2 => verify_conjecture2(kmax),
        Suite::Lemmas => verify_pdet_lemmas(kmax),
        Suite::Prop1 => verify_prop1(trials.unwrap_or(200), seed),
    }
}

fn render_ratio(format: Format, value: &Rational) -> Result<String, String> {
    Ok(match format {
        Format::Text => format!("{}\n", format_ratio(value)),
        Format::Json => format!(
            "{}\n",
            serde_json::json!({
                "num": value.numer().to_string(),
                "den": value.denom().to_string(),
            })
        ),
        Format::Csv => return Err("csv output applies to verify reports only".into()),
    })
}

fn render_count(format: Format, value: &BigCount) -> Result<String, String> {
    Ok(match format {
        Format::Text => format!("{value}\n"),
        Format::Json => format!("{}\n", serde_json::json!({ "value": value.to_string() })),
        Format::Csv => return Err("csv output applies to verify reports only".into()),
    })
}
