//! The `puresep` command line.
//!
//! Exit status: 0 separable, 1 entangled, 2 usage or input error, 3 numerical
//! failure or disagreement between criteria. With `--machine`, each command
//! prints one JSON object per line instead of the human report.

use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::bench::{self, Sweep, DEFAULT_MAX_BYTES, DET_DENSE_MAX_ROWS};
use crate::criteria::{classify, Criterion, ScanMode, Verdict, Witness};
use crate::error::{Result, SepError};
use crate::generators::{cat_state, random_product_state, random_state, w_state};
use crate::io::{format_state, parse_state, StateFile};
use crate::oracle::{oracle_schmidt, OracleReport};
use crate::state::{Amplitude, DimensionProfile, PureState};
use crate::tolerance::ToleranceConfig;

pub const EXIT_SEPARABLE: i32 = 0;
pub const EXIT_ENTANGLED: i32 = 1;

#[derive(Debug, Parser)]
#[command(
    name = "puresep",
    version,
    about = "Full-separability tests for multipartite pure states"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether the state in a file is fully separable.
    Check(CheckArgs),
    /// Write a generated state to a file (or stdout).
    Gen(GenArgs),
    /// Operation-count sweeps with log-log slope fits.
    Bench(BenchArgs),
    /// Schmidt coefficients of every single-party cut.
    Oracle(OracleArgs),
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// State file; "-" reads standard input.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value = "all")]
    pub criterion: CriterionChoice,
    /// Also sets the determinant tolerance to its square unless --tol-det is given.
    #[arg(long)]
    pub tol_rank: Option<f64>,
    #[arg(long)]
    pub tol_det: Option<f64>,
    #[arg(long)]
    pub tol_zero: Option<f64>,
    #[arg(long)]
    pub machine: bool,
    /// Scan everything instead of stopping at the first violation.
    #[arg(long)]
    pub exhaustive: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CriterionChoice {
    Det,
    Rank,
    Minors,
    Prop,
    All,
}

impl CriterionChoice {
    fn criteria(self) -> Vec<Criterion> {
        match self {
            CriterionChoice::Det => vec![Criterion::Det],
            CriterionChoice::Rank => vec![Criterion::Rank],
            CriterionChoice::Minors => vec![Criterion::Minors],
            CriterionChoice::Prop => vec![Criterion::Prop],
            CriterionChoice::All => Criterion::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    Cat,
    W,
    /// |0...0>
    Product,
    Random,
    RandomProduct,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    pub kind: GenKind,
    /// Party count; qubits unless --dims or --levels say otherwise.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, num_args = 1..)]
    pub dims: Option<Vec<usize>>,
    /// Local dimension of a cat state.
    #[arg(long, default_value_t = 2)]
    pub levels: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DimsFamily {
    Qubit,
    Qutrit,
}

impl DimsFamily {
    fn level(self) -> usize {
        match self {
            DimsFamily::Qubit => 2,
            DimsFamily::Qutrit => 3,
        }
    }
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Local dimension of the party-count sweep.
    #[arg(long, default_value = "qubit")]
    pub dims_family: DimsFamily,
    /// Below about four parties the lower-order terms of the counts still bend the fit.
    #[arg(long, default_value_t = 4)]
    pub n_min: usize,
    #[arg(long, default_value_t = 10)]
    pub n_max: usize,
    #[arg(long, default_value_t = 3)]
    pub reps: usize,
    #[arg(long, value_delimiter = ',', default_value = "det,minors,prop")]
    pub criteria: Vec<Criterion>,
    /// Party count of the local-dimension sweep.
    #[arg(long, default_value_t = 2)]
    pub fixed_n: usize,
    #[arg(long, default_value_t = 8)]
    pub q_min: usize,
    #[arg(long, default_value_t = 32)]
    pub q_max: usize,
    #[arg(long, default_value_t = DEFAULT_MAX_BYTES)]
    pub max_bytes: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub machine: bool,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub machine: bool,
}

/// Runs a parsed command and returns the process exit status.
pub fn run(cli: Cli) -> i32 {
    match cli.command {
        Command::Check(args) => cmd_check(&args),
        Command::Gen(args) => report_failure(cmd_gen(&args), false),
        Command::Bench(args) => {
            let machine = args.machine;
            report_failure(cmd_bench(&args), machine)
        }
        Command::Oracle(args) => cmd_oracle(&args),
    }
}

fn report_failure(result: Result<i32>, machine: bool) -> i32 {
    result.unwrap_or_else(|e| {
        print_error(&e, machine);
        e.exit_code()
    })
}

fn print_error(e: &SepError, machine: bool) {
    if machine {
        println!("{}", error_record(e));
    }
    eprintln!("error: {e}");
}

fn error_kind(e: &SepError) -> &'static str {
    match e {
        SepError::Index { .. } => "index",
        SepError::Argument(_) => "argument",
        SepError::Parse { .. } => "parse",
        SepError::Io(_) => "io",
        SepError::Shape { .. } => "shape",
        SepError::Degenerate(_) => "degenerate",
        SepError::Precondition(_) => "precondition",
        SepError::Logic(_) => "logic",
        SepError::Numerical { .. } => "numerical",
        SepError::Conflict { .. } => "conflict",
    }
}

fn error_record(e: &SepError) -> Value {
    let mut record = json!({
        "status": "error",
        "exit_code": e.exit_code(),
        "error": error_kind(e),
        "message": e.to_string(),
    });
    match e {
        SepError::Parse { line, .. } => record["line"] = json!(line),
        SepError::Numerical { fidelity, .. } => record["fidelity"] = json!(fidelity),
        SepError::Conflict { first, second } => record["conflict"] = json!([first, second]),
        _ => {}
    }
    record
}

fn read_input(path: &Path, tol: &ToleranceConfig) -> Result<StateFile> {
    let mut text = String::new();
    if path == Path::new("-") {
        io::stdin().read_to_string(&mut text)?;
    } else {
        text = std::fs::read_to_string(path)?;
    }
    parse_state(&text, tol)
}

fn tolerances(args: &CheckArgs) -> Result<ToleranceConfig> {
    let mut tol = ToleranceConfig::default();
    if let Some(r) = args.tol_rank {
        tol = tol.with_rank(r);
    }
    if let Some(d) = args.tol_det {
        tol.det = d;
    }
    if let Some(z) = args.tol_zero {
        tol.zero = z;
    }
    tol.validate()?;
    Ok(tol)
}

fn verdict_word(separable: bool) -> &'static str {
    if separable {
        "separable"
    } else {
        "entangled"
    }
}

fn exit_for(separable: bool) -> i32 {
    if separable {
        EXIT_SEPARABLE
    } else {
        EXIT_ENTANGLED
    }
}

fn cmd_check(args: &CheckArgs) -> i32 {
    let mode = if args.exhaustive {
        ScanMode::Exhaustive
    } else {
        ScanMode::FirstViolation
    };
    let outcome = tolerances(args).and_then(|tol| {
        let file = read_input(&args.input, &tol)?;
        let verdict = classify(&file.state, &tol, &args.criterion.criteria(), mode)?;
        Ok((file, verdict))
    });
    match outcome {
        Ok((file, verdict)) => {
            if args.machine {
                let record = json!({
                    "status": verdict_word(verdict.separable),
                    "exit_code": exit_for(verdict.separable),
                    "input": args.input,
                    "dims": file.state.dims(),
                    "rescaled": file.rescaled,
                    "separable": verdict.separable,
                    "reports": verdict.reports,
                    "factors": verdict.factors.as_ref().map(|f| {
                        f.iter().map(|s| s.amplitudes().to_vec()).collect::<Vec<_>>()
                    }),
                    "fidelity": verdict.fidelity,
                });
                println!("{record}");
            } else {
                print_verdict(&file.state, &verdict);
            }
            exit_for(verdict.separable)
        }
        Err(e) => {
            print_error(&e, args.machine);
            e.exit_code()
        }
    }
}

fn fmt_amplitude(a: Amplitude) -> String {
    format!("{:.12}{:+.12}i", a.re, a.im)
}

fn fmt_party_values(values: &[Option<f64>]) -> String {
    values
        .iter()
        .map(|v| v.map_or("-".to_string(), |x| format!("{x:.6e}")))
        .collect::<Vec<_>>()
        .join(" ")
}

fn describe_witness(w: &Witness) -> String {
    match w {
        Witness::Determinant { party, value } => {
            format!("party {}: det(rho - E) = {value:.15}", party + 1)
        }
        Witness::RankRatio { party, ratio } => {
            format!("party {}: sigma2/sigma1 = {ratio:.6e}", party + 1)
        }
        Witness::Minor {
            party,
            rows,
            cols,
            value,
        } => format!(
            "party {}: minor rows ({}, {}) cols ({}, {}) = {}",
            party + 1,
            rows[0] + 1,
            rows[1] + 1,
            cols[0] + 1,
            cols[1] + 1,
            fmt_amplitude(*value)
        ),
        Witness::Column {
            party,
            pivot_row,
            pivot_col,
            column,
            row,
            pivot,
            coefficient,
            lhs,
            rhs,
            residual,
            ..
        } => {
            format!(
                "party {}: pivot {} at ({}, {}), coefficient {}; row {} column {}: {} vs {} (residual {residual:.3e})",
                party + 1,
                fmt_amplitude(*pivot),
                pivot_row + 1,
                pivot_col + 1,
                fmt_amplitude(*coefficient),
                row + 1,
                column + 1,
                fmt_amplitude(*lhs),
                fmt_amplitude(*rhs),
            )
        }
    }
}

fn print_verdict(state: &PureState, verdict: &Verdict) {
    println!("dims: {:?}", state.dims());
    println!("verdict: {}", verdict_word(verdict.separable));
    for r in &verdict.reports {
        println!(
            "{:<7} {}  per party: {}",
            r.criterion,
            verdict_word(r.separable),
            fmt_party_values(&r.per_party)
        );
        if let Some(w) = &r.witness {
            println!("        witness {}", describe_witness(w));
        }
    }
    if let (Some(factors), Some(fid)) = (&verdict.factors, verdict.fidelity) {
        println!("factors (fidelity {fid:.15}):");
        for (k, f) in factors.iter().enumerate() {
            let comps: Vec<String> = f.amplitudes().iter().map(|a| fmt_amplitude(*a)).collect();
            println!("  party {}: [{}]", k + 1, comps.join(", "));
        }
    }
}

fn gen_profile(args: &GenArgs) -> Result<DimensionProfile> {
    match (&args.dims, args.n) {
        (Some(dims), Some(n)) if dims.len() != n => Err(SepError::Argument(format!(
            "--n {n} disagrees with {} dimensions",
            dims.len()
        ))),
        (Some(dims), _) => DimensionProfile::new(dims),
        (None, Some(n)) => DimensionProfile::uniform(n, 2),
        (None, None) => Err(SepError::Argument("--n or --dims is required".into())),
    }
}

fn cmd_gen(args: &GenArgs) -> Result<i32> {
    let n = || {
        args.n
            .ok_or_else(|| SepError::Argument("--n is required".into()))
    };
    let state = match args.kind {
        GenKind::Cat => cat_state(n()?, args.levels)?,
        GenKind::W => w_state(n()?)?,
        GenKind::Product => {
            let p = gen_profile(args)?;
            let zeros = vec![0; p.parties()];
            PureState::basis(p, &zeros)?
        }
        GenKind::Random => random_state(&gen_profile(args)?, args.seed)?,
        GenKind::RandomProduct => random_product_state(&gen_profile(args)?, args.seed)?,
    };
    let kind = args
        .kind
        .to_possible_value()
        .map(|v| v.get_name().to_string())
        .unwrap_or_default();
    let dims: Vec<String> = state.dims().iter().map(|d| d.to_string()).collect();
    let comments = vec![
        format!("kind: {kind}"),
        format!("seed: {}", args.seed),
        format!("dims: {}", dims.join(" ")),
    ];
    let text = format_state(&state, &comments);
    match &args.out {
        Some(path) => std::fs::write(path, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(0)
}

fn cmd_oracle(args: &OracleArgs) -> i32 {
    let tol = ToleranceConfig::default();
    let outcome = read_input(&args.input, &tol).and_then(|f| oracle_schmidt(&f.state, &tol));
    match outcome {
        Ok(report) => {
            if args.machine {
                let mut record = serde_json::to_value(&report).unwrap_or(Value::Null);
                record["status"] = json!(verdict_word(report.separable));
                record["exit_code"] = json!(exit_for(report.separable));
                println!("{record}");
            } else {
                print_oracle(&report);
            }
            exit_for(report.separable)
        }
        Err(e) => {
            print_error(&e, args.machine);
            e.exit_code()
        }
    }
}

fn print_oracle(report: &OracleReport) {
    for (k, sv) in report.singular_values.iter().enumerate() {
        let squares: Vec<String> = sv.iter().map(|s| format!("{:.12}", s * s)).collect();
        println!(
            "party {}: sigma^2 = [{}]  schmidt number {}",
            k + 1,
            squares.join(", "),
            report.schmidt_numbers[k]
        );
    }
    println!("verdict: {}", verdict_word(report.separable));
}

/// Part of a sweep range allowed for the criterion: the determinant is cut at
/// r <= DET_DENSE_MAX_ROWS.
fn det_limited(criterion: Criterion, range: Vec<(usize, usize)>) -> Vec<(usize, usize)> {
    range
        .into_iter()
        .filter(|&(n, q)| criterion != Criterion::Det || q.pow(n as u32 - 1) <= DET_DENSE_MAX_ROWS)
        .collect()
}

fn contiguous(
    points: &[(usize, usize)],
    pick: impl Fn(&(usize, usize)) -> usize,
) -> Option<std::ops::RangeInclusive<usize>> {
    let first = points.first().map(&pick)?;
    let last = points.last().map(&pick)?;
    Some(first..=last)
}

fn cmd_bench(args: &BenchArgs) -> Result<i32> {
    if args.n_min < 2
        || args.n_min > args.n_max
        || args.q_min < 2
        || args.q_min > args.q_max
        || args.fixed_n < 2
    {
        return Err(SepError::Argument("empty or invalid sweep range".into()));
    }
    let level = args.dims_family.level();
    let mut plans = Vec::new();
    for &c in &args.criteria {
        bench::cost_model(c)?;
        let by_n = det_limited(c, (args.n_min..=args.n_max).map(|n| (n, level)).collect());
        let by_q = det_limited(
            c,
            (args.q_min..=args.q_max)
                .map(|q| (args.fixed_n, q))
                .collect(),
        );
        for &(n, q) in by_n.iter().chain(&by_q) {
            bench::check_point(c, &DimensionProfile::uniform(n, q)?, args.max_bytes)?;
        }
        if by_n.len() < args.n_max - args.n_min + 1 || by_q.len() < args.q_max - args.q_min + 1 {
            log::info!("{c}: sweep trimmed to r <= {DET_DENSE_MAX_ROWS}");
        }
        plans.push((c, by_n, by_q));
    }

    let mut sweeps: Vec<Sweep> = Vec::new();
    for (c, by_n, by_q) in plans {
        if let Some(range) = contiguous(&by_n, |p| p.0).filter(|r| r.end() > r.start()) {
            sweeps.push(bench::sweep_parties(
                c,
                level,
                range,
                args.reps,
                args.seed,
                args.max_bytes,
            )?);
        } else {
            log::warn!("{c}: fewer than two points in the party sweep, skipped");
        }
        if let Some(range) = contiguous(&by_q, |p| p.1).filter(|r| r.end() > r.start()) {
            sweeps.push(bench::sweep_local_dim(
                c,
                args.fixed_n,
                range,
                args.reps,
                args.seed,
                args.max_bytes,
            )?);
        } else {
            log::warn!("{c}: fewer than two points in the local-dimension sweep, skipped");
        }
    }

    if args.machine {
        for s in &sweeps {
            for p in &s.points {
                println!(
                    "{}",
                    json!({"record": "point", "sweep": s.axis, "point": p})
                );
            }
            println!(
                "{}",
                json!({"record": "fit", "criterion": s.criterion, "axis": s.axis, "slope": s.slope})
            );
        }
    } else {
        println!(
            "{:<7} {:<8} {:>3} {:>8} {:>6} {:>12} {:>12} {:>12} {:>14} {:>11}",
            "crit", "sweep", "n", "d", "r", "mul", "add", "cmp", "total", "seconds"
        );
        for s in &sweeps {
            for p in &s.points {
                println!(
                    "{:<7} {:<8} {:>3} {:>8} {:>6} {:>12} {:>12} {:>12} {:>14} {:>11.3e}",
                    p.criterion.name(),
                    axis_name(s),
                    p.n,
                    p.d,
                    p.r,
                    p.counters.mul,
                    p.counters.add,
                    p.counters.cmp,
                    p.counters.total(),
                    p.seconds
                );
            }
        }
        println!();
        for s in &sweeps {
            let against = match s.axis {
                bench::Axis::Parties => "n (count / x^p)",
                bench::Axis::Rows => "r",
                bench::Axis::Dim => "d",
            };
            println!(
                "{:<7} slope vs {against}: {:.3}",
                s.criterion.name(),
                s.slope
            );
        }
    }
    Ok(0)
}

fn axis_name(s: &Sweep) -> &'static str {
    match s.axis {
        bench::Axis::Parties => "parties",
        _ => "local",
    }
}
