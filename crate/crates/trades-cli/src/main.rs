//! Command-line front end for the trades library.
//!
//! Every subcommand maps to one library operation and prints a single
//! result to stdout (or to `--output`). JSON is the canonical format;
//! CSV is available for table-shaped results and text for quick reading.
//! Exit codes: 0 success, 1 domain or usage error, 2 refused or exceeded
//! budget.

use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use trades::{
    apply_swaps, build_concatenated, build_swap_digraph, canonical_balanced_sets, construct_trade,
    counting_bounds, discrepancy_lower_bounds, enumerate_balanced_pairings, mirror_balanced_sets,
    search_optimal_pairings_with, set_discrepancy, verify_trade_with_cap,
    worst_case_discrepancy_with_budget, BalancedPairing, CompanionPair, DefiningSets, ResumeState,
    SearchOptions, SearchProgress, Swap, SwapSet, Trade, DEFAULT_NODE_BUDGET, DEFAULT_SUBSET_CAP,
};

use num_bigint::BigUint;

#[derive(Parser)]
#[command(
    name = "trades",
    version,
    about = "Minimal trades from balanced defining sets: construction, verification, \
             pairing enumeration, and swap-robustness search"
)]
struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,

    /// Write the result to this file instead of stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Build the full trade from a defining-sets file
    Construct {
        /// Defining-sets JSON file
        #[arg(long)]
        sets: PathBuf,
    },
    /// Check the trade identity by exhaustive subset counting
    Verify {
        /// Trade JSON file
        #[arg(long)]
        trade: PathBuf,
        /// Refuse if the number of subsets to count exceeds this
        /// (env: TRADES_SUBSET_CAP)
        #[arg(long)]
        cap: Option<u64>,
    },
    /// Emit the canonical balanced defining sets for v points
    Canonical {
        #[arg(long)]
        v: u32,
    },
    /// Emit the mirror balanced defining sets for v points
    Mirror {
        #[arg(long)]
        v: u32,
    },
    /// Stream every balanced pairing of {1, ..., v} as JSON lines
    Enumerate {
        #[arg(long)]
        v: u32,
        /// Print only the number of pairings
        #[arg(long)]
        count_only: bool,
        /// Allow runs that take minutes (v of 24 and beyond)
        #[arg(long)]
        long: bool,
    },
    /// Counting bounds on the number of balanced pairings
    Bounds {
        #[arg(long)]
        v: u32,
        /// Compute the exact count by enumeration even when v is large
        #[arg(long)]
        long: bool,
    },
    /// Worst-case total set discrepancy of one family under swaps
    WorstCase {
        /// Defining-sets JSON file
        #[arg(long)]
        sets: PathBuf,
        /// Swap magnitude (1 or 2)
        #[arg(long)]
        p: u32,
        /// Search node budget (env: TRADES_NODE_BUDGET)
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Find the balanced pairings with the smallest worst case
    Optimal {
        #[arg(long)]
        v: u32,
        /// Swap magnitude (1 or 2)
        #[arg(long)]
        p: u32,
        /// Allow runs that take minutes (v of 24 and beyond)
        #[arg(long)]
        long: bool,
        /// Worker threads (default: available parallelism)
        #[arg(long)]
        threads: Option<usize>,
        /// Stop after examining this many pairings past the resume point
        #[arg(long)]
        pairing_budget: Option<u64>,
        /// Checkpoint file, written as the search progresses and resumed
        /// from if it already exists
        #[arg(long)]
        state: Option<PathBuf>,
    },
    /// Concatenated construction with its guaranteed worst case
    Concat {
        #[arg(long)]
        v: u32,
        /// Swap magnitude (1 or 2)
        #[arg(long)]
        p: u32,
    },
    /// Analytic lower bounds on the optimal worst case for strength t
    LowerBounds {
        #[arg(long)]
        t: u32,
    },
    /// Digraph of discrepancy-propagating swaps between paired sets
    Digraph {
        /// Defining-sets JSON file
        #[arg(long)]
        sets: PathBuf,
    },
    /// Apply a swap set to a family and report the set discrepancy
    Swap {
        /// Defining-sets JSON file
        #[arg(long)]
        sets: PathBuf,
        /// Comma-separated swaps, each as i-j (example: 1-2,4-5)
        #[arg(long)]
        swaps: String,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

fn exit_code_for(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<LongRequired>().is_some() {
        return 2;
    }
    if let Some(lib) = err.downcast_ref::<trades::Error>() {
        if matches!(
            lib,
            trades::Error::SubsetCapExceeded { .. } | trades::Error::SearchBudgetExceeded { .. }
        ) {
            return 2;
        }
    }
    1
}

/// Raised when a run that takes minutes is requested without `--long`.
#[derive(Debug)]
struct LongRequired {
    what: String,
}

impl fmt::Display for LongRequired {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} takes minutes; pass --long to run it", self.what)
    }
}

impl std::error::Error for LongRequired {}

fn run(cli: Cli) -> Result<()> {
    let mut out = open_output(&cli.output)?;
    match cli.command {
        Command::Enumerate { v, count_only, long } => {
            cmd_enumerate(v, count_only, long, cli.format, &mut out)?
        }
        other => {
            let payload = dispatch(other, cli.format)?;
            out.write_all(payload.as_bytes())?;
        }
    }
    out.flush()?;
    Ok(())
}

fn open_output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(path) => Box::new(io::BufWriter::new(
            fs::File::create(path).with_context(|| format!("creating {}", path.display()))?,
        )),
        None => Box::new(io::BufWriter::new(io::stdout())),
    })
}

fn dispatch(command: Command, format: Format) -> Result<String> {
    match command {
        Command::Construct { sets } => cmd_construct(&sets, format),
        Command::Verify { trade, cap } => cmd_verify(&trade, cap, format),
        Command::Canonical { v } => sets_payload(canonical_balanced_sets(v)?, format),
        Command::Mirror { v } => sets_payload(mirror_balanced_sets(v)?, format),
        Command::Bounds { v, long } => cmd_bounds(v, long, format),
        Command::WorstCase { sets, p, budget } => cmd_worst_case(&sets, p, budget, format),
        Command::Optimal {
            v,
            p,
            long,
            threads,
            pairing_budget,
            state,
        } => cmd_optimal(v, p, long, threads, pairing_budget, state, format),
        Command::Concat { v, p } => cmd_concat(v, p, format),
        Command::LowerBounds { t } => cmd_lower_bounds(t, format),
        Command::Digraph { sets } => cmd_digraph(&sets, format),
        Command::Swap { sets, swaps } => cmd_swap(&sets, &swaps, format),
        Command::Enumerate { .. } => unreachable!("handled by run"),
    }
}

fn cmd_construct(path: &Path, format: Format) -> Result<String> {
    let sets = load_sets(path)?;
    let trade = construct_trade(&sets)?;
    match format {
        Format::Json => json_line(&trade),
        Format::Csv => bail!("csv output is not available for trades; use json"),
        Format::Text => {
            let params = trade.params();
            let mut text = format!("v: {}\nk: {}\nt: {}\n", params.v, params.k, params.t);
            for (name, side) in [("side1", trade.side1()), ("side2", trade.side2())] {
                text.push_str(name);
                text.push_str(":\n");
                for block in side {
                    text.push_str("  {");
                    text.push_str(&join(block.elements()));
                    text.push_str("}\n");
                }
            }
            Ok(text)
        }
    }
}

fn cmd_verify(path: &Path, cap: Option<u64>, format: Format) -> Result<String> {
    let trade = load_trade(path)?;
    let cap = resolve_budget(cap, "TRADES_SUBSET_CAP", DEFAULT_SUBSET_CAP)?;
    let valid = verify_trade_with_cap(&trade, cap)?;
    Ok(match format {
        Format::Json | Format::Text => format!("{valid}\n"),
        Format::Csv => format!("result\n{valid}\n"),
    })
}

fn cmd_enumerate(
    v: u32,
    count_only: bool,
    long: bool,
    format: Format,
    out: &mut dyn Write,
) -> Result<()> {
    if v >= 24 && !long {
        return Err(LongRequired {
            what: format!("enumerating the pairings of {v} points"),
        }
        .into());
    }
    if count_only {
        let count = enumerate_balanced_pairings(v, |_| ())?;
        let payload = match format {
            Format::Json | Format::Text => format!("{count}\n"),
            Format::Csv => format!("count\n{count}\n"),
        };
        out.write_all(payload.as_bytes())?;
        return Ok(());
    }
    if format != Format::Json {
        bail!("the pairing stream is emitted as json lines; use --format json");
    }
    let mut write_error: Option<io::Error> = None;
    let count = enumerate_balanced_pairings(v, |pairing| {
        if write_error.is_some() {
            return;
        }
        let line = serde_json::to_string(pairing.companion_pairs()).expect("pairs serialize");
        if let Err(err) = out.write_all(line.as_bytes()).and_then(|_| out.write_all(b"\n")) {
            write_error = Some(err);
        }
    })?;
    if let Some(err) = write_error {
        return Err(err).context("writing the pairing stream");
    }
    eprintln!("{count}");
    Ok(())
}

#[derive(Serialize)]
struct BoundsOut {
    v: u32,
    exact: Option<String>,
    lower: String,
    upper_asymptotic: f64,
}

fn cmd_bounds(v: u32, long: bool, format: Format) -> Result<String> {
    let exact = if v <= 20 || long {
        Some(BigUint::from(enumerate_balanced_pairings(v, |_| ())?))
    } else {
        None
    };
    let bounds = counting_bounds(v, exact)?;
    let out = BoundsOut {
        v,
        exact: bounds.exact.as_ref().map(BigUint::to_string),
        lower: bounds.lower.to_string(),
        upper_asymptotic: bounds.upper_asymptotic,
    };
    match format {
        Format::Json => json_line(&out),
        Format::Csv => Ok(format!(
            "v,exact,lower,upper_asymptotic\n{},{},{},{}\n",
            out.v,
            out.exact.as_deref().unwrap_or(""),
            out.lower,
            out.upper_asymptotic
        )),
        Format::Text => Ok(format!(
            "v: {}\nexact: {}\nlower: {}\nupper_asymptotic: {}\n",
            out.v,
            out.exact.as_deref().unwrap_or("unknown"),
            out.lower,
            out.upper_asymptotic
        )),
    }
}

fn cmd_worst_case(path: &Path, p: u32, budget: Option<u64>, format: Format) -> Result<String> {
    let sets = load_sets(path)?;
    let budget = resolve_budget(budget, "TRADES_NODE_BUDGET", DEFAULT_NODE_BUDGET)?;
    let report = worst_case_discrepancy_with_budget(&sets, p, budget)?;
    match format {
        Format::Json => json_line(&report),
        Format::Csv => Ok(format!(
            "value,witness\n{},{}\n",
            report.value,
            witness_text(&report.witness)
        )),
        Format::Text => Ok(format!(
            "value: {}\nwitness: {}\nsets_after:\n{}",
            report.value,
            witness_text(&report.witness),
            sets_text(&report.sets_after, "  ")
        )),
    }
}

#[derive(Serialize)]
struct OptimalOut<'a> {
    value: u64,
    count: u64,
    complete: bool,
    pairings_examined: u64,
    optima: Vec<&'a [CompanionPair]>,
}

#[derive(Serialize, Deserialize)]
struct StateFile {
    v: u32,
    p: u32,
    processed: u64,
    incumbent: Option<u64>,
    optima: Vec<Vec<CompanionPair>>,
}

fn cmd_optimal(
    v: u32,
    p: u32,
    long: bool,
    threads: Option<usize>,
    pairing_budget: Option<u64>,
    state: Option<PathBuf>,
    format: Format,
) -> Result<String> {
    if v >= 24 && !long {
        return Err(LongRequired {
            what: format!("searching all pairings of {v} points"),
        }
        .into());
    }
    let resume = match &state {
        Some(path) if path.exists() => {
            let file: StateFile = serde_json::from_str(
                &fs::read_to_string(path)
                    .with_context(|| format!("reading {}", path.display()))?,
            )
            .with_context(|| format!("parsing {}", path.display()))?;
            if file.v != v || file.p != p {
                bail!(
                    "state file {} records v = {}, p = {}; this run asked for v = {v}, p = {p}",
                    path.display(),
                    file.v,
                    file.p
                );
            }
            let optima = file
                .optima
                .into_iter()
                .map(|pairs| BalancedPairing::new(v, pairs))
                .collect::<trades::Result<Vec<_>>>()?;
            Some(ResumeState {
                processed: file.processed,
                incumbent: file.incumbent,
                optima,
            })
        }
        _ => None,
    };

    let mut checkpoint = state.as_ref().map(|path| {
        let path = path.clone();
        move |snapshot: &SearchProgress| {
            let file = StateFile {
                v,
                p,
                processed: snapshot.processed,
                incumbent: snapshot.incumbent,
                optima: snapshot
                    .optima
                    .iter()
                    .map(|pairing| pairing.companion_pairs().to_vec())
                    .collect(),
            };
            if let Err(err) = write_state(&path, &file) {
                eprintln!("warning: state checkpoint failed: {err:#}");
            }
        }
    });

    let mut options = SearchOptions {
        threads,
        pairing_budget,
        resume,
        progress: None,
    };
    if let Some(callback) = checkpoint.as_mut() {
        options.progress = Some(callback);
    }
    let result = search_optimal_pairings_with(v, p, options)?;

    let out = OptimalOut {
        value: result.value,
        count: result.count,
        complete: result.complete,
        pairings_examined: result.pairings_examined,
        optima: result
            .optima
            .iter()
            .map(BalancedPairing::companion_pairs)
            .collect(),
    };
    match format {
        Format::Json => json_line(&out),
        Format::Csv => Ok(format!(
            "value,count,complete,pairings_examined\n{},{},{},{}\n",
            out.value, out.count, out.complete, out.pairings_examined
        )),
        Format::Text => {
            let mut text = format!(
                "value: {}\ncount: {}\ncomplete: {}\npairings_examined: {}\noptima:\n",
                out.value, out.count, out.complete, out.pairings_examined
            );
            for pairs in &out.optima {
                text.push_str("  ");
                text.push_str(&pairing_text(pairs));
                text.push('\n');
            }
            Ok(text)
        }
    }
}

fn write_state(path: &Path, file: &StateFile) -> Result<()> {
    let mut name = path
        .file_name()
        .map(|n| n.to_os_string())
        .unwrap_or_default();
    name.push(".tmp");
    let tmp = path.with_file_name(name);
    fs::write(&tmp, serde_json::to_string(file)?)
        .with_context(|| format!("writing {}", tmp.display()))?;
    fs::rename(&tmp, path).with_context(|| format!("renaming to {}", path.display()))?;
    Ok(())
}

#[derive(Serialize)]
struct ConcatOut {
    v: u32,
    p: u32,
    m: u32,
    m_prime: u32,
    delta: i64,
    guaranteed: u64,
    sets: DefiningSets,
}

fn cmd_concat(v: u32, p: u32, format: Format) -> Result<String> {
    let (sets, guarantee) = build_concatenated(v, p)?;
    let out = ConcatOut {
        v,
        p,
        m: guarantee.m,
        m_prime: guarantee.m_prime,
        delta: guarantee.delta,
        guaranteed: guarantee.guaranteed,
        sets,
    };
    match format {
        Format::Json => json_line(&out),
        Format::Csv => Ok(format!(
            "v,p,m,m_prime,delta,guaranteed\n{},{},{},{},{},{}\n",
            out.v, out.p, out.m, out.m_prime, out.delta, out.guaranteed
        )),
        Format::Text => Ok(format!(
            "v: {}\np: {}\nm: {}\nm_prime: {}\ndelta: {}\nguaranteed: {}\nsets:\n{}",
            out.v,
            out.p,
            out.m,
            out.m_prime,
            out.delta,
            out.guaranteed,
            sets_text(&out.sets, "  ")
        )),
    }
}

#[derive(Serialize)]
struct LowerBoundsOut {
    t: u32,
    general: f64,
    divisible_19: Option<f64>,
}

fn cmd_lower_bounds(t: u32, format: Format) -> Result<String> {
    let bounds = discrepancy_lower_bounds(t);
    let out = LowerBoundsOut {
        t,
        general: bounds.general,
        divisible_19: bounds.divisible_19,
    };
    match format {
        Format::Json => json_line(&out),
        Format::Csv => Ok(format!(
            "t,general,divisible_19\n{},{},{}\n",
            out.t,
            out.general,
            out.divisible_19.map(|x| x.to_string()).unwrap_or_default()
        )),
        Format::Text => Ok(format!(
            "t: {}\ngeneral: {}\ndivisible_19: {}\n",
            out.t,
            out.general,
            out.divisible_19
                .map(|x| x.to_string())
                .unwrap_or_else(|| "none".into())
        )),
    }
}

#[derive(Serialize)]
struct DigraphOut {
    vertex_count: usize,
    arc_count: usize,
    arcs: Vec<(usize, usize)>,
}

fn cmd_digraph(path: &Path, format: Format) -> Result<String> {
    let sets = load_sets(path)?;
    let digraph = build_swap_digraph(&sets);
    let out = DigraphOut {
        vertex_count: digraph.vertex_count(),
        arc_count: digraph.arc_count(),
        arcs: digraph.arcs().to_vec(),
    };
    match format {
        Format::Json => json_line(&out),
        Format::Csv => {
            let mut text = String::from("from,to\n");
            for (from, to) in &out.arcs {
                text.push_str(&format!("{from},{to}\n"));
            }
            Ok(text)
        }
        Format::Text => {
            let mut text = format!(
                "vertex_count: {}\narc_count: {}\n",
                out.vertex_count, out.arc_count
            );
            for (from, to) in &out.arcs {
                text.push_str(&format!("{from} -> {to}\n"));
            }
            Ok(text)
        }
    }
}

#[derive(Serialize)]
struct SwapOut {
    sets: DefiningSets,
    set_discrepancy: u64,
}

fn cmd_swap(path: &Path, swaps: &str, format: Format) -> Result<String> {
    let sets = load_sets(path)?;
    let swap_set = parse_swaps(swaps)?;
    let after = apply_swaps(&sets, &swap_set)?;
    let out = SwapOut {
        set_discrepancy: set_discrepancy(&after),
        sets: after,
    };
    match format {
        Format::Json => json_line(&out),
        Format::Csv => bail!("csv output is not available for defining sets; use json"),
        Format::Text => Ok(format!(
            "set_discrepancy: {}\nsets:\n{}",
            out.set_discrepancy,
            sets_text(&out.sets, "  ")
        )),
    }
}

fn sets_payload(sets: DefiningSets, format: Format) -> Result<String> {
    match format {
        Format::Json => json_line(&sets),
        Format::Csv => bail!("csv output is not available for defining sets; use json"),
        Format::Text => Ok(sets_text(&sets, "")),
    }
}

fn load_sets(path: &Path) -> Result<DefiningSets> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn load_trade(path: &Path) -> Result<Trade> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn parse_swaps(list: &str) -> Result<SwapSet> {
    let mut swaps = Vec::new();
    let mut magnitude = 1;
    for part in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (a, b) = part
            .split_once('-')
            .ok_or_else(|| anyhow!("swap '{part}' is not of the form i-j"))?;
        let i: u32 = a.trim().parse().with_context(|| format!("swap '{part}'"))?;
        let j: u32 = b.trim().parse().with_context(|| format!("swap '{part}'"))?;
        let swap = Swap::new(i, j)?;
        magnitude = magnitude.max(swap.magnitude());
        swaps.push(swap);
    }
    Ok(SwapSet::new(swaps, magnitude)?)
}

fn resolve_budget(flag: Option<u64>, env_name: &str, default: u64) -> Result<u64> {
    if let Some(value) = flag {
        return Ok(value);
    }
    match std::env::var(env_name) {
        Ok(text) => text
            .parse()
            .with_context(|| format!("{env_name} must be an unsigned integer")),
        Err(std::env::VarError::NotPresent) => Ok(default),
        Err(err) => Err(err).context(env_name.to_string()),
    }
}

fn json_line<T: Serialize>(value: &T) -> Result<String> {
    let mut line = serde_json::to_string(value)?;
    line.push('\n');
    Ok(line)
}

fn join(items: &[u32]) -> String {
    items
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

fn sets_text(sets: &DefiningSets, indent: &str) -> String {
    let mut text = format!("{indent}v: {}\n{indent}t: {}\n", sets.v(), sets.params().t);
    for (i, (left, right)) in sets.pairs().iter().enumerate() {
        text.push_str(&format!(
            "{indent}pair {}: {{{}}} | {{{}}}\n",
            i + 1,
            join(left),
            join(right)
        ));
    }
    if !sets.tail().is_empty() {
        text.push_str(&format!("{indent}tail: {{{}}}\n", join(sets.tail())));
    }
    text
}

fn witness_text(witness: &SwapSet) -> String {
    if witness.is_empty() {
        return "none".into();
    }
    witness
        .swaps()
        .iter()
        .map(|swap| format!("{}-{}", swap.lo(), swap.hi()))
        .collect::<Vec<_>>()
        .join(" ")
}

fn pairing_text(pairs: &[CompanionPair]) -> String {
    pairs
        .iter()
        .map(|((a, b), (c, d))| format!("({a},{b})({c},{d})"))
        .collect::<Vec<_>>()
        .join(" ")
}
