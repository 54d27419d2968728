//! Command line front end.
//!
//! Subcommands: `route` (one message's path), `analyze` (conflict reports
//! for a message file), `schedule` (pass partitioning), `bench` (seeded
//! comparison suite, CSV), `dot` (Graphviz diagram). Exit codes: 0 success,
//! 1 input or usage error, 2 internal invariant violation.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::bench::{render_csv, run_suite, BenchmarkConfig};
use crate::conflict::{conflict_report, link_window_pairs, wm_conflict_pairs};
use crate::dot::{message_diagram, network_diagram};
use crate::error::{Error, Result};
use crate::msgfile::{fit_size, load_messages, LoadOptions};
use crate::report::{emit_report, ReportFormat};
use crate::sched::{run_algorithm, Algorithm, ResolutionMode};
use crate::topology::{route_path, Address, NetworkConfig};

#[derive(Parser)]
#[command(
    name = "omin",
    version,
    about = "Optical omega network modelling: conflict analysis and pass scheduling"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AlgoArg {
    Wm,
    HeurAsc,
    HeurDesc,
    HeurMin,
    HeurMax,
    Asa,
    Rsa,
}

impl From<AlgoArg> for Algorithm {
    fn from(arg: AlgoArg) -> Algorithm {
        match arg {
            AlgoArg::Wm => Algorithm::Wm,
            AlgoArg::HeurAsc => Algorithm::HeurAsc,
            AlgoArg::HeurDesc => Algorithm::HeurDesc,
            AlgoArg::HeurMin => Algorithm::HeurMin,
            AlgoArg::HeurMax => Algorithm::HeurMax,
            AlgoArg::Asa => Algorithm::Asa,
            AlgoArg::Rsa => Algorithm::Rsa,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Paper,
    Strict,
}

impl From<ModeArg> for ResolutionMode {
    fn from(arg: ModeArg) -> ResolutionMode {
        match arg {
            ModeArg::Paper => ResolutionMode::Paper,
            ModeArg::Strict => ResolutionMode::Strict,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Json,
    Text,
    Csv,
}

impl From<FormatArg> for ReportFormat {
    fn from(arg: FormatArg) -> ReportFormat {
        match arg {
            FormatArg::Json => ReportFormat::Json,
            FormatArg::Text => ReportFormat::Text,
            FormatArg::Csv => ReportFormat::Csv,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the path one message takes through the fabric
    Route {
        /// Source address (decimal)
        #[arg(long)]
        src: u32,
        /// Destination address (decimal)
        #[arg(long)]
        dst: u32,
        /// Ports; inferred from the addresses when omitted
        #[arg(long)]
        size: Option<usize>,
    },
    /// Report switch and link conflicts of a message file
    Analyze {
        /// Message file ("SRC DST" per line, decimal)
        file: PathBuf,
        /// Ports; inferred from the file when omitted
        #[arg(long)]
        size: Option<usize>,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
    },
    /// Partition a message file into conflict-reduced passes
    Schedule {
        /// Message file ("SRC DST" per line, decimal)
        file: PathBuf,
        #[arg(long, value_enum)]
        algo: AlgoArg,
        #[arg(long, value_enum, default_value = "paper")]
        mode: ModeArg,
        /// Ports; inferred from the file when omitted
        #[arg(long)]
        size: Option<usize>,
        #[arg(long, value_enum, default_value = "json")]
        format: FormatArg,
    },
    /// Run the seeded benchmark suite and print CSV
    Bench(BenchArgs),
    /// Emit a Graphviz diagram of the fabric, with messages when a file is given
    Dot {
        /// Optional message file to overlay
        file: Option<PathBuf>,
        /// Ports (default 8 without a file; inferred from the file otherwise)
        #[arg(long)]
        size: Option<usize>,
    },
}

#[derive(Args, Debug, Default)]
struct BenchArgs {
    /// Network sizes, comma separated (default 8,16,32)
    #[arg(long, value_delimiter = ',')]
    sizes: Vec<usize>,
    /// Random permutations per size (default 10)
    #[arg(long)]
    trials: Option<u32>,
    /// Master seed (default $OMIN_SEED, then 0)
    #[arg(long)]
    seed: Option<u64>,
    /// Algorithms, comma separated (default all)
    #[arg(long = "algos", value_enum, value_delimiter = ',')]
    algorithms: Vec<AlgoArg>,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// TOML file with keys sizes, trials, seed, algorithms, mode, timing
    #[arg(long)]
    config: Option<PathBuf>,
    /// Zero the micros column for byte-reproducible output
    #[arg(long)]
    no_timing: bool,
    /// Write the CSV here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Parse and run; returns the process exit code.
pub fn dispatch<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(output) => {
            print!("{output}");
            0
        }
        Err(err) => {
            eprintln!("error: {err}");
            exit_code(&err)
        }
    }
}

/// [`dispatch`] wrapped for `fn main`.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    ExitCode::from(dispatch(args))
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Invariant(_) => 2,
        _ => 1,
    }
}

fn execute(command: Command) -> Result<String> {
    match command {
        Command::Route { src, dst, size } => route_command(src, dst, size),
        Command::Analyze { file, size, format } => analyze_command(&file, size, format.into()),
        Command::Schedule {
            file,
            algo,
            mode,
            size,
            format,
        } => schedule_command(&file, algo.into(), mode.into(), size, format.into()),
        Command::Bench(args) => bench_command(args),
        Command::Dot { file, size } => dot_command(file.as_deref(), size),
    }
}

fn route_command(src: u32, dst: u32, size: Option<usize>) -> Result<String> {
    let size = size.unwrap_or_else(|| fit_size(src.max(dst), NetworkConfig::MIN_SIZE));
    let cfg = NetworkConfig::new(size)?;
    let path = route_path(Address(src), Address(dst), &cfg)?;
    let bits = |v: u32| format!("{v:0w$b}", w = cfg.stages() as usize);
    let mut out = String::new();
    out.push_str(&format!(
        "network: {} ports, {} stages\n",
        cfg.size(),
        cfg.stages()
    ));
    out.push_str(&format!("route: {} -> {}\n", bits(src), bits(dst)));
    out.push_str(&format!(
        "links: {}\n",
        path.links
            .iter()
            .map(|&l| bits(l))
            .collect::<Vec<_>>()
            .join(" ")
    ));
    out.push_str(&format!(
        "switches: {}\n",
        path.switches
            .iter()
            .map(|s| s.index.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    ));
    Ok(out)
}

#[derive(Serialize)]
struct AnalyzeNetworkDoc {
    size: usize,
    stages: u32,
}

#[derive(Serialize)]
struct SwitchOccurrenceDoc {
    stage: u32,
    switch: u32,
    sources: [u32; 2],
}

#[derive(Serialize)]
struct LinkOccurrenceDoc {
    boundary: u32,
    line: u32,
    sources: [u32; 2],
}

#[derive(Serialize)]
struct SwitchSectionDoc {
    total: usize,
    distinct_pairs: usize,
    occurrences: Vec<SwitchOccurrenceDoc>,
}

#[derive(Serialize)]
struct LinkSectionDoc {
    total: usize,
    distinct_pairs: usize,
    occurrences: Vec<LinkOccurrenceDoc>,
}

#[derive(Serialize)]
struct WindowSectionDoc {
    switch_pairs: usize,
    link_pairs: usize,
    matches_oracle: bool,
}

#[derive(Serialize)]
struct AnalyzeDoc {
    network: AnalyzeNetworkDoc,
    messages: usize,
    full_permutation: bool,
    switch: SwitchSectionDoc,
    link: LinkSectionDoc,
    windows: WindowSectionDoc,
}

fn analyze_command(file: &Path, size: Option<usize>, format: ReportFormat) -> Result<String> {
    let loaded = load_messages(file, &LoadOptions::with_size(size))?;
    let ms = &loaded.set;
    let cfg = ms.config();
    let report = conflict_report(ms);

    // the window predicates must agree with the path oracle; a mismatch is
    // a bug, not bad input
    let window_switch = wm_conflict_pairs(ms);
    let window_link = link_window_pairs(ms);
    let matches_oracle =
        window_switch == report.switches.pairs && window_link == report.links.pairs;
    if !matches_oracle {
        return Err(Error::Invariant(
            "window predicates disagree with the path oracle".into(),
        ));
    }

    let src = |i: usize| ms.source(i).0;
    match format {
        ReportFormat::Json => {
            let doc = AnalyzeDoc {
                network: AnalyzeNetworkDoc {
                    size: cfg.size(),
                    stages: cfg.stages(),
                },
                messages: ms.len(),
                full_permutation: ms.is_permutation(),
                switch: SwitchSectionDoc {
                    total: report.switches.occurrences.len(),
                    distinct_pairs: report.switches.pairs.len(),
                    occurrences: report
                        .switches
                        .occurrences
                        .iter()
                        .map(|o| SwitchOccurrenceDoc {
                            stage: o.stage,
                            switch: o.switch,
                            sources: [src(o.pair.0), src(o.pair.1)],
                        })
                        .collect(),
                },
                link: LinkSectionDoc {
                    total: report.links.occurrences.len(),
                    distinct_pairs: report.links.pairs.len(),
                    occurrences: report
                        .links
                        .occurrences
                        .iter()
                        .map(|o| LinkOccurrenceDoc {
                            boundary: o.boundary,
                            line: o.line,
                            sources: [src(o.pair.0), src(o.pair.1)],
                        })
                        .collect(),
                },
                windows: WindowSectionDoc {
                    switch_pairs: window_switch.len(),
                    link_pairs: window_link.len(),
                    matches_oracle,
                },
            };
            let mut text =
                serde_json::to_string_pretty(&doc).expect("analysis serialization cannot fail");
            text.push('\n');
            Ok(text)
        }
        ReportFormat::Text => {
            let bits = |v: u32| format!("{v:0w$b}", w = cfg.stages() as usize);
            let mut out = String::new();
            out.push_str(&format!(
                "network: {} ports, {} stages\n",
                cfg.size(),
                cfg.stages()
            ));
            out.push_str(&format!(
                "messages: {}{}\n",
                ms.len(),
                if ms.is_permutation() {
                    " (full permutation)"
                } else {
                    ""
                }
            ));
            out.push_str(&format!(
                "switch conflicts: {} occurrences, {} distinct pairs\n",
                report.switches.occurrences.len(),
                report.switches.pairs.len()
            ));
            for o in &report.switches.occurrences {
                out.push_str(&format!(
                    "  stage {} switch {}: {} {}\n",
                    o.stage,
                    o.switch,
                    bits(src(o.pair.0)),
                    bits(src(o.pair.1))
                ));
            }
            out.push_str(&format!(
                "link conflicts: {} occurrences, {} distinct pairs\n",
                report.links.occurrences.len(),
                report.links.pairs.len()
            ));
            for o in &report.links.occurrences {
                out.push_str(&format!(
                    "  boundary {} line {}: {} {}\n",
                    o.boundary,
                    bits(o.line),
                    bits(src(o.pair.0)),
                    bits(src(o.pair.1))
                ));
            }
            out.push_str("window check: predicates match the path oracle\n");
            Ok(out)
        }
        ReportFormat::Csv => {
            let mut out = String::from("kind,slot,unit,source_a,source_b\n");
            for o in &report.switches.occurrences {
                out.push_str(&format!(
                    "switch,{},{},{},{}\n",
                    o.stage,
                    o.switch,
                    src(o.pair.0),
                    src(o.pair.1)
                ));
            }
            for o in &report.links.occurrences {
                out.push_str(&format!(
                    "link,{},{},{},{}\n",
                    o.boundary,
                    o.line,
                    src(o.pair.0),
                    src(o.pair.1)
                ));
            }
            Ok(out)
        }
    }
}

fn schedule_command(
    file: &Path,
    algorithm: Algorithm,
    mode: ResolutionMode,
    size: Option<usize>,
    format: ReportFormat,
) -> Result<String> {
    let options = LoadOptions {
        size,
        min_size: algorithm.min_size(),
    };
    let loaded = load_messages(file, &options)?;
    let schedule = run_algorithm(&loaded.set, algorithm, mode)?;
    Ok(emit_report(&schedule, format))
}

/// TOML benchmark configuration; all keys optional, flags override.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct BenchFileDoc {
    sizes: Option<Vec<usize>>,
    trials: Option<u32>,
    seed: Option<u64>,
    algorithms: Option<Vec<String>>,
    mode: Option<String>,
    timing: Option<bool>,
}

fn bench_config(args: &BenchArgs, env_seed: Option<u64>) -> Result<BenchmarkConfig> {
    let mut config = BenchmarkConfig::default();
    if let Some(seed) = env_seed {
        config.seed = seed;
    }

    if let Some(path) = &args.config {
        let text = std::fs::read_to_string(path)?;
        let doc: BenchFileDoc = toml::from_str(&text)
            .map_err(|e| Error::BenchConfig(format!("{}: {e}", path.display())))?;
        if let Some(sizes) = doc.sizes {
            config.sizes = sizes;
        }
        if let Some(trials) = doc.trials {
            config.trials = trials;
        }
        if let Some(seed) = doc.seed {
            config.seed = seed;
        }
        if let Some(names) = doc.algorithms {
            config.algorithms = names
                .iter()
                .map(|name| {
                    Algorithm::from_id(name)
                        .ok_or_else(|| Error::BenchConfig(format!("unknown algorithm {name:?}")))
                })
                .collect::<Result<_>>()?;
        }
        if let Some(mode) = doc.mode {
            config.mode = ResolutionMode::from_id(&mode)
                .ok_or_else(|| Error::BenchConfig(format!("unknown mode {mode:?}")))?;
        }
        if let Some(timing) = doc.timing {
            config.timing = timing;
        }
    }

    if !args.sizes.is_empty() {
        config.sizes = args.sizes.clone();
    }
    if let Some(trials) = args.trials {
        config.trials = trials;
    }
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if !args.algorithms.is_empty() {
        config.algorithms = args.algorithms.iter().map(|&a| a.into()).collect();
    }
    if let Some(mode) = args.mode {
        config.mode = mode.into();
    }
    if args.no_timing {
        config.timing = false;
    }
    Ok(config)
}

fn env_seed() -> Result<Option<u64>> {
    match std::env::var("OMIN_SEED") {
        Ok(text) => text
            .parse()
            .map(Some)
            .map_err(|_| Error::BenchConfig(format!("OMIN_SEED is not an integer: {text:?}"))),
        Err(_) => Ok(None),
    }
}

fn bench_command(args: BenchArgs) -> Result<String> {
    let config = bench_config(&args, env_seed()?)?;
    let records = run_suite(&config)?;
    let csv = render_csv(&records);
    match &args.out {
        Some(path) => {
            std::fs::write(path, csv)?;
            Ok(String::new())
        }
        None => Ok(csv),
    }
}

fn dot_command(file: Option<&Path>, size: Option<usize>) -> Result<String> {
    match file {
        Some(path) => {
            let loaded = load_messages(path, &LoadOptions::with_size(size))?;
            Ok(message_diagram(&loaded.set))
        }
        None => {
            let cfg = NetworkConfig::new(size.unwrap_or(8))?;
            Ok(network_diagram(&cfg))
        }
    }
}
