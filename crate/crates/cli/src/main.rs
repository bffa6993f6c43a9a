//! Command-line interface: counting, bounds, scans, Wilf tables, the
//! algorithm ladder trace, and the LRM probe, with text, JSON, or CSV
//! output.
//!
//! Exit status: 0 on success (claims hold), 1 when a scan or probe finds a
//! counterexample, 2 on input or usage errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use posetperm::counting::{
    av_count, extension_count_with_cap, theorem5_bounds, CountMode, DEFAULT_IDEAL_CAP,
};
use posetperm::lrme::{format_fg_trace, OmegaLabeling};
use posetperm::pattern::PosetPermutation;
use posetperm::poset::parse_poset_text;
use posetperm::verify::{lrm_probe, scan, wilf_table, CheckKind, Verdict};
use posetperm::{Pattern, Poset};

#[derive(Parser)]
#[command(
    name = "posetperm",
    version,
    about = "Pattern avoidance in permutations on partially ordered sets"
)]
struct Cli {
    /// Worker threads (default: available parallelism, or POSETPERM_THREADS)
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Output::Text)]
    output: Output,

    /// Order-ideal budget for extension counting
    #[arg(long, global = true, default_value_t = DEFAULT_IDEAL_CAP)]
    memo_cap: usize,

    /// Seed for sampled self-checks
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Pruned,
    Naive,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct PosetSource {
    /// Poset file in the `poset v1` text format
    #[arg(long, value_name = "FILE")]
    poset: Option<PathBuf>,

    /// Boolean lattice of this rank (with the empty set)
    #[arg(long, value_name = "N")]
    boolean: Option<u32>,
}

#[derive(Subcommand)]
enum Command {
    /// Count the permutations avoiding a pattern
    Count {
        #[command(flatten)]
        source: PosetSource,
        /// Pattern in chain (`132`) or set (`{1}{1,2}{2}`) notation
        #[arg(long)]
        pattern: String,
        #[arg(long, value_enum, default_value_t = Mode::Pruned)]
        mode: Mode,
    },
    /// Count linear extensions by the order-ideal dynamic program
    Extensions {
        #[command(flatten)]
        source: PosetSource,
    },
    /// Lower/upper bounds for the split-pattern avoiders on a Boolean
    /// lattice, with the exact count when the rank allows it
    Bounds {
        #[arg(long)]
        n: u32,
    },
    /// Run a check over all non-isomorphic posets up to a size
    Scan {
        #[arg(long)]
        max_size: usize,
        /// `theorem3` or `conjecture`
        #[arg(long)]
        check: String,
    },
    /// Wilf-class table of length-three patterns on a Boolean lattice
    Wilf {
        #[arg(long)]
        n: u32,
    },
    /// Print the f/g algorithm ladder for a labeled poset
    FgTrace {
        /// Poset file in the `poset v1` text format
        #[arg(long, value_name = "FILE")]
        poset: PathBuf,
        /// Labeling file: one `<element-label> <positive integer>` per line
        #[arg(long, value_name = "FILE")]
        omega: PathBuf,
        /// Starting permutation as whitespace-separated element labels
        #[arg(long)]
        sigma: String,
    },
    /// Compare pattern-avoiding completions over left-to-right-minima sets
    LrmProbe {
        #[arg(long, value_name = "FILE")]
        poset: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.memo_cap == 0 {
        eprintln!("error: --memo-cap must be at least 1");
        return ExitCode::from(2);
    }
    let threads = cli.threads.or_else(|| {
        std::env::var("POSETPERM_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    if let Some(threads) = threads {
        if threads == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(2);
        }
        // a failure here means a pool already exists, which is fine
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    match run(&cli) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode, String> {
    match &cli.command {
        Command::Count {
            source,
            pattern,
            mode,
        } => {
            let poset = load_source(source)?;
            let pattern = Pattern::parse(pattern).map_err(|e| e.to_string())?;
            let mode = match mode {
                Mode::Pruned => CountMode::Pruned,
                Mode::Naive => CountMode::Naive,
            };
            let count = av_count(&poset, &pattern, mode);
            match cli.output {
                Output::Text => println!("{count}"),
                Output::Json => print_json(&json!({
                    "elements": poset.len(),
                    "pattern": pattern.text(),
                    "mode": if mode == CountMode::Pruned { "pruned" } else { "naive" },
                    "count": count.to_string(),
                })),
                Output::Csv => {
                    println!("pattern,count");
                    println!("{},{}", pattern.text(), count);
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Extensions { source } => {
            let poset = load_source(source)?;
            let count =
                extension_count_with_cap(&poset, cli.memo_cap).map_err(|e| e.to_string())?;
            match cli.output {
                Output::Text => println!("{count}"),
                Output::Json => print_json(&json!({
                    "elements": poset.len(),
                    "extensions": count.to_string(),
                })),
                Output::Csv => {
                    println!("elements,extensions");
                    println!("{},{}", poset.len(), count);
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Bounds { n } => {
            let (lower, upper) = theorem5_bounds(*n).map_err(|e| e.to_string())?;
            let exact = if *n <= 3 {
                let lattice = Poset::boolean_lattice(*n, true).map_err(|e| e.to_string())?;
                let pattern = Pattern::parse("{1}{1,2}{2}").unwrap();
                Some(av_count(&lattice, &pattern, CountMode::Pruned))
            } else {
                None
            };
            match cli.output {
                Output::Text => {
                    println!("lower {lower}");
                    if let Some(exact) = &exact {
                        println!("exact {exact}");
                    }
                    println!("upper {upper}");
                }
                Output::Json => print_json(&json!({
                    "n": n,
                    "lower": lower.to_string(),
                    "exact": exact.as_ref().map(|c| c.to_string()),
                    "upper": upper.to_string(),
                })),
                Output::Csv => {
                    println!("n,lower,exact,upper");
                    println!(
                        "{n},{lower},{},{upper}",
                        exact.map(|c| c.to_string()).unwrap_or_default()
                    );
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Scan { max_size, check } => {
            let kind: CheckKind = check.parse().map_err(|e: posetperm::Error| e.to_string())?;
            let summary = scan(*max_size, kind).map_err(|e| e.to_string())?;
            match cli.output {
                Output::Text => {
                    println!(
                        "check {}: {} posets up to {} elements",
                        summary.check, summary.posets_checked, summary.max_size
                    );
                    println!(
                        "equal {} strict {} counterexamples {}",
                        summary.equal_count,
                        summary.strict_count,
                        summary.counterexamples.len()
                    );
                    for report in &summary.counterexamples {
                        println!("counterexample: {}", report.poset);
                    }
                }
                Output::Json => print_json(&summary),
                Output::Csv => print!("{}", summary.csv()),
            }
            Ok(exit_for(summary.holds()))
        }
        Command::Wilf { n } => {
            let table = wilf_table(*n, None).map_err(|e| e.to_string())?;
            match cli.output {
                Output::Text => {
                    for class in &table.classes {
                        let cells: Vec<String> = class
                            .rows
                            .iter()
                            .map(|r| format!("{} {}", r.pattern, r.count))
                            .collect();
                        let marker = if class.equal_within_class {
                            ""
                        } else {
                            "  [UNEQUAL]"
                        };
                        println!("{}{}", cells.join(" | "), marker);
                    }
                }
                Output::Json => print_json(&table),
                Output::Csv => print!("{}", table.csv()),
            }
            Ok(exit_for(table.verdict == Verdict::Pass))
        }
        Command::FgTrace {
            poset,
            omega,
            sigma,
        } => {
            let poset = load_poset(poset)?;
            let labeling = load_omega(omega, &poset)?;
            let arc = Arc::new(poset);
            let start = PosetPermutation::from_labels(Arc::clone(&arc), sigma)
                .map_err(|e| e.to_string())?;
            let f = labeling
                .f_trace(start.entries())
                .map_err(|e| e.to_string())?;
            let pi = f.steps.last().expect("trace is never empty").clone();
            let g = labeling.g_trace(&pi).map_err(|e| e.to_string())?;
            let ladder = format_fg_trace(labeling.poset(), &f, &g);
            match cli.output {
                Output::Text | Output::Csv => print!("{ladder}"),
                Output::Json => {
                    let lines: Vec<&str> = ladder.lines().collect();
                    print_json(&json!({ "ladder": lines }));
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::LrmProbe { poset } => {
            let poset = load_poset(poset)?;
            let report = lrm_probe(&poset).map_err(|e| e.to_string())?;
            match cli.output {
                Output::Text => {
                    println!("poset: {}", report.poset);
                    println!(
                        "lrm sets {} violations {}",
                        report.lrm_sets,
                        report.violations.len()
                    );
                    for v in &report.violations {
                        println!(
                            "violation: elements [{}] at positions {:?}",
                            v.elements.join(" "),
                            v.positions
                        );
                    }
                }
                Output::Json => print_json(&report),
                Output::Csv => {
                    println!("elements,positions,completions,counts");
                    for v in &report.violations {
                        let counts: Vec<String> = v
                            .counts
                            .iter()
                            .map(|c| format!("{}={}", c.pattern, c.count))
                            .collect();
                        println!(
                            "{},{},{},{}",
                            v.elements.join(" "),
                            v.positions
                                .iter()
                                .map(usize::to_string)
                                .collect::<Vec<_>>()
                                .join(" "),
                            v.completions,
                            counts.join(" ")
                        );
                    }
                }
            }
            Ok(exit_for(report.verdict == Verdict::Pass))
        }
    }
}

fn exit_for(holds: bool) -> ExitCode {
    if holds {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn print_json(value: &impl serde::Serialize) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("reports serialize")
    );
}

fn load_source(source: &PosetSource) -> Result<Poset, String> {
    match (&source.poset, source.boolean) {
        (Some(path), None) => load_poset(path),
        (None, Some(rank)) => Poset::boolean_lattice(rank, true).map_err(|e| e.to_string()),
        _ => unreachable!("clap enforces exactly one source"),
    }
}

fn load_poset(path: &Path) -> Result<Poset, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    parse_poset_text(&text).map_err(|e| e.to_string())
}

/// Labeling file format: one `<element-label> <positive integer>` line per
/// element, validated against the legality conditions on load.
fn load_omega(path: &Path, poset: &Poset) -> Result<OmegaLabeling, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let mut omega = vec![0usize; poset.len()];
    let mut seen = vec![false; poset.len()];
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
        let mut parts = line.split_whitespace();
        let label = parts.next().expect("non-empty line");
        let value = parts
            .next()
            .ok_or_else(|| format!("labeling line `{line}` is missing a value"))?;
        if parts.next().is_some() {
            return Err(format!("trailing tokens on labeling line `{line}`"));
        }
        let element = poset
            .index_of_label(label)
            .ok_or_else(|| format!("unknown element label `{label}`"))?;
        if seen[element] {
            return Err(format!("duplicate labeling for `{label}`"));
        }
        seen[element] = true;
        omega[element] = value
            .parse()
            .map_err(|_| format!("bad labeling value `{value}` for `{label}`"))?;
    }
    if let Some(missing) = seen.iter().position(|s| !s) {
        return Err(format!(
            "element `{}` has no labeling value",
            poset.label(missing)
        ));
    }
    OmegaLabeling::new(poset.clone(), omega).map_err(|e| e.to_string())
}
