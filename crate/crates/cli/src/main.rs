use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use obstruct_core::algebraic::linking_check;
use obstruct_core::families::{
    cf_length_le3_scan, many_twos_word, mysterious_embedding, mysterious_family, mysterious_sequence,
};
use obstruct_core::floer::{d_invariant, spin_d_check};
use obstruct_core::hjcf::FamilyPattern;
use obstruct_core::lattice::{
    complement_check, embed_search, km_check, render_fixture, SearchMode, SearchStatus,
    DEFAULT_BUDGET,
};
use obstruct_core::pipeline::{
    analyze, csv_header, csv_row, parse_checks, reproduce_table, scan, AnalyzeConfig, Check, Emit,
    ObstructionReport, ReportRecord, ScanCase, ScanConfig, TableId, TableOptions, Verdict,
};
use obstruct_core::singtypes::{plumbing_of, Case1Options, Orientation, SingularityType};
use obstruct_core::Error;

const EXIT_MISMATCH: u8 = 1;
const EXIT_INCONCLUSIVE: u8 = 2;
const EXIT_USAGE: u8 = 3;

#[derive(Parser)]
#[command(name = "obstruct", version, about = "Obstructions to rational homology CP^2 with four cyclic singularities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze one type, e.g. `2/1,3/2,5/1,9409/5519`.
    Analyze {
        #[arg(value_name = "TYPE")]
        ty: SingularityType,
        #[command(flatten)]
        opts: AnalyzeOpts,
        #[arg(long, value_enum, default_value_t = Output::Json, env = "OBSTRUCT_OUTPUT")]
        output: Output,
    },
    /// Scan one of the three cases and stream surviving types.
    Scan(ScanArgs),
    /// Reproduce a published table and diff against it.
    Table {
        #[arg(value_name = "1|2|3")]
        id: TableId,
        /// Largest p4 for table 3.
        #[arg(long, env = "OBSTRUCT_P4_MAX")]
        p4_max: Option<i128>,
        #[arg(long, env = "OBSTRUCT_JOBS")]
        jobs: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_BUDGET, env = "OBSTRUCT_BUDGET_NODES")]
        budget_nodes: u64,
    },
    /// Correction term d(L(p,q), i).
    Dinv { p: i128, q: i128, i: i128 },
    /// Print every embedding class of a type's plumbing in fixture format.
    Embed {
        #[arg(value_name = "TYPE")]
        ty: SingularityType,
        /// Ambient rank; defaults to the vertex count plus one.
        #[arg(long)]
        rank: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_BUDGET, env = "OBSTRUCT_BUDGET_NODES")]
        budget_nodes: u64,
    },
    /// Infinite families of continued fractions.
    #[command(subcommand)]
    Family(FamilyCmd),
}

#[derive(Args)]
struct AnalyzeOpts {
    /// Comma-separated checks in evaluation order.
    #[arg(long, env = "OBSTRUCT_CHECKS", default_value = "obmy,d_square,linking,spin_d,smooth")]
    checks: String,
    /// Run every check instead of stopping at the first failure.
    #[arg(long, env = "OBSTRUCT_FULL_REPORT")]
    full_report: bool,
    #[arg(long, default_value_t = DEFAULT_BUDGET, env = "OBSTRUCT_BUDGET_NODES")]
    budget_nodes: u64,
}

impl AnalyzeOpts {
    fn config(&self) -> Result<AnalyzeConfig, Error> {
        Ok(AnalyzeConfig {
            checks: parse_checks(&self.checks)?,
            short_circuit: !self.full_report,
            budget: self.budget_nodes,
            ..AnalyzeConfig::default()
        })
    }
}

#[derive(Args)]
struct ScanArgs {
    /// 1: orders (2,3,5,p4); 2: (2,3,7,n); 3: (2,3,11,13).
    #[arg(long, env = "OBSTRUCT_CASE", value_parser = clap::value_parser!(u8).range(1..=3))]
    case: u8,
    /// Largest p4 scanned in case 1.
    #[arg(long, env = "OBSTRUCT_P4_MAX")]
    p4_max: Option<i128>,
    /// Values of q3 in case 1, comma-separated.
    #[arg(long, env = "OBSTRUCT_Q3", value_delimiter = ',')]
    q3: Vec<i128>,
    #[command(flatten)]
    opts: AnalyzeOpts,
    #[arg(long, env = "OBSTRUCT_JOBS")]
    jobs: Option<usize>,
    #[arg(long, value_enum, default_value_t = Output::Json, env = "OBSTRUCT_OUTPUT")]
    output: Output,
    #[arg(long, env = "OBSTRUCT_CHECKPOINT")]
    checkpoint: Option<PathBuf>,
    /// Continue from the checkpoint file.
    #[arg(long, requires = "checkpoint")]
    resume: bool,
    /// Emit every type, not only survivors and inconclusive ones.
    #[arg(long)]
    all: bool,
}

#[derive(Subcommand)]
enum FamilyCmd {
    /// Members of the surviving quadratic family at parameter s.
    Mysterious {
        #[arg(long)]
        s: i128,
    },
    /// Instantiate a word pattern such as `[[2]^k,3,4,2,3+k,3,2,4]`.
    Pattern {
        pattern: FamilyPattern,
        /// Inclusive range `a..b`.
        #[arg(long, value_parser = parse_range)]
        k_range: (i64, i64),
        #[arg(long, default_value_t = 1)]
        q3: i128,
    },
    /// Parameters s of the family for which K^2 makes D a square.
    Sequence {
        #[arg(long, default_value_t = 4)]
        n: usize,
    },
    /// Words of length at most three that embed.
    Short {
        #[arg(long)]
        q3: i128,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Json,
    Csv,
}

fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s.split_once("..").ok_or("expected a..b")?;
    let a: i64 = a.trim().parse().map_err(|e| format!("{e}"))?;
    let b: i64 = b.trim().trim_start_matches('=').parse().map_err(|e| format!("{e}"))?;
    if a > b {
        return Err(format!("empty range {a}..{b}"));
    }
    Ok((a, b))
}

/// Writes reports as JSON Lines or CSV.
struct Sink {
    json: bool,
    csv: Option<csv::Writer<io::Stdout>>,
}

impl Sink {
    fn new(output: Output) -> anyhow::Result<Sink> {
        let csv = match output {
            Output::Json => None,
            Output::Csv => {
                let mut w = csv::Writer::from_writer(io::stdout());
                w.write_record(csv_header())?;
                Some(w)
            }
        };
        Ok(Sink {
            json: output == Output::Json,
            csv,
        })
    }

    fn write(&mut self, r: &ObstructionReport) -> anyhow::Result<()> {
        if self.json {
            writeln!(io::stdout().lock(), "{}", ReportRecord::from(r).to_json_line())?;
        } else if let Some(w) = &mut self.csv {
            w.write_record(csv_row(r))?;
        }
        Ok(())
    }

    fn finish(self) -> anyhow::Result<()> {
        if let Some(mut w) = self.csv {
            w.flush()?;
        }
        Ok(())
    }
}

fn print_json<T: Serialize>(v: &T) -> anyhow::Result<()> {
    writeln!(io::stdout().lock(), "{}", serde_json::to_string(v)?)?;
    Ok(())
}

fn run_scan(args: &ScanArgs) -> anyhow::Result<u8> {
    let case = match args.case {
        1 => {
            let p4_max = args
                .p4_max
                .ok_or_else(|| Error::InvalidArgs("case 1 needs --p4-max".into()))?;
            let mut options = Case1Options::default();
            if !args.q3.is_empty() {
                options.q3_values = args.q3.clone();
            }
            ScanCase::Case1 {
                p4_min: 7,
                p4_below: p4_max + 1,
                options,
            }
        }
        2 => ScanCase::Case2,
        _ => ScanCase::Case3,
    };
    let cfg = ScanConfig {
        analyze: args.opts.config()?,
        jobs: args.jobs,
        emit: if args.all { Emit::All } else { Emit::Survivors },
        checkpoint: args.checkpoint.clone(),
        resume: args.resume,
        batch: 0,
    };
    let mut sink = Sink::new(args.output)?;
    let counters = scan(&case, &cfg, |r| {
        sink.write(r).map_err(|e| Error::Io(e.to_string()))
    })?;
    sink.finish()?;
    eprintln!("{}", serde_json::to_string(&counters)?);
    Ok(if counters.inconclusive > 0 { EXIT_INCONCLUSIVE } else { 0 })
}

#[derive(Serialize)]
struct MysteriousSummary {
    s: i128,
    #[serde(rename = "type")]
    ty: String,
    d_root: Option<i128>,
    linking_witness: Option<i128>,
    spin_d_witness: Option<[i128; 4]>,
    ambient_rank: usize,
    complement_norm: i128,
    complement_pass: bool,
    km_pass: bool,
    verdict: String,
}

fn mysterious(s: i128) -> anyhow::Result<u8> {
    let ty = mysterious_family(s)?;
    // The search is replaced by the parametric embedding; every other check runs as usual.
    let cfg = AnalyzeConfig {
        checks: vec![Check::Obmy, Check::DSquare, Check::Linking, Check::SpinD],
        short_circuit: false,
        ..AnalyzeConfig::default()
    };
    let report = analyze(&ty, &cfg);
    let (pl, emb) = mysterious_embedding(s)?;
    let comp = complement_check(&emb, ty.order_product())?;
    let km = km_check(&emb, &pl);
    let survives = report.verdict == Verdict::Survives && comp.pass && km.pass;
    print_json(&MysteriousSummary {
        s,
        ty: ty.table_row(),
        d_root: report.algebraic.d_root,
        linking_witness: linking_check(&ty).witness,
        spin_d_witness: spin_d_check(&ty).witness,
        ambient_rank: emb.ambient_rank,
        complement_norm: comp.norm,
        complement_pass: comp.pass,
        km_pass: km.pass,
        verdict: if survives { "survives".into() } else { "obstructed".into() },
    })?;
    Ok(0)
}

#[derive(Serialize)]
struct PatternRow {
    k: i64,
    word: Vec<i64>,
    p4: i128,
    q4: i128,
    many_twos: bool,
}

fn run_family(cmd: &FamilyCmd) -> anyhow::Result<u8> {
    match cmd {
        FamilyCmd::Mysterious { s } => mysterious(*s),
        FamilyCmd::Pattern { pattern, k_range, q3 } => {
            for k in k_range.0.max(pattern.min_k())..=k_range.1 {
                let word = pattern.instantiate(k)?;
                let (p4, q4) = word.eval()?;
                print_json(&PatternRow {
                    k,
                    many_twos: many_twos_word(*q3, word.coefficients())?,
                    word: word.coefficients().to_vec(),
                    p4,
                    q4,
                })?;
            }
            Ok(0)
        }
        FamilyCmd::Sequence { n } => {
            let mut seq = mysterious_sequence(*n);
            seq.truncate(*n);
            print_json(&seq)?;
            Ok(0)
        }
        FamilyCmd::Short { q3 } => {
            for hit in cf_length_le3_scan(*q3)? {
                print_json(&hit)?;
            }
            Ok(0)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.command {
        Command::Analyze { ty, opts, output } => {
            let report = analyze(&ty, &opts.config()?);
            let mut sink = Sink::new(output)?;
            sink.write(&report)?;
            sink.finish()?;
            Ok(if report.verdict == Verdict::Inconclusive { EXIT_INCONCLUSIVE } else { 0 })
        }
        Command::Scan(args) => run_scan(&args),
        Command::Table {
            id,
            p4_max,
            jobs,
            budget_nodes,
        } => {
            let mut opts = TableOptions {
                jobs,
                budget: budget_nodes,
                ..TableOptions::default()
            };
            if let Some(m) = p4_max {
                opts.p4_below = m + 1;
            }
            let t = reproduce_table(id, &opts)?;
            print!("{}", t.render());
            eprintln!("{}", serde_json::to_string(&t.counters)?);
            if !t.inconclusive.is_empty() {
                eprint!("{}", t.diff());
                return Ok(EXIT_INCONCLUSIVE);
            }
            if !t.matches() {
                eprint!("{}", t.diff());
                return Ok(EXIT_MISMATCH);
            }
            Ok(0)
        }
        Command::Dinv { p, q, i } => {
            println!("{}", d_invariant(p, q, i)?);
            Ok(0)
        }
        Command::Embed {
            ty,
            rank,
            budget_nodes,
        } => {
            let pl = plumbing_of(&ty, Orientation::Standard);
            let n = rank.unwrap_or(pl.vertex_count() + 1);
            let out = embed_search(&pl, n, SearchMode::EnumerateClasses, budget_nodes);
            let mut stdout = io::stdout().lock();
            for (i, emb) in out.classes.iter().enumerate() {
                writeln!(stdout, "# type {}, ambient rank {n}, class {}", ty.table_row(), i + 1)?;
                write!(stdout, "{}", render_fixture(emb))?;
            }
            if out.status == SearchStatus::BudgetExhausted {
                eprintln!("search budget exhausted after {} nodes", out.nodes);
                return Ok(EXIT_INCONCLUSIVE);
            }
            Ok(0)
        }
        Command::Family(cmd) => run_family(&cmd),
    }
}

fn is_usage(e: &anyhow::Error) -> bool {
    matches!(
        e.downcast_ref::<Error>(),
        Some(
            Error::InvalidArgs(_)
                | Error::Parse(_)
                | Error::InvalidType(_)
                | Error::InvalidPair { .. }
                | Error::OutOfRange(_)
        )
    )
}

fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.chain().any(|c| {
        c.downcast_ref::<io::Error>().is_some_and(|e| e.kind() == io::ErrorKind::BrokenPipe)
            || c.downcast_ref::<csv::Error>().is_some_and(|e| {
                matches!(e.kind(), csv::ErrorKind::Io(e) if e.kind() == io::ErrorKind::BrokenPipe)
            })
            || matches!(c.downcast_ref::<Error>(), Some(Error::Io(m)) if m.contains("Broken pipe"))
    })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli).context("obstruct") {
        Ok(code) => ExitCode::from(code),
        Err(e) if is_broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(if is_usage(&e) { EXIT_USAGE } else { EXIT_MISMATCH })
        }
    }
}
