//! Command-line entry point.

use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use cyclerep_cli::generate::{generate, Generated, GeneratorKind};
use cyclerep_cli::pipeline::{
    run_barcode, run_optimize, InputSource, ProgramKind, RunConfig, WeightMode,
};
use cyclerep_cli::report::{
    barcode_to_csv, cycles_to_csv, from_json, summarize_cycles, to_json, Report,
};
use cyclerep_core::tri_opt::SlicingStrategy;

#[derive(Parser)]
#[command(
    name = "cyclerep",
    version,
    about = "Optimal cycle representatives for persistent homology over the rationals"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the degree-1 barcode of a Vietoris-Rips filtration
    Barcode(BarcodeArgs),
    /// Optimize cycle representatives with one of the three programs
    Optimize(OptimizeArgs),
    /// Emit a synthetic point cloud or dissimilarity matrix
    Generate(GenArgs),
    /// Re-aggregate a JSON report or flatten its cycle rows to CSV
    Report(ReportArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Normal,
    Gamma,
    Logistic,
    Exponential,
    ErdosRenyi,
}

impl From<KindArg> for GeneratorKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Normal => GeneratorKind::Normal,
            KindArg::Gamma => GeneratorKind::Gamma,
            KindArg::Logistic => GeneratorKind::Logistic,
            KindArg::Exponential => GeneratorKind::Exponential,
            KindArg::ErdosRenyi => GeneratorKind::ErdosRenyi,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ProgramArg {
    EdgePersistent,
    EdgeFiltered,
    Triangle,
}

impl From<ProgramArg> for ProgramKind {
    fn from(p: ProgramArg) -> Self {
        match p {
            ProgramArg::EdgePersistent => ProgramKind::EdgePersistent,
            ProgramArg::EdgeFiltered => ProgramKind::EdgeFiltered,
            ProgramArg::Triangle => ProgramKind::Triangle,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum WeightArg {
    Uniform,
    Length,
    Area,
}

impl From<WeightArg> for WeightMode {
    fn from(w: WeightArg) -> Self {
        match w {
            WeightArg::Uniform => WeightMode::Uniform,
            WeightArg::Length => WeightMode::Length,
            WeightArg::Area => WeightMode::Area,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    ZeroOut,
    BuildAll,
    BuildPart,
}

impl From<StrategyArg> for SlicingStrategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::ZeroOut => SlicingStrategy::ZeroOut,
            StrategyArg::BuildAll => SlicingStrategy::BuildAll,
            StrategyArg::BuildPart => SlicingStrategy::BuildPart,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Args)]
struct InputOpts {
    /// Input CSV file; requires --points or --distances
    #[arg(long, conflicts_with = "generate")]
    input: Option<PathBuf>,
    /// Treat --input as a point cloud (one point per row)
    #[arg(long, conflicts_with = "distances", requires = "input")]
    points: bool,
    /// Treat --input as a distance matrix
    #[arg(long, requires = "input")]
    distances: bool,
    /// Generate the input instead of reading a file
    #[arg(long, value_enum)]
    generate: Option<KindArg>,
    /// Number of generated points (or generated matrix size)
    #[arg(long, default_value_t = 30)]
    n: usize,
    /// Generated point dimension (ignored for erdos-renyi)
    #[arg(long, default_value_t = 2)]
    dim: usize,
    /// Filtration threshold in input units
    #[arg(long)]
    max_eps: Option<f64>,
    /// Generator seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Drop points at exact distance zero from an earlier point
    #[arg(long)]
    dedupe: bool,
}

impl InputOpts {
    fn source(&self) -> anyhow::Result<InputSource> {
        match (&self.input, self.generate) {
            (Some(path), None) => {
                if self.points {
                    Ok(InputSource::PointFile(path.clone()))
                } else if self.distances {
                    Ok(InputSource::DistanceFile(path.clone()))
                } else {
                    bail!("--input needs --points or --distances to fix its interpretation")
                }
            }
            (None, Some(kind)) => {
                Ok(InputSource::Generated { kind: kind.into(), n: self.n, dim: self.dim })
            }
            (None, None) => bail!("provide exactly one input source: --input or --generate"),
            (Some(_), Some(_)) => unreachable!("clap rejects the conflict"),
        }
    }
}

#[derive(Args)]
struct BarcodeArgs {
    #[command(flatten)]
    input: InputOpts,
    /// Output path (stdout when absent)
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
}

#[derive(Args)]
struct OptimizeArgs {
    #[command(flatten)]
    input: InputOpts,
    #[arg(long, value_enum, default_value_t = ProgramArg::EdgePersistent)]
    program: ProgramArg,
    #[arg(long = "weights", value_enum, default_value_t = WeightArg::Uniform)]
    weights: WeightArg,
    /// Restrict chain variables to integers (solves the relaxation too
    /// and records whether the costs agree)
    #[arg(long)]
    integral: bool,
    /// Constraint-matrix slicing for the triangle program
    #[arg(long, value_enum, default_value_t = StrategyArg::BuildPart)]
    strategy: StrategyArg,
    /// Experimental: optimize against the untouched input basis instead
    /// of replacing elements sequentially
    #[arg(long)]
    no_replacement: bool,
    /// Output path (stdout when absent)
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
}

#[derive(Args)]
struct GenArgs {
    #[arg(value_enum)]
    kind: KindArg,
    #[arg(long, default_value_t = 100)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    dim: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output path (stdout when absent)
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
}

#[derive(Args)]
struct ReportArgs {
    /// A JSON report produced by `optimize`
    #[arg(long)]
    input: PathBuf,
    /// Output path (stdout when absent)
    #[arg(long)]
    out: Option<PathBuf>,
    /// json re-emits the report with a freshly recomputed summary; csv
    /// flattens the per-cycle rows
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
}

fn write_output(text: &str, out: Option<&Path>) -> anyhow::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)
            .with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn render_report(report: &Report, format: FormatArg) -> anyhow::Result<String> {
    Ok(match format {
        FormatArg::Json => to_json(report),
        FormatArg::Csv => {
            if report.command == "barcode" {
                barcode_to_csv(&report.barcode)?
            } else {
                cycles_to_csv(&report.cycles)?
            }
        }
    })
}

fn rows_to_csv(rows: &[Vec<f64>]) -> String {
    let mut s = String::new();
    for row in rows {
        let cells: Vec<String> = row.iter().map(f64::to_string).collect();
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    s
}

fn main() -> anyhow::Result<()> {
    match Cli::parse().command {
        Command::Barcode(args) => {
            let config = RunConfig {
                source: args.input.source()?,
                max_eps: args.input.max_eps,
                program: ProgramKind::EdgePersistent,
                weight: WeightMode::Uniform,
                integral: false,
                strategy: SlicingStrategy::BuildPart,
                seed: args.input.seed,
                dedupe: args.input.dedupe,
                replace: true,
            };
            let (report, err) = run_barcode(&config);
            write_output(&render_report(&report, args.format)?, args.out.as_deref())?;
            match err {
                Some(e) => Err(e),
                None => Ok(()),
            }
        }
        Command::Optimize(args) => {
            let config = RunConfig {
                source: args.input.source()?,
                max_eps: args.input.max_eps,
                program: args.program.into(),
                weight: args.weights.into(),
                integral: args.integral,
                strategy: args.strategy.into(),
                seed: args.input.seed,
                dedupe: args.input.dedupe,
                replace: !args.no_replacement,
            };
            let (report, err) = run_optimize(&config);
            write_output(&render_report(&report, args.format)?, args.out.as_deref())?;
            match err {
                Some(e) => Err(e),
                None => Ok(()),
            }
        }
        Command::Generate(args) => {
            let data = generate(args.kind.into(), args.n, args.dim, args.seed)?;
            let rows = match &data {
                Generated::Points(rows) | Generated::Matrix(rows) => rows,
            };
            let text = match args.format {
                FormatArg::Csv => rows_to_csv(rows),
                FormatArg::Json => {
                    let mut s = serde_json::to_string_pretty(rows).expect("plain numbers");
                    s.push('\n');
                    s
                }
            };
            write_output(&text, args.out.as_deref())
        }
        Command::Report(args) => {
            let text = std::fs::read_to_string(&args.input)
                .with_context(|| format!("reading {}", args.input.display()))?;
            let mut report = from_json(&text).context("parsing report")?;
            report.summary =
                Some(summarize_cycles(&report.cycles).map_err(|e| anyhow!(e))?);
            let out = match args.format {
                FormatArg::Json => to_json(&report),
                FormatArg::Csv => cycles_to_csv(&report.cycles)?,
            };
            write_output(&out, args.out.as_deref())
        }
    }
}
