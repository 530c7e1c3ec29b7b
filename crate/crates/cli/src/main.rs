//! Command-line front end: read a graph description file, run the band
//! pipeline, emit CSV tables, band-edge reports, flat-band lists, lifted
//! quantum energies, or a static SVG band plot.
//!
//! Exit codes: 1 — file or parse error, 2 — validation or usage error,
//! 3 — numerical failure.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use chainband::analysis::{
    all_edges_at_symmetry_points, band_edge_report, default_probe_ks, detect_flat_bands,
    edge_report_csv, flat_report, AnalysisError, TOL_K,
};
use chainband::floquet::{k_grid, sample_bands, FloquetError};
use chainband::graph::{GraphFileError, PeriodicChainGraph};
use chainband::quantum::{quantum_bands, quantum_table_csv, EnergyWindow, QuantumError};

mod svg;

#[derive(Parser)]
#[command(
    name = "chainband",
    version,
    about = "Band structure of Z-periodic chain graphs",
    long_about = "Assembles Floquet matrices of the normalised discrete Laplacian on a \
                  Z-periodic chain graph, samples its band functions over [0, \u{3c0}], locates \
                  and classifies spectral band edges, detects flat bands, and lifts the bands \
                  to equilateral quantum-graph energies."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample the band functions and emit a CSV table or an SVG plot
    Bands(CommonArgs),
    /// Locate per-band extrema and classify where they are attained
    Edges(CommonArgs),
    /// List flat-band values (possibly none)
    Flat(CommonArgs),
    /// Lift the bands to quantum-graph energies in [0, E_max]
    Quantum(QuantumArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Svg,
}

#[derive(Args)]
struct CommonArgs {
    /// Graph description file (TOML with `vertices` and `edges`)
    #[arg(long)]
    graph: PathBuf,

    /// Number of samples on [0, pi]; also the coarse grid for bracketing
    #[arg(long, default_value_t = 401, value_parser = clap::value_parser!(u32).range(41..))]
    samples: u32,

    /// Quasi-momentum tolerance for extremum refinement
    #[arg(long, default_value_t = 1e-6, value_parser = parse_positive)]
    refine_tol: f64,

    /// Band-spread threshold below which a band counts as flat
    #[arg(long, default_value_t = 1e-9, value_parser = parse_positive)]
    flat_tol: f64,

    /// Write the output here instead of standard output
    #[arg(long)]
    output: Option<PathBuf>,

    /// Output format; SVG is available for `bands` only
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args)]
struct QuantumArgs {
    #[command(flatten)]
    common: CommonArgs,

    /// Upper end of the energy window [0, E_max]
    #[arg(long, value_parser = parse_positive)]
    emax: f64,
}

fn parse_positive(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err("value must be a positive finite number".into())
    }
}

enum Failure {
    File(String),
    Validation(String),
    Numerical(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::File(_) => 1,
            Failure::Validation(_) => 2,
            Failure::Numerical(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::File(m) | Failure::Validation(m) | Failure::Numerical(m) => m,
        }
    }
}

impl From<GraphFileError> for Failure {
    fn from(e: GraphFileError) -> Self {
        match e {
            GraphFileError::Io { .. } | GraphFileError::Parse(_) => Failure::File(e.to_string()),
            GraphFileError::Invalid(_) => Failure::Validation(e.to_string()),
        }
    }
}

impl From<FloquetError> for Failure {
    fn from(e: FloquetError) -> Self {
        Failure::Numerical(e.to_string())
    }
}

impl From<AnalysisError> for Failure {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::Floquet(inner) => Failure::Numerical(inner.to_string()),
            other => Failure::Validation(other.to_string()),
        }
    }
}

impl From<QuantumError> for Failure {
    fn from(e: QuantumError) -> Self {
        Failure::Numerical(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let (common, report) = match &cli.command {
        Command::Bands(args) => (args, cmd_bands(args)?),
        Command::Edges(args) => (args, cmd_edges(args)?),
        Command::Flat(args) => (args, cmd_flat(args)?),
        Command::Quantum(args) => (&args.common, cmd_quantum(args)?),
    };
    write_output(common, &report)
}

fn load(common: &CommonArgs) -> Result<PeriodicChainGraph, Failure> {
    Ok(PeriodicChainGraph::from_path(&common.graph)?)
}

fn require_csv(common: &CommonArgs, command: &str) -> Result<(), Failure> {
    if common.format == Format::Svg {
        return Err(Failure::Validation(format!(
            "SVG output is only available for `bands`, not `{command}`"
        )));
    }
    Ok(())
}

fn cmd_bands(args: &CommonArgs) -> Result<String, Failure> {
    let g = load(args)?;
    let table = sample_bands(&g, &k_grid(args.samples as usize))?;
    Ok(match args.format {
        Format::Csv => table.to_csv(),
        Format::Svg => svg::band_plot(&table),
    })
}

fn cmd_edges(args: &CommonArgs) -> Result<String, Failure> {
    require_csv(args, "edges")?;
    let g = load(args)?;
    let report = band_edge_report(&g, args.samples as usize, args.refine_tol, TOL_K, args.flat_tol)?;
    let mut out = edge_report_csv(&report);
    let verdict = if all_edges_at_symmetry_points(&report) { "yes" } else { "no" };
    out.push_str(&format!("ALL_EDGES_AT_SYMMETRY_POINTS: {verdict}\n"));
    Ok(out)
}

fn cmd_flat(args: &CommonArgs) -> Result<String, Failure> {
    require_csv(args, "flat")?;
    let g = load(args)?;
    let values = detect_flat_bands(&g, &default_probe_ks(args.samples as usize), args.flat_tol)?;
    Ok(flat_report(&values))
}

fn cmd_quantum(args: &QuantumArgs) -> Result<String, Failure> {
    require_csv(&args.common, "quantum")?;
    let g = load(&args.common)?;
    let window = EnergyWindow::new(args.emax);
    let points = k_grid(args.common.samples as usize)
        .into_iter()
        .map(|k| quantum_bands(&g, k, &window))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(quantum_table_csv(&points))
}

fn write_output(common: &CommonArgs, report: &str) -> Result<(), Failure> {
    match &common.output {
        Some(path) => fs::write(path, report)
            .map_err(|e| Failure::File(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{report}");
            Ok(())
        }
    }
}
