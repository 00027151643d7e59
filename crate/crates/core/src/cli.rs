//! `goldseason` command-line front end.
//!
//! Exit codes: 0 success, 1 usage or I/O error, 2 data validation error,
//! 3 numeric failure.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, CommandFactory, Parser, Subcommand};

use crate::calendar::{parse_panel_csv, render_panel_csv, MonthStamp, SeriesPanel};
use crate::decomposition::{Aggregator, DecompositionModel, DEFAULT_PERIOD};
use crate::error::{Error, ErrorKind, Result};
use crate::report::{
    correlations, decompositions, emit_chart_data, render_report, return_summaries, to_json, write_correlations,
    write_decomposition_table, write_header, write_returns_table, OutputFormat, ReportConfig,
};
use crate::synthetic::{generate_series, GeneratorSpec};

#[derive(Debug, Parser)]
#[command(
    name = "goldseason",
    version,
    about = "Calendar-month anomaly analysis of monthly price panels"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Average monthly returns with t-test significance.
    Returns(AnalysisArgs),
    /// Price and return correlation matrices.
    Correlate(AnalysisArgs),
    /// Seasonal decomposition of each price series.
    Decompose(AnalysisArgs),
    /// Full report: returns, correlations, decomposition and sign column.
    Report(AnalysisArgs),
    /// Generate a synthetic single-series panel CSV.
    Synth(SynthArgs),
}

#[derive(Debug, Args)]
struct AnalysisArgs {
    /// Panel CSV: header `date,<CODE>,...`, rows `YYYY-MM,<price>,...`.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value = "panel")]
    group: String,
    #[arg(long, default_value = "multiplicative", value_parser = parse_via::<DecompositionModel>)]
    model: DecompositionModel,
    #[arg(long, default_value_t = DEFAULT_PERIOD)]
    period: usize,
    #[arg(long, default_value = "median", value_parser = parse_via::<Aggregator>)]
    aggregator: Aggregator,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// Currencies that must agree for a `+` or `-` sign (default: all).
    #[arg(long)]
    quorum: Option<usize>,
    #[arg(long, value_parser = parse_via::<MonthStamp>)]
    start: Option<MonthStamp>,
    #[arg(long, value_parser = parse_via::<MonthStamp>)]
    end: Option<MonthStamp>,
    /// `md` or `json`.
    #[arg(long, default_value = "md", value_parser = parse_via::<OutputFormat>)]
    format: OutputFormat,
    /// Write output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Directory for seasonal deviation chart CSVs.
    #[arg(long)]
    charts: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SynthArgs {
    #[arg(long, default_value = "multiplicative", value_parser = parse_via::<DecompositionModel>)]
    model: DecompositionModel,
    #[arg(long, default_value_t = 100.0)]
    intercept: f64,
    #[arg(long, default_value_t = 0.0)]
    slope: f64,
    /// Comma-separated seasonal indices, January first (normalized before use).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    indices: Option<Vec<f64>>,
    #[arg(long, default_value_t = 0.0)]
    noise_sd: f64,
    #[arg(long, default_value_t = 240)]
    length: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "2000-01", value_parser = parse_via::<MonthStamp>)]
    start: MonthStamp,
    #[arg(long, default_value = "SYN")]
    currency: String,
    #[arg(long, default_value_t = DEFAULT_PERIOD)]
    period: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_via<T: std::str::FromStr<Err = Error>>(s: &str) -> std::result::Result<T, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Parses `argv` (including the program name), runs the command and returns
/// the process exit code.
pub fn run_cli<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind as K;
            let rendered = e.render().to_string();
            return match e.kind() {
                K::DisplayHelp | K::DisplayVersion => {
                    let _ = write!(stdout, "{rendered}");
                    0
                }
                _ => {
                    let _ = write!(stderr, "{rendered}");
                    ErrorKind::Usage.exit_code()
                }
            };
        }
    };
    match execute(cli.command, stdout) {
        Ok(()) => 0,
        Err(err) => {
            let kind = err.kind();
            let _ = writeln!(stderr, "error: {err}");
            if kind == ErrorKind::Usage {
                let usage = Cli::command().render_usage();
                let _ = writeln!(stderr, "\n{usage}");
            }
            kind.exit_code()
        }
    }
}

fn load_panel(args: &AnalysisArgs) -> Result<SeriesPanel> {
    let text = std::fs::read_to_string(&args.input).map_err(|e| Error::io(&args.input, e))?;
    let panel = parse_panel_csv(&text, &args.group)?;
    if args.start.is_none() && args.end.is_none() {
        return Ok(panel);
    }
    let start = args.start.unwrap_or(panel.first_stamp());
    let end = args.end.unwrap_or(panel.last_stamp());
    panel.slice(start, end)
}

fn config_from(args: &AnalysisArgs) -> ReportConfig {
    ReportConfig {
        group: args.group.clone(),
        model: args.model,
        period: args.period,
        aggregator: args.aggregator,
        alpha: args.alpha,
        quorum: args.quorum,
        format: args.format,
        charts: args.charts.clone(),
    }
}

fn deliver(text: &str, out: Option<&Path>, stdout: &mut dyn Write) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::io(path, e)),
        None => stdout.write_all(text.as_bytes()).map_err(|e| Error::io("<stdout>", e)),
    }
}

fn execute(command: Command, stdout: &mut dyn Write) -> Result<()> {
    match command {
        Command::Returns(args) => {
            let panel = load_panel(&args)?;
            let config = config_from(&args);
            config.validate(panel.len())?;
            let summaries = return_summaries(&panel, args.alpha)?;
            let text = match args.format {
                OutputFormat::Json => to_json(&summaries)?,
                OutputFormat::Markdown => {
                    let mut s = String::new();
                    write_header(&mut s, &panel, &config);
                    write_returns_table(&mut s, &summaries);
                    s
                }
            };
            deliver(&text, args.out.as_deref(), stdout)
        }
        Command::Correlate(args) => {
            let panel = load_panel(&args)?;
            let config = config_from(&args);
            config.validate(panel.len())?;
            let c = correlations(&panel, args.alpha)?.ok_or(Error::InsufficientSample {
                needed: 2,
                got: panel.len(),
            })?;
            let text = match args.format {
                OutputFormat::Json => to_json(&c)?,
                OutputFormat::Markdown => {
                    let mut s = String::new();
                    write_header(&mut s, &panel, &config);
                    write_correlations(&mut s, &c);
                    s
                }
            };
            deliver(&text, args.out.as_deref(), stdout)
        }
        Command::Decompose(args) => {
            let panel = load_panel(&args)?;
            let config = config_from(&args);
            config.validate(panel.len())?;
            let d = decompositions(&panel, config.decompose_options())?;
            if let Some(dir) = &args.charts {
                emit_chart_data(&args.group, &d, dir)?;
            }
            let text = match args.format {
                OutputFormat::Json => to_json(&d)?,
                OutputFormat::Markdown => {
                    let mut s = String::new();
                    write_header(&mut s, &panel, &config);
                    write_decomposition_table(&mut s, &d, None, &config);
                    s
                }
            };
            deliver(&text, args.out.as_deref(), stdout)
        }
        Command::Report(args) => {
            let panel = load_panel(&args)?;
            let text = render_report(&panel, &config_from(&args))?;
            deliver(&text, args.out.as_deref(), stdout)
        }
        Command::Synth(args) => {
            let indices = args
                .indices
                .clone()
                .unwrap_or_else(|| vec![DecompositionModel::neutral(args.model); args.period]);
            let spec = GeneratorSpec {
                model: args.model,
                intercept: args.intercept,
                slope: args.slope,
                indices,
                noise_sd: args.noise_sd,
                length: args.length,
                seed: args.seed,
                start: args.start,
                currency: args.currency.clone(),
            };
            let series = generate_series(&spec)?;
            let panel = SeriesPanel::new("synthetic", vec![series])?;
            deliver(&render_panel_csv(&panel), args.out.as_deref(), stdout)
        }
    }
}
