//! The `tailfit` command-line tool.
//!
//! ```text
//! tailfit sample --alpha 1.5 --n 100 --seed 1 | tailfit fit --bootstrap 1000 --seed 7
//! tailfit summarize --reference
//! tailfit plot-data --input lists.csv --region Hedmark --year 2013 --kind wealth
//! ```
//!
//! Exit codes: 0 ok, 1 nothing valid to report, 2 input error, 3 partial
//! failure.

pub mod commands;
pub mod error;
pub mod output;
pub mod records;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tailfit::Kind;

pub use error::CliError;
pub use output::{Format, Precision};

#[derive(Debug, Parser)]
#[command(name = "tailfit", version, about = "Pareto tail fitting for ranked income and wealth lists")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit the tail exponent of every (region, year, kind) group.
    Fit(FitArgs),
    /// Region means and dispersions of an exponent table.
    Summarize(SummarizeArgs),
    /// Log-log rank/value points of one group and the fitted line.
    PlotData(PlotArgs),
    /// Draw a synthetic Pareto sample as ranked records.
    Sample(SampleArgs),
    /// Write the noise-free rank-size sequence m0 (n/r)^(1/alpha).
    Ranksize(RanksizeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Rank,
    Hill,
}

impl From<MethodArg> for tailfit::Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Rank => tailfit::Method::RankRegression,
            MethodArg::Hill => tailfit::Method::Hill,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Income,
    Wealth,
}

impl From<KindArg> for Kind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Income => Kind::Income,
            KindArg::Wealth => Kind::Wealth,
        }
    }
}

fn parse_delimiter(s: &str) -> Result<u8, String> {
    match s {
        "\\t" | "tab" => Ok(b'\t'),
        _ if s.len() == 1 && s.is_ascii() => Ok(s.as_bytes()[0]),
        _ => Err(format!("delimiter must be a single ASCII character, got {s:?}")),
    }
}

#[derive(Debug, Clone, Args)]
pub struct IoArgs {
    /// Input file, or - for stdin.
    #[arg(long, default_value = "-")]
    pub input: PathBuf,
    /// Output file, or - for stdout.
    #[arg(long, default_value = "-")]
    pub output: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[arg(long, value_parser = parse_delimiter, default_value = ",")]
    pub delimiter: u8,
}

#[derive(Debug, Clone, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub io: IoArgs,
    #[arg(long, value_enum, default_value = "rank")]
    pub method: MethodArg,
    /// Bootstrap replicates for a percentile confidence interval.
    #[arg(long, value_name = "B")]
    pub bootstrap: Option<usize>,
    #[arg(long, default_value_t = 0.95)]
    pub level: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Significant digits, or "full".
    #[arg(long, default_value = "6")]
    pub precision: Precision,
}

#[derive(Debug, Clone, Args)]
pub struct SummarizeArgs {
    #[command(flatten)]
    pub io: IoArgs,
    /// Region label of the national aggregate row, excluded from region summaries.
    #[arg(long, default_value = tailfit::aggregate::DEFAULT_AGGREGATE_LABEL)]
    pub aggregate_label: String,
    /// Summarize the bundled 2010-2013 reference table instead of --input.
    #[arg(long)]
    pub reference: bool,
    #[arg(long, default_value = "6")]
    pub precision: Precision,
}

#[derive(Debug, Clone, Args)]
pub struct PlotArgs {
    #[command(flatten)]
    pub io: IoArgs,
    #[arg(long)]
    pub region: Option<String>,
    #[arg(long)]
    pub year: Option<i32>,
    #[arg(long, value_enum)]
    pub kind: Option<KindArg>,
    #[arg(long, default_value = "full")]
    pub precision: Precision,
}

#[derive(Debug, Clone, Args)]
pub struct GroupArgs {
    /// Region label; several may be given as a comma-separated list.
    #[arg(long, value_delimiter = ',', default_value = "synthetic")]
    pub region: Vec<String>,
    #[arg(long, value_delimiter = ',', default_value = "0")]
    pub year: Vec<i32>,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "income")]
    pub kind: Vec<KindArg>,
}

#[derive(Debug, Clone, Args)]
pub struct SampleArgs {
    #[arg(long, default_value = "-")]
    pub output: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[arg(long, value_parser = parse_delimiter, default_value = ",")]
    pub delimiter: u8,
    #[arg(long, default_value_t = 1.0)]
    pub m0: f64,
    #[arg(long)]
    pub alpha: f64,
    /// Exponent for wealth groups; defaults to --alpha.
    #[arg(long)]
    pub wealth_alpha: Option<f64>,
    /// Values per group.
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub groups: GroupArgs,
    #[arg(long, default_value = "full")]
    pub precision: Precision,
}

#[derive(Debug, Clone, Args)]
pub struct RanksizeArgs {
    #[arg(long, default_value = "-")]
    pub output: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[arg(long, value_parser = parse_delimiter, default_value = ",")]
    pub delimiter: u8,
    #[arg(long, default_value_t = 1.0)]
    pub m0: f64,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long)]
    pub n: usize,
    #[command(flatten)]
    pub groups: GroupArgs,
    #[arg(long, default_value = "full")]
    pub precision: Precision,
}

/// Standard streams, swappable for tests.
pub struct Streams<'a> {
    pub stdin: &'a mut dyn Read,
    pub stdout: &'a mut dyn Write,
    pub stderr: &'a mut dyn Write,
}

impl Streams<'_> {
    fn open_input(&mut self, path: &PathBuf) -> Result<Box<dyn Read + '_>, CliError> {
        if path.as_os_str() == "-" {
            Ok(Box::new(&mut *self.stdin))
        } else {
            let f = File::open(path)
                .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            Ok(Box::new(BufReader::new(f)))
        }
    }

    fn open_output(&mut self, path: &PathBuf) -> Result<Box<dyn Write + '_>, CliError> {
        if path.as_os_str() == "-" {
            Ok(Box::new(&mut *self.stdout))
        } else {
            let f = File::create(path)
                .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            Ok(Box::new(BufWriter::new(f)))
        }
    }
}

/// Parse arguments and run; returns the process exit code.
pub fn run<I, T>(args: I, streams: &mut Streams<'_>) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { streams.stdout } else { streams.stderr };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    match commands::dispatch(cli.command, streams) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(streams.stderr, "tailfit: {e}");
            e.exit_code()
        }
    }
}

/// Run against the real process streams.
pub fn run_main() -> i32 {
    let stdin = io::stdin();
    let stdout = io::stdout();
    let stderr = io::stderr();
    let mut stdin = stdin.lock();
    let mut stdout = BufWriter::new(stdout.lock());
    let mut stderr = stderr.lock();
    let code = {
        let mut streams = Streams {
            stdin: &mut stdin,
            stdout: &mut stdout,
            stderr: &mut stderr,
        };
        run(std::env::args_os(), &mut streams)
    };
    match stdout.flush() {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => 2,
        _ => code,
    }
}
