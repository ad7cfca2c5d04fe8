mod codecs;
mod tracefile;

use std::fmt;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use lelc_core::codec::{decode_trace, encode_trace};
use lelc_core::mapping::mapgen;
use lelc_core::metrics::{crosstalk_report, energy_report, CrosstalkWeightTable, LinkConfig, Report};
use lelc_core::profiler::{profile_with, synthesize_trace};
use lelc_core::theory::tradeoff_curve;
use lelc_core::throttle::{threshold_sweep, InjectionTrace, ThrottleConfig};
use lelc_core::{DatawordHistogram, Error, Execution};

use crate::codecs::read_text;
use crate::tracefile::TraceFile;

#[derive(Parser)]
#[command(name = "lelc", version, about = "Low-energy line codes for on-chip links")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count k-bit datawords in a trace.
    Profile {
        #[arg(long)]
        trace: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Draw a random trace from a histogram.
    Synth {
        #[arg(long)]
        hist: PathBuf,
        #[arg(long)]
        payloads: usize,
        #[arg(long = "payload-bits")]
        payload_bits: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Build a mapping code from a histogram.
    Mapgen {
        #[arg(long)]
        hist: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long = "weight-monotone")]
        weight_monotone: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Encode every payload of a trace.
    Encode {
        #[arg(long, help = codecs::SPEC_HELP)]
        codec: String,
        #[arg(long)]
        trace: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Decode a coded trace back to payloads.
    Decode {
        #[arg(long, help = codecs::SPEC_HELP)]
        codec: String,
        #[arg(long)]
        trace: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Rate, energy, flit and crosstalk report for a codec on a trace.
    Analyze {
        #[arg(long, help = codecs::SPEC_HELP)]
        codec: String,
        #[arg(long)]
        trace: PathBuf,
        /// rows,cols,flit_bits,payload_bits
        #[arg(long)]
        link: Option<String>,
        /// Crosstalk weight file (LELCXT).
        #[arg(long)]
        xtalk: Option<PathBuf>,
    },
    /// Optimal rate versus energy reduction.
    Curve {
        #[arg(long, default_value_t = 50)]
        samples: usize,
    },
    /// Throttling threshold sweep on one link.
    Throttle {
        #[arg(long)]
        inj: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        window: u64,
        #[arg(long = "flits-coded")]
        flits_coded: u64,
        #[arg(long = "flits-uncoded")]
        flits_uncoded: u64,
        #[arg(long = "header-flits", default_value_t = 1)]
        header_flits: u64,
        #[arg(long, value_delimiter = ',', required = true)]
        thresholds: Vec<f64>,
    },
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String, io::Error),
    Core(Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Io(..) => 2,
            CliError::Core(Error::Format { .. } | Error::InvalidTable(_)) => 2,
            CliError::Core(e) if e.is_codec_error() => 3,
            CliError::Core(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage: {msg}"),
            CliError::Io(path, e) => write!(f, "{path}: {e}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

fn read_trace(path: &Path) -> Result<TraceFile, CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::Io(path.display().to_string(), e))?;
    Ok(TraceFile::from_bytes(&bytes)?)
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|e| CliError::Io(path.display().to_string(), e))
}

fn parse_link(spec: &str) -> Result<LinkConfig, CliError> {
    let parts: Vec<usize> = spec
        .split(',')
        .map(|s| s.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Usage(format!("bad --link '{spec}', expected rows,cols,flit,payload")))?;
    match parts[..] {
        [rows, cols, flit, payload] => Ok(LinkConfig::new(rows, cols, flit, payload)?),
        _ => Err(CliError::Usage(format!("bad --link '{spec}', expected rows,cols,flit,payload"))),
    }
}

fn run(command: Command) -> Result<String, CliError> {
    let exec = Execution::default();
    match command {
        Command::Profile { trace, k, out } => {
            let t = read_trace(&trace)?;
            let h = profile_with(&t.payloads, k, exec)?;
            write_file(&out, h.to_string().as_bytes())?;
            Ok(String::new())
        }
        Command::Synth { hist, payloads, payload_bits, seed, out } => {
            let h: DatawordHistogram = read_text(&hist)?.parse()?;
            let trace = synthesize_trace(&h, payloads, payload_bits, seed)?;
            write_file(&out, &TraceFile::uniform(payload_bits, trace).to_bytes()?)?;
            Ok(String::new())
        }
        Command::Mapgen { hist, n, weight_monotone, out } => {
            let h: DatawordHistogram = read_text(&hist)?.parse()?;
            let m = mapgen(&h, n, weight_monotone)?;
            write_file(&out, m.to_string().as_bytes())?;
            Ok(String::new())
        }
        Command::Encode { codec, trace, out } => {
            let codec = codecs::parse(&codec)?;
            let t = read_trace(&trace)?;
            let coded = encode_trace(&*codec, &t.payloads, exec)?;
            let first = coded.first().map(|c| c.len());
            let uniform = first.is_some_and(|len| {
                coded.iter().all(|c| c.len() == len) && codec.payload_bits_for(len) == Some(t.payload_bits)
            });
            let file = match first {
                Some(len) if uniform => TraceFile::uniform(len, coded),
                _ => TraceFile { payload_bits: t.payload_bits, payloads: coded, indexed: true },
            };
            write_file(&out, &file.to_bytes()?)?;
            Ok(String::new())
        }
        Command::Decode { codec, trace, out } => {
            let codec = codecs::parse(&codec)?;
            let t = read_trace(&trace)?;
            let payload_bits = if t.indexed {
                t.payload_bits
            } else {
                codec.payload_bits_for(t.payload_bits).ok_or_else(|| Error::Format {
                    what: "trace file",
                    reason: format!(
                        "{}-bit coded payloads carry no length index and do not fit the rate of {}",
                        t.payload_bits,
                        codec.name()
                    ),
                })?
            };
            let decoded = decode_trace(&*codec, &t.payloads, payload_bits, exec)?;
            write_file(&out, &TraceFile::uniform(payload_bits, decoded).to_bytes()?)?;
            Ok(String::new())
        }
        Command::Analyze { codec, trace, link, xtalk } => {
            let codec = codecs::parse(&codec)?;
            let t = read_trace(&trace)?;
            let link = match link {
                Some(spec) => parse_link(&spec)?,
                None => LinkConfig { payload_bits: t.payload_bits, ..LinkConfig::default() },
            };
            let weights = match xtalk {
                Some(path) => read_text(&path)?.parse::<CrosstalkWeightTable>()?,
                None => CrosstalkWeightTable::default(),
            };
            let mut r = Report::new();
            r.push("codec", codec.name());
            energy_report(&t.payloads, &*codec, &link)?.write_to(&mut r);
            crosstalk_report(&t.payloads, &*codec, &link, &weights)?.write_to(&mut r);
            Ok(r.to_string())
        }
        Command::Curve { samples } => {
            let mut out = String::from("ones_fraction rate energy_reduction_pct\n");
            for p in tradeoff_curve(samples)? {
                out += &format!("{:.6} {:.6} {:.6}\n", p.ones_fraction, p.rate, p.energy_reduction_pct);
            }
            Ok(out)
        }
        Command::Throttle { inj, window, flits_coded, flits_uncoded, header_flits, thresholds } => {
            let trace: InjectionTrace = read_text(&inj)?.parse()?;
            let cfg =
                ThrottleConfig { window_cycles: window, threshold: 0.0, flits_coded, flits_uncoded, header_flits };
            let na = |v: Option<f64>| v.map_or("na".to_string(), |v| format!("{v:.6}"));
            let mut out = String::from("threshold pct_coded pct_uncoded total_cycles\n");
            for row in threshold_sweep(&trace, &cfg, &thresholds)? {
                out += &format!(
                    "{:.6} {} {} {}\n",
                    row.threshold,
                    na(row.pct_coded),
                    na(row.pct_uncoded),
                    row.total_cycles
                );
            }
            Ok(out)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("lelc: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
