//! The `ldsc` command-line front end.
//!
//! Source files are raw bit streams packed MSB-first; `--bits` gives the
//! length when it is not a multiple of eight. Tables are CSV with two
//! leading `#` lines: the schema name and version, then the echoed config.
//!
//! Exit codes: 0 success, 1 usage, 2 infeasible plan, 3 converse check
//! failed, 4 I/O or malformed file.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::container::{pack_msb_first, unpack_msb_first, CompressedContainer, Mode, QueryLedger};
use crate::converse::{self, CheckRecord};
use crate::error::{Error, Result};
use crate::lossless::{self, LosslessDecoder};
use crate::lossy::{self, LossyDecoder, LossyPlanner};
use crate::stats::{compare_bounds, crossover, rate_distortion, DistortionSchedule, SourceModel};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;
pub const EXIT_CONVERSE: i32 = 3;
pub const EXIT_IO: i32 = 4;

/// CSV schema version written in every table header.
pub const CSV_SCHEMA: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "ldsc", version, about = "Locally decodable compression of Bernoulli sources")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compress a raw bit file into a container.
    Compress(CompressArgs),
    /// Expand a container back to a raw bit file.
    Decompress(DecompressArgs),
    /// Decode single symbols and report the payload bits read.
    Query(QueryArgs),
    /// Run the planner over a sweep and emit CSV.
    Analyze(AnalyzeArgs),
    /// Compare the lossy block-code bound with the succinct-structure bound.
    Bounds(BoundsArgs),
    /// Run the converse checks.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CliMode {
    Lossless,
    Lossy,
}

#[derive(Args, Debug)]
pub struct CompressArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
    /// Source length in bits; defaults to eight per input byte.
    #[arg(long)]
    pub bits: Option<u64>,
    /// Probability of a one, as `num/den`.
    #[arg(long)]
    pub p: SourceModel,
    #[arg(long, value_enum, default_value = "lossless")]
    pub mode: CliMode,
    /// Target rate in bits per symbol (lossless).
    #[arg(long)]
    pub rate: Option<f64>,
    /// End-to-end error budget (lossless).
    #[arg(long, default_value_t = 1e-3)]
    pub epsilon: f64,
    /// Fix the block length instead of planning it (lossless).
    #[arg(long)]
    pub block_len: Option<usize>,
    /// Expected per-symbol distortion budget (lossy).
    #[arg(long)]
    pub d: Option<f64>,
    /// Locality cap in payload bits (lossy).
    #[arg(long)]
    pub t: Option<usize>,
}

#[derive(Args, Debug)]
pub struct DecompressArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Args, Debug)]
pub struct QueryArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Symbol to decode.
    #[arg(long, required_unless_present = "all", conflicts_with = "all")]
    pub index: Option<u64>,
    /// Decode every symbol and summarize the ledger.
    #[arg(long)]
    pub all: bool,
    /// Also charge the container header to every call.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    #[arg(long, value_enum, default_value = "lossless")]
    pub mode: CliMode,
    #[arg(long)]
    pub p: SourceModel,
    #[arg(long)]
    pub rate: Option<f64>,
    #[arg(long, default_value_t = 1e-3)]
    pub epsilon: f64,
    /// Smallest `log2 n` of the lossless sweep.
    #[arg(long, default_value_t = 10)]
    pub log_n_min: u32,
    #[arg(long, default_value_t = 20)]
    pub log_n_max: u32,
    #[arg(long, default_value_t = 2)]
    pub log_n_step: u32,
    /// Distortion budget of the lossy sweep.
    #[arg(long)]
    pub d: Option<f64>,
    #[arg(long, default_value_t = 4)]
    pub t_min: usize,
    #[arg(long, default_value_t = 16)]
    pub t_max: usize,
    /// Source length of the lossy sweep.
    #[arg(long, default_value_t = 1 << 16)]
    pub n: u64,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ScheduleArg {
    Fixed,
    InverseLog,
}

#[derive(Args, Debug)]
pub struct BoundsArgs {
    #[arg(long)]
    pub p: SourceModel,
    /// Fixed distortion; required unless the schedule is `inverse-log`.
    #[arg(long)]
    pub d: Option<f64>,
    #[arg(long, value_enum, default_value = "fixed")]
    pub schedule: ScheduleArg,
    /// Locality multiplier: both bounds use `t log2 n` queries.
    #[arg(long, default_value_t = 1)]
    pub t: u32,
    #[arg(long, default_value_t = 16)]
    pub log_n_min: u32,
    #[arg(long, default_value_t = 16)]
    pub log_n_max: u32,
    #[arg(long, default_value_t = 1)]
    pub log_n_step: u32,
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Claim {
    SubspaceMass,
    LinearEncoder,
    LinearDecoder,
    #[value(alias = "t2")]
    TwoLocal,
    All,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub claim: Claim,
    /// Source probabilities; each claim has its own default list.
    #[arg(long, value_delimiter = ',')]
    pub p: Vec<SourceModel>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1000)]
    pub draws: usize,
    /// Largest ambient dimension for `subspace-mass`.
    #[arg(long, default_value_t = 4)]
    pub subspace_n_max: usize,
    /// Largest source length for the linear-encoder draws.
    #[arg(long, default_value_t = 10)]
    pub encoder_n_max: usize,
    /// Largest source length for the linear-decoder draws.
    #[arg(long, default_value_t = 12)]
    pub decoder_n_max: usize,
    /// `(n, k)` pairs for `two-local`, written `n:k`.
    #[arg(long = "case", value_parser = parse_case, value_delimiter = ',')]
    pub cases: Vec<(usize, usize)>,
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

fn parse_case(s: &str) -> std::result::Result<(usize, usize), String> {
    let (n, k) = s.split_once(':').ok_or_else(|| format!("expected n:k, got {s:?}"))?;
    let n = n.trim().parse().map_err(|e| format!("bad n in {s:?}: {e}"))?;
    let k = k.trim().parse().map_err(|e| format!("bad k in {s:?}: {e}"))?;
    Ok((n, k))
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Infeasible(_) => EXIT_INFEASIBLE,
        Error::Io(_) | Error::Format(_) => EXIT_IO,
        Error::Domain(_) | Error::Capacity(_) | Error::OutOfRange { .. } => EXIT_USAGE,
    }
}

/// Entry point of the binary.
pub fn main() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return EXIT_USAGE;
            }
            let _ = write!(out, "{}", e.render());
            return EXIT_OK;
        }
    };
    match dispatch(&cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(cmd: &Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Compress(a) => compress(a, out),
        Command::Decompress(a) => decompress(a, out),
        Command::Query(a) => query(a, out),
        Command::Analyze(a) => analyze(a, out),
        Command::Bounds(a) => bounds(a, out),
        Command::Verify(a) => verify(a, out, err),
    }
    .inspect(|_| {
        let _ = out.flush();
    })
}

fn need<T: Copy>(v: Option<T>, flag: &str, mode: &str) -> Result<T> {
    v.ok_or_else(|| Error::Domain(format!("{mode} mode needs --{flag}")))
}

fn read_source(path: &PathBuf, bits: Option<u64>) -> Result<crate::f2::BitVector> {
    let bytes = fs::read(path)?;
    let len = bits.unwrap_or(bytes.len() as u64 * 8);
    unpack_msb_first(&bytes, usize::try_from(len).map_err(|_| Error::Capacity("source too long".into()))?)
}

fn compress(a: &CompressArgs, out: &mut dyn Write) -> Result<i32> {
    let x = read_source(&a.input, a.bits)?;
    let n = x.len() as u64;
    match a.mode {
        CliMode::Lossless => {
            let rate = need(a.rate, "rate", "lossless")?;
            let plan = match a.block_len {
                Some(b) => lossless::plan_fixed(n, b, rate, &a.p)?,
                None => lossless::plan(n, rate, a.epsilon, &a.p)?,
            };
            let uncovered = lossless::uncovered_blocks(&x, &plan)?;
            let c = lossless::compress(&x, &plan)?;
            c.write_to(&a.output)?;
            writeln!(out, "mode=lossless n={n} b={} k={}", plan.block_len, plan.code_bits)?;
            writeln!(out, "rate={:.4} locality={}", plan.rate(), plan.locality())?;
            writeln!(out, "payload_bits={} payload_rate={:.6}", c.payload_len(), c.payload_len() as f64 / n as f64)?;
            writeln!(out, "exact_error={:.6e} uncovered_blocks={uncovered}", plan.exact_error())?;
        }
        CliMode::Lossy => {
            let d = need(a.d, "d", "lossy")?;
            let t = need(a.t, "t", "lossy")?;
            let plan = lossy::plan_lossy(n, d, t, &a.p)?;
            let c = lossy::compress_lossy(&x, &plan)?;
            c.write_to(&a.output)?;
            writeln!(out, "mode=lossy n={n} b={} k={}", plan.block_len(), plan.code_bits())?;
            writeln!(out, "rate={:.4} locality={}", plan.rate(), plan.locality())?;
            writeln!(out, "payload_bits={} payload_rate={:.6}", c.payload_len(), c.payload_len() as f64 / n as f64)?;
            writeln!(out, "exact_distortion={:.6} rate_bound={:.4}", plan.distortion(), plan.rate_bound())?;
        }
    }
    Ok(EXIT_OK)
}

fn decompress(a: &DecompressArgs, out: &mut dyn Write) -> Result<i32> {
    let c = CompressedContainer::read_from(&a.input)?;
    let x = match c.header().mode {
        Mode::Lossless => LosslessDecoder::new(&c)?.decompress_all()?,
        Mode::Lossy => LossyDecoder::new(&c)?.decompress_all()?,
    };
    fs::write(&a.output, pack_msb_first(&x))?;
    writeln!(out, "n={} bytes={}", x.len(), x.len().div_ceil(8))?;
    Ok(EXIT_OK)
}

fn query(a: &QueryArgs, out: &mut dyn Write) -> Result<i32> {
    let c = CompressedContainer::read_from(&a.input)?;
    let mut ledger = if a.strict { QueryLedger::strict() } else { QueryLedger::new() };
    let lossless;
    let lossy;
    let decode: &dyn Fn(u64, &mut QueryLedger) -> Result<(bool, usize)> = match c.header().mode {
        Mode::Lossless => {
            lossless = LosslessDecoder::new(&c)?;
            &|i, l| lossless.decode_symbol(i, l)
        }
        Mode::Lossy => {
            lossy = LossyDecoder::new(&c)?;
            &|i, l| lossy.decode_symbol(i, l)
        }
    };
    if a.all {
        for i in 0..c.header().n {
            decode(i, &mut ledger)?;
        }
        let hist: Vec<String> = ledger.histogram().iter().map(|(q, c)| format!("{q}:{c}")).collect();
        writeln!(out, "symbols={} max_queries={} total_queries={}", ledger.calls(), ledger.max(), ledger.total_bits())?;
        writeln!(out, "histogram={}", hist.join(","))?;
    } else {
        let i = a.index.expect("clap requires --index without --all");
        let (bit, q) = decode(i, &mut ledger)?;
        writeln!(out, "bit={} queries={q}", bit as u8)?;
    }
    Ok(EXIT_OK)
}

/// Writes `# schema` and `# config` lines followed by the rows.
fn emit_table(
    path: &Option<PathBuf>,
    out: &mut dyn Write,
    schema: &str,
    config: &str,
    header: &[&str],
    rows: &[Vec<String>],
    trailer: Option<String>,
) -> Result<()> {
    let mut buf = Vec::new();
    writeln!(buf, "# {schema} v{CSV_SCHEMA}")?;
    writeln!(buf, "# {config}")?;
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        w.write_record(header).map_err(csv_error)?;
        for r in rows {
            w.write_record(r).map_err(csv_error)?;
        }
        w.flush()?;
    }
    if let Some(t) = trailer {
        writeln!(buf, "# {t}")?;
    }
    match path {
        Some(p) => fs::write(p, &buf)?,
        None => out.write_all(&buf)?,
    }
    Ok(())
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

fn log_range(min: u32, max: u32, step: u32) -> Result<Vec<u64>> {
    if step == 0 || min > max || max > 62 {
        return Err(Error::Domain(format!("bad log2 n range {min}..={max} step {step}")));
    }
    Ok((min..=max).step_by(step as usize).map(|e| 1u64 << e).collect())
}

fn analyze(a: &AnalyzeArgs, out: &mut dyn Write) -> Result<i32> {
    match a.mode {
        CliMode::Lossless => {
            let rate = need(a.rate, "rate", "lossless")?;
            let ns = log_range(a.log_n_min, a.log_n_max, a.log_n_step)?;
            let plans = lossless::plan_sweep(&ns, rate, a.epsilon, &a.p)?;
            let rows: Vec<Vec<String>> = plans
                .iter()
                .map(|p| {
                    vec![
                        p.n.to_string(),
                        p.block_len.to_string(),
                        p.code_bits.to_string(),
                        p.rate().to_string(),
                        p.exact_error().to_string(),
                        p.locality().to_string(),
                        p.implied_c().to_string(),
                    ]
                })
                .collect();
            let config = format!(
                "p={} rate={rate} epsilon={} log2_n={}..={} step {}",
                a.p, a.epsilon, a.log_n_min, a.log_n_max, a.log_n_step
            );
            emit_table(
                &a.csv,
                out,
                "ldsc analyze lossless",
                &config,
                &["n", "b", "k_b", "rate", "exact_error", "locality", "implied_c"],
                &rows,
                None,
            )?;
        }
        CliMode::Lossy => {
            let d = need(a.d, "d", "lossy")?;
            if a.t_min > a.t_max {
                return Err(Error::Domain(format!("bad locality range {}..={}", a.t_min, a.t_max)));
            }
            let mut planner = LossyPlanner::new(a.p);
            let mut rows = Vec::new();
            for t in a.t_min..=a.t_max {
                let p = planner.plan(a.n, d, t)?;
                rows.push(vec![
                    p.n.to_string(),
                    t.to_string(),
                    p.block_len().to_string(),
                    p.code_bits().to_string(),
                    p.rate().to_string(),
                    p.distortion().to_string(),
                    p.locality().to_string(),
                    rate_distortion(&a.p, p.distortion()).to_string(),
                    p.rate_bound().to_string(),
                ]);
            }
            let config = format!("p={} d={d} n={} t={}..={}", a.p, a.n, a.t_min, a.t_max);
            emit_table(
                &a.csv,
                out,
                "ldsc analyze lossy",
                &config,
                &["n", "t", "b", "k_b", "rate", "exact_distortion", "locality", "rate_distortion", "rate_bound"],
                &rows,
                None,
            )?;
        }
    }
    Ok(EXIT_OK)
}

fn bounds(a: &BoundsArgs, out: &mut dyn Write) -> Result<i32> {
    let schedule = match a.schedule {
        ScheduleArg::Fixed => DistortionSchedule::Fixed(need(a.d, "d", "fixed-schedule")?),
        ScheduleArg::InverseLog => DistortionSchedule::InverseLog,
    };
    let ns = log_range(a.log_n_min, a.log_n_max, a.log_n_step)?;
    let reports = compare_bounds(&a.p, schedule, a.t, &ns)?;
    let rows: Vec<Vec<String>> = reports
        .iter()
        .map(|r| {
            vec![
                r.n.to_string(),
                r.locality.to_string(),
                r.distortion.to_string(),
                r.our_bound.to_string(),
                r.succinct_bound.to_string(),
                r.tighter.map_or("skipped".to_string(), |t| t.to_string()),
            ]
        })
        .collect();
    let schedule_name = match schedule {
        DistortionSchedule::Fixed(d) => format!("fixed d={d}"),
        DistortionSchedule::InverseLog => "inverse-log".to_string(),
    };
    let c = reports[0].constants;
    let config = format!(
        "p={} schedule={schedule_name} t={} log2_n={}..={} step {} overhead_coefficient={} log_n_over_n={} tail_exponent={}",
        a.p, a.t, a.log_n_min, a.log_n_max, a.log_n_step, c.overhead_coefficient, c.log_n_over_n, c.tail_exponent
    );
    let trailer = match crossover(&reports) {
        Some(n) => format!("crossover_n={n}"),
        None => "crossover_n=none".to_string(),
    };
    emit_table(
        &a.csv,
        out,
        "ldsc bounds",
        &config,
        &["n", "locality", "distortion", "our_bound", "succinct_bound", "tighter"],
        &rows,
        Some(trailer),
    )?;
    Ok(EXIT_OK)
}

fn verify(a: &VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let ps = |default: &[f64]| -> Vec<f64> {
        if a.p.is_empty() {
            default.to_vec()
        } else {
            a.p.iter().map(SourceModel::p).collect()
        }
    };
    let cases = if a.cases.is_empty() { vec![(2, 1), (3, 2)] } else { a.cases.clone() };
    let run_all = a.claim == Claim::All;
    let mut records: Vec<CheckRecord> = Vec::new();
    if run_all || a.claim == Claim::SubspaceMass {
        records.extend(converse::subspace_suite(a.subspace_n_max, &ps(&[0.1, 0.3, 0.5]))?);
    }
    if run_all || a.claim == Claim::TwoLocal {
        records.extend(converse::two_local_suite(&cases, &ps(&[0.3, 0.5]))?);
    }
    if run_all || a.claim == Claim::LinearEncoder {
        records.extend(converse::linear_encoder_suite(a.draws, a.encoder_n_max, 2, &ps(&[0.3, 0.5]), a.seed)?);
    }
    if run_all || a.claim == Claim::LinearDecoder {
        records.extend(converse::linear_decoder_suite(a.draws, a.decoder_n_max, &ps(&[0.3, 0.5]), a.seed)?);
    }
    for r in &records {
        if r.claim == "subspace-mass" {
            writeln!(err, "subspace-mass {}: {} violations", r.instance, r.measured)?;
            continue;
        }
        let rel = if r.claim == "two-local" { "<=" } else { ">=" };
        let verdict = if r.pass { "PASS" } else { "FAIL" };
        writeln!(err, "{} {}: {} {rel} {} {verdict}", r.claim, r.instance, r.measured, r.bound)?;
    }
    let rows: Vec<Vec<String>> = records
        .iter()
        .map(|r| {
            vec![
                r.claim.clone(),
                r.instance.clone(),
                r.bound.to_string(),
                r.measured.to_string(),
                if r.pass { "PASS" } else { "FAIL" }.to_string(),
            ]
        })
        .collect();
    let claim = a.claim.to_possible_value().expect("no skipped variants");
    let config = format!("claim={} seed={} draws={}", claim.get_name(), a.seed, a.draws);
    emit_table(&a.csv, out, "ldsc verify", &config, &["claim", "instance", "bound", "measured", "pass"], &rows, None)?;
    Ok(if records.iter().all(|r| r.pass) { EXIT_OK } else { EXIT_CONVERSE })
}
