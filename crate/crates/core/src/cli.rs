//! Command-line front end.
//!
//! Every flag can also be set through an environment variable named
//! `FGPRS_<FLAG>` (for example `FGPRS_SEED`, `FGPRS_JOBS`). Precedence is
//! flag, then environment, then config file, then built-in default.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 parse failure (corrupt stream,
//! bad fixture), 3 configuration failure (bad flags, keys or parameters),
//! 4 decode failure (incomplete decode or failed session).

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use log::info;

use crate::config::{parse_raw_detection, parse_schemes, parse_seed, RunSettings};
use crate::error::{Error, Result};
use crate::experiment::run_sweep;
use crate::lt::{DegreeDistribution, EncodedSymbol, LtEncoder, PeelingDecoder, WIRE_LEN};
use crate::pipeline::{Link, PipelineConfig, Transport};
use crate::{fixtures, rng};

pub const EXIT_IO: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_CONFIG: i32 = 3;
pub const EXIT_DECODE: i32 = 4;

pub const STREAM_MAGIC: [u8; 4] = *b"LTG1";
/// Magic, k, c, delta, original length, base seed.
pub const HEADER_LEN: usize = 4 + 4 + 8 + 8 + 8 + 8;
pub const RESOLVED_CONFIG: &str = "resolved_config.toml";

#[derive(Debug, Parser)]
#[command(name = "fountain-gprs", version, about = "LT fountain codes over GPRS-style RLC blocks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Encode a file into an LT symbol stream.
    Encode(EncodeArgs),
    /// Decode an LT symbol stream back into a file.
    Decode(DecodeArgs),
    /// Run one transmission session and write its trace.
    Session(RunArgs),
    /// Run a Monte-Carlo sweep over SIR and coding scheme.
    Sweep(RunArgs),
    /// Check or regenerate the frozen fixture tables.
    Fixtures {
        #[command(subcommand)]
        action: FixtureAction,
    },
}

#[derive(Debug, Subcommand)]
pub enum FixtureAction {
    Verify {
        #[arg(long, env = "FGPRS_FIXTURES")]
        dir: Option<PathBuf>,
    },
    /// Write the generated tables (not the hand-written check vectors).
    Write {
        #[arg(long)]
        dir: PathBuf,
    },
}

fn seed_arg(s: &str) -> std::result::Result<u64, String> {
    parse_seed(s).map_err(|e| e.to_string())
}

#[derive(Debug, Args)]
pub struct EncodeArgs {
    pub input: PathBuf,
    #[arg(short, long, env = "FGPRS_OUT")]
    pub out: PathBuf,
    /// Message symbols; defaults to the input length in 32-bit words.
    #[arg(long, env = "FGPRS_K")]
    pub k: Option<usize>,
    #[arg(long, env = "FGPRS_C", default_value_t = 0.1)]
    pub c: f64,
    #[arg(long, env = "FGPRS_DELTA", default_value_t = 0.5)]
    pub delta: f64,
    #[arg(long, env = "FGPRS_SEED", value_parser = seed_arg)]
    pub seed: Option<u64>,
    /// Number of encoded symbols to emit.
    #[arg(long, conflicts_with = "overhead")]
    pub count: Option<usize>,
    /// Emit `ceil(k * (1 + overhead))` symbols.
    #[arg(long, default_value_t = 0.5)]
    pub overhead: f64,
}

#[derive(Debug, Args)]
pub struct DecodeArgs {
    pub input: PathBuf,
    #[arg(short, long, env = "FGPRS_OUT")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Flat key-value config file; flags override its values.
    #[arg(long, env = "FGPRS_CONFIG")]
    pub config: Option<PathBuf>,
    #[arg(long, env = "FGPRS_K")]
    pub k: Option<usize>,
    #[arg(long, env = "FGPRS_C")]
    pub c: Option<f64>,
    #[arg(long, env = "FGPRS_DELTA")]
    pub delta: Option<f64>,
    /// Comma-separated transports: RAW, CS1 .. CS4.
    #[arg(long, env = "FGPRS_SCHEME")]
    pub scheme: Option<String>,
    /// Comma-separated SIR points in dB.
    #[arg(long, env = "FGPRS_SIR", value_delimiter = ',', allow_hyphen_values = true)]
    pub sir: Option<Vec<f64>>,
    #[arg(long, env = "FGPRS_TRIALS")]
    pub trials: Option<usize>,
    #[arg(long, env = "FGPRS_SEED", value_parser = seed_arg)]
    pub seed: Option<u64>,
    /// Worker threads; 0 uses every core.
    #[arg(long, env = "FGPRS_JOBS", default_value_t = 0)]
    pub jobs: usize,
    #[arg(long, env = "FGPRS_MAX_OVERHEAD")]
    pub max_overhead: Option<f64>,
    /// fading | awgn | bsc | trace
    #[arg(long, env = "FGPRS_CHANNEL")]
    pub channel: Option<String>,
    #[arg(long, env = "FGPRS_COHERENCE_BITS")]
    pub coherence_bits: Option<usize>,
    #[arg(long, env = "FGPRS_BSC_P")]
    pub bsc_p: Option<f64>,
    #[arg(long, env = "FGPRS_TRACE")]
    pub trace: Option<PathBuf>,
    #[arg(long, env = "FGPRS_TRACE_WRAP")]
    pub trace_wrap: Option<bool>,
    /// genie | crc16
    #[arg(long, env = "FGPRS_RAW_DETECTION")]
    pub raw_detection: Option<String>,
    #[arg(long, env = "FGPRS_TRAJECTORY_TRIALS")]
    pub trajectory_trials: Option<usize>,
    #[arg(short, long, env = "FGPRS_OUT", default_value = "out")]
    pub out: PathBuf,
}

impl RunArgs {
    /// Defaults, then the config file, then flags; draws a seed if none.
    pub fn resolve(&self) -> Result<RunSettings> {
        let mut s = RunSettings::default();
        if let Some(path) = &self.config {
            let text = fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
            s = s.merge_file(&text)?;
        }
        if let Some(k) = self.k {
            s.k = k;
        }
        if let Some(c) = self.c {
            s.c = c;
        }
        if let Some(d) = self.delta {
            s.delta = d;
        }
        if let Some(list) = &self.scheme {
            s.schemes = parse_schemes(list)?;
        }
        if let Some(sir) = &self.sir {
            s.sir_points = sir.clone();
        }
        if let Some(t) = self.trials {
            s.trials = t;
        }
        if let Some(m) = self.max_overhead {
            s.max_overhead = m;
        }
        if let Some(r) = &self.raw_detection {
            s.raw_detection = parse_raw_detection(r)?;
        }
        if let Some(t) = self.trajectory_trials {
            s.trajectory_trials = t;
        }
        if self.channel.is_some()
            || self.coherence_bits.is_some()
            || self.bsc_p.is_some()
            || self.trace.is_some()
            || self.trace_wrap.is_some()
        {
            let name = self
                .channel
                .clone()
                .unwrap_or_else(|| s.channel.name().to_string())
                .to_ascii_lowercase();
            s.channel = s.channel_from_parts(
                &name,
                self.coherence_bits,
                self.bsc_p,
                self.trace.clone(),
                self.trace_wrap,
            )?;
        }
        if self.seed.is_some() {
            s.seed = self.seed;
        }
        s.seed = Some(resolve_seed(s.seed));
        Ok(s)
    }
}

fn resolve_seed(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| {
        let drawn = rand::random::<u64>();
        info!("no seed given; drew seed {drawn}");
        drawn
    })
}

/// Process exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::LengthMismatch { .. } | Error::ProvenanceMismatch(_) => EXIT_PARSE,
        Error::Config(_) | Error::InvalidParameter(_) => EXIT_CONFIG,
        Error::EndOfTrace { .. } | Error::Io(_) | Error::Csv(_) => EXIT_IO,
    }
}

#[derive(Debug)]
enum Failure {
    Lib(Error),
    /// Ran to completion but did not deliver the full result.
    Incomplete(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Lib(e.into())
    }
}

/// Parses `args` (program name first), runs the command, returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { 0 };
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
        Err(Failure::Incomplete(msg)) => {
            eprintln!("{msg}");
            EXIT_DECODE
        }
    }
}

fn dispatch(cli: Cli) -> std::result::Result<(), Failure> {
    match cli.command {
        Command::Encode(a) => encode(&a),
        Command::Decode(a) => decode(&a),
        Command::Session(a) => session(&a),
        Command::Sweep(a) => sweep(&a),
        Command::Fixtures { action } => fixtures_cmd(action),
    }
}

fn sidecar(path: &Path) -> PathBuf {
    let mut name = path.file_name().map(OsString::from).unwrap_or_default();
    name.push(".config.toml");
    path.with_file_name(name)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StreamHeader {
    pub k: u32,
    pub c: f64,
    pub delta: f64,
    pub original_len: u64,
    pub base_seed: u64,
}

impl StreamHeader {
    pub fn to_bytes(&self) -> [u8; HEADER_LEN] {
        let mut out = [0u8; HEADER_LEN];
        out[..4].copy_from_slice(&STREAM_MAGIC);
        out[4..8].copy_from_slice(&self.k.to_be_bytes());
        out[8..16].copy_from_slice(&self.c.to_be_bytes());
        out[16..24].copy_from_slice(&self.delta.to_be_bytes());
        out[24..32].copy_from_slice(&self.original_len.to_be_bytes());
        out[32..40].copy_from_slice(&self.base_seed.to_be_bytes());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < HEADER_LEN {
            return Err(Error::Parse(format!(
                "stream header needs {HEADER_LEN} bytes, got {}",
                bytes.len()
            )));
        }
        if bytes[..4] != STREAM_MAGIC {
            return Err(Error::Parse("bad stream magic".into()));
        }
        let u64_at = |i: usize| u64::from_be_bytes(bytes[i..i + 8].try_into().unwrap());
        let h = Self {
            k: u32::from_be_bytes(bytes[4..8].try_into().unwrap()),
            c: f64::from_bits(u64_at(8)),
            delta: f64::from_bits(u64_at(16)),
            original_len: u64_at(24),
            base_seed: u64_at(32),
        };
        if h.original_len > 4 * h.k as u64 {
            return Err(Error::Parse(format!(
                "header length {} exceeds {} symbols",
                h.original_len, h.k
            )));
        }
        DegreeDistribution::robust_soliton(h.k as usize, h.c, h.delta)
            .map_err(|e| Error::Parse(format!("bad header parameters: {e}")))?;
        Ok(h)
    }
}

/// Packs bytes into big-endian 32-bit words, zero padding to `k` words.
pub fn pack_words(bytes: &[u8], k: usize) -> Vec<u32> {
    let mut words: Vec<u32> = bytes
        .chunks(4)
        .map(|c| {
            let mut w = [0u8; 4];
            w[..c.len()].copy_from_slice(c);
            u32::from_be_bytes(w)
        })
        .collect();
    words.resize(k, 0);
    words
}

pub fn unpack_words(words: &[u32], len: usize) -> Vec<u8> {
    let mut out: Vec<u8> = words.iter().flat_map(|w| w.to_be_bytes()).collect();
    out.truncate(len);
    out
}

fn encode(a: &EncodeArgs) -> std::result::Result<(), Failure> {
    let data = fs::read(&a.input)?;
    let needed = data.len().div_ceil(4);
    let k = a.k.unwrap_or(needed);
    if k == 0 {
        return Err(Error::Config("input is empty; k = 0 is not a valid message length".into()).into());
    }
    if k < needed {
        return Err(Error::Config(format!("k = {k} is too small for {} bytes", data.len())).into());
    }
    if k > u32::MAX as usize {
        return Err(Error::Config(format!("k = {k} is too large")).into());
    }
    if !(a.overhead >= 0.0) {
        return Err(Error::Config("overhead must be non-negative".into()).into());
    }
    let count = a
        .count
        .unwrap_or_else(|| (k as f64 * (1.0 + a.overhead)).ceil() as usize);
    let seed = resolve_seed(a.seed);
    let dist = DegreeDistribution::robust_soliton(k, a.c, a.delta)
        .map_err(|e| Error::Config(e.to_string()))?;
    let header = StreamHeader {
        k: k as u32,
        c: a.c,
        delta: a.delta,
        original_len: data.len() as u64,
        base_seed: seed,
    };
    let enc = LtEncoder::new(pack_words(&data, k), dist, seed)?;
    let mut out = io::BufWriter::new(fs::File::create(&a.out)?);
    out.write_all(&header.to_bytes())?;
    for sym in enc.take(count) {
        out.write_all(&sym.to_wire())?;
    }
    out.flush()?;
    fs::write(
        sidecar(&a.out),
        format!(
            "command = \"encode\"\ninput = \"{}\"\nk = {k}\nc = {:?}\ndelta = {:?}\nseed = \"{seed}\"\ncount = {count}\noriginal_len = {}\n",
            a.input.display(),
            a.c,
            a.delta,
            data.len()
        ),
    )?;
    println!("encoded {} bytes as k = {k} symbols; wrote {count} encoded symbols", data.len());
    Ok(())
}

fn decode(a: &DecodeArgs) -> std::result::Result<(), Failure> {
    let bytes = fs::read(&a.input)?;
    let header = StreamHeader::from_bytes(&bytes)?;
    let body = &bytes[HEADER_LEN..];
    if body.len() % WIRE_LEN != 0 {
        return Err(Error::Parse(format!(
            "stream body of {} bytes is not a whole number of {WIRE_LEN}-byte records",
            body.len()
        ))
        .into());
    }
    let k = header.k as usize;
    let dist = DegreeDistribution::robust_soliton(k, header.c, header.delta)?;
    let mut dec = PeelingDecoder::new(k);
    for rec in body.chunks_exact(WIRE_LEN) {
        if dec.is_complete() {
            break;
        }
        dec.ingest(&EncodedSymbol::from_wire(rec, &dist)?, &dist)?;
    }
    let progress = dec.progress();
    fs::write(
        sidecar(&a.out),
        format!(
            "command = \"decode\"\ninput = \"{}\"\nk = {k}\nc = {:?}\ndelta = {:?}\nseed = \"{}\"\noriginal_len = {}\nrecords = {}\n",
            a.input.display(),
            header.c,
            header.delta,
            header.base_seed,
            header.original_len,
            body.len() / WIRE_LEN
        ),
    )?;
    match dec.message() {
        Some(words) => {
            fs::write(&a.out, unpack_words(&words, header.original_len as usize))?;
            println!(
                "decoded k = {k} from {} symbols; inefficiency {:.4}",
                progress.consumed,
                progress.inefficiency.unwrap_or(f64::NAN)
            );
            Ok(())
        }
        None => Err(Failure::Incomplete(format!(
            "decode incomplete: recovered {}/{k} symbols ({:.2}%) from {} records",
            progress.recovered,
            100.0 * progress.recovery_fraction(k),
            progress.consumed
        ))),
    }
}

fn with_pool<R: Send>(jobs: usize, f: impl FnOnce() -> R + Send) -> Result<R> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

fn write_resolved(dir: &Path, settings: &RunSettings, command: &str) -> Result<()> {
    fs::create_dir_all(dir)?;
    let text = format!("# {command}\n{}", settings.render());
    info!("resolved config:\n{text}");
    fs::write(dir.join(RESOLVED_CONFIG), text)?;
    Ok(())
}

fn session(a: &RunArgs) -> std::result::Result<(), Failure> {
    let s = a.resolve()?;
    let transport = *s
        .schemes
        .first()
        .ok_or_else(|| Error::Config("no scheme given".into()))?;
    let sir = *s
        .sir_points
        .first()
        .ok_or_else(|| Error::Config("no SIR given".into()))?;
    let single = RunSettings {
        schemes: vec![transport],
        sir_points: vec![sir],
        trials: 1,
        ..s.clone()
    };
    let seed = single.seed.expect("resolved");
    let cfg = PipelineConfig {
        transport,
        channel: single.channel.template()?.at_sir(sir).reseeded(rng::derive_seed(seed, 1)),
        k: single.k,
        c: single.c,
        delta: single.delta,
        seed: rng::derive_seed(seed, 0),
        raw_detection: single.raw_detection,
    };
    write_resolved(&a.out, &single, "session")?;
    let trace = Link::new(cfg)?.run_session(single.max_overhead)?;
    trace.write_csv(fs::File::create(a.out.join("session.csv"))?)?;
    println!(
        "{transport} at {sir} dB: {} blocks, {} symbols sent, {} received",
        trace.blocks_sent(),
        trace.tx_symbols(),
        trace.rx_symbols()
    );
    match (trace.eps(), trace.total_overhead()) {
        (Some(eps), Some(total)) if trace.message_ok => {
            println!(
                "fountain overhead {:.2}%, total overhead {:.2}%",
                100.0 * eps,
                100.0 * total
            );
            Ok(())
        }
        _ => Err(Failure::Incomplete(format!(
            "session failed: stopped at {:.2}% fountain overhead with {}/{} recovered",
            100.0 * trace.eps_reached(),
            trace.rows.last().map_or(0, |r| r.recovered),
            trace.k
        ))),
    }
}

fn sweep(a: &RunArgs) -> std::result::Result<(), Failure> {
    let s = a.resolve()?;
    let cfg = s.sweep_config()?;
    write_resolved(&a.out, &s, "sweep")?;
    let result = with_pool(a.jobs, || run_sweep(&cfg))??;
    result.write_csvs(&a.out)?;
    result.write_plot_data(&a.out.join("plot"))?;
    println!("Fountain overhead (%), '*' = at least one trial failed:");
    print!("{}", result.fountain_table());
    println!("\nTotal overhead (%):");
    print!("{}", result.total_table());
    println!("\nSuccess rate:");
    print!("{}", success_table(&result.config.sir_points, &result.config.transports, |sir, t| {
        result.point(sir, t).map(|p| p.success_rate())
    }));
    Ok(())
}

fn success_table(sirs: &[f64], transports: &[Transport], rate: impl Fn(f64, Transport) -> Option<f64>) -> String {
    let mut s = format!("{:>8}", "SIR(dB)");
    for t in transports {
        s += &format!("{:>12}", t.name());
    }
    s.push('\n');
    for &sir in sirs {
        s += &format!("{sir:>8}");
        for &t in transports {
            s += &format!("{:>12}", rate(sir, t).map_or("-".into(), |r| format!("{r:.3}")));
        }
        s.push('\n');
    }
    s
}

fn fixtures_cmd(action: FixtureAction) -> std::result::Result<(), Failure> {
    match action {
        FixtureAction::Verify { dir } => {
            let dir = dir.unwrap_or_else(fixtures::default_dir);
            let statuses = fixtures::verify_dir(&dir)?;
            let mut ok = true;
            for st in &statuses {
                println!("{} {}: {}", if st.ok() { "ok  " } else { "FAIL" }, st.file, st.detail);
                ok &= st.ok();
            }
            if ok {
                Ok(())
            } else {
                Err(Error::Parse(format!("fixtures in {} do not verify", dir.display())).into())
            }
        }
        FixtureAction::Write { dir } => {
            fixtures::write_generated(&dir)?;
            println!("wrote generated fixtures to {}", dir.display());
            Ok(())
        }
    }
}
