//! Flat `key = value` run configuration.
//!
//! The file is a flat TOML document without tables:
//!
//! ```toml
//! k = 1000
//! c = 0.1
//! delta = 0.5
//! sir_points = [6, 8, 10, 14, 25, 30]
//! schemes = ["RAW", "CS3", "CS2", "CS1"]
//! trials = 200
//! max_overhead = 0.45
//! seed = 1
//! channel = "fading"        # fading | awgn | bsc | trace
//! coherence_bits = 114      # fading
//! bsc_p = 0.01              # bsc
//! trace_path = "tu5.f32"    # trace
//! trace_wrap = false        # trace
//! raw_detection = "genie"   # genie | crc16
//! trajectory_trials = 1
//! ```
//!
//! Every key is optional. Unknown keys are rejected and all of them are
//! listed in the error.

use std::fmt::Write as _;
use std::path::PathBuf;

use toml::{Table, Value};

use crate::channel::{ChannelKind, ChannelModel, Trace};
use crate::error::{Error, Result};
use crate::experiment::SweepConfig;
use crate::pipeline::{RawDetection, Transport};

pub const KEYS: [&str; 15] = [
    "k",
    "c",
    "delta",
    "sir_points",
    "schemes",
    "trials",
    "max_overhead",
    "seed",
    "channel",
    "coherence_bits",
    "bsc_p",
    "trace_path",
    "trace_wrap",
    "raw_detection",
    "trajectory_trials",
];

#[derive(Debug, Clone, PartialEq)]
pub enum ChannelSpec {
    Fading { coherence_bits: usize },
    Awgn,
    Bsc { p: f64 },
    Trace { path: PathBuf, wrap: bool },
}

impl ChannelSpec {
    /// Channel model at SIR 0 dB with seed 0; sweeps move both.
    pub fn template(&self) -> Result<ChannelModel> {
        match self {
            ChannelSpec::Fading { coherence_bits } => ChannelModel::fading(0.0, *coherence_bits, 0),
            ChannelSpec::Awgn => ChannelModel::awgn(0.0, 0),
            ChannelSpec::Bsc { p } => ChannelModel::new(ChannelKind::Bsc { p: *p }, 0),
            ChannelSpec::Trace { path, wrap } => ChannelModel::new(ChannelKind::Trace(Trace::load(path, *wrap)?), 0),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ChannelSpec::Fading { .. } => "fading",
            ChannelSpec::Awgn => "awgn",
            ChannelSpec::Bsc { .. } => "bsc",
            ChannelSpec::Trace { .. } => "trace",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSettings {
    pub k: usize,
    pub c: f64,
    pub delta: f64,
    pub sir_points: Vec<f64>,
    pub schemes: Vec<Transport>,
    pub trials: usize,
    pub max_overhead: f64,
    /// `None` until resolved; the CLI then draws and logs a seed.
    pub seed: Option<u64>,
    pub channel: ChannelSpec,
    pub raw_detection: RawDetection,
    pub trajectory_trials: usize,
}

impl Default for RunSettings {
    fn default() -> Self {
        let sweep = SweepConfig::default();
        Self {
            k: sweep.k,
            c: sweep.c,
            delta: sweep.delta,
            sir_points: sweep.sir_points,
            schemes: sweep.transports,
            trials: sweep.trials,
            max_overhead: sweep.max_overhead,
            seed: None,
            channel: ChannelSpec::Fading { coherence_bits: 114 },
            raw_detection: sweep.raw_detection,
            trajectory_trials: sweep.trajectory_trials,
        }
    }
}

fn as_f64(key: &str, v: &Value) -> Result<f64> {
    match v {
        Value::Integer(i) => Ok(*i as f64),
        Value::Float(f) => Ok(*f),
        _ => Err(Error::Config(format!("'{key}' must be a number"))),
    }
}

fn as_usize(key: &str, v: &Value) -> Result<usize> {
    match v {
        Value::Integer(i) if *i >= 0 => Ok(*i as usize),
        _ => Err(Error::Config(format!("'{key}' must be a non-negative integer"))),
    }
}

fn as_str<'a>(key: &str, v: &'a Value) -> Result<&'a str> {
    v.as_str()
        .ok_or_else(|| Error::Config(format!("'{key}' must be a string")))
}

pub fn parse_schemes(s: &str) -> Result<Vec<Transport>> {
    s.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|e: Error| Error::Config(e.to_string())))
        .collect()
}

pub fn parse_raw_detection(s: &str) -> Result<RawDetection> {
    match s.to_ascii_lowercase().as_str() {
        "genie" => Ok(RawDetection::Genie),
        "crc16" | "crc" => Ok(RawDetection::Crc16),
        other => Err(Error::Config(format!("unknown raw_detection '{other}'"))),
    }
}

impl RunSettings {
    /// Applies the keys of a config file on top of `self`.
    pub fn merge_file(mut self, text: &str) -> Result<Self> {
        let table: Table = text
            .parse()
            .map_err(|e: toml::de::Error| Error::Config(e.message().to_string()))?;
        let unknown: Vec<&str> = table
            .keys()
            .map(String::as_str)
            .filter(|k| !KEYS.contains(k))
            .collect();
        if !unknown.is_empty() {
            return Err(Error::Config(format!("unknown config keys: {}", unknown.join(", "))));
        }

        let mut channel_name = None;
        let mut coherence = None;
        let mut bsc_p = None;
        let mut trace_path = None;
        let mut trace_wrap = None;
        for (key, v) in &table {
            match key.as_str() {
                "k" => self.k = as_usize(key, v)?,
                "c" => self.c = as_f64(key, v)?,
                "delta" => self.delta = as_f64(key, v)?,
                "sir_points" => {
                    self.sir_points = match v {
                        Value::Array(a) => a.iter().map(|x| as_f64(key, x)).collect::<Result<_>>()?,
                        other => vec![as_f64(key, other)?],
                    }
                }
                "schemes" => {
                    self.schemes = match v {
                        Value::Array(a) => a
                            .iter()
                            .map(|x| parse_schemes(as_str(key, x)?))
                            .collect::<Result<Vec<_>>>()?
                            .concat(),
                        other => parse_schemes(as_str(key, other)?)?,
                    }
                }
                "trials" => self.trials = as_usize(key, v)?,
                "max_overhead" => self.max_overhead = as_f64(key, v)?,
                "seed" => {
                    self.seed = Some(match v {
                        Value::Integer(i) => *i as u64,
                        Value::String(s) => parse_seed(s)?,
                        _ => return Err(Error::Config("'seed' must be an integer".into())),
                    })
                }
                "channel" => channel_name = Some(as_str(key, v)?.to_ascii_lowercase()),
                "coherence_bits" => coherence = Some(as_usize(key, v)?),
                "bsc_p" => bsc_p = Some(as_f64(key, v)?),
                "trace_path" => trace_path = Some(PathBuf::from(as_str(key, v)?)),
                "trace_wrap" => {
                    trace_wrap = Some(
                        v.as_bool()
                            .ok_or_else(|| Error::Config("'trace_wrap' must be a boolean".into()))?,
                    )
                }
                "raw_detection" => self.raw_detection = parse_raw_detection(as_str(key, v)?)?,
                "trajectory_trials" => self.trajectory_trials = as_usize(key, v)?,
                _ => unreachable!("checked above"),
            }
        }
        let name = channel_name.unwrap_or_else(|| self.channel.name().to_string());
        self.channel = self.channel_from_parts(&name, coherence, bsc_p, trace_path, trace_wrap)?;
        Ok(self)
    }

    /// Builds a channel spec, keeping current values for omitted parts.
    pub fn channel_from_parts(
        &self,
        name: &str,
        coherence: Option<usize>,
        bsc_p: Option<f64>,
        trace_path: Option<PathBuf>,
        trace_wrap: Option<bool>,
    ) -> Result<ChannelSpec> {
        Ok(match name {
            "fading" => ChannelSpec::Fading {
                coherence_bits: coherence.unwrap_or(match self.channel {
                    ChannelSpec::Fading { coherence_bits } => coherence_bits,
                    _ => 114,
                }),
            },
            "awgn" => ChannelSpec::Awgn,
            "bsc" => ChannelSpec::Bsc {
                p: bsc_p.unwrap_or(match self.channel {
                    ChannelSpec::Bsc { p } => p,
                    _ => 0.0,
                }),
            },
            "trace" => {
                let (old_path, old_wrap) = match &self.channel {
                    ChannelSpec::Trace { path, wrap } => (Some(path.clone()), *wrap),
                    _ => (None, false),
                };
                ChannelSpec::Trace {
                    path: trace_path
                        .or(old_path)
                        .ok_or_else(|| Error::Config("channel 'trace' needs trace_path".into()))?,
                    wrap: trace_wrap.unwrap_or(old_wrap),
                }
            }
            other => return Err(Error::Config(format!("unknown channel '{other}'"))),
        })
    }

    pub fn sweep_config(&self) -> Result<SweepConfig> {
        let cfg = SweepConfig {
            sir_points: self.sir_points.clone(),
            transports: self.schemes.clone(),
            trials: self.trials,
            k: self.k,
            c: self.c,
            delta: self.delta,
            max_overhead: self.max_overhead,
            base_seed: self
                .seed
                .ok_or_else(|| Error::Config("seed not resolved".into()))?,
            channel: self.channel.template()?,
            raw_detection: self.raw_detection,
            trajectory_trials: self.trajectory_trials,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Renders the settings in the config file format.
    pub fn render(&self) -> String {
        let mut s = String::new();
        let list = |xs: &[f64]| xs.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(", ");
        writeln!(s, "k = {}", self.k).unwrap();
        writeln!(s, "c = {:?}", self.c).unwrap();
        writeln!(s, "delta = {:?}", self.delta).unwrap();
        writeln!(s, "sir_points = [{}]", list(&self.sir_points)).unwrap();
        let schemes: Vec<String> = self.schemes.iter().map(|t| format!("\"{t}\"")).collect();
        writeln!(s, "schemes = [{}]", schemes.join(", ")).unwrap();
        writeln!(s, "trials = {}", self.trials).unwrap();
        writeln!(s, "max_overhead = {:?}", self.max_overhead).unwrap();
        if let Some(seed) = self.seed {
            // TOML integers are signed 64-bit; larger seeds go as strings
            if seed <= i64::MAX as u64 {
                writeln!(s, "seed = {seed}").unwrap();
            } else {
                writeln!(s, "seed = \"{seed}\"").unwrap();
            }
        }
        writeln!(s, "channel = \"{}\"", self.channel.name()).unwrap();
        match &self.channel {
            ChannelSpec::Fading { coherence_bits } => writeln!(s, "coherence_bits = {coherence_bits}").unwrap(),
            ChannelSpec::Bsc { p } => writeln!(s, "bsc_p = {p:?}").unwrap(),
            ChannelSpec::Trace { path, wrap } => {
                writeln!(s, "trace_path = \"{}\"", path.display()).unwrap();
                writeln!(s, "trace_wrap = {wrap}").unwrap();
            }
            ChannelSpec::Awgn => {}
        }
        let raw = match self.raw_detection {
            RawDetection::Genie => "genie",
            RawDetection::Crc16 => "crc16",
        };
        writeln!(s, "raw_detection = \"{raw}\"").unwrap();
        writeln!(s, "trajectory_trials = {}", self.trajectory_trials).unwrap();
        s
    }
}

/// Decimal or `0x`-prefixed hexadecimal seed.
pub fn parse_seed(s: &str) -> Result<u64> {
    let s = s.trim();
    let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    };
    parsed.map_err(|_| Error::Config(format!("invalid seed '{s}'")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coding::Scheme;

    #[test]
    fn parses_full_file() {
        let text = r#"
            k = 1000
            c = 0.1
            delta = 0.5
            sir_points = [6, 8.5]
            schemes = ["RAW", "CS-2"]
            trials = 3
            max_overhead = 0.45
            seed = 9
            channel = "bsc"
            bsc_p = 0.02
            raw_detection = "crc16"
            trajectory_trials = 0
        "#;
        let s = RunSettings::default().merge_file(text).unwrap();
        assert_eq!(s.k, 1000);
        assert_eq!(s.sir_points, vec![6.0, 8.5]);
        assert_eq!(s.schemes, vec![Transport::Raw, Transport::Coded(Scheme::Cs2)]);
        assert_eq!(s.seed, Some(9));
        assert_eq!(s.channel, ChannelSpec::Bsc { p: 0.02 });
        assert_eq!(s.raw_detection, RawDetection::Crc16);
        assert_eq!(s.trajectory_trials, 0);
    }

    #[test]
    fn unknown_keys_all_listed() {
        let err = RunSettings::default()
            .merge_file("k = 10\nfoo = 1\nbar = \"x\"\n")
            .unwrap_err()
            .to_string();
        assert!(err.contains("bar") && err.contains("foo"), "{err}");
    }

    #[test]
    fn type_errors() {
        assert!(RunSettings::default().merge_file("k = -3").is_err());
        assert!(RunSettings::default().merge_file("c = \"x\"").is_err());
        assert!(RunSettings::default().merge_file("channel = \"radio\"").is_err());
        assert!(RunSettings::default().merge_file("channel = \"trace\"").is_err());
        assert!(RunSettings::default().merge_file("schemes = [\"CS9\"]").is_err());
    }

    #[test]
    fn render_round_trips() {
        let mut s = RunSettings::default();
        s.seed = Some(u64::MAX - 3);
        s.channel = ChannelSpec::Trace {
            path: "a/b.f32".into(),
            wrap: true,
        };
        let back = RunSettings::default().merge_file(&s.render()).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn seeds() {
        assert_eq!(parse_seed("0x10").unwrap(), 16);
        assert_eq!(parse_seed("42").unwrap(), 42);
        assert!(parse_seed("x").is_err());
    }

    #[test]
    fn sweep_config_requires_seed() {
        assert!(RunSettings::default().sweep_config().is_err());
        let s = RunSettings {
            seed: Some(1),
            ..RunSettings::default()
        };
        assert_eq!(s.sweep_config().unwrap().base_seed, 1);
    }
}
