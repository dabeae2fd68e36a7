//! Monte-Carlo sweeps over SIR and transport.
//!
//! Trial `t` uses the session seed `derive_seed(base_seed, t)` and the
//! channel seed `derive_seed(base_seed ^ CHANNEL_TAG, t)` at every grid
//! point, so the same messages, symbols and channel realisations are reused
//! across SIR values and transports. Trials run in parallel; results are
//! collected in grid order and reduced sequentially, so the output does not
//! depend on the thread count.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use crate::channel::ChannelModel;
use crate::coding::BLOCK_BITS;
use crate::error::{Error, Result};
use crate::lt::DegreeDistribution;
use crate::pipeline::{Link, PipelineConfig, RawDetection, SessionTrace, Transport, SYMBOL_BITS};
use crate::rng::derive_seed;

const CHANNEL_TAG: u64 = 0xC4A7_7E1D_0000_0000;

/// Sentinel written in place of an overhead when every trial failed.
pub const FAILURE_SENTINEL: f64 = -1.0;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub sir_points: Vec<f64>,
    pub transports: Vec<Transport>,
    pub trials: usize,
    pub k: usize,
    pub c: f64,
    pub delta: f64,
    pub max_overhead: f64,
    pub base_seed: u64,
    /// Channel template; its SIR and seed are replaced per grid point/trial.
    pub channel: ChannelModel,
    pub raw_detection: RawDetection,
    /// Trials per grid point whose recovery trajectories are kept.
    pub trajectory_trials: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            sir_points: vec![6.0, 8.0, 10.0, 14.0, 25.0, 30.0],
            transports: Transport::SWEEP_ORDER.to_vec(),
            trials: 200,
            k: 1021,
            c: 0.1,
            delta: 0.5,
            max_overhead: 0.5,
            base_seed: 1,
            channel: ChannelModel::fading(0.0, 114, 0).expect("static model"),
            raw_detection: RawDetection::Genie,
            trajectory_trials: 1,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if self.sir_points.is_empty() {
            return Err(Error::Config("sir_points must not be empty".into()));
        }
        if self.sir_points.iter().any(|s| !s.is_finite()) {
            return Err(Error::Config("sir_points must be finite".into()));
        }
        if self.transports.is_empty() {
            return Err(Error::Config("schemes must not be empty".into()));
        }
        if !(self.max_overhead > 0.0) {
            return Err(Error::Config("max_overhead must be positive".into()));
        }
        DegreeDistribution::robust_soliton(self.k, self.c, self.delta).map(|_| ())
    }

    pub fn session_seed(&self, trial: usize) -> u64 {
        derive_seed(self.base_seed, trial as u64)
    }

    pub fn channel_seed(&self, trial: usize) -> u64 {
        derive_seed(self.base_seed ^ CHANNEL_TAG, trial as u64)
    }

    fn pipeline(&self, sir: f64, transport: Transport, trial: usize) -> PipelineConfig {
        PipelineConfig {
            transport,
            channel: self.channel.at_sir(sir).reseeded(self.channel_seed(trial)),
            k: self.k,
            c: self.c,
            delta: self.delta,
            seed: self.session_seed(trial),
            raw_detection: self.raw_detection,
        }
    }
}

/// Summary of the outcome of one trial.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub eps: Option<f64>,
    pub eps_reached: f64,
    pub total_overhead: Option<f64>,
    pub blocks: usize,
    pub max_jump: usize,
    pub message_ok: bool,
    pub undetected_errors: usize,
}

impl From<&SessionTrace> for TrialOutcome {
    fn from(t: &SessionTrace) -> Self {
        Self {
            eps: t.eps(),
            eps_reached: t.eps_reached(),
            total_overhead: t.total_overhead(),
            blocks: t.blocks_sent(),
            max_jump: t.max_recovery_jump(),
            message_ok: t.message_ok,
            undetected_errors: t.undetected_errors,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub mean: f64,
    pub std: f64,
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

impl Moments {
    pub fn of(xs: &[f64]) -> Option<Self> {
        if xs.is_empty() {
            return None;
        }
        let n = xs.len();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = if n > 1 {
            xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64
        } else {
            0.0
        };
        Some(Self {
            mean,
            std: var.sqrt(),
            min: xs.iter().copied().fold(f64::INFINITY, f64::min),
            max: xs.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            n,
        })
    }

    /// Standard error of the mean.
    pub fn sem(&self) -> f64 {
        self.std / (self.n as f64).sqrt()
    }
}

/// Statistics at one (SIR, transport) grid point. Overheads are fractions.
#[derive(Debug, Clone, PartialEq)]
pub struct PointStats {
    pub sir_db: f64,
    pub transport: Transport,
    pub trials: usize,
    pub successes: usize,
    /// Fountain overhead over successful trials.
    pub eps: Option<Moments>,
    pub total: Option<Moments>,
    /// Overhead reached when sessions stopped, over all trials.
    pub eps_reached: Moments,
    pub outcomes: Vec<TrialOutcome>,
}

impl PointStats {
    pub fn success_rate(&self) -> f64 {
        self.successes as f64 / self.trials as f64
    }

    pub fn all_succeeded(&self) -> bool {
        self.successes == self.trials
    }

    pub fn failed(&self) -> bool {
        self.successes == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectorySample {
    pub sir_db: f64,
    pub scheme: String,
    pub trial: usize,
    pub tx_symbols: usize,
    pub recovered_fraction: f64,
}

#[derive(Debug, Serialize)]
struct OverheadRow {
    sir_db: f64,
    scheme: &'static str,
    mean_eps_pct: f64,
    min: f64,
    max: f64,
    success_rate: f64,
    total_overhead_pct: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub config: SweepConfig,
    /// Grid points, SIR-major in config order.
    pub points: Vec<PointStats>,
    pub trajectories: Vec<TrajectorySample>,
}

pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepResult> {
    cfg.validate()?;
    let dist = DegreeDistribution::robust_soliton(cfg.k, cfg.c, cfg.delta)?;
    let grid: Vec<(f64, Transport)> = cfg
        .sir_points
        .iter()
        .flat_map(|&s| cfg.transports.iter().map(move |&t| (s, t)))
        .collect();
    let jobs: Vec<(usize, usize)> = (0..grid.len())
        .flat_map(|g| (0..cfg.trials).map(move |t| (g, t)))
        .collect();

    let traces: Vec<(TrialOutcome, Option<SessionTrace>)> = jobs
        .par_iter()
        .map(|&(g, trial)| {
            let (sir, transport) = grid[g];
            let link = Link::with_distribution(cfg.pipeline(sir, transport, trial), dist.clone())?;
            let trace = link.run_session(cfg.max_overhead)?;
            let outcome = TrialOutcome::from(&trace);
            Ok((outcome, (trial < cfg.trajectory_trials).then_some(trace)))
        })
        .collect::<Result<_>>()?;

    let mut points = Vec::with_capacity(grid.len());
    let mut trajectories = Vec::new();
    for (g, chunk) in traces.chunks(cfg.trials).enumerate() {
        let (sir_db, transport) = grid[g];
        let outcomes: Vec<TrialOutcome> = chunk.iter().map(|(o, _)| o.clone()).collect();
        for (trial, (_, trace)) in chunk.iter().enumerate() {
            if let Some(trace) = trace {
                trajectories.extend(trace.rows.iter().map(|r| TrajectorySample {
                    sir_db,
                    scheme: transport.name().to_string(),
                    trial,
                    tx_symbols: r.tx_symbols,
                    recovered_fraction: r.recovered as f64 / cfg.k as f64,
                }));
            }
        }
        let eps: Vec<f64> = outcomes.iter().filter_map(|o| o.eps).collect();
        let total: Vec<f64> = outcomes.iter().filter_map(|o| o.total_overhead).collect();
        let reached: Vec<f64> = outcomes.iter().map(|o| o.eps_reached).collect();
        points.push(PointStats {
            sir_db,
            transport,
            trials: cfg.trials,
            successes: eps.len(),
            eps: Moments::of(&eps),
            total: Moments::of(&total),
            eps_reached: Moments::of(&reached).expect("trials >= 1"),
            outcomes,
        });
    }

    Ok(SweepResult {
        config: cfg.clone(),
        points,
        trajectories,
    })
}

/// Total overhead for a fountain overhead `eps`: the channel bits of
/// `ceil(k (1 + eps) / symbols_per_block)` blocks per `32 k` message bits,
/// minus one.
pub fn total_overhead(eps: f64, transport: Transport, k: usize, raw: RawDetection) -> f64 {
    let spb = transport.symbols_per_block(raw);
    let tx = ((1.0 + eps) * k as f64).round() as usize;
    let blocks = tx.div_ceil(spb);
    (blocks * BLOCK_BITS) as f64 / (SYMBOL_BITS * k) as f64 - 1.0
}

impl SweepResult {
    pub fn point(&self, sir_db: f64, transport: Transport) -> Option<&PointStats> {
        self.points
            .iter()
            .find(|p| p.sir_db == sir_db && p.transport == transport)
    }

    /// Points for one transport in SIR order.
    pub fn series(&self, transport: Transport) -> Vec<&PointStats> {
        self.points.iter().filter(|p| p.transport == transport).collect()
    }

    /// `overheads.csv`: `sir_db, scheme, mean_eps_pct, min, max, success_rate,
    /// total_overhead_pct`; overhead columns hold `-1` when every trial failed.
    pub fn write_overheads_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for p in &self.points {
            let pct = |m: Option<Moments>, f: fn(&Moments) -> f64| {
                m.map_or(FAILURE_SENTINEL, |m| 100.0 * f(&m))
            };
            w.serialize(OverheadRow {
                sir_db: p.sir_db,
                scheme: p.transport.name(),
                mean_eps_pct: pct(p.eps, |m| m.mean),
                min: pct(p.eps, |m| m.min),
                max: pct(p.eps, |m| m.max),
                success_rate: p.success_rate(),
                total_overhead_pct: pct(p.total, |m| m.mean),
            })?;
        }
        w.flush()?;
        Ok(())
    }

    /// `trajectory.csv`: `sir_db, scheme, trial, tx_symbols, recovered_fraction`.
    pub fn write_trajectory_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for s in &self.trajectories {
            w.serialize(s)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_csvs(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        self.write_overheads_csv(fs::File::create(dir.join("overheads.csv"))?)?;
        self.write_trajectory_csv(fs::File::create(dir.join("trajectory.csv"))?)?;
        Ok(())
    }

    /// Two-column whitespace-separated files, one per curve:
    /// `eps_<scheme>.dat` and `total_<scheme>.dat` (SIR, percent; failed
    /// points omitted) and `trajectory_<scheme>_<sir>.dat` (transmitted
    /// symbols, recovered fraction) for trial 0.
    pub fn write_plot_data(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        for &t in &self.config.transports {
            let mut eps = String::new();
            let mut total = String::new();
            for p in self.series(t) {
                if let Some(m) = p.eps {
                    writeln!(eps, "{} {}", p.sir_db, 100.0 * m.mean).unwrap();
                }
                if let Some(m) = p.total {
                    writeln!(total, "{} {}", p.sir_db, 100.0 * m.mean).unwrap();
                }
            }
            fs::write(dir.join(format!("eps_{}.dat", t.name())), eps)?;
            fs::write(dir.join(format!("total_{}.dat", t.name())), total)?;
        }
        for &sir in &self.config.sir_points {
            for &t in &self.config.transports {
                let mut body = String::new();
                for s in self
                    .trajectories
                    .iter()
                    .filter(|s| s.trial == 0 && s.sir_db == sir && s.scheme == t.name())
                {
                    writeln!(body, "{} {}", s.tx_symbols, s.recovered_fraction).unwrap();
                }
                if !body.is_empty() {
                    fs::write(dir.join(format!("trajectory_{}_{}.dat", t.name(), sir)), body)?;
                }
            }
        }
        Ok(())
    }

    /// Fountain overhead table, one row per SIR and one column per transport.
    /// A `*` marks points where at least one trial failed; the value shown
    /// there is the mean overhead reached when sessions stopped.
    pub fn fountain_table(&self) -> String {
        let mut s = String::new();
        write!(s, "{:>8}", "SIR(dB)").unwrap();
        for t in &self.config.transports {
            write!(s, "{:>12}", t.name()).unwrap();
        }
        s.push('\n');
        for &sir in &self.config.sir_points {
            write!(s, "{sir:>8}").unwrap();
            for &t in &self.config.transports {
                let cell = match self.point(sir, t) {
                    Some(p) if p.all_succeeded() => {
                        format!("{:.2}", 100.0 * p.eps.expect("successes").mean)
                    }
                    Some(p) => format!("{:.2} *", 100.0 * p.eps_reached.mean),
                    None => "-".into(),
                };
                write!(s, "{cell:>12}").unwrap();
            }
            s.push('\n');
        }
        s
    }

    /// Total overhead table; failed points show `*`.
    pub fn total_table(&self) -> String {
        let mut s = String::new();
        write!(s, "{:>8}", "SIR(dB)").unwrap();
        for t in &self.config.transports {
            write!(s, "{:>12}", t.name()).unwrap();
        }
        s.push('\n');
        for &sir in &self.config.sir_points {
            write!(s, "{sir:>8}").unwrap();
            for &t in &self.config.transports {
                let cell = match self.point(sir, t).and_then(|p| p.total.map(|m| (p, m))) {
                    Some((p, m)) if p.all_succeeded() => format!("{:.2}", 100.0 * m.mean),
                    Some((_, m)) => format!("{:.2} *", 100.0 * m.mean),
                    None => "*".into(),
                };
                write!(s, "{cell:>12}").unwrap();
            }
            s.push('\n');
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coding::Scheme;

    fn small() -> SweepConfig {
        SweepConfig {
            sir_points: vec![4.0, 25.0],
            transports: vec![Transport::Raw, Transport::Coded(Scheme::Cs1)],
            trials: 4,
            k: 100,
            max_overhead: 0.45,
            ..SweepConfig::default()
        }
    }

    #[test]
    fn validation() {
        let mut c = small();
        c.trials = 0;
        assert!(c.validate().is_err());
        let mut c = small();
        c.sir_points.clear();
        assert!(c.validate().is_err());
        let mut c = small();
        c.delta = 2.0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn total_overhead_geometry() {
        // RAW, eps = 0, k a multiple of 14: framing slack only
        let t = total_overhead(0.0, Transport::Raw, 1400, RawDetection::Genie);
        assert!((t - (456.0 / 448.0 - 1.0)).abs() < 1e-15);
        assert!((t - 0.017857).abs() < 1e-5);
        let cs1 = total_overhead(0.1, Transport::Coded(Scheme::Cs1), 1000, RawDetection::Genie);
        let cs2 = total_overhead(0.1, Transport::Coded(Scheme::Cs2), 1000, RawDetection::Genie);
        assert!(cs1 > cs2);
        // 1100 symbols / 5 = 220 blocks
        assert!((cs1 - (220.0 * 456.0 / 32000.0 - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn raw_total_is_fountain_plus_slack() {
        for eps in [0.0, 0.0588, 0.107, 0.3526] {
            let k = 1000;
            let t = total_overhead(eps, Transport::Raw, k, RawDetection::Genie);
            let tx = ((1.0 + eps) * k as f64).round() as usize;
            let blocks = tx.div_ceil(14);
            let expected = (1.0 + blocks as f64 * 14.0 / k as f64 - 1.0) * 456.0 / 448.0 - 1.0;
            assert!((t - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn small_sweep_shapes() {
        let r = run_sweep(&small()).unwrap();
        assert_eq!(r.points.len(), 4);
        let raw_low = r.point(4.0, Transport::Raw).unwrap();
        assert!(raw_low.failed());
        assert!(r.point(25.0, Transport::Coded(Scheme::Cs1)).unwrap().all_succeeded());
        let mut buf = Vec::new();
        r.write_overheads_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("sir_db,scheme,mean_eps_pct,min,max,success_rate,total_overhead_pct\n"));
        assert!(text.contains("4.0,RAW,-1.0,-1.0,-1.0,0.0,-1.0"));
        assert!(r.fountain_table().contains('*'));
    }

    #[test]
    fn sweep_is_deterministic() {
        let a = run_sweep(&small()).unwrap();
        let b = run_sweep(&small()).unwrap();
        assert_eq!(a, b);
    }
}
