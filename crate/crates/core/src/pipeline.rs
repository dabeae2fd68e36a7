//! RLC block transport of fountain symbols.
//!
//! Fountain symbols are packed into RLC payloads (32 bits each, MSB first,
//! zero padding at the end), protected by the selected coding scheme, passed
//! through the channel and checked. Blocks failing their check are dropped
//! whole; there is no feedback path to the sender.
//!
//! Only the 32-bit payloads travel inside a block. The seed of symbol `j` of
//! a session is `session_seed + j`, so the receiver recovers seeds from the
//! block number and slot.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::Serialize;

use crate::channel::{hard_decision, ChannelModel};
use crate::coding::{Codec, Scheme, BLOCK_BITS, CRC16};
use crate::error::{Error, Result};
use crate::lt::{DegreeDistribution, EncodedSymbol, LtEncoder, PeelingDecoder};
use crate::rng::{derive_seed, SplitMix64};

pub const SYMBOL_BITS: usize = 32;

const MESSAGE_STREAM: u64 = 0x4D53_4753;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Transport {
    /// 456 payload bits, no channel coding.
    Raw,
    Coded(Scheme),
}

/// How uncoded blocks are checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RawDetection {
    /// Compare with the transmitted bits; no check bits are spent.
    #[default]
    Genie,
    /// A real CRC-16 inside the block, leaving 440 payload bits.
    Crc16,
}

impl Transport {
    pub const SWEEP_ORDER: [Transport; 4] = [
        Transport::Raw,
        Transport::Coded(Scheme::Cs3),
        Transport::Coded(Scheme::Cs2),
        Transport::Coded(Scheme::Cs1),
    ];

    pub fn payload_bits(self, raw: RawDetection) -> usize {
        match (self, raw) {
            (Transport::Raw, RawDetection::Genie) => BLOCK_BITS,
            (Transport::Raw, RawDetection::Crc16) => BLOCK_BITS - CRC16.width as usize,
            (Transport::Coded(s), _) => s.params().data_bits,
        }
    }

    /// 14 for RAW; 5, 8, 9, 13 for CS-1..CS-4.
    pub fn symbols_per_block(self, raw: RawDetection) -> usize {
        self.payload_bits(raw) / SYMBOL_BITS
    }

    pub fn name(self) -> &'static str {
        match self {
            Transport::Raw => "RAW",
            Transport::Coded(s) => s.name(),
        }
    }
}

impl fmt::Display for Transport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Transport {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("raw") {
            Ok(Transport::Raw)
        } else {
            s.parse().map(Transport::Coded)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub transport: Transport,
    pub channel: ChannelModel,
    pub k: usize,
    pub c: f64,
    pub delta: f64,
    pub seed: u64,
    pub raw_detection: RawDetection,
}

impl PipelineConfig {
    pub fn symbols_per_block(&self) -> usize {
        self.transport.symbols_per_block(self.raw_detection)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlockReport {
    pub block_no: u64,
    pub delivered: bool,
    /// Symbols handed to the fountain decoder; empty when dropped.
    pub symbols: Vec<EncodedSymbol>,
    /// Delivered although at least one payload differs from what was sent.
    pub undetected_error: bool,
}

/// One row per transmitted block.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceRow {
    pub block_no: u64,
    pub tx_symbols: usize,
    pub rx_symbols: usize,
    pub recovered: usize,
    pub complete: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SessionTrace {
    pub transport: Transport,
    pub k: usize,
    pub symbols_per_block: usize,
    pub rows: Vec<TraceRow>,
    pub complete: bool,
    /// Decoded message equals the original.
    pub message_ok: bool,
    pub undetected_errors: usize,
}

impl SessionTrace {
    pub fn blocks_sent(&self) -> usize {
        self.rows.len()
    }

    pub fn tx_symbols(&self) -> usize {
        self.rows.last().map_or(0, |r| r.tx_symbols)
    }

    pub fn rx_symbols(&self) -> usize {
        self.rows.last().map_or(0, |r| r.rx_symbols)
    }

    /// Fountain overhead over transmitted symbols, `None` on failure.
    pub fn eps(&self) -> Option<f64> {
        self.complete
            .then(|| self.tx_symbols() as f64 / self.k as f64 - 1.0)
    }

    /// Overhead reached when the session stopped, success or not.
    pub fn eps_reached(&self) -> f64 {
        self.tx_symbols() as f64 / self.k as f64 - 1.0
    }

    /// Channel bits sent per message bit, minus one. `None` on failure.
    pub fn total_overhead(&self) -> Option<f64> {
        self.complete
            .then(|| total_overhead_from_blocks(self.blocks_sent(), self.k))
    }

    /// Largest number of message symbols recovered by a single block.
    pub fn max_recovery_jump(&self) -> usize {
        let mut prev = 0;
        self.rows
            .iter()
            .map(|r| {
                let jump = r.recovered - prev;
                prev = r.recovered;
                jump
            })
            .max()
            .unwrap_or(0)
    }

    /// CSV with columns `block_no, tx_symbols, rx_symbols, recovered, complete`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for row in &self.rows {
            w.serialize(row)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// `blocks * 456 / (32 k) - 1`.
pub fn total_overhead_from_blocks(blocks: usize, k: usize) -> f64 {
    (blocks * BLOCK_BITS) as f64 / (SYMBOL_BITS * k) as f64 - 1.0
}

/// A configured link: coding tables and degree distribution built once.
#[derive(Debug, Clone)]
pub struct Link {
    cfg: PipelineConfig,
    codec: Option<Codec>,
    dist: DegreeDistribution,
}

impl Link {
    pub fn new(cfg: PipelineConfig) -> Result<Self> {
        let dist = DegreeDistribution::robust_soliton(cfg.k, cfg.c, cfg.delta)?;
        Self::with_distribution(cfg, dist)
    }

    /// Reuses an already tabulated distribution.
    pub fn with_distribution(cfg: PipelineConfig, dist: DegreeDistribution) -> Result<Self> {
        if dist.k() != cfg.k {
            return Err(Error::InvalidParameter(format!(
                "distribution built for k = {}, config has k = {}",
                dist.k(),
                cfg.k
            )));
        }
        let codec = match cfg.transport {
            Transport::Raw => None,
            Transport::Coded(s) => Some(Codec::new(s)),
        };
        Ok(Self { cfg, codec, dist })
    }

    pub fn with_codec(mut self, codec: Codec) -> Result<Self> {
        if self.cfg.transport != Transport::Coded(codec.scheme()) {
            return Err(Error::InvalidParameter(format!(
                "codec for {} does not match transport {}",
                codec.scheme(),
                self.cfg.transport
            )));
        }
        self.codec = Some(codec);
        Ok(self)
    }

    pub fn config(&self) -> &PipelineConfig {
        &self.cfg
    }

    pub fn distribution(&self) -> &DegreeDistribution {
        &self.dist
    }

    /// The session's message, drawn from the session seed.
    pub fn message(&self) -> Vec<u32> {
        let mut rng = SplitMix64::new(derive_seed(self.cfg.seed, MESSAGE_STREAM));
        (0..self.cfg.k).map(|_| rng.next_u32()).collect()
    }

    pub fn send_block(&self, symbols: &[EncodedSymbol], block_no: u64) -> Result<BlockReport> {
        let spb = self.cfg.symbols_per_block();
        if symbols.len() != spb {
            return Err(Error::InvalidParameter(format!(
                "{} carries {spb} symbols per block, got {}",
                self.cfg.transport,
                symbols.len()
            )));
        }
        let payload_bits = self.cfg.transport.payload_bits(self.cfg.raw_detection);
        let mut payload = Vec::with_capacity(payload_bits);
        for s in symbols {
            payload.extend((0..SYMBOL_BITS).rev().map(|i| ((s.payload >> i) & 1) as u8));
        }
        payload.resize(payload_bits, 0);

        let (delivered, received) = match &self.codec {
            None => {
                let sent = match self.cfg.raw_detection {
                    RawDetection::Genie => payload.clone(),
                    RawDetection::Crc16 => {
                        let mut b = payload.clone();
                        b.extend(CRC16.parity_bits(&payload));
                        b
                    }
                };
                let soft = self.cfg.channel.transmit(&sent, block_no)?;
                let hard = hard_decision(&soft.values);
                match self.cfg.raw_detection {
                    RawDetection::Genie => (hard == sent, hard),
                    RawDetection::Crc16 => (CRC16.check(&hard), hard[..payload_bits].to_vec()),
                }
            }
            Some(codec) => {
                let coded = codec.encode(&payload)?;
                let soft = self.cfg.channel.transmit(&coded.channel_bits, block_no)?;
                let out = codec.decode(&soft.values)?;
                (out.bcs_ok, out.data)
            }
        };

        if !delivered {
            return Ok(BlockReport {
                block_no,
                delivered,
                symbols: Vec::new(),
                undetected_error: false,
            });
        }
        let out: Vec<EncodedSymbol> = symbols
            .iter()
            .zip(received.chunks(SYMBOL_BITS))
            .map(|(s, bits)| EncodedSymbol {
                payload: bits.iter().fold(0u32, |acc, &b| (acc << 1) | b as u32),
                ..*s
            })
            .collect();
        let undetected_error = out.iter().zip(symbols).any(|(a, b)| a.payload != b.payload);
        Ok(BlockReport {
            block_no,
            delivered,
            symbols: out,
            undetected_error,
        })
    }

    /// Sends blocks of fresh symbols until the fountain decoder completes or
    /// the next block would push transmitted symbols past
    /// `k * (1 + max_overhead)`.
    pub fn run_session(&self, max_overhead: f64) -> Result<SessionTrace> {
        if !(max_overhead > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "max_overhead must be positive, got {max_overhead}"
            )));
        }
        let k = self.cfg.k;
        let spb = self.cfg.symbols_per_block();
        let limit = (k as f64 * (1.0 + max_overhead) + 1e-9).floor() as usize;
        let message = self.message();
        let mut encoder = LtEncoder::new(message.clone(), self.dist.clone(), self.cfg.seed)?;
        let mut decoder = PeelingDecoder::new(k);
        let mut rows = Vec::new();
        let mut tx = 0;
        let mut rx = 0;
        let mut undetected_errors = 0;
        let mut block_no = 0u64;

        while !decoder.is_complete() && tx + spb <= limit {
            let symbols: Vec<EncodedSymbol> = encoder.by_ref().take(spb).collect();
            let report = self.send_block(&symbols, block_no)?;
            tx += spb;
            if report.delivered {
                rx += report.symbols.len();
                undetected_errors += usize::from(report.undetected_error);
                for s in &report.symbols {
                    decoder.ingest(s, &self.dist)?;
                }
            }
            rows.push(TraceRow {
                block_no,
                tx_symbols: tx,
                rx_symbols: rx,
                recovered: decoder.recovered_count(),
                complete: decoder.is_complete(),
            });
            block_no += 1;
        }

        let complete = decoder.is_complete();
        Ok(SessionTrace {
            transport: self.cfg.transport,
            k,
            symbols_per_block: spb,
            rows,
            complete,
            message_ok: complete && decoder.message().as_deref() == Some(&message[..]),
            undetected_errors,
        })
    }
}
