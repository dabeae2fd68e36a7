//! Soft-output channel models.
//!
//! A block of channel bits is mapped to bipolar values (`1 -> +1`,
//! `0 -> -1`) and multiplied by a per-bit soft magnitude supplied by the
//! model. The sign of the result is the hard decision, its magnitude the
//! reliability handed to the Viterbi decoder.
//!
//! | model              | received value                                      |
//! |--------------------|-----------------------------------------------------|
//! | `Bsc(p)`           | `bipolar * (+1 or -1)`, sign flip with probability p |
//! | `Awgn(sir)`        | `bipolar + n`, `n ~ N(0, 1 / (2 * 10^(sir/10)))`     |
//! | `CorrelatedFading` | `bipolar * (g + n)`, `g` Rayleigh per interval       |
//! | `Trace`            | `bipolar * m`, `m` read from the trace               |
//!
//! Every model is a pure function of `(bits, model, block_no)`: noise comes
//! from a generator seeded with `derive_seed(rng_seed, block_no)`, and trace
//! block `b` reads values `456 b .. 456 (b + 1)`.

use std::fs;
use std::path::Path;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::rng::{derive_seed, SplitMix64};

/// Soft magnitudes read from a file of little-endian `f32` values.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    values: Arc<[f32]>,
    wrap: bool,
}

impl Trace {
    pub fn new(values: Vec<f32>, wrap: bool) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidParameter("trace is empty".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Parse("trace holds non-finite values".into()));
        }
        Ok(Self {
            values: values.into(),
            wrap,
        })
    }

    pub fn from_bytes(bytes: &[u8], wrap: bool) -> Result<Self> {
        if bytes.len() % 4 != 0 {
            return Err(Error::Parse(format!(
                "trace length {} is not a multiple of 4 bytes",
                bytes.len()
            )));
        }
        let values = bytes
            .chunks_exact(4)
            .map(|c| f32::from_le_bytes(c.try_into().unwrap()))
            .collect();
        Self::new(values, wrap)
    }

    pub fn load(path: impl AsRef<Path>, wrap: bool) -> Result<Self> {
        Self::from_bytes(&fs::read(path)?, wrap)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ChannelKind {
    Bsc { p: f64 },
    Awgn { sir_db: f64 },
    CorrelatedFading { sir_db: f64, coherence_bits: usize },
    Trace(Trace),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelModel {
    pub kind: ChannelKind,
    pub rng_seed: u64,
}

/// Received soft values for one block.
#[derive(Debug, Clone, PartialEq)]
pub struct SoftBlock {
    pub values: Vec<f64>,
    pub origin: u64,
}

impl ChannelModel {
    pub fn new(kind: ChannelKind, rng_seed: u64) -> Result<Self> {
        match &kind {
            ChannelKind::Bsc { p } if !(0.0..=0.5).contains(p) => {
                return Err(Error::InvalidParameter(format!("BSC p must lie in [0, 0.5], got {p}")))
            }
            ChannelKind::Awgn { sir_db } if !sir_db.is_finite() => {
                return Err(Error::InvalidParameter("SIR must be finite".into()))
            }
            ChannelKind::CorrelatedFading { sir_db, coherence_bits } => {
                if !sir_db.is_finite() {
                    return Err(Error::InvalidParameter("SIR must be finite".into()));
                }
                if *coherence_bits == 0 {
                    return Err(Error::InvalidParameter("coherence_bits must be at least 1".into()));
                }
            }
            _ => {}
        }
        Ok(Self { kind, rng_seed })
    }

    pub fn noiseless() -> Self {
        Self {
            kind: ChannelKind::Bsc { p: 0.0 },
            rng_seed: 0,
        }
    }

    pub fn awgn(sir_db: f64, rng_seed: u64) -> Result<Self> {
        Self::new(ChannelKind::Awgn { sir_db }, rng_seed)
    }

    pub fn fading(sir_db: f64, coherence_bits: usize, rng_seed: u64) -> Result<Self> {
        Self::new(
            ChannelKind::CorrelatedFading {
                sir_db,
                coherence_bits,
            },
            rng_seed,
        )
    }

    /// Same model with a different noise seed.
    pub fn reseeded(&self, rng_seed: u64) -> Self {
        Self {
            kind: self.kind.clone(),
            rng_seed,
        }
    }

    /// Same model at a different SIR; BSC and trace models are unchanged.
    pub fn at_sir(&self, sir: f64) -> Self {
        let kind = match &self.kind {
            ChannelKind::Awgn { .. } => ChannelKind::Awgn { sir_db: sir },
            ChannelKind::CorrelatedFading { coherence_bits, .. } => ChannelKind::CorrelatedFading {
                sir_db: sir,
                coherence_bits: *coherence_bits,
            },
            other => other.clone(),
        };
        Self {
            kind,
            rng_seed: self.rng_seed,
        }
    }

    pub fn transmit(&self, bits: &[u8], block_no: u64) -> Result<SoftBlock> {
        let mut rng = SplitMix64::new(derive_seed(self.rng_seed, block_no));
        let bipolar = |b: u8| if b == 1 { 1.0 } else { -1.0 };
        let values = match &self.kind {
            ChannelKind::Bsc { p } => bits
                .iter()
                .map(|&b| {
                    let m = if rng.bernoulli(*p) { -1.0 } else { 1.0 };
                    bipolar(b) * m
                })
                .collect(),
            ChannelKind::Awgn { sir_db } => {
                let sigma = noise_sigma(*sir_db);
                bits.iter().map(|&b| bipolar(b) + sigma * rng.gaussian()).collect()
            }
            ChannelKind::CorrelatedFading {
                sir_db,
                coherence_bits,
            } => {
                let sigma = noise_sigma(*sir_db);
                let mut gain = 0.0;
                bits.iter()
                    .enumerate()
                    .map(|(i, &b)| {
                        if i % coherence_bits == 0 {
                            gain = rng.rayleigh();
                        }
                        bipolar(b) * (gain + sigma * rng.gaussian())
                    })
                    .collect()
            }
            ChannelKind::Trace(trace) => {
                let n = bits.len();
                let start = block_no as usize * n;
                let len = trace.values.len();
                if !trace.wrap && start + n > len {
                    return Err(Error::EndOfTrace {
                        block_no,
                        needed: start + n,
                        available: len,
                    });
                }
                bits.iter()
                    .enumerate()
                    .map(|(i, &b)| bipolar(b) * trace.values[(start + i) % len] as f64)
                    .collect()
            }
        };
        Ok(SoftBlock {
            values,
            origin: block_no,
        })
    }
}

/// Noise standard deviation for unit-energy bipolar symbols at `sir_db`.
pub fn noise_sigma(sir_db: f64) -> f64 {
    let snr = 10f64.powf(sir_db / 10.0);
    (1.0 / (2.0 * snr)).sqrt()
}

/// `1` for strictly positive values, `0` otherwise (zeros decode as `0`).
pub fn hard_decision(soft: &[f64]) -> Vec<u8> {
    soft.iter().map(|&v| u8::from(v > 0.0)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(n: usize, seed: u64) -> Vec<u8> {
        let mut rng = SplitMix64::new(seed);
        (0..n).map(|_| (rng.next_u64() & 1) as u8).collect()
    }

    #[test]
    fn hard_decision_sign_rule() {
        assert_eq!(hard_decision(&[0.3, -0.7, 2.1]), vec![1, 0, 1]);
        assert_eq!(hard_decision(&[0.0; 5]), vec![0; 5]);
    }

    #[test]
    fn noiseless_bsc_is_identity() {
        let b = bits(456, 1);
        let soft = ChannelModel::noiseless().transmit(&b, 3).unwrap();
        assert!(soft
            .values
            .iter()
            .zip(&b)
            .all(|(&v, &x)| v == if x == 1 { 1.0 } else { -1.0 }));
        assert_eq!(hard_decision(&soft.values), b);
        assert_eq!(soft.origin, 3);
    }

    #[test]
    fn transmit_is_pure() {
        let b = bits(456, 2);
        for m in [
            ChannelModel::awgn(3.0, 9).unwrap(),
            ChannelModel::fading(10.0, 114, 9).unwrap(),
            ChannelModel::new(ChannelKind::Bsc { p: 0.1 }, 9).unwrap(),
        ] {
            assert_eq!(m.transmit(&b, 17).unwrap(), m.transmit(&b, 17).unwrap());
            assert_ne!(m.transmit(&b, 17).unwrap().values, m.transmit(&b, 18).unwrap().values);
        }
    }

    #[test]
    fn rejects_invalid_models() {
        assert!(ChannelModel::new(ChannelKind::Bsc { p: 0.6 }, 0).is_err());
        assert!(ChannelModel::awgn(f64::INFINITY, 0).is_err());
        assert!(ChannelModel::fading(5.0, 0, 0).is_err());
        assert!(Trace::new(vec![], false).is_err());
    }

    #[test]
    fn bsc_flip_rate() {
        let p = 0.1;
        let m = ChannelModel::new(ChannelKind::Bsc { p }, 4).unwrap();
        let b = vec![1u8; 1000];
        let mut flips = 0usize;
        let blocks = 1000;
        for blk in 0..blocks {
            flips += m.transmit(&b, blk).unwrap().values.iter().filter(|&&v| v < 0.0).count();
        }
        let n = (blocks as usize * 1000) as f64;
        let sd = (n * p * (1.0 - p)).sqrt();
        assert!((flips as f64 - n * p).abs() < 3.0 * sd, "flips {flips}");
    }

    #[test]
    fn fading_gain_is_shared_within_interval() {
        // with negligible noise the magnitude is the interval's Rayleigh gain
        let m = ChannelModel::fading(120.0, 57, 5).unwrap();
        let soft = m.transmit(&vec![1; 456], 0).unwrap();
        for chunk in soft.values.chunks(57) {
            let g = chunk[0];
            assert!(chunk.iter().all(|v| (v - g).abs() < 1e-4));
        }
        assert_ne!(soft.values[0], soft.values[57]);
    }

    #[test]
    fn trace_reads_blocks_in_order() {
        let values: Vec<f32> = (0..912).map(|i| i as f32 * 0.5 + 0.25).collect();
        let bytes: Vec<u8> = values.iter().flat_map(|v| v.to_le_bytes()).collect();
        let trace = Trace::from_bytes(&bytes, false).unwrap();
        let m = ChannelModel::new(ChannelKind::Trace(trace.clone()), 0).unwrap();
        let ones = vec![1u8; 456];
        let b1 = m.transmit(&ones, 1).unwrap();
        assert_eq!(b1.values[0], values[456] as f64);
        assert_eq!(b1.values[455], values[911] as f64);
        assert!(matches!(m.transmit(&ones, 2), Err(Error::EndOfTrace { .. })));

        let wrapped = ChannelModel::new(ChannelKind::Trace(Trace { wrap: true, ..trace }), 0).unwrap();
        assert_eq!(wrapped.transmit(&ones, 2).unwrap().values[0], values[0] as f64);
        let zeros = vec![0u8; 456];
        assert_eq!(wrapped.transmit(&zeros, 0).unwrap().values[3], -(values[3] as f64));
    }

    #[test]
    fn trace_rejects_ragged_bytes() {
        assert!(Trace::from_bytes(&[0, 0, 0], false).is_err());
    }
}
