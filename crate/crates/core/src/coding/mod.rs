//! GPRS channel coding schemes CS-1 to CS-4.
//!
//! Transmit chain per block: `USF (zeros) | data | BCS | tail` →
//! rate-1/2 convolutional code → puncturing → interleaving → 456 channel
//! bits. CS-4 skips the convolutional code and tail. The receive chain
//! mirrors it with a soft-decision Viterbi decoder and a BCS check.

mod bcs;
mod convolutional;
mod interleave;
mod puncture;

use std::fmt;
use std::str::FromStr;

pub use bcs::{bytes_to_bits, CyclicCheck, CRC16, FIRE40};
pub use convolutional::{conv_encode, viterbi_decode, MEMORY};
pub use interleave::{max_deinterleaved_run, Interleaver, BLOCK_BITS, BURST_BITS};
pub use puncture::PuncturePattern;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    Cs1,
    Cs2,
    Cs3,
    Cs4,
}

/// Per-scheme field sizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SchemeParams {
    pub usf_bits: usize,
    pub data_bits: usize,
    pub bcs_bits: usize,
    pub tail_bits: usize,
    /// Coded bits before puncturing.
    pub coded_bits: usize,
    pub punctured_bits: usize,
}

impl SchemeParams {
    /// Bits entering the convolutional encoder (or the channel, for CS-4).
    pub fn info_bits(&self) -> usize {
        self.usf_bits + self.data_bits + self.bcs_bits + self.tail_bits
    }

    pub fn channel_bits(&self) -> usize {
        self.coded_bits - self.punctured_bits
    }
}

impl Scheme {
    pub const ALL: [Scheme; 4] = [Scheme::Cs1, Scheme::Cs2, Scheme::Cs3, Scheme::Cs4];

    pub const fn params(self) -> SchemeParams {
        match self {
            Scheme::Cs1 => SchemeParams {
                usf_bits: 3,
                data_bits: 181,
                bcs_bits: 40,
                tail_bits: 4,
                coded_bits: 456,
                punctured_bits: 0,
            },
            Scheme::Cs2 => SchemeParams {
                usf_bits: 6,
                data_bits: 268,
                bcs_bits: 16,
                tail_bits: 4,
                coded_bits: 588,
                punctured_bits: 132,
            },
            Scheme::Cs3 => SchemeParams {
                usf_bits: 6,
                data_bits: 312,
                bcs_bits: 16,
                tail_bits: 4,
                coded_bits: 676,
                punctured_bits: 220,
            },
            Scheme::Cs4 => SchemeParams {
                usf_bits: 12,
                data_bits: 428,
                bcs_bits: 16,
                tail_bits: 0,
                coded_bits: 456,
                punctured_bits: 0,
            },
        }
    }

    /// Nominal code rate as listed for the scheme (numerator, denominator).
    pub const fn nominal_rate(self) -> (u32, u32) {
        match self {
            Scheme::Cs1 => (1, 2),
            Scheme::Cs2 => (2, 3),
            Scheme::Cs3 => (3, 4),
            Scheme::Cs4 => (1, 1),
        }
    }

    /// Fraction of the 456 channel bits carrying data.
    pub fn data_rate(self) -> f64 {
        self.params().data_bits as f64 / BLOCK_BITS as f64
    }

    pub fn check(self) -> CyclicCheck {
        match self {
            Scheme::Cs1 => FIRE40,
            _ => CRC16,
        }
    }

    pub fn is_convolutional(self) -> bool {
        self != Scheme::Cs4
    }

    pub fn default_puncturing(self) -> PuncturePattern {
        match self {
            Scheme::Cs2 => PuncturePattern::gsm_cs2(),
            Scheme::Cs3 => PuncturePattern::gsm_cs3(),
            s => PuncturePattern::none(s.params().coded_bits),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Cs1 => "CS1",
            Scheme::Cs2 => "CS2",
            Scheme::Cs3 => "CS3",
            Scheme::Cs4 => "CS4",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().replace('-', "").as_str() {
            "CS1" => Ok(Scheme::Cs1),
            "CS2" => Ok(Scheme::Cs2),
            "CS3" => Ok(Scheme::Cs3),
            "CS4" => Ok(Scheme::Cs4),
            _ => Err(Error::InvalidParameter(format!("unknown coding scheme '{s}'"))),
        }
    }
}

/// Prepends the zero USF field and appends the scheme's block check.
pub fn attach_bcs(data: &[u8], scheme: Scheme) -> Result<Vec<u8>> {
    let p = scheme.params();
    if data.len() != p.data_bits {
        return Err(Error::LengthMismatch {
            expected: p.data_bits,
            actual: data.len(),
        });
    }
    let mut block = Vec::with_capacity(p.usf_bits + p.data_bits + p.bcs_bits);
    block.resize(p.usf_bits, 0);
    block.extend_from_slice(data);
    let parity = scheme.check().parity_bits(&block);
    block.extend(parity);
    Ok(block)
}

/// Checks a `USF | data | BCS` block.
pub fn check_bcs(block: &[u8], scheme: Scheme) -> bool {
    let p = scheme.params();
    block.len() == p.usf_bits + p.data_bits + p.bcs_bits && scheme.check().check(block)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CodedBlock {
    pub scheme: Scheme,
    /// `USF | data | BCS | tail`.
    pub info_bits: Vec<u8>,
    /// 456 bits in channel order.
    pub channel_bits: Vec<u8>,
}

/// Outcome of decoding one received block.
#[derive(Debug, Clone, PartialEq)]
pub struct DecodedBlock {
    pub data: Vec<u8>,
    pub bcs_ok: bool,
}

/// A coding scheme together with its puncturing pattern and interleaver.
#[derive(Debug, Clone)]
pub struct Codec {
    scheme: Scheme,
    puncturing: PuncturePattern,
    interleaver: Interleaver,
}

impl Codec {
    pub fn new(scheme: Scheme) -> Self {
        Self {
            scheme,
            puncturing: scheme.default_puncturing(),
            interleaver: Interleaver::gsm(),
        }
    }

    pub fn with_tables(scheme: Scheme, puncturing: PuncturePattern, interleaver: Interleaver) -> Result<Self> {
        let p = scheme.params();
        if puncturing.coded_len() != p.coded_bits || puncturing.punctured_len() != BLOCK_BITS {
            return Err(Error::InvalidParameter(format!(
                "{scheme} needs a pattern taking {} bits to {BLOCK_BITS}",
                p.coded_bits
            )));
        }
        Ok(Self {
            scheme,
            puncturing,
            interleaver,
        })
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn interleaver(&self) -> &Interleaver {
        &self.interleaver
    }

    pub fn puncturing(&self) -> &PuncturePattern {
        &self.puncturing
    }

    pub fn encode(&self, data: &[u8]) -> Result<CodedBlock> {
        let mut info = attach_bcs(data, self.scheme)?;
        let coded = if self.scheme.is_convolutional() {
            info.resize(info.len() + self.scheme.params().tail_bits, 0);
            conv_encode(&info)
        } else {
            info.clone()
        };
        let punctured = self.puncturing.puncture(&coded)?;
        let channel_bits = self.interleaver.interleave(&punctured)?;
        Ok(CodedBlock {
            scheme: self.scheme,
            info_bits: info,
            channel_bits,
        })
    }

    /// Decodes 456 soft values in channel order.
    pub fn decode(&self, soft: &[f64]) -> Result<DecodedBlock> {
        let p = self.scheme.params();
        let deinterleaved = self.interleaver.deinterleave(soft)?;
        let info = if self.scheme.is_convolutional() {
            let full = self.puncturing.depuncture(&deinterleaved)?;
            let mut bits = viterbi_decode(&full, p.tail_bits > 0);
            bits.truncate(p.usf_bits + p.data_bits + p.bcs_bits);
            bits
        } else {
            deinterleaved.iter().map(|&v| u8::from(v > 0.0)).collect()
        };
        let bcs_ok = check_bcs(&info, self.scheme);
        Ok(DecodedBlock {
            data: info[p.usf_bits..p.usf_bits + p.data_bits].to_vec(),
            bcs_ok,
        })
    }
}
