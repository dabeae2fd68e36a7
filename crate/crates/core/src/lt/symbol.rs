//! LT symbol generation and the 12-byte symbol wire layout.

use super::distribution::DegreeDistribution;
use crate::error::{Error, Result};
use crate::rng::SplitMix64;

/// Bytes per symbol on the wire: 8-byte seed then 4-byte payload, both
/// big-endian.
pub const WIRE_LEN: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MessageSymbol {
    pub index: u32,
    pub payload: u32,
}

/// An encoded symbol. The neighbour set is not stored; it is regenerated
/// from `seed` and the degree distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EncodedSymbol {
    pub seed: u64,
    pub payload: u32,
    pub degree: u32,
}

/// Draws the degree and the neighbour set for `seed`.
///
/// The generator is seeded with `seed`; the first draw picks the degree, the
/// following draws pick indices uniformly in `0..k`, rejecting repeats.
pub fn neighbors(seed: u64, dist: &DegreeDistribution) -> Vec<u32> {
    let k = dist.k();
    let mut rng = SplitMix64::new(seed);
    let degree = dist.sample(&mut rng);
    let mut out: Vec<u32> = Vec::with_capacity(degree);
    if degree <= 64 {
        while out.len() < degree {
            let idx = rng.below(k as u64) as u32;
            if !out.contains(&idx) {
                out.push(idx);
            }
        }
    } else {
        let mut taken = vec![false; k];
        while out.len() < degree {
            let idx = rng.below(k as u64) as usize;
            if !taken[idx] {
                taken[idx] = true;
                out.push(idx as u32);
            }
        }
    }
    out
}

/// Encodes one symbol from a complete message. Pure in `(message, dist, seed)`.
pub fn encode_symbol(message: &[u32], dist: &DegreeDistribution, seed: u64) -> EncodedSymbol {
    debug_assert_eq!(message.len(), dist.k());
    let nbrs = neighbors(seed, dist);
    let payload = nbrs.iter().fold(0u32, |acc, &i| acc ^ message[i as usize]);
    EncodedSymbol {
        seed,
        payload,
        degree: nbrs.len() as u32,
    }
}

/// Fountain encoder over a fixed message. Seeds are handed out sequentially
/// from `base_seed`.
#[derive(Debug, Clone)]
pub struct LtEncoder {
    message: Vec<u32>,
    dist: DegreeDistribution,
    next_seed: u64,
}

impl LtEncoder {
    pub fn new(message: Vec<u32>, dist: DegreeDistribution, base_seed: u64) -> Result<Self> {
        if message.len() != dist.k() {
            return Err(Error::InvalidParameter(format!(
                "message has {} symbols, distribution expects k = {}",
                message.len(),
                dist.k()
            )));
        }
        Ok(Self {
            message,
            dist,
            next_seed: base_seed,
        })
    }

    pub fn from_symbols(symbols: &[MessageSymbol], dist: DegreeDistribution, base_seed: u64) -> Result<Self> {
        let mut message = vec![None; dist.k()];
        for s in symbols {
            let slot = message.get_mut(s.index as usize).ok_or_else(|| {
                Error::InvalidParameter(format!("message index {} out of range", s.index))
            })?;
            if slot.replace(s.payload).is_some() {
                return Err(Error::InvalidParameter(format!("duplicate message index {}", s.index)));
            }
        }
        let message = message
            .into_iter()
            .enumerate()
            .map(|(i, p)| p.ok_or_else(|| Error::InvalidParameter(format!("message index {i} missing"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(message, dist, base_seed)
    }

    pub fn message(&self) -> &[u32] {
        &self.message
    }

    pub fn distribution(&self) -> &DegreeDistribution {
        &self.dist
    }

    pub fn symbol(&self, seed: u64) -> EncodedSymbol {
        encode_symbol(&self.message, &self.dist, seed)
    }
}

impl Iterator for LtEncoder {
    type Item = EncodedSymbol;

    fn next(&mut self) -> Option<EncodedSymbol> {
        let sym = self.symbol(self.next_seed);
        self.next_seed = self.next_seed.wrapping_add(1);
        Some(sym)
    }
}

impl EncodedSymbol {
    pub fn to_wire(&self) -> [u8; WIRE_LEN] {
        let mut out = [0u8; WIRE_LEN];
        out[..8].copy_from_slice(&self.seed.to_be_bytes());
        out[8..].copy_from_slice(&self.payload.to_be_bytes());
        out
    }

    /// Parses a wire record; the degree is regenerated from the seed.
    pub fn from_wire(bytes: &[u8], dist: &DegreeDistribution) -> Result<Self> {
        if bytes.len() != WIRE_LEN {
            return Err(Error::Parse(format!(
                "symbol record must be {WIRE_LEN} bytes, got {}",
                bytes.len()
            )));
        }
        let seed = u64::from_be_bytes(bytes[..8].try_into().unwrap());
        let payload = u32::from_be_bytes(bytes[8..].try_into().unwrap());
        let degree = dist.sample(&mut SplitMix64::new(seed)) as u32;
        Ok(Self { seed, payload, degree })
    }
}
