//! Incremental peeling decoder.
//!
//! Each ingested symbol has its already-recovered neighbours XORed out
//! immediately. A residual of degree one joins the ripple, and the ripple is
//! drained to exhaustion before `ingest` returns, so the recovered count after
//! every symbol is exactly what a batch peeling pass over the same symbols
//! would produce.

use std::collections::VecDeque;

use super::distribution::DegreeDistribution;
use super::symbol::{neighbors, EncodedSymbol};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
struct Pending {
    payload: u32,
    neighbors: Vec<u32>,
    remaining: usize,
    live: bool,
}

/// Progress snapshot: recovered and consumed counts plus the decoding
/// inefficiency `consumed / k`, which is only defined once every message
/// symbol is recovered.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Progress {
    pub recovered: usize,
    pub consumed: usize,
    pub inefficiency: Option<f64>,
}

impl Progress {
    pub fn recovery_fraction(&self, k: usize) -> f64 {
        self.recovered as f64 / k as f64
    }
}

#[derive(Debug, Clone)]
pub struct PeelingDecoder {
    k: usize,
    recovered: Vec<Option<u32>>,
    recovered_count: usize,
    pending: Vec<Pending>,
    // message index -> pending symbols still waiting on it
    waiting: Vec<Vec<usize>>,
    ripple: VecDeque<(u32, u32)>,
    consumed: usize,
}

impl PeelingDecoder {
    pub fn new(k: usize) -> Self {
        Self {
            k,
            recovered: vec![None; k],
            recovered_count: 0,
            pending: Vec::new(),
            waiting: vec![Vec::new(); k],
            ripple: VecDeque::new(),
            consumed: 0,
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Adds one encoded symbol and peels as far as possible. Returns the
    /// number of message symbols newly recovered by this call.
    pub fn ingest(&mut self, sym: &EncodedSymbol, dist: &DegreeDistribution) -> Result<usize> {
        if dist.k() != self.k {
            return Err(Error::ProvenanceMismatch(format!(
                "distribution has k = {}, decoder has k = {}",
                dist.k(),
                self.k
            )));
        }
        let nbrs = neighbors(sym.seed, dist);
        if nbrs.len() != sym.degree as usize {
            return Err(Error::ProvenanceMismatch(format!(
                "seed {} regenerates degree {}, symbol claims {}",
                sym.seed,
                nbrs.len(),
                sym.degree
            )));
        }
        self.consumed += 1;
        Ok(self.ingest_with_neighbors(sym.payload, nbrs))
    }

    /// Adds a symbol whose neighbour set is already known.
    pub fn ingest_with_neighbors(&mut self, payload: u32, nbrs: Vec<u32>) -> usize {
        let before = self.recovered_count;
        let mut residual = payload;
        let mut unresolved = Vec::with_capacity(nbrs.len());
        for &i in &nbrs {
            match self.recovered[i as usize] {
                Some(v) => residual ^= v,
                None => unresolved.push(i),
            }
        }
        match unresolved.len() {
            0 => return 0,
            1 => self.ripple.push_back((unresolved[0], residual)),
            n => {
                let id = self.pending.len();
                for &i in &unresolved {
                    self.waiting[i as usize].push(id);
                }
                self.pending.push(Pending {
                    payload: residual,
                    neighbors: unresolved,
                    remaining: n,
                    live: true,
                });
            }
        }
        self.peel();
        self.recovered_count - before
    }

    fn peel(&mut self) {
        while let Some((idx, value)) = self.ripple.pop_front() {
            if self.recovered[idx as usize].is_some() {
                continue;
            }
            self.recovered[idx as usize] = Some(value);
            self.recovered_count += 1;
            for id in std::mem::take(&mut self.waiting[idx as usize]) {
                let p = &mut self.pending[id];
                if !p.live {
                    continue;
                }
                p.payload ^= value;
                p.remaining -= 1;
                match p.remaining {
                    0 => p.live = false,
                    1 => {
                        p.live = false;
                        let last = p
                            .neighbors
                            .iter()
                            .copied()
                            .find(|&n| self.recovered[n as usize].is_none());
                        if let Some(last) = last {
                            self.ripple.push_back((last, p.payload));
                        }
                    }
                    _ => {}
                }
            }
        }
        if self.is_complete() {
            self.pending.clear();
        }
    }

    pub fn is_complete(&self) -> bool {
        self.recovered_count == self.k
    }

    pub fn recovered_count(&self) -> usize {
        self.recovered_count
    }

    pub fn consumed(&self) -> usize {
        self.consumed
    }

    pub fn recovered(&self, index: usize) -> Option<u32> {
        self.recovered.get(index).copied().flatten()
    }

    /// The decoded message, if complete.
    pub fn message(&self) -> Option<Vec<u32>> {
        self.recovered.iter().copied().collect()
    }

    pub fn progress(&self) -> Progress {
        Progress {
            recovered: self.recovered_count,
            consumed: self.consumed,
            inefficiency: self
                .is_complete()
                .then(|| self.consumed as f64 / self.k as f64),
        }
    }

    /// Number of symbols still waiting on two or more unknowns.
    pub fn pending_count(&self) -> usize {
        self.pending.iter().filter(|p| p.live).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lt::symbol::{encode_symbol, LtEncoder};

    fn dist(k: usize) -> DegreeDistribution {
        DegreeDistribution::robust_soliton(k, 0.1, 0.5).unwrap()
    }

    #[test]
    fn fresh_state() {
        let dec = PeelingDecoder::new(10);
        let p = dec.progress();
        assert_eq!((p.recovered, p.consumed, p.inefficiency), (0, 0, None));
    }

    #[test]
    fn smallest_chain_reaction() {
        let mut dec = PeelingDecoder::new(2);
        assert_eq!(dec.ingest_with_neighbors(0xAA, vec![0]), 1);
        assert_eq!(dec.recovered(0), Some(0xAA));
        assert_eq!(dec.ingest_with_neighbors(0xAA ^ 0x55, vec![0, 1]), 1);
        assert_eq!(dec.recovered(1), Some(0x55));
        assert!(dec.is_complete());
    }

    #[test]
    fn chain_reaction_out_of_order() {
        let mut dec = PeelingDecoder::new(3);
        dec.ingest_with_neighbors(1 ^ 2, vec![0, 1]);
        dec.ingest_with_neighbors(2 ^ 4, vec![1, 2]);
        assert_eq!(dec.recovered_count(), 0);
        assert_eq!(dec.ingest_with_neighbors(4, vec![2]), 3);
        assert_eq!(dec.message(), Some(vec![1, 2, 4]));
    }

    #[test]
    fn duplicate_symbol_only_bumps_consumed() {
        let d = dist(30);
        let msg: Vec<u32> = (0..30).map(|i| i * 31 + 5).collect();
        let mut dec = PeelingDecoder::new(30);
        let sym = encode_symbol(&msg, &d, 11);
        dec.ingest(&sym, &d).unwrap();
        let recovered = dec.recovered_count();
        let pending = dec.pending_count();
        dec.ingest(&sym, &d).unwrap();
        assert_eq!(dec.recovered_count(), recovered);
        assert_eq!(dec.consumed(), 2);
        // a duplicate of a degree >= 2 symbol adds an identical equation
        assert!(dec.pending_count() <= pending + 1);
    }

    #[test]
    fn rejects_mismatched_k() {
        let mut dec = PeelingDecoder::new(10);
        let d = dist(11);
        let sym = encode_symbol(&vec![0; 11], &d, 0);
        assert!(matches!(dec.ingest(&sym, &d), Err(Error::ProvenanceMismatch(_))));
        assert_eq!(dec.consumed(), 0);
    }

    #[test]
    fn rejects_wrong_degree() {
        let d = dist(10);
        let mut sym = encode_symbol(&vec![0; 10], &d, 0);
        sym.degree += 1;
        let mut dec = PeelingDecoder::new(10);
        assert!(dec.ingest(&sym, &d).is_err());
    }

    #[test]
    fn exact_k_symbols_gives_unit_inefficiency() {
        let mut dec = PeelingDecoder::new(3);
        let d = dist(3);
        // find three degree-1 symbols covering all indices
        let msg = vec![10, 20, 30];
        let mut seen = [false; 3];
        let mut seed = 0;
        while seen.iter().any(|s| !s) {
            let n = neighbors(seed, &d);
            if n.len() == 1 && !seen[n[0] as usize] {
                seen[n[0] as usize] = true;
                dec.ingest(&encode_symbol(&msg, &d, seed), &d).unwrap();
            }
            seed += 1;
        }
        assert_eq!(dec.progress().inefficiency, Some(1.0));
        assert_eq!(dec.message(), Some(msg));
    }

    #[test]
    fn decodes_random_message() {
        let k = 500;
        let d = dist(k);
        let msg: Vec<u32> = (0..k as u32).map(|i| i.wrapping_mul(0x9E37_79B9)).collect();
        let enc = LtEncoder::new(msg.clone(), d.clone(), 1000).unwrap();
        let mut dec = PeelingDecoder::new(k);
        for sym in enc.take(3 * k) {
            dec.ingest(&sym, &d).unwrap();
            if dec.is_complete() {
                break;
            }
        }
        assert_eq!(dec.message(), Some(msg));
    }
}
