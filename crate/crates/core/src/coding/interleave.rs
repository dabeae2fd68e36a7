//! Block-diagonal interleaving of the 456 coded bits over four bursts.
//!
//! Coded bit `k` goes to burst `B = k mod 4`, position
//! `j = 2 * ((49 k) mod 57) + ((k mod 8) div 4)`, i.e. channel position
//! `114 B + j`. The frozen table is `fixtures/interleaver.txt`.

use crate::error::{Error, Result};

pub const BLOCK_BITS: usize = 456;
pub const BURST_BITS: usize = 114;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interleaver {
    // coded index -> channel index
    forward: Vec<usize>,
}

impl Interleaver {
    pub fn gsm() -> Self {
        let forward = (0..BLOCK_BITS)
            .map(|k| {
                let burst = k % 4;
                let j = 2 * ((49 * k) % 57) + ((k % 8) / 4);
                BURST_BITS * burst + j
            })
            .collect();
        Self { forward }
    }

    /// Builds an interleaver from a table mapping coded index to channel index.
    pub fn from_table(forward: Vec<usize>) -> Result<Self> {
        if forward.len() != BLOCK_BITS {
            return Err(Error::LengthMismatch {
                expected: BLOCK_BITS,
                actual: forward.len(),
            });
        }
        let mut seen = vec![false; BLOCK_BITS];
        for &c in &forward {
            if c >= BLOCK_BITS || std::mem::replace(&mut seen[c], true) {
                return Err(Error::InvalidParameter(
                    "interleaver table is not a permutation of 0..456".into(),
                ));
            }
        }
        Ok(Self { forward })
    }

    pub fn table(&self) -> &[usize] {
        &self.forward
    }

    pub fn interleave<T: Copy + Default>(&self, coded: &[T]) -> Result<Vec<T>> {
        check_len(coded.len())?;
        let mut out = vec![T::default(); BLOCK_BITS];
        for (k, &c) in self.forward.iter().enumerate() {
            out[c] = coded[k];
        }
        Ok(out)
    }

    pub fn deinterleave<T: Copy>(&self, channel: &[T]) -> Result<Vec<T>> {
        check_len(channel.len())?;
        Ok(self.forward.iter().map(|&c| channel[c]).collect())
    }
}

impl Default for Interleaver {
    fn default() -> Self {
        Self::gsm()
    }
}

fn check_len(len: usize) -> Result<()> {
    if len != BLOCK_BITS {
        return Err(Error::LengthMismatch {
            expected: BLOCK_BITS,
            actual: len,
        });
    }
    Ok(())
}

/// Longest run of consecutive coded positions hit when the channel-order
/// window `start..start + len` is erased.
pub fn max_deinterleaved_run(il: &Interleaver, start: usize, len: usize) -> usize {
    let hit: Vec<bool> = il
        .table()
        .iter()
        .map(|&c| c >= start && c < start + len)
        .collect();
    let mut best = 0;
    let mut run = 0;
    for h in hit {
        run = if h { run + 1 } else { 0 };
        best = best.max(run);
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    #[test]
    fn gsm_table_is_bijective() {
        assert!(Interleaver::from_table(Interleaver::gsm().table().to_vec()).is_ok());
    }

    #[test]
    fn first_entries() {
        let t = Interleaver::gsm();
        assert_eq!(&t.table()[..8], &[0, 212, 310, 408, 51, 149, 247, 345]);
    }

    #[test]
    fn round_trip() {
        let il = Interleaver::gsm();
        let mut rng = SplitMix64::new(8);
        let x: Vec<u8> = (0..BLOCK_BITS).map(|_| (rng.next_u64() & 1) as u8).collect();
        assert_eq!(il.deinterleave(&il.interleave(&x).unwrap()).unwrap(), x);
    }

    #[test]
    fn bursts_are_spread() {
        let il = Interleaver::gsm();
        let worst = (0..=BLOCK_BITS - 57)
            .map(|s| max_deinterleaved_run(&il, s, 57))
            .max()
            .unwrap();
        assert!(worst <= 2, "worst run {worst}");
        for burst in 0..4 {
            assert_eq!(max_deinterleaved_run(&il, burst * BURST_BITS, BURST_BITS), 1);
        }
    }

    #[test]
    fn rejects_non_permutation() {
        let mut t = Interleaver::gsm().table().to_vec();
        t[1] = t[0];
        assert!(Interleaver::from_table(t).is_err());
        assert!(Interleaver::from_table(vec![0; 10]).is_err());
    }
}
