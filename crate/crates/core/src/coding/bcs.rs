//! Block check sequences.
//!
//! Both checks are systematic cyclic codes computed MSB-first with a zero
//! initial register, no reflection and no final inversion, so an all-zero
//! message has an all-zero check field:
//!
//! | check  | width | generator                                   | poly (w/o x^w) |
//! |--------|-------|---------------------------------------------|----------------|
//! | CRC-16 | 16    | x^16 + x^12 + x^5 + 1                        | `0x1021`       |
//! | Fire   | 40    | (x^23 + 1)(x^17 + x^3 + 1)                   | `0x0004820009` |
//!
//! The CRC-16 convention is CRC-16/XMODEM: the bytes `"123456789"` give
//! `0x31C3`. The Fire code is used for detection only.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CyclicCheck {
    pub width: u32,
    pub poly: u64,
}

pub const CRC16: CyclicCheck = CyclicCheck {
    width: 16,
    poly: 0x1021,
};

pub const FIRE40: CyclicCheck = CyclicCheck {
    width: 40,
    poly: 0x00_0482_0009,
};

impl CyclicCheck {
    fn mask(&self) -> u64 {
        if self.width == 64 {
            u64::MAX
        } else {
            (1u64 << self.width) - 1
        }
    }

    /// Remainder of `m(x) * x^width` modulo the generator.
    pub fn remainder(&self, bits: &[u8]) -> u64 {
        let top = self.width - 1;
        let mask = self.mask();
        let mut reg = 0u64;
        for &b in bits {
            let feedback = ((reg >> top) & 1) ^ (b as u64 & 1);
            reg = (reg << 1) & mask;
            if feedback == 1 {
                reg ^= self.poly;
            }
        }
        reg
    }

    /// The check field as bits, highest-order coefficient first.
    pub fn parity_bits(&self, bits: &[u8]) -> Vec<u8> {
        let rem = self.remainder(bits);
        (0..self.width)
            .rev()
            .map(|i| ((rem >> i) & 1) as u8)
            .collect()
    }

    /// True when `block` (message followed by check field) is a codeword.
    pub fn check(&self, block: &[u8]) -> bool {
        let w = self.width as usize;
        if block.len() < w {
            return false;
        }
        self.remainder(block) == 0
    }
}

/// Expands bytes to bits, most significant bit first.
pub fn bytes_to_bits(bytes: &[u8]) -> Vec<u8> {
    bytes
        .iter()
        .flat_map(|b| (0..8).rev().map(move |i| (b >> i) & 1))
        .collect()
}
